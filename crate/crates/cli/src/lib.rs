//! Configuration-driven front end for `collective-bath`: trajectories,
//! parameter scans, oracle comparisons and kernel dumps as CSV or JSON tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{Command, RunConfig};
pub use error::CliError;
pub use table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "collective-bath",
    version,
    about = "Occupation dynamics of a collective mode in a fermionic or bosonic bath"
)]
pub struct Cli {
    /// Worker threads for time points and scan points (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Repeat for more log output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// n(t), its weak-coupling form, λ(t), D±(t) on a time grid.
    Evolve(RunArgs),
    /// Long-time values over a temperature, coupling or chemical-potential grid.
    Scan(RunArgs),
    /// Closed-form n(t) next to the discretized-bath propagation.
    OracleCompare(RunArgs),
    /// Memory kernel K(t) and its running integral.
    KernelDump(RunArgs),
}

impl CommandArgs {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            CommandArgs::Evolve(a) => (Command::Evolve, a),
            CommandArgs::Scan(a) => (Command::Scan, a),
            CommandArgs::OracleCompare(a) => (Command::OracleCompare, a),
            CommandArgs::KernelDump(a) => (Command::KernelDump, a),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML run configuration; defaults apply to anything left out.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override one config key, e.g. `--set model.g0=0.05`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Add the discretized-bath column, e.g. `--with-oracle N=4000`.
    #[arg(long, value_name = "N=MODES")]
    pub with_oracle: Option<String>,
}

/// Builds the effective config for `command` from the file, `--set` items and flags.
pub fn resolve_config(command: Command, args: &RunArgs) -> Result<RunConfig, CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => String::new(),
    };
    let mut config = RunConfig::load(&text, &args.set).map_err(|e| match (e, &args.config) {
        (CliError::Config(msg), Some(path)) => {
            CliError::Config(format!("{}: {msg}", path.display()))
        }
        (e, _) => e,
    })?;
    config.command = Some(command);
    if let Some(f) = args.format {
        config.output.format = match f {
            FormatArg::Csv => config::Format::Csv,
            FormatArg::Json => config::Format::Json,
        };
    }
    if let Some(path) = &args.output {
        config.output.path = Some(path.clone());
    }
    if let Some(spec) = &args.with_oracle {
        let digits = spec.strip_prefix("N=").unwrap_or(spec);
        config.oracle.modes = digits.parse().map_err(|_| {
            CliError::Config(format!("--with-oracle expects N=<modes>, got {spec:?}"))
        })?;
        config.oracle.enabled = true;
    }
    config.validate()?;
    Ok(config)
}

/// Runs one configured command and writes its tables; returns the files written.
pub fn execute(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let command = config
        .command
        .ok_or_else(|| CliError::Config("no command given".into()))?;
    let echo = config.to_toml();
    let format = config.output.format;
    if config.variants.is_empty() {
        let table = commands::run_command(command, &config.model, config)?;
        return match &config.output.path {
            Some(path) => {
                write_file(path, &table, format, &echo)?;
                Ok(vec![path.clone()])
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                table.write(format, &echo, &mut lock)?;
                Ok(Vec::new())
            }
        };
    }
    let base = config
        .output
        .path
        .as_ref()
        .expect("validated: variants need a path");
    let mut written = Vec::new();
    for v in &config.variants {
        let params = v.apply(&config.model);
        let mut table = commands::run_command(command, &params, config)?;
        table
            .meta
            .insert(2, ("variant".to_string(), v.name.clone().into()));
        let path = variant_path(base, &v.name, format.extension());
        write_file(&path, &table, format, &echo)?;
        written.push(path);
    }
    Ok(written)
}

/// `dir/stem.ext` becomes `dir/stem-name.ext`.
pub fn variant_path(base: &Path, name: &str, default_ext: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = base
        .extension()
        .and_then(|s| s.to_str())
        .unwrap_or(default_ext);
    base.with_file_name(format!("{stem}-{name}.{ext}"))
}

fn write_file(
    path: &Path,
    table: &Table,
    format: config::Format,
    echo: &str,
) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    table.write(format, echo, &mut out)?;
    out.flush().map_err(io)
}

/// Entry point shared by the binary: resolve, size the thread pool, execute.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let (command, args) = cli.command.split();
    let config = resolve_config(command, args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    pool.install(|| execute(&config))
}
