//! Run configuration: a TOML document with strict keys plus `--set` overrides.

use std::path::PathBuf;

use collective_bath::oracle::{InitialCorrelations, DEFAULT_MODES, DEFAULT_W_MAX_OVER_GAMMA};
use collective_bath::{BathStatistics, ModelParams, QuadratureSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Evolve,
    Scan,
    OracleCompare,
    KernelDump,
}

impl Command {
    pub fn label(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Scan => "scan",
            Command::OracleCompare => "oracle-compare",
            Command::KernelDump => "kernel-dump",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    pub model: ModelParams,
    pub quadrature: QuadratureSpec,
    pub grid: GridConfig,
    pub output: OutputConfig,
    pub oracle: OracleConfig,
    /// Named parameter overrides; each one produces its own output file.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Variant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub time: TimeGrid,
    pub scan: ScanGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    /// Fine steps near t = 0 that widen to a uniform step.
    #[default]
    Adaptive,
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGrid {
    /// Defaults depend on the command.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    pub points: usize,
    pub spacing: Spacing,
    /// Explicit sample times; overrides everything else when non-empty.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            t_max: None,
            points: 201,
            spacing: Spacing::Adaptive,
            times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanVariable {
    Temperature,
    G0,
    Mu,
}

impl ScanVariable {
    pub fn label(self) -> &'static str {
        match self {
            ScanVariable::Temperature => "temperature",
            ScanVariable::G0 => "g0",
            ScanVariable::Mu => "mu",
        }
    }

    pub fn apply(self, params: &mut ModelParams, value: f64) {
        match self {
            ScanVariable::Temperature => params.temperature = value,
            ScanVariable::G0 => params.g0 = value,
            ScanVariable::Mu => params.mu = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanGrid {
    pub variable: ScanVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// `adaptive` is treated as linear.
    pub spacing: Spacing,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            variable: ScanVariable::Temperature,
            from: 0.05,
            to: 5.0,
            points: 40,
            spacing: Spacing::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub enabled: bool,
    pub modes: usize,
    pub w_max_over_gamma: f64,
    pub initial: InitialCorrelations,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enabled: false,
            modes: DEFAULT_MODES,
            w_max_over_gamma: DEFAULT_W_MAX_OVER_GAMMA,
            initial: InitialCorrelations::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistics: Option<BathStatistics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<f64>,
}

impl Variant {
    pub fn apply(&self, base: &ModelParams) -> ModelParams {
        let mut p = *base;
        let fields = [
            (&mut p.omega, self.omega),
            (&mut p.g0, self.g0),
            (&mut p.gamma, self.gamma),
            (&mut p.temperature, self.temperature),
            (&mut p.mu, self.mu),
            (&mut p.n0, self.n0),
        ];
        for (slot, v) in fields {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(s) = self.statistics {
            p.statistics = s;
        }
        p
    }
}

impl RunConfig {
    /// Strict parse; the error text carries the line and the offending key.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }

    /// Parses `text` (possibly empty) and applies `key=value` overrides in order.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        // First pass only for diagnostics against the file itself.
        Self::from_toml(text)?;
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: RunConfig =
            toml::Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| {
                    CliError::Config(format!("after --set overrides: {}", e.message()))
                })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.model
            .validate()
            .map_err(|e| CliError::Config(format!("model: {e}")))?;
        self.quadrature
            .validate()
            .map_err(|e| CliError::Config(format!("quadrature: {e}")))?;
        let time = &self.grid.time;
        if let Some(t) = time.t_max {
            if !(t > 0.0) || !t.is_finite() {
                return bad(format!("grid.time.t_max must be positive, got {t}"));
            }
        }
        if time.points < 2 {
            return bad("grid.time.points must be at least 2".into());
        }
        if time.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return bad("grid.time.times must be finite and non-negative".into());
        }
        let scan = &self.grid.scan;
        if scan.points < 1 || !scan.from.is_finite() || !scan.to.is_finite() {
            return bad("grid.scan needs finite bounds and at least one point".into());
        }
        if scan.spacing == Spacing::Log && !(scan.from > 0.0 && scan.to > 0.0) {
            return bad("grid.scan with log spacing needs positive bounds".into());
        }
        if self.oracle.modes < 100 {
            return bad(format!(
                "oracle.modes must be at least 100, got {}",
                self.oracle.modes
            ));
        }
        if !(self.oracle.w_max_over_gamma >= 10.0) || !self.oracle.w_max_over_gamma.is_finite() {
            return bad("oracle.w_max_over_gamma must be finite and at least 10".into());
        }
        let mut names = std::collections::HashSet::new();
        for v in &self.variants {
            let safe = !v.name.is_empty()
                && v.name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
            if !safe {
                return bad(format!(
                    "variant name {:?} must be non-empty and use only [A-Za-z0-9._-]",
                    v.name
                ));
            }
            if !names.insert(v.name.as_str()) {
                return bad(format!("duplicate variant name {:?}", v.name));
            }
            v.apply(&self.model)
                .validate()
                .map_err(|e| CliError::Config(format!("variant {:?}: {e}", v.name)))?;
        }
        if !self.variants.is_empty() && self.output.path.is_none() {
            return bad("variants need output.path to name their files".into());
        }
        Ok(())
    }
}

/// `a.b.c=value`; the value is read as a TOML literal, or as a bare string
/// when it does not parse as one.
fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), CliError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {item:?}")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("--set: malformed key {key:?}")));
    }
    let (last, path) = parts.split_last().expect("split yields one part");
    let mut cursor = table;
    for part in path {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set {key}: `{part}` is not a table")))?;
    }
    cursor.insert(last.to_string(), value);
    Ok(())
}

/// `lo..=hi` in `points` steps.
pub fn spaced(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| {
            let s = k as f64 / last;
            match spacing {
                Spacing::Log => lo * (hi / lo).powf(s),
                _ => lo + (hi - lo) * s,
            }
        })
        .collect()
}
