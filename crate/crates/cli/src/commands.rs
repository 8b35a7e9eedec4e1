//! The four table-producing commands.

use collective_bath::model::BathStatistics;
use collective_bath::observables::{
    default_time_grid, diffusion, equilibrium_summary, friction, occupation,
    occupation_weak_coupling, statistics_ratio, NoiseOrdering,
};
use collective_bath::oracle::{discretize_bath, DiscreteBath, OneBodyState};
use collective_bath::response::{memory_kernel, memory_kernel_integral};
use collective_bath::{compute_roots, ModelParams};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{spaced, Command, RunConfig, Spacing, TimeGrid};
use crate::error::CliError;
use crate::table::Table;

type Row = Vec<Option<f64>>;

pub fn run_command(
    command: Command,
    params: &ModelParams,
    config: &RunConfig,
) -> Result<Table, CliError> {
    let mut table = match command {
        Command::Evolve => evolve(params, config)?,
        Command::Scan => scan(params, config)?,
        Command::OracleCompare => oracle_compare(params, config)?,
        Command::KernelDump => kernel_dump(params, config)?,
    };
    let mut meta = vec![
        (
            "tool".to_string(),
            json!(format!("collective-bath {}", env!("CARGO_PKG_VERSION"))),
        ),
        ("command".to_string(), json!(command.label())),
        ("model".to_string(), json!(params)),
        ("quadrature".to_string(), json!(config.quadrature)),
    ];
    meta.append(&mut table.meta);
    // CSV echoes this as TOML comment lines instead.
    meta.push(("config".to_string(), json!(config)));
    table.meta = meta;
    Ok(table)
}

/// Sample times for the trajectory commands.
pub fn time_samples(grid: &TimeGrid, params: &ModelParams, t_max: f64) -> Vec<f64> {
    if !grid.times.is_empty() {
        return grid.times.clone();
    }
    match grid.spacing {
        Spacing::Adaptive => default_time_grid(params, t_max),
        Spacing::Linear => spaced(0.0, t_max, grid.points, Spacing::Linear),
        Spacing::Log => {
            let mut t = vec![0.0];
            t.extend(spaced(t_max * 1e-4, t_max, grid.points - 1, Spacing::Log));
            t
        }
    }
}

fn build_bath(params: &ModelParams, config: &RunConfig) -> Result<DiscreteBath, CliError> {
    let w_max = config.oracle.w_max_over_gamma * params.gamma;
    discretize_bath(params, config.oracle.modes, w_max)
        .map_err(CliError::numerical("bath discretization"))
}

fn oracle_values(
    bath: &DiscreteBath,
    params: &ModelParams,
    config: &RunConfig,
    times: &[f64],
) -> Result<Vec<f64>, CliError> {
    let state = OneBodyState::new(bath, params, config.oracle.initial)
        .map_err(CliError::numerical("oracle diagonalization"))?;
    Ok(times.par_iter().map(|&t| state.occupation(t)).collect())
}

fn exact_values(
    params: &ModelParams,
    config: &RunConfig,
    times: &[f64],
) -> Result<Vec<f64>, CliError> {
    let roots = compute_roots(params).map_err(CliError::numerical("characteristic roots"))?;
    times
        .par_iter()
        .map(|&t| {
            occupation(t, params, &roots, &config.quadrature)
                .map_err(CliError::numerical(format!("exact occupation at t = {t}")))
        })
        .collect()
}

fn evolve(params: &ModelParams, config: &RunConfig) -> Result<Table, CliError> {
    let default_t = if params.g0 > 0.0 {
        10.0 / (params.g0 * params.omega)
    } else {
        50.0
    };
    let times = time_samples(
        &config.grid.time,
        params,
        config.grid.time.t_max.unwrap_or(default_t),
    );
    let roots = compute_roots(params).map_err(CliError::numerical("characteristic roots"))?;
    let spec = &config.quadrature;
    let rows: Vec<[f64; 6]> = times
        .par_iter()
        .map(|&t| {
            let n = occupation(t, params, &roots, spec)
                .map_err(CliError::numerical(format!("exact occupation at t = {t}")))?;
            let weak = occupation_weak_coupling(t, params, spec).map_err(CliError::numerical(
                format!("weak-coupling occupation at t = {t}"),
            ))?;
            let lambda = friction(t, &roots, params)
                .map_err(CliError::numerical(format!("friction at t = {t}")))?;
            let dp = diffusion(t, NoiseOrdering::PlusMinus, &roots, params, spec)
                .map_err(CliError::numerical(format!("diffusion D_plus at t = {t}")))?;
            let dm = diffusion(t, NoiseOrdering::MinusPlus, &roots, params, spec)
                .map_err(CliError::numerical(format!("diffusion D_minus at t = {t}")))?;
            Ok([t, n, weak, lambda.value, dp.value, dm.value])
        })
        .collect::<Result<_, CliError>>()?;

    let mut table;
    if config.oracle.enabled {
        let bath = build_bath(params, config)?;
        let oracle = oracle_values(&bath, params, config, &times)?;
        table = Table::new(vec![
            "time",
            "n_exact",
            "n_weak_coupling",
            "n_oracle",
            "lambda",
            "D_plus",
            "D_minus",
        ]);
        for (r, o) in rows.iter().zip(oracle) {
            table.push(vec![
                Some(r[0]),
                Some(r[1]),
                Some(r[2]),
                Some(o),
                Some(r[3]),
                Some(r[4]),
                Some(r[5]),
            ]);
        }
        oracle_meta(&mut table, &bath, config);
    } else {
        table = Table::new(vec![
            "time",
            "n_exact",
            "n_weak_coupling",
            "lambda",
            "D_plus",
            "D_minus",
        ]);
        for r in rows {
            table.push(r.iter().copied().map(Some).collect());
        }
    }
    Ok(table)
}

fn oracle_meta(table: &mut Table, bath: &DiscreteBath, config: &RunConfig) {
    table.meta("oracle_modes", bath.len());
    table.meta("oracle_recurrence_time", bath.recurrence_time());
    table.meta("oracle_initial", json!(config.oracle.initial));
}

fn scan(base: &ModelParams, config: &RunConfig) -> Result<Table, CliError> {
    let grid = &config.grid.scan;
    let variable = grid.variable;
    let values = spaced(grid.from, grid.to, grid.points, grid.spacing);
    let rows: Vec<Row> = values
        .par_iter()
        .map(|&v| {
            let mut per_stats = Vec::with_capacity(2);
            for stats in [BathStatistics::Fermi, BathStatistics::Bose] {
                let mut p = base.with_statistics(stats);
                variable.apply(&mut p, v);
                if let Err(e) = p.validate() {
                    // No Bose gas with μ > 0: the point simply has no Bose value.
                    if stats == BathStatistics::Bose && p.mu > 0.0 {
                        per_stats.push(None);
                        continue;
                    }
                    return Err(CliError::Config(format!(
                        "scan point {} = {v} ({stats}): {e}",
                        variable.label()
                    )));
                }
                let s = equilibrium_summary(&p, &config.quadrature).map_err(
                    CliError::numerical(format!(
                        "equilibrium summary at {} = {v} ({stats})",
                        variable.label()
                    )),
                )?;
                per_stats.push(Some(s));
            }
            let (f, b) = (per_stats[0], per_stats[1]);
            let ratio = match (f, b) {
                (Some(f), Some(b)) if b.n_infinity > 0.0 => Some(f.n_infinity / b.n_infinity),
                _ => None,
            };
            let mut p = *base;
            variable.apply(&mut p, v);
            Ok(vec![
                Some(v),
                f.map(|s| s.n_infinity),
                b.map(|s| s.n_infinity),
                f.map(|s| s.reference_thermal),
                b.map(|s| s.reference_thermal),
                f.and_then(|s| s.low_t_expansion),
                b.and_then(|s| s.low_t_expansion),
                ratio,
                Some(statistics_ratio(p.temperature, p.omega)),
                f.map(|s| s.lambda_infinity),
                f.map(|s| s.d_plus_infinity),
                f.map(|s| s.d_minus_infinity),
                b.map(|s| s.d_plus_infinity),
                b.map(|s| s.d_minus_infinity),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(vec![
        "value",
        "n_inf_fermi",
        "n_inf_bose",
        "fermi_dirac",
        "bose_einstein",
        "low_t_fermi",
        "low_t_bose",
        "ratio_fermi_bose",
        "tanh_ratio",
        "lambda_inf",
        "D_plus_inf_fermi",
        "D_minus_inf_fermi",
        "D_plus_inf_bose",
        "D_minus_inf_bose",
    ]);
    table.meta("scan_variable", variable.label());
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

fn oracle_compare(params: &ModelParams, config: &RunConfig) -> Result<Table, CliError> {
    let bath = build_bath(params, config)?;
    let t_max = config
        .grid
        .time
        .t_max
        .unwrap_or_else(|| 40f64.min(0.5 * bath.recurrence_time()));
    let times = time_samples(&config.grid.time, params, t_max);
    let exact = exact_values(params, config, &times)?;
    let oracle = oracle_values(&bath, params, config, &times)?;
    let mut table = Table::new(vec!["time", "n_exact", "n_oracle", "abs_difference"]);
    let mut worst = 0.0f64;
    for ((t, e), o) in times.iter().zip(&exact).zip(&oracle) {
        let d = (e - o).abs();
        worst = worst.max(d);
        table.push(vec![Some(*t), Some(*e), Some(*o), Some(d)]);
    }
    oracle_meta(&mut table, &bath, config);
    table.meta("max_abs_difference", worst);
    Ok(table)
}

fn kernel_dump(params: &ModelParams, config: &RunConfig) -> Result<Table, CliError> {
    let grid = &config.grid.time;
    let t_max = grid.t_max.unwrap_or(10.0 / params.gamma);
    let times = if grid.spacing == Spacing::Adaptive && grid.times.is_empty() {
        spaced(0.0, t_max, grid.points, Spacing::Linear)
    } else {
        time_samples(grid, params, t_max)
    };
    let bath = if config.oracle.enabled {
        Some(build_bath(params, config)?)
    } else {
        None
    };
    let mut columns = vec!["time", "kernel", "kernel_integral"];
    if bath.is_some() {
        columns.push("discrete_kernel");
    }
    let mut table = Table::new(columns);
    for &t in &times {
        let mut row = vec![
            Some(t),
            Some(memory_kernel(t, params)),
            Some(memory_kernel_integral(t, params)),
        ];
        if let Some(b) = &bath {
            row.push(Some(b.kernel(t)));
        }
        table.push(row);
    }
    if let Some(b) = &bath {
        oracle_meta(&mut table, b, config);
    }
    Ok(table)
}
