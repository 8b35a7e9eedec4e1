use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::response::{CharacteristicRoots, Response};

use super::noise::{asymptotic_moment, moment_with, NoiseOrdering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccupationMethod {
    ExactQuadrature,
    WeakCoupling,
    Oracle,
}

impl OccupationMethod {
    pub fn label(self) -> &'static str {
        match self {
            OccupationMethod::ExactQuadrature => "exact-quadrature",
            OccupationMethod::WeakCoupling => "weak-coupling",
            OccupationMethod::Oracle => "oracle",
        }
    }
}

/// n(t) sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub method: OccupationMethod,
    pub params: ModelParams,
}

impl OccupationTrajectory {
    pub fn max_abs_difference(&self, other: &OccupationTrajectory) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// n(t) = |Ã(t)|²·n0 + ⟨F̃⁺(t)F̃(t)⟩.
pub fn occupation(
    t: f64,
    params: &ModelParams,
    roots: &CharacteristicRoots,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let response = Response::from_roots(*roots, params)?;
    occupation_with(&response, t, params, spec)
}

pub(crate) fn occupation_with(
    response: &Response,
    t: f64,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let m = moment_with(response, t, NoiseOrdering::PlusMinus, params, spec)?;
    Ok(response.amplitude(t).norm_sqr() * params.n0 + m.value)
}

/// n(∞) from the surviving part of the bath response.
pub fn occupation_asymptotic(
    params: &ModelParams,
    roots: &CharacteristicRoots,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(params.g0 > 0.0) {
        return Err(invalid("g0", "asymptotic occupation needs g0 > 0"));
    }
    let response = Response::from_roots(*roots, params)?;
    asymptotic_moment(&response, NoiseOrdering::PlusMinus, params, spec)
}

/// Exact occupation trajectory on `times`.
pub fn occupation_trajectory(
    params: &ModelParams,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<OccupationTrajectory> {
    params.validate()?;
    let response = Response::new(params)?;
    let values = times
        .iter()
        .map(|&t| occupation_with(&response, t, params, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(OccupationTrajectory {
        times: times.to_vec(),
        values,
        method: OccupationMethod::ExactQuadrature,
        params: *params,
    })
}

/// Geometric steps from 0.05/γ up to a uniform spacing min(0.1/(g₀Ω), t_max/200), then linear.
pub fn default_time_grid(params: &ModelParams, t_max: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    if !(t_max > 0.0) {
        return times;
    }
    let mut linear = t_max / 200.0;
    if params.g0 > 0.0 {
        linear = linear.min(0.1 / (params.g0 * params.omega));
    }
    let mut dt = (0.05 / params.gamma).min(linear);
    let mut t = 0.0;
    while t + dt < t_max * (1.0 - 1e-12) {
        t += dt;
        times.push(t);
        dt = (dt * 1.15).min(linear);
    }
    times.push(t_max);
    times
}
