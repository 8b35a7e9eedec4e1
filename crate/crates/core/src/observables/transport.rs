//! Friction λ(t) = −½ d ln|Ã|²/dt and the diffusion coefficients defined by
//! dn/dt = −2λ(t)n + 2D(t), i.e. D = λ⟨F̃⁺F̃⟩ + ½ d⟨F̃⁺F̃⟩/dt.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::response::{CharacteristicRoots, Response};

use super::noise::{asymptotic_moment, moment_with, NoiseOrdering};
use super::thermal::{low_temperature_asymptote, thermal_reference};

/// |Ã| below this is treated as fully decayed.
const AMPLITUDE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransportRegime {
    TimeDependent,
    /// The amplitude underflowed; the long-time value is reported.
    Asymptotic,
}

impl TransportRegime {
    pub fn label(self) -> &'static str {
        match self {
            TransportRegime::TimeDependent => "time-dependent",
            TransportRegime::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Friction {
    pub value: f64,
    pub regime: TransportRegime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffusion {
    pub value: f64,
    pub regime: TransportRegime,
}

pub(crate) fn friction_with(response: &Response, t: f64) -> Friction {
    if response.log_amplitude_norm(t) < AMPLITUDE_FLOOR.ln() {
        return Friction {
            value: response.roots().asymptotic_friction(),
            regime: TransportRegime::Asymptotic,
        };
    }
    Friction {
        value: -response.log_derivative(t).re,
        regime: TransportRegime::TimeDependent,
    }
}

/// λ(t) = −Re[(dÃ*/dt)/Ã*]. Statistics never enter.
pub fn friction(t: f64, roots: &CharacteristicRoots, params: &ModelParams) -> Result<Friction> {
    let response = Response::from_roots(*roots, params)?;
    Ok(friction_with(&response, t))
}

pub(crate) fn diffusion_with(
    response: &Response,
    t: f64,
    ordering: NoiseOrdering,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<Diffusion> {
    if 2.0 * response.log_amplitude_norm(t) < AMPLITUDE_FLOOR.ln() {
        let lambda = response.roots().asymptotic_friction();
        let m = asymptotic_moment(response, ordering, params, spec)?;
        return Ok(Diffusion {
            value: lambda * m,
            regime: TransportRegime::Asymptotic,
        });
    }
    let lambda = friction_with(response, t).value;
    let m = moment_with(response, t, ordering, params, spec)?;
    Ok(Diffusion {
        value: lambda * m.value + 0.5 * m.derivative,
        regime: TransportRegime::TimeDependent,
    })
}

/// D_{a⁺a}(t) for `PlusMinus`, D_{aa⁺}(t) for `MinusPlus`.
pub fn diffusion(
    t: f64,
    ordering: NoiseOrdering,
    roots: &CharacteristicRoots,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<Diffusion> {
    let response = Response::from_roots(*roots, params)?;
    diffusion_with(&response, t, ordering, params, spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportTrajectory {
    pub times: Vec<f64>,
    pub friction: Vec<f64>,
    pub diffusion_plus: Vec<f64>,
    pub diffusion_minus: Vec<f64>,
    pub regime: Vec<TransportRegime>,
}

pub fn transport_trajectory(
    params: &ModelParams,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<TransportTrajectory> {
    params.validate()?;
    let response = Response::new(params)?;
    let mut out = TransportTrajectory {
        times: times.to_vec(),
        friction: Vec::with_capacity(times.len()),
        diffusion_plus: Vec::with_capacity(times.len()),
        diffusion_minus: Vec::with_capacity(times.len()),
        regime: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let f = friction_with(&response, t);
        let dp = diffusion_with(&response, t, NoiseOrdering::PlusMinus, params, spec)?;
        let dm = diffusion_with(&response, t, NoiseOrdering::MinusPlus, params, spec)?;
        out.friction.push(f.value);
        out.diffusion_plus.push(dp.value);
        out.diffusion_minus.push(dm.value);
        out.regime
            .push(if dp.regime == TransportRegime::Asymptotic {
                TransportRegime::Asymptotic
            } else {
                f.regime
            });
    }
    Ok(out)
}

/// Long-time values for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSummary {
    pub n_infinity: f64,
    /// ⟨F̃F̃⁺⟩(∞); equals 1 ∓ n(∞) only up to the normalization of |B_w(∞)|².
    pub minus_moment_infinity: f64,
    pub lambda_infinity: f64,
    pub d_plus_infinity: f64,
    pub d_minus_infinity: f64,
    /// Fermi-Dirac or Bose-Einstein occupation at Ω.
    pub reference_thermal: f64,
    /// ζ-series value when T ≤ 0.2Ω and μ = 0.
    pub low_t_expansion: Option<f64>,
}

pub fn equilibrium_summary(
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<EquilibriumSummary> {
    params.validate()?;
    let response = Response::new(params)?;
    let roots = response.roots();
    let lambda = -(roots.z2 + roots.z2.conj()).re / 2.0;
    let (n_inf, m_minus) = if params.g0 > 0.0 {
        (
            asymptotic_moment(&response, NoiseOrdering::PlusMinus, params, spec)?,
            asymptotic_moment(&response, NoiseOrdering::MinusPlus, params, spec)?,
        )
    } else {
        (
            params.n0,
            1.0 + params.statistics.blocking_sign() * params.n0,
        )
    };
    let low_t = (params.temperature <= 0.2 * params.omega && params.mu == 0.0)
        .then(|| low_temperature_asymptote(params));
    Ok(EquilibriumSummary {
        n_infinity: n_inf,
        minus_moment_infinity: m_minus,
        lambda_infinity: lambda,
        d_plus_infinity: lambda * n_inf,
        d_minus_infinity: lambda * m_minus,
        reference_thermal: thermal_reference(params)?,
        low_t_expansion: low_t,
    })
}
