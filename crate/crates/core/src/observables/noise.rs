use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::ModelParams;
use num_complex::Complex64 as C;

use crate::quadrature::{
    integrate_from, integrate_interval, integrate_semi_infinite, FrequencyScales, QuadratureSpec,
    WMaxPolicy,
};
use crate::response::{CharacteristicRoots, Response};

use super::moment_scales;

/// Operator ordering of the random-force moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseOrdering {
    /// ⟨F̃⁺F̃⟩, weighted by n(w).
    PlusMinus,
    /// ⟨F̃F̃⁺⟩, weighted by 1 ∓ n(w).
    MinusPlus,
}

/// A noise moment and its time derivative at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMoment {
    pub value: f64,
    pub derivative: f64,
    pub error_estimate: f64,
}

/// ⟨F̃⁺(t)F̃(t)⟩ or ⟨F̃(t)F̃⁺(t)⟩ together with its closed-form time derivative.
pub fn noise_moment(
    t: f64,
    ordering: NoiseOrdering,
    params: &ModelParams,
    roots: &CharacteristicRoots,
    spec: &QuadratureSpec,
) -> Result<NoiseMoment> {
    let response = Response::from_roots(*roots, params)?;
    moment_with(&response, t, ordering, params, spec)
}

pub(crate) fn moment_with(
    response: &Response,
    t: f64,
    ordering: NoiseOrdering,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<NoiseMoment> {
    if params.g0 == 0.0 || t == 0.0 {
        return Ok(NoiseMoment {
            value: 0.0,
            derivative: 0.0,
            error_estimate: 0.0,
        });
    }
    let slice = response.at(t);
    let occ = params.occupation();
    let sign = params.statistics.blocking_sign();
    let gamma = params.gamma;
    let prefactor = params.g0 / PI * gamma * gamma;
    let weight = |n: f64| match ordering {
        NoiseOrdering::PlusMinus => n,
        NoiseOrdering::MinusPlus => 1.0 + sign * n,
    };
    let spec = spec.with_time(t.max(spec.oscillation_time));
    let scales = moment_scales(params, response);
    let roots = response.roots();
    let w_split = scales
        .w_max(spec.w_max_policy)
        .max(2.0 * (roots.z1.im.max(roots.z2.im).max(params.mu) + gamma));

    // Below the split point the full integrand is resolved directly.
    let full = |w: f64| {
        let (b, db) = slice.eval(w);
        let rho = prefactor * w / (gamma * gamma + w * w) * weight(occ.at(w));
        [rho * b.norm_sqr(), rho * 2.0 * (b.conj() * db).re]
    };
    let head = integrate_interval(full, 0.0, w_split, &spec, &scales)?;

    // Above it B = e^{iwt}A0 + R. The smooth part decays like w⁻³.
    let smooth = |w: f64| {
        let (d, _) = slice.split(C::new(w, 0.0));
        let rho = prefactor * w / (gamma * gamma + w * w) * weight(occ.at(w));
        [
            rho * (d.a0.norm_sqr() + d.r.norm_sqr()),
            rho * 2.0 * (d.r.conj() * d.r_dot).re,
        ]
    };
    let tail = integrate_from(smooth, w_split, &spec.with_time(0.0), &scales)?;

    // The e^{iwt} cross term is rotated onto w = W + iy, where it decays as e^{-yt}.
    let cross = |y: f64| {
        let w = C::new(w_split, y);
        let (d, c) = slice.split(w);
        let n = occ.at_complex(w);
        let chi = match ordering {
            NoiseOrdering::PlusMinus => n,
            NoiseOrdering::MinusPlus => 1.0 + sign * n,
        };
        let h = prefactor * w / (gamma * gamma + w * w) * chi * (-y * t).exp();
        let v = h * d.a0 * c.r;
        let dv = h * d.a0 * (c.r_dot + C::i() * w * c.r);
        [v.re, v.im, dv.re, dv.im]
    };
    let y_scales = FrequencyScales::new(1.0 / t, w_split);
    let y_spec = QuadratureSpec {
        w_max_policy: WMaxPolicy::Default,
        ..spec.with_time(0.0)
    };
    let rot = integrate_semi_infinite(cross, &y_spec, &y_scales)?;
    let phase = C::i() * C::from_polar(1.0, w_split * t);
    let [vr, vi, dr, di] = rot.value;
    let cross_value = 2.0 * (phase * C::new(vr, vi)).re;
    let cross_rate = 2.0 * (phase * C::new(dr, di)).re;

    Ok(NoiseMoment {
        value: head.value[0] + tail.value[0] + cross_value,
        derivative: head.value[1] + tail.value[1] + cross_rate,
        error_estimate: head.error_estimate + tail.error_estimate + 2.0 * rot.error_estimate,
    })
}

/// Long-time limit of the moment: the |B_w|² factor is replaced by its surviving term.
pub(crate) fn asymptotic_moment(
    response: &Response,
    ordering: NoiseOrdering,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let occ = params.occupation();
    let sign = params.statistics.blocking_sign();
    let prefactor = params.g0 / PI * params.gamma * params.gamma;
    let i = C::i();
    let roots = response.roots();
    let integrand = |w: f64| {
        let n = occ.at(w);
        let weight = match ordering {
            NoiseOrdering::PlusMinus => n,
            NoiseOrdering::MinusPlus => 1.0 + sign * n,
        };
        prefactor * w * weight / ((w + i * roots.z1).norm_sqr() * (w + i * roots.z2).norm_sqr())
    };
    let spec = spec.with_time(0.0);
    Ok(integrate_semi_infinite(integrand, &spec, &moment_scales(params, response))?.value)
}
