//! Weak-coupling closed form: |B_w(t)|² expanded with the first-order roots
//! z₁ ≈ −γ + ig₀γ, z₂ ≈ iΩ − g₀Ω into six rational coefficients.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{integrate_semi_infinite, FrequencyScales, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FConstants {
    pub f1: C,
    pub f2: C,
    pub f3: C,
    pub f4: C,
    pub f5: C,
    pub f6: C,
}

impl FConstants {
    pub fn as_array(&self) -> [C; 6] {
        [self.f1, self.f2, self.f3, self.f4, self.f5, self.f6]
    }

    /// f1 + f2 + f3 + 2Re(f4 + f5 + f6), which vanishes identically.
    pub fn sum_rule(&self) -> f64 {
        (self.f1 + self.f2 + self.f3).re + 2.0 * (self.f4 + self.f5 + self.f6).re
    }

    /// |B_w(t)|² in the weak-coupling expansion.
    pub fn response_norm_sqr(&self, w: f64, t: f64, params: &ModelParams) -> f64 {
        let (g0, gamma, omega) = (params.g0, params.gamma, params.omega);
        let z1 = C::new(-gamma, g0 * gamma);
        let z2 = C::new(-g0 * omega, omega);
        let iw = C::new(0.0, w);
        self.f1.re
            + self.f2.re * (-2.0 * gamma * t).exp()
            + self.f3.re * (-2.0 * g0 * omega * t).exp()
            + 2.0 * (self.f4 * ((z1 - iw) * t).exp()).re
            + 2.0 * (self.f5 * ((z2 - iw) * t).exp()).re
            + 2.0 * (self.f6 * ((z1 + z2.conj()) * t).exp()).re
    }
}

/// The six weak-coupling coefficients at frequency `w`.
pub fn f_constants(w: f64, params: &ModelParams) -> Result<FConstants> {
    if !(w >= 0.0) {
        return Err(Error::Domain(format!("f-constants need w >= 0, got {w}")));
    }
    if !(params.g0 < 1.0) {
        return Err(invalid("g0", "f-constants need g0 < 1"));
    }
    let i = C::i();
    let (g, gam, om) = (params.g0, params.gamma, params.omega);
    let d1 = w * w - 2.0 * g * w * gam + (1.0 + g * g) * gam * gam;
    let d2 = w * w - 2.0 * w * om + (1.0 + g * g) * om * om;
    let d3 = (1.0 + g * g) * gam * gam - 4.0 * g * gam * om + (1.0 + g * g) * om * om;
    let f1 = C::from((w * w + gam * gam) / (d1 * d2));
    let f2 = C::from(g * g * gam * gam / (d1 * d3));
    let f3 = C::from((gam * gam - 2.0 * g * gam * om + (1.0 + g * g) * om * om) / (d2 * d3));
    let ig = i + g;
    let f4 =
        i * g * (w + i * gam) * gam / (d1 * (gam - i * g * gam - (g - i) * om) * (w + i * ig * om));
    let f5 = (gam - i * w) * (gam - (g - i) * om)
        / ((w - (g - i) * gam) * (ig * gam - (1.0 + i * g) * om) * d2);
    let f6 = g * gam * (gam - ig * om) / ((i * w + gam - i * g * gam) * (w + i * ig * om) * d3);
    let out = FConstants {
        f1,
        f2,
        f3,
        f4,
        f5,
        f6,
    };
    if out.as_array().iter().any(|f| !f.is_finite()) {
        return Err(Error::VanishingDenominator {
            what: "f-constants",
            w,
        });
    }
    Ok(out)
}

fn weak_scales(params: &ModelParams) -> FrequencyScales {
    let mu = match params.statistics {
        crate::model::BathStatistics::Fermi => params.mu,
        crate::model::BathStatistics::Bose => 0.0,
    };
    FrequencyScales::new(params.omega, params.gamma)
        .with_thermal(params.temperature, mu)
        .with_feature(params.omega, params.g0 * params.omega)
}

fn guard(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.g0 > 0.1 {
        log::warn!(
            "weak-coupling form used at g0 = {} > 0.1, outside its validity range",
            params.g0
        );
    }
    Ok(())
}

/// n(t) from the f-constant expansion.
pub fn occupation_weak_coupling(
    t: f64,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    guard(params)?;
    let decay = (-2.0 * params.g0 * params.omega * t).exp();
    if params.g0 == 0.0 || t == 0.0 {
        return Ok(params.n0 * decay);
    }
    let occ = params.occupation();
    let g2 = params.gamma * params.gamma;
    let pre = params.g0 / PI * g2;
    let integrand = |w: f64| -> Result<f64> {
        let f = f_constants(w, params)?;
        Ok(pre * w / (g2 + w * w) * f.response_norm_sqr(w, t, params) * occ.at(w))
    };
    let failure = std::cell::Cell::new(None);
    let wrapped = |w: f64| match integrand(w) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e.to_string()));
            f64::NAN
        }
    };
    let r = integrate_semi_infinite(
        wrapped,
        &spec.with_time(t.max(spec.oscillation_time)),
        &weak_scales(params),
    );
    if let Some(msg) = failure.take() {
        return Err(Error::Domain(msg));
    }
    Ok(params.n0 * decay + r?.value)
}

/// Weak-coupling n(∞): the f₁ term alone.
pub fn occupation_weak_asymptotic(params: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    guard(params)?;
    if !(params.g0 > 0.0) {
        return Err(invalid("g0", "asymptotic occupation needs g0 > 0"));
    }
    let occ = params.occupation();
    let (g, gam, om) = (params.g0, params.gamma, params.omega);
    let integrand = |w: f64| {
        let d1 = w * w - 2.0 * g * w * gam + (1.0 + g * g) * gam * gam;
        let d2 = (w - om) * (w - om) + g * g * om * om;
        g / PI * gam * gam * w / (d1 * d2) * occ.at(w)
    };
    Ok(integrate_semi_infinite(integrand, &spec.with_time(0.0), &weak_scales(params))?.value)
}

/// Compact relaxation form n0·e^{−2g₀Ωt} + n(∞)·(1 − e^{−2g₀Ωt}).
pub fn occupation_weak_compact(t: f64, params: &ModelParams, n_infinity: f64) -> f64 {
    let x = -2.0 * params.g0 * params.omega * t;
    params.n0 * x.exp() - n_infinity * x.exp_m1()
}
