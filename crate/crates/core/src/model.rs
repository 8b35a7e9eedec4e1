//! Physical parameters, unit conventions, the Drude spectral density and
//! equilibrium occupation factors.
//!
//! Energies are in MeV with ħ = k_B = 1, so times are in MeV⁻¹.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// The single unit system used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub energy_unit: &'static str,
    pub time_unit: &'static str,
    pub hbar: f64,
    pub k_b: f64,
}

pub const UNITS: UnitSystem = UnitSystem {
    energy_unit: "MeV",
    time_unit: "1/MeV",
    hbar: 1.0,
    k_b: 1.0,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BathStatistics {
    Fermi,
    Bose,
}

impl BathStatistics {
    pub const ALL: [BathStatistics; 2] = [BathStatistics::Fermi, BathStatistics::Bose];

    /// Sign entering the anti-normal ordered weight `1 + sign·n`.
    pub fn blocking_sign(self) -> f64 {
        match self {
            BathStatistics::Fermi => -1.0,
            BathStatistics::Bose => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BathStatistics::Fermi => "fermi",
            BathStatistics::Bose => "bose",
        }
    }
}

impl fmt::Display for BathStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Physical configuration of the collective mode and its bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Renormalized frequency Ω.
    pub omega: f64,
    /// Dimensionless coupling g₀.
    pub g0: f64,
    /// Cutoff γ, the inverse memory time.
    pub gamma: f64,
    pub temperature: f64,
    /// Chemical potential of the bath.
    pub mu: f64,
    pub statistics: BathStatistics,
    /// Initial occupation of the collective mode.
    pub n0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega: 1.0,
            g0: 0.1,
            gamma: 12.0,
            temperature: 1.0,
            mu: 0.0,
            statistics: BathStatistics::Fermi,
            n0: 0.0,
        }
    }
}

/// Soft validity conditions that do not stop a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning {
    /// γ is not much larger than Ω.
    ShortCutoff { ratio: f64 },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamWarning::ShortCutoff { ratio } => write!(
                f,
                "gamma/omega = {ratio} < 5; the real-kernel approximation assumes gamma >> omega"
            ),
        }
    }
}

impl ModelParams {
    pub fn with_statistics(mut self, statistics: BathStatistics) -> Self {
        self.statistics = statistics;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_g0(mut self, g0: f64) -> Self {
        self.g0 = g0;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_n0(mut self, n0: f64) -> Self {
        self.n0 = n0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega", self.omega),
            ("g0", self.g0),
            ("gamma", self.gamma),
            ("temperature", self.temperature),
            ("mu", self.mu),
            ("n0", self.n0),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        if self.omega <= 0.0 {
            return Err(invalid("omega", "must be positive"));
        }
        if self.gamma <= 0.0 {
            return Err(invalid("gamma", "must be positive"));
        }
        if self.g0 < 0.0 {
            return Err(invalid("g0", "must be non-negative"));
        }
        if self.temperature < 0.0 {
            return Err(invalid("temperature", "must be non-negative"));
        }
        match self.statistics {
            BathStatistics::Fermi => {
                if !(0.0..=1.0).contains(&self.n0) {
                    return Err(invalid("n0", "fermionic occupation must lie in [0, 1]"));
                }
            }
            BathStatistics::Bose => {
                if self.n0 < 0.0 {
                    return Err(invalid("n0", "bosonic occupation must be non-negative"));
                }
                if self.mu > 0.0 {
                    return Err(invalid("mu", "bosonic chemical potential must be <= 0"));
                }
            }
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        let ratio = self.gamma / self.omega;
        if ratio < 5.0 {
            out.push(ParamWarning::ShortCutoff { ratio });
        }
        out
    }

    pub fn bare_frequency(&self) -> f64 {
        bare_frequency(self)
    }

    pub(crate) fn occupation(&self) -> Occupation {
        Occupation {
            statistics: self.statistics,
            temperature: self.temperature,
            mu: self.mu,
        }
    }
}

/// Bare frequency ω = Ω + g₀γ/2.
pub fn bare_frequency(params: &ModelParams) -> f64 {
    params.omega + 0.5 * params.g0 * params.gamma
}

/// Drude spectral density (g₀/π)·γ²/(γ²+w²).
pub fn spectral_density(w: f64, params: &ModelParams) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(Error::Domain(format!(
            "spectral density needs w >= 0, got {w}"
        )));
    }
    Ok(drude(w, params.g0, params.gamma))
}

#[inline]
pub(crate) fn drude(w: f64, g0: f64, gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    g0 / PI * g2 / (g2 + w * w)
}

/// Fermi-Dirac or Bose-Einstein occupation at frequency `w`.
pub fn occupation_factor(w: f64, params: &ModelParams) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite, got {w}")));
    }
    if params.temperature < 0.0 {
        return Err(invalid("temperature", "must be non-negative"));
    }
    if params.statistics == BathStatistics::Bose && w <= params.mu {
        return Err(Error::Domain(format!(
            "Bose occupation diverges or turns negative for w = {w} <= mu = {}",
            params.mu
        )));
    }
    Ok(params.occupation().at(w))
}

/// Unchecked occupation kernel for the hot integration loops.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Occupation {
    pub statistics: BathStatistics,
    pub temperature: f64,
    pub mu: f64,
}

impl Occupation {
    #[inline]
    pub fn at(&self, w: f64) -> f64 {
        let d = w - self.mu;
        if self.temperature == 0.0 {
            return match self.statistics {
                BathStatistics::Fermi => {
                    if d < 0.0 {
                        1.0
                    } else if d == 0.0 {
                        0.5
                    } else {
                        0.0
                    }
                }
                BathStatistics::Bose => 0.0,
            };
        }
        let x = d / self.temperature;
        match self.statistics {
            BathStatistics::Fermi => {
                if x > 0.0 {
                    let e = (-x).exp();
                    e / (1.0 + e)
                } else {
                    1.0 / (1.0 + x.exp())
                }
            }
            BathStatistics::Bose => 1.0 / x.exp_m1(),
        }
    }

    /// Analytic continuation of `at`, valid for Re w > μ.
    pub fn at_complex(&self, w: num_complex::Complex64) -> num_complex::Complex64 {
        let zero = num_complex::Complex64::new(0.0, 0.0);
        if self.temperature == 0.0 {
            return zero;
        }
        let e = (-(w - self.mu) / self.temperature).exp();
        match self.statistics {
            BathStatistics::Fermi => e / (1.0 + e),
            BathStatistics::Bose => e / (1.0 - e),
        }
    }
}
