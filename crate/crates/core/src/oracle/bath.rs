use crate::error::{invalid, Result};
use crate::model::{drude, BathStatistics, ModelParams};

pub const DEFAULT_MODES: usize = 4000;
pub const DEFAULT_W_MAX_OVER_GAMMA: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub frequency: f64,
    pub coupling: f64,
    pub occupation: f64,
}

/// Midpoint sampling of the spectral density on (0, w_max].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath {
    pub modes: Vec<BathMode>,
    pub w_max: f64,
    pub delta_w: f64,
    pub statistics: BathStatistics,
}

impl DiscreteBath {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// 2π/Δw; comparisons are meaningful only well before it.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.delta_w
    }

    /// Σ g²/w, the discrete counterpart of g₀γ/2.
    pub fn lorentzian_sum(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.coupling * m.coupling / m.frequency)
            .sum()
    }

    /// Re Σ (g²/w) e^{−iwt}, the real part of the exact discrete kernel.
    pub fn kernel_real_part(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| m.coupling * m.coupling / m.frequency * (m.frequency * t).cos())
            .sum()
    }

    /// 2Σ (g²/w) cos(wt), the discrete counterpart of the real kernel
    /// g₀γe^{−γt} used by the closed-form solution.
    pub fn kernel(&self, t: f64) -> f64 {
        2.0 * self.kernel_real_part(t)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.frequency).collect()
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.coupling).collect()
    }

    pub fn occupations(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.occupation).collect()
    }
}

/// Bath of `n` modes at w_ν = (ν − ½)Δw with g_ν² = w_ν Δw J(w_ν).
pub fn discretize_bath(params: &ModelParams, n: usize, w_max: f64) -> Result<DiscreteBath> {
    params.validate()?;
    if n < 100 {
        return Err(invalid("N", format!("need at least 100 modes, got {n}")));
    }
    if !(w_max >= 10.0 * params.gamma) || !w_max.is_finite() {
        return Err(invalid("w_max", "must be finite and at least 10*gamma"));
    }
    let dw = w_max / n as f64;
    let occ = params.occupation();
    let modes = (1..=n)
        .map(|k| {
            let w = (k as f64 - 0.5) * dw;
            BathMode {
                frequency: w,
                coupling: (w * dw * drude(w, params.g0, params.gamma)).sqrt(),
                occupation: occ.at(w),
            }
        })
        .collect();
    Ok(DiscreteBath {
        modes,
        w_max,
        delta_w: dw,
        statistics: params.statistics,
    })
}
