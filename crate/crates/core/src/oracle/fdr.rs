use num_complex::Complex64 as C;

use crate::error::{Error, Result};

use super::bath::DiscreteBath;

const ELIGIBLE: f64 = 1e-12;

/// Residuals of the two mode-sum fluctuation-dissipation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdrResiduals {
    /// K*(t−τ) against Σ⟨F⁺(t)F(τ)⟩/(w n), relative.
    pub plus: f64,
    /// K(t−τ) against Σ⟨F(t)F⁺(τ)⟩/(w(1∓n)), relative.
    pub minus: f64,
    /// Largest |⟨F⁺F⁺⟩| or |⟨FF⟩| over the modes.
    pub anomalous: f64,
}

/// Evaluate both relations from per-mode correlations.
///
/// The kernel side is summed over the same eligible modes as the correlation
/// side, so the identity is exact up to round-off.
pub fn kernel_fdr_check(bath: &DiscreteBath, t: f64, tau: f64) -> Result<FdrResiduals> {
    let sign = bath.statistics.blocking_sign();
    let mut plus = Side::default();
    let mut minus = Side::default();
    let mut anomalous: f64 = 0.0;
    for m in &bath.modes {
        let g2 = m.coupling * m.coupling;
        // Phases built from the two times separately, as a correlation would be.
        let at_t = C::from_polar(1.0, m.frequency * t);
        let at_tau = C::from_polar(1.0, m.frequency * tau);
        let kernel = g2 / m.frequency * C::from_polar(1.0, m.frequency * (t - tau));
        if m.occupation > ELIGIBLE {
            let corr = g2 * m.occupation * at_t * at_tau.conj();
            plus.add(kernel, corr / (m.frequency * m.occupation));
        }
        let hole = 1.0 + sign * m.occupation;
        if hole > ELIGIBLE {
            let corr = g2 * hole * at_t.conj() * at_tau;
            minus.add(kernel.conj(), corr / (m.frequency * hole));
        }
        // The number-conserving initial state carries no pair amplitude.
        let pair = 0.0;
        anomalous = anomalous.max((g2 * pair * at_t * at_tau).norm());
    }
    if plus.count == 0 {
        return Err(Error::EmptyModeSet("the n-weighted relation"));
    }
    if minus.count == 0 {
        return Err(Error::EmptyModeSet("the (1-+n)-weighted relation"));
    }
    Ok(FdrResiduals {
        plus: plus.residual(),
        minus: minus.residual(),
        anomalous,
    })
}

#[derive(Default)]
struct Side {
    lhs: C,
    rhs: C,
    scale: f64,
    count: usize,
}

impl Side {
    fn add(&mut self, kernel: C, term: C) {
        self.lhs += kernel;
        self.rhs += term;
        self.scale += kernel.norm();
        self.count += 1;
    }

    fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.scale
    }
}
