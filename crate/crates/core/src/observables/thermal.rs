use crate::error::Result;
use crate::model::{occupation_factor, BathStatistics, ModelParams};

pub const ZETA2: f64 = 1.644_934_066_848_226_4;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const ZETA4: f64 = 1.082_323_233_711_138_2;

/// Low-temperature ζ-series for n(∞) in powers of x = T/Ω.
pub fn low_temperature_asymptote(params: &ModelParams) -> f64 {
    let x = params.temperature / params.omega;
    if x > 0.2 {
        log::warn!("low-temperature series used at T/omega = {x} > 0.2");
    }
    let series = match params.statistics {
        BathStatistics::Fermi => 0.5 * ZETA2 + 3.0 * x * ZETA3 + 63.0 / 4.0 * x * x * ZETA4,
        BathStatistics::Bose => ZETA2 + 4.0 * x * ZETA3 + 18.0 * x * x * ZETA4,
    };
    params.g0 / std::f64::consts::PI * x * x * series
}

/// Thermal estimate tanh(Ω/2T) of n_F/n_B; equals 1 at T = 0.
pub fn statistics_ratio(temperature: f64, omega: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    (omega / (2.0 * temperature)).tanh()
}

/// Equilibrium occupation of the bath at the collective frequency Ω.
pub fn thermal_reference(params: &ModelParams) -> Result<f64> {
    occupation_factor(params.omega, params)
}
