//! Physical observables built on the closed-form response.

mod noise;
mod occupation;
mod thermal;
mod transport;
mod weak;

pub use noise::{noise_moment, NoiseMoment, NoiseOrdering};
pub use occupation::{
    default_time_grid, occupation, occupation_asymptotic, occupation_trajectory, OccupationMethod,
    OccupationTrajectory,
};
pub use thermal::{
    low_temperature_asymptote, statistics_ratio, thermal_reference, ZETA2, ZETA3, ZETA4,
};
pub use transport::{
    diffusion, equilibrium_summary, friction, transport_trajectory, Diffusion, EquilibriumSummary,
    Friction, TransportRegime, TransportTrajectory,
};
pub use weak::{
    f_constants, occupation_weak_asymptotic, occupation_weak_compact, occupation_weak_coupling,
    FConstants,
};

use crate::model::{BathStatistics, ModelParams};
use crate::quadrature::FrequencyScales;
use crate::response::Response;

/// Mesh hints for integrands containing |B_w(t)|² and the thermal weight.
pub(crate) fn moment_scales(params: &ModelParams, response: &Response) -> FrequencyScales {
    let mu = match params.statistics {
        BathStatistics::Fermi => params.mu,
        BathStatistics::Bose => 0.0,
    };
    let roots = response.roots();
    let mut s = FrequencyScales::new(params.omega, params.gamma)
        .with_thermal(params.temperature, mu)
        .with_feature(roots.z2.im, roots.z2.re.abs());
    if roots.z1.im > 0.0 {
        s = s.with_feature(roots.z1.im, roots.z1.re.abs());
    }
    s
}
