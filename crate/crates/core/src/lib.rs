//! Exact non-Markovian dynamics of a collective two-level or harmonic mode
//! linearly coupled to a fermionic or bosonic heat bath with a Drude
//! spectral density, plus a discretized-bath oracle for validation.
//!
//! Energies are in MeV with ħ = k_B = 1.

pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod quadrature;
pub mod response;

pub use error::{Error, Result};
pub use model::{BathStatistics, ModelParams};
pub use quadrature::QuadratureSpec;
pub use response::{compute_roots, CharacteristicRoots, Response};
