//! Brute-force validation: a finite bath of N modes, exact one-body
//! propagation of the quadratic Hamiltonian, and mode-level checks of the
//! fluctuation-dissipation relations.

mod bath;
mod eigen;
mod fdr;
mod state;

pub use bath::{discretize_bath, BathMode, DiscreteBath, DEFAULT_MODES, DEFAULT_W_MAX_OVER_GAMMA};
pub use eigen::Eigensystem;
pub use fdr::{kernel_fdr_check, FdrResiduals};
pub use state::{
    propagate_occupation, propagate_occupation_with, InitialCorrelations, InitialState,
    OneBodyDynamics, OneBodyState,
};
