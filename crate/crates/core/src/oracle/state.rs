use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{bare_frequency, ModelParams};
use crate::observables::{OccupationMethod, OccupationTrajectory};

use super::bath::DiscreteBath;
use super::eigen::{arrowhead_matrix, Eigensystem};

/// How the initial bath state is correlated with the collective mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InitialCorrelations {
    /// ρ(0) = diag(n0, n_1 … n_N) in the bare mode basis.
    Bare,
    /// Thermal in the displaced bath modes ã_ν = a_ν + (g_ν/w_ν)a, which is
    /// the initial condition assumed by the closed-form solution:
    /// ρ(0) = n0·vvᵀ + diag(0, n_1 … n_N) with v = (1, −g_ν/w_ν).
    #[default]
    Displaced,
}

/// Hamiltonian of the collective mode plus bath, with its cached eigensystem.
#[derive(Debug, Clone)]
pub struct OneBodyDynamics {
    pub bare_frequency: f64,
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
    pub eigen: Eigensystem,
}

impl OneBodyDynamics {
    pub fn new(bath: &DiscreteBath, params: &ModelParams) -> Result<Self> {
        Self::from_arrowhead(bare_frequency(params), bath.frequencies(), bath.couplings())
    }

    pub fn from_arrowhead(apex: f64, frequencies: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        let eigen = Eigensystem::arrowhead(apex, &frequencies, &couplings)?;
        Ok(OneBodyDynamics {
            bare_frequency: apex,
            frequencies,
            couplings,
            eigen,
        })
    }

    /// Same Hamiltonian, decomposed with the dense solver.
    pub fn with_dense_solver(&self) -> Result<Self> {
        Ok(OneBodyDynamics {
            eigen: Eigensystem::dense(&self.hamiltonian())?,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.frequencies.len() + 1
    }

    pub fn hamiltonian(&self) -> DMatrix<f64> {
        arrowhead_matrix(self.bare_frequency, &self.frequencies, &self.couplings)
    }

    /// U_{0j}(t) for j = 0 … N.
    pub fn system_row(&self, t: f64) -> Vec<C> {
        self.eigen.first_row(t)
    }

    /// Full propagator (O(N³)).
    pub fn propagator(&self, t: f64) -> DMatrix<C> {
        let n = self.dim();
        let v = self.eigen.matrix().map(|x| C::new(x, 0.0));
        let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.eigen
                .values
                .iter()
                .map(|&l| C::from_polar(1.0, -l * t)),
        ));
        &v * phases * v.transpose()
    }
}

/// Initial one-body density matrix, kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub n0: f64,
    pub bath_occupations: Vec<f64>,
    pub correlations: InitialCorrelations,
    /// v = (1, −g_ν/w_ν) for the displaced state.
    displacement: Vec<f64>,
}

impl InitialState {
    pub fn new(n0: f64, bath: &DiscreteBath, correlations: InitialCorrelations) -> Self {
        let mut displacement = Vec::with_capacity(bath.len() + 1);
        displacement.push(1.0);
        displacement.extend(bath.modes.iter().map(|m| -m.coupling / m.frequency));
        InitialState {
            n0,
            bath_occupations: bath.occupations(),
            correlations,
            displacement,
        }
    }

    /// n(t) = Σ_ij U_{0i} ρ_ij U*_{0j} given the row U_{0·}(t).
    pub fn occupation(&self, row: &[C]) -> f64 {
        let bath: f64 = row[1..]
            .iter()
            .zip(&self.bath_occupations)
            .map(|(u, n)| u.norm_sqr() * n)
            .sum();
        let system = match self.correlations {
            InitialCorrelations::Bare => row[0].norm_sqr(),
            InitialCorrelations::Displaced => row
                .iter()
                .zip(&self.displacement)
                .map(|(u, v)| u * v)
                .sum::<C>()
                .norm_sqr(),
        };
        self.n0 * system + bath
    }

    pub fn density_matrix(&self) -> DMatrix<f64> {
        let n = self.bath_occupations.len() + 1;
        let mut rho = DMatrix::zeros(n, n);
        for (j, occ) in self.bath_occupations.iter().enumerate() {
            rho[(j + 1, j + 1)] = *occ;
        }
        match self.correlations {
            InitialCorrelations::Bare => rho[(0, 0)] = self.n0,
            InitialCorrelations::Displaced => {
                for i in 0..n {
                    for j in 0..n {
                        rho[(i, j)] += self.n0 * self.displacement[i] * self.displacement[j];
                    }
                }
            }
        }
        rho
    }
}

/// One-body dynamics together with an initial state.
#[derive(Debug, Clone)]
pub struct OneBodyState {
    pub dynamics: OneBodyDynamics,
    pub initial: InitialState,
}

impl OneBodyState {
    pub fn new(
        bath: &DiscreteBath,
        params: &ModelParams,
        correlations: InitialCorrelations,
    ) -> Result<Self> {
        Ok(OneBodyState {
            dynamics: OneBodyDynamics::new(bath, params)?,
            initial: InitialState::new(params.n0, bath, correlations),
        })
    }

    pub fn occupation(&self, t: f64) -> f64 {
        self.initial.occupation(&self.dynamics.system_row(t))
    }

    /// ρ(t) = U ρ(0) U† (O(N³)).
    pub fn density_matrix(&self, t: f64) -> DMatrix<C> {
        let u = self.dynamics.propagator(t);
        let rho0 = self.initial.density_matrix().map(|x| C::new(x, 0.0));
        &u * rho0 * u.adjoint()
    }
}

/// Oracle n(t) with the default displaced initial state.
pub fn propagate_occupation(
    bath: &DiscreteBath,
    params: &ModelParams,
    times: &[f64],
) -> Result<OccupationTrajectory> {
    propagate_occupation_with(bath, params, times, InitialCorrelations::default())
}

pub fn propagate_occupation_with(
    bath: &DiscreteBath,
    params: &ModelParams,
    times: &[f64],
    correlations: InitialCorrelations,
) -> Result<OccupationTrajectory> {
    params.validate()?;
    if bath.statistics != params.statistics {
        return Err(Error::Domain(
            "bath was discretized for different statistics".into(),
        ));
    }
    let horizon = 0.5 * bath.recurrence_time();
    if let Some(t) = times.iter().find(|&&t| t > horizon) {
        log::warn!("oracle time {t} exceeds half the recurrence time {horizon}");
    }
    let state = OneBodyState::new(bath, params, correlations)?;
    Ok(OccupationTrajectory {
        times: times.to_vec(),
        values: times.iter().map(|&t| state.occupation(t)).collect(),
        method: OccupationMethod::Oracle,
        params: *params,
    })
}
