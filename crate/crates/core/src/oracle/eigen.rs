//! Eigendecomposition of the one-body Hamiltonian.
//!
//! The bath Hamiltonian is an arrowhead matrix: apex ω, diagonal w_ν, and
//! couplings g_ν in the first row and column. Its eigenvalues are the roots of
//! the secular equation λ − ω − Σ g²/(λ − w) = 0, one per gap between poles,
//! and its eigenvectors are ∝ (1, g_ν/(λ − w_ν)). Each root is located relative
//! to its nearest pole so the differences λ − w_ν keep full relative accuracy.
//! A dense route through nalgebra covers general symmetric matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
enum Vectors {
    /// Columns are eigenvectors.
    Dense(DMatrix<f64>),
    /// Eigenvector k is head[k]·(1, g_j/(λ_k − d_j)), with
    /// λ_k = diag[pole[k]] + offset[k].
    Arrowhead {
        head: Vec<f64>,
        pole: Vec<usize>,
        offset: Vec<f64>,
        diag: Vec<f64>,
        coupling: Vec<f64>,
    },
}

/// Eigenvalues and (possibly implicit) eigenvectors of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    vectors: Vectors,
}

impl Eigensystem {
    /// Dense symmetric eigendecomposition; rejects non-symmetric input.
    pub fn dense(h: &DMatrix<f64>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Eigen("matrix is not square".into()));
        }
        let scale = h.amax().max(f64::MIN_POSITIVE);
        let asym = (h - h.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Eigen(format!(
                "matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::Eigen("matrix has non-finite entries".into()));
        }
        let eig = SymmetricEigen::new(h.clone());
        Ok(Eigensystem {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: Vectors::Dense(eig.eigenvectors),
        })
    }

    /// Arrowhead eigendecomposition via the secular equation.
    ///
    /// Falls back to the dense route when the diagonal is not strictly
    /// increasing or only some couplings vanish.
    pub fn arrowhead(apex: f64, diag: &[f64], coupling: &[f64]) -> Result<Self> {
        if diag.len() != coupling.len() {
            return Err(Error::Eigen("diagonal and coupling lengths differ".into()));
        }
        if !apex.is_finite() || diag.iter().chain(coupling).any(|x| !x.is_finite()) {
            return Err(Error::Eigen("arrowhead has non-finite entries".into()));
        }
        let zero = coupling.iter().filter(|&&g| g == 0.0).count();
        let increasing = diag.windows(2).all(|w| w[0] < w[1]);
        if zero == coupling.len() {
            return Ok(Self::decoupled(apex, diag));
        }
        if zero > 0 || !increasing {
            return Self::dense(&arrowhead_matrix(apex, diag, coupling));
        }
        let m = diag.len();
        let g2: Vec<f64> = coupling.iter().map(|g| g * g).collect();
        let gsum: f64 = coupling.iter().map(|g| g.abs()).sum();
        let gmax = coupling.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        let lower = (apex - gsum).min(diag[0] - gmax) - 1.0;
        let upper = (apex + gsum).max(diag[m - 1] + gmax) + 1.0;

        let mut values = Vec::with_capacity(m + 1);
        let mut head = Vec::with_capacity(m + 1);
        let mut pole = Vec::with_capacity(m + 1);
        let mut offset = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let (origin_idx, lo, hi) = if k == 0 {
                (0, lower - diag[0], 0.0)
            } else if k == m {
                (m - 1, 0.0, upper - diag[m - 1])
            } else {
                let (a, b) = (diag[k - 1], diag[k]);
                let mid = 0.5 * (b - a);
                // f increases from −∞ to +∞ across the gap.
                if secular(apex, diag, &g2, k - 1, mid) > 0.0 {
                    (k - 1, 0.0, mid)
                } else {
                    (k, -mid, 0.0)
                }
            };
            let delta = solve_secular(apex, diag, &g2, origin_idx, lo, hi)?;
            let origin = diag[origin_idx];
            let lambda = origin + delta;
            let mut norm = 1.0;
            for j in 0..m {
                let d = (origin - diag[j]) + delta;
                norm += g2[j] / (d * d);
            }
            values.push(lambda);
            head.push(1.0 / norm.sqrt());
            pole.push(origin_idx);
            offset.push(delta);
        }
        Ok(Eigensystem {
            values,
            vectors: Vectors::Arrowhead {
                head,
                pole,
                offset,
                diag: diag.to_vec(),
                coupling: coupling.to_vec(),
            },
        })
    }

    fn decoupled(apex: f64, diag: &[f64]) -> Self {
        let n = diag.len() + 1;
        let mut values = Vec::with_capacity(n);
        values.push(apex);
        values.extend_from_slice(diag);
        Eigensystem {
            values,
            vectors: Vectors::Dense(DMatrix::identity(n, n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvector `k` as a dense column.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        match &self.vectors {
            Vectors::Dense(v) => v.column(k).iter().copied().collect(),
            Vectors::Arrowhead {
                head,
                pole,
                offset,
                diag,
                coupling,
            } => {
                let o = diag[pole[k]];
                let mut out = Vec::with_capacity(diag.len() + 1);
                out.push(head[k]);
                out.extend(
                    diag.iter()
                        .zip(coupling)
                        .map(|(d, g)| head[k] * g / ((o - d) + offset[k])),
                );
                out
            }
        }
    }

    /// Row 0 of U(t) = V e^{−iΛt} Vᵀ, i.e. U_{0j}(t) for all j.
    pub fn first_row(&self, t: f64) -> Vec<C> {
        let n = self.dim();
        match &self.vectors {
            Vectors::Dense(v) => {
                let x: Vec<C> = (0..n)
                    .map(|k| v[(0, k)] * C::from_polar(1.0, -self.values[k] * t))
                    .collect();
                (0..n)
                    .map(|j| (0..n).map(|k| v[(j, k)] * x[k]).sum())
                    .collect()
            }
            Vectors::Arrowhead {
                head,
                pole,
                offset,
                diag,
                coupling,
            } => {
                let x: Vec<C> = (0..n)
                    .map(|k| head[k] * head[k] * C::from_polar(1.0, -self.values[k] * t))
                    .collect();
                let origin: Vec<f64> = pole.iter().map(|&p| diag[p]).collect();
                let mut row = Vec::with_capacity(n);
                row.push(x.iter().sum());
                for (d, g) in diag.iter().zip(coupling) {
                    let (mut re, mut im) = (0.0, 0.0);
                    for k in 0..n {
                        let r = 1.0 / ((origin[k] - d) + offset[k]);
                        re += x[k].re * r;
                        im += x[k].im * r;
                    }
                    row.push(C::new(g * re, g * im));
                }
                row
            }
        }
    }

    /// max |Vᵀ V − 1| over all entries (O(N³); for modest N).
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim();
        let v = self.matrix();
        let gram = v.transpose() * &v;
        (gram - DMatrix::identity(n, n)).amax()
    }

    /// max |V Λ Vᵀ − H| (O(N³); for modest N).
    pub fn reconstruction_residual(&self, h: &DMatrix<f64>) -> f64 {
        let v = self.matrix();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.values.clone()));
        (&v * lambda * v.transpose() - h).amax()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        match &self.vectors {
            Vectors::Dense(v) => v.clone(),
            Vectors::Arrowhead { .. } => DMatrix::from_fn(n, n, |j, k| self.vector(k)[j]),
        }
    }
}

/// The dense arrowhead matrix.
pub(crate) fn arrowhead_matrix(apex: f64, diag: &[f64], coupling: &[f64]) -> DMatrix<f64> {
    let n = diag.len() + 1;
    let mut h = DMatrix::zeros(n, n);
    h[(0, 0)] = apex;
    for (j, (d, g)) in diag.iter().zip(coupling).enumerate() {
        h[(j + 1, j + 1)] = *d;
        h[(0, j + 1)] = *g;
        h[(j + 1, 0)] = *g;
    }
    h
}

/// f(origin + δ) with every difference formed relative to the origin pole.
fn secular(apex: f64, diag: &[f64], g2: &[f64], origin: usize, delta: f64) -> f64 {
    let o = diag[origin];
    let mut s = (o - apex) + delta;
    for (d, g) in diag.iter().zip(g2) {
        s -= g / ((o - d) + delta);
    }
    s
}

fn secular_with_slope(
    apex: f64,
    diag: &[f64],
    g2: &[f64],
    origin: usize,
    delta: f64,
) -> (f64, f64) {
    let o = diag[origin];
    let mut s = (o - apex) + delta;
    let mut ds = 1.0;
    for (d, g) in diag.iter().zip(g2) {
        let r = 1.0 / ((o - d) + delta);
        s -= g * r;
        ds += g * r * r;
    }
    (s, ds)
}

/// Root of the increasing secular function inside (lo, hi), safeguarded Newton.
fn solve_secular(
    apex: f64,
    diag: &[f64],
    g2: &[f64],
    origin: usize,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let (f, df) = secular_with_slope(apex, diag, g2, origin, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - f / df;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || !(hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()))
        {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Eigen(format!(
        "secular equation did not converge near pole {}",
        diag[origin]
    )))
}
