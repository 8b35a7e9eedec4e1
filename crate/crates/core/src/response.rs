//! Closed-form response of the collective mode: characteristic roots, the
//! memory kernel, the amplitude Ã*(t) and the bath response B*_w(t).

use num_complex::Complex64 as C;

use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;

const HOMOTOPY_STEPS: usize = 16;
const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Roots of (z+γ)(z−iΩ) − ig₀γz = 0.
///
/// `z1` continues from −γ at g₀ = 0 (bath-like), `z2` from iΩ (system-like).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub z1: C,
    pub z2: C,
}

impl CharacteristicRoots {
    /// Largest |p(z)| over both roots.
    pub fn residual(&self, params: &ModelParams) -> f64 {
        let p = |z: C| characteristic(z, params).norm();
        p(self.z1).max(p(self.z2))
    }

    pub fn separation(&self) -> f64 {
        (self.z1 - self.z2).norm()
    }

    /// Long-time friction −Re z₂.
    pub fn asymptotic_friction(&self) -> f64 {
        -self.z2.re
    }
}

fn characteristic(z: C, p: &ModelParams) -> C {
    let i = C::i();
    (z + p.gamma) * (z - i * p.omega) - i * p.g0 * p.gamma * z
}

fn characteristic_slope(z: C, p: &ModelParams) -> C {
    let i = C::i();
    2.0 * z + p.gamma - i * p.omega - i * p.g0 * p.gamma
}

/// Both roots of z² + bz + c, computed without cancellation.
fn quadratic_pair(omega: f64, gamma: f64, g0: f64) -> (C, C) {
    let i = C::i();
    let b = C::new(gamma, -omega - g0 * gamma);
    let c = -i * gamma * omega;
    let s = (b * b - 4.0 * c).sqrt();
    let q = if (b.conj() * s).re >= 0.0 {
        -0.5 * (b + s)
    } else {
        -0.5 * (b - s)
    };
    (q, c / q)
}

/// Characteristic roots labeled by continuity from g₀ = 0.
pub fn compute_roots(params: &ModelParams) -> Result<CharacteristicRoots> {
    if !(params.g0 >= 0.0) || !params.g0.is_finite() {
        return Err(invalid("g0", "must be finite and non-negative"));
    }
    if !(params.omega > 0.0) || !(params.gamma > 0.0) {
        return Err(invalid("omega/gamma", "must be positive"));
    }
    let (omega, gamma) = (params.omega, params.gamma);
    let mut z1 = C::new(-gamma, 0.0);
    let mut z2 = C::new(0.0, omega);
    for k in 1..=HOMOTOPY_STEPS {
        let g = params.g0 * k as f64 / HOMOTOPY_STEPS as f64;
        let (a, b) = quadratic_pair(omega, gamma, g);
        let keep = (a - z1).norm() + (b - z2).norm();
        let swap = (b - z1).norm() + (a - z2).norm();
        if keep <= swap {
            z1 = a;
            z2 = b;
        } else {
            z1 = b;
            z2 = a;
        }
    }
    for z in [&mut z1, &mut z2] {
        let d = characteristic_slope(*z, params);
        if d.norm() > 0.0 {
            *z -= characteristic(*z, params) / d;
        }
    }
    let roots = CharacteristicRoots { z1, z2 };
    if roots.separation() < DEGENERACY_THRESHOLD * gamma {
        return Err(Error::DegenerateRoots {
            separation: roots.separation(),
        });
    }
    Ok(roots)
}

/// Memory kernel K(t) = g₀γe^{−γt}.
pub fn memory_kernel(t: f64, params: &ModelParams) -> f64 {
    params.g0 * params.gamma * (-params.gamma * t).exp()
}

/// ∫₀ᵗ K(s) ds = g₀(1 − e^{−γt}).
pub fn memory_kernel_integral(t: f64, params: &ModelParams) -> f64 {
    -params.g0 * (-params.gamma * t).exp_m1()
}

/// Precomputed closed-form response for one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct Response {
    roots: CharacteristicRoots,
    gamma: f64,
    g0: f64,
    omega: f64,
    /// Amplitude weights of e^{z₁t} and e^{z₂t}.
    c1: C,
    c2: C,
}

impl Response {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let roots = compute_roots(params)?;
        Self::from_roots(roots, params)
    }

    pub fn from_roots(roots: CharacteristicRoots, params: &ModelParams) -> Result<Self> {
        let sep = roots.separation();
        if !(sep >= DEGENERACY_THRESHOLD * params.gamma) {
            return Err(Error::DegenerateRoots { separation: sep });
        }
        let CharacteristicRoots { z1, z2 } = roots;
        let shift = C::new(params.gamma, -params.g0 * params.gamma);
        let dz = z1 - z2;
        Ok(Response {
            roots,
            gamma: params.gamma,
            g0: params.g0,
            omega: params.omega,
            c1: (z1 + shift) / dz,
            c2: -(z2 + shift) / dz,
        })
    }

    pub fn roots(&self) -> CharacteristicRoots {
        self.roots
    }

    pub fn amplitude(&self, t: f64) -> C {
        self.c1 * (self.roots.z1 * t).exp() + self.c2 * (self.roots.z2 * t).exp()
    }

    pub fn amplitude_derivative(&self, t: f64) -> C {
        let CharacteristicRoots { z1, z2 } = self.roots;
        z1 * self.c1 * (z1 * t).exp() + z2 * self.c2 * (z2 * t).exp()
    }

    /// ln|Ã(t)| evaluated without forming the possibly underflowing amplitude.
    pub fn log_amplitude_norm(&self, t: f64) -> f64 {
        let CharacteristicRoots { z1, z2 } = self.roots;
        let x = ((z1 - z2) * t).exp();
        self.roots.z2.re * t + (self.c1 * x + self.c2).norm().ln()
    }

    /// (dÃ*/dt)/Ã*, with the slow exponential factored out.
    pub fn log_derivative(&self, t: f64) -> C {
        let CharacteristicRoots { z1, z2 } = self.roots;
        let x = ((z1 - z2) * t).exp();
        (z1 * self.c1 * x + z2 * self.c2) / (self.c1 * x + self.c2)
    }

    /// Fix a time for repeated evaluation of B*_w(t) over many `w`.
    pub fn at(&self, t: f64) -> TimeSlice {
        TimeSlice {
            t,
            e1: (self.roots.z1 * t).exp(),
            e2: (self.roots.z2 * t).exp(),
            response: *self,
        }
    }

    fn check_poles(&self, w: f64) -> Result<()> {
        let i = C::i();
        let scale = w.abs().max(self.omega).max(1.0);
        for z in [self.roots.z1, self.roots.z2] {
            if (w + i * z).norm() <= 1e-12 * scale {
                return Err(Error::ResonancePole { w });
            }
        }
        Ok(())
    }

    /// Surviving long-time part (iw+γ)/((w+iz₁)(w+iz₂)) of B*_w, without its phase e^{itw}.
    pub fn asymptotic_bath_response(&self, w: f64) -> Result<C> {
        self.check_poles(w)?;
        Ok(self.asymptotic_unchecked(w))
    }

    #[inline]
    pub(crate) fn asymptotic_unchecked(&self, w: f64) -> C {
        let i = C::i();
        let CharacteristicRoots { z1, z2 } = self.roots;
        C::new(self.gamma, w) / ((w + i * z1) * (w + i * z2))
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// B*_w(t) at a fixed time.
#[derive(Debug, Clone, Copy)]
pub struct TimeSlice {
    pub t: f64,
    e1: C,
    e2: C,
    response: Response,
}

impl TimeSlice {
    pub fn bath_response(&self, w: f64) -> Result<C> {
        self.response.check_poles(w)?;
        Ok(self.eval(w).0)
    }

    pub fn bath_response_derivative(&self, w: f64) -> Result<C> {
        self.response.check_poles(w)?;
        Ok(self.eval(w).1)
    }

    /// (B*_w(t), ∂B*_w/∂t) without pole checks.
    #[inline]
    pub(crate) fn eval(&self, w: f64) -> (C, C) {
        let i = C::i();
        let r = &self.response;
        let CharacteristicRoots { z1, z2 } = r.roots;
        let dz = z1 - z2;
        let p1 = w + i * z1;
        let p2 = w + i * z2;
        let phase = C::from_polar(1.0, w * self.t);
        let a0 = dz * C::new(r.gamma, w);
        let a1 = (z2 - i * w) * (z1 + r.gamma);
        let a2 = i * p1 * (z2 + r.gamma);
        let inv = 1.0 / (p1 * dz * p2);
        let t0 = phase * a0;
        let t1 = self.e1 * a1;
        let t2 = self.e2 * a2;
        let value = (t0 + t1 + t2) * inv;
        let rate = (i * w * t0 + z1 * t1 + z2 * t2) * inv;
        (value, rate)
    }

    /// B*_w(t) = e^{iwt}·A0(w) + R(w) continued to complex w.
    ///
    /// Returns (A0, R, ∂R/∂t) and the same three functions with every
    /// coefficient conjugated, so that on the real axis the second triple
    /// equals the complex conjugate of the first.
    pub(crate) fn split(&self, w: C) -> (SplitParts, SplitParts) {
        let CharacteristicRoots { z1, z2 } = self.response.roots;
        let g = self.response.gamma;
        let direct = split_parts(w, C::i(), z1, z2, self.e1, self.e2, g);
        let conj = split_parts(
            w,
            -C::i(),
            z1.conj(),
            z2.conj(),
            self.e1.conj(),
            self.e2.conj(),
            g,
        );
        (direct, conj)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitParts {
    pub a0: C,
    pub r: C,
    pub r_dot: C,
}

fn split_parts(w: C, i: C, z1: C, z2: C, e1: C, e2: C, gamma: f64) -> SplitParts {
    let dz = z1 - z2;
    let p1 = w + i * z1;
    let p2 = w + i * z2;
    let t1 = e1 * (z2 - i * w) * (z1 + gamma);
    let t2 = e2 * i * p1 * (z2 + gamma);
    let inv = 1.0 / (p1 * dz * p2);
    SplitParts {
        a0: (gamma + i * w) / (p1 * p2),
        r: (t1 + t2) * inv,
        r_dot: (z1 * t1 + z2 * t2) * inv,
    }
}

/// Ã*(t) for the given roots.
pub fn amplitude(t: f64, roots: &CharacteristicRoots, params: &ModelParams) -> Result<C> {
    Ok(Response::from_roots(*roots, params)?.amplitude(t))
}

/// dÃ*/dt in closed form.
pub fn amplitude_derivative(
    t: f64,
    roots: &CharacteristicRoots,
    params: &ModelParams,
) -> Result<C> {
    Ok(Response::from_roots(*roots, params)?.amplitude_derivative(t))
}

/// B*_w(t).
pub fn bath_response(
    w: f64,
    t: f64,
    roots: &CharacteristicRoots,
    params: &ModelParams,
) -> Result<C> {
    Response::from_roots(*roots, params)?.at(t).bath_response(w)
}

/// ∂B*_w(t)/∂t in closed form.
pub fn bath_response_derivative(
    w: f64,
    t: f64,
    roots: &CharacteristicRoots,
    params: &ModelParams,
) -> Result<C> {
    Response::from_roots(*roots, params)?
        .at(t)
        .bath_response_derivative(w)
}
