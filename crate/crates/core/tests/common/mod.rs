#![allow(dead_code)]

use collective_bath::model::{BathStatistics, ModelParams};
use num_complex::Complex64 as C;

pub fn params(g0: f64, temperature: f64, statistics: BathStatistics) -> ModelParams {
    ModelParams {
        omega: 1.0,
        g0,
        gamma: 12.0,
        temperature,
        mu: 0.0,
        statistics,
        n0: 0.0,
    }
}

/// Integrates x' = iΩx + i·drive(t) + iy, y' = g₀γx' − γy with classical RK4.
pub fn volterra(p: &ModelParams, x0: C, drive: impl Fn(f64) -> C, t_end: f64, steps: usize) -> C {
    let i = C::i();
    let rhs = |t: f64, x: C, y: C| {
        let dx = i * p.omega * x + i * drive(t) + i * y;
        let dy = p.g0 * p.gamma * dx - p.gamma * y;
        (dx, dy)
    };
    let h = t_end / steps as f64;
    let (mut x, mut y) = (x0, C::new(0.0, 0.0));
    for k in 0..steps {
        let t = k as f64 * h;
        let (a1, b1) = rhs(t, x, y);
        let (a2, b2) = rhs(t + 0.5 * h, x + 0.5 * h * a1, y + 0.5 * h * b1);
        let (a3, b3) = rhs(t + 0.5 * h, x + 0.5 * h * a2, y + 0.5 * h * b2);
        let (a4, b4) = rhs(t + h, x + h * a3, y + h * b3);
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        y += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    x
}

/// Richardson-extrapolated central difference, O(h⁴).
pub fn derivative<V>(f: impl Fn(f64) -> V, x: f64, h: f64) -> V
where
    V: std::ops::Sub<Output = V> + std::ops::Mul<f64, Output = V> + Copy,
{
    let d = |h: f64| (f(x + h) - f(x - h)) * (0.5 / h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (fine * 4.0 - coarse) * (1.0 / 3.0)
}

/// Composite trapezoid on [0, w_max] with `n` intervals; `f(0)` must be 0.
pub fn trapezoid(f: impl Fn(f64) -> f64, w_max: f64, n: usize) -> f64 {
    let h = w_max / n as f64;
    let mut s = 0.5 * f(w_max);
    for k in 1..n {
        s += f(k as f64 * h);
    }
    s * h
}
