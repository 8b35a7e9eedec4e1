//! Adaptive Gauss-Kronrod quadrature over w ∈ [0, ∞) for smooth integrands
//! with oscillatory factors e^{±iwt} and sharp thermal features.
//!
//! The interval [0, W] is seeded with a mesh that resolves the oscillation
//! period 2π/t on [0, 3γ] and grades geometrically around caller-supplied
//! features (Fermi edge, Lorentzian peak, origin). Past W, panels of doubling
//! width are appended until a 1/w² envelope bound on the remaining tail is
//! negligible. The 7-15 rule is open, so w = 0 is never evaluated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Panels per oscillation half-period multiplier: width ≤ π/(4·max(t, 1/γ))·PANEL_SCALE.
/// With 15 nodes per panel this keeps ≥ 30 nodes per period of e^{iwt}.
pub const PANEL_SCALE: f64 = 4.0;
/// The oscillation-resolving mesh covers [0, OSCILLATION_BAND·γ].
pub const OSCILLATION_BAND: f64 = 3.0;
const MAX_TAIL_DOUBLINGS: usize = 60;

/// Values that can be integrated: real, complex, or small real vectors.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Magnitude used for error control (max-norm for vectors).
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn components(&self) -> Vec<f64>;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn components(&self) -> Vec<f64> {
        vec![*self]
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
    fn components(&self) -> Vec<f64> {
        vec![self.re, self.im]
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        self
    }
    fn scale(mut self, s: f64) -> Self {
        for a in self.iter_mut() {
            *a *= s;
        }
        self
    }
    fn norm(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
    fn components(&self) -> Vec<f64> {
        self.to_vec()
    }
}

/// How the finite part [0, W] of the half line is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WMaxPolicy {
    /// W = max(20γ, Ω + 50T, 10Ω, μ + 50T).
    #[default]
    Default,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub w_max_policy: WMaxPolicy,
    pub max_panels: usize,
    /// Largest time t appearing in e^{iwt} factors of the integrand.
    pub oscillation_time: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            w_max_policy: WMaxPolicy::Default,
            max_panels: 1 << 21,
            oscillation_time: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_time(mut self, t: f64) -> Self {
        self.oscillation_time = t;
        self
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let bad = |reason: &str| Err(QuadratureError::InvalidSpec(reason.to_string()));
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol must be positive");
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol must be positive");
        }
        if self.max_panels < 4 {
            return bad("max_panels must be at least 4");
        }
        if !(self.oscillation_time >= 0.0) || !self.oscillation_time.is_finite() {
            return bad("oscillation_time must be finite and non-negative");
        }
        if let WMaxPolicy::Fixed(w) = self.w_max_policy {
            if !(w > 0.0) || !w.is_finite() {
                return bad("fixed w_max must be positive");
            }
        }
        Ok(())
    }
}

/// A region where the integrand varies on scale `width` around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub center: f64,
    pub width: f64,
}

/// Physical scales that shape the initial mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyScales {
    pub omega: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub mu: f64,
    pub features: Vec<Feature>,
}

impl FrequencyScales {
    pub fn new(omega: f64, gamma: f64) -> Self {
        FrequencyScales {
            omega,
            gamma,
            temperature: 0.0,
            mu: 0.0,
            features: Vec::new(),
        }
    }

    pub fn with_thermal(mut self, temperature: f64, mu: f64) -> Self {
        self.temperature = temperature;
        self.mu = mu;
        self
    }

    pub fn with_feature(mut self, center: f64, width: f64) -> Self {
        self.features.push(Feature { center, width });
        self
    }

    pub fn w_max(&self, policy: WMaxPolicy) -> f64 {
        match policy {
            WMaxPolicy::Fixed(w) => w,
            WMaxPolicy::Default => {
                let t50 = 50.0 * self.temperature;
                (20.0 * self.gamma)
                    .max(self.omega + t50)
                    .max(10.0 * self.omega)
                    .max(self.mu + t50)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<V> {
    pub value: V,
    /// Summed panel error plus the truncation bound.
    pub error_estimate: f64,
    pub panels_used: usize,
    /// Envelope bound on the integral beyond the last tail panel.
    pub truncation_bound: f64,
    pub evaluations: usize,
    /// End of the integrated region.
    pub w_end: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("integrand is not finite at w = {w}")]
    NonFinite { w: f64 },
    #[error(
        "no convergence within {panels} panels: estimate {estimate:?}, error {error_estimate:e}"
    )]
    NonConvergence {
        estimate: Vec<f64>,
        error_estimate: f64,
        panels: usize,
    },
}

#[derive(Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Apply the 7-15 pair on [a, b]; also returns max |f|·w² over the nodes.
fn kronrod<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
) -> Result<(Panel<V>, f64), QuadratureError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = V::zero();
    let mut g = V::zero();
    let mut envelope: f64 = 0.0;
    let mut eval = |x: f64| -> Result<V, QuadratureError> {
        let v = f(x);
        if !v.is_finite() {
            return Err(QuadratureError::NonFinite { w: x });
        }
        envelope = envelope.max(v.norm() * x * x);
        Ok(v)
    };
    let fc = eval(c)?;
    k = k.add(fc.scale(WGK[7]));
    g = g.add(fc.scale(WG[3]));
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = eval(c - dx)?.add(eval(c + dx)?);
        k = k.add(s.scale(WGK[j]));
        if j % 2 == 1 {
            g = g.add(s.scale(WG[j / 2]));
        }
    }
    let k = k.scale(h);
    let g = g.scale(h);
    let error = k.add(g.scale(-1.0)).norm();
    Ok((
        Panel {
            a,
            b,
            value: k,
            error,
        },
        envelope,
    ))
}

fn initial_mesh(spec: &QuadratureSpec, scales: &FrequencyScales, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    let mut features = scales.features.clone();
    features.push(Feature {
        center: 0.0,
        width: scales.gamma,
    });
    features.push(Feature {
        center: 0.0,
        width: scales.omega,
    });
    if scales.temperature > 0.0 {
        features.push(Feature {
            center: 0.0,
            width: scales.temperature,
        });
    }
    if scales.mu > 0.0 {
        pts.push(scales.mu);
        if scales.temperature > 0.0 {
            features.push(Feature {
                center: scales.mu,
                width: scales.temperature,
            });
        }
    }
    for ft in &features {
        if !(ft.width > 0.0) || !ft.center.is_finite() {
            continue;
        }
        pts.push(ft.center);
        for k in -3i32..=60 {
            let d = ft.width * 2f64.powi(k);
            if d > hi {
                break;
            }
            pts.push(ft.center - d);
            pts.push(ft.center + d);
        }
    }
    pts.retain(|&x| x >= lo && x <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * hi.abs().max(f64::MIN_POSITIVE));

    let band = OSCILLATION_BAND * scales.gamma;
    let t_eff = spec.oscillation_time.max(1.0 / scales.gamma);
    let h_band = PI / (4.0 * t_eff) * PANEL_SCALE;
    let h_far = (hi - lo) / 16.0;
    let mut mesh = Vec::with_capacity(pts.len());
    for win in pts.windows(2) {
        let (a, b) = (win[0], win[1]);
        mesh.push(a);
        let h = if a < band { h_band.min(h_far) } else { h_far };
        let n = ((b - a) / h).ceil() as usize;
        for j in 1..n {
            mesh.push(a + (b - a) * j as f64 / n as f64);
        }
    }
    mesh.push(hi);
    mesh
}

/// Integrate `f` over [0, ∞).
pub fn integrate_semi_infinite<V, F>(
    f: F,
    spec: &QuadratureSpec,
    scales: &FrequencyScales,
) -> Result<QuadratureResult<V>, QuadratureError>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate_from(f, 0.0, spec, scales)
}

/// Integrate `f` over [a, ∞); the finite part ends at max(W, 2a).
pub fn integrate_from<V, F>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
    scales: &FrequencyScales,
) -> Result<QuadratureResult<V>, QuadratureError>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    spec.validate()?;
    check_lower(a)?;
    let w_max = scales.w_max(spec.w_max_policy).max(2.0 * a);
    adapt(&f, &initial_mesh(spec, scales, a, w_max), true, spec)
}

/// Integrate `f` over the finite interval [a, b].
pub fn integrate_interval<V, F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    scales: &FrequencyScales,
) -> Result<QuadratureResult<V>, QuadratureError>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    spec.validate()?;
    check_lower(a)?;
    if !(b > a) || !b.is_finite() {
        return Err(QuadratureError::InvalidSpec(format!(
            "interval [{a}, {b}] is empty or unbounded"
        )));
    }
    adapt(&f, &initial_mesh(spec, scales, a, b), false, spec)
}

fn check_lower(a: f64) -> Result<(), QuadratureError> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(QuadratureError::InvalidSpec(format!(
            "lower limit must be finite and non-negative, got {a}"
        )));
    }
    Ok(())
}

fn adapt<V, F>(
    f: &F,
    mesh: &[f64],
    with_tail: bool,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<V>, QuadratureError>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mut heap = BinaryHeap::with_capacity(mesh.len() * 2);
    let mut evaluations = 0usize;
    let mut total = V::zero();
    let mut total_err = 0.0;
    for win in mesh.windows(2) {
        let (p, _) = kronrod(f, win[0], win[1])?;
        evaluations += 15;
        total = total.add(p.value);
        total_err += p.error;
        heap.push(p);
    }

    // Tail panels of doubling width until the envelope bound is negligible.
    let mut end = *mesh.last().expect("mesh has two points");
    let mut truncation_bound = 0.0;
    if with_tail {
        truncation_bound = f64::INFINITY;
        for _ in 0..MAX_TAIL_DOUBLINGS {
            let (p, envelope) = kronrod(f, end, 2.0 * end)?;
            evaluations += 15;
            total = total.add(p.value);
            total_err += p.error;
            heap.push(p);
            end *= 2.0;
            truncation_bound = envelope / end;
            let target = (spec.rel_tol * total.norm()).max(spec.abs_tol);
            if truncation_bound < 0.1 * target {
                break;
            }
        }
    }

    let mut since_resum = 0usize;
    loop {
        let target = (spec.rel_tol * total.norm()).max(spec.abs_tol);
        if total_err + truncation_bound <= target {
            break;
        }
        if heap.len() + 1 > spec.max_panels {
            return Err(non_convergence(&heap, truncation_bound));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || worst.b - worst.a <= 4.0 * f64::EPSILON * worst.b {
            heap.push(worst);
            return Err(non_convergence(&heap, truncation_bound));
        }
        let (l, _) = kronrod(f, worst.a, mid)?;
        let (r, _) = kronrod(f, mid, worst.b)?;
        evaluations += 30;
        total = total.add(l.value).add(r.value).add(worst.value.scale(-1.0));
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        since_resum += 1;
        if since_resum >= 4096 {
            since_resum = 0;
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }

    let (value, err) = ordered_sum(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate: err + truncation_bound,
        panels_used: heap.len(),
        truncation_bound,
        evaluations,
        w_end: end,
    })
}

/// Deterministic left-to-right summation of all panels.
fn ordered_sum<V: QuadValue>(heap: &BinaryHeap<Panel<V>>) -> (V, f64) {
    let mut panels: Vec<&Panel<V>> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels
        .iter()
        .fold((V::zero(), 0.0), |(v, e), p| (v.add(p.value), e + p.error))
}

fn non_convergence<V: QuadValue>(heap: &BinaryHeap<Panel<V>>, tail: f64) -> QuadratureError {
    let (value, err) = ordered_sum(heap);
    QuadratureError::NonConvergence {
        estimate: value.components(),
        error_estimate: err + tail,
        panels: heap.len(),
    }
}
