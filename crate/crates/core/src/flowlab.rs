//! Holomorphic maps `ℍᵏ → ℍ` fixing the diagonal, and the translation flow on them.

use crate::affine::dist_h;
use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("point or value outside the upper half-plane")]
    DomainViolation,
    #[error("weights must be positive and sum to 1")]
    BadWeights,
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
}

impl FlowError {
    pub fn code(&self) -> &'static str {
        match self {
            FlowError::DomainViolation => "DomainViolation",
            FlowError::BadWeights => "BadWeights",
            FlowError::WrongArity { .. } => "WrongArity",
        }
    }
}

/// Real Möbius map `z ↦ (az + b)/(cz + d)` with `ad − bc > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Option<Self> {
        (a * d - b * c > 0.0).then_some(Mobius { a, b, c, d })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalFixingMap {
    /// `Σ aⱼ λⱼ`
    Linear(Vec<f64>),
    /// `Π λⱼ^{aⱼ}` with principal branches.
    GeometricMean(Vec<f64>),
    /// `M⁻¹ ∘ f ∘ (M, …, M)`
    MobiusConjugate(Box<DiagonalFixingMap>, Mobius),
    /// `f(λ − t, …, λ − t) + t`
    FlowShift(Box<DiagonalFixingMap>, f64),
}

fn check_weights(w: &[f64]) -> Result<(), FlowError> {
    if w.is_empty() || w.iter().any(|&a| !(a > 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(FlowError::BadWeights);
    }
    Ok(())
}

impl DiagonalFixingMap {
    pub fn linear(w: Vec<f64>) -> Result<Self, FlowError> {
        check_weights(&w)?;
        Ok(DiagonalFixingMap::Linear(w))
    }

    pub fn geometric_mean(w: Vec<f64>) -> Result<Self, FlowError> {
        check_weights(&w)?;
        Ok(DiagonalFixingMap::GeometricMean(w))
    }

    pub fn mobius_conjugate(f: DiagonalFixingMap, m: Mobius) -> Self {
        DiagonalFixingMap::MobiusConjugate(Box::new(f), m)
    }

    pub fn arity(&self) -> usize {
        match self {
            DiagonalFixingMap::Linear(w) | DiagonalFixingMap::GeometricMean(w) => w.len(),
            DiagonalFixingMap::MobiusConjugate(f, _) | DiagonalFixingMap::FlowShift(f, _) => f.arity(),
        }
    }

    fn raw(&self, l: &[Complex64]) -> Complex64 {
        match self {
            DiagonalFixingMap::Linear(w) => w.iter().zip(l).map(|(&a, &z)| z * a).sum(),
            DiagonalFixingMap::GeometricMean(w) => w.iter().zip(l).map(|(&a, &z)| z.ln() * a).sum::<Complex64>().exp(),
            DiagonalFixingMap::MobiusConjugate(f, m) => {
                let inner: Vec<Complex64> = l.iter().map(|&z| m.apply(z)).collect();
                m.inverse().apply(f.raw(&inner))
            }
            DiagonalFixingMap::FlowShift(f, t) => {
                let inner: Vec<Complex64> = l.iter().map(|&z| z - t).collect();
                f.raw(&inner) + t
            }
        }
    }

    pub fn eval(&self, l: &[Complex64]) -> Result<Complex64, FlowError> {
        if l.len() != self.arity() {
            return Err(FlowError::WrongArity { expected: self.arity(), got: l.len() });
        }
        if l.iter().any(|z| !(z.im > 0.0)) {
            return Err(FlowError::DomainViolation);
        }
        let v = self.raw(l);
        if !(v.im > 0.0) {
            return Err(FlowError::DomainViolation);
        }
        Ok(v)
    }
}

/// `f_t(λ) = f(λ − t) + t`. Shifts compose by adding; linear maps are fixed points.
pub fn flow(f: &DiagonalFixingMap, t: f64) -> DiagonalFixingMap {
    if t == 0.0 {
        return f.clone();
    }
    match f {
        DiagonalFixingMap::Linear(_) => f.clone(),
        DiagonalFixingMap::FlowShift(g, s) => {
            if s + t == 0.0 {
                (**g).clone()
            } else {
                DiagonalFixingMap::FlowShift(g.clone(), s + t)
            }
        }
        _ => DiagonalFixingMap::FlowShift(Box::new(f.clone()), t),
    }
}

/// Step of the central differences in [`linear_part`].
pub const DIFF_STEP: f64 = 1e-5;

/// `∂f/∂λⱼ` at `(i, …, i)`, by Richardson-extrapolated central differences.
pub fn linear_part(f: &DiagonalFixingMap) -> Vec<f64> {
    let k = f.arity();
    let base = vec![Complex64::new(0.0, 1.0); k];
    let central = |j: usize, h: f64| {
        let mut p = base.clone();
        let mut m = base.clone();
        p[j] += h;
        m[j] -= h;
        (f.raw(&p) - f.raw(&m)) / (2.0 * h)
    };
    (0..k)
        .map(|j| {
            let d1 = central(j, DIFF_STEP);
            let d2 = central(j, DIFF_STEP / 2.0);
            ((d2 * 4.0 - d1) / 3.0).re
        })
        .collect()
}

/// Finite weighted set of points of `ℍᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactGrid {
    pub nodes: Vec<Vec<Complex64>>,
    pub weights: Vec<f64>,
    pub radius: f64,
}

impl CompactGrid {
    /// Product grid: per factor, `Re ∈ linspace(−R, R, n)` and `Im` at `n` geometric nodes
    /// in `[1/R, R]`; uniform weights.
    pub fn product(k: usize, radius: f64, n: usize) -> Self {
        let step = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        let mut factor = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let re = -radius + 2.0 * radius * step(a);
                let im = libm::exp(libm::log(radius) * (2.0 * step(b) - 1.0));
                factor.push(Complex64::new(re, im));
            }
        }
        let mut nodes: Vec<Vec<Complex64>> = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(nodes.len() * factor.len());
            for p in &nodes {
                for &z in &factor {
                    let mut q = p.clone();
                    q.push(z);
                    next.push(q);
                }
            }
            nodes = next;
        }
        let weights = vec![1.0; nodes.len()];
        CompactGrid { nodes, weights, radius }
    }

    /// `R = 4`, five nodes per axis.
    pub fn standard(k: usize) -> Self {
        Self::product(k, 4.0, 5)
    }
}

/// Weighted sup of Poincaré distances between the values of `f` and `g` on the grid.
pub fn grid_distance(f: &DiagonalFixingMap, g: &DiagonalFixingMap, grid: &CompactGrid) -> f64 {
    grid.nodes
        .iter()
        .zip(&grid.weights)
        .map(|(x, &w)| w * dist_h(f.raw(x), g.raw(x)))
        .fold(0.0, f64::max)
}

/// Sample times `−r, −r + step, …` up to `r`.
pub fn sample_times(r: f64, t_step: f64) -> Vec<f64> {
    let n = libm::floor(2.0 * r / t_step + 1e-9) as usize;
    (0..=n).map(|k| -r + k as f64 * t_step).collect()
}

/// Fraction of sampled `t ∈ [−r, r]` with `f_t` within `ε` of its linear part on the grid.
pub fn density_estimate(f: &DiagonalFixingMap, eps: f64, r: f64, t_step: f64, grid: &CompactGrid) -> f64 {
    let lin = DiagonalFixingMap::Linear(linear_part(f));
    let ts = sample_times(r, t_step);
    let hits = ts.iter().filter(|&&t| grid_distance(&flow(f, t), &lin, grid) < eps).count();
    hits as f64 / ts.len() as f64
}

/// `(t, distance)` for every sampled time.
pub fn flow_distances(f: &DiagonalFixingMap, r: f64, t_step: f64, grid: &CompactGrid) -> Vec<(f64, f64)> {
    let lin = DiagonalFixingMap::Linear(linear_part(f));
    sample_times(r, t_step).into_iter().map(|t| (t, grid_distance(&flow(f, t), &lin, grid))).collect()
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Random point of `ℍᵏ` with `|Re| ≤ 5` and `Im` log-uniform in `[e⁻³, e³]`.
pub fn random_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<Complex64> {
    (0..k).map(|_| Complex64::new(10.0 * uniform(rng) - 5.0, libm::exp(6.0 * uniform(rng) - 3.0))).collect()
}

/// Largest `d(f(x), f(y)) − maxⱼ d(xⱼ, yⱼ)` over random pairs.
pub fn schwarz_pick_check(f: &DiagonalFixingMap, sample_count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = f.arity();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..sample_count {
        let x = random_point(&mut rng, k);
        let y = random_point(&mut rng, k);
        let lhs = dist_h(f.raw(&x), f.raw(&y));
        let rhs = x.iter().zip(&y).map(|(&a, &b)| dist_h(a, b)).fold(0.0, f64::max);
        worst = worst.max(lhs - rhs);
    }
    worst
}

/// `(c, d)` with `Σ aⱼ (Im μⱼ λ + Re μⱼ) = cλ + d`.
pub fn affine_composition(weights: &[f64], mu: &[Complex64]) -> (f64, f64) {
    let c = weights.iter().zip(mu).map(|(a, m)| a * m.im).sum();
    let d = weights.iter().zip(mu).map(|(a, m)| a * m.re).sum();
    (c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation() {
        let g = DiagonalFixingMap::geometric_mean(vec![0.5, 0.5]).unwrap();
        assert!((g.eval(&[c(0.0, 1.0), c(0.0, 4.0)]).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
        assert!((g.eval(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let l = DiagonalFixingMap::linear(vec![0.25, 0.75]).unwrap();
        assert_eq!(l.eval(&[c(1.0, 1.0), c(-1.0, 3.0)]).unwrap(), c(-0.5, 2.5));
        assert_eq!(l.eval(&[c(1.0, -1.0), c(0.0, 1.0)]), Err(FlowError::DomainViolation));
        assert_eq!(DiagonalFixingMap::linear(vec![0.5, 0.6]), Err(FlowError::BadWeights));
    }

    #[test]
    fn diagonal_fixed() {
        let m = Mobius::new(2.0, 1.0, -1.0, 3.0).unwrap();
        let fams = [
            DiagonalFixingMap::geometric_mean(vec![0.2, 0.3, 0.5]).unwrap(),
            DiagonalFixingMap::mobius_conjugate(DiagonalFixingMap::geometric_mean(vec![0.5, 0.25, 0.25]).unwrap(), m),
            flow(&DiagonalFixingMap::geometric_mean(vec![0.2, 0.3, 0.5]).unwrap(), 7.5),
        ];
        for f in &fams {
            for z in [c(0.3, 0.2), c(-4.0, 2.0), c(10.0, 0.01)] {
                let v = f.eval(&[z, z, z]).unwrap();
                assert!((v - z).norm() < 1e-10 * (1.0 + z.norm()), "{v} {z}");
            }
        }
    }

    #[test]
    fn flow_group_law() {
        let g = DiagonalFixingMap::geometric_mean(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert_eq!(flow(&g, 0.0), g);
        assert_eq!(flow(&flow(&g, 2.0), 3.5), flow(&g, 5.5));
        assert_eq!(flow(&flow(&g, 2.0), -2.0), g);
        let l = DiagonalFixingMap::linear(vec![0.5, 0.5]).unwrap();
        assert_eq!(flow(&l, 11.0), l);
    }

    #[test]
    fn derivatives() {
        let w = vec![1.0 / 3.0, 2.0 / 3.0];
        for f in [DiagonalFixingMap::linear(w.clone()).unwrap(), DiagonalFixingMap::geometric_mean(w.clone()).unwrap()] {
            let a = linear_part(&f);
            for j in 0..2 {
                assert!((a[j] - w[j]).abs() < 1e-8);
            }
            let ft = linear_part(&flow(&f, 3.0));
            assert!((ft[0] - a[0]).abs() < 1e-6);
        }
        let m = Mobius::new(1.0, 2.0, 0.5, 3.0).unwrap();
        let f = DiagonalFixingMap::mobius_conjugate(DiagonalFixingMap::geometric_mean(w).unwrap(), m);
        let a = linear_part(&f);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn grid_and_distance() {
        let grid = CompactGrid::standard(2);
        assert_eq!(grid.nodes.len(), 625);
        let a = DiagonalFixingMap::linear(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let b = DiagonalFixingMap::linear(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(grid_distance(&a, &a, &grid), 0.0);
        assert!(grid_distance(&a, &b, &grid) > 0.0);
        assert_eq!(grid_distance(&a, &b, &grid), grid_distance(&b, &a, &grid));
        assert_eq!(density_estimate(&a, 1e-3, 10.0, 0.5, &grid), 1.0);
    }

    #[test]
    fn schwarz_pick() {
        let id = DiagonalFixingMap::linear(vec![1.0]).unwrap();
        assert!(schwarz_pick_check(&id, 200, 1).abs() < 1e-12);
        let g = DiagonalFixingMap::geometric_mean(vec![0.3, 0.7]).unwrap();
        assert!(schwarz_pick_check(&g, 2000, 2) <= 1e-12);
    }
}
