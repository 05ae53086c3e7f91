//! Deterministic quadrature rules shared by the engines.

use std::f64::consts::PI;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of Gauss-Hermite nodes used for Gaussian Lie-algebra integrals.
pub const HERMITE_NODES: usize = 200;

/// A one-dimensional quadrature rule: nodes and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss-Hermite rule for the weight `exp(-x^2)` on the real line.
///
/// Nodes start from the eigenvalues of the Jacobi matrix and are polished by
/// Newton steps on the orthonormal Hermite recurrence, which stays finite for
/// several hundred nodes; weights come from the polished derivative.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n >= 1, "gauss_hermite needs at least one node");
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for (i, &guess) in guesses.iter().enumerate() {
        let mut z = guess;
        let mut pp = 1.0;
        for step in 0..4 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            if step < 3 {
                z -= p1 / pp;
            }
        }
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // symmetrize
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// The shared 200-node Hermite rule.
pub fn hermite_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(HERMITE_NODES))
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[n - 1 - i] = weights[i];
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Rule {
        nodes: base.nodes.iter().map(|x| mid + half * x).collect(),
        weights: base.weights.iter().map(|w| half * w).collect(),
    }
}

/// Composite trapezoid rule for `2 pi`-periodic integrands with dyadic
/// refinement. Returns the mean value `(1/2pi) * integral over [0, 2pi)`.
///
/// Refinement stops when successive estimates differ by less than
/// `tolerance * max(1, |estimate|)`.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicTrapezoid {
    pub tolerance: f64,
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for PeriodicTrapezoid {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            min_points: 64,
            max_points: 1 << 20,
        }
    }
}

/// Values the trapezoid rule can accumulate.
pub trait Accumulate: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Accumulate for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Accumulate for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

impl PeriodicTrapezoid {
    /// A rule whose starting grid resolves features of width `width`, so that
    /// narrow peaks cannot slip between the first two grids unnoticed.
    pub fn resolving(width: f64) -> Self {
        let mut rule = Self::default();
        if width > 0.0 && width.is_finite() {
            let needed = (16.0 * PI / width).ceil().min(rule.max_points as f64 / 4.0) as usize;
            rule.min_points = needed.next_power_of_two().max(rule.min_points);
        }
        rule
    }

    pub fn mean<T: Accumulate>(&self, f: impl Fn(f64) -> T) -> Result<T> {
        let mut n = self.min_points.max(2);
        let mut sum = (0..n).fold(T::zero(), |acc, k| acc + f(2.0 * PI * k as f64 / n as f64));
        let mut estimate = sum * (1.0 / n as f64);
        while n < self.max_points {
            // midpoints of the current grid
            let mid = (0..n).fold(T::zero(), |acc, k| {
                acc + f(2.0 * PI * (k as f64 + 0.5) / n as f64)
            });
            sum = sum + mid;
            n *= 2;
            let refined = sum * (1.0 / n as f64);
            let change = (refined + estimate * -1.0).magnitude();
            estimate = refined;
            if change < self.tolerance * estimate.magnitude().max(1.0) {
                return Ok(estimate);
            }
        }
        Err(Error::QuadratureNonConvergence {
            points: n,
            estimate: estimate.magnitude(),
        })
    }
}

/// Radical-inverse Halton point in `[0,1)^dim` (first primes as bases).
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    assert!(dim <= PRIMES.len(), "halton supports up to 12 dimensions");
    PRIMES[..dim]
        .iter()
        .map(|&base| {
            let mut f = 1.0;
            let mut r = 0.0;
            let mut i = index;
            let b = base as f64;
            while i > 0 {
                f /= b;
                r += f * (i % base) as f64;
                i /= base;
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let rule = gauss_hermite(HERMITE_NODES);
        let m0: f64 = rule.weights.iter().sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-12);
        // integral of x^2 e^{-x^2} = sqrt(pi)/2, of x^4 e^{-x^2} = 3 sqrt(pi)/4
        let m2: f64 = rule.iter().map(|(x, w)| w * x * x).sum();
        let m4: f64 = rule.iter().map(|(x, w)| w * x.powi(4)).sum();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!((m4 - 3.0 * PI.sqrt() / 4.0).abs() < 1e-12);
        // integral of cos(2x) e^{-x^2} = sqrt(pi) e^{-1}
        let c: f64 = rule.iter().map(|(x, w)| w * (2.0 * x).cos()).sum();
        assert!((c - PI.sqrt() * (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn small_hermite_rule_is_exact() {
        let rule = gauss_hermite(3);
        let expected = [-(1.5f64).sqrt(), 0.0, 1.5f64.sqrt()];
        for (x, e) in rule.nodes.iter().zip(expected) {
            assert!((x - e).abs() < 1e-13);
        }
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre_on(12, 0.0, 2.0);
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((v - 2f64.powi(8) / 8.0).abs() < 1e-11);
    }

    #[test]
    fn trapezoid_is_exact_for_trig_polynomials() {
        let q = PeriodicTrapezoid::default();
        let v = q.mean(|t| 1.0 + (3.0 * t).cos().powi(2)).unwrap();
        assert!((v - 1.5).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_reports_non_convergence() {
        let q = PeriodicTrapezoid {
            tolerance: 1e-10,
            min_points: 4,
            max_points: 16,
        };
        let err = q.mean(|t| (1000.0 * t).cos() + t).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }

    #[test]
    fn halton_first_points() {
        assert_eq!(halton(1, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(2, 2), vec![0.25, 2.0 / 3.0]);
    }
}
