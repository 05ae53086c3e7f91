//! Perturbative Wilson loops on the plane in holomorphic gauge.
//!
//! Pulling the propagator back to a loop `z(t)`, `t in [0,1)`, gives the
//! scalar kernel `k(t,s) = (1/4 pi) (conj z(t) - conj z(s)) / (z(t) - z(s)) z'(t) z'(s)`
//! times `e_a e_a`. The order-`lambda0^n` term of `tr P exp(-int A)` is a sum
//! over perfect matchings of `2n` time-ordered insertions: an iterated simplex
//! integral of products of `k` times the Lie factor
//! `tr(rho(e_{a_2n}) ... rho(e_{a_1}))` with paired indices summed.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::asymptotic_series;
use crate::error::{Error, Result};
use crate::liegroup::{ClassFunction, GroupKind, Irrep};
use crate::quadrature::{gauss_legendre, halton};
use crate::wick::perfect_matchings;

type CMat = DMatrix<Complex64>;

pub const MAX_PERT_ORDER: usize = 3;
/// Default number of quadrature points per coefficient.
pub const DEFAULT_QUAD_BUDGET: usize = 1_000_000;
pub const QUAD_BUDGET_ENV: &str = "YM2D_QUAD_BUDGET";
pub const DEFAULT_PERT_SEED: u64 = 0x3141_5926;
/// Agreement tolerance for orders 0..=2 in [`decompactified_comparison`].
pub const COMPARISON_TOLERANCE: f64 = 1e-4;

/// Below this separation in `t` the kernel is replaced by its diagonal limit.
const DIAGONAL_GAP: f64 = 1e-6;
/// Sign of the order-`n` term of `P exp(-int A)`: `(-1)^{2n}`. Fixed once by
/// requiring the order-1 coefficient to be `-c2 dim |R| / 2`.
const EXPANSION_SIGN: f64 = 1.0;
const RQMC_REPLICATES: usize = 8;

/// Number of points spent on one perturbative coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadBudget(usize);

impl QuadBudget {
    pub fn new(points: usize) -> Result<Self> {
        if points < 1000 {
            return Err(Error::InvalidInput(format!("quadrature budget must be at least 1000, got {points}")));
        }
        Ok(Self(points))
    }

    /// Reads `YM2D_QUAD_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(QUAD_BUDGET_ENV) {
            Ok(v) => {
                let n: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("{QUAD_BUDGET_ENV}={v} is not a number")))?;
                if !(n.is_finite() && n >= 0.0) {
                    return Err(Error::InvalidInput(format!("{QUAD_BUDGET_ENV}={v} is not a valid budget")));
                }
                Self::new(n as usize)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn points(self) -> usize {
        self.0
    }

    /// Gauss-Legendre nodes per axis for a `dim`-dimensional tensor rule.
    fn nodes_per_axis(self, dim: usize) -> usize {
        let cap = match dim {
            1 | 2 => 256,
            _ => 32,
        };
        ((self.0 as f64).powf(1.0 / dim as f64).floor() as usize).clamp(6, cap)
    }
}

impl Default for QuadBudget {
    fn default() -> Self {
        Self(DEFAULT_QUAD_BUDGET)
    }
}

/// One sample of a parametrized curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSample {
    pub t: f64,
    pub position: Complex64,
    pub velocity: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoopShape {
    Circle { center: Complex64, radius: f64 },
    PolyParam { samples: Vec<ParamSample> },
}

/// A smooth simple closed curve in the plane, positively oriented, on `t in [0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourLoop {
    shape: LoopShape,
    /// Fourier modes `z(t) = sum c_k e^{2 pi i k t}` of a sampled curve.
    modes: Vec<(i64, Complex64)>,
    enclosed_area: f64,
}

#[derive(Debug, Clone, Copy)]
struct LoopPoint {
    t: f64,
    z: Complex64,
    dz: Complex64,
}

impl ContourLoop {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            shape: LoopShape::Circle { center, radius },
            modes: Vec::new(),
            enclosed_area: PI * radius * radius,
        })
    }

    pub fn unit_circle() -> Self {
        Self::circle(Complex64::new(0.0, 0.0), 1.0).expect("unit radius")
    }

    /// Builds a curve from samples on the uniform grid `t_j = j / N`, interpolated
    /// by its trigonometric polynomial. Velocities must match that interpolant.
    pub fn from_samples(samples: Vec<ParamSample>) -> Result<Self> {
        let n = samples.len();
        if n < 8 {
            return Err(Error::InvalidInput("a sampled loop needs at least 8 samples".into()));
        }
        for (j, s) in samples.iter().enumerate() {
            if (s.t - j as f64 / n as f64).abs() > 1e-12 {
                return Err(Error::InvalidInput("samples must lie on the uniform grid t = j/N".into()));
            }
        }
        let half = (n as i64 - 1) / 2;
        let mut modes: Vec<(i64, Complex64)> = (-half..=half)
            .map(|k| {
                let c = samples
                    .iter()
                    .map(|s| s.position * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * s.t))
                    .sum::<Complex64>()
                    / n as f64;
                (k, c)
            })
            .collect();
        let largest = modes.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        modes.retain(|(_, c)| c.norm() > 1e-13 * largest);
        let mut lp = Self {
            shape: LoopShape::PolyParam { samples },
            modes,
            enclosed_area: 0.0,
        };
        let vscale = lp.samples().iter().map(|s| s.velocity.norm()).fold(0.0, f64::max);
        for s in lp.samples() {
            let v = lp.point(s.t).dz;
            if (v - s.velocity).norm() > 1e-6 * vscale.max(1e-300) {
                return Err(Error::InvalidInput(format!(
                    "sample velocity at t = {} disagrees with the curve's derivative",
                    s.t
                )));
            }
            if (lp.point(s.t).z - s.position).norm() > 1e-9 * largest {
                return Err(Error::InvalidInput(
                    "samples are not resolved by their trigonometric interpolant".into(),
                ));
            }
        }
        // Im(1/2 int conj(z) dz) = pi sum k |c_k|^2
        lp.enclosed_area = PI * lp.modes.iter().map(|(k, c)| *k as f64 * c.norm_sqr()).sum::<f64>();
        if !(lp.enclosed_area > 0.0) {
            return Err(Error::InvalidInput("loop must enclose positive area counter-clockwise".into()));
        }
        lp.check_simple()?;
        Ok(lp)
    }

    /// Sampled curve from a closed-form parametrization and its derivative.
    pub fn from_fn(n: usize, z: impl Fn(f64) -> Complex64, dz: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..n)
            .map(|j| {
                let t = j as f64 / n as f64;
                ParamSample {
                    t,
                    position: z(t),
                    velocity: dz(t),
                }
            })
            .collect();
        Self::from_samples(samples)
    }

    /// `z(t) = a cos(2 pi t) + i b sin(2 pi t)`, area `pi a b`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidInput("semi-axes must be positive".into()));
        }
        let w = 2.0 * PI;
        Self::from_fn(
            64,
            |t| Complex64::new(a * (w * t).cos(), b * (w * t).sin()),
            |t| Complex64::new(-a * w * (w * t).sin(), b * w * (w * t).cos()),
        )
    }

    pub fn shape(&self) -> &LoopShape {
        &self.shape
    }

    pub fn enclosed_area(&self) -> f64 {
        self.enclosed_area
    }

    fn samples(&self) -> &[ParamSample] {
        match &self.shape {
            LoopShape::PolyParam { samples } => samples,
            LoopShape::Circle { .. } => &[],
        }
    }

    fn point(&self, t: f64) -> LoopPoint {
        match self.shape {
            LoopShape::Circle { center, radius } => {
                let e = Complex64::from_polar(radius, 2.0 * PI * t);
                LoopPoint {
                    t,
                    z: center + e,
                    dz: Complex64::new(0.0, 2.0 * PI) * e,
                }
            }
            LoopShape::PolyParam { .. } => {
                let (mut z, mut dz) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for &(k, c) in &self.modes {
                    let term = c * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * t);
                    z += term;
                    dz += term * Complex64::new(0.0, 2.0 * PI * k as f64);
                }
                LoopPoint { t, z, dz }
            }
        }
    }

    pub fn position(&self, t: f64) -> Complex64 {
        self.point(t).z
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        self.point(t).dz
    }

    fn diameter_scale(&self) -> f64 {
        self.enclosed_area.sqrt()
    }

    /// Segment-intersection sweep over a 512-gon inscribed in the curve.
    fn check_simple(&self) -> Result<()> {
        const N: usize = 512;
        let pts: Vec<Complex64> = (0..N).map(|j| self.position(j as f64 / N as f64)).collect();
        let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
        for i in 0..N {
            let (p1, p2) = (pts[i], pts[(i + 1) % N]);
            for j in i + 2..N {
                if i == 0 && j == N - 1 {
                    continue;
                }
                let (q1, q2) = (pts[j], pts[(j + 1) % N]);
                let d1 = cross(q1, q2, p1);
                let d2 = cross(q1, q2, p2);
                let d3 = cross(p1, p2, q1);
                let d4 = cross(p1, p2, q2);
                if d1 * d2 <= 0.0 && d3 * d4 <= 0.0 {
                    return Err(Error::SelfIntersection {
                        t: i as f64 / N as f64,
                        s: j as f64 / N as f64,
                    });
                }
            }
        }
        Ok(())
    }

    fn kernel(&self, a: &LoopPoint, b: &LoopPoint) -> Result<Complex64> {
        let gap = (a.t - b.t).rem_euclid(1.0);
        if gap.min(1.0 - gap) < DIAGONAL_GAP {
            // (conj dz / dz) dz dz along the curve
            return Ok(Complex64::new(a.dz.norm_sqr() / (4.0 * PI), 0.0));
        }
        let dzw = a.z - b.z;
        if dzw.norm() <= 1e-12 * self.diameter_scale() {
            return Err(Error::SelfIntersection { t: a.t, s: b.t });
        }
        Ok((a.z - b.z).conj() / dzw * a.dz * b.dz / (4.0 * PI))
    }
}

/// The pulled-back holomorphic-gauge propagator `k(t, s)`.
///
/// On the diagonal it returns the limit along the curve, `|z'(t)|^2 / 4 pi`.
pub fn hol_propagator_on_loop(lp: &ContourLoop, t: f64, s: f64) -> Result<Complex64> {
    for v in [t, s] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidInput(format!("loop parameter {v} outside [0, 1)")));
        }
    }
    lp.kernel(&lp.point(t), &lp.point(s))
}

/// An irrep realised by explicit anti-Hermitian matrices on an orthonormal basis of the Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    irrep: Irrep,
    basis: Vec<CMat>,
}

impl MatrixRep {
    /// SU(2): spin `j = (m-1)/2` with `e_1, e_2, e_3 -> sqrt 2 (i J_z, -i J_y, -i J_x) / c`,
    /// which reproduces the defining basis at `m = 2`. U(1): `i n / c`.
    pub fn new(irrep: Irrep) -> Result<Self> {
        let c = irrep.group.metric_scale().sqrt();
        let i = Complex64::i();
        let basis = match irrep.group.kind() {
            GroupKind::U1 => vec![CMat::from_element(1, 1, i * irrep.label as f64 / c)],
            GroupKind::SU2 => {
                let m = irrep.label as usize;
                let j = (m as f64 - 1.0) / 2.0;
                let mu = |k: usize| j - k as f64;
                let jz = CMat::from_fn(m, m, |r, s| if r == s { Complex64::new(mu(r), 0.0) } else { Complex64::new(0.0, 0.0) });
                // J+ |mu> = sqrt(j(j+1) - mu(mu+1)) |mu+1>, row index k has weight mu(k)
                let jp = CMat::from_fn(m, m, |r, s| {
                    if s == r + 1 {
                        Complex64::new((j * (j + 1.0) - mu(s) * (mu(s) + 1.0)).sqrt(), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let jm = jp.adjoint();
                let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
                let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
                let s = Complex64::new(2f64.sqrt() / c, 0.0);
                vec![jz * i * s, jy * (-i) * s, jx * (-i) * s]
            }
        };
        let rep = Self { irrep, basis };
        rep.check()?;
        Ok(rep)
    }

    fn check(&self) -> Result<()> {
        let d = self.dim();
        let mut sum = CMat::zeros(d, d);
        for x in &self.basis {
            if (x.adjoint() + x).norm() > 1e-12 {
                return Err(Error::Consistency("representation matrix is not anti-Hermitian".into()));
            }
            sum += x * x;
        }
        let target = CMat::identity(d, d) * Complex64::new(-self.irrep.casimir, 0.0);
        if (sum - target).norm() > 1e-12 * (1.0 + self.irrep.casimir) {
            return Err(Error::Consistency("sum of squares is not -c2 times the identity".into()));
        }
        Ok(())
    }

    pub fn irrep(&self) -> Irrep {
        self.irrep
    }

    pub fn dim(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// `sum over paired indices of tr(rho(e_{a_{2n-1}}) ... rho(e_{a_0}))`.
    pub fn lie_factor(&self, pairs: &[(usize, usize)]) -> Complex64 {
        let npts = 2 * pairs.len();
        let d = self.basis.len();
        let mut label = vec![0usize; npts];
        let mut total = Complex64::new(0.0, 0.0);
        for code in 0..d.pow(pairs.len() as u32) {
            let mut c = code;
            for &(i, j) in pairs {
                label[i] = c % d;
                label[j] = c % d;
                c /= d;
            }
            let mut m = CMat::identity(self.dim(), self.dim());
            for &a in label.iter().rev() {
                m *= &self.basis[a];
            }
            total += m.trace();
        }
        total
    }
}

/// One perfect matching's share of a coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingTerm {
    pub pairs: Vec<(usize, usize)>,
    pub lie_factor: f64,
    pub integral_re: f64,
    pub integral_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PertMethod {
    Exact,
    GaussLegendre,
    RandomizedQmc,
}

/// Coefficient of `lambda0^n` in the perturbative expansion of `<tr_rho hol>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PertCoefficient {
    pub order: usize,
    pub value: f64,
    /// The same coefficient in units of `rho = lambda0 |R|`.
    pub value_rho: f64,
    pub imag_residue: f64,
    /// Quadrature error estimate (Gauss-Legendre) or standard error (QMC), in `value` units.
    pub error_estimate: f64,
    pub method: PertMethod,
    pub points: usize,
    /// Number of analytic simplex integrals evaluated; `(2n-1)!!`.
    pub integrals_evaluated: usize,
    pub matchings: Vec<MatchingTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PertOptions {
    pub budget: QuadBudget,
    pub seed: u64,
}

impl PertOptions {
    pub fn from_env() -> Result<Self> {
        Ok(Self {
            budget: QuadBudget::from_env()?,
            seed: DEFAULT_PERT_SEED,
        })
    }
}

impl Default for PertOptions {
    fn default() -> Self {
        Self {
            budget: QuadBudget::default(),
            seed: DEFAULT_PERT_SEED,
        }
    }
}

/// Products of kernels over every matching at one ordered point of the simplex.
fn matching_products(lp: &ContourLoop, times: &[f64], matchings: &[Vec<(usize, usize)>], out: &mut [Complex64], weight: f64) -> Result<()> {
    let pts: Vec<LoopPoint> = times.iter().map(|&t| lp.point(t)).collect();
    let n = pts.len();
    let mut k = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i + 1..n {
            k[i * n + j] = lp.kernel(&pts[j], &pts[i])?;
        }
    }
    for (acc, m) in out.iter_mut().zip(matchings) {
        let mut p = Complex64::new(weight, 0.0);
        for &(i, j) in m {
            p *= k[i * n + j];
        }
        *acc += p;
    }
    Ok(())
}

/// Tensor Gauss-Legendre rule on the cube mapped to `0 <= t_0 <= ... <= t_{d-1} <= 1`
/// by the Duffy map `t_{d-1} = u_1, t_{d-2} = u_1 u_2, ...`.
fn simplex_gauss_legendre(lp: &ContourLoop, dim: usize, nodes: usize, matchings: &[Vec<(usize, usize)>]) -> Result<Vec<Complex64>> {
    let rule = gauss_legendre(nodes);
    let u: Vec<f64> = rule.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w: Vec<f64> = rule.weights.iter().map(|w| 0.5 * w).collect();
    let partial: Vec<Result<Vec<Complex64>>> = (0..nodes)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![Complex64::new(0.0, 0.0); matchings.len()];
            let mut idx = vec![0usize; dim];
            idx[0] = first;
            let inner = nodes.pow(dim as u32 - 1);
            let mut times = vec![0.0; dim];
            for code in 0..inner {
                let mut c = code;
                for slot in idx.iter_mut().skip(1) {
                    *slot = c % nodes;
                    c /= nodes;
                }
                let mut prod = 1.0;
                let mut weight = 1.0;
                for (k, &ix) in idx.iter().enumerate() {
                    prod *= u[ix];
                    times[dim - 1 - k] = prod;
                    weight *= w[ix] * u[ix].powi((dim - 1 - k) as i32);
                }
                matching_products(lp, &times, matchings, &mut acc, weight)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); matchings.len()];
    for p in partial {
        for (t, v) in total.iter_mut().zip(p?) {
            *t += v;
        }
    }
    Ok(total)
}

/// Randomly shifted Halton points, sorted into the ordered simplex.
fn simplex_rqmc(lp: &ContourLoop, dim: usize, points: usize, seed: u64, matchings: &[Vec<(usize, usize)>]) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let per = (points / RQMC_REPLICATES).max(1);
    let mut fact = 1.0;
    for k in 2..=dim {
        fact *= k as f64;
    }
    let replicates: Vec<Result<Vec<Complex64>>> = (0..RQMC_REPLICATES)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let mut acc = vec![Complex64::new(0.0, 0.0); matchings.len()];
            let weight = 1.0 / (per as f64 * fact);
            for i in 0..per {
                let mut t: Vec<f64> = halton(i as u64 + 1, dim).iter().zip(&shift).map(|(h, s)| (h + s).fract()).collect();
                t.sort_by(f64::total_cmp);
                matching_products(lp, &t, matchings, &mut acc, weight)?;
            }
            Ok(acc)
        })
        .collect();
    let reps: Vec<Vec<Complex64>> = replicates.into_iter().collect::<Result<_>>()?;
    let nm = matchings.len();
    let r = reps.len() as f64;
    let mean: Vec<Complex64> = (0..nm).map(|m| reps.iter().map(|v| v[m]).sum::<Complex64>() / r).collect();
    let stderr: Vec<f64> = (0..nm)
        .map(|m| {
            let var = reps.iter().map(|v| (v[m] - mean[m]).norm_sqr()).sum::<f64>() / (r - 1.0);
            (var / r).sqrt()
        })
        .collect();
    Ok((mean, stderr))
}

pub fn wilson_pert_coeff(rep: &MatrixRep, lp: &ContourLoop, order: usize) -> Result<PertCoefficient> {
    wilson_pert_coeff_with(rep, lp, order, &PertOptions::from_env()?)
}

pub fn wilson_pert_coeff_with(rep: &MatrixRep, lp: &ContourLoop, order: usize, opts: &PertOptions) -> Result<PertCoefficient> {
    if order > MAX_PERT_ORDER {
        return Err(Error::PertOrderTooHigh(order));
    }
    let dim = 2 * order;
    let matchings = perfect_matchings(dim);
    let lie: Vec<Complex64> = matchings.iter().map(|m| rep.lie_factor(m)).collect();
    let (integrals, errors, method, points) = match order {
        0 => (vec![Complex64::new(1.0, 0.0)], vec![0.0], PertMethod::Exact, 0),
        1 | 2 => {
            let p = opts.budget.nodes_per_axis(dim);
            let fine = simplex_gauss_legendre(lp, dim, p, &matchings)?;
            let coarse = simplex_gauss_legendre(lp, dim, (2 * p / 3).max(4), &matchings)?;
            let errs = fine.iter().zip(&coarse).map(|(a, b)| (a - b).norm()).collect();
            (fine, errs, PertMethod::GaussLegendre, p.pow(dim as u32))
        }
        _ => {
            let n = opts.budget.points();
            let (mean, se) = simplex_rqmc(lp, dim, n, opts.seed, &matchings)?;
            (mean, se, PertMethod::RandomizedQmc, n)
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut terms = Vec::with_capacity(matchings.len());
    for ((m, l), (i, e)) in matchings.iter().zip(&lie).zip(integrals.iter().zip(&errors)) {
        total += l * i;
        err += l.norm() * e;
        terms.push(MatchingTerm {
            pairs: m.clone(),
            lie_factor: l.re,
            integral_re: i.re,
            integral_im: i.im,
        });
    }
    let value = EXPANSION_SIGN * total.re;
    let area_n = lp.enclosed_area().powi(order as i32);
    Ok(PertCoefficient {
        order,
        value,
        value_rho: value / area_n,
        imag_residue: total.im,
        error_estimate: err,
        method,
        points,
        integrals_evaluated: matchings.len(),
        matchings: terms,
    })
}

/// One order of the perturbative versus asymptotic comparison, in `rho` units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub order: usize,
    pub perturbative: f64,
    pub error_estimate: f64,
    pub asymptotic: f64,
    pub difference: f64,
    pub asserted: bool,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PertComparisonReport {
    pub group: String,
    pub irrep: i64,
    pub enclosed_area: f64,
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
    pub coefficients: Vec<PertCoefficient>,
    /// All asserted orders (0..=2) agree within tolerance.
    pub passed: bool,
}

pub fn decompactified_comparison(rep: &MatrixRep, lp: &ContourLoop, max_order: usize) -> Result<PertComparisonReport> {
    decompactified_comparison_with(rep, lp, max_order, &PertOptions::from_env()?)
}

pub fn decompactified_comparison_with(rep: &MatrixRep, lp: &ContourLoop, max_order: usize, opts: &PertOptions) -> Result<PertComparisonReport> {
    if max_order > MAX_PERT_ORDER {
        return Err(Error::PertOrderTooHigh(max_order));
    }
    let irrep = rep.irrep();
    let series = asymptotic_series(&irrep.group, &ClassFunction::character(irrep), max_order)?;
    let area = lp.enclosed_area();
    let mut rows = Vec::with_capacity(max_order + 1);
    let mut coefficients = Vec::with_capacity(max_order + 1);
    for n in 0..=max_order {
        let c = wilson_pert_coeff_with(rep, lp, n, opts)?;
        let asymptotic = series.coeff(n);
        let difference = c.value_rho - asymptotic;
        let asserted = n <= 2;
        rows.push(ComparisonRow {
            order: n,
            perturbative: c.value_rho,
            error_estimate: c.error_estimate / area.powi(n as i32),
            asymptotic,
            difference,
            asserted,
            agrees: asserted.then_some(difference.abs() <= COMPARISON_TOLERANCE),
        });
        coefficients.push(c);
    }
    Ok(PertComparisonReport {
        group: irrep.group.to_string(),
        irrep: irrep.label,
        enclosed_area: area,
        tolerance: COMPARISON_TOLERANCE,
        passed: rows.iter().all(|r| r.agrees != Some(false)),
        rows,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroup::GroupModel;

    fn rep(m: i64) -> MatrixRep {
        MatrixRep::new(GroupModel::su2().irrep(m).unwrap()).unwrap()
    }

    fn small() -> PertOptions {
        PertOptions {
            budget: QuadBudget::new(100_000).unwrap(),
            seed: 1,
        }
    }

    #[test]
    fn unit_circle_kernel_is_pi() {
        let lp = ContourLoop::unit_circle();
        for (t, s) in [(0.1, 0.7), (0.33, 0.01), (0.9, 0.5), (0.25, 0.75), (0.62, 0.61)] {
            let k = hol_propagator_on_loop(&lp, t, s).unwrap();
            assert!((k - Complex64::new(PI, 0.0)).norm() < 1e-12, "{k}");
        }
        let d = hol_propagator_on_loop(&lp, 0.4, 0.4).unwrap();
        let near = hol_propagator_on_loop(&lp, 0.4, 0.4 + 1e-4).unwrap();
        assert!((d - near).norm() < 1e-8);
        assert!(hol_propagator_on_loop(&lp, 1.0, 0.2).is_err());
    }

    #[test]
    fn kernel_scales_with_radius_squared() {
        let r = ContourLoop::circle(Complex64::new(0.3, -1.0), 2.5).unwrap();
        let k = hol_propagator_on_loop(&r, 0.2, 0.45).unwrap();
        assert!((k.re / PI - 6.25).abs() < 1e-12 && k.im.abs() < 1e-12);
    }

    #[test]
    fn ellipse_kernel_is_bounded_and_continuous() {
        let e = ContourLoop::ellipse(2.0, 0.5).unwrap();
        assert!((e.enclosed_area() - PI).abs() < 1e-12);
        let mut sup = 0.0f64;
        for i in 0..40 {
            for j in 0..40 {
                let k = hol_propagator_on_loop(&e, i as f64 / 40.0, j as f64 / 40.0 + 0.001).unwrap();
                sup = sup.max(k.norm());
            }
        }
        assert!(sup.is_finite() && sup < 100.0);
        let d = hol_propagator_on_loop(&e, 0.3, 0.3).unwrap();
        let near = hol_propagator_on_loop(&e, 0.3, 0.3 + 1e-5).unwrap();
        assert!((d - near).norm() < 1e-3 * d.norm());
    }

    #[test]
    fn sampled_circle_matches_closed_form() {
        let w = 2.0 * PI;
        let lp = ContourLoop::from_fn(32, |t| Complex64::from_polar(1.0, w * t), |t| Complex64::new(0.0, w) * Complex64::from_polar(1.0, w * t)).unwrap();
        assert!((lp.enclosed_area() - PI).abs() < 1e-12);
        let k = hol_propagator_on_loop(&lp, 0.15, 0.8).unwrap();
        assert!((k - Complex64::new(PI, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn rejects_bad_loops() {
        let w = 2.0 * PI;
        // figure eight
        let eight = ContourLoop::from_fn(
            64,
            |t| Complex64::new((w * t).sin(), (2.0 * w * t).sin() / 2.0),
            |t| Complex64::new(w * (w * t).cos(), w * (2.0 * w * t).cos()),
        );
        assert!(matches!(eight, Err(Error::InvalidInput(_)) | Err(Error::SelfIntersection { .. })));
        // limacon with an inner loop
        let limacon = ContourLoop::from_fn(
            64,
            |t| Complex64::from_polar(1.0, w * t) * (0.5 + Complex64::from_polar(1.0, w * t)),
            |t| {
                let e = Complex64::from_polar(1.0, w * t);
                Complex64::new(0.0, w) * e * (0.5 + 2.0 * e)
            },
        );
        assert!(matches!(limacon, Err(Error::SelfIntersection { .. })));
        // clockwise
        let cw = ContourLoop::from_fn(16, |t| Complex64::from_polar(1.0, -w * t), |t| Complex64::new(0.0, -w) * Complex64::from_polar(1.0, -w * t));
        assert!(cw.is_err());
        assert!(ContourLoop::circle(Complex64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn matrix_reps_satisfy_invariants() {
        for m in 1..=5 {
            let r = rep(m);
            assert_eq!(r.dim(), m as usize);
            assert_eq!(r.basis().len(), 3);
        }
        let u = MatrixRep::new(GroupModel::u1().irrep(-2).unwrap()).unwrap();
        assert_eq!(u.dim(), 1);
        let defining = crate::liegroup::lie_algebra_basis(&GroupModel::su2());
        for (a, b) in rep(2).basis().iter().zip(&defining) {
            assert!((a - b).norm() < 1e-15);
        }
        let scaled = MatrixRep::new(GroupModel::su2().with_metric_scale(3.0).unwrap().irrep(4).unwrap());
        assert!(scaled.is_ok());
    }

    #[test]
    fn low_orders_on_the_unit_circle() {
        let lp = ContourLoop::unit_circle();
        let c0 = wilson_pert_coeff_with(&rep(2), &lp, 0, &small()).unwrap();
        assert_eq!(c0.value, 2.0);
        let c1 = wilson_pert_coeff_with(&rep(2), &lp, 1, &small()).unwrap();
        assert!((c1.value + 1.5 * PI).abs() < 1e-10);
        assert!((c1.value_rho + 1.5).abs() < 1e-10);
        let c2 = wilson_pert_coeff_with(&rep(2), &lp, 2, &small()).unwrap();
        assert!((c2.value_rho - 5.0 / 16.0).abs() < 1e-8);
        assert_eq!(c2.integrals_evaluated, 3);
    }

    #[test]
    fn order_one_is_universal() {
        let lp = ContourLoop::unit_circle();
        for m in [2, 3] {
            let r = rep(m);
            let c = wilson_pert_coeff_with(&r, &lp, 1, &small()).unwrap();
            let expected = -r.irrep().casimir * m as f64 / 2.0;
            assert!((c.value_rho - expected).abs() < 1e-10);
        }
        // depends only on the enclosed area
        let e = ContourLoop::ellipse(2.0, 0.5).unwrap();
        let ce = wilson_pert_coeff_with(&rep(2), &e, 1, &small()).unwrap();
        assert!((ce.value_rho + 1.5).abs() < 1e-3, "{}", ce.value_rho);
        assert!(ce.imag_residue.abs() < 1e-10);
    }

    #[test]
    fn order_two_on_an_ellipse_matches_the_circle() {
        // individual matchings depend on the shape, their Lie-weighted sum does not
        let e = ContourLoop::ellipse(1.25, 0.8).unwrap();
        let c = wilson_pert_coeff_with(&rep(2), &e, 2, &PertOptions::default()).unwrap();
        assert!((c.value_rho - 5.0 / 16.0).abs() < 1e-6, "{}", c.value_rho);
        assert!((c.matchings[0].integral_re - c.matchings[2].integral_re).abs() > 1e-2);
    }

    #[test]
    fn matching_counter_is_double_factorial() {
        let lp = ContourLoop::unit_circle();
        let opts = PertOptions {
            budget: QuadBudget::new(8000).unwrap(),
            seed: 3,
        };
        for (n, count) in [(0, 1), (1, 1), (2, 3), (3, 15)] {
            let c = wilson_pert_coeff_with(&rep(2), &lp, n, &opts).unwrap();
            assert_eq!(c.integrals_evaluated, count);
            assert!(c.imag_residue.abs() < 1e-10);
        }
        assert!(matches!(wilson_pert_coeff_with(&rep(2), &lp, 4, &opts), Err(Error::PertOrderTooHigh(4))));
    }

    #[test]
    fn order_three_on_the_circle_is_a_constant_kernel_integral() {
        // kernel pi everywhere: each matching integrates to pi^3 / 6!
        let lp = ContourLoop::unit_circle();
        let opts = PertOptions {
            budget: QuadBudget::new(80_000).unwrap(),
            seed: 9,
        };
        let c = wilson_pert_coeff_with(&rep(2), &lp, 3, &opts).unwrap();
        let lie: f64 = c.matchings.iter().map(|m| m.lie_factor).sum();
        assert!((c.value_rho - lie / 720.0).abs() < 1e-9);
        assert!(c.error_estimate < 1e-9);
        assert_eq!(c.method, PertMethod::RandomizedQmc);
    }

    #[test]
    fn trivial_rep_has_no_corrections() {
        let r = decompactified_comparison_with(&rep(1), &ContourLoop::ellipse(1.5, 0.7).unwrap(), 2, &small()).unwrap();
        assert!(r.passed);
        assert_eq!(r.rows[0].perturbative, 1.0);
        for row in &r.rows[1..] {
            assert!(row.perturbative.abs() < 1e-14 && row.asymptotic == 0.0);
        }
    }

    #[test]
    fn comparison_on_the_unit_circle() {
        let r = decompactified_comparison_with(&rep(2), &ContourLoop::unit_circle(), 2, &small()).unwrap();
        assert!(r.passed, "{r:?}");
        let values: Vec<f64> = r.rows.iter().map(|r| r.perturbative).collect();
        for (v, e) in values.iter().zip([2.0, -1.5, 5.0 / 16.0]) {
            assert!((v - e).abs() < 1e-4);
        }
    }

    #[test]
    fn budget_from_env_defaults() {
        assert_eq!(QuadBudget::default().points(), DEFAULT_QUAD_BUDGET);
        assert!(QuadBudget::new(10).is_err());
        assert_eq!(QuadBudget::new(1_000_000).unwrap().nodes_per_axis(4), 31);
    }
}
