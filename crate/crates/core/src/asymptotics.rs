//! Small-coupling asymptotics of simple-loop Wilson expectations.
//!
//! As `lambda -> 0` the sphere expectation of `f` tends to the Gaussian average
//! of `f(exp X)` over the Lie algebra with variance parameter
//! `rho = lambda |R1| |R2| / |S^2|^2`. The difference is exponentially small in
//! `1/lambda` and comes from the non-minimal geodesics in the heat kernels.
//!
//! All integrals are reduced to the maximal torus, where the Gaussian has
//! density proportional to `J(theta H) e^{-q theta^2 / 2 rho}` with `q` the
//! torus norm factor of the group.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liegroup::{weyl_densities, ClassFunction, GroupKind, GroupModel};
use crate::quadrature::hermite_rule;
use crate::series::{PowerSeries, SeriesVariable};

/// Highest series order with a supported moment table.
pub const MAX_SERIES_ORDER: usize = 12;

/// The Gaussian variance parameter `rho > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Rho(f64);

impl Rho {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInput(format!("rho must be positive and finite, got {rho}")));
        }
        Ok(Self(rho))
    }

    /// `lambda |R1| |R2| / (|R1| + |R2|)^2` for a loop splitting the sphere.
    pub fn sphere(lambda: f64, r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > 0.0) {
            return Err(Error::InvalidInput("region areas must be positive".into()));
        }
        Self::new(lambda * r1 * r2 / ((r1 + r2) * (r1 + r2)))
    }

    /// `lambda0 |R|`, the decompactified value.
    pub fn plane(lambda0: f64, area: f64) -> Result<Self> {
        Self::new(lambda0 * area)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn pair_density(group: &GroupModel, phi: f64) -> f64 {
    weyl_densities(group, phi).0
}

/// `(2 pi rho)^{-d/2} integral over g of f(exp X) e^{-|X|^2 / 2 rho} dX`.
///
/// Evaluated on the torus as the ratio `sum w J f / sum w J` over the 200-node
/// Hermite rule with `theta = u sqrt(2 rho / q)`; the ratio fixes the overall
/// normalization so that constants integrate to themselves.
pub fn gaussian_lie_expectation(group: &GroupModel, f: &ClassFunction, rho: Rho) -> Result<f64> {
    if f.group() != group {
        return Err(Error::InvalidInput("observable and group differ".into()));
    }
    let scale = (2.0 * rho.0 / group.torus_norm_factor()).sqrt();
    let (mut num, mut den) = (0.0, 0.0);
    for (u, w) in hermite_rule().iter() {
        let theta = u * scale;
        let jw = w * pair_density(group, theta);
        num += jw * f.eval(theta).re;
        den += jw;
    }
    if !(den > 0.0) || !num.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            points: hermite_rule().len(),
            estimate: num,
        });
    }
    Ok(num / den)
}

/// `F(x) = e^{-x/4} (2 - x)`, the Gaussian average of `2 cos(k theta)` at `x = k^2 rho`.
pub fn su2_f(x: f64) -> f64 {
    (-x / 4.0).exp() * (2.0 - x)
}

/// `F((m-1)^2 rho) + F((m-3)^2 rho) + ...`, plus 1 when `m` is odd.
pub fn su2_wilson_asymptotic(m: i64, rho: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidIrrep {
            group: "SU2".into(),
            label: m,
        });
    }
    Rho::new(rho)?;
    let mut total = if m % 2 == 1 { 1.0 } else { 0.0 };
    let mut k = m - 1;
    while k > 0 {
        total += su2_f((k * k) as f64 * rho);
        k -= 2;
    }
    Ok(total)
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("{x} has no exact rational form")))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Taylor coefficients in `rho` of [`gaussian_lie_expectation`], as exact rationals.
///
/// `E[cos k theta] = sum_j (-1)^j k^{2j} E[theta^{2j}] / (2j)!` with the exact
/// moments `E[theta^{2j}] = (2j+1)!! (rho / 2c^2)^j` for SU(2) and
/// `(2j-1)!! (rho / c^2)^j` for U(1).
pub fn asymptotic_series_exact(group: &GroupModel, f: &ClassFunction, order: usize) -> Result<PowerSeries<BigRational>> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::SeriesOrderTooHigh {
            order,
            max: MAX_SERIES_ORDER,
        });
    }
    if f.group() != group {
        return Err(Error::InvalidInput("observable and group differ".into()));
    }
    let c2 = rational(group.metric_scale())?;
    // variance per unit rho and the odd-double-factorial offset
    let (alpha, offset) = match group.kind() {
        GroupKind::SU2 => ((int(2) * c2).recip(), 1),
        GroupKind::U1 => (c2.recip(), -1),
    };
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for (irrep, coeff) in f.terms() {
        let c = rational(*coeff)?;
        for k in group.character_frequencies(irrep.label) {
            let k2 = int(k * k);
            let mut k_pow = BigRational::one();
            let mut a_pow = BigRational::one();
            let mut fact = BigRational::one(); // (2j)!
            let mut dfact = BigRational::one(); // (2j + offset)!!
            for (j, slot) in coeffs.iter_mut().enumerate() {
                if j > 0 {
                    let jj = j as i64;
                    k_pow *= &k2;
                    a_pow *= &alpha;
                    fact *= int((2 * jj - 1) * (2 * jj));
                    dfact *= int(2 * jj + offset);
                }
                let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                *slot += &c * sign * &k_pow * &a_pow * &dfact / &fact;
            }
        }
    }
    PowerSeries::new(SeriesVariable::Rho, coeffs)
}

pub fn asymptotic_series(group: &GroupModel, f: &ClassFunction, order: usize) -> Result<PowerSeries<f64>> {
    asymptotic_series_exact(group, f, order).map(|s| s.to_f64())
}

/// One coefficient in both decimal and exact rational form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactCoefficient {
    pub order: usize,
    pub value: f64,
    pub rational: String,
}

fn exact_coefficients(s: &PowerSeries<BigRational>) -> Vec<ExactCoefficient> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(order, c)| ExactCoefficient {
            order,
            value: c.to_f64().unwrap_or(f64::NAN),
            rational: c.to_string(),
        })
        .collect()
}

/// Both orders of `lambda -> 0` and decompactification for `chi_m`, as series
/// in the plane coupling `a = lambda0 |R|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub m: i64,
    pub order: usize,
    /// Decompactify first: Taylor series of `m e^{-(m^2-1) a / 4}`.
    pub series_a: Vec<ExactCoefficient>,
    /// Expand first: the Gaussian series with `rho -> a`.
    pub series_b: Vec<ExactCoefficient>,
    pub first_difference: Option<usize>,
    pub agree_through_order_1: bool,
}

pub fn limits_comparison(m: i64, order: usize) -> Result<LimitsReport> {
    let g = GroupModel::su2();
    let irrep = g.irrep(m)?;
    let b = asymptotic_series_exact(&g, &ClassFunction::character(irrep), order)?;
    // m (-(m^2 - 1)/4)^n / n!
    let rate = int(-(m * m - 1)) / int(4);
    let mut term = int(m);
    let mut a = Vec::with_capacity(order + 1);
    for n in 0..=order {
        if n > 0 {
            term = term * &rate / int(n as i64);
        }
        a.push(term.clone());
    }
    let a = PowerSeries::new(SeriesVariable::Rho, a)?;
    let first_difference = (0..=order).find(|&n| a.coeff(n) != b.coeff(n));
    Ok(LimitsReport {
        m,
        order,
        series_a: exact_coefficients(&a),
        series_b: exact_coefficients(&b),
        agree_through_order_1: first_difference.is_none_or(|n| n >= 2),
        first_difference,
    })
}

/// Exact sphere expectation and its distance to the Gaussian asymptotics at one coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub lambda: f64,
    pub rho: f64,
    pub asymptotic: f64,
    pub exact: f64,
    pub gap: f64,
    /// `ln gap`, finite even where `gap` underflows; `-inf` when the gap vanishes.
    pub ln_gap: f64,
}

/// Winding-sector decomposition of the sphere expectation.
///
/// Inserting the geodesic sums for both heat kernels and unfolding the torus
/// integral gives `sum_n e^{-2 pi^2 n^2 q / lambda} I_n[f]`, where `I_n` is a
/// Gaussian integral centred at `c_n = -2 pi n t1 / lambda` with weight
/// `4 phi (phi + 2 pi n)` (SU(2)) or 1 (U(1)). The `n = 0` sector alone is the
/// Gaussian asymptotic; the others carry the instanton corrections.
struct Sectors {
    q: f64,
    lambda: f64,
    rho: f64,
    t1_fraction: f64,
    nmax: i64,
}

impl Sectors {
    fn new(group: &GroupModel, lambda: f64, t1_fraction: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda must be positive and finite, got {lambda}")));
        }
        if !(t1_fraction > 0.0 && t1_fraction < 1.0) {
            return Err(Error::InvalidInput("area fraction must lie in (0, 1)".into()));
        }
        let q = group.torus_norm_factor();
        let mut nmax = 1;
        while 2.0 * PI * PI * q * ((nmax * nmax) as f64 - 1.0) / lambda < 60.0 {
            nmax += 1;
        }
        Ok(Self {
            q,
            lambda,
            rho: lambda * t1_fraction * (1.0 - t1_fraction),
            t1_fraction,
            nmax,
        })
    }

    /// `e^{-2 pi^2 n^2 q / lambda}` relative to the `n = 1` value.
    fn relative_suppression(&self, n: i64) -> f64 {
        (-2.0 * PI * PI * self.q * ((n * n) as f64 - 1.0) / self.lambda).exp()
    }

    fn suppression(&self, n: i64) -> f64 {
        (-2.0 * PI * PI * self.q * (n * n) as f64 / self.lambda).exp()
    }

    /// `I_n[f]` up to the common factor `sqrt(2 rho / q)` shared by all sectors.
    fn integral(&self, group: &GroupModel, f: &dyn Fn(f64) -> f64, n: i64) -> f64 {
        let scale = (2.0 * self.rho / self.q).sqrt();
        let shift = 2.0 * PI * n as f64;
        let centre = -shift * self.t1_fraction;
        hermite_rule()
            .iter()
            .map(|(u, w)| {
                let phi = centre + u * scale;
                let weight = match group.kind() {
                    GroupKind::SU2 => 4.0 * phi * (phi + shift),
                    GroupKind::U1 => 1.0,
                };
                w * weight * f(phi)
            })
            .sum()
    }

    /// `I_n[1] / I_0[1]`: `1 - 4 pi^2 n^2 q / lambda` for SU(2), 1 for U(1).
    fn trivial_ratio(&self, group: &GroupModel, n: i64) -> f64 {
        match group.kind() {
            GroupKind::SU2 => 1.0 - 4.0 * PI * PI * (n * n) as f64 * self.q / self.lambda,
            GroupKind::U1 => 1.0,
        }
    }

    /// `sum_{n != 0} d_n e^{-2 pi^2 n^2 q / lambda}`.
    fn denominator_correction(&self, group: &GroupModel) -> f64 {
        (1..=self.nmax)
            .map(|n| 2.0 * self.trivial_ratio(group, n) * self.suppression(n))
            .sum()
    }
}

fn torus_eval(f: &ClassFunction) -> impl Fn(f64) -> f64 + '_ {
    move |theta| f.eval(theta).re
}

/// Sphere expectation `<W_f>` at coupling `lambda` with `|R1| = t1_fraction |S^2|`,
/// computed from the winding-sector decomposition rather than by torus quadrature.
pub fn exact_by_winding_sectors(group: &GroupModel, f: &ClassFunction, lambda: f64, t1_fraction: f64) -> Result<f64> {
    let s = Sectors::new(group, lambda, t1_fraction)?;
    let fe = torus_eval(f);
    let one = |_: f64| 1.0;
    let i0 = s.integral(group, &one, 0);
    let mut num = s.integral(group, &fe, 0);
    for n in 1..=s.nmax {
        num += s.suppression(n) * (s.integral(group, &fe, n) + s.integral(group, &fe, -n));
    }
    Ok(num / (i0 * (1.0 + s.denominator_correction(group))))
}

/// Exact value, Gaussian asymptotic and their gap at one coupling.
pub fn gap_point(group: &GroupModel, f: &ClassFunction, lambda: f64, t1_fraction: f64) -> Result<GapPoint> {
    if f.group() != group {
        return Err(Error::InvalidInput("observable and group differ".into()));
    }
    let s = Sectors::new(group, lambda, t1_fraction)?;
    let asymptotic = gaussian_lie_expectation(group, f, Rho::new(s.rho)?)?;
    let nontrivial = f.nontrivial_part();
    let rho = s.rho;
    if nontrivial.terms().is_empty() {
        return Ok(GapPoint {
            lambda,
            rho,
            asymptotic,
            exact: asymptotic,
            gap: 0.0,
            ln_gap: f64::NEG_INFINITY,
        });
    }
    // the trivial part of f cancels sector by sector, so only the rest is integrated
    let fe = torus_eval(&nontrivial);
    let one = |_: f64| 1.0;
    let i0_one = s.integral(group, &one, 0);
    let i0_f = s.integral(group, &fe, 0);
    let mut scaled = 0.0;
    for n in 1..=s.nmax {
        let d = s.trivial_ratio(group, n);
        let pair = s.integral(group, &fe, n) + s.integral(group, &fe, -n) - 2.0 * i0_f * d;
        scaled += s.relative_suppression(n) * pair;
    }
    let denom = i0_one * (1.0 + s.denominator_correction(group));
    let ln_gap = -2.0 * PI * PI * s.q / lambda + scaled.abs().ln() - denom.abs().ln();
    let signed = scaled / denom * s.suppression(1);
    Ok(GapPoint {
        lambda,
        rho,
        asymptotic,
        exact: asymptotic + signed,
        gap: signed.abs(),
        ln_gap,
    })
}

/// Exponential-bound fit of the instanton gap on `{2 lambda, lambda, lambda / 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstantonGapReport {
    pub lambda: f64,
    pub equal_areas: bool,
    pub point: GapPoint,
    pub grid: Vec<GapPoint>,
    /// Slopes of `ln gap` against `1/lambda` between consecutive grid points.
    pub pair_slopes: Vec<f64>,
    /// `-slope` of the least-squares fit of `ln gap` against `1/lambda`.
    pub kappa: Option<f64>,
    pub ln_c: Option<f64>,
    /// Both pair slopes negative and within 20% of each other.
    pub slope_stable: bool,
    pub bound_ok: bool,
    /// The bound is only claimed as `lambda -> 0`; it is asserted for `lambda <= 1`.
    pub asserted: bool,
}

pub fn instanton_gap(group: &GroupModel, f: &ClassFunction, lambda: f64, equal_areas: bool) -> Result<InstantonGapReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda must be positive and finite, got {lambda}")));
    }
    let asserted = lambda <= 1.0;
    let fraction = if equal_areas { 0.5 } else { 0.25 };
    let grid: Vec<GapPoint> = [2.0 * lambda, lambda, 0.5 * lambda]
        .iter()
        .map(|&l| gap_point(group, f, l, fraction))
        .collect::<Result<_>>()?;
    let point = grid[1];
    if grid.iter().all(|p| p.gap == 0.0 && p.ln_gap == f64::NEG_INFINITY) {
        return Ok(InstantonGapReport {
            lambda,
            equal_areas,
            point,
            grid,
            pair_slopes: Vec::new(),
            kappa: None,
            ln_c: None,
            slope_stable: true,
            bound_ok: true,
            asserted,
        });
    }
    let xs: Vec<f64> = grid.iter().map(|p| 1.0 / p.lambda).collect();
    let ys: Vec<f64> = grid.iter().map(|p| p.ln_gap).collect();
    let pair_slopes: Vec<f64> = (0..2).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let kappa = -sxy / sxx;
    let ln_c = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y + kappa * x)
        .fold(f64::NEG_INFINITY, f64::max);
    let (s1, s2) = (pair_slopes[0], pair_slopes[1]);
    let slope_stable = s1 < 0.0 && s2 < 0.0 && ((s2 - s1) / s1).abs() <= 0.2;
    let bound_ok = kappa.is_finite()
        && kappa > 0.0
        && slope_stable
        && point.ln_gap <= ln_c - kappa / lambda + 1e-12;
    Ok(InstantonGapReport {
        lambda,
        equal_areas,
        point,
        grid,
        pair_slopes,
        kappa: Some(kappa),
        ln_c: Some(ln_c),
        slope_stable,
        bound_ok,
        asserted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{wilson_exact_simple, LoopConfig};

    fn chi(m: i64) -> ClassFunction {
        ClassFunction::character(GroupModel::su2().irrep(m).unwrap())
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn gaussian_reproduces_closed_forms() {
        let g = GroupModel::su2();
        for m in 1..=5 {
            for rho in [0.05, 0.2, 1.0] {
                let a = gaussian_lie_expectation(&g, &chi(m), Rho::new(rho).unwrap()).unwrap();
                let b = su2_wilson_asymptotic(m, rho).unwrap();
                assert!((a - b).abs() < 1e-12, "m={m} rho={rho}: {a} vs {b}");
            }
        }
        let rho = 0.3;
        let v3 = gaussian_lie_expectation(&g, &chi(3), Rho::new(rho).unwrap()).unwrap();
        assert!((v3 - (su2_f(4.0 * rho) + 1.0)).abs() < 1e-12);
        let v4 = su2_wilson_asymptotic(4, rho).unwrap();
        assert!((v4 - su2_f(9.0 * rho) - su2_f(rho)).abs() < 1e-15);
        assert_eq!(su2_wilson_asymptotic(1, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_concentrates_at_identity() {
        let g = GroupModel::su2();
        for m in 1..6 {
            let v = gaussian_lie_expectation(&g, &chi(m), Rho::new(1e-9).unwrap()).unwrap();
            assert!((v - m as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn series_for_fundamental() {
        let g = GroupModel::su2();
        let s = asymptotic_series_exact(&g, &chi(2), 2).unwrap();
        assert_eq!(s.coeffs(), &[rat(2, 1), rat(-3, 2), rat(5, 16)]);
        let t = asymptotic_series_exact(&g, &chi(1), 5).unwrap();
        assert_eq!(t.coeffs()[0], rat(1, 1));
        assert!(t.coeffs()[1..].iter().all(Zero::is_zero));
        assert!(matches!(
            asymptotic_series_exact(&g, &chi(2), 13),
            Err(Error::SeriesOrderTooHigh { .. })
        ));
    }

    #[test]
    fn series_follows_the_gaussian_with_small_remainder() {
        // remainder over rho^{N+1} stays bounded while rho halves
        let g = GroupModel::su2();
        for m in [2, 3] {
            let order = 3;
            let s = asymptotic_series(&g, &chi(m), order).unwrap();
            let ratios: Vec<f64> = [0.1, 0.05, 0.025]
                .iter()
                .map(|&rho| {
                    let exact = gaussian_lie_expectation(&g, &chi(m), Rho::new(rho).unwrap()).unwrap();
                    (exact - s.eval(rho)).abs() / rho.powi(order as i32 + 1)
                })
                .collect();
            let c4 = asymptotic_series(&g, &chi(m), 4).unwrap().coeffs()[4].abs();
            for r in &ratios {
                assert!((r - c4).abs() < 0.2 * c4, "m={m} ratios={ratios:?} c4={c4}");
            }
        }
    }

    #[test]
    fn metric_scale_rescales_rho() {
        // c^2 metric: series in rho equals the unit-metric series in rho / c^2
        let g2 = GroupModel::su2().with_metric_scale(2.0).unwrap();
        let f2 = ClassFunction::character(g2.irrep(2).unwrap());
        let s2 = asymptotic_series_exact(&g2, &f2, 4).unwrap();
        let s1 = asymptotic_series_exact(&GroupModel::su2(), &chi(2), 4).unwrap();
        assert_eq!(s2, s1.compose_scaling(rat(1, 2)));
        let direct = gaussian_lie_expectation(&g2, &f2, Rho::new(0.4).unwrap()).unwrap();
        assert!((direct - su2_f(0.2)).abs() < 1e-12);
    }

    #[test]
    fn u1_series_and_gaussian() {
        // E[cos n theta] = e^{-n^2 rho / 2} for the U(1) Gaussian of variance rho
        let g = GroupModel::u1();
        let f = ClassFunction::character(g.irrep(2).unwrap());
        let v = gaussian_lie_expectation(&g, &f, Rho::new(0.3).unwrap()).unwrap();
        assert!((v - (-0.6f64).exp()).abs() < 1e-13);
        let s = asymptotic_series_exact(&g, &f, 3).unwrap();
        assert_eq!(s.coeffs(), &[rat(1, 1), rat(-2, 1), rat(2, 1), rat(-4, 3)]);
    }

    #[test]
    fn coefficient_growth_is_entire() {
        // |c_n| <= K r^n / n! with r = max k^2 / 4 over the frequencies (times 2 for the
        // polynomial prefactor)
        let g = GroupModel::su2();
        for m in 2..=5 {
            let s = asymptotic_series(&g, &chi(m), 12).unwrap();
            let r = 2.0 * ((m - 1) * (m - 1)) as f64 / 4.0 + 1.0;
            let k = 4.0 * m as f64;
            let mut fact = 1.0;
            for (n, c) in s.coeffs().iter().enumerate() {
                if n > 0 {
                    fact *= n as f64;
                }
                assert!(c.abs() <= k * r.powi(n as i32) / fact, "m={m} n={n} c={c}");
            }
        }
    }

    #[test]
    fn limits_do_not_commute_at_second_order() {
        let r = limits_comparison(2, 3).unwrap();
        let a: Vec<&str> = r.series_a.iter().map(|c| c.rational.as_str()).collect();
        let b: Vec<&str> = r.series_b.iter().map(|c| c.rational.as_str()).collect();
        assert_eq!(a, vec!["2", "-3/2", "9/16", "-9/64"]);
        assert_eq!(&b[..3], &["2", "-3/2", "5/16"]);
        assert_eq!(r.first_difference, Some(2));
        assert!(r.agree_through_order_1);
        let trivial = limits_comparison(1, 4).unwrap();
        assert_eq!(trivial.first_difference, None);
        for m in 2..=5 {
            assert!(limits_comparison(m, 4).unwrap().agree_through_order_1);
        }
    }

    #[test]
    fn sectors_reproduce_the_quadrature_engine() {
        let g = GroupModel::su2();
        for (lambda, frac) in [(0.5, 0.5), (2.0, 0.25), (5.0, 0.5)] {
            for m in [2, 3] {
                let cfg = LoopConfig::sphere(frac, 1.0 - frac, chi(m)).unwrap();
                let quad = wilson_exact_simple(&g, &cfg, lambda).unwrap();
                let sect = exact_by_winding_sectors(&g, &chi(m), lambda, frac).unwrap();
                assert!((quad - sect).abs() < 1e-10, "lambda={lambda} m={m}: {quad} vs {sect}");
            }
        }
        let u1 = GroupModel::u1();
        let f = ClassFunction::character(u1.irrep(1).unwrap());
        let cfg = LoopConfig::sphere(0.3, 0.7, f.clone()).unwrap();
        let quad = wilson_exact_simple(&u1, &cfg, 3.0).unwrap();
        let sect = exact_by_winding_sectors(&u1, &f, 3.0, 0.3).unwrap();
        assert!((quad - sect).abs() < 1e-10);
    }

    #[test]
    fn gap_matches_direct_subtraction_where_resolvable() {
        let g = GroupModel::su2();
        for lambda in [2.0, 3.0, 5.0] {
            let p = gap_point(&g, &chi(2), lambda, 0.5).unwrap();
            let cfg = LoopConfig::sphere(0.5, 0.5, chi(2)).unwrap();
            let direct = (wilson_exact_simple(&g, &cfg, lambda).unwrap() - p.asymptotic).abs();
            assert!((p.gap - direct).abs() < 1e-9 * direct.max(1e-3), "{lambda}: {} vs {direct}", p.gap);
            assert!((p.ln_gap - p.gap.ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn gap_decays_like_an_instanton() {
        let g = GroupModel::su2();
        let r = instanton_gap(&g, &chi(2), 0.2, true).unwrap();
        assert!(r.point.gap < 1e-6);
        assert!(r.slope_stable, "{:?}", r.pair_slopes);
        assert!(r.bound_ok);
        assert!(r.kappa.unwrap() > 0.0);
        assert!(r.grid[0].ln_gap > r.grid[1].ln_gap && r.grid[1].ln_gap > r.grid[2].ln_gap);
        let unequal = instanton_gap(&g, &chi(2), 0.2, false).unwrap();
        assert!(unequal.slope_stable);
    }

    #[test]
    fn trivial_character_has_no_gap() {
        let r = instanton_gap(&GroupModel::su2(), &chi(1), 0.3, true).unwrap();
        assert_eq!(r.point.gap, 0.0);
        assert!(r.bound_ok);
    }

    #[test]
    fn large_coupling_gap_is_order_one_and_unasserted() {
        let r = instanton_gap(&GroupModel::su2(), &chi(2), 5.0, true).unwrap();
        assert!(!r.asserted);
        assert!(r.point.gap.abs() > 1e-2, "{}", r.point.gap);
    }

    #[test]
    fn sphere_asymptotics_depend_on_areas_through_rho() {
        let g = GroupModel::su2();
        let a = Rho::sphere(0.4, 1.0, 3.0).unwrap();
        let b = Rho::sphere(0.4, 3.0, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            gaussian_lie_expectation(&g, &chi(2), a).unwrap(),
            gaussian_lie_expectation(&g, &chi(2), b).unwrap()
        );
    }
}
