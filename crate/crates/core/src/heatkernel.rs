//! Heat kernels `K_t` on the supported groups, as class functions of the torus
//! angle.
//!
//! Two independent evaluations are available: the character expansion
//! `K_t = sum_rho dim(rho) chi_rho e^{-t c2(rho)/2}`, which converges fast for large
//! `t`, and the sum over geodesics from the identity, which converges fast for
//! small `t`. Kernels are normalized against the normalized Haar measure, so
//! `integral K_t dg = 1`, and `K_inf = 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liegroup::{weyl_integrate, GroupKind, GroupModel};
use crate::quadrature::{gauss_legendre, PeriodicTrapezoid};

/// Absolute tail tolerance used by automatic truncation.
pub const TAIL_TOLERANCE: f64 = 1e-13;

/// Below this diffusion time the geodesic sum is used automatically.
pub const GEODESIC_CROSSOVER: f64 = 0.01;

const MAX_LEVELS: usize = 1_000_000;

/// Where the calibration of the scalar-curvature constant takes place.
pub const CURVATURE_CALIBRATION_POINT: (f64, f64) = (0.5, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Auto,
    /// Character sum over irreps with `c2 <= cutoff`.
    CasimirCutoff(f64),
    /// Geodesic sum over windings `|k| <= cutoff`.
    WindingCutoff(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelQuery {
    pub group: GroupModel,
    pub t: f64,
    pub theta: f64,
    pub truncation: Truncation,
}

impl HeatKernelQuery {
    pub fn new(group: GroupModel, t: f64, theta: f64) -> Self {
        Self {
            group,
            t,
            theta,
            truncation: Truncation::Auto,
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Character,
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatKernelValue {
    pub t: f64,
    pub theta: f64,
    pub value: f64,
    pub method: Method,
    /// Bound on the absolute truncation error.
    pub tail_bound: f64,
}

/// `K_t(exp(theta H))`.
pub fn heat_kernel(q: &HeatKernelQuery) -> Result<f64> {
    heat_kernel_value(q).map(|v| v.value)
}

/// `K_t(exp(theta H))` together with the method used and its truncation bound.
pub fn heat_kernel_value(q: &HeatKernelQuery) -> Result<HeatKernelValue> {
    validate_t(q.t)?;
    if !q.theta.is_finite() {
        return Err(Error::InvalidInput(format!("theta must be finite, got {}", q.theta)));
    }
    let done = |value, method, tail_bound| HeatKernelValue {
        t: q.t,
        theta: q.theta,
        value,
        method,
        tail_bound,
    };
    if q.t == f64::INFINITY {
        return Ok(done(1.0, Method::Character, 0.0));
    }
    match q.truncation {
        Truncation::Auto => {
            let (value, method, tail) = HeatKernel::new(&q.group, q.t)?.eval_detailed(q.theta);
            Ok(done(value, method, tail))
        }
        Truncation::CasimirCutoff(cutoff) => {
            let s = CharacterSeries::with_cutoff(&q.group, q.t, cutoff)?;
            Ok(done(s.eval(q.theta), Method::Character, s.tail_bound))
        }
        Truncation::WindingCutoff(k) => {
            if !is_regular(&q.group, q.theta) {
                return Err(Error::NonRegularElement(q.theta));
            }
            let (v, tail) = geodesic_sum(&q.group, q.t, q.theta, k, scalar_curvature(&q.group)?);
            Ok(done(v, Method::Geodesic, tail))
        }
    }
}

/// `K_t` at fixed `t` with [`Truncation::Auto`] routing, prepared once and
/// evaluated at many angles.
///
/// For `t` below [`GEODESIC_CROSSOVER`] the geodesic sum is used. Above it the
/// character sum is used, except where `K_t` is so small relative to `K_t(1)`
/// that the character sum would only resolve cancellation noise; there the
/// geodesic sum keeps relative accuracy.
#[derive(Debug, Clone)]
pub struct HeatKernel {
    group: GroupModel,
    t: f64,
    series: Option<CharacterSeries>,
    identity: f64,
    winding_cutoff: usize,
    curvature: f64,
}

impl HeatKernel {
    pub fn new(group: &GroupModel, t: f64) -> Result<Self> {
        validate_t(t)?;
        if t == f64::INFINITY {
            return Ok(Self {
                group: *group,
                t,
                series: None,
                identity: 1.0,
                winding_cutoff: 0,
                curvature: 0.0,
            });
        }
        let series = if t >= GEODESIC_CROSSOVER {
            Some(CharacterSeries::new(group, t)?)
        } else {
            None
        };
        let identity = series.as_ref().map_or(f64::INFINITY, |s| s.identity_value());
        Ok(Self {
            group: *group,
            t,
            series,
            identity,
            winding_cutoff: auto_winding_cutoff(group, t),
            curvature: scalar_curvature(group)?,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_detailed(theta).0
    }

    /// `(value, method, tail bound)`.
    pub fn eval_detailed(&self, theta: f64) -> (f64, Method, f64) {
        if self.t == f64::INFINITY {
            return (1.0, Method::Character, 0.0);
        }
        if let Some(s) = &self.series {
            let value = s.eval(theta);
            if value.abs() > 1e-9 * self.identity {
                return (value, Method::Character, s.tail_bound);
            }
        }
        let (v, tail) = geodesic_sum(&self.group, self.t, theta, self.winding_cutoff, self.curvature);
        (v, Method::Geodesic, tail)
    }
}

fn validate_t(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidInput(format!("diffusion time must be positive, got {t}")));
    }
    Ok(())
}

/// Label of the `k`-th level of the character sum: SU(2) dimension `k + 1`,
/// U(1) charges `+-k`.
fn level_label(group: &GroupModel, k: usize) -> i64 {
    match group.kind() {
        GroupKind::SU2 => k as i64 + 1,
        GroupKind::U1 => k as i64,
    }
}

fn level_casimir(group: &GroupModel, k: usize) -> f64 {
    let l = level_label(group, k) as f64;
    match group.kind() {
        GroupKind::SU2 => (l * l - 1.0) / (2.0 * group.metric_scale()),
        GroupKind::U1 => l * l / group.metric_scale(),
    }
}

/// `sup_theta |level k term|`: `m^2 e^{-t c2/2}` for SU(2), `2 e^{-t c2/2}` for U(1) charges `+-k`.
fn level_bound(group: &GroupModel, t: f64, k: usize) -> f64 {
    let e = (-0.5 * t * level_casimir(group, k)).exp();
    match group.kind() {
        GroupKind::SU2 => {
            let m = (k + 1) as f64;
            m * m * e
        }
        GroupKind::U1 => {
            if k == 0 {
                e
            } else {
                2.0 * e
            }
        }
    }
}

/// Geometric bound on `sum_{j >= k} level_bound(j)`; the ratios of successive
/// bounds decrease in `j`, so the first ratio dominates the rest.
fn tail_from(group: &GroupModel, t: f64, k: usize) -> (f64, f64) {
    let b0 = level_bound(group, t, k);
    if b0 == 0.0 {
        return (0.0, 0.0);
    }
    let r = level_bound(group, t, k + 1) / b0;
    if r < 1.0 {
        (b0 / (1.0 - r), r)
    } else {
        (f64::INFINITY, r)
    }
}

/// A truncated character expansion of `K_t` at fixed `t`.
#[derive(Debug, Clone)]
pub struct CharacterSeries {
    group: GroupModel,
    /// `dim * e^{-t c2/2}` per level.
    weights: Vec<f64>,
    pub tail_bound: f64,
}

impl CharacterSeries {
    /// Truncated where the tail bound drops below [`TAIL_TOLERANCE`].
    pub fn new(group: &GroupModel, t: f64) -> Result<Self> {
        validate_t(t)?;
        let levels = auto_levels(group, t)?;
        Ok(Self::from_levels(group, t, levels))
    }

    pub fn with_cutoff(group: &GroupModel, t: f64, casimir_cutoff: f64) -> Result<Self> {
        validate_t(t)?;
        let mut levels = 0;
        while levels < MAX_LEVELS && level_casimir(group, levels) <= casimir_cutoff {
            levels += 1;
        }
        let series = Self::from_levels(group, t, levels);
        if series.tail_bound > 1e-12 {
            let needed = auto_levels(group, t)?;
            return Err(Error::TruncationInsufficient {
                tail_bound: series.tail_bound,
                tolerance: 1e-12,
                required_cutoff: level_casimir(group, needed.saturating_sub(1)),
            });
        }
        Ok(series)
    }

    fn from_levels(group: &GroupModel, t: f64, levels: usize) -> Self {
        let weights = (0..levels)
            .map(|k| {
                let e = (-0.5 * t * level_casimir(group, k)).exp();
                match group.kind() {
                    GroupKind::SU2 => (k + 1) as f64 * e,
                    GroupKind::U1 => e,
                }
            })
            .collect();
        Self {
            group: *group,
            weights,
            tail_bound: tail_from(group, t, levels).0,
        }
    }

    pub fn levels(&self) -> usize {
        self.weights.len()
    }

    /// Largest Casimir included in the sum.
    pub fn casimir_reached(&self) -> f64 {
        level_casimir(&self.group, self.weights.len().saturating_sub(1))
    }

    /// `K_t(1)` within the truncation.
    pub fn identity_value(&self) -> f64 {
        self.eval(0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self.group.kind() {
            GroupKind::SU2 => {
                // chi_m = chi_{m-2} + 2 cos((m-1) theta)
                let (mut prev2, mut prev1) = (0.0, 0.0);
                let mut total = 0.0;
                for (k, w) in self.weights.iter().enumerate() {
                    let m = k + 1;
                    let chi = match m {
                        1 => 1.0,
                        2 => 2.0 * theta.cos(),
                        _ => prev2 + 2.0 * ((m - 1) as f64 * theta).cos(),
                    };
                    total += w * chi;
                    prev2 = prev1;
                    prev1 = chi;
                }
                total
            }
            GroupKind::U1 => self
                .weights
                .iter()
                .enumerate()
                .map(|(n, w)| if n == 0 { *w } else { 2.0 * w * (n as f64 * theta).cos() })
                .sum(),
        }
    }
}

fn auto_levels(group: &GroupModel, t: f64) -> Result<usize> {
    let mut k = 1;
    while k < MAX_LEVELS {
        let (tail, ratio) = tail_from(group, t, k);
        if ratio < 0.5 && tail < TAIL_TOLERANCE {
            return Ok(k);
        }
        k += 1;
    }
    Err(Error::SeriesTruncation { max_terms: MAX_LEVELS })
}

/// `theta` is regular when `exp(theta H)` is not central (SU(2): `theta` not in `pi Z`).
pub fn is_regular(group: &GroupModel, theta: f64) -> bool {
    match group.kind() {
        GroupKind::U1 => true,
        GroupKind::SU2 => theta.sin().abs() > 1e-8,
    }
}

fn auto_winding_cutoff(group: &GroupModel, t: f64) -> usize {
    let q = group.torus_norm_factor();
    let mut k = 1;
    while q * (2.0 * PI * (k as f64 + 1.0) - PI).powi(2) / (2.0 * t) < 80.0 {
        k += 1;
    }
    k
}

/// Geodesic sum with an explicit curvature constant; returns `(value, tail estimate)`.
///
/// `K_t = V (2 pi t)^{-d/2} e^{s t/12} sum_k a(phi_k) e^{-q phi_k^2 / 2t}` with
/// `phi_k = theta + 2 pi k`, `V` the Riemannian volume, and
/// `a(phi) = (j/J)^{-1/2} = phi / sin(theta)` for SU(2), taken on the analytic
/// branch so that it changes sign with `phi`; `a = 1` for U(1).
///
/// At the central elements of SU(2) the sum is `0/0`; there the limit
/// `sum_k (1 - q phi_k^2 / t) e^{-q phi_k^2 / 2t} / cos(theta)` is used.
fn geodesic_sum(group: &GroupModel, t: f64, theta: f64, cutoff: usize, s: f64) -> (f64, f64) {
    let q = group.torus_norm_factor();
    let d = group.dim_g() as f64;
    let pre = group.riemannian_volume() * (2.0 * PI * t).powf(-0.5 * d) * (s * t / 12.0).exp();
    let central = group.kind() == GroupKind::SU2 && theta.sin().abs() < 1e-6;
    let term = |k: i64| {
        let phi = theta + 2.0 * PI * k as f64;
        let g = (-q * phi * phi / (2.0 * t)).exp();
        match group.kind() {
            GroupKind::SU2 if central => (1.0 - q * phi * phi / t) * g / theta.cos(),
            GroupKind::SU2 => phi / theta.sin() * g,
            GroupKind::U1 => g,
        }
    };
    let k = cutoff as i64;
    // pairs k, -k summed from the outside in
    let mut sum = 0.0;
    for j in (1..=k).rev() {
        sum += term(j) + term(-j);
    }
    sum += term(0);
    let next = term(k + 1).abs() + term(-k - 1).abs();
    (pre * sum, 2.0 * pre * next)
}

/// Geodesic-sum value of `K_t(exp(theta H))` truncated at `|winding| <= winding_cutoff`,
/// using the calibrated curvature constant.
pub fn heat_kernel_geodesic(group: &GroupModel, t: f64, theta: f64, winding_cutoff: usize) -> Result<f64> {
    validate_t(t)?;
    if !is_regular(group, theta) {
        return Err(Error::NonRegularElement(theta));
    }
    Ok(geodesic_sum(group, t, theta, winding_cutoff, scalar_curvature(group)?).0)
}

/// Same as [`heat_kernel_geodesic`] with an explicit curvature constant `s`.
pub fn heat_kernel_geodesic_with_curvature(
    group: &GroupModel,
    t: f64,
    theta: f64,
    winding_cutoff: usize,
    s: f64,
) -> Result<f64> {
    validate_t(t)?;
    if !is_regular(group, theta) {
        return Err(Error::NonRegularElement(theta));
    }
    Ok(geodesic_sum(group, t, theta, winding_cutoff, s).0)
}

/// Only the winding-0 geodesic term.
pub fn heat_kernel_leading_geodesic(group: &GroupModel, t: f64, theta: f64) -> Result<f64> {
    heat_kernel_geodesic(group, t, theta, 0)
}

/// Fits the curvature constant `s` of the geodesic formula by matching it to
/// the character sum at `(t, theta)`: `s = (12/t) ln(K_char / K_geo|_{s=0})`.
pub fn calibrate_scalar_curvature(group: &GroupModel, t: f64, theta: f64) -> Result<f64> {
    validate_t(t)?;
    if !is_regular(group, theta) {
        return Err(Error::NonRegularElement(theta));
    }
    let exact = CharacterSeries::new(group, t)?.eval(theta);
    let flat = geodesic_sum(group, t, theta, 20, 0.0).0;
    if !(exact > 0.0 && flat > 0.0) {
        return Err(Error::Consistency(format!(
            "curvature calibration needs positive kernels, got {exact} and {flat}"
        )));
    }
    Ok(12.0 / t * (exact / flat).ln())
}

/// Curvature constant fitted at [`CURVATURE_CALIBRATION_POINT`].
pub fn scalar_curvature(group: &GroupModel) -> Result<f64> {
    match group.kind() {
        GroupKind::U1 => Ok(0.0),
        GroupKind::SU2 => {
            let (t, theta) = CURVATURE_CALIBRATION_POINT;
            calibrate_scalar_curvature(group, t, theta)
        }
    }
}

/// `|integral K_{t1}(g1 g^-1) K_{t2}(g g2) dg - K_{t1+t2}(g1 g2)|` for torus elements
/// `g1 = exp(theta1 H)`, `g2 = exp(theta2 H)`.
///
/// SU(2): substituting `h = g g2` leaves `integral K_{t1}(x h^-1) K_{t2}(h) dh` with
/// `x = g1 g2`. With `h` of class angle `psi` and axis at angle `arccos u` from
/// that of `x`, the class angle of `x h^-1` has cosine
/// `cos(theta_x) cos(psi) + sin(theta_x) sin(psi) u` and `u` is uniform on `[-1, 1]`,
/// so the integral is a Weyl integral in `psi` of an average over `u`.
pub fn convolution_check(group: &GroupModel, t1: f64, t2: f64, theta1: f64, theta2: f64) -> Result<f64> {
    validate_t(t1)?;
    validate_t(t2)?;
    let k1 = CharacterSeries::new(group, t1)?;
    let k2 = CharacterSeries::new(group, t2)?;
    let k12 = CharacterSeries::new(group, t1 + t2)?;
    let thx = theta1 + theta2;
    let rhs = k12.eval(thx);
    let lhs = match group.kind() {
        GroupKind::U1 => PeriodicTrapezoid::default().mean(|phi| k1.eval(thx - phi) * k2.eval(phi))?,
        GroupKind::SU2 => {
            let rule = gauss_legendre(160);
            let (sx, cx) = thx.sin_cos();
            weyl_integrate(group, |psi| {
                let (sp, cp) = psi.sin_cos();
                let avg: f64 = rule
                    .iter()
                    .map(|(u, w)| {
                        let c = (cx * cp + sx * sp * u).clamp(-1.0, 1.0);
                        w * k1.eval(c.acos())
                    })
                    .sum::<f64>()
                    * 0.5;
                avg * k2.eval(psi)
            })?
        }
    };
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2() -> GroupModel {
        GroupModel::su2()
    }

    #[test]
    fn u1_jacobi_theta_against_winding_sum() {
        let g = GroupModel::u1();
        for t in [0.05, 0.5, 2.0] {
            for theta in [0.0, 0.4, 2.9] {
                let direct: f64 = (-200i64..=200)
                    .map(|n| (-t * (n * n) as f64 / 2.0).exp() * (n as f64 * theta).cos())
                    .sum();
                let winding: f64 = (2.0 * PI / t).sqrt()
                    * (-20i64..=20)
                        .map(|k| {
                            let p = theta + 2.0 * PI * k as f64;
                            (-p * p / (2.0 * t)).exp()
                        })
                        .sum::<f64>();
                let v = heat_kernel(&HeatKernelQuery::new(g, t, theta)).unwrap();
                assert!((v - direct).abs() < 1e-10);
                assert!((v - winding).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_time() {
        let err = heat_kernel(&HeatKernelQuery::new(su2(), 0.0, 0.1)).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(heat_kernel(&HeatKernelQuery::new(su2(), -1.0, 0.1)).is_err());
    }

    #[test]
    fn infinite_time_is_constant_one() {
        let v = heat_kernel(&HeatKernelQuery::new(su2(), f64::INFINITY, 1.2)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn short_cutoff_names_required_cutoff() {
        let q = HeatKernelQuery::new(su2(), 0.1, 0.3).with_truncation(Truncation::CasimirCutoff(4.0));
        match heat_kernel(&q).unwrap_err() {
            Error::TruncationInsufficient { required_cutoff, .. } => assert!(required_cutoff > 4.0),
            e => panic!("unexpected {e:?}"),
        }
        let ok = q.with_truncation(Truncation::CasimirCutoff(2000.0));
        assert!(heat_kernel(&ok).is_ok());
    }

    #[test]
    fn even_in_theta_and_large_t_flat() {
        let g = su2();
        for theta in [0.2, 1.1, 2.7] {
            let a = heat_kernel(&HeatKernelQuery::new(g, 0.3, theta)).unwrap();
            let b = heat_kernel(&HeatKernelQuery::new(g, 0.3, -theta)).unwrap();
            assert_eq!(a, b);
            let flat = heat_kernel(&HeatKernelQuery::new(g, 60.0, theta)).unwrap();
            assert!((flat - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_and_positivity() {
        for g in [su2(), GroupModel::u1()] {
            for t in [0.01, 0.1, 1.0, 10.0] {
                let s = CharacterSeries::new(&g, t).unwrap();
                let total = weyl_integrate(&g, |th| s.eval(th)).unwrap();
                assert!((total - 1.0).abs() < 1e-10, "{g} t={t} total={total}");
                for i in 0..64 {
                    let theta = PI * i as f64 / 63.0;
                    let k = heat_kernel(&HeatKernelQuery::new(g, t, theta)).unwrap();
                    assert!(k > 0.0 || (k == 0.0 && t < 0.1), "{g} t={t} theta={theta}: {k}");
                }
            }
        }
    }

    #[test]
    fn calibrated_curvature_is_that_of_the_round_three_sphere() {
        // radius sqrt(2) c, scalar curvature 6 / R^2 = 3 / c^2
        for scale in [1.0, 2.0] {
            let g = su2().with_metric_scale(scale).unwrap();
            let s = scalar_curvature(&g).unwrap();
            assert!((s - 3.0 / scale).abs() < 1e-9, "s = {s}");
        }
    }

    #[test]
    fn geodesic_and_character_sums_agree() {
        let g = su2();
        for t in [0.01, 0.03, 0.1, 0.3, 1.0] {
            for theta in [0.3, 1.0, 2.0] {
                let a = heat_kernel_geodesic(&g, t, theta, 20).unwrap();
                let b = CharacterSeries::new(&g, t).unwrap().eval(theta);
                assert!((a - b).abs() < 1e-8, "t={t} theta={theta}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn leading_geodesic_dominates_at_small_t() {
        let g = su2();
        let full = heat_kernel_geodesic(&g, 0.01, 0.3, 20).unwrap();
        let lead = heat_kernel_leading_geodesic(&g, 0.01, 0.3).unwrap();
        assert!(((lead - full) / full).abs() < 1e-10);
        // winding-0 term times (2 pi t)^{3/2} is V (theta/sin theta) e^{-|Y|^2/2t} e^{st/12}
        let t = 1e-3;
        let theta = 0.05;
        let scaled = heat_kernel_leading_geodesic(&g, t, theta).unwrap() * (2.0 * PI * t).powf(1.5);
        let expected = g.riemannian_volume() * theta / theta.sin() * (-theta * theta / t).exp() * (t / 4.0).exp();
        assert!((scaled / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn geodesic_rejects_central_elements() {
        assert_eq!(
            heat_kernel_geodesic(&su2(), 0.1, 0.0, 5),
            Err(Error::NonRegularElement(0.0))
        );
        assert!(heat_kernel_geodesic(&su2(), 0.1, PI, 5).is_err());
    }

    #[test]
    fn auto_routes_small_times_to_geodesic() {
        let v = heat_kernel_value(&HeatKernelQuery::new(su2(), 0.005, 0.4)).unwrap();
        assert_eq!(v.method, Method::Geodesic);
        let c = CharacterSeries::new(&su2(), 0.005).unwrap().eval(0.4);
        assert!((v.value - c).abs() < 1e-8 * c.abs().max(1.0));
        for theta in [0.0, PI] {
            let central = heat_kernel(&HeatKernelQuery::new(su2(), 0.005, theta)).unwrap();
            let c = CharacterSeries::new(&su2(), 0.005).unwrap().eval(theta);
            assert!((central - c).abs() < 1e-8 * c.abs().max(1.0), "{central} vs {c}");
        }
    }

    #[test]
    fn value_serialization_shape() {
        let v = heat_kernel_value(&HeatKernelQuery::new(su2(), 0.5, 0.25)).unwrap();
        let json = serde_json::to_value(v).unwrap();
        assert_eq!(json["method"], "character");
        assert_eq!(json["t"], 0.5);
        assert_eq!(json["theta"], 0.25);
    }

    #[test]
    fn semigroup_property() {
        assert!(convolution_check(&GroupModel::u1(), 0.5, 0.5, 0.0, 0.0).unwrap() < 1e-10);
        for (t1, t2) in [(0.05, 0.2), (1.0, 0.05), (0.2, 0.2)] {
            for (a, b) in [(0.0, 0.0), (0.3, 0.9)] {
                let d = convolution_check(&su2(), t1, t2, a, b).unwrap();
                assert!(d < 1e-8, "t1={t1} t2={t2} dev={d}");
            }
        }
    }
}
