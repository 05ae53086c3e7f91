//! Compact gauge groups: irreducible representations, characters, Casimirs
//! and Weyl integration data.
//!
//! Only rank-one groups are supported, so every class function is a function
//! of a single torus angle `theta`, with `exp(theta * H)` the torus element for
//! the generator `H` (`H = diag(i, -i)` for SU(2), `H = i` for U(1)).
//!
//! Normalizations: SU(2) carries `metric_scale * (-tr XY)` in the defining
//! representation, so `|theta H|^2 = 2 c^2 theta^2` with `c^2 = metric_scale`;
//! U(1) carries `metric_scale * theta^2`, making the unit charge Casimir
//! `1 / metric_scale`.

mod element;
mod identities;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::PeriodicTrapezoid;

pub use element::GroupElement;
pub use identities::{lie_algebra_basis, verify_lie_identities, LieFactorCheck, LieIdentityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    U1,
    SU2,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::U1 => f.write_str("U1"),
            GroupKind::SU2 => f.write_str("SU2"),
        }
    }
}

/// A compact gauge group together with the scale of its invariant metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupModel {
    kind: GroupKind,
    metric_scale: f64,
}

impl GroupModel {
    pub fn u1() -> Self {
        Self {
            kind: GroupKind::U1,
            metric_scale: 1.0,
        }
    }

    pub fn su2() -> Self {
        Self {
            kind: GroupKind::SU2,
            metric_scale: 1.0,
        }
    }

    pub fn new(kind: GroupKind, metric_scale: f64) -> Result<Self> {
        if !(metric_scale.is_finite() && metric_scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "metric_scale must be positive, got {metric_scale}"
            )));
        }
        Ok(Self { kind, metric_scale })
    }

    /// Parses `U1`, `U(1)`, `SU2` or `SU(2)` (case-insensitive).
    pub fn from_name(name: &str) -> Result<Self> {
        let cleaned: String = name
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        match cleaned.as_str() {
            "U1" => Ok(Self::u1()),
            "SU2" => Ok(Self::su2()),
            _ => Err(Error::UnsupportedGroup(name.to_string())),
        }
    }

    pub fn with_metric_scale(self, metric_scale: f64) -> Result<Self> {
        Self::new(self.kind, metric_scale)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn metric_scale(&self) -> f64 {
        self.metric_scale
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GroupKind::U1 => "U1",
            GroupKind::SU2 => "SU2",
        }
    }

    pub fn torus_dim(&self) -> usize {
        1
    }

    pub fn weyl_order(&self) -> usize {
        match self.kind {
            GroupKind::U1 => 1,
            GroupKind::SU2 => 2,
        }
    }

    /// Dimension of the Lie algebra.
    pub fn dim_g(&self) -> usize {
        match self.kind {
            GroupKind::U1 => 1,
            GroupKind::SU2 => 3,
        }
    }

    /// Quadratic Casimir of the irrep with the given label, without validation.
    fn casimir_of(&self, label: i64) -> f64 {
        let l = label as f64;
        match self.kind {
            GroupKind::U1 => l * l / self.metric_scale,
            GroupKind::SU2 => (l * l - 1.0) / (2.0 * self.metric_scale),
        }
    }

    pub fn irrep(&self, label: i64) -> Result<Irrep> {
        let dim = match self.kind {
            GroupKind::U1 => 1,
            GroupKind::SU2 if label >= 1 => label as usize,
            GroupKind::SU2 => {
                return Err(Error::InvalidIrrep {
                    group: self.name().into(),
                    label,
                })
            }
        };
        Ok(Irrep {
            group: *self,
            label,
            dim,
            casimir: self.casimir_of(label),
        })
    }

    pub fn trivial_irrep(&self) -> Irrep {
        let label = match self.kind {
            GroupKind::U1 => 0,
            GroupKind::SU2 => 1,
        };
        self.irrep(label).expect("trivial label is valid")
    }

    /// Squared norm of `theta * H` under the chosen metric.
    pub fn torus_norm_sq(&self, theta: f64) -> f64 {
        self.torus_norm_factor() * theta * theta
    }

    /// The constant `q` with `|theta H|^2 = q theta^2`.
    pub fn torus_norm_factor(&self) -> f64 {
        match self.kind {
            GroupKind::U1 => self.metric_scale,
            GroupKind::SU2 => 2.0 * self.metric_scale,
        }
    }

    /// Riemannian volume of the group under the chosen metric.
    pub fn riemannian_volume(&self) -> f64 {
        let c = self.metric_scale.sqrt();
        match self.kind {
            // circle of circumference 2 pi c
            GroupKind::U1 => 2.0 * PI * c,
            // three-sphere of radius sqrt(2) c
            GroupKind::SU2 => 2.0 * PI * PI * (2.0f64.sqrt() * c).powi(3),
        }
    }

    /// Labels whose torus-character frequencies are `theta -> e^{i k theta}`.
    pub fn character_frequencies(&self, label: i64) -> Vec<i64> {
        match self.kind {
            GroupKind::U1 => vec![label],
            GroupKind::SU2 => (0..label).map(|k| label - 1 - 2 * k).collect(),
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.metric_scale == 1.0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}(metric_scale={})", self.kind, self.metric_scale)
        }
    }
}

/// An irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Irrep {
    pub group: GroupModel,
    /// U(1): charge `n`; SU(2): dimension `m`.
    pub label: i64,
    pub dim: usize,
    pub casimir: f64,
}

impl Irrep {
    pub fn is_trivial(&self) -> bool {
        self.casimir == 0.0
    }
}

#[derive(Serialize, Deserialize)]
struct IrrepWire {
    group: GroupKind,
    label: i64,
}

impl Serialize for Irrep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IrrepWire {
            group: self.group.kind,
            label: self.label,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Irrep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = IrrepWire::deserialize(deserializer)?;
        let group = match wire.group {
            GroupKind::U1 => GroupModel::u1(),
            GroupKind::SU2 => GroupModel::su2(),
        };
        group.irrep(wire.label).map_err(D::Error::custom)
    }
}

/// All irreps with Casimir at most `casimir_cutoff`, sorted by Casimir then label.
pub fn enumerate_irreps(group: &GroupModel, casimir_cutoff: f64) -> Result<Vec<Irrep>> {
    if !(casimir_cutoff >= 0.0 && casimir_cutoff.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "casimir cutoff must be non-negative and finite, got {casimir_cutoff}"
        )));
    }
    let mut out = Vec::new();
    match group.kind {
        GroupKind::U1 => {
            let max = (casimir_cutoff * group.metric_scale).sqrt().floor() as i64 + 1;
            for n in -max..=max {
                let irrep = group.irrep(n)?;
                if irrep.casimir <= casimir_cutoff {
                    out.push(irrep);
                }
            }
        }
        GroupKind::SU2 => {
            let mut m = 1;
            loop {
                let irrep = group.irrep(m)?;
                if irrep.casimir > casimir_cutoff {
                    break;
                }
                out.push(irrep);
                m += 1;
            }
        }
    }
    out.sort_by(|a, b| a.casimir.total_cmp(&b.casimir).then(a.label.cmp(&b.label)));
    Ok(out)
}

/// Character of `irrep` at the torus element `exp(theta H)`.
///
/// SU(2) characters are evaluated as the finite exponential sum, which stays
/// accurate at `theta = 0` where `sin(m theta)/sin(theta)` would not.
pub fn character_at(irrep: &Irrep, theta: f64) -> Complex64 {
    match irrep.group.kind {
        GroupKind::U1 => Complex64::from_polar(1.0, irrep.label as f64 * theta),
        GroupKind::SU2 => {
            let m = irrep.label;
            let mut total = if m % 2 == 1 { 1.0 } else { 0.0 };
            let mut k = m - 1;
            while k > 0 {
                total += 2.0 * (k as f64 * theta).cos();
                k -= 2;
            }
            Complex64::new(total, 0.0)
        }
    }
}

/// `(J(Y), j(exp Y))` for `Y = theta H`: the products over positive roots of
/// `|alpha(Y)|^2` and `|e^{alpha(Y)/2} - e^{-alpha(Y)/2}|^2`.
pub fn weyl_densities(group: &GroupModel, theta: f64) -> (f64, f64) {
    match group.kind {
        GroupKind::U1 => (1.0, 1.0),
        // single positive root alpha(theta H) = 2 i theta
        GroupKind::SU2 => {
            let s = theta.sin();
            (4.0 * theta * theta, 4.0 * s * s)
        }
    }
}

/// `j(exp Y) / J(Y)`, with its limit 1 at the origin.
pub fn weyl_density_ratio(group: &GroupModel, theta: f64) -> f64 {
    match group.kind {
        GroupKind::U1 => 1.0,
        GroupKind::SU2 => {
            if theta.abs() < 1e-6 {
                1.0 - theta * theta / 3.0
            } else {
                let r = theta.sin() / theta;
                r * r
            }
        }
    }
}

/// `integral over G of f dg` for a class function given on the torus, with
/// normalized Haar measure, via `(1/|W|) * mean over theta of f(theta) j(theta)`.
pub fn weyl_integrate(group: &GroupModel, f: impl Fn(f64) -> f64) -> Result<f64> {
    weyl_integrate_with(group, &PeriodicTrapezoid::default(), f)
}

pub fn weyl_integrate_with(
    group: &GroupModel,
    rule: &PeriodicTrapezoid,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    let w = group.weyl_order() as f64;
    let g = *group;
    rule.mean(|theta| f(theta) * weyl_densities(&g, theta).1)
        .map(|m| m / w)
}

/// Complex-valued counterpart of [`weyl_integrate`].
pub fn weyl_integrate_complex(group: &GroupModel, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let w = group.weyl_order() as f64;
    let g = *group;
    PeriodicTrapezoid::default()
        .mean(|theta| f(theta) * weyl_densities(&g, theta).1)
        .map(|m| m / w)
}

/// A finite linear combination of irreducible characters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    group: GroupModel,
    terms: Vec<(Irrep, f64)>,
}

impl ClassFunction {
    pub fn new(group: GroupModel, terms: Vec<(Irrep, f64)>) -> Result<Self> {
        if let Some((bad, _)) = terms.iter().find(|(r, _)| r.group != group) {
            return Err(Error::InvalidInput(format!(
                "irrep {} of {} mixed into a class function on {}",
                bad.label, bad.group, group
            )));
        }
        Ok(Self { group, terms })
    }

    pub fn character(irrep: Irrep) -> Self {
        Self {
            group: irrep.group,
            terms: vec![(irrep, 1.0)],
        }
    }

    pub fn constant(group: GroupModel, value: f64) -> Self {
        Self {
            group,
            terms: vec![(group.trivial_irrep(), value)],
        }
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn terms(&self) -> &[(Irrep, f64)] {
        &self.terms
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(r, c)| character_at(r, theta) * *c)
            .sum()
    }

    pub fn eval_identity(&self) -> f64 {
        self.terms.iter().map(|(r, c)| c * r.dim as f64).sum()
    }

    /// Coefficient of the trivial character.
    pub fn trivial_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(r, _)| r.is_trivial())
            .map(|(_, c)| c)
            .sum()
    }

    /// The class function with its trivial component removed.
    pub fn nontrivial_part(&self) -> Self {
        Self {
            group: self.group,
            terms: self
                .terms
                .iter()
                .filter(|(r, c)| !r.is_trivial() && *c != 0.0)
                .copied()
                .collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(r, c)| r.is_trivial() || *c == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_irreps_below_cutoffs() {
        let g = GroupModel::su2();
        let labels = |c| {
            enumerate_irreps(&g, c)
                .unwrap()
                .iter()
                .map(|r| r.label)
                .collect::<Vec<_>>()
        };
        assert_eq!(labels(0.0), vec![1]);
        assert_eq!(labels(4.0), vec![1, 2, 3]);
        let casimirs: Vec<f64> = enumerate_irreps(&g, 4.0)
            .unwrap()
            .iter()
            .map(|r| r.casimir)
            .collect();
        assert_eq!(casimirs, vec![0.0, 1.5, 4.0]);
    }

    #[test]
    fn u1_irreps_sorted_by_casimir_then_label() {
        let g = GroupModel::u1();
        let labels: Vec<i64> = enumerate_irreps(&g, 1.0)
            .unwrap()
            .iter()
            .map(|r| r.label)
            .collect();
        assert_eq!(labels, vec![0, -1, 1]);
        let zero: Vec<i64> = enumerate_irreps(&g, 0.0)
            .unwrap()
            .iter()
            .map(|r| r.label)
            .collect();
        assert_eq!(zero, vec![0]);
    }

    #[test]
    fn negative_cutoff_rejected() {
        assert!(enumerate_irreps(&GroupModel::su2(), -1.0).is_err());
    }

    #[test]
    fn unknown_group_name() {
        assert_eq!(
            GroupModel::from_name("SU3"),
            Err(Error::UnsupportedGroup("SU3".into()))
        );
        assert_eq!(GroupModel::from_name("su(2)").unwrap(), GroupModel::su2());
    }

    #[test]
    fn characters() {
        let g = GroupModel::su2();
        let chi2 = g.irrep(2).unwrap();
        assert_eq!(character_at(&chi2, 0.0).re, 2.0);
        for theta in [0.1, 0.7, 2.5] {
            assert!((character_at(&chi2, theta).re - 2.0 * f64::cos(theta)).abs() < 1e-15);
        }
        // e^{i pi} + 1 + e^{-i pi}
        let chi3 = g.irrep(3).unwrap();
        assert!((character_at(&chi3, PI / 2.0).re + 1.0).abs() < 1e-15);
        for m in 1..8 {
            assert_eq!(character_at(&g.irrep(m).unwrap(), 0.0).re, m as f64);
        }
    }

    #[test]
    fn irrep_json_shape() {
        let r = GroupModel::su2().irrep(3).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"group":"SU2","label":3}"#);
        let back: Irrep = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Irrep>(r#"{"group":"SU2","label":0}"#).is_err());
    }

    #[test]
    fn weyl_density_values() {
        let g = GroupModel::su2();
        assert_eq!(weyl_densities(&g, 0.0), (0.0, 0.0));
        let (jj, j) = weyl_densities(&g, 0.8);
        assert!((jj - 4.0 * 0.64).abs() < 1e-15);
        assert!((j - 4.0 * 0.8f64.sin().powi(2)).abs() < 1e-15);
        assert_eq!(weyl_densities(&GroupModel::u1(), 1.3), (1.0, 1.0));
        for y in [1e-1, 1e-2, 1e-3] {
            let (jj, j) = weyl_densities(&g, y);
            assert!((j / jj - 1.0).abs() <= y * y);
            assert!((weyl_density_ratio(&g, y) - j / jj).abs() < 1e-12);
        }
    }

    #[test]
    fn weyl_integration_basics() {
        let g = GroupModel::su2();
        assert!((weyl_integrate(&g, |_| 1.0).unwrap() - 1.0).abs() < 1e-14);
        let chi2 = g.irrep(2).unwrap();
        let c = |t: f64| character_at(&chi2, t).re;
        assert!((weyl_integrate(&g, |t| c(t) * c(t)).unwrap() - 1.0).abs() < 1e-12);
        assert!(weyl_integrate(&g, |t| c(t).powi(3)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn schur_orthogonality_su2() {
        let g = GroupModel::su2();
        for m in 1..=6 {
            for n in 1..=6 {
                let (a, b) = (g.irrep(m).unwrap(), g.irrep(n).unwrap());
                let v = weyl_integrate(&g, |t| character_at(&a, t).re * character_at(&b, t).re)
                    .unwrap();
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-12, "m={m} n={n} v={v}");
            }
        }
    }

    #[test]
    fn metric_scale_covariance() {
        for scale in [0.5, 2.0] {
            for kind in [GroupKind::U1, GroupKind::SU2] {
                let base = GroupModel::new(kind, 1.0).unwrap();
                let scaled = GroupModel::new(kind, scale).unwrap();
                for label in 1..5 {
                    let a = base.irrep(label).unwrap().casimir;
                    let b = scaled.irrep(label).unwrap().casimir;
                    assert!((b - a / scale).abs() < 1e-15);
                }
            }
        }
        assert!(GroupModel::new(GroupKind::SU2, 0.0).is_err());
    }

    #[test]
    fn class_function_identity_value() {
        let g = GroupModel::su2();
        let f = ClassFunction::new(g, vec![(g.irrep(2).unwrap(), 0.5), (g.irrep(3).unwrap(), 2.0)])
            .unwrap();
        assert_eq!(f.eval_identity(), 7.0);
        assert!((f.eval(0.0).re - 7.0).abs() < 1e-15);
        assert!(ClassFunction::new(g, vec![(GroupModel::u1().irrep(1).unwrap(), 1.0)]).is_err());
    }
}
