//! The lattice Yang-Mills measure: partition functions, exact Wilson loop
//! expectations for simple loops, and a Monte Carlo oracle on surface maps.
//!
//! With dimensionless coupling `lambda = lambda0 |Sigma|`, faces carry the heat
//! kernel weight `K_{lambda0 |F|}` of their boundary holonomy. The measure is
//! invariant under subdivision, so the smallest map realizing a configuration
//! already gives the continuum answer.

mod mc;
mod surface;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heatkernel::{CharacterSeries, HeatKernel};
use crate::quadrature::PeriodicTrapezoid;
use crate::liegroup::{weyl_integrate_with, ClassFunction, GroupKind, GroupModel, Irrep};

pub use mc::{graph_expectation_mc, LoopObservable, McEstimate, MIN_FACE_COUPLING, MIN_SAMPLES};
pub use surface::{EdgeUse, Face, NamedLoop, SurfaceMap};

const MAX_LEVELS: usize = 1_000_000;
const PARTITION_TAIL: f64 = 1e-13;

/// `sum_rho dim(rho)^{2 - 2 genus} e^{-lambda c2(rho)/2}`, the character reduction of
/// the `2h`-gon integral `integral K_lambda(a1 b1 a1^-1 b1^-1 ...)`.
pub fn partition_function(group: &GroupModel, genus: u32, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("coupling must be positive and finite, got {lambda}")));
    }
    let power = 2.0 - 2.0 * genus as f64;
    // level k: SU(2) irrep of dimension k+1, U(1) charges +-k
    let level = |k: usize| -> f64 {
        match group.kind() {
            GroupKind::SU2 => {
                let r = group.irrep(k as i64 + 1).expect("positive label");
                (r.dim as f64).powf(power) * (-0.5 * lambda * r.casimir).exp()
            }
            GroupKind::U1 => {
                let r = group.irrep(k as i64).expect("any charge");
                let mult = if k == 0 { 1.0 } else { 2.0 };
                mult * (-0.5 * lambda * r.casimir).exp()
            }
        }
    };
    // terms are decreasing with decreasing ratios from the first k whose ratio is below 1
    let mut total = 0.0;
    let mut k = 0;
    while k < MAX_LEVELS {
        total += level(k);
        let next = level(k + 1);
        let ratio = next / level(k);
        if next == 0.0 || (ratio < 0.5 && next / (1.0 - ratio) < PARTITION_TAIL) {
            return Ok(total);
        }
        k += 1;
    }
    Err(Error::SeriesTruncation { max_terms: MAX_LEVELS })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    Sphere { total_area: f64 },
    Plane,
}

/// A simple closed loop on the sphere or the plane, the areas of the regions
/// it bounds, and the class function whose expectation is wanted.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfig {
    surface: Surface,
    regions: Vec<f64>,
    observable: ClassFunction,
}

impl LoopConfig {
    /// Loop splitting a sphere into regions of areas `r1` and `r2`.
    pub fn sphere(r1: f64, r2: f64, observable: ClassFunction) -> Result<Self> {
        for a in [r1, r2] {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidInput(format!("region areas must be positive, got {a}")));
            }
        }
        Ok(Self {
            surface: Surface::Sphere { total_area: r1 + r2 },
            regions: vec![r1, r2],
            observable,
        })
    }

    /// Loop in the plane bounding a region of area `area`.
    pub fn plane(area: f64, observable: ClassFunction) -> Result<Self> {
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::InvalidInput(format!("enclosed area must be positive, got {area}")));
        }
        Ok(Self {
            surface: Surface::Plane,
            regions: vec![area],
            observable,
        })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn regions(&self) -> &[f64] {
        &self.regions
    }

    pub fn observable(&self) -> &ClassFunction {
        &self.observable
    }

    fn check_group(&self, group: &GroupModel) -> Result<()> {
        if self.observable.group() != group {
            return Err(Error::InvalidInput(format!(
                "observable lives on {} but the computation is for {}",
                self.observable.group(),
                group
            )));
        }
        Ok(())
    }
}

fn check_coupling(lambda0: f64) -> Result<()> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda0 must be positive and finite, got {lambda0}")));
    }
    Ok(())
}

/// Exact `<W_f>` for a simple loop.
///
/// Sphere: `integral f K_{lambda0|R1|} K_{lambda0|R2|} dg / integral K_{lambda0|R1|} K_{lambda0|R2|} dg`
/// by torus quadrature. The denominator equals `K_{lambda0|S^2|}(1)` by the
/// convolution property; computing it with the same rule as the numerator
/// makes the trivial observable come out as exactly 1.
/// Plane: `sum coeff dim e^{-lambda0 |R| c2 / 2}`.
pub fn wilson_exact_simple(group: &GroupModel, cfg: &LoopConfig, lambda0: f64) -> Result<f64> {
    check_coupling(lambda0)?;
    cfg.check_group(group)?;
    match cfg.surface {
        Surface::Plane => Ok(cfg
            .observable
            .terms()
            .iter()
            .map(|(r, c)| c * wilson_exact_r2(r, lambda0, cfg.regions[0]))
            .sum()),
        Surface::Sphere { .. } => {
            // ordered so that swapping the regions reproduces the same bits
            let (a, b) = (cfg.regions[0].min(cfg.regions[1]), cfg.regions[0].max(cfg.regions[1]));
            let k1 = HeatKernel::new(group, lambda0 * a)?;
            let k2 = HeatKernel::new(group, lambda0 * b)?;
            let f = &cfg.observable;
            // the product K1 K2 is a peak of width about sqrt(rho / q)
            let rho = lambda0 * a * b / (a + b);
            let rule = PeriodicTrapezoid::resolving((rho / group.torus_norm_factor()).sqrt());
            let num = weyl_integrate_with(group, &rule, |th| f.eval(th).re * k1.eval(th) * k2.eval(th))?;
            let den = weyl_integrate_with(group, &rule, |th| k1.eval(th) * k2.eval(th))?;
            Ok(num / den)
        }
    }
}

/// Sphere expectation by the character-algebra path:
/// `sum_{a,b} dim_a dim_b e^{-t1 c_a/2 - t2 c_b/2} N(f; a, b) / sum_a dim_a^2 e^{-lambda c_a/2}`,
/// with `N` the multiplicity of the trivial irrep in `f (x) a (x) b` (the SU(2)
/// triangle rule, or charge conservation for U(1)).
pub fn wilson_exact_fusion(group: &GroupModel, cfg: &LoopConfig, lambda0: f64) -> Result<f64> {
    check_coupling(lambda0)?;
    cfg.check_group(group)?;
    let (t1, t2) = match cfg.surface {
        Surface::Sphere { .. } => (lambda0 * cfg.regions[0], lambda0 * cfg.regions[1]),
        Surface::Plane => {
            return Err(Error::InvalidInput("the fusion path is defined for sphere configurations".into()))
        }
    };
    let levels = CharacterSeries::new(group, t1.min(t2))?.levels();
    let weight = |r: &Irrep, t: f64| r.dim as f64 * (-0.5 * t * r.casimir).exp();
    let mut num = 0.0;
    match group.kind() {
        GroupKind::SU2 => {
            for (rf, coeff) in cfg.observable.terms() {
                let n = rf.label;
                for a in 1..=levels as i64 {
                    let ra = group.irrep(a)?;
                    let lo = (a - n).abs() + 1;
                    let hi = (a + n - 1).min(levels as i64);
                    let mut b = lo;
                    while b <= hi {
                        let rb = group.irrep(b)?;
                        num += coeff * weight(&ra, t1) * weight(&rb, t2);
                        b += 2;
                    }
                }
            }
        }
        GroupKind::U1 => {
            let l = levels as i64;
            for (rf, coeff) in cfg.observable.terms() {
                for a in -l..=l {
                    let b = -rf.label - a;
                    if b.abs() > l {
                        continue;
                    }
                    num += coeff * weight(&group.irrep(a)?, t1) * weight(&group.irrep(b)?, t2);
                }
            }
        }
    }
    let den = partition_function(group, 0, t1 + t2)?;
    Ok(num / den)
}

/// Plane expectation of a single character: `dim e^{-lambda0 |R| c2 / 2}`.
pub fn wilson_exact_r2(irrep: &Irrep, lambda0: f64, area: f64) -> f64 {
    irrep.dim as f64 * (-0.5 * lambda0 * area * irrep.casimir).exp()
}
