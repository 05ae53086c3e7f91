//! Structure-constant identities behind the one-loop Lie factors.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{GroupKind, GroupModel};

type CMat = DMatrix<Complex64>;

const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Orthonormal basis of the Lie algebra in the defining representation.
///
/// SU(2): `I, J, K / (c sqrt 2)` with `I = diag(i,-i)`, `J = [[0,-1],[1,0]]`,
/// `K = [[0,-i],[-i,0]]`. U(1): `i / c`.
pub fn lie_algebra_basis(group: &GroupModel) -> Vec<CMat> {
    let c = group.metric_scale().sqrt();
    let i = Complex64::i();
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match group.kind() {
        GroupKind::U1 => vec![CMat::from_element(1, 1, i / c)],
        GroupKind::SU2 => {
            let s = 1.0 / (c * 2f64.sqrt());
            vec![
                CMat::from_row_slice(2, 2, &[i, o, o, -i]) * Complex64::new(s, 0.0),
                CMat::from_row_slice(2, 2, &[o, -one, one, o]) * Complex64::new(s, 0.0),
                CMat::from_row_slice(2, 2, &[o, -i, -i, o]) * Complex64::new(s, 0.0),
            ]
        }
    }
}

/// The invariant inner product `metric_scale * (-Re tr XY)`.
pub(crate) fn inner(group: &GroupModel, x: &CMat, y: &CMat) -> f64 {
    -(x * y).trace().re * group.metric_scale()
}

fn bracket(x: &CMat, y: &CMat) -> CMat {
    x * y - y * x
}

/// One Lie factor compared with its expected multiple of `C_ab`.
#[derive(Debug, Clone, Serialize)]
pub struct LieFactorCheck {
    pub name: String,
    pub expected_multiple_of_c: f64,
    pub matrix: Vec<Vec<f64>>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LieIdentityReport {
    pub group: String,
    pub basis_orthonormality_deviation: f64,
    /// `C_ab = sum_c <[e_c,[e_c,e_a]], e_b>`.
    pub casimir_matrix: Vec<Vec<f64>>,
    pub adjoint_casimir: f64,
    pub casimir_deviation: f64,
    pub factors: Vec<LieFactorCheck>,
    /// Lie factors weighted by the coefficients of their logarithmic
    /// singularities; cancels entrywise when the pattern is right.
    pub divergence_sum_max: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Recomputes the adjoint Casimir matrix and the four one-loop Lie factors
/// from explicit matrices and checks them against `C, -C, C, C`.
pub fn verify_lie_identities(group: &GroupModel) -> LieIdentityReport {
    let basis = lie_algebra_basis(group);
    let d = basis.len();
    let ip = |x: &CMat, y: &CMat| inner(group, x, y);

    let mut ortho_dev = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let target = if a == b { 1.0 } else { 0.0 };
            ortho_dev = ortho_dev.max((ip(&basis[a], &basis[b]) - target).abs());
        }
    }

    let br: Vec<Vec<CMat>> = (0..d)
        .map(|a| (0..d).map(|b| bracket(&basis[a], &basis[b])).collect())
        .collect();
    let square = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (0..d).map(|a| (0..d).map(|b| f(a, b)).collect()).collect()
    };

    let c_mat = square(&|a, b| {
        (0..d)
            .map(|c| ip(&bracket(&basis[c], &br[c][a]), &basis[b]))
            .sum()
    });

    let adjoint_casimir = match group.kind() {
        GroupKind::U1 => 0.0,
        GroupKind::SU2 => group.irrep(3).expect("adjoint").casimir,
    };
    let mut casimir_dev = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let target = if a == b { -adjoint_casimir } else { 0.0 };
            casimir_dev = casimir_dev.max((c_mat[a][b] - target).abs());
        }
    }

    let factor_i = square(&|a, b| (0..d).map(|c| ip(&br[a][c], &br[c][b])).sum());
    let factor_ii1 = square(&|a, b| {
        let mut s = 0.0;
        for c in 0..d {
            for e in 0..d {
                s += ip(&br[a][c], &basis[e]) * ip(&br[b][c], &basis[e]);
            }
        }
        s
    });
    let factor_ii2 = square(&|a, b| {
        let mut s = 0.0;
        for c in 0..d {
            for e in 0..d {
                s += ip(&br[a][c], &basis[e]) * ip(&br[b][e], &basis[c]);
            }
        }
        s
    });
    let factor_iii = square(&|a, b| {
        let mut s = 0.0;
        for c in 0..d {
            for e in 0..d {
                s += ip(&basis[c], &br[a][e]) * ip(&basis[e], &br[b][c]);
            }
        }
        s
    });

    // coefficients of log(eps^{-1/2}) * integral A^a ^ *A^b in each diagram
    let weights = [
        1.0 / (4.0 * PI),
        -1.0 / (8.0 * PI),
        -1.0 / (8.0 * PI),
        -1.0 / (4.0 * PI),
    ];
    let named = [
        ("(I) tadpole", 1.0, factor_i),
        ("(II_1) dA-dA contraction", -1.0, factor_ii1),
        ("(II_2) crossed contraction", 1.0, factor_ii2),
        ("(III) ghost loop", 1.0, factor_iii),
    ];

    let mut divergence_sum_max = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let s: f64 = named
                .iter()
                .zip(weights)
                .map(|((_, _, m), w)| m[a][b] * w)
                .sum();
            divergence_sum_max = divergence_sum_max.max(s.abs());
        }
    }

    let factors: Vec<LieFactorCheck> = named
        .into_iter()
        .map(|(name, mult, matrix)| {
            let mut dev = 0.0f64;
            for a in 0..d {
                for b in 0..d {
                    dev = dev.max((matrix[a][b] - mult * c_mat[a][b]).abs());
                }
            }
            LieFactorCheck {
                name: name.to_string(),
                expected_multiple_of_c: mult,
                matrix,
                max_deviation: dev,
            }
        })
        .collect();

    let max_deviation = factors
        .iter()
        .map(|f| f.max_deviation)
        .fold(ortho_dev.max(casimir_dev).max(divergence_sum_max), f64::max);

    LieIdentityReport {
        group: group.to_string(),
        basis_orthonormality_deviation: ortho_dev,
        casimir_matrix: c_mat,
        adjoint_casimir,
        casimir_deviation: casimir_dev,
        factors,
        divergence_sum_max,
        max_deviation,
        tolerance: IDENTITY_TOLERANCE,
        passed: max_deviation < IDENTITY_TOLERANCE,
    }
}
