//! Importance-sampled Monte Carlo over edge variables of a surface map.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surface::{EdgeUse, SurfaceMap};
use crate::error::{Error, Result};
use crate::heatkernel::HeatKernel;
use crate::liegroup::{ClassFunction, GroupElement, GroupKind, GroupModel};

pub const MIN_SAMPLES: usize = 10_000;
/// Faces with `lambda0 |F|` below this are too sharply peaked to sample.
pub const MIN_FACE_COUPLING: f64 = 0.05;

const CHUNK: usize = 4096;
const CELLS: usize = 2048;
/// Weight of the Haar component in each edge proposal.
const HAAR_MIX: f64 = 0.1;

/// A class function evaluated on the holonomy of an edge word.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopObservable {
    pub function: ClassFunction,
    pub word: Vec<EdgeUse>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub expectation: f64,
    pub stderr: f64,
    /// Estimate of `Z = integral prod_F K_{lambda0|F|}(g_dF) prod_e dg_e`.
    pub partition: f64,
    pub partition_stderr: f64,
    /// Kish effective sample size `(sum w)^2 / sum w^2`.
    pub ess: f64,
    pub samples: usize,
}

/// `K_tau`-shaped proposal for one edge, tabulated on cells of the class angle
/// so that its density against Haar measure is piecewise constant and exact.
struct EdgeProposal {
    group: GroupModel,
    /// Cumulative cell probabilities.
    cdf: Vec<f64>,
    /// Haar-relative density per cell, already mixed with the Haar component.
    density: Vec<f64>,
}

/// Haar measure of class angles in `[0, theta]`, for `theta` in `[0, pi]`.
fn haar_cdf(group: &GroupModel, theta: f64) -> f64 {
    match group.kind() {
        GroupKind::SU2 => (theta - theta.sin() * theta.cos()) / PI,
        GroupKind::U1 => theta / PI,
    }
}

fn cell_of(theta: f64) -> usize {
    ((theta / PI * CELLS as f64) as usize).min(CELLS - 1)
}

impl EdgeProposal {
    fn new(group: &GroupModel, tau: f64) -> Result<Self> {
        let kernel = HeatKernel::new(group, tau)?;
        let h = PI / CELLS as f64;
        let mut mass = Vec::with_capacity(CELLS);
        let mut prob = Vec::with_capacity(CELLS);
        for c in 0..CELLS {
            let (a, b) = (c as f64 * h, (c + 1) as f64 * h);
            let m = haar_cdf(group, b) - haar_cdf(group, a);
            mass.push(m);
            prob.push(kernel.eval(0.5 * (a + b)).max(0.0) * m);
        }
        let total: f64 = prob.iter().sum();
        let mut cdf = Vec::with_capacity(CELLS);
        let mut acc = 0.0;
        for p in prob.iter_mut() {
            *p /= total;
            acc += *p;
            cdf.push(acc);
        }
        let density = prob
            .iter()
            .zip(&mass)
            .map(|(p, m)| HAAR_MIX + (1.0 - HAAR_MIX) * if *m > 0.0 { p / m } else { 0.0 })
            .collect();
        Ok(Self {
            group: *group,
            cdf,
            density,
        })
    }

    fn density_at(&self, g: &GroupElement) -> f64 {
        self.density[cell_of(g.class_angle().abs())]
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> GroupElement {
        if rng.random::<f64>() < HAAR_MIX {
            return GroupElement::haar_random(&self.group, rng);
        }
        let u: f64 = rng.random();
        let c = self.cdf.partition_point(|&x| x < u).min(CELLS - 1);
        let h = PI / CELLS as f64;
        let (mut lo, mut hi) = (c as f64 * h, (c + 1) as f64 * h);
        let target = haar_cdf(&self.group, lo) + rng.random::<f64>() * (haar_cdf(&self.group, hi) - haar_cdf(&self.group, lo));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if haar_cdf(&self.group, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = 0.5 * (lo + hi);
        match self.group.kind() {
            GroupKind::U1 => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                GroupElement::from_class_angle(&self.group, sign * theta, [0.0; 3])
            }
            GroupKind::SU2 => {
                let z: f64 = rng.random_range(-1.0..1.0);
                let phi: f64 = rng.random_range(0.0..2.0 * PI);
                let r = (1.0 - z * z).max(0.0).sqrt();
                GroupElement::from_class_angle(&self.group, theta, [r * phi.cos(), r * phi.sin(), z])
            }
        }
    }
}

fn holonomy(group: &GroupModel, map: &SurfaceMap, word: &[EdgeUse], edges: &[GroupElement]) -> GroupElement {
    word.iter().fold(GroupElement::identity(group), |acc, u| {
        let i = map.edge_index(u.edge()).expect("validated edge");
        let g = if u.sign() > 0 { edges[i] } else { edges[i].inverse() };
        acc.mul(&g)
    })
}

/// Spanning-tree edges of the vertex graph (Kruskal in edge order).
fn spanning_tree(map: &SurfaceMap) -> Result<Vec<bool>> {
    let verts = map.vertices()?;
    let mut parent: Vec<usize> = (0..verts.count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = vec![false; map.edges.len()];
    for (i, &(t, h)) in verts.ends.iter().enumerate() {
        let (a, b) = (find(&mut parent, t), find(&mut parent, h));
        if a != b {
            parent[a] = b;
            tree[i] = true;
        }
    }
    Ok(tree)
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Monte Carlo estimate of `<W_{f,gamma}>` on `map` with face weights
/// `K_{lambda0 |F|}`.
///
/// Spanning-tree edges are gauge-fixed to the identity. Every other edge is
/// drawn from a mixture of Haar measure and a heat kernel whose inverse time is
/// the sum of `1/(lambda0 |F|)` over the faces it borders, and the
/// self-normalized importance estimator is returned with a delta-method
/// standard error. Results depend only on `seed`, not on the thread count.
pub fn graph_expectation_mc(
    group: &GroupModel,
    map: &SurfaceMap,
    lambda0: f64,
    observable: Option<&LoopObservable>,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    map.validate()?;
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda0 must be positive and finite, got {lambda0}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_SAMPLES} samples are required, got {samples}"
        )));
    }
    let times: Vec<f64> = map.face_areas().iter().map(|a| lambda0 * a).collect();
    if let Some((i, t)) = times.iter().enumerate().find(|(_, t)| **t < MIN_FACE_COUPLING) {
        return Err(Error::InvalidInput(format!(
            "face {i} has lambda0 |F| = {t}, below the sampling floor {MIN_FACE_COUPLING}"
        )));
    }
    if let Some(obs) = observable {
        if obs.function.group() != group {
            return Err(Error::InvalidInput("observable and sampling group differ".into()));
        }
        let probe = SurfaceMap {
            loops: vec![super::surface::NamedLoop {
                name: "observable".into(),
                word: obs.word.clone(),
            }],
            ..map.clone()
        };
        probe.validate()?;
    }

    let kernels = times
        .iter()
        .map(|&t| HeatKernel::new(group, t))
        .collect::<Result<Vec<_>>>()?;
    let tree = spanning_tree(map)?;
    let mut inverse_time = vec![0.0; map.edges.len()];
    for (face, t) in map.faces.iter().zip(&times) {
        for u in &face.word {
            inverse_time[map.edge_index(u.edge()).expect("validated")] += 1.0 / t;
        }
    }
    let proposals: Vec<Option<EdgeProposal>> = (0..map.edges.len())
        .map(|i| {
            if tree[i] {
                Ok(None)
            } else {
                EdgeProposal::new(group, 1.0 / inverse_time[i]).map(Some)
            }
        })
        .collect::<Result<_>>()?;

    let chunks = samples.div_ceil(CHUNK);
    let draws: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut out = Vec::with_capacity(n);
            let mut edges = vec![GroupElement::identity(group); map.edges.len()];
            for _ in 0..n {
                let mut q = 1.0;
                for (i, p) in proposals.iter().enumerate() {
                    if let Some(p) = p {
                        edges[i] = p.sample(&mut rng);
                        q *= p.density_at(&edges[i]);
                    }
                }
                let mut w = 1.0 / q;
                for (face, k) in map.faces.iter().zip(&kernels) {
                    w *= k.eval(holonomy(group, map, &face.word, &edges).class_angle());
                }
                let f = match observable {
                    Some(obs) => obs
                        .function
                        .eval(holonomy(group, map, &obs.word, &edges).class_angle())
                        .re,
                    None => 1.0,
                };
                out.push((w, f));
            }
            out
        })
        .collect();

    let chunk_sum = |f: &dyn Fn(f64, f64) -> f64| -> f64 {
        let per: Vec<f64> = draws
            .iter()
            .map(|d| d.iter().fold(0.0, |acc, &(w, x)| acc + f(w, x)))
            .collect();
        pairwise_sum(&per)
    };
    let n = samples as f64;
    let sw = chunk_sum(&|w, _| w);
    let sww = chunk_sum(&|w, _| w * w);
    let swf = chunk_sum(&|w, f| w * f);
    let expectation = swf / sw;
    let resid = chunk_sum(&|w, f| (w * (f - expectation)).powi(2));
    let ess = sw * sw / sww;
    if ess < 0.01 * n {
        return Err(Error::LowEffectiveSampleSize { ess, samples });
    }
    let mean_w = sw / n;
    let var_w = chunk_sum(&|w, _| (w - mean_w).powi(2)) / (n - 1.0);
    Ok(McEstimate {
        expectation,
        stderr: (resid / (sw * sw)).sqrt(),
        partition: mean_w,
        partition_stderr: (var_w / n).sqrt(),
        ess,
        samples,
    })
}
