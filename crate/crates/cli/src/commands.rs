//! One function per subcommand, each producing a [`Report`].

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::json;

use ym2d_core::asymptotics::{
    asymptotic_series, asymptotic_series_exact, gaussian_lie_expectation, instanton_gap, limits_comparison,
    su2_wilson_asymptotic, Rho,
};
use ym2d_core::heatkernel::{
    heat_kernel_geodesic, heat_kernel_value, is_regular, CharacterSeries, HeatKernelQuery, Truncation,
};
use ym2d_core::lattice::{
    graph_expectation_mc, partition_function, wilson_exact_fusion, wilson_exact_r2, wilson_exact_simple, LoopConfig,
    LoopObservable, SurfaceMap,
};
use ym2d_core::liegroup::{enumerate_irreps, GroupKind};
use ym2d_core::pertloop::{
    decompactified_comparison_with, ContourLoop, MatrixRep, PertOptions, QuadBudget, COMPARISON_TOLERANCE,
};
use ym2d_core::wick::{wick_by_matchings, wick_expectation, Coeff, Generator, GradedExpr, PairingKernel};
use ym2d_core::{ClassFunction, GroupModel};

use crate::report::{Comparison, Measurement, Report};
use crate::{Command, Failure, GroupArgs, LoopKind, WilsonCommand};

/// Tolerance between the two exact sphere engines.
const EXACT_TOLERANCE: f64 = 1e-10;
/// Tolerance between character and geodesic heat-kernel sums.
const HEAT_KERNEL_TOLERANCE: f64 = 1e-8;
/// Tolerance between the Gaussian quadrature and closed forms.
const CLOSED_FORM_TOLERANCE: f64 = 1e-8;
/// Monte Carlo agreement in standard errors.
const MC_SIGMAS: f64 = 3.0;
const GEODESIC_WINDINGS: usize = 20;

type Outcome = Result<Report, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

pub fn execute(cmd: &Command, seed: u64) -> Outcome {
    match cmd {
        Command::Irreps { group, cutoff } => irreps(group, *cutoff),
        Command::HeatKernel {
            group,
            t,
            theta,
            truncation,
        } => heat_kernel_cmd(group, *t, *theta, truncation),
        Command::Partition { group, genus, lambda } => partition(group, *genus, *lambda),
        Command::Wilson { engine } => wilson(engine, seed),
        Command::CompareLimits { m, order } => compare_limits(*m, *order),
        Command::InstantonGap {
            group,
            irrep,
            lambda,
            unequal_areas,
        } => gap(group, *irrep, *lambda, !*unequal_areas),
        Command::WickDemo { input, json } => wick_demo(input.as_deref(), json.as_deref()),
    }
}

fn model(g: &GroupArgs) -> Result<GroupModel, Failure> {
    Ok(GroupModel::from_name(&g.group)?.with_metric_scale(g.metric_scale)?)
}

fn with_group(report: &mut Report, group: &GroupModel) {
    report.input("group", group.name()).input("metric_scale", group.metric_scale());
}

fn character(group: &GroupModel, label: i64) -> Result<ClassFunction, Failure> {
    Ok(ClassFunction::character(group.irrep(label)?))
}

fn irreps(g: &GroupArgs, cutoff: f64) -> Outcome {
    let group = model(g)?;
    let list = enumerate_irreps(&group, cutoff)?;
    let mut r = Report::new("irreps");
    with_group(&mut r, &group);
    r.input("cutoff", cutoff);
    for irrep in &list {
        r.measure(
            Measurement::new("liegroup", "casimir", irrep.casimir, 0.0)
                .param("label", irrep.label)
                .param("dim", irrep.dim),
        );
    }
    let rows: Vec<_> = list
        .iter()
        .map(|i| json!({"label": i.label, "dim": i.dim, "casimir": i.casimir}))
        .collect();
    r.details(json!({ "count": list.len(), "irreps": rows }));
    Ok(r.finish())
}

fn parse_truncation(s: &str) -> Result<Truncation, Failure> {
    let bad = || invalid(format!("truncation must be auto, casimir:<cutoff> or winding:<count>, got `{s}`"));
    if s == "auto" {
        return Ok(Truncation::Auto);
    }
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "casimir" => Ok(Truncation::CasimirCutoff(arg.parse().map_err(|_| bad())?)),
        "winding" => Ok(Truncation::WindingCutoff(arg.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn heat_kernel_cmd(g: &GroupArgs, t: f64, theta: f64, truncation: &str) -> Outcome {
    let group = model(g)?;
    let trunc = parse_truncation(truncation)?;
    let v = heat_kernel_value(&HeatKernelQuery::new(group, t, theta).with_truncation(trunc))?;
    let mut r = Report::new("heat-kernel");
    with_group(&mut r, &group);
    r.input("t", t).input("theta", theta).input("truncation", truncation);
    let method = serde_json::to_value(v.method).expect("method serializes");
    let method = method.as_str().unwrap_or("unknown");
    r.measure(
        Measurement::new(&format!("heatkernel/{method}"), "K_t", v.value, v.tail_bound)
            .param("t", t)
            .param("theta", theta),
    );
    if t.is_finite() && is_regular(&group, theta) {
        let ch = CharacterSeries::new(&group, t)?.eval(theta);
        let geo = heat_kernel_geodesic(&group, t, theta, GEODESIC_WINDINGS)?;
        // relative, with an absolute floor at the character sum's rounding level
        let tol = HEAT_KERNEL_TOLERANCE * ch.abs().max(geo.abs()) + 1e-13;
        r.measure(Measurement::new("heatkernel/character", "K_t", ch, 0.0).param("t", t).param("theta", theta));
        r.measure(Measurement::new("heatkernel/geodesic", "K_t", geo, 0.0).param("t", t).param("theta", theta));
        r.compare(Comparison::within(
            "K_t",
            ["heatkernel/character", "heatkernel/geodesic"],
            [ch, geo],
            tol,
            true,
        ));
    }
    r.details(v);
    Ok(r.finish())
}

fn partition(g: &GroupArgs, genus: u32, lambda: f64) -> Outcome {
    let group = model(g)?;
    let z = partition_function(&group, genus, lambda)?;
    let mut r = Report::new("partition");
    with_group(&mut r, &group);
    r.input("genus", genus).input("lambda", lambda);
    r.measure(Measurement::new("lattice", "Z", z, 0.0).param("genus", genus).param("lambda", lambda));
    if genus == 0 {
        let k = heat_kernel_value(&HeatKernelQuery::new(group, lambda, 0.0))?;
        r.measure(Measurement::new("heatkernel", "K_lambda(1)", k.value, k.tail_bound).param("lambda", lambda));
        r.compare(Comparison::within(
            "Z",
            ["lattice", "heatkernel"],
            [z, k.value],
            EXACT_TOLERANCE * z.abs().max(1.0),
            true,
        ));
    }
    Ok(r.finish())
}

fn wilson(cmd: &WilsonCommand, seed: u64) -> Outcome {
    match cmd {
        WilsonCommand::Exact {
            group,
            irrep,
            lambda,
            areas,
        } => wilson_exact(group, *irrep, *lambda, areas),
        WilsonCommand::R2 {
            group,
            irrep,
            lambda0,
            area,
        } => wilson_r2(group, *irrep, *lambda0, *area),
        WilsonCommand::Mc {
            group,
            irrep,
            lambda0,
            map,
            areas,
            loop_name,
            samples,
        } => wilson_mc(group, *irrep, *lambda0, map.as_deref(), areas, loop_name, *samples, seed),
        WilsonCommand::Asymptotic {
            group,
            irrep,
            rho,
            lambda,
            areas,
            order,
        } => wilson_asymptotic(group, *irrep, *rho, *lambda, areas.as_deref(), *order),
        WilsonCommand::Pert {
            group,
            irrep,
            loop_kind,
            radius,
            semi_axes,
            order,
            budget,
        } => wilson_pert(group, *irrep, *loop_kind, *radius, semi_axes.as_deref(), *order, *budget, seed),
    }
}

fn two_areas(areas: &[f64]) -> Result<(f64, f64), Failure> {
    match areas {
        [a, b] if *a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite() => Ok((*a, *b)),
        _ => Err(invalid(format!("areas must be two positive numbers, got {areas:?}"))),
    }
}

fn wilson_exact(g: &GroupArgs, label: i64, lambda: f64, areas: &[f64]) -> Outcome {
    let group = model(g)?;
    let f = character(&group, label)?;
    let (r1, r2) = two_areas(areas)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be positive and finite, got {lambda}")));
    }
    // lambda is the coupling times the total area; the engines take the coupling
    let lambda0 = lambda / (r1 + r2);
    let cfg = LoopConfig::sphere(r1, r2, f.clone())?;
    let quad = wilson_exact_simple(&group, &cfg, lambda0)?;
    let fusion = wilson_exact_fusion(&group, &cfg, lambda0)?;
    let gauss = gaussian_lie_expectation(&group, &f, Rho::sphere(lambda, r1 / (r1 + r2), r2 / (r1 + r2))?)?;
    let spread = (quad - fusion).abs();
    let mut r = Report::new("wilson exact");
    with_group(&mut r, &group);
    r.input("irrep", label).input("lambda", lambda).input("areas", [r1, r2]);
    let m = |engine: &str, v: f64, e: f64| {
        Measurement::new(engine, "wilson", v, e)
            .param("irrep", label)
            .param("lambda", lambda)
    };
    r.measure(m("lattice/quadrature", quad, spread));
    r.measure(m("lattice/fusion", fusion, spread));
    r.measure(m("asymptotics/gaussian", gauss, 0.0));
    r.compare(Comparison::within(
        "wilson",
        ["lattice/quadrature", "lattice/fusion"],
        [quad, fusion],
        EXACT_TOLERANCE,
        true,
    ));
    // an informational comparison: the difference is the instanton gap
    r.compare(Comparison::within(
        "wilson",
        ["lattice/quadrature", "asymptotics/gaussian"],
        [quad, gauss],
        0.0,
        false,
    ));
    r.details(json!({ "lambda0": lambda0, "gap": quad - gauss }));
    Ok(r.finish())
}

fn wilson_r2(g: &GroupArgs, label: i64, lambda0: f64, area: f64) -> Outcome {
    let group = model(g)?;
    let irrep = group.irrep(label)?;
    let rho = Rho::plane(lambda0, area)?;
    let plane = wilson_exact_r2(&irrep, lambda0, area);
    let gauss = gaussian_lie_expectation(&group, &ClassFunction::character(irrep), rho)?;
    let mut r = Report::new("wilson r2");
    with_group(&mut r, &group);
    r.input("irrep", label).input("lambda0", lambda0).input("area", area);
    r.measure(Measurement::new("lattice/plane", "wilson", plane, 0.0).param("irrep", label));
    r.measure(Measurement::new("asymptotics/gaussian", "wilson", gauss, 0.0).param("irrep", label));
    // the two orders of limits differ from second order in rho on
    r.compare(Comparison::within(
        "wilson",
        ["lattice/plane", "asymptotics/gaussian"],
        [plane, gauss],
        0.0,
        false,
    ));
    Ok(r.finish())
}

fn parse_area(s: &str) -> Result<Rational64, Failure> {
    let s = s.trim();
    if let Ok(q) = Rational64::from_str(s) {
        return Ok(q);
    }
    let x: f64 = s.parse().map_err(|_| invalid(format!("`{s}` is not an area")))?;
    Rational64::approximate_float(x).ok_or_else(|| invalid(format!("`{s}` is not a representable area")))
}

#[allow(clippy::too_many_arguments)]
fn wilson_mc(
    g: &GroupArgs,
    label: i64,
    lambda0: f64,
    map_path: Option<&Path>,
    areas: &[String],
    loop_name: &str,
    samples: usize,
    seed: u64,
) -> Outcome {
    let group = model(g)?;
    let f = character(&group, label)?;
    let map = match map_path {
        Some(p) => SurfaceMap::from_json(&std::fs::read_to_string(p)?)?,
        None => {
            let [a, b] = areas else {
                return Err(invalid("--areas takes two values"));
            };
            SurfaceMap::sphere_simple_loop(parse_area(a)?, parse_area(b)?)?
        }
    };
    let word = map
        .loop_word(loop_name)
        .ok_or_else(|| invalid(format!("the map has no loop named `{loop_name}`")))?
        .to_vec();
    let obs = LoopObservable { function: f.clone(), word };
    let est = graph_expectation_mc(&group, &map, lambda0, Some(&obs), samples, seed)?;

    let mut r = Report::new("wilson mc");
    with_group(&mut r, &group);
    r.input("irrep", label)
        .input("lambda0", lambda0)
        .input("loop", loop_name)
        .input("samples", samples)
        .input("seed", seed);
    match map_path {
        Some(p) => r.input("map", p.display().to_string()),
        None => r.input("areas", areas),
    };
    r.measure(Measurement::new("lattice/mc", "wilson", est.expectation, est.stderr).param("irrep", label));
    r.measure(Measurement::new("lattice/mc", "Z", est.partition, est.partition_stderr));

    let total = map.total_area();
    let total = *total.numer() as f64 / *total.denom() as f64;
    let z = partition_function(&group, map.genus, lambda0 * total)?;
    r.measure(Measurement::new("lattice", "Z", z, 0.0));
    r.compare(Comparison::within(
        "Z",
        ["lattice/mc", "lattice"],
        [est.partition, z],
        MC_SIGMAS * est.partition_stderr,
        true,
    ));
    if map_path.is_none() {
        let fa = map.face_areas();
        let cfg = LoopConfig::sphere(fa[0], fa[1], f)?;
        let exact = wilson_exact_simple(&group, &cfg, lambda0)?;
        r.measure(Measurement::new("lattice/quadrature", "wilson", exact, 0.0).param("irrep", label));
        r.compare(Comparison::within(
            "wilson",
            ["lattice/mc", "lattice/quadrature"],
            [est.expectation, exact],
            MC_SIGMAS * est.stderr,
            true,
        ));
    }
    r.details(est);
    Ok(r.finish())
}

fn wilson_asymptotic(
    g: &GroupArgs,
    label: i64,
    rho: Option<f64>,
    lambda: Option<f64>,
    areas: Option<&[f64]>,
    order: usize,
) -> Outcome {
    let group = model(g)?;
    let f = character(&group, label)?;
    let rho = match (rho, lambda, areas) {
        (Some(rho), _, _) => Rho::new(rho)?,
        (None, Some(lambda), Some(areas)) => {
            let (r1, r2) = two_areas(areas)?;
            Rho::sphere(lambda, r1 / (r1 + r2), r2 / (r1 + r2))?
        }
        _ => return Err(invalid("give either --rho or --lambda with --areas")),
    };
    let value = gaussian_lie_expectation(&group, &f, rho)?;
    let series = asymptotic_series_exact(&group, &f, order)?;
    let floats = asymptotic_series(&group, &f, order)?;
    let partial = floats.eval(rho.value());

    let mut r = Report::new("wilson asymptotic");
    with_group(&mut r, &group);
    r.input("irrep", label).input("rho", rho.value()).input("order", order);
    if let (Some(l), Some(a)) = (lambda, areas) {
        r.input("lambda", l).input("areas", a);
    }
    r.measure(Measurement::new("asymptotics/gaussian", "wilson", value, 0.0).param("irrep", label));
    for (n, c) in series.coeffs().iter().enumerate() {
        r.measure(
            Measurement::new("asymptotics/series", "coefficient", c.to_f64().unwrap_or(f64::NAN), 0.0)
                .param("order", n)
                .exact(c.to_string()),
        );
    }
    r.measure(Measurement::new("asymptotics/series", "partial_sum", partial, 0.0).param("order", order));
    let closed = match group.kind() {
        GroupKind::SU2 => su2_wilson_asymptotic(label, rho.value())?,
        GroupKind::U1 => {
            let n = label as f64;
            (-n * n * rho.value() / (2.0 * group.metric_scale())).exp()
        }
    };
    if group.kind() == GroupKind::U1 || group.metric_scale() == 1.0 {
        r.measure(Measurement::new("asymptotics/closed_form", "wilson", closed, 0.0).param("irrep", label));
        r.compare(Comparison::within(
            "wilson",
            ["asymptotics/gaussian", "asymptotics/closed_form"],
            [value, closed],
            CLOSED_FORM_TOLERANCE * value.abs().max(1.0),
            true,
        ));
    }
    r.compare(Comparison::within(
        "wilson",
        ["asymptotics/gaussian", "asymptotics/series"],
        [value, partial],
        0.0,
        false,
    ));
    let rows: Vec<_> = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| json!({"order": n, "decimal": format!("{:.17e}", c.to_f64().unwrap_or(f64::NAN)), "rational": c.to_string()}))
        .collect();
    r.details(json!({ "series": rows }));
    Ok(r.finish())
}

#[allow(clippy::too_many_arguments)]
fn wilson_pert(
    g: &GroupArgs,
    label: i64,
    kind: LoopKind,
    radius: f64,
    semi_axes: Option<&[f64]>,
    order: usize,
    budget: Option<usize>,
    seed: u64,
) -> Outcome {
    let group = model(g)?;
    let rep = MatrixRep::new(group.irrep(label)?)?;
    let lp = match (kind, semi_axes) {
        (LoopKind::Circle, _) => ContourLoop::circle(Default::default(), radius)?,
        (LoopKind::Ellipse, Some([a, b])) => ContourLoop::ellipse(*a, *b)?,
        (LoopKind::Ellipse, _) => return Err(invalid("--loop ellipse needs --semi-axes A,B")),
    };
    let budget = match budget {
        Some(n) => QuadBudget::new(n)?,
        None => QuadBudget::from_env()?,
    };
    let opts = PertOptions { budget, seed };
    let cmp = decompactified_comparison_with(&rep, &lp, order, &opts)?;

    let mut r = Report::new("wilson pert");
    with_group(&mut r, &group);
    r.input("irrep", label)
        .input("order", order)
        .input("budget", budget.points())
        .input("seed", seed);
    match kind {
        LoopKind::Circle => r.input("loop", "circle").input("radius", radius),
        LoopKind::Ellipse => r.input("loop", "ellipse").input("semi_axes", semi_axes),
    };
    for (row, c) in cmp.rows.iter().zip(&cmp.coefficients) {
        r.measure(
            Measurement::new("pertloop", "coefficient_rho", row.perturbative, row.error_estimate)
                .param("order", row.order),
        );
        r.measure(
            Measurement::new("pertloop", "coefficient_lambda0", c.value, row.error_estimate * cmp.enclosed_area.powi(row.order as i32))
                .param("order", row.order),
        );
        r.measure(Measurement::new("asymptotics/series", "coefficient_rho", row.asymptotic, 0.0).param("order", row.order));
        r.compare(Comparison::within(
            &format!("coefficient_rho[{}]", row.order),
            ["pertloop", "asymptotics/series"],
            [row.perturbative, row.asymptotic],
            COMPARISON_TOLERANCE,
            row.asserted,
        ));
    }
    r.details(cmp);
    Ok(r.finish())
}

fn compare_limits(m: i64, order: usize) -> Outcome {
    let lr = limits_comparison(m, order)?;
    let mut r = Report::new("compare-limits");
    r.input("group", "SU2").input("m", m).input("order", order);
    for (a, b) in lr.series_a.iter().zip(&lr.series_b) {
        r.measure(
            Measurement::new("decompactify_first", "coefficient", a.value, 0.0)
                .param("order", a.order)
                .exact(&a.rational),
        );
        r.measure(
            Measurement::new("expand_first", "coefficient", b.value, 0.0)
                .param("order", b.order)
                .exact(&b.rational),
        );
        r.compare(Comparison::check(
            &format!("coefficient[{}]", a.order),
            ["decompactify_first", "expand_first"],
            [a.value, b.value],
            0.0,
            if a.order <= 1 { a.rational == b.rational } else { true },
        ));
    }
    let expected = (m.abs() >= 2 && order >= 2).then_some(2);
    r.compare(Comparison::check(
        "first_difference",
        ["decompactify_first", "expand_first"],
        [lr.first_difference.map_or(-1.0, |n| n as f64), expected.map_or(-1.0, |n| n as f64)],
        0.0,
        lr.first_difference == expected,
    ));
    r.details(lr);
    Ok(r.finish())
}

fn gap(g: &GroupArgs, label: i64, lambda: f64, equal_areas: bool) -> Outcome {
    let group = model(g)?;
    let f = character(&group, label)?;
    let rep = instanton_gap(&group, &f, lambda, equal_areas)?;
    let mut r = Report::new("instanton-gap");
    with_group(&mut r, &group);
    r.input("irrep", label).input("lambda", lambda).input("equal_areas", equal_areas);
    for p in &rep.grid {
        // the exact engines agree to ~1e-10 absolute, which bounds the gap's error
        r.measure(
            Measurement::new("lattice-asymptotics", "gap", p.gap, EXACT_TOLERANCE)
                .param("lambda", p.lambda),
        );
        r.measure(Measurement::new("lattice-asymptotics", "ln_gap", p.ln_gap, 0.0).param("lambda", p.lambda));
    }
    if let Some(k) = rep.kappa {
        let spread = rep
            .pair_slopes
            .iter()
            .map(|s| (-s - k).abs())
            .fold(0.0, f64::max);
        r.measure(Measurement::new("fit", "kappa", k, spread));
    }
    let slopes = [
        rep.pair_slopes.first().copied().unwrap_or(f64::NAN),
        rep.pair_slopes.get(1).copied().unwrap_or(f64::NAN),
    ];
    // reported as the relative spread of the two pair slopes
    r.compare(Comparison {
        asserted: rep.asserted,
        difference: (slopes[0] - slopes[1]).abs() / slopes[0].abs().max(slopes[1].abs()),
        ..Comparison::check("slope_stability", ["fit/pair_1", "fit/pair_2"], slopes, 0.2, rep.slope_stable)
    });
    r.compare(Comparison {
        asserted: rep.asserted,
        ..Comparison::check(
            "exponential_bound",
            ["fit", "fit"],
            [rep.kappa.unwrap_or(f64::NAN), rep.kappa.unwrap_or(f64::NAN)],
            0.0,
            rep.bound_ok,
        )
    });
    r.details(rep);
    Ok(r.finish())
}

/// A coefficient given as a JSON number or an exact `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<BigRational, Failure> {
        match self {
            Number::Float(x) => {
                BigRational::from_float(*x).ok_or_else(|| invalid(format!("{x} is not a finite coefficient")))
            }
            Number::Text(s) => {
                BigRational::from_str(s.trim()).map_err(|_| invalid(format!("`{s}` is not a rational number")))
            }
        }
    }

    fn float(&self) -> Result<f64, Failure> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => match s.trim().parse::<f64>() {
                Ok(x) => Ok(x),
                Err(_) => self.rational()?.to_f64().ok_or_else(|| invalid(format!("`{s}` overflows"))),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WickTerm {
    word: Vec<u32>,
    #[serde(default = "unit")]
    coeff: Number,
}

fn unit() -> Number {
    Number::Float(1.0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WickPair {
    a: u32,
    b: u32,
    value: Number,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WickInput {
    generators: Vec<Generator>,
    #[serde(default)]
    terms: Vec<WickTerm>,
    #[serde(default)]
    monomial: Option<Vec<u32>>,
    pairing: Vec<WickPair>,
    #[serde(default)]
    exact: bool,
}

struct WickOutcome {
    contraction: f64,
    matchings: f64,
    exact: Option<(String, String)>,
}

fn wick_eval<C: Coeff>(
    input: &WickInput,
    terms: &[(Vec<Generator>, C)],
    convert: impl Fn(&Number) -> Result<C, Failure>,
) -> Result<(C, C), Failure> {
    let lookup = |id: u32| -> Result<Generator, Failure> {
        input
            .generators
            .iter()
            .find(|g| g.id == id)
            .copied()
            .ok_or_else(|| invalid(format!("generator {id} is not declared")))
    };
    let mut p = PairingKernel::new();
    for pair in &input.pairing {
        p.set(lookup(pair.a)?, lookup(pair.b)?, convert(&pair.value)?)?;
    }
    let mut f = GradedExpr::zero();
    let mut by_matchings = C::zero();
    for (word, c) in terms {
        f = &f + &GradedExpr::monomial(word, c.clone());
        by_matchings = by_matchings + c.clone() * wick_by_matchings(word, &p);
    }
    Ok((wick_expectation(&f, &p), by_matchings))
}

fn wick_demo(input: Option<&Path>, inline: Option<&str>) -> Outcome {
    let text = match (input, inline) {
        (_, Some(s)) => s.to_string(),
        (Some(p), None) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        (Some(p), None) => std::fs::read_to_string(p)?,
        (None, None) => return Err(invalid("give --input <file|-> or --json <text>")),
    };
    let spec: WickInput = serde_json::from_str(&text).map_err(|e| invalid(format!("wick input: {e}")))?;
    let mut ids = BTreeSet::new();
    for g in &spec.generators {
        if !ids.insert(g.id) {
            return Err(invalid(format!("generator {} is declared twice", g.id)));
        }
    }
    let words: Vec<(Vec<Generator>, Number)> = {
        let mut raw: Vec<(&[u32], &Number)> = spec.terms.iter().map(|t| (t.word.as_slice(), &t.coeff)).collect();
        let one = unit();
        if let Some(m) = &spec.monomial {
            raw.push((m.as_slice(), &one));
        }
        if raw.is_empty() {
            return Err(invalid("wick input needs `terms` or `monomial`"));
        }
        let mut out = Vec::new();
        for (w, c) in raw {
            let gens = w
                .iter()
                .map(|id| {
                    spec.generators
                        .iter()
                        .find(|g| g.id == *id)
                        .copied()
                        .ok_or_else(|| invalid(format!("generator {id} is not declared")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push((gens, (*c).clone()));
        }
        out
    };
    let outcome = if spec.exact {
        let terms = words
            .iter()
            .map(|(w, c)| Ok((w.clone(), c.rational()?)))
            .collect::<Result<Vec<_>, Failure>>()?;
        let (a, b) = wick_eval(&spec, &terms, Number::rational)?;
        WickOutcome {
            contraction: a.to_f64().unwrap_or(f64::NAN),
            matchings: b.to_f64().unwrap_or(f64::NAN),
            exact: Some((a.to_string(), b.to_string())),
        }
    } else {
        let terms = words
            .iter()
            .map(|(w, c)| Ok((w.clone(), c.float()?)))
            .collect::<Result<Vec<_>, Failure>>()?;
        let (a, b) = wick_eval(&spec, &terms, Number::float)?;
        WickOutcome {
            contraction: a,
            matchings: b,
            exact: None,
        }
    };

    let mut r = Report::new("wick-demo");
    r.input("spec", serde_json::from_str::<serde_json::Value>(&text).expect("already parsed"));
    let mut ma = Measurement::new("wick/contraction", "expectation", outcome.contraction, 0.0);
    let mut mb = Measurement::new("wick/matchings", "expectation", outcome.matchings, 0.0);
    if let Some((a, b)) = &outcome.exact {
        ma = ma.exact(a);
        mb = mb.exact(b);
        r.measure(ma).measure(mb);
        r.compare(Comparison::check(
            "expectation",
            ["wick/contraction", "wick/matchings"],
            [outcome.contraction, outcome.matchings],
            0.0,
            a == b,
        ));
    } else {
        r.measure(ma).measure(mb);
        let scale = outcome.contraction.abs().max(outcome.matchings.abs()).max(1.0);
        r.compare(Comparison::within(
            "expectation",
            ["wick/contraction", "wick/matchings"],
            [outcome.contraction, outcome.matchings],
            1e-12 * scale,
            true,
        ));
    }
    Ok(r.finish())
}
