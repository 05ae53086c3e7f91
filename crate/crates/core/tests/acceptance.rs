//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ym2d_core::asymptotics::{gaussian_lie_expectation, instanton_gap, limits_comparison, su2_wilson_asymptotic, Rho};
use ym2d_core::heatkernel::{convolution_check, heat_kernel_geodesic, scalar_curvature, CharacterSeries};
use ym2d_core::lattice::{graph_expectation_mc, wilson_exact_simple, LoopConfig, LoopObservable, SurfaceMap};
use ym2d_core::liegroup::verify_lie_identities;
use ym2d_core::pertloop::{decompactified_comparison, ContourLoop, MatrixRep};
use ym2d_core::wick::{berezin_gaussian, pfaffian_gaussian, wick_expectation, Generator, GradedExpr, PairingKernel};
use ym2d_core::{ClassFunction, GroupModel};

type Outcome = Result<(bool, String), String>;

fn chi(g: &GroupModel, m: i64) -> ClassFunction {
    ClassFunction::character(g.irrep(m).unwrap())
}

fn semigroup() -> Outcome {
    let ts = [0.05, 0.2, 1.0];
    let mut worst = 0.0f64;
    for g in [GroupModel::u1(), GroupModel::su2()] {
        for &t1 in &ts {
            for &t2 in &ts {
                let dev = convolution_check(&g, t1, t2, 0.7, 0.4).map_err(|e| e.to_string())?;
                worst = worst.max(dev);
            }
        }
    }
    Ok((worst < 1e-8, format!("max deviation {worst:.2e} (< 1e-8)")))
}

fn two_method_heat_kernel() -> Outcome {
    let g = GroupModel::su2();
    let s = scalar_curvature(&g).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for t in [0.05, 0.2, 1.0] {
        let series = CharacterSeries::new(&g, t).map_err(|e| e.to_string())?;
        for theta in [0.3, 1.5, 2.8] {
            let geo = heat_kernel_geodesic(&g, t, theta, 20).map_err(|e| e.to_string())?;
            worst = worst.max((series.eval(theta) - geo).abs());
        }
    }
    Ok((worst < 1e-8, format!("calibrated s = {s:.12}, max |character - geodesic| {worst:.2e} (< 1e-8)")))
}

fn trivial_observable_is_one() -> Outcome {
    let points = [
        (GroupModel::su2(), 0.1, 0.5, 0.5),
        (GroupModel::su2(), 1.0, 0.2, 0.8),
        (GroupModel::su2(), 5.0, 0.9, 0.1),
        (GroupModel::u1(), 0.3, 0.4, 0.6),
        (GroupModel::u1(), 2.0, 0.5, 0.5),
    ];
    let mut values = Vec::new();
    for (g, lambda, r1, r2) in points {
        let cfg = LoopConfig::sphere(r1, r2, ClassFunction::constant(g, 1.0)).map_err(|e| e.to_string())?;
        values.push(wilson_exact_simple(&g, &cfg, lambda).map_err(|e| e.to_string())?);
    }
    Ok((values.iter().all(|v| *v == 1.0), format!("values {values:?} (exactly 1)")))
}

fn su2_closed_form() -> Outcome {
    let g = GroupModel::su2();
    let mut worst = 0.0f64;
    for m in 1..=5 {
        for rho in [0.05, 0.2, 1.0] {
            let a = gaussian_lie_expectation(&g, &chi(&g, m), Rho::new(rho).unwrap()).map_err(|e| e.to_string())?;
            let b = su2_wilson_asymptotic(m, rho).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
        }
    }
    let mut f_dev = 0.0f64;
    for rho in [0.05, 0.2, 1.0] {
        let a = gaussian_lie_expectation(&g, &chi(&g, 2), Rho::new(rho).unwrap()).map_err(|e| e.to_string())?;
        f_dev = f_dev.max((a - (-rho / 4.0f64).exp() * (2.0 - rho)).abs());
    }
    Ok((
        worst < 1e-8 && f_dev < 1e-8,
        format!("max |integral - F-sum| {worst:.2e}, m = 2 vs e^(-rho/4)(2-rho) {f_dev:.2e} (< 1e-8)"),
    ))
}

fn instanton_decay() -> Outcome {
    let g = GroupModel::su2();
    let r = instanton_gap(&g, &chi(&g, 2), 0.2, true).map_err(|e| e.to_string())?;
    let gaps: Vec<f64> = r.grid.iter().map(|p| p.ln_gap).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let ok = decreasing && r.slope_stable && r.point.gap < 1e-6 && r.kappa.is_some_and(|k| k > 0.0);
    Ok((
        ok,
        format!(
            "ln gap on lambda = 0.4, 0.2, 0.1: {gaps:.3?}; pair slopes {:.3?}; kappa {:.3}; gap(0.2) {:.2e}",
            r.pair_slopes,
            r.kappa.unwrap_or(f64::NAN),
            r.point.gap
        ),
    ))
}

fn non_commuting_limits() -> Outcome {
    let order = 4;
    let r = limits_comparison(2, order).map_err(|e| e.to_string())?;
    // independent Taylor coefficients of 2 e^{-3a/4} and e^{-a/4}(2 - a)
    let mut worst = 0.0f64;
    let mut fact = 1.0;
    for n in 0..=order {
        if n > 0 {
            fact *= n as f64;
        }
        let a = 2.0 * (-0.75f64).powi(n as i32) / fact;
        let mut b = 2.0 * (-0.25f64).powi(n as i32) / fact;
        if n > 0 {
            b -= (-0.25f64).powi(n as i32 - 1) / (fact / n as f64);
        }
        worst = worst.max((r.series_a[n].value - a).abs()).max((r.series_b[n].value - b).abs());
    }
    let ok = worst < 1e-12 && r.agree_through_order_1 && r.first_difference == Some(2);
    let show = |s: &[ym2d_core::asymptotics::ExactCoefficient]| s.iter().map(|c| c.rational.clone()).collect::<Vec<_>>().join(", ");
    Ok((
        ok,
        format!(
            "A = [{}], B = [{}], first difference at order {:?}, max oracle deviation {worst:.1e}",
            show(&r.series_a),
            show(&r.series_b),
            r.first_difference
        ),
    ))
}

fn perturbative_order_two() -> Outcome {
    let rep = MatrixRep::new(GroupModel::su2().irrep(2).unwrap()).map_err(|e| e.to_string())?;
    let r = decompactified_comparison(&rep, &ContourLoop::unit_circle(), 2).map_err(|e| e.to_string())?;
    let diffs: Vec<String> = r.rows.iter().map(|row| format!("{:.6}/{:.6}", row.perturbative, row.asymptotic)).collect();
    Ok((r.passed, format!("pert/asymptotic by order: {} (tol 1e-4)", diffs.join(", "))))
}

fn lattice_oracle() -> Outcome {
    let g = GroupModel::su2();
    let half = Rational64::new(1, 2);
    let map = SurfaceMap::sphere_simple_loop(half, half).map_err(|e| e.to_string())?;
    let f = chi(&g, 2);
    let obs = LoopObservable {
        function: f.clone(),
        word: map.loop_word("gamma").unwrap().to_vec(),
    };
    let exact = wilson_exact_simple(&g, &LoopConfig::sphere(0.5, 0.5, f).unwrap(), 0.5).map_err(|e| e.to_string())?;
    let est = graph_expectation_mc(&g, &map, 0.5, Some(&obs), 100_000, 20_240).map_err(|e| e.to_string())?;
    let fine = map.subdivide(0, (Rational64::new(1, 3), Rational64::new(2, 3))).map_err(|e| e.to_string())?;
    let est2 = graph_expectation_mc(&g, &fine, 0.5, Some(&obs), 100_000, 20_241).map_err(|e| e.to_string())?;
    let z1 = (est.expectation - exact).abs() / est.stderr;
    let z2 = (est2.expectation - exact).abs() / est2.stderr;
    let z12 = (est.expectation - est2.expectation).abs() / est.stderr.hypot(est2.stderr);
    Ok((
        z1 < 3.0 && z2 < 3.0 && z12 < 3.0,
        format!(
            "exact {exact:.6}; MC {:.6} +/- {:.1e} ({z1:.2} sigma); subdivided {:.6} +/- {:.1e} ({z2:.2} sigma, {z12:.2} sigma apart)",
            est.expectation, est.stderr, est2.expectation, est2.stderr
        ),
    ))
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<f64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
            (if j % 2 == 0 { 1.0 } else { -1.0 }) * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn wick_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut det_dev = 0.0f64;
    for _ in 0..20 {
        let b: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let d = berezin_gaussian(&b).map_err(|e| e.to_string())?;
        det_dev = det_dev.max((d - cofactor_det(&b)).abs());
    }
    let mut pf_dev = 0.0f64;
    for _ in 0..20 {
        let mut a = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let v = rng.random_range(-2.0..2.0);
                a[i][j] = v;
                a[j][i] = -v;
            }
        }
        let pf = pfaffian_gaussian(&a).map_err(|e| e.to_string())?;
        pf_dev = pf_dev.max((pf * pf - cofactor_det(&a)).abs());
    }
    let gens: Vec<Generator> = (1..=4).map(Generator::even).collect();
    let p: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| 1.0 / (1.0 + (i + j) as f64)).collect()).collect();
    let pk = PairingKernel::bosonic(&gens, &p).map_err(|e| e.to_string())?;
    let four = wick_expectation(&GradedExpr::monomial(&gens, 1.0), &pk);
    let bos_dev = (four - (p[0][1] * p[2][3] + p[0][2] * p[1][3] + p[0][3] * p[1][2])).abs();
    let b = vec![vec![0.7, -1.3], vec![0.4, 2.2]];
    let pf = PairingKernel::fermionic(&b).map_err(|e| e.to_string())?;
    let mut sign_ok = true;
    for i in 0..2u32 {
        for j in 0..2u32 {
            let fwd = wick_expectation(&GradedExpr::monomial(&[Generator::omega(i), Generator::omega_star(j)], 1.0), &pf);
            let rev = wick_expectation(&GradedExpr::monomial(&[Generator::omega_star(i), Generator::omega(j)], 1.0), &pf);
            sign_ok &= fwd == b[i as usize][j as usize] && rev == -b[j as usize][i as usize];
        }
    }
    let ok = det_dev < 1e-10 && pf_dev < 1e-10 && bos_dev < 1e-14 && sign_ok;
    Ok((
        ok,
        format!("det {det_dev:.1e}, Pf^2-det {pf_dev:.1e}, 4-point {bos_dev:.1e}, fermionic signs {sign_ok}"),
    ))
}

fn lie_identities() -> Outcome {
    let r = verify_lie_identities(&GroupModel::su2());
    Ok((r.passed && r.max_deviation < 1e-12, format!("max deviation {:.1e} (< 1e-12)", r.max_deviation)))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, f64); 10] = [
        ("heat-kernel semigroup", semigroup, 5.0),
        ("character vs geodesic heat kernel", two_method_heat_kernel, 5.0),
        ("exact loop with trivial observable", trivial_observable_is_one, 1.0),
        ("SU(2) Gaussian closed form", su2_closed_form, 2.0),
        ("instanton gap decay", instanton_decay, 10.0),
        ("non-commuting limits", non_commuting_limits, 1.0),
        ("perturbative orders 0-2", perturbative_order_two, 60.0),
        ("Monte Carlo lattice oracle", lattice_oracle, 60.0),
        ("Wick engine identities", wick_identities, 2.0),
        ("Lie factor identities", lie_identities, 1.0),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs_f64(*limit);
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && within, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2} s, limit {limit} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
