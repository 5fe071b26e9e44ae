//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use graph_uncertainty::approximation::{spectral_distribution, truncate_by_interval, truncate_by_threshold};
use graph_uncertainty::experiment::{
    bipartite4, center_node, cluster_fraction, complete4, decay_drop, random_connected_graph,
    random_fixture, random_strict_pair, sensor_graph, standard_pair, Fixture, PairParams,
    SensorParams, CLUSTER_FRACTION, CLUSTER_TOL, DROP_RATIO, EXPERIMENT_THETA, STANDARD_KINDS,
};
use graph_uncertainty::filters::validate;
use graph_uncertainty::graph::normalized_laplacian;
use graph_uncertainty::operators::{build_bundle, OperatorBundle};
use graph_uncertainty::spectral::eig_sym;
use graph_uncertainty::uncertainty::{
    adaptive_sandwich, algorithm1, eigenvector_scatter, gamma, in_w_gamma, sample_admissible,
    sample_signals, uniform_angles, Corner, CornerBounds, GammaBound, ScatterSource,
};
use graph_uncertainty::{EigenDecomposition, PairKind};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn within_time(started: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, || format!("{what} took {t:.2?}, limit {limit:?}"))
}

/// The 20 random graphs x 4 pair kinds shared by several criteria.
fn random_fixtures() -> Vec<Fixture> {
    (0..20u64)
        .flat_map(|seed| STANDARD_KINDS.map(move |k| (seed, k)))
        .map(|(seed, kind)| random_fixture(kind, seed).expect("random fixture"))
        .collect()
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

fn c1() -> Outcome {
    let started = Instant::now();
    let fx = bipartite4().map_err(e)?;
    let l = normalized_laplacian(&fx.graph).map_err(e)?;
    let expected = DMatrix::from_row_slice(
        4,
        4,
        &[1.0, -1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0, 1.0],
    );
    ensure(max_abs_diff(&l, &expected) < 1e-12, || "Laplacian differs".into())?;
    let computed = eig_sym(&l).map_err(e)?;
    for (v, t) in computed.values().iter().zip([0.0, 0.0, 2.0, 2.0]) {
        ensure((v - t).abs() < 1e-10, || format!("eigenvalue {v} != {t}"))?;
    }
    let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
    let targets = [(1.0, 1.0), (0.0, 1.0), (1.0, 0.0), (0.0, 0.0)];
    for (i, (m, c)) in targets.into_iter().enumerate() {
        let mut x = DVector::zeros(4);
        x[i] = 1.0;
        let p = b.mean_values(&x).map_err(e)?;
        ensure((p.m - m).abs() < 1e-10 && (p.c - c).abs() < 1e-10, || {
            format!("e{} maps to ({}, {}), expected ({m}, {c})", i + 1, p.m, p.c)
        })?;
    }
    let sigma1 = b.s_spectrum().map_err(e)?.top();
    ensure((sigma1 - 1.0).abs() < 1e-10, || format!("sigma1 = {sigma1}"))?;
    let fixed = algorithm1(&b, &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]).map_err(e)?;
    let adaptive = adaptive_sandwich(&b, 1e-6, 64).map_err(e)?;
    for (name, r) in [("K=4", &fixed), ("adaptive", &adaptive)] {
        let area = r.outer.area();
        ensure((area - 1.0).abs() < 1e-6, || format!("{name} outer area {area}"))?;
    }
    within_time(started, Duration::from_secs(1), "criterion 1")?;
    Ok(format!(
        "L and lambda=(0,0,2,2) reproduced, four corner points exact, sigma1={sigma1:.12}, outer area={:.9}",
        fixed.outer.area()
    ))
}

fn c2() -> Outcome {
    let fx = complete4().map_err(e)?;
    let l = normalized_laplacian(&fx.graph).map_err(e)?;
    let expected = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { -1.0 / 3.0 });
    ensure(max_abs_diff(&l, &expected) < 1e-12, || "Laplacian differs".into())?;
    let computed = eig_sym(&l).map_err(e)?;
    for (v, t) in computed.values().iter().zip([0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0]) {
        ensure((v - t).abs() < 1e-10, || format!("eigenvalue {v} != {t}"))?;
    }
    let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
    let p = b.mean_values(&fx.decomp.vector(2)).map_err(e)?;
    ensure((p.m - 1.0).abs() < 1e-10 && (p.c - 1.0).abs() < 1e-10, || {
        format!("u3 maps to ({}, {})", p.m, p.c)
    })?;
    let spectrum = b.s_spectrum().map_err(e)?;
    let top = spectrum.top();
    ensure((top - 1.0).abs() < 1e-10, || format!("sigma1 = {top}"))?;
    let q = b.mean_values(&spectrum.vector(0)).map_err(e)?;
    ensure((q.m - 1.0).abs() < 1e-10 && (q.c - 1.0).abs() < 1e-10, || {
        format!("top eigenvector of S maps to ({}, {})", q.m, q.c)
    })?;
    Ok(format!(
        "L and lambda=(0,4/3,4/3,4/3) reproduced, (m,c)(u3)=({:.12},{:.12}), top eigenspace of S attains (1,1)",
        p.m, p.c
    ))
}

fn c3(fixtures: &[Fixture]) -> Outcome {
    let started = Instant::now();
    let ks = [8usize, 16, 32, 64, 128];
    let mut worst_excess = f64::NEG_INFINITY;
    for (idx, fx) in fixtures.iter().enumerate() {
        let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
        let runs: Vec<_> = ks
            .iter()
            .map(|&k| algorithm1(&b, &uniform_angles(k, 0.0)))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let fine = runs.last().unwrap();
        for v in fine.inner.vertices() {
            ensure(fine.outer_contains(*v, 1e-9), || {
                format!("{}: inner vertex {v:?} outside P_out", fx.name)
            })?;
        }
        let samples = sample_admissible(&b, 100_000, 1000 + idx as u64);
        let excess = samples
            .par_iter()
            .map(|p| fine.max_excess(p.as_array()))
            .reduce(|| f64::NEG_INFINITY, f64::max);
        worst_excess = worst_excess.max(excess);
        ensure(excess <= 1e-9, || format!("{}: sample outside P_out by {excess:e}", fx.name))?;
        for w in runs.windows(2) {
            ensure(w[1].inner.contains_polygon(&w[0].inner, 1e-9), || {
                format!("{}: P_in(K={}) not inside P_in(K={})", fx.name, w[0].k(), w[1].k())
            })?;
            ensure(w[0].outer.contains_polygon(&w[1].outer, 1e-9), || {
                format!("{}: P_out(K={}) not inside P_out(K={})", fx.name, w[1].k(), w[0].k())
            })?;
        }
    }
    within_time(started, Duration::from_secs(120), "criterion 3")?;
    Ok(format!(
        "{} fixtures x 1e5 samples inside P_out (worst half-plane excess {worst_excess:.2e}), refinement monotone over K=8..128",
        fixtures.len()
    ))
}

fn ordering_chain(sigma1: f64) -> Result<(), String> {
    let bound = GammaBound::new(sigma1, Corner::FG);
    for i in 0..1000 {
        let t = sigma1 + (1.0 - sigma1) * i as f64 / 999.0;
        let g = gamma(&bound, t).map_err(e)?;
        let ratio = if sigma1 == 0.0 { 0.0 } else { sigma1 / t };
        let chain = [sigma1, ratio, 1.0 - t + sigma1, g, 1.0];
        for w in chain.windows(2) {
            ensure(w[0] <= w[1] + 1e-12, || {
                format!("ordering chain broken at sigma1={sigma1}, t={t}: {chain:?}")
            })?;
        }
    }
    let g0 = gamma(&bound, sigma1).map_err(e)?;
    let g1 = gamma(&bound, 1.0).map_err(e)?;
    ensure((g0 - 1.0).abs() < 1e-12 && (g1 - sigma1).abs() < 1e-12, || {
        format!("endpoint identities fail for sigma1={sigma1}: gamma(sigma1)={g0}, gamma(1)={g1}")
    })
}

fn c4(fixtures: &[Fixture]) -> Outcome {
    let mut active = 0usize;
    let mut corners_checked = 0usize;
    for (idx, fx) in fixtures.iter().enumerate() {
        let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
        let bounds = CornerBounds::from_bundle(&b).map_err(e)?;
        for g in bounds.iter().filter(|g| !g.is_vacuous()) {
            ordering_chain(g.sigma1)?;
            corners_checked += 1;
        }
        let samples = sample_admissible(&b, 100_000, 1000 + idx as u64);
        let (fails, act) = samples
            .par_iter()
            .map(|p| {
                let v = in_w_gamma(&bounds, *p, 1e-9);
                (usize::from(!v.pass), v.checks.iter().filter(|c| c.limit.is_some()).count())
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        active += act;
        ensure(fails == 0, || format!("{}: {fails} samples outside W_gamma", fx.name))?;
    }
    for s in [0.0, 0.1, 0.5, 0.9, 0.999_999] {
        ordering_chain(s)?;
    }
    Ok(format!(
        "all samples in W_gamma ({active} active corner constraints evaluated), endpoint identities and ordering chain hold for {} corner bounds",
        corners_checked + 5
    ))
}

fn sensor_bundles() -> Result<Vec<(PairKind, OperatorBundle)>, String> {
    let g = sensor_graph(SensorParams::default()).map_err(e)?;
    let d = EigenDecomposition::of_graph(&g).map_err(e)?;
    let w = center_node(&g);
    STANDARD_KINDS
        .iter()
        .map(|&k| {
            let pair = standard_pair(k, &g, &d, w, &PairParams::default()).map_err(e)?;
            Ok((k, build_bundle(&d, &pair).map_err(e)?))
        })
        .collect()
}

fn c5(fixtures: &[Fixture]) -> Outcome {
    let mut bundles = Vec::new();
    for fx in [bipartite4().map_err(e)?, complete4().map_err(e)?].iter().chain(fixtures) {
        bundles.push((fx.name.clone(), build_bundle(&fx.decomp, &fx.pair).map_err(e)?));
    }
    for (k, b) in sensor_bundles()? {
        bundles.push((format!("sensor-{k}"), b));
    }
    let worst = bundles
        .par_iter()
        .map(|(name, b)| {
            b.sigma1_characterizations()
                .map(|c| (c.max_discrepancy(), name.clone()))
                .map_err(e)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold((0.0, String::new()), |a, b| if b.0 > a.0 { b } else { a });
    ensure(worst.0 <= 1e-9, || format!("{}: characterizations differ by {:e}", worst.1, worst.0))?;
    Ok(format!(
        "{} bundles, largest spread among the four norms {:.2e}",
        bundles.len(),
        worst.0
    ))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut largest: f64 = 0.0;
    for i in 0..100 {
        let n = 5 + i % 8;
        let g = random_connected_graph(n, 0.3, &mut rng).map_err(e)?;
        let d = EigenDecomposition::of_graph(&g).map_err(e)?;
        let pair = random_strict_pair(n, &mut rng).map_err(e)?;
        let report = validate(&pair);
        ensure(report.is_valid() && report.top_eigenvalues_simple(), || {
            format!("pair {i}: top eigenvalues not verified simple")
        })?;
        let sigma1 = build_bundle(&d, &pair).map_err(e)?.s_spectrum().map_err(e)?.top();
        largest = largest.max(sigma1);
        ensure(sigma1 < 1.0 - 1e-12, || format!("pair {i}: sigma1 = {sigma1}"))?;
    }
    Ok(format!("100 pairs with simple top eigenvalues, max sigma1 = {largest:.6}"))
}

fn c7(fixtures: &[Fixture]) -> Outcome {
    let mut checks = 0usize;
    let mut worst_slack = f64::NEG_INFINITY;
    for (idx, fx) in fixtures.iter().enumerate() {
        let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
        let rot = b.rotated(EXPERIMENT_THETA).map_err(e)?;
        let spectra = [("S", b.s_spectrum().map_err(e)?), ("R", rot.spectrum.clone())];
        let signals = sample_signals(b.n(), 1000, 7000 + idx as u64);
        for (label, sp) in &spectra {
            let (top, bottom) = (sp.top(), sp.bottom());
            let spread = top - bottom;
            for x in &signals {
                let x = x * 1.5;
                let mu = spectral_distribution(sp, &x).map_err(e)?;
                ensure((mu.total() - 1.0).abs() < 1e-10, || format!("{}: sum mu = {}", fx.name, mu.total()))?;
                let (var_s, var_r) = b.variances(&rot, &x).map_err(e)?;
                let (mean, var) = if *label == "S" {
                    (b.s_mean(&x).map_err(e)?, var_s)
                } else {
                    (rot.r_mean(&x).map_err(e)?, var_r)
                };
                ensure((mu.mean(&sp.values) - mean).abs() < 1e-10, || {
                    format!("{} {label}: mu-mean differs from Rayleigh quotient", fx.name)
                })?;
                ensure((mu.variance(&sp.values) - var).abs() < 1e-10, || {
                    format!("{} {label}: mu-variance differs from operator variance", fx.name)
                })?;
                if spread > 1e-12 {
                    for j in 0..20 {
                        let s = bottom + spread * j as f64 / 20.0;
                        let r = truncate_by_threshold(sp, &x, s).map_err(e)?;
                        worst_slack = worst_slack.max(r.actual_error_sq - r.bound);
                        ensure(r.bound_holds(1e-9), || {
                            format!("{} {label}: threshold bound fails at s={s}", fx.name)
                        })?;
                        checks += 1;
                    }
                }
                for j in 0..20 {
                    let a = 1e-3 * 10f64.powf(3.3 * j as f64 / 19.0);
                    let r = truncate_by_interval(sp, &x, a).map_err(e)?;
                    worst_slack = worst_slack.max(r.actual_error_sq - r.bound);
                    ensure(r.bound_holds(1e-9), || {
                        format!("{} {label}: interval bound fails at a={a}", fx.name)
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checks} bound evaluations on S and R(9pi/20), max (actual - bound) = {worst_slack:.2e}; mu sums, means and variances consistent"
    ))
}

fn c8(fixtures: &[Fixture]) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut count = 0usize;
    for (idx, fx) in fixtures.iter().enumerate() {
        let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
        let rot = b.rotated(FRAC_PI_4).map_err(e)?;
        let hi = 2f64.sqrt() * rot.spectrum.top();
        let lo = 2f64.sqrt() * rot.spectrum.bottom();
        let samples = sample_admissible(&b, 100_000, 1000 + idx as u64);
        count += samples.len();
        for p in samples {
            let s = p.m + p.c;
            worst = worst.max(s - hi).max(lo - s);
            ensure(lo - 1e-9 <= s && s <= hi + 1e-9, || {
                format!("{}: m+c = {s} outside [{lo}, {hi}]", fx.name)
            })?;
        }
    }
    Ok(format!("{count} samples within the two-sided bound (worst excess {worst:.2e})"))
}

fn c9() -> Outcome {
    let ks = [8usize, 16, 32, 64];
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); ks.len()];
    for seed in 0..5u64 {
        let fx = random_fixture(STANDARD_KINDS[(seed % 4) as usize], 900 + seed).map_err(e)?;
        let b = build_bundle(&fx.decomp, &fx.pair).map_err(e)?;
        let run = adaptive_sandwich(&b, f64::MIN_POSITIVE, 128).map_err(e)?;
        let gap_at = |k: usize| run.gap_history.iter().find(|h| h.0 == k).map(|h| h.1);
        for (i, &k) in ks.iter().enumerate() {
            if let (Some(g1), Some(g2)) = (gap_at(k), gap_at(2 * k)) {
                if g1 > 1e-12 {
                    ratios[i].push(g2 / g1);
                }
            }
        }
    }
    let means: Vec<f64> = ratios
        .iter()
        .map(|r| if r.is_empty() { 0.0 } else { r.iter().sum::<f64>() / r.len() as f64 })
        .collect();
    let summary: Vec<String> = ks
        .iter()
        .zip(&means)
        .zip(&ratios)
        .map(|((k, m), r)| format!("K={k}: {m:.3} ({} runs)", r.len()))
        .collect();
    ensure(means.iter().all(|m| *m <= 0.5), || format!("mean gap ratios {}", summary.join(", ")))?;
    Ok(format!("mean gap(2K)/gap(K): {}", summary.join(", ")))
}

fn c10() -> Outcome {
    let started = Instant::now();
    let bundles = sensor_bundles()?;
    let params = PairParams::default();
    let mut notes = Vec::new();
    for (kind, b) in &bundles {
        if *kind == PairKind::DistanceLaplace {
            continue;
        }
        let support = b.f().iter().filter(|v| **v > 0.0).count();
        let sigma = b.s_spectrum().map_err(e)?.values;
        let drop = decay_drop(&sigma, params.bandwidth, support)
            .ok_or_else(|| format!("{kind}: drop index outside the spectrum"))?;
        ensure(drop.pass, || {
            format!(
                "{kind}: sigma_{} = {:e} not below {DROP_RATIO} * sigma_{} = {:e}",
                drop.index + drop.offset,
                drop.after,
                drop.index - drop.offset,
                drop.before
            )
        })?;
        notes.push(format!("{kind} drop at {}", drop.index));
    }
    let (_, proj) = &bundles[0];
    let rot = proj.rotated(EXPERIMENT_THETA).map_err(e)?;
    let frac = cluster_fraction(&rot.spectrum.values, EXPERIMENT_THETA, CLUSTER_TOL);
    ensure(frac >= CLUSTER_FRACTION, || {
        format!("only {:.1}% of R eigenvalues near the cluster set", 100.0 * frac)
    })?;
    let (_, dist) = &bundles[1];
    let scatter = eigenvector_scatter(dist, ScatterSource::S).map_err(e)?;
    let worst = scatter
        .iter()
        .map(|p| p.point.c.abs().min((1.0 - p.point.c).abs()))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-8, || format!("scatter c-value {worst:e} away from {{0,1}}"))?;
    within_time(started, Duration::from_secs(60), "criterion 10")?;
    Ok(format!(
        "(a) {}; (b) {:.1}% of R(9pi/20) eigenvalues clustered; (c) max distance of c(psi_k) to {{0,1}} = {worst:.1e}",
        notes.join(", "),
        100.0 * frac
    ))
}

fn main() -> ExitCode {
    let fixtures = random_fixtures();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("C1 bipartite fixture exactness", Box::new(c1)),
        ("C2 complete-graph fixture exactness", Box::new(c2)),
        ("C3 sandwich correctness", Box::new(|| c3(&fixtures))),
        ("C4 corner-bound correctness", Box::new(|| c4(&fixtures))),
        ("C5 sigma1 characterizations", Box::new(|| c5(&fixtures))),
        ("C6 strict uncertainty for simple top eigenvalues", Box::new(c6)),
        ("C7 truncation error bounds", Box::new(|| c7(&fixtures))),
        ("C8 two-sided bound at theta = pi/4", Box::new(|| c8(&fixtures))),
        ("C9 adaptive sandwich convergence trend", Box::new(c9)),
        ("C10 sensor-graph behaviour", Box::new(c10)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let started = Instant::now();
        let outcome = check();
        let t = started.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({t:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({t:.2?})");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
