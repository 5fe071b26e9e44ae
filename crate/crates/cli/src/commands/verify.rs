use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use graph_uncertainty::approximation::{spectral_distribution, truncate_by_interval, truncate_by_threshold};
use graph_uncertainty::filters::validate;
use graph_uncertainty::linalg::max_asymmetry;
use graph_uncertainty::operators::Domain;
use graph_uncertainty::uncertainty::{
    eigenvector_scatter, in_w_gamma, sample_admissible, sample_signals, top_eigenspace,
    CornerBounds, ScatterSource,
};
use graph_uncertainty::LocalizationPoint;
use nalgebra::DMatrix;
use serde::Serialize;

use super::{range, Output, Pipeline};
use crate::config::RunConfig;
use crate::error::{CliError, Result};

const TOL: f64 = 1e-9;
const ATTAIN_TOL: f64 = 1e-10;
const STRICT_MARGIN: f64 = 1e-12;
const MAX_TRUNCATION_SIGNALS: usize = 1000;
const GRID: usize = 20;

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct CornerSummary {
    sigma1: f64,
    vacuous: bool,
}

#[derive(Debug, Serialize)]
struct RangeSummary {
    k: usize,
    outer_area: f64,
    inner_area: f64,
    area_gap: f64,
    hausdorff_gap: f64,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    pair: String,
    n: usize,
    samples: usize,
    sample_seed: u64,
    sigma1: f64,
    corners: BTreeMap<&'static str, CornerSummary>,
    all_corners_vacuous: bool,
    /// Whether the top eigenspace of S contains a signal with `m = c = 1`.
    attains_one_one: bool,
    range: RangeSummary,
    checks: Vec<Check>,
    pass: bool,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &'static str, pass: bool, detail: String) {
        self.0.push(Check { name, pass, detail });
    }
}

pub fn run(config: RunConfig) -> Result<()> {
    let p = Pipeline::load(config)?;
    let b = &p.bundle;
    let n = b.n();
    let mut checks = Checks(Vec::new());

    let asym = [b.mf(), b.cg(), b.s()]
        .iter()
        .map(|m| max_asymmetry(m))
        .fold(0.0, f64::max);
    let s_spec = b.s_spectrum()?;
    let sigma1 = s_spec.top();
    checks.push(
        "operators",
        asym <= TOL && sigma1 <= 1.0 + TOL && s_spec.bottom() >= -TOL,
        format!(
            "max asymmetry {asym:.1e}, spectrum of S in [{:.3e}, {sigma1:.12}]",
            s_spec.bottom()
        ),
    );
    let bad = b.coefficient_violations();
    let (lo, hi) = (b.coeffs().min(), b.coeffs().max());
    let what = match b.domain() {
        Domain::Graph => "spectral filter values",
        Domain::Spectral => "dual convolution coefficients U^T g",
    };
    checks.push(
        "filters",
        bad.is_empty(),
        format!("{} {what} outside [0, 1] (range [{lo:.4}, {hi:.4}])", bad.len()),
    );

    let chars = b.sigma1_characterizations()?;
    checks.push(
        "sigma1-characterizations",
        chars.max_discrepancy() <= TOL,
        format!("values {:?}, spread {:.1e}", chars.as_array(), chars.max_discrepancy()),
    );

    let report = validate(&p.pair);
    if b.domain() == Domain::Graph && report.top_eigenvalues_simple() {
        checks.push(
            "strict-uncertainty",
            sigma1 < 1.0 - STRICT_MARGIN,
            format!("top eigenvalues of M and C simple, sigma1 = {sigma1:.15}"),
        );
    }

    let approx = range::compute(&p)?;
    let samples = sample_admissible(b, p.config.samples, p.config.sample_seed);
    let scatter = eigenvector_scatter(b, ScatterSource::S)?;
    let inner_ok = approx.outer.contains_polygon(&approx.inner, TOL);
    let worst = samples
        .iter()
        .copied()
        .chain(scatter.iter().map(|s| s.point))
        .map(|q| approx.max_excess(q.as_array()))
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(
        "sandwich",
        inner_ok && worst <= TOL,
        format!(
            "K = {}, inner inside outer: {inner_ok}, {} sampled and {} eigenvector points, worst excess {worst:.2e}",
            approx.k(),
            samples.len(),
            scatter.len()
        ),
    );

    let corners = CornerBounds::from_bundle(b)?;
    let tested: Vec<LocalizationPoint> = samples
        .iter()
        .copied()
        .chain(approx.lines.iter().map(|l| l.point))
        .collect();
    let failed = tested.iter().filter(|q| !in_w_gamma(&corners, **q, TOL).pass).count();
    checks.push(
        "corner-bounds",
        failed == 0,
        format!("{failed} of {} points violate a corner bound", tested.len()),
    );

    let rot = b.rotated(FRAC_PI_4)?;
    let hi = 2f64.sqrt() * rot.spectrum.top();
    let lo = 2f64.sqrt() * rot.spectrum.bottom();
    let outside = samples
        .iter()
        .filter(|q| {
            let s = q.m + q.c;
            s < lo - TOL || s > hi + TOL
        })
        .count();
    checks.push(
        "diagonal-bound",
        outside == 0,
        format!("m + c within [{lo:.6}, {hi:.6}] for all but {outside} samples"),
    );

    let (count, worst_slack, dist_err) = truncation(&p, &s_spec)?;
    checks.push(
        "truncation-bounds",
        worst_slack <= TOL && dist_err <= 1e-10,
        format!(
            "{count} expansions, max error minus bound {worst_slack:.2e}, distribution deviation {dist_err:.1e}"
        ),
    );

    let attains = attains_one_one(&p)?;
    let mut corner_map = BTreeMap::new();
    for bound in corners.iter() {
        corner_map.insert(
            bound.corner.key(),
            CornerSummary {
                sigma1: bound.sigma1,
                vacuous: bound.is_vacuous(),
            },
        );
    }
    let pass = checks.0.iter().all(|c| c.pass);
    let doc = VerifyReport {
        graph: p.config.graph.to_string(),
        seed: p.config.graph.seed(),
        pair: p.config.pair.to_string(),
        n,
        samples: samples.len(),
        sample_seed: p.config.sample_seed,
        sigma1,
        corners: corner_map,
        all_corners_vacuous: corners.all_vacuous(),
        attains_one_one: attains,
        range: RangeSummary {
            k: approx.k(),
            outer_area: approx.outer.area(),
            inner_area: approx.inner.area(),
            area_gap: approx.area_gap,
            hausdorff_gap: approx.hausdorff_gap,
        },
        checks: checks.0,
        pass,
    };

    let mut out = Output::create(&p.config.out)?;
    if p.config.formats.json {
        let json = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.write("verify.json", &(json + "\n"))?;
    }
    for c in &doc.checks {
        println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let vacuous: Vec<&str> = doc
        .corners
        .iter()
        .filter(|(_, c)| c.vacuous)
        .map(|(k, _)| *k)
        .collect();
    println!(
        "sigma1 = {sigma1:.12}, vacuous corners: [{}], (1,1) attained: {attains}",
        vacuous.join(", ")
    );
    out.report();
    if pass {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(
            doc.checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect(),
        ))
    }
}

/// Runs both truncations over a grid of parameters for random signals.
/// Returns the number of expansions, the largest `error - bound` and the
/// largest deviation of the spectral distribution's moments.
fn truncation(
    p: &Pipeline,
    spec: &graph_uncertainty::operators::OperatorSpectrum,
) -> Result<(usize, f64, f64)> {
    let b = &p.bundle;
    let count = p.config.samples.min(MAX_TRUNCATION_SIGNALS);
    let signals = sample_signals(b.n(), count, p.config.sample_seed.wrapping_add(1));
    let (top, bottom) = (spec.top(), spec.bottom());
    let s_grid: Vec<f64> = (0..GRID)
        .map(|i| bottom + (top - bottom) * i as f64 / GRID as f64)
        .filter(|s| *s < top)
        .collect();
    let a_grid: Vec<f64> = (0..GRID)
        .map(|i| 1e-3 * (2e3f64).powf(i as f64 / (GRID - 1) as f64))
        .collect();
    let mut expansions = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut dist_err: f64 = 0.0;
    for x in &signals {
        for &s in &s_grid {
            let r = truncate_by_threshold(spec, x, s)?;
            worst = worst.max(r.actual_error_sq - r.bound);
            expansions += 1;
        }
        for &a in &a_grid {
            let r = truncate_by_interval(spec, x, a)?;
            worst = worst.max(r.actual_error_sq - r.bound);
            expansions += 1;
        }
        let d = spectral_distribution(spec, x)?;
        let mean = d.mean(&spec.values);
        let var = d.variance(&spec.values);
        let s_mean = b.s_mean(x)?;
        let sx = b.s() * x;
        let var_direct = (sx.norm_squared() - s_mean * s_mean).max(0.0);
        dist_err = dist_err
            .max((d.total() - 1.0).abs())
            .max((mean - s_mean).abs())
            .max((var - var_direct).abs());
    }
    Ok((expansions, worst, dist_err))
}

/// Maximizes `m + c` over the top eigenspace of S and tests for `(1, 1)`.
fn attains_one_one(p: &Pipeline) -> Result<bool> {
    let b = &p.bundle;
    let q = top_eigenspace(b.s())?;
    let sum: DMatrix<f64> = b.mf() + b.cg();
    let reduced = q.transpose() * sum * &q;
    let inner = top_eigenspace(&reduced)?;
    let v = &q * inner.column(0);
    let point = b.mean_values(&(&v / v.norm()))?;
    Ok((point.m - 1.0).abs() <= ATTAIN_TOL && (point.c - 1.0).abs() <= ATTAIN_TOL)
}
