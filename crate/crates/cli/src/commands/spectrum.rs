use graph_uncertainty::experiment::{
    cluster_fraction, decay_drop, standard_pair, DecayDrop, CLUSTER_FRACTION, CLUSTER_TOL,
    STANDARD_KINDS,
};
use graph_uncertainty::io::write_csv_rows;
use graph_uncertainty::{build_bundle, PairKind};
use serde::Serialize;

use super::{Output, Pipeline};
use crate::config::RunConfig;
use crate::error::Result;
use crate::svg::{ticks, Frame, Svg, PALETTE};

#[derive(Debug, Serialize)]
struct PairSpectrum {
    pair: &'static str,
    #[serde(skip)]
    short: &'static str,
    sigma: Vec<f64>,
    rho: Vec<f64>,
    /// Present for band-limited pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    drop: Option<DecayDrop>,
    /// Fraction of rotated-operator eigenvalues near `{0, cos, sin, 1}`.
    cluster_fraction: f64,
}

#[derive(Debug, Serialize)]
struct SpectrumReport<'a> {
    graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    n: usize,
    theta: f64,
    center: usize,
    bandwidth: usize,
    cluster_threshold: f64,
    pairs: &'a [PairSpectrum],
}

fn short(kind: PairKind) -> &'static str {
    match kind {
        PairKind::ProjectionProjection => "pp",
        PairKind::DistanceProjection => "dp",
        PairKind::ModifiedDistanceProjection => "mdp",
        PairKind::DistanceLaplace => "dl",
        PairKind::LaplaceLaplace => "ll",
        PairKind::Custom => "custom",
    }
}

pub fn run(config: RunConfig) -> Result<()> {
    let p = Pipeline::load(config)?;
    let params = p.pair_params()?;
    let theta = p.config.theta;
    let mut bundles = Vec::new();
    for kind in STANDARD_KINDS {
        let pair = standard_pair(kind, &p.graph, &p.decomp, p.center, &params)?;
        bundles.push((kind, build_bundle(&p.decomp, &pair)?));
    }
    if !STANDARD_KINDS.contains(&p.pair.kind) {
        bundles.push((p.pair.kind, p.bundle.clone()));
    }
    let mut spectra = Vec::new();
    for (kind, bundle) in bundles {
        let sigma = bundle.s_spectrum()?.values;
        let rho = bundle.rotated(theta)?.spectrum.values;
        let drop = (kind != PairKind::DistanceLaplace)
            .then(|| {
                let support = bundle.f().iter().filter(|v| **v > 0.0).count();
                decay_drop(&sigma, params.bandwidth, support)
            })
            .flatten();
        spectra.push(PairSpectrum {
            pair: kind.label(),
            short: short(kind),
            cluster_fraction: cluster_fraction(&rho, theta, CLUSTER_TOL),
            sigma: sigma.iter().copied().collect(),
            rho: rho.iter().copied().collect(),
            drop,
        });
    }

    let comments = p.comments();
    let mut out = Output::create(&p.config.out)?;
    if p.config.formats.csv {
        let mut header = vec!["k".to_string()];
        for s in &spectra {
            header.push(format!("sigma_{}", s.short));
            header.push(format!("rho_{}", s.short));
        }
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows: Vec<Vec<f64>> = (0..p.graph.n())
            .map(|k| {
                let mut row = vec![(k + 1) as f64];
                for s in &spectra {
                    row.push(s.sigma[k]);
                    row.push(s.rho[k]);
                }
                row
            })
            .collect();
        out.write("spectrum.csv", &write_csv_rows(&comments, Some(&header), &rows))?;
    }
    if p.config.formats.json {
        let report = SpectrumReport {
            graph: p.config.graph.to_string(),
            seed: p.config.graph.seed(),
            n: p.graph.n(),
            theta,
            center: p.center,
            bandwidth: params.bandwidth,
            cluster_threshold: CLUSTER_FRACTION,
            pairs: &spectra,
        };
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        out.write("spectrum.json", &(json + "\n"))?;
    }
    if p.config.formats.svg {
        out.write("spectrum.svg", &render(&spectra, &comments))?;
    }

    for s in &spectra {
        let drop = match &s.drop {
            Some(d) => format!(
                ", drop at {}: {:.3e} -> {:.3e} ({})",
                d.index,
                d.before,
                d.after,
                if d.pass { "pass" } else { "fail" }
            ),
            None => String::new(),
        };
        println!(
            "{}: sigma_1 = {:.6}, clustered = {:.1}%{drop}",
            s.pair,
            s.sigma[0],
            100.0 * s.cluster_fraction
        );
    }
    out.report();
    Ok(())
}

fn render(spectra: &[PairSpectrum], comments: &[String]) -> String {
    let n = spectra.first().map_or(1, |s| s.sigma.len()).max(2);
    let all = || spectra.iter().flat_map(|s| s.sigma.iter().chain(&s.rho)).copied();
    let lo = all().fold(0.0_f64, f64::min);
    let hi = all().fold(1.0_f64, f64::max);
    let frame = Frame {
        x: (1.0, n as f64),
        y: (lo, hi),
        left: 70.0,
        top: 20.0,
        width: 600.0,
        height: 400.0,
    };
    let mut svg = Svg::new(700.0, 520.0, comments);
    let xt: Vec<f64> = ticks(1.0, n as f64, 4).iter().map(|t| t.round()).collect();
    svg.axes(&frame, "k", "eigenvalue", &xt, &ticks(lo, hi, 4));
    for (i, s) in spectra.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let curve = |v: &[f64]| -> Vec<[f64; 2]> {
            v.iter().enumerate().map(|(k, &y)| [(k + 1) as f64, y]).collect()
        };
        svg.polyline(&frame, &curve(&s.sigma), &format!("stroke=\"{color}\" stroke-width=\"1.5\""));
        svg.polyline(
            &frame,
            &curve(&s.rho),
            &format!("stroke=\"{color}\" stroke-width=\"1\" stroke-dasharray=\"4 2\""),
        );
        let y = frame.top + frame.height + 60.0;
        let x = frame.left + 120.0 * i as f64;
        svg.rect_px(x, y - 9.0, 10.0, 10.0, &format!("fill=\"{color}\""));
        svg.text_px(x + 14.0, y, "start", s.pair);
    }
    svg.text_px(
        frame.left + frame.width,
        frame.top + frame.height + 80.0,
        "end",
        "solid: S, dashed: rotated operator",
    );
    svg.finish()
}
