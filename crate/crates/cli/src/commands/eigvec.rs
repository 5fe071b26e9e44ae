use std::f64::consts::PI;

use graph_uncertainty::io::write_csv_rows;
use graph_uncertainty::Graph;
use nalgebra::DVector;
use serde::Serialize;

use super::{Output, Pipeline};
use crate::args::OperatorChoice;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::svg::{diverging, ticks, Frame, Svg};

#[derive(Debug, Serialize)]
struct EigvecReport {
    graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    pair: String,
    operator: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    k: usize,
    eigenvalue: f64,
    m: f64,
    c: f64,
    /// Energy of the coefficients on frequencies where the spectral filter vanishes.
    energy_outside_band: f64,
    vector: Vec<f64>,
    coefficients: Vec<f64>,
}

pub fn run(config: RunConfig, k: usize, operator: OperatorChoice) -> Result<()> {
    let p = Pipeline::load(config)?;
    let n = p.graph.n();
    if k == 0 || k > n {
        return Err(CliError::usage(format!("eigenvector index {k} out of range 1..={n}")));
    }
    let (spectrum, name, theta) = match operator {
        OperatorChoice::S => (p.bundle.s_spectrum()?, "S", None),
        OperatorChoice::R => (p.bundle.rotated(p.config.theta)?.spectrum, "R", Some(p.config.theta)),
    };
    let v = spectrum.vector(k - 1);
    let point = p.bundle.mean_values(&v)?;
    let coeffs = p.decomp.vectors().tr_mul(&v);
    let energy_outside_band = coeffs
        .iter()
        .zip(p.bundle.coeffs().iter())
        .filter(|(_, g)| **g == 0.0)
        .map(|(a, _)| a * a)
        .sum();

    let comments = p.comments();
    let stem = format!("eigvec_{}{k}", name.to_lowercase());
    let mut out = Output::create(&p.config.out)?;
    if p.config.formats.csv {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|l| vec![(l + 1) as f64, p.decomp.values()[l], coeffs[l], coeffs[l].abs()])
            .collect();
        out.write(
            &format!("{stem}_coefficients.csv"),
            &write_csv_rows(&comments, Some(&["l", "lambda", "coefficient", "magnitude"]), &rows),
        )?;
    }
    if p.config.formats.json {
        let report = EigvecReport {
            graph: p.config.graph.to_string(),
            seed: p.config.graph.seed(),
            pair: p.config.pair.to_string(),
            operator: name,
            theta,
            k,
            eigenvalue: spectrum.values[k - 1],
            m: point.m,
            c: point.c,
            energy_outside_band,
            vector: v.iter().copied().collect(),
            coefficients: coeffs.iter().copied().collect(),
        };
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        out.write(&format!("{stem}.json"), &(json + "\n"))?;
    }
    if p.config.formats.svg {
        let title = format!("{name} eigenvector {k}, eigenvalue {:.4}", spectrum.values[k - 1]);
        out.write(&format!("{stem}.svg"), &render_nodes(&p.graph, &v, &title, &comments))?;
        out.write(
            &format!("{stem}_coefficients.svg"),
            &render_bars(&coeffs, &comments),
        )?;
    }
    println!(
        "{name} eigenvector {k}: eigenvalue = {:.6}, m = {:.6}, c = {:.6}, energy outside band = {:.3e}",
        spectrum.values[k - 1],
        point.m,
        point.c,
        energy_outside_band
    );
    out.report();
    Ok(())
}

/// First two coordinates of each node, or a circle when the graph has none.
fn layout(graph: &Graph) -> Vec<[f64; 2]> {
    match graph.points() {
        Some(cloud) if cloud.dim() >= 2 => cloud.iter().map(|q| [q[0], q[1]]).collect(),
        Some(cloud) => cloud.iter().map(|q| [q[0], 0.0]).collect(),
        None => {
            let n = graph.n() as f64;
            (0..graph.n())
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n;
                    [a.cos(), a.sin()]
                })
                .collect()
        }
    }
}

fn render_nodes(graph: &Graph, v: &DVector<f64>, title: &str, comments: &[String]) -> String {
    let pos = layout(graph);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for q in &pos {
        for d in 0..2 {
            lo[d] = lo[d].min(q[d]);
            hi[d] = hi[d].max(q[d]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * span;
    let frame = Frame {
        x: (lo[0] - pad, lo[0] + span + pad),
        y: (lo[1] - pad, lo[1] + span + pad),
        left: 20.0,
        top: 40.0,
        width: 560.0,
        height: 560.0,
    };
    let mut svg = Svg::new(600.0, 620.0, comments);
    svg.text_px(300.0, 24.0, "middle", title);
    for (i, j, _) in graph.edges() {
        let a = frame.px(pos[i][0], pos[i][1]);
        let b = frame.px(pos[j][0], pos[j][1]);
        svg.line_px(a, b, "stroke=\"#ccc\" stroke-width=\"0.5\"");
    }
    let scale = v.amax().max(f64::MIN_POSITIVE);
    for (q, x) in pos.iter().zip(v.iter()) {
        let style = format!("fill=\"{}\" stroke=\"#555\" stroke-width=\"0.5\"", diverging(x / scale));
        svg.circle(&frame, *q, 5.0, &style);
    }
    svg.finish()
}

fn render_bars(coeffs: &DVector<f64>, comments: &[String]) -> String {
    let n = coeffs.len();
    let top = coeffs.amax().max(f64::MIN_POSITIVE);
    let frame = Frame {
        x: (0.5, n as f64 + 0.5),
        y: (0.0, top),
        left: 70.0,
        top: 20.0,
        width: 600.0,
        height: 300.0,
    };
    let mut svg = Svg::new(700.0, 380.0, comments);
    let xt: Vec<f64> = ticks(1.0, n as f64, 4.min(n.max(1))).iter().map(|t| t.round()).collect();
    svg.axes(&frame, "frequency index", "coefficient magnitude", &xt, &ticks(0.0, top, 4));
    let width = frame.width / n as f64;
    for (l, a) in coeffs.iter().enumerate() {
        let (x, y) = frame.px(l as f64 + 1.0, a.abs());
        let (_, base) = frame.px(0.0, 0.0);
        svg.rect_px(x - 0.4 * width, y, 0.8 * width, base - y, "fill=\"#1f77b4\"");
    }
    svg.finish()
}
