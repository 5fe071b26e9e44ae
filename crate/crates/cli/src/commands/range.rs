use graph_uncertainty::export::{ExportMeta, PolygonExport};
use graph_uncertainty::geometry::Point;
use graph_uncertainty::io::write_csv_rows;
use graph_uncertainty::uncertainty::{
    adaptive_sandwich, algorithm1, eigenvector_scatter, uniform_angles, CornerBounds,
    RangeApproximation, ScatterPoint, ScatterSource,
};

use super::{Output, Pipeline};
use crate::args::OperatorChoice;
use crate::config::{AngleSchedule, RunConfig};
use crate::error::Result;
use crate::svg::{ticks, Frame, Svg};

/// Scatter points may sit on the outer boundary up to rounding.
const CONTAINMENT_TOL: f64 = 1e-9;
const GAMMA_SAMPLES: usize = 200;

pub fn compute(p: &Pipeline) -> Result<RangeApproximation> {
    Ok(match p.config.angles {
        AngleSchedule::Uniform(k) => algorithm1(&p.bundle, &uniform_angles(k, 0.0))?,
        AngleSchedule::Adaptive { tol, k_max } => adaptive_sandwich(&p.bundle, tol, k_max)?,
    })
}

pub fn run(config: RunConfig, scatter: OperatorChoice) -> Result<()> {
    let p = Pipeline::load(config)?;
    let approx = compute(&p)?;
    let corners = CornerBounds::from_bundle(&p.bundle)?;
    let source = match scatter {
        OperatorChoice::S => ScatterSource::S,
        OperatorChoice::R => ScatterSource::Rotated(p.config.theta),
    };
    let points = eigenvector_scatter(&p.bundle, source)?;
    let comments = p.comments();
    let mut out = Output::create(&p.config.out)?;

    if p.config.formats.json {
        let meta = ExportMeta {
            graph: p.config.graph.to_string(),
            seed: p.config.graph.seed(),
            pair: p.config.pair.to_string(),
            n: p.graph.n(),
            converged: approx.converged,
            hausdorff_gap: approx.hausdorff_gap,
        };
        let doc = PolygonExport::new(&approx, &corners).with_meta(meta);
        out.write("range.json", &(doc.to_json() + "\n"))?;
    }
    if p.config.formats.csv {
        let rows: Vec<Vec<f64>> = approx.boundary_points().iter().map(|q| q.to_vec()).collect();
        out.write("boundary.csv", &write_csv_rows(&comments, Some(&["m", "c"]), &rows))?;
        let rows: Vec<Vec<f64>> = points
            .iter()
            .map(|s| vec![(s.index + 1) as f64, s.point.m, s.point.c, s.eigenvalue])
            .collect();
        out.write(
            "scatter.csv",
            &write_csv_rows(&comments, Some(&["k", "m", "c", "eigenvalue"]), &rows),
        )?;
    }
    if p.config.formats.svg {
        let label = match scatter {
            OperatorChoice::S => "psi_1",
            OperatorChoice::R => "phi_1",
        };
        out.write("range.svg", &render(&approx, &corners, &points, label, &comments))?;
    }

    let inside = points
        .iter()
        .filter(|s| approx.outer_contains(s.point.as_array(), CONTAINMENT_TOL))
        .count();
    println!(
        "K = {}, area gap = {:.3e}, hausdorff gap = {:.3e}, converged = {}",
        approx.k(),
        approx.area_gap,
        approx.hausdorff_gap,
        approx.converged
    );
    println!("outer area = {:.6}, inner area = {:.6}", approx.outer.area(), approx.inner.area());
    println!("scatter points inside outer polygon: {inside}/{}", points.len());
    out.report();
    Ok(())
}

fn render(
    approx: &RangeApproximation,
    corners: &CornerBounds,
    scatter: &[ScatterPoint],
    marker: &str,
    comments: &[String],
) -> String {
    let (mut lo, mut hi): (Point, Point) = ([0.0, 0.0], [1.0, 1.0]);
    if let Some((a, b)) = approx.outer.bounding_box() {
        lo = [lo[0].min(a[0]), lo[1].min(a[1])];
        hi = [hi[0].max(b[0]), hi[1].max(b[1])];
    }
    let pad = 0.02;
    let frame = Frame {
        x: (lo[0] - pad, hi[0] + pad),
        y: (lo[1] - pad, hi[1] + pad),
        left: 70.0,
        top: 20.0,
        width: 500.0,
        height: 500.0,
    };
    let mut svg = Svg::new(600.0, 600.0, comments);
    svg.axes(&frame, "m (space)", "c (frequency)", &ticks(0.0, 1.0, 4), &ticks(0.0, 1.0, 4));
    svg.polygon(
        &frame,
        &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        "fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"2 3\"",
    );
    svg.polygon(
        &frame,
        approx.outer.vertices(),
        "fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"#1f77b4\" stroke-width=\"1.5\"",
    );
    svg.polygon(
        &frame,
        approx.inner.vertices(),
        "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 2\"",
    );
    for bound in corners.iter() {
        svg.polyline(
            &frame,
            &bound.curve(GAMMA_SAMPLES),
            "stroke=\"#2ca02c\" stroke-width=\"1.5\"",
        );
    }
    for s in scatter {
        svg.circle(&frame, s.point.as_array(), 2.0, "fill=\"#333\" fill-opacity=\"0.6\"");
    }
    if let Some(top) = scatter.first() {
        let q = top.point.as_array();
        svg.circle(&frame, q, 3.0, "fill=\"#ff7f0e\"");
        svg.circle(&frame, q, 7.0, "fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\"");
    }
    let legend = [
        ("#1f77b4", "outer polygon"),
        ("#d62728", "inner polygon"),
        ("#2ca02c", "corner bounds"),
        ("#ff7f0e", marker),
    ];
    for (i, (color, text)) in legend.iter().enumerate() {
        let y = 38.0 + 16.0 * i as f64;
        svg.rect_px(frame.left + 10.0, y - 9.0, 10.0, 10.0, &format!("fill=\"{color}\""));
        svg.text_px(frame.left + 26.0, y, "start", text);
    }
    svg.finish()
}
