use graph_uncertainty::io::{write_edge_list, write_point_cloud};
use graph_uncertainty::EigenDecomposition;

use super::{load_graph, Output};
use crate::config::RunConfig;
use crate::error::Result;

fn comments(config: &RunConfig) -> Vec<String> {
    let mut line = format!("graph={}", config.graph);
    if let Some(seed) = config.graph.seed() {
        line.push_str(&format!(" seed={seed}"));
    }
    vec![format!("graph-uncertainty {}", env!("CARGO_PKG_VERSION")), line]
}

pub fn build(config: RunConfig) -> Result<()> {
    let (graph, _) = load_graph(&config)?;
    let comments = comments(&config);
    let mut out = Output::create(&config.out)?;
    if let Some(points) = graph.points() {
        out.write("points.csv", &write_point_cloud(points, &comments))?;
    }
    out.write("edges.txt", &write_edge_list(&graph, &comments))?;
    println!("{} nodes, {} edges", graph.n(), graph.edge_count());
    out.report();
    Ok(())
}

pub fn inspect(config: RunConfig) -> Result<()> {
    let (graph, fixture) = load_graph(&config)?;
    let degrees = graph.degrees().degrees;
    println!("source: {}", config.graph);
    println!("nodes: {}", graph.n());
    println!("edges: {}", graph.edge_count());
    println!("connected: {}", graph.is_connected());
    println!(
        "degree: min {}, max {}, mean {:.3}",
        degrees.min(),
        degrees.max(),
        degrees.mean()
    );
    match graph.points() {
        Some(p) => println!("coordinates: {} points in dimension {}", p.len(), p.dim()),
        None => println!("coordinates: none"),
    }
    let decomp = match fixture {
        Some(fx) => fx.decomp,
        None => EigenDecomposition::of_graph(&graph)?,
    };
    let lambda = decomp.values();
    let zeros = lambda.iter().filter(|l| l.abs() < 1e-9).count();
    println!(
        "laplacian spectrum: lambda_2 = {:.6}, lambda_max = {:.6}, zero eigenvalues = {zeros}",
        lambda.get(1).copied().unwrap_or(0.0),
        lambda.max()
    );
    Ok(())
}
