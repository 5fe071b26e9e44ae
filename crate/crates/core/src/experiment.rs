//! Reproducible test graphs and the standard filter pairs.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::{
    distance_spatial, laplace_spectral, lowpass_band, projection_spatial, projection_spectral,
    smoothed_bandlimit, FilterPair, PairKind, SpatialFilter, SpectralFilter,
};
use crate::graph::{geodesic, graph_from_edges, normalized_laplacian, radius_graph, Graph, PointCloud};
use crate::spectral::EigenDecomposition;

/// Rotation angle used for the `R(theta)` analyses of the sensor experiment.
pub const EXPERIMENT_THETA: f64 = 9.0 * PI / 20.0;

/// Seed of the default sensor network: with `n = 253`, `R = 1/6` it gives a
/// connected graph with 2369 edges.
pub const DEFAULT_SENSOR_SEED: u64 = 365;

/// Random geometric graph on uniform points in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    pub n: usize,
    pub radius: f64,
    pub seed: u64,
}

impl Default for SensorParams {
    fn default() -> Self {
        Self {
            n: 253,
            radius: 1.0 / 6.0,
            seed: DEFAULT_SENSOR_SEED,
        }
    }
}

pub fn sensor_points(n: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    PointCloud::new(points)
}

/// Sensor network with its point coordinates attached.
pub fn sensor_graph(params: SensorParams) -> Result<Graph> {
    let points = sensor_points(params.n, params.seed)?;
    radius_graph(&points, params.radius)?.with_points(points)
}

/// Parameters of the four standard filter pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams {
    /// Euclidean radius of the node set `A` of the projection pair.
    pub disk_radius: f64,
    /// Bandwidth `N`: the band is `{1, ..., N}`.
    pub bandwidth: usize,
    /// Exponent of the modified distance filter.
    pub alpha: f64,
    /// Exponent of the smoothing factor `1 - (lambda/2)^beta`.
    pub beta: f64,
    /// Exponent of the distance filter paired with the Laplace filter.
    pub alpha_laplace: f64,
}

impl Default for PairParams {
    fn default() -> Self {
        Self {
            disk_radius: 0.25,
            bandwidth: 100,
            alpha: 0.5,
            beta: 2.0,
            alpha_laplace: 2.0,
        }
    }
}

/// Node closest to the centroid of the point cloud, or node 0 without coordinates.
pub fn center_node(graph: &Graph) -> usize {
    graph
        .points()
        .map(|p| p.nearest(&p.centroid()))
        .unwrap_or(0)
}

/// The standard filter pair of the given kind, centered at node `center`.
///
/// The projection pair uses the Euclidean disk around `center` when the graph
/// has coordinates and the hop ball of radius one otherwise.
pub fn standard_pair(
    kind: PairKind,
    graph: &Graph,
    decomp: &EigenDecomposition,
    center: usize,
    params: &PairParams,
) -> Result<FilterPair> {
    let n = graph.n();
    let band = || lowpass_band(params.bandwidth.min(n));
    let (spatial, spectral) = match kind {
        PairKind::ProjectionProjection => {
            let nodes: BTreeSet<usize> = match graph.points() {
                Some(p) => p.ball(center, params.disk_radius).into_iter().collect(),
                None => std::iter::once(center).chain(graph.neighbors(center)).collect(),
            };
            (projection_spatial(n, &nodes)?, projection_spectral(n, &band())?)
        }
        PairKind::DistanceProjection => (
            distance_spatial(&geodesic(graph, center)?, 1.0)?,
            projection_spectral(n, &band())?,
        ),
        PairKind::ModifiedDistanceProjection => (
            distance_spatial(&geodesic(graph, center)?, params.alpha)?,
            smoothed_bandlimit(decomp.values(), &band(), params.beta)?,
        ),
        PairKind::DistanceLaplace => (
            distance_spatial(&geodesic(graph, center)?, params.alpha_laplace)?,
            laplace_spectral(decomp.values())?,
        ),
        PairKind::LaplaceLaplace => {
            let g = laplace_spectral(decomp.values())?;
            (SpatialFilter::new(g.values().iter().copied().collect())?, g)
        }
        PairKind::Custom => {
            return Err(Error::ExplicitFiltersRequired(kind.label()))
        }
    };
    FilterPair::new(spatial, spectral, kind)
}

/// The four pair kinds compared in the sensor experiment.
pub const STANDARD_KINDS: [PairKind; 4] = [
    PairKind::ProjectionProjection,
    PairKind::DistanceProjection,
    PairKind::ModifiedDistanceProjection,
    PairKind::DistanceLaplace,
];

/// A graph with a fixed eigenbasis and a filter pair.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub graph: Graph,
    pub decomp: EigenDecomposition,
    pub pair: FilterPair,
}

fn fixture_with_basis(
    name: &str,
    graph: Graph,
    values: [f64; 4],
    basis: [f64; 16],
    f: [f64; 4],
    g: [f64; 4],
    kind: PairKind,
) -> Result<Fixture> {
    let l = normalized_laplacian(&graph)?;
    let decomp = EigenDecomposition::from_parts(
        &l,
        DVector::from_row_slice(&values),
        DMatrix::from_row_slice(4, 4, &basis),
        1e-12,
    )?;
    let pair = FilterPair::new(
        SpatialFilter::new(f.to_vec())?,
        SpectralFilter::new(g.to_vec())?,
        kind,
    )?;
    Ok(Fixture {
        name: name.into(),
        graph,
        decomp,
        pair,
    })
}

/// Two disjoint edges `0-1`, `2-3` with `f = g_hat = (1,0,1,0)`: the range is
/// the whole unit square.
pub fn bipartite4() -> Result<Fixture> {
    let h = FRAC_1_SQRT_2;
    fixture_with_basis(
        "bipartite4",
        graph_from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)])?,
        [0.0, 0.0, 2.0, 2.0],
        [
            h, 0.0, h, 0.0, //
            h, 0.0, -h, 0.0, //
            0.0, h, 0.0, h, //
            0.0, h, 0.0, -h,
        ],
        [1.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        PairKind::ProjectionProjection,
    )
}

/// Complete graph on four nodes with `f = (1,1,0,0)`, `g_hat = (0,0,1,0)`
/// in a basis where `u_3` is supported on nodes 0 and 1.
pub fn complete4() -> Result<Fixture> {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            edges.push((i, j, 1.0));
        }
    }
    let h = FRAC_1_SQRT_2;
    let third = 4.0 / 3.0;
    fixture_with_basis(
        "complete4",
        graph_from_edges(4, &edges)?,
        [0.0, third, third, third],
        [
            0.5, 0.5, h, 0.0, //
            0.5, 0.5, -h, 0.0, //
            0.5, -0.5, 0.0, h, //
            0.5, -0.5, 0.0, -h,
        ],
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        PairKind::ProjectionProjection,
    )
}

/// Connected unweighted graph: a random spanning tree plus each remaining
/// edge with probability `p`.
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let (a, b) = (order[k].min(parent), order[k].max(parent));
        edges.insert((a, b));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !edges.contains(&(i, j)) && rng.random_bool(p) {
                edges.insert((i, j));
            }
        }
    }
    let list: Vec<_> = edges.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
    graph_from_edges(n, &list)
}

/// A random pair of one of the four standard kinds.
pub fn random_pair<R: Rng + ?Sized>(
    kind: PairKind,
    graph: &Graph,
    decomp: &EigenDecomposition,
    rng: &mut R,
) -> Result<FilterPair> {
    let n = graph.n();
    let center = rng.random_range(0..n);
    let bandwidth = rng.random_range(1..n);
    let band = lowpass_band(bandwidth);
    let (spatial, spectral) = match kind {
        PairKind::ProjectionProjection => {
            let mut nodes: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            nodes.insert(center);
            let mut freqs: BTreeSet<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
            freqs.insert(rng.random_range(1..=n));
            (projection_spatial(n, &nodes)?, projection_spectral(n, &freqs)?)
        }
        PairKind::DistanceProjection => (
            distance_spatial(&geodesic(graph, center)?, 1.0)?,
            projection_spectral(n, &band)?,
        ),
        PairKind::ModifiedDistanceProjection => (
            distance_spatial(&geodesic(graph, center)?, rng.random_range(0.25..3.0))?,
            smoothed_bandlimit(decomp.values(), &band, rng.random_range(0.5..4.0))?,
        ),
        PairKind::DistanceLaplace => (
            distance_spatial(&geodesic(graph, center)?, rng.random_range(0.25..3.0))?,
            laplace_spectral(decomp.values())?,
        ),
        _ => return random_strict_pair(n, rng),
    };
    FilterPair::new(spatial, spectral, kind)
}

/// Random filters whose maximum 1 is attained exactly once each, so that the
/// eigenvalue 1 of both `M_f` and `C_g` is simple.
pub fn random_strict_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<FilterPair> {
    let mut draw = || {
        let top = rng.random_range(0..n);
        (0..n)
            .map(|i| if i == top { 1.0 } else { rng.random_range(0.0..0.999) })
            .collect::<Vec<f64>>()
    };
    let f = draw();
    let g = draw();
    FilterPair::new(SpatialFilter::new(f)?, SpectralFilter::new(g)?, PairKind::Custom)
}

/// Random connected graph with `n` in `5..=12`, its eigendecomposition and a
/// random pair of the given kind.
pub fn random_fixture(kind: PairKind, seed: u64) -> Result<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(5..=12);
    let graph = random_connected_graph(n, 0.3, &mut rng)?;
    let decomp = EigenDecomposition::of_graph(&graph)?;
    let pair = random_pair(kind, &graph, &decomp, &mut rng)?;
    Ok(Fixture {
        name: format!("random-{}-{seed}", kind.label()),
        graph,
        decomp,
        pair,
    })
}

/// Ratio below which the eigenvalues count as having dropped.
pub const DROP_RATIO: f64 = 0.05;
/// Distance to `{0, cos(theta), sin(theta), 1}` counted as clustered.
pub const CLUSTER_TOL: f64 = 0.05;
/// Fraction of clustered eigenvalues expected for the projection pair.
pub const CLUSTER_FRACTION: f64 = 0.8;

/// Eigenvalue decay across a bandwidth index `d`, compared at `d - o` and
/// `d + o` with `o = ceil(n / 10)` (1-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayDrop {
    pub index: usize,
    pub offset: usize,
    pub before: f64,
    pub after: f64,
    pub pass: bool,
}

/// Checks `sigma_{d+o} < DROP_RATIO * sigma_{d-o}` for descending `sigma`.
///
/// A spatial filter supported on fewer than `bandwidth` nodes limits the rank
/// of `S`, so `d = min(bandwidth, support)`. Returns `None` when an index
/// falls outside the spectrum.
pub fn decay_drop(sigma: &DVector<f64>, bandwidth: usize, support: usize) -> Option<DecayDrop> {
    let n = sigma.len();
    let offset = n.div_ceil(10);
    let index = bandwidth.min(support);
    if index <= offset || index + offset > n {
        return None;
    }
    let before = sigma[index - offset - 1];
    let after = sigma[index + offset - 1];
    Some(DecayDrop {
        index,
        offset,
        before,
        after,
        pass: after < DROP_RATIO * before,
    })
}

/// Fraction of `values` within `tol` of `{0, cos(theta), sin(theta), 1}`.
pub fn cluster_fraction(values: &DVector<f64>, theta: f64, tol: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let targets = [0.0, theta.cos(), theta.sin(), 1.0];
    let near = values
        .iter()
        .filter(|v| targets.iter().any(|t| (*v - t).abs() <= tol))
        .count();
    near as f64 / values.len() as f64
}
