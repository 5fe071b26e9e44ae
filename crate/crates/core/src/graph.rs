//! Undirected weighted graphs with a dense adjacency matrix.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Symmetry tolerance for adjacency matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Nonempty set of points with finite coordinates, all of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPointCloud)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::RaggedPointCloud {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedPointCloud {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Coordinate-wise mean of all points.
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.iter() {
            for (acc, v) in c.iter_mut().zip(p) {
                *acc += v;
            }
        }
        let n = self.len() as f64;
        c.iter_mut().for_each(|v| *v /= n);
        c
    }

    /// Index of the point closest to `target` (lowest index on ties).
    pub fn nearest(&self, target: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.iter().enumerate() {
            let d: f64 = p.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Points within euclidean distance `r` of point `center` (including it).
    pub fn ball(&self, center: usize, r: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.distance(center, i) <= r)
            .collect()
    }
}

/// Undirected graph `G = (V, E, A)` with a dense symmetric nonnegative adjacency.
///
/// Isolated nodes and disconnected graphs are representable; they are
/// rejected later by [`normalized_laplacian`] and [`geodesic`] respectively.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
    points: Option<PointCloud>,
}

impl Graph {
    /// Wraps an adjacency matrix after checking shape, sign, symmetry and the
    /// absence of self-loops.
    pub fn from_adjacency(adjacency: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = adjacency.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for j in 0..cols {
            if adjacency[(j, j)] != 0.0 {
                return Err(Error::SelfLoop(j));
            }
            for i in 0..rows {
                let w = adjacency[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidWeight { i, j, weight: w });
                }
                if (w - adjacency[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::AsymmetricAdjacency(i, j));
                }
            }
        }
        Ok(Self {
            adjacency,
            points: None,
        })
    }

    /// Attaches node coordinates (used for plotting and euclidean node sets).
    pub fn with_points(mut self, points: PointCloud) -> Result<Self> {
        if points.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: points.len(),
            });
        }
        self.points = Some(points);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn points(&self) -> Option<&PointCloud> {
        self.points.as_ref()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[(i, j)] > 0.0
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).filter_map(move |j| {
                let w = self.adjacency[(i, j)];
                (w > 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.adjacency[(i, j)] > 0.0)
    }

    pub fn degrees(&self) -> DegreeMatrix {
        DegreeMatrix {
            degrees: DVector::from_iterator(
                self.n(),
                self.adjacency.row_iter().map(|r| r.sum()),
            ),
        }
    }

    /// True when a breadth-first search from node 0 reaches every node.
    pub fn is_connected(&self) -> bool {
        self.n() > 0 && bfs(self, 0).iter().all(Option::is_some)
    }
}

/// Diagonal degree matrix `T`, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    pub degrees: DVector<f64>,
}

/// Hop-count distances from a center node.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicProfile {
    pub center: usize,
    pub dist: Vec<usize>,
    pub dmax: usize,
}

/// Unweighted graph with an edge `(i, j)` whenever `0 < |p_i - p_j| <= radius`.
pub fn radius_graph(points: &PointCloud, radius: f64) -> Result<Graph> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius(radius));
    }
    let n = points.len();
    let mut adjacency = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = points.distance(i, j);
            if d > 0.0 && d <= radius {
                adjacency[(i, j)] = 1.0;
                adjacency[(j, i)] = 1.0;
            }
        }
    }
    Ok(Graph {
        adjacency,
        points: Some(points.clone()),
    })
}

/// Graph on `n` nodes from an explicit list of weighted undirected edges.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Graph> {
    let mut adjacency = DMatrix::zeros(n, n);
    for &(i, j, w) in edges {
        for index in [i, j] {
            if index >= n {
                return Err(Error::NodeOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidWeight { i, j, weight: w });
        }
        if adjacency[(i, j)] != 0.0 {
            return Err(Error::DuplicateEdge(i.min(j), i.max(j)));
        }
        adjacency[(i, j)] = w;
        adjacency[(j, i)] = w;
    }
    Ok(Graph {
        adjacency,
        points: None,
    })
}

/// `L = I - T^{-1/2} A T^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    let degrees = g.degrees().degrees;
    if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedNode(i));
    }
    let inv_sqrt = degrees.map(|d| 1.0 / d.sqrt());
    let n = g.n();
    let a = g.adjacency();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let off = a[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
            l[(i, j)] = if i == j { 1.0 - off } else { -off };
        }
    }
    // Exact symmetry: the products above commute, but keep it explicit.
    for j in 0..n {
        for i in (j + 1)..n {
            let v = l[(i, j)];
            l[(j, i)] = v;
        }
    }
    Ok(l)
}

fn bfs(g: &Graph, center: usize) -> Vec<Option<usize>> {
    let n = g.n();
    let mut dist = vec![None; n];
    dist[center] = Some(0);
    let mut queue = VecDeque::from([center]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop-count shortest-path distances from `center`. Edge weights are ignored.
pub fn geodesic(g: &Graph, center: usize) -> Result<GeodesicProfile> {
    let n = g.n();
    if center >= n {
        return Err(Error::NodeOutOfRange { index: center, n });
    }
    let raw = bfs(g, center);
    let mut dist = Vec::with_capacity(n);
    for (v, d) in raw.into_iter().enumerate() {
        match d {
            Some(d) => dist.push(d),
            None => {
                return Err(Error::Disconnected {
                    center,
                    unreachable: v,
                })
            }
        }
    }
    let dmax = dist.iter().copied().max().unwrap_or(0);
    if dmax == 0 {
        // A single node has no other node to measure distance to.
        return Err(Error::Disconnected {
            center,
            unreachable: center,
        });
    }
    Ok(GeodesicProfile { center, dist, dmax })
}
