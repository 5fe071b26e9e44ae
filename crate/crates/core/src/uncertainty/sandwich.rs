use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point};
use crate::linalg::{self, Order};
use crate::operators::{LocalizationPoint, OperatorBundle};

/// Eigenvalues within this relative distance of `rho1` span the top eigenspace.
pub const TOP_EIGENSPACE_TOL: f64 = 1e-9;

/// Supporting line `cos(theta) t + sin(theta) s = rho1` with its boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportLine {
    pub theta: f64,
    pub rho1: f64,
    pub point: LocalizationPoint,
    /// Unit eigenvector of `R(theta)` realizing `point`.
    pub vector: DVector<f64>,
}

impl SupportLine {
    pub fn normal(&self) -> Point {
        [self.theta.cos(), self.theta.sin()]
    }

    /// `cos(theta) m + sin(theta) c - rho1`; nonpositive on the half-plane.
    pub fn excess(&self, p: Point) -> f64 {
        let [a, b] = self.normal();
        a * p[0] + b * p[1] - self.rho1
    }
}

/// Computes `rho1` and a top eigenvector of `R(theta)`.
///
/// When the top eigenvalue is repeated the boundary of the range contains a
/// segment on the line. The returned point is its counterclockwise endpoint:
/// the eigenvector maximizing `-sin(theta) m + cos(theta) c` within the top
/// eigenspace.
pub fn support_line(bundle: &OperatorBundle, theta: f64) -> Result<SupportLine> {
    let rot = bundle.rotated(theta)?;
    let values = &rot.spectrum.values;
    let rho1 = values[0];
    let cutoff = rho1 - TOP_EIGENSPACE_TOL * rho1.abs().max(1.0);
    let dim = values.iter().take_while(|&&v| v >= cutoff).count();
    let vector = if dim == 1 {
        rot.spectrum.vector(0)
    } else {
        let q = rot.spectrum.vectors.columns(0, dim).into_owned();
        let (sin, cos) = theta.sin_cos();
        let mut tangent = bundle.cg() * cos;
        for i in 0..bundle.n() {
            tangent[(i, i)] -= sin * bundle.f()[i];
        }
        let reduced = q.transpose() * tangent * &q;
        let (_, y) = linalg::symmetric_eigen(&reduced, Order::Descending)?;
        let v = q * y.column(0);
        let norm = v.norm();
        v / norm
    };
    let point = bundle.mean_values(&vector)?;
    Ok(SupportLine {
        theta,
        rho1,
        point,
        vector,
    })
}

/// Inner and outer polygons bracketing the numerical range.
#[derive(Debug, Clone)]
pub struct RangeApproximation {
    pub angles: Vec<f64>,
    pub lines: Vec<SupportLine>,
    /// Convex hull of the boundary points `p(theta_k)`.
    pub inner: ConvexPolygon,
    /// Intersection of the half-planes, as the hull of the vertices `q(theta_k)`.
    pub outer: ConvexPolygon,
    /// Raw outer vertices `q(theta_k)`, one per angle.
    pub outer_vertices: Vec<Point>,
    pub area_gap: f64,
    /// Largest distance from a point of the outer polygon to the inner one.
    pub hausdorff_gap: f64,
    /// Whether the requested tolerance was met (always true for a fixed schedule).
    pub converged: bool,
    /// `(K, area_gap)` after each refinement step.
    pub gap_history: Vec<(usize, f64)>,
}

impl RangeApproximation {
    pub fn k(&self) -> usize {
        self.angles.len()
    }

    pub fn boundary_points(&self) -> Vec<Point> {
        self.lines.iter().map(|l| l.point.as_array()).collect()
    }

    /// Membership in the intersection of all supporting half-planes.
    pub fn outer_contains(&self, p: Point, tol: f64) -> bool {
        self.lines.iter().all(|l| l.excess(p) <= tol)
    }

    /// Largest violation of any half-plane by `p` (nonpositive when inside).
    pub fn max_excess(&self, p: Point) -> f64 {
        self.lines
            .iter()
            .map(|l| l.excess(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Area of the triangle between consecutive boundary points and the outer
    /// vertex they share, for the interval ending at angle index `k`.
    fn local_discrepancy(&self, k: usize) -> f64 {
        let n = self.lines.len();
        let a = self.lines[(k + n - 1) % n].point.as_array();
        let b = self.lines[k].point.as_array();
        let q = self.outer_vertices[k];
        ((q[0] - a[0]) * (b[1] - a[1]) - (q[1] - a[1]) * (b[0] - a[0])).abs() / 2.0
    }
}

fn check_angles(angles: &[f64]) -> Result<()> {
    if angles.len() < 3 {
        return Err(Error::TooFewAngles(angles.len()));
    }
    if angles.iter().any(|a| !a.is_finite() || *a < 0.0 || *a >= TAU)
        || angles.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::UnsortedAngles);
    }
    let k = angles.len();
    for i in 0..k {
        let prev = angles[(i + k - 1) % k];
        let gap = if i == 0 { angles[0] + TAU - prev } else { angles[i] - prev };
        if gap >= PI {
            return Err(Error::AngleGapTooLarge {
                from: prev,
                to: angles[i],
            });
        }
    }
    Ok(())
}

/// Intersection of the supporting lines at indices `k - 1` and `k` (cyclic).
fn outer_vertex(prev: &SupportLine, cur: &SupportLine) -> Point {
    let mut delta = cur.theta - prev.theta;
    if delta <= 0.0 {
        delta += TAU;
    }
    let tau = (cur.rho1 * delta.cos() - prev.rho1) / delta.sin();
    let (sin, cos) = cur.theta.sin_cos();
    [cur.rho1 * cos - tau * sin, cur.rho1 * sin + tau * cos]
}

fn assemble(lines: Vec<SupportLine>, converged: bool, gap_history: Vec<(usize, f64)>) -> RangeApproximation {
    let k = lines.len();
    let outer_vertices: Vec<Point> = (0..k)
        .map(|i| outer_vertex(&lines[(i + k - 1) % k], &lines[i]))
        .collect();
    let inner = ConvexPolygon::hull(&lines.iter().map(|l| l.point.as_array()).collect::<Vec<_>>());
    let outer = ConvexPolygon::hull(&outer_vertices);
    let area_gap = (outer.area() - inner.area()).max(0.0);
    let hausdorff_gap = outer.directed_hausdorff(&inner);
    RangeApproximation {
        angles: lines.iter().map(|l| l.theta).collect(),
        lines,
        inner,
        outer,
        outer_vertices,
        area_gap,
        hausdorff_gap,
        converged,
        gap_history,
    }
}

fn check_region_size(bundle: &OperatorBundle) -> Result<()> {
    if bundle.n() < 3 {
        return Err(Error::TwoNodeRange);
    }
    Ok(())
}

/// Inner and outer polygons from the supporting lines at the given angles.
///
/// `angles` must be strictly increasing in `[0, 2 pi)`, with at least three
/// entries and every cyclic gap below `pi`.
pub fn algorithm1(bundle: &OperatorBundle, angles: &[f64]) -> Result<RangeApproximation> {
    check_region_size(bundle)?;
    check_angles(angles)?;
    let lines = angles
        .par_iter()
        .map(|&theta| support_line(bundle, theta))
        .collect::<Result<Vec<_>>>()?;
    let mut approx = assemble(lines, true, Vec::new());
    approx.gap_history.push((approx.k(), approx.area_gap));
    Ok(approx)
}

/// `k` equally spaced angles `2 pi j / k + offset`, reduced to `[0, 2 pi)` and sorted.
pub fn uniform_angles(k: usize, offset: f64) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..k)
        .map(|j| (TAU * j as f64 / k as f64 + offset).rem_euclid(TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Refines angles by bisection until the area gap is at most `tol` or
/// `k_max` angles are in use. Starts from `{0, pi/2, pi, 3 pi/2}` and always
/// splits the interval with the largest local gap (lowest index on ties).
///
/// Running out of angles is not an error: the result has `converged = false`.
pub fn adaptive_sandwich(bundle: &OperatorBundle, tol: f64, k_max: usize) -> Result<RangeApproximation> {
    check_region_size(bundle)?;
    if !(tol > 0.0) {
        return Err(Error::NonPositiveParameter { name: "tol", value: tol });
    }
    if k_max < 4 {
        return Err(Error::TooFewAngles(k_max));
    }
    let mut lines = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]
        .par_iter()
        .map(|&theta| support_line(bundle, theta))
        .collect::<Result<Vec<_>>>()?;
    let mut history = Vec::new();
    loop {
        let approx = assemble(lines, false, Vec::new());
        history.push((approx.k(), approx.area_gap));
        let done = approx.area_gap <= tol;
        if done || approx.k() >= k_max {
            return Ok(RangeApproximation {
                converged: done,
                gap_history: history,
                ..approx
            });
        }
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for k in 0..approx.k() {
            let v = approx.local_discrepancy(k);
            if v > best_val {
                best = k;
                best_val = v;
            }
        }
        let k = approx.k();
        let prev = approx.angles[(best + k - 1) % k];
        let cur = approx.angles[best];
        let mid = if best == 0 {
            ((prev + cur + TAU) / 2.0).rem_euclid(TAU)
        } else {
            (prev + cur) / 2.0
        };
        let line = support_line(bundle, mid)?;
        lines = approx.lines;
        let pos = lines.partition_point(|l| l.theta < mid);
        lines.insert(pos, line);
    }
}

/// Which operator's eigenvectors to scatter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScatterSource {
    S,
    Rotated(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    /// 0-based index in descending eigenvalue order.
    pub index: usize,
    pub point: LocalizationPoint,
    pub eigenvalue: f64,
}

/// Localization point of every eigenvector of `S` or `R(theta)`.
pub fn eigenvector_scatter(bundle: &OperatorBundle, which: ScatterSource) -> Result<Vec<ScatterPoint>> {
    let spectrum = match which {
        ScatterSource::S => bundle.s_spectrum()?,
        ScatterSource::Rotated(theta) => bundle.rotated(theta)?.spectrum,
    };
    (0..spectrum.n())
        .map(|k| {
            Ok(ScatterPoint {
                index: k,
                point: bundle.mean_values(&spectrum.vector(k))?,
                eigenvalue: spectrum.values[k],
            })
        })
        .collect()
}

const SAMPLE_CHUNK: usize = 1024;

/// A random direction: mostly Gaussian, with one in four draws supported on
/// one to three coordinates so that vertices of the range are approached.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let x = if rng.random_range(0..4) == 0 {
            let mut x = DVector::<f64>::zeros(n);
            let support = rng.random_range(1..=3.min(n));
            for _ in 0..support {
                x[rng.random_range(0..n)] = rng.sample(StandardNormal);
            }
            x
        } else {
            DVector::<f64>::from_fn(n, |_, _| rng.sample(StandardNormal))
        };
        let norm = x.norm();
        if norm > 0.0 {
            return x / norm;
        }
    }
}

/// `count` random unit signals, reproducible for a given `seed` regardless of
/// thread scheduling.
pub fn sample_signals(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            (0..len).map(move |_| random_direction(&mut rng, n)).collect::<Vec<_>>()
        })
        .collect()
}

/// Localization points of `count` random unit signals.
pub fn sample_admissible(bundle: &OperatorBundle, count: usize, seed: u64) -> Vec<LocalizationPoint> {
    let n = bundle.n();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let x = random_direction(&mut rng, n);
                let m = x.iter().zip(bundle.f().iter()).map(|(v, f)| f * v * v).sum();
                let c = (bundle.cg() * &x).dot(&x);
                out.push(LocalizationPoint { m, c });
            }
            out
        })
        .collect()
}

/// Orthonormal basis of the top eigenspace of a symmetric matrix.
pub fn top_eigenspace(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = linalg::symmetric_eigen(a, Order::Descending)?;
    let cutoff = values[0] - TOP_EIGENSPACE_TOL * values[0].abs().max(1.0);
    let dim = values.iter().take_while(|&&v| v >= cutoff).count();
    Ok(vectors.columns(0, dim).into_owned())
}
