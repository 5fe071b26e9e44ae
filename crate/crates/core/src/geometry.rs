//! Planar convex polygons in the `(m, c)` plane.

use serde::{Deserialize, Serialize};

/// Vertices closer than this are merged when building hulls.
pub const DEDUP_TOL: f64 = 1e-10;

pub type Point = [f64; 2];

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len_sq = d[0] * d[0] + d[1] * d[1];
    if len_sq == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len_sq).clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

/// Convex polygon with counterclockwise vertices and no repeated points.
///
/// Degenerate hulls are allowed: a single point or a segment (two vertices).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Convex hull of `points` (Andrew's monotone chain). Collinear boundary
    /// points are dropped.
    pub fn hull(points: &[Point]) -> Self {
        let mut pts: Vec<Point> = points
            .iter()
            .copied()
            .filter(|p| p[0].is_finite() && p[1].is_finite())
            .collect();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut unique: Vec<Point> = Vec::with_capacity(pts.len());
        for p in pts {
            if !unique.iter().rev().take(8).any(|q| dist(*q, p) <= DEDUP_TOL) {
                unique.push(p);
            }
        }
        if unique.len() <= 2 {
            if unique.len() == 2 && dist(unique[0], unique[1]) <= DEDUP_TOL {
                unique.pop();
            }
            return Self { vertices: unique };
        }
        let mut hull: Vec<Point> = Vec::with_capacity(2 * unique.len());
        for &p in &unique {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        let lower_len = hull.len() + 1;
        for &p in unique.iter().rev().skip(1) {
            while hull.len() >= lower_len
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        let mut vertices: Vec<Point> = Vec::with_capacity(hull.len());
        for p in hull {
            if vertices.last().map_or(true, |q| dist(*q, p) > DEDUP_TOL) {
                vertices.push(p);
            }
        }
        while vertices.len() > 1 && dist(vertices[0], *vertices.last().unwrap()) <= DEDUP_TOL {
            vertices.pop();
        }
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shoelace area (zero for points and segments).
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            twice += a[0] * b[1] - a[1] * b[0];
        }
        twice / 2.0
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        match n {
            0 | 1 => 0.0,
            2 => 2.0 * dist(self.vertices[0], self.vertices[1]),
            _ => (0..n)
                .map(|i| dist(self.vertices[i], self.vertices[(i + 1) % n]))
                .sum(),
        }
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        match n {
            0 => f64::INFINITY,
            1 => dist(p, self.vertices[0]),
            2 => segment_distance(p, self.vertices[0], self.vertices[1]),
            _ => {
                if self.contains_strict(p) {
                    return 0.0;
                }
                (0..n)
                    .map(|i| segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn contains_strict(&self, p: Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0.0)
    }

    /// Whether `p` lies in the polygon up to distance `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Largest distance from a vertex of `self` to `other`. For convex sets this
    /// is the directed Hausdorff distance `sup_{x in self} d(x, other)`.
    pub fn directed_hausdorff(&self, other: &ConvexPolygon) -> f64 {
        self.vertices
            .iter()
            .map(|&v| other.distance(v))
            .fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &ConvexPolygon) -> f64 {
        self.directed_hausdorff(other)
            .max(other.directed_hausdorff(self))
    }

    /// Whether every vertex of `other` lies in `self` within `tol`.
    pub fn contains_polygon(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.directed_hausdorff(self) <= tol
    }

    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), p| {
            ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
        }))
    }
}
