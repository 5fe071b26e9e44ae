//! JSON documents for polygons and expansion reports.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::uncertainty::{CornerBounds, RangeApproximation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaCorners {
    pub fg: f64,
    #[serde(rename = "fg*")]
    pub fg_star: f64,
    #[serde(rename = "f*g")]
    pub f_star_g: f64,
    #[serde(rename = "f*g*")]
    pub f_star_g_star: f64,
}

impl From<&CornerBounds> for SigmaCorners {
    fn from(b: &CornerBounds) -> Self {
        Self {
            fg: b.fg.sigma1,
            fg_star: b.fg_star.sigma1,
            f_star_g: b.f_star_g.sigma1,
            f_star_g_star: b.f_star_g_star.sigma1,
        }
    }
}

/// Provenance of an exported polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportMeta {
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub pair: String,
    pub n: usize,
    pub converged: bool,
    pub hausdorff_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonExport {
    pub angles: Vec<f64>,
    pub rho1: Vec<f64>,
    pub boundary_points: Vec<Point>,
    pub inner: Vec<Point>,
    pub outer: Vec<Point>,
    pub area_gap: f64,
    pub sigma1_corners: SigmaCorners,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meta: Option<ExportMeta>,
}

impl PolygonExport {
    pub fn new(approx: &RangeApproximation, corners: &CornerBounds) -> Self {
        Self {
            angles: approx.angles.clone(),
            rho1: approx.lines.iter().map(|l| l.rho1).collect(),
            boundary_points: approx.boundary_points(),
            inner: approx.inner.vertices().to_vec(),
            outer: approx.outer.vertices().to_vec(),
            area_gap: approx.area_gap,
            sigma1_corners: corners.into(),
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: ExportMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polygon export serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
