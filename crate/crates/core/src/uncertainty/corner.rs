use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::FilterPair;
use crate::operators::{build_bundle, LocalizationPoint, OperatorBundle};
use crate::spectral::EigenDecomposition;

/// A corner bound with `sigma1` at or above `1 - VACUOUS_TOL` imposes nothing.
pub const VACUOUS_TOL: f64 = 1e-12;

/// Corner of the unit square bounded by one reflected filter pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    /// `(f, g)`, bounding the corner `(1, 1)`.
    FG,
    /// `(f, g*)`, bounding the corner `(1, 0)`.
    FGStar,
    /// `(f*, g)`, bounding the corner `(0, 1)`.
    FStarG,
    /// `(f*, g*)`, bounding the corner `(0, 0)`.
    FStarGStar,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::FG, Corner::FGStar, Corner::FStarG, Corner::FStarGStar];

    pub fn reflects_spatial(self) -> bool {
        matches!(self, Corner::FStarG | Corner::FStarGStar)
    }

    pub fn reflects_spectral(self) -> bool {
        matches!(self, Corner::FGStar | Corner::FStarGStar)
    }

    /// The corner of `[0,1]^2` this bound keeps points away from.
    pub fn vertex(self) -> [f64; 2] {
        [
            if self.reflects_spatial() { 0.0 } else { 1.0 },
            if self.reflects_spectral() { 0.0 } else { 1.0 },
        ]
    }

    /// Key used in exported JSON.
    pub fn key(self) -> &'static str {
        match self {
            Corner::FG => "fg",
            Corner::FGStar => "fg*",
            Corner::FStarG => "f*g",
            Corner::FStarGStar => "f*g*",
        }
    }

    /// Maps `(m, c)` into the coordinates `(t, s)` of this corner's bound.
    /// The map is an involution.
    pub fn to_local(self, m: f64, c: f64) -> (f64, f64) {
        (
            if self.reflects_spatial() { 1.0 - m } else { m },
            if self.reflects_spectral() { 1.0 - c } else { c },
        )
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// The curve `gamma(t) = (sqrt(t sigma1) + sqrt((1-t)(1-sigma1)))^2` for one corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaBound {
    pub sigma1: f64,
    pub corner: Corner,
}

impl GammaBound {
    pub fn new(sigma1: f64, corner: Corner) -> Self {
        Self { sigma1, corner }
    }

    pub fn is_vacuous(&self) -> bool {
        self.sigma1 >= 1.0 - VACUOUS_TOL
    }

    /// `1 - sigma1`, the amount of uncertainty this corner certifies.
    pub fn gap(&self) -> f64 {
        1.0 - self.sigma1
    }

    /// Evaluates `gamma(t)` for `t` in `[sigma1, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        gamma(self, t)
    }

    /// `samples` points of the curve in `(m, c)` coordinates, from
    /// `t = sigma1` to `t = 1`. Empty for vacuous corners.
    pub fn curve(&self, samples: usize) -> Vec<[f64; 2]> {
        if self.is_vacuous() || samples < 2 {
            return Vec::new();
        }
        let s1 = self.sigma1.max(0.0);
        (0..samples)
            .map(|i| {
                let t = s1 + (1.0 - s1) * i as f64 / (samples - 1) as f64;
                let s = gamma_unchecked(s1, t);
                let (m, c) = self.corner.to_local(t, s);
                [m, c]
            })
            .collect()
    }
}

fn gamma_unchecked(sigma1: f64, t: f64) -> f64 {
    let a = (t * sigma1).max(0.0).sqrt();
    let b = ((1.0 - t) * (1.0 - sigma1)).max(0.0).sqrt();
    (a + b).powi(2)
}

/// `gamma(t)` for `t` in `[sigma1, 1]`; errors when the bound is vacuous.
pub fn gamma(bound: &GammaBound, t: f64) -> Result<f64> {
    let s1 = bound.sigma1;
    if !s1.is_finite() || s1 >= 1.0 {
        return Err(Error::NoUncertainty(s1));
    }
    if !t.is_finite() || t < s1 || t > 1.0 {
        return Err(Error::GammaDomain { t, sigma1: s1 });
    }
    Ok(gamma_unchecked(s1, t))
}

/// The four corner bounds of `W_gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerBounds {
    pub fg: GammaBound,
    pub fg_star: GammaBound,
    pub f_star_g: GammaBound,
    pub f_star_g_star: GammaBound,
}

/// Outcome of one corner's conditional constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerCheck {
    pub corner: Corner,
    /// Whether `t s >= sigma1`, i.e. whether the constraint applies.
    pub active: bool,
    pub s: f64,
    /// `gamma(t)` when active and not vacuous.
    pub limit: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVerdict {
    pub checks: [CornerCheck; 4],
    pub pass: bool,
}

impl MembershipVerdict {
    pub fn failed_corners(&self) -> Vec<Corner> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.corner).collect()
    }
}

impl CornerBounds {
    /// Top eigenvalue of `S` for each of the four reflected filter pairs.
    pub fn from_bundle(bundle: &OperatorBundle) -> Result<Self> {
        let sigma = |corner: Corner| -> Result<GammaBound> {
            let b = bundle.reflected(corner.reflects_spatial(), corner.reflects_spectral())?;
            let top = b.s_spectrum()?.top().clamp(0.0, 1.0);
            Ok(GammaBound::new(top, corner))
        };
        Ok(Self {
            fg: sigma(Corner::FG)?,
            fg_star: sigma(Corner::FGStar)?,
            f_star_g: sigma(Corner::FStarG)?,
            f_star_g_star: sigma(Corner::FStarGStar)?,
        })
    }

    pub fn get(&self, corner: Corner) -> &GammaBound {
        match corner {
            Corner::FG => &self.fg,
            Corner::FGStar => &self.fg_star,
            Corner::FStarG => &self.f_star_g,
            Corner::FStarGStar => &self.f_star_g_star,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &GammaBound> {
        [&self.fg, &self.fg_star, &self.f_star_g, &self.f_star_g_star].into_iter()
    }

    pub fn all_vacuous(&self) -> bool {
        self.iter().all(GammaBound::is_vacuous)
    }

    /// Evaluates the four conditional constraints at `p`, allowing `s` to
    /// exceed `gamma(t)` by `tol`.
    pub fn check(&self, p: LocalizationPoint, tol: f64) -> MembershipVerdict {
        let checks = Corner::ALL.map(|corner| {
            let bound = self.get(corner);
            let (t, s) = corner.to_local(p.m, p.c);
            let active = t * s >= bound.sigma1;
            if !active || bound.is_vacuous() {
                return CornerCheck {
                    corner,
                    active,
                    s,
                    limit: None,
                    pass: true,
                };
            }
            let limit = gamma_unchecked(bound.sigma1, t.clamp(bound.sigma1, 1.0));
            CornerCheck {
                corner,
                active,
                s,
                limit: Some(limit),
                pass: s <= limit + tol,
            }
        });
        let pass = checks.iter().all(|c| c.pass);
        MembershipVerdict { checks, pass }
    }
}

/// Corner bounds for the pair on the graph with eigendecomposition `decomp`.
pub fn corner_bounds(decomp: &EigenDecomposition, pair: &FilterPair) -> Result<CornerBounds> {
    CornerBounds::from_bundle(&build_bundle(decomp, pair)?)
}

/// Membership of `p` in `W_gamma` with tolerance `tol`.
pub fn in_w_gamma(bounds: &CornerBounds, p: LocalizationPoint, tol: f64) -> MembershipVerdict {
    bounds.check(p, tol)
}
