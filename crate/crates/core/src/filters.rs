//! Spatial and spectral filter families.
//!
//! A spatial filter `f` lives on the nodes, a spectral filter `g_hat` on the
//! Laplacian eigenvalues in ascending order. Both take values in `[0, 1]` and
//! reach 1 somewhere. Frequency index sets are 1-based (`1..=n`), node sets
//! are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::graph::GeodesicProfile;

/// Tolerance for the range and sup-norm checks.
pub const FILTER_TOL: f64 = 1e-12;

fn check_values(values: &[f64], require_sup_one: bool) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < -FILTER_TOL || value > 1.0 + FILTER_TOL {
            return Err(Error::FilterOutOfRange { index, value });
        }
    }
    if require_sup_one {
        let sup = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if (sup - 1.0).abs() > FILTER_TOL {
            return Err(Error::FilterSupNorm(sup));
        }
    }
    Ok(())
}

macro_rules! filter_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(DVector<f64>);

        impl $name {
            /// Validates `0 <= v <= 1` entrywise and `max v = 1`.
            pub fn new(values: Vec<f64>) -> Result<Self> {
                check_values(&values, true)?;
                Ok(Self(DVector::from_vec(values)))
            }

            /// Wraps the values without any check; see [`validate`].
            pub fn from_values_unchecked(values: Vec<f64>) -> Self {
                Self(DVector::from_vec(values))
            }

            pub fn values(&self) -> &DVector<f64> {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Entrywise `1 - v`. The result generally violates the sup-norm
            /// condition; it is meant for corner bounds only.
            pub fn reflect(&self) -> Self {
                Self(self.0.map(|v| 1.0 - v))
            }

            /// Entrywise square root (clamped at 0).
            pub fn sqrt(&self) -> DVector<f64> {
                self.0.map(|v| v.max(0.0).sqrt())
            }
        }
    };
}

filter_type!(
    /// Spatial filter `f` on the nodes.
    SpatialFilter
);
filter_type!(
    /// Spectral filter `g_hat` indexed by ascending Laplacian eigenvalue.
    SpectralFilter
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    ProjectionProjection,
    DistanceProjection,
    ModifiedDistanceProjection,
    DistanceLaplace,
    LaplaceLaplace,
    Custom,
}

impl PairKind {
    pub const ALL: [PairKind; 6] = [
        PairKind::ProjectionProjection,
        PairKind::DistanceProjection,
        PairKind::ModifiedDistanceProjection,
        PairKind::DistanceLaplace,
        PairKind::LaplaceLaplace,
        PairKind::Custom,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PairKind::ProjectionProjection => "projection-projection",
            PairKind::DistanceProjection => "distance-projection",
            PairKind::ModifiedDistanceProjection => "modified-distance-projection",
            PairKind::DistanceLaplace => "distance-laplace",
            PairKind::LaplaceLaplace => "laplace-laplace",
            PairKind::Custom => "custom",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == s)
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub spatial: SpatialFilter,
    pub spectral: SpectralFilter,
    pub kind: PairKind,
}

impl FilterPair {
    pub fn new(spatial: SpatialFilter, spectral: SpectralFilter, kind: PairKind) -> Result<Self> {
        if spatial.len() != spectral.len() {
            return Err(Error::DimensionMismatch {
                expected: spatial.len(),
                found: spectral.len(),
            });
        }
        Ok(Self {
            spatial,
            spectral,
            kind,
        })
    }

    pub fn n(&self) -> usize {
        self.spatial.len()
    }
}

/// `f = chi_A` for a 0-based node set `A`.
pub fn projection_spatial(n: usize, nodes: &BTreeSet<usize>) -> Result<SpatialFilter> {
    if nodes.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut f = vec![0.0; n];
    for &i in nodes {
        if i >= n {
            return Err(Error::NodeOutOfRange { index: i, n });
        }
        f[i] = 1.0;
    }
    SpatialFilter::new(f)
}

fn indicator_of_band(n: usize, band: &BTreeSet<usize>) -> Result<Vec<f64>> {
    if band.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut g = vec![0.0; n];
    for &k in band {
        if k == 0 || k > n {
            return Err(Error::FrequencyOutOfRange { index: k, n });
        }
        g[k - 1] = 1.0;
    }
    Ok(g)
}

/// `g_hat = chi_B` for a 1-based frequency set `B`.
pub fn projection_spectral(n: usize, band: &BTreeSet<usize>) -> Result<SpectralFilter> {
    SpectralFilter::new(indicator_of_band(n, band)?)
}

/// The band `{1, ..., bandwidth}` of the lowest frequencies.
pub fn lowpass_band(bandwidth: usize) -> BTreeSet<usize> {
    (1..=bandwidth).collect()
}

/// `f(v) = 1 - (d_w(v) / d_w^max)^alpha`.
pub fn distance_spatial(profile: &GeodesicProfile, alpha: f64) -> Result<SpatialFilter> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::NonPositiveParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let dmax = profile.dmax as f64;
    let f = profile
        .dist
        .iter()
        .map(|&d| 1.0 - (d as f64 / dmax).powf(alpha))
        .collect();
    SpatialFilter::new(f)
}

fn clamp_eigenvalues(lambda: &DVector<f64>) -> impl Iterator<Item = f64> + '_ {
    lambda.iter().map(|l| l.clamp(0.0, 2.0))
}

/// `g_hat_k = 1 - lambda_k / 2`, eigenvalues clamped to `[0, 2]`.
pub fn laplace_spectral(lambda: &DVector<f64>) -> Result<SpectralFilter> {
    SpectralFilter::new(clamp_eigenvalues(lambda).map(|l| 1.0 - l / 2.0).collect())
}

/// `g_hat_k = chi_B(k) (1 - (lambda_k / 2)^beta)`.
///
/// If the band misses the lowest frequency the maximum can drop below one;
/// the result is then divided by its maximum.
pub fn smoothed_bandlimit(
    lambda: &DVector<f64>,
    band: &BTreeSet<usize>,
    beta: f64,
) -> Result<SpectralFilter> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::NonPositiveParameter {
            name: "beta",
            value: beta,
        });
    }
    let chi = indicator_of_band(lambda.len(), band)?;
    let mut g: Vec<f64> = clamp_eigenvalues(lambda)
        .zip(chi)
        .map(|(l, c)| c * (1.0 - (l / 2.0).powf(beta)))
        .collect();
    let max = g.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::ZeroFilter);
    }
    if (max - 1.0).abs() > FILTER_TOL {
        g.iter_mut().for_each(|v| *v /= max);
    }
    SpectralFilter::new(g)
}

/// Report on a filter pair. Never fails; inspect [`ValidationReport::is_valid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub spatial_out_of_range: Vec<usize>,
    pub spectral_out_of_range: Vec<usize>,
    pub spatial_sup: f64,
    pub spectral_sup: f64,
    /// Multiplicity of the eigenvalue 1 of `M_f` (entries equal to 1).
    pub spatial_top_multiplicity: usize,
    /// Multiplicity of the eigenvalue 1 of `C_g` (coefficients equal to 1).
    pub spectral_top_multiplicity: usize,
}

impl ValidationReport {
    pub fn sup_norm_ok(&self) -> bool {
        (self.spatial_sup - 1.0).abs() <= FILTER_TOL && (self.spectral_sup - 1.0).abs() <= FILTER_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.spatial_out_of_range.is_empty() && self.spectral_out_of_range.is_empty() && self.sup_norm_ok()
    }

    /// Both top eigenvalues simple: the hypothesis guaranteeing `sigma1 < 1`.
    pub fn top_eigenvalues_simple(&self) -> bool {
        self.is_valid() && self.spatial_top_multiplicity == 1 && self.spectral_top_multiplicity == 1
    }
}

fn inspect(values: &DVector<f64>) -> (Vec<usize>, f64, usize) {
    let out = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| !v.is_finite() || v < -FILTER_TOL || v > 1.0 + FILTER_TOL)
        .map(|(i, _)| i)
        .collect();
    let sup = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mult = values.iter().filter(|&&v| (v - 1.0).abs() <= FILTER_TOL).count();
    (out, sup, mult)
}

pub fn validate(pair: &FilterPair) -> ValidationReport {
    validate_values(pair.spatial.values(), pair.spectral.values())
}

pub fn validate_values(f: &DVector<f64>, g_hat: &DVector<f64>) -> ValidationReport {
    let (spatial_out_of_range, spatial_sup, spatial_top_multiplicity) = inspect(f);
    let (spectral_out_of_range, spectral_sup, spectral_top_multiplicity) = inspect(g_hat);
    ValidationReport {
        spatial_out_of_range,
        spectral_out_of_range,
        spatial_sup,
        spectral_sup,
        spatial_top_multiplicity,
        spectral_top_multiplicity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    fn approx(a: &DVector<f64>, b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    fn path_profile() -> GeodesicProfile {
        GeodesicProfile {
            center: 0,
            dist: vec![0, 1, 2, 3],
            dmax: 3,
        }
    }

    #[test]
    fn projection_filters() {
        assert!(approx(projection_spatial(4, &set(&[0, 2])).unwrap().values(), &[1.0, 0.0, 1.0, 0.0]));
        assert!(approx(projection_spatial(4, &set(&[0, 1])).unwrap().values(), &[1.0, 1.0, 0.0, 0.0]));
        assert!(approx(projection_spatial(3, &set(&[0, 1, 2])).unwrap().values(), &[1.0; 3]));
        assert!(approx(projection_spectral(4, &set(&[1, 3])).unwrap().values(), &[1.0, 0.0, 1.0, 0.0]));
        assert!(approx(projection_spectral(4, &set(&[3])).unwrap().values(), &[0.0, 0.0, 1.0, 0.0]));
        assert_eq!(projection_spatial(4, &set(&[])), Err(Error::EmptyIndexSet));
        assert_eq!(projection_spectral(4, &set(&[])), Err(Error::EmptyIndexSet));
        assert_eq!(
            projection_spectral(4, &set(&[0])),
            Err(Error::FrequencyOutOfRange { index: 0, n: 4 })
        );
    }

    #[test]
    fn distance_filters() {
        let p = path_profile();
        assert!(approx(distance_spatial(&p, 1.0).unwrap().values(), &[1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0]));
        assert!(approx(distance_spatial(&p, 2.0).unwrap().values(), &[1.0, 8.0 / 9.0, 5.0 / 9.0, 0.0]));
        let k4 = GeodesicProfile {
            center: 2,
            dist: vec![1, 1, 0, 1],
            dmax: 1,
        };
        assert!(approx(distance_spatial(&k4, 1.0).unwrap().values(), &[0.0, 0.0, 1.0, 0.0]));
        assert!(matches!(
            distance_spatial(&p, 0.0),
            Err(Error::NonPositiveParameter { name: "alpha", .. })
        ));
    }

    #[test]
    fn laplace_filters() {
        let k4 = DVector::from_vec(vec![0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0]);
        assert!(approx(laplace_spectral(&k4).unwrap().values(), &[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]));
        let bip = DVector::from_vec(vec![0.0, 0.0, 2.0, 2.0]);
        assert!(approx(laplace_spectral(&bip).unwrap().values(), &[1.0, 1.0, 0.0, 0.0]));
        // tiny negative / overshooting eigenvalues from rounding are clamped
        let noisy = DVector::from_vec(vec![-1e-16, 1.0, 2.0 + 1e-15]);
        assert!(approx(laplace_spectral(&noisy).unwrap().values(), &[1.0, 0.5, 0.0]));
    }

    #[test]
    fn smoothed_band() {
        let k4 = DVector::from_vec(vec![0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0]);
        let g = smoothed_bandlimit(&k4, &set(&[1, 2]), 2.0).unwrap();
        assert!(approx(g.values(), &[1.0, 5.0 / 9.0, 0.0, 0.0]));
        let lam = DVector::from_vec(vec![0.0, 1.0, 2.0]);
        let g = smoothed_bandlimit(&lam, &set(&[1, 3]), 2.0).unwrap();
        assert!(approx(g.values(), &[1.0, 0.0, 0.0]));
        // band without the lowest frequency is renormalized
        let g = smoothed_bandlimit(&lam, &set(&[2]), 1.0).unwrap();
        assert!(approx(g.values(), &[0.0, 1.0, 0.0]));
        assert_eq!(smoothed_bandlimit(&lam, &set(&[3]), 1.0), Err(Error::ZeroFilter));
        assert!(smoothed_bandlimit(&lam, &set(&[1]), -1.0).is_err());
    }

    #[test]
    fn reflection() {
        let f = SpatialFilter::new(vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(approx(f.reflect().values(), &[0.0, 1.0, 0.0, 1.0]));
        let ones = SpatialFilter::new(vec![1.0; 3]).unwrap();
        assert!(approx(ones.reflect().values(), &[0.0; 3]));
        let d = distance_spatial(&path_profile(), 1.0).unwrap();
        assert!(approx(d.reflect().values(), &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]));
    }

    #[test]
    fn validation_reports() {
        let f = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
        let r = validate_values(&f, &f);
        assert!(r.is_valid());
        assert_eq!(r.spatial_top_multiplicity, 2);
        assert!(!r.top_eigenvalues_simple());

        let f = DVector::from_vec(vec![1.0, 0.5, 0.2]);
        let g = DVector::from_vec(vec![0.1, 1.0, 0.3]);
        let r = validate_values(&f, &g);
        assert!(r.top_eigenvalues_simple());

        let f = DVector::from_vec(vec![0.5, 0.2]);
        let r = validate_values(&f, &DVector::from_vec(vec![1.0, 0.0]));
        assert!(!r.sup_norm_ok());
        assert!(!r.is_valid());

        let f = DVector::from_vec(vec![1.5, -0.2]);
        let r = validate_values(&f, &DVector::from_vec(vec![1.0, 0.0]));
        assert_eq!(r.spatial_out_of_range, vec![0, 1]);
    }

    #[test]
    fn constructors_enforce_invariants() {
        assert!(matches!(SpatialFilter::new(vec![0.5, 0.2]), Err(Error::FilterSupNorm(_))));
        assert!(matches!(
            SpectralFilter::new(vec![1.0, 1.2]),
            Err(Error::FilterOutOfRange { index: 1, .. })
        ));
        assert_eq!(PairKind::from_label("distance-laplace"), Some(PairKind::DistanceLaplace));
    }
}
