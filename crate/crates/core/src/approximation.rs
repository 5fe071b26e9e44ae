//! Truncated eigenbasis expansions with a-priori error bounds, and the
//! spectral distribution `mu_k(x) = (psi_k^T x)^2`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::OperatorSpectrum;

/// Result of expanding a signal in a subset of eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    /// Kept eigenvector indices (0-based, descending eigenvalue order).
    pub kept: Vec<usize>,
    #[serde(skip)]
    pub reconstruction: DVector<f64>,
    pub actual_error_sq: f64,
    pub bound: f64,
    /// Rayleigh quotient of the operator at `x`.
    pub mean: f64,
    pub variance: f64,
}

impl ExpansionReport {
    pub fn bound_holds(&self, tol: f64) -> bool {
        !self.bound.is_finite() || self.actual_error_sq <= self.bound + tol
    }
}

/// Probability distribution of a unit signal over the eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    pub mu: DVector<f64>,
    /// Set when the input was not a unit vector and got normalized.
    pub normalized: bool,
}

impl SpectralDistribution {
    pub fn total(&self) -> f64 {
        self.mu.sum()
    }

    pub fn mean(&self, values: &DVector<f64>) -> f64 {
        self.mu.dot(values)
    }

    pub fn variance(&self, values: &DVector<f64>) -> f64 {
        let mean = self.mean(values);
        self.mu
            .iter()
            .zip(values.iter())
            .map(|(m, v)| m * (v - mean).powi(2))
            .sum()
    }
}

struct Expansion {
    coeffs: DVector<f64>,
    norm_sq: f64,
    mean: f64,
    variance: f64,
}

fn expand(spectrum: &OperatorSpectrum, x: &DVector<f64>) -> Result<Expansion> {
    if x.len() != spectrum.n() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.n(),
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSignal);
    }
    let norm_sq = x.norm_squared();
    if norm_sq == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let coeffs = spectrum.coefficients(x);
    let mu = coeffs.map(|a| a * a / norm_sq);
    let mean = mu.dot(&spectrum.values);
    let variance = mu
        .iter()
        .zip(spectrum.values.iter())
        .map(|(m, v)| m * (v - mean).powi(2))
        .sum();
    Ok(Expansion {
        coeffs,
        norm_sq,
        mean,
        variance,
    })
}

fn report(
    spectrum: &OperatorSpectrum,
    x: &DVector<f64>,
    e: &Expansion,
    kept: Vec<usize>,
    bound: f64,
) -> ExpansionReport {
    let mut reconstruction = DVector::zeros(x.len());
    for &k in &kept {
        reconstruction += spectrum.vectors.column(k) * e.coeffs[k];
    }
    let actual_error_sq = (x - &reconstruction).norm_squared();
    ExpansionReport {
        kept,
        reconstruction,
        actual_error_sq,
        bound,
        mean: e.mean,
        variance: e.variance,
    }
}

/// Keeps eigenvectors with eigenvalue `>= s`; the discarded energy is at most
/// `(top - mean) / (top - s) * |x|^2`.
pub fn truncate_by_threshold(
    spectrum: &OperatorSpectrum,
    x: &DVector<f64>,
    s: f64,
) -> Result<ExpansionReport> {
    let e = expand(spectrum, x)?;
    let top = spectrum.top();
    if !(s < top) {
        return Err(Error::ThresholdTooLarge { s, top });
    }
    let kept = (0..spectrum.n())
        .filter(|&k| spectrum.values[k] >= s)
        .collect();
    let bound = (top - e.mean).max(0.0) / (top - s) * e.norm_sq;
    Ok(report(spectrum, x, &e, kept, bound))
}

/// Keeps eigenvectors with eigenvalue in `[mean - a, mean + a]`; the
/// discarded energy is at most `variance / a^2 * |x|^2`.
pub fn truncate_by_interval(
    spectrum: &OperatorSpectrum,
    x: &DVector<f64>,
    a: f64,
) -> Result<ExpansionReport> {
    if !(a > 0.0) {
        return Err(Error::NonPositiveParameter { name: "a", value: a });
    }
    let e = expand(spectrum, x)?;
    let kept = (0..spectrum.n())
        .filter(|&k| (spectrum.values[k] - e.mean).abs() <= a)
        .collect();
    let bound = e.variance / (a * a) * e.norm_sq;
    Ok(report(spectrum, x, &e, kept, bound))
}

pub fn spectral_distribution(
    spectrum: &OperatorSpectrum,
    x: &DVector<f64>,
) -> Result<SpectralDistribution> {
    let e = expand(spectrum, x)?;
    Ok(SpectralDistribution {
        mu: e.coeffs.map(|a| a * a / e.norm_sq),
        normalized: (e.norm_sq - 1.0).abs() > 1e-12,
    })
}
