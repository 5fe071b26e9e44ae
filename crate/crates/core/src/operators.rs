//! Localization operators built from a filter pair.
//!
//! * `M_f = diag(f)` localizes in space,
//! * `C_g = U diag(g_hat) U^T` localizes in frequency,
//! * `S = C_{g^{1/2}} M_f C_{g^{1/2}}` is the space-frequency operator,
//! * `R(theta) = cos(theta) M_f + sin(theta) C_g` is the rotated operator whose
//!   top eigenpair gives a supporting line of the numerical range.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::filters::{FilterPair, FILTER_TOL};
use crate::linalg::{self, Order};
use crate::spectral::EigenDecomposition;

/// Whether the operators act on node signals or on spectral distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Graph,
    Spectral,
}

/// Pair `(m, c)` of expectation values of `M_f` and `C_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationPoint {
    pub m: f64,
    pub c: f64,
}

impl LocalizationPoint {
    pub fn new(m: f64, c: f64) -> Self {
        Self { m, c }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.m, self.c]
    }
}

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

/// Spectrum `sigma`, `psi` of the space-frequency operator `S`.
pub type SOperatorSpectrum = OperatorSpectrum;

impl OperatorSpectrum {
    pub fn of_symmetric(matrix: &DMatrix<f64>) -> Result<Self> {
        let (values, vectors) = linalg::symmetric_eigen(matrix, Order::Descending)?;
        Ok(Self { values, vectors })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn top(&self) -> f64 {
        self.values[0]
    }

    pub fn bottom(&self) -> f64 {
        self.values[self.n() - 1]
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }

    /// Expansion coefficients `v_k^T x`.
    pub fn coefficients(&self, x: &DVector<f64>) -> DVector<f64> {
        self.vectors.tr_mul(x)
    }

    /// Largest residual `|A v_k - value_k v_k|` over all eigenpairs.
    pub fn max_residual(&self, matrix: &DMatrix<f64>) -> f64 {
        (0..self.n())
            .map(|k| {
                let v = self.vectors.column(k);
                (matrix * v - v * self.values[k]).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `R(theta)` together with its full descending eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedOperator {
    pub theta: f64,
    pub matrix: DMatrix<f64>,
    pub spectrum: OperatorSpectrum,
}

impl RotatedOperator {
    pub fn rho1(&self) -> f64 {
        self.spectrum.top()
    }

    pub fn r_mean(&self, x: &DVector<f64>) -> Result<f64> {
        check_signal(x, self.matrix.nrows())?;
        Ok(linalg::rayleigh(&self.matrix, x))
    }
}

/// The four expressions for the top eigenvalue of `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaCharacterizations {
    /// `||S||`
    pub s_norm: f64,
    /// `||M_{f^1/2} C_{g^1/2}||^2`
    pub mc_squared: f64,
    /// `||C_{g^1/2} M_{f^1/2}||^2`
    pub cm_squared: f64,
    /// `||M_{f^1/2} C_g M_{f^1/2}||`
    pub mcm_norm: f64,
}

impl SigmaCharacterizations {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s_norm, self.mc_squared, self.cm_squared, self.mcm_norm]
    }

    pub fn max_discrepancy(&self) -> f64 {
        let a = self.as_array();
        let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// Dense matrices `M_f`, `C_g`, `C_{g^{1/2}}` and `S` for one filter pair.
#[derive(Debug, Clone)]
pub struct OperatorBundle {
    f: DVector<f64>,
    coeffs: DVector<f64>,
    basis: DMatrix<f64>,
    mf: DMatrix<f64>,
    cg: DMatrix<f64>,
    c_sqrt: DMatrix<f64>,
    s: DMatrix<f64>,
    pair: FilterPair,
    domain: Domain,
}

fn check_signal(x: &DVector<f64>, n: usize) -> Result<f64> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
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
    Ok(norm_sq)
}

/// `basis diag(coeffs) basis^T`, symmetrized.
fn multiplier(basis: &DMatrix<f64>, coeffs: &DVector<f64>) -> DMatrix<f64> {
    let mut scaled = basis.clone();
    for (mut col, &c) in scaled.column_iter_mut().zip(coeffs.iter()) {
        col *= c;
    }
    linalg::symmetrize(&(scaled * basis.transpose()))
}

/// `C^{1/2} diag(f) C^{1/2}`, symmetrized.
pub(crate) fn sandwich_operator(c_sqrt: &DMatrix<f64>, f: &DVector<f64>) -> DMatrix<f64> {
    let mut left = c_sqrt.clone();
    for (mut col, &fi) in left.column_iter_mut().zip(f.iter()) {
        col *= fi;
    }
    linalg::symmetrize(&(left * c_sqrt))
}

impl OperatorBundle {
    fn assemble(
        basis: DMatrix<f64>,
        f: DVector<f64>,
        coeffs: DVector<f64>,
        pair: FilterPair,
        domain: Domain,
    ) -> Result<Self> {
        let n = basis.nrows();
        if f.len() != n || coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if f.len() != n { f.len() } else { coeffs.len() },
            });
        }
        let mf = DMatrix::from_diagonal(&f);
        let cg = multiplier(&basis, &coeffs);
        let c_sqrt = multiplier(&basis, &coeffs.map(|c| c.max(0.0).sqrt()));
        let s = sandwich_operator(&c_sqrt, &f);
        Ok(Self {
            f,
            coeffs,
            basis,
            mf,
            cg,
            c_sqrt,
            s,
            pair,
            domain,
        })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn pair(&self) -> &FilterPair {
        &self.pair
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Spatial filter values (the diagonal of `M_f`).
    pub fn f(&self) -> &DVector<f64> {
        &self.f
    }

    /// Coefficients of `C_g` in the bundle's basis.
    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    /// The orthonormal basis diagonalizing `C_g`.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn mf(&self) -> &DMatrix<f64> {
        &self.mf
    }

    pub fn cg(&self) -> &DMatrix<f64> {
        &self.cg
    }

    pub fn c_sqrt(&self) -> &DMatrix<f64> {
        &self.c_sqrt
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// Coefficients of `C_g` outside `[0, 1]`. Only the spectral-domain
    /// construction can produce these; they are reported, never clamped in `C_g`.
    pub fn coefficient_violations(&self) -> Vec<(usize, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c < -FILTER_TOL || c > 1.0 + FILTER_TOL)
            .map(|(k, &c)| (k, c))
            .collect()
    }

    /// Builds `M_f`, `C_g`, `S` for arbitrary filter values on the same basis,
    /// e.g. reflected filters.
    pub fn with_values(&self, f: DVector<f64>, coeffs: DVector<f64>) -> Result<Self> {
        Self::assemble(self.basis.clone(), f, coeffs, self.pair.clone(), self.domain)
    }

    /// Bundle for `(f*, g)`, `(f, g*)` or `(f*, g*)` where `f* = 1 - f` and
    /// `g* = 1 - g_hat` (the reflection acts on the spectral coefficients).
    pub fn reflected(&self, spatial: bool, spectral: bool) -> Result<Self> {
        let mut pair = self.pair.clone();
        if spatial {
            pair.spatial = pair.spatial.reflect();
        }
        if spectral {
            pair.spectral = pair.spectral.reflect();
        }
        let coeffs = match self.domain {
            Domain::Graph => pair.spectral.values().clone(),
            Domain::Spectral => self.basis.tr_mul(pair.spectral.values()),
        };
        Self::assemble(
            self.basis.clone(),
            pair.spatial.values().clone(),
            coeffs,
            pair,
            self.domain,
        )
    }

    pub fn mean_values(&self, x: &DVector<f64>) -> Result<LocalizationPoint> {
        let norm_sq = check_signal(x, self.n())?;
        let m = x.iter().zip(self.f.iter()).map(|(v, f)| f * v * v).sum::<f64>() / norm_sq;
        let c = (&self.cg * x).dot(x) / norm_sq;
        Ok(LocalizationPoint { m, c })
    }

    pub fn s_mean(&self, x: &DVector<f64>) -> Result<f64> {
        check_signal(x, self.n())?;
        Ok(linalg::rayleigh(&self.s, x))
    }

    pub fn rotated_matrix(&self, theta: f64) -> DMatrix<f64> {
        let (sin, cos) = theta.sin_cos();
        let mut r = &self.cg * sin;
        for i in 0..self.n() {
            r[(i, i)] += cos * self.f[i];
        }
        r
    }

    pub fn rotated(&self, theta: f64) -> Result<RotatedOperator> {
        let matrix = self.rotated_matrix(theta);
        let spectrum = OperatorSpectrum::of_symmetric(&matrix)?;
        Ok(RotatedOperator {
            theta,
            matrix,
            spectrum,
        })
    }

    pub fn s_spectrum(&self) -> Result<SOperatorSpectrum> {
        OperatorSpectrum::of_symmetric(&self.s)
    }

    /// `(var[S](x), var[R(theta)](x))`.
    pub fn variances(&self, rot: &RotatedOperator, x: &DVector<f64>) -> Result<(f64, f64)> {
        let norm_sq = check_signal(x, self.n())?;
        let var = |a: &DMatrix<f64>| {
            let mean = a.dot(&(x * x.transpose())) / norm_sq;
            let centered = a * x - x * mean;
            centered.norm_squared() / norm_sq
        };
        Ok((var(&self.s), var(&rot.matrix)))
    }

    pub fn sigma1_characterizations(&self) -> Result<SigmaCharacterizations> {
        let top_abs = |a: &DMatrix<f64>| -> Result<f64> {
            let (vals, _) = linalg::symmetric_eigen(a, Order::Descending)?;
            Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
        };
        let f_sqrt = self.f.map(|v| v.max(0.0).sqrt());
        let mut mc = self.c_sqrt.clone();
        for (i, mut row) in mc.row_iter_mut().enumerate() {
            row *= f_sqrt[i];
        }
        let cm = mc.transpose();
        let mut mcm = self.cg.clone();
        for j in 0..self.n() {
            for i in 0..self.n() {
                mcm[(i, j)] *= f_sqrt[i] * f_sqrt[j];
            }
        }
        Ok(SigmaCharacterizations {
            s_norm: top_abs(&self.s)?,
            mc_squared: linalg::spectral_norm(&mc).powi(2),
            cm_squared: linalg::spectral_norm(&cm).powi(2),
            mcm_norm: top_abs(&mcm)?,
        })
    }
}

/// Operators for node signals: `M_f = diag(f)`, `C_g = U diag(g_hat) U^T`.
pub fn build_bundle(decomp: &EigenDecomposition, pair: &FilterPair) -> Result<OperatorBundle> {
    if pair.n() != decomp.n() {
        return Err(Error::DimensionMismatch {
            expected: decomp.n(),
            found: pair.n(),
        });
    }
    OperatorBundle::assemble(
        decomp.vectors().clone(),
        pair.spatial.values().clone(),
        pair.spectral.values().clone(),
        pair.clone(),
        Domain::Graph,
    )
}

/// Operators for spectral distributions `x_hat`: the spatial filter of the
/// pair is read as `f_hat` on the spectrum and the convolution uses the
/// coefficients `U^T g_hat`, giving `C = U diag(U^T g_hat) U^T`.
pub fn dual_bundle(decomp: &EigenDecomposition, pair: &FilterPair) -> Result<OperatorBundle> {
    if pair.n() != decomp.n() {
        return Err(Error::DimensionMismatch {
            expected: decomp.n(),
            found: pair.n(),
        });
    }
    let coeffs = decomp.vectors().tr_mul(pair.spectral.values());
    OperatorBundle::assemble(
        decomp.vectors().clone(),
        pair.spatial.values().clone(),
        coeffs,
        pair.clone(),
        Domain::Spectral,
    )
}
