//! Laplacian eigendecomposition, graph Fourier transform and graph convolution.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{normalized_laplacian, Graph};
use crate::linalg::{self, Order};

/// Input asymmetry tolerated by [`eig_sym`] before it refuses the matrix.
pub const INPUT_SYMMETRY_TOL: f64 = 1e-10;

/// Ascending eigenvalues `lambda` and orthonormal eigenvectors `U` (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    /// Builds a decomposition from an explicitly given eigenbasis, checking it
    /// against `matrix`: `U` must be orthonormal and reproduce the matrix,
    /// both to `tol` in the max norm, and the values must be ascending.
    ///
    /// Useful when a repeated eigenvalue makes the basis a modelling choice.
    pub fn from_parts(
        matrix: &DMatrix<f64>,
        values: DVector<f64>,
        vectors: DMatrix<f64>,
        tol: f64,
    ) -> Result<Self> {
        let n = matrix.nrows();
        if values.len() != n || vectors.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: values.len(),
            });
        }
        if values.as_slice().windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidEigenbasis(
                "eigenvalues are not ascending".into(),
            ));
        }
        let ortho = (vectors.transpose() * &vectors - DMatrix::identity(n, n))
            .abs()
            .max();
        if ortho > tol {
            return Err(Error::InvalidEigenbasis(format!(
                "basis is not orthonormal (max deviation {ortho:e})"
            )));
        }
        let recon = &vectors * DMatrix::from_diagonal(&values) * vectors.transpose();
        let resid = (matrix - recon).abs().max();
        if resid > tol {
            return Err(Error::InvalidEigenbasis(format!(
                "basis does not reproduce the matrix (max residual {resid:e})"
            )));
        }
        Ok(Self { values, vectors })
    }

    /// Eigendecomposition of the normalized Laplacian of `g`.
    pub fn of_graph(g: &Graph) -> Result<Self> {
        eig_sym(&normalized_laplacian(g)?)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// The `k`-th eigenvector (0-based column index).
    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }

    /// `U diag(coeffs) U^T`.
    pub fn spectral_multiplier(&self, coeffs: &DVector<f64>) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (mut col, &c) in scaled.column_iter_mut().zip(coeffs.iter()) {
            col *= c;
        }
        linalg::symmetrize(&(scaled * self.vectors.transpose()))
    }

    /// The same eigenvalues with the transform matrix replaced by `U^T`.
    /// Used for operators acting on spectral-domain distributions.
    pub fn transposed(&self) -> Self {
        Self {
            values: self.values.clone(),
            vectors: self.vectors.transpose(),
        }
    }
}

/// Node-domain signal `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(pub DVector<f64>);

/// Spectral-domain coefficients `x_hat = U^T x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSignal(pub DVector<f64>);

impl Signal {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSignal);
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl SpectralSignal {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSignal);
        }
        Ok(Self(DVector::from_vec(coeffs)))
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues.
///
/// Ties are resolved deterministically: repeated eigenvalues get a canonical
/// basis and each eigenvector's first significant entry is positive.
pub fn eig_sym(l: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let (rows, cols) = l.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let asym = linalg::max_asymmetry(l);
    if asym > INPUT_SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let (values, vectors) = linalg::symmetric_eigen(l, Order::Ascending)?;
    Ok(EigenDecomposition { values, vectors })
}

fn check_len(decomp: &EigenDecomposition, len: usize) -> Result<()> {
    if decomp.n() != len {
        return Err(Error::DimensionMismatch {
            expected: decomp.n(),
            found: len,
        });
    }
    Ok(())
}

/// Graph Fourier transform `x_hat = U^T x`.
pub fn gft(decomp: &EigenDecomposition, x: &Signal) -> Result<SpectralSignal> {
    check_len(decomp, x.0.len())?;
    Ok(SpectralSignal(decomp.vectors.tr_mul(&x.0)))
}

/// Inverse transform `x = U x_hat`.
pub fn igft(decomp: &EigenDecomposition, x_hat: &SpectralSignal) -> Result<Signal> {
    check_len(decomp, x_hat.0.len())?;
    Ok(Signal(&decomp.vectors * &x_hat.0))
}

/// Graph convolution `x * y = U (x_hat . y_hat)`.
pub fn convolve(decomp: &EigenDecomposition, x: &Signal, y: &Signal) -> Result<Signal> {
    let xh = gft(decomp, x)?;
    let yh = gft(decomp, y)?;
    igft(decomp, &SpectralSignal(xh.0.component_mul(&yh.0)))
}
