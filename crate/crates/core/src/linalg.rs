//! Dense symmetric eigensolver and a few small matrix helpers.
//!
//! The solver is the classic two-stage scheme: Householder reduction to
//! tridiagonal form followed by the implicit-shift QL iteration, with the
//! orthogonal transformations accumulated into the eigenvector matrix.
//!
//! Outputs are made reproducible: within every cluster of (numerically)
//! repeated eigenvalues the basis is replaced by a canonical one that only
//! depends on the eigenspace, not on the rotation the iteration happened to
//! converge to, and every eigenvector is signed so that its first
//! significant component is positive.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigenvalues closer than this (relative to `max(1, |lambda|_max)`) are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-10;

/// Components with magnitude below this are skipped by the sign convention.
const SIGN_TOL: f64 = 1e-10;

const MAX_QL_ITERATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// Largest absolute difference `|a_ij - a_ji|`.
pub fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// `(A + A^T) / 2`.
pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in the requested order and the matching orthonormal
/// eigenvectors as columns. The input is symmetrized before solving.
pub fn symmetric_eigen(a: &DMatrix<f64>, order: Order) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSignal);
    }
    let n = rows;
    if n == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    let sym = symmetrize(a);
    let mut v: Vec<f64> = sym.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    ql_implicit(n, &mut v, &mut d, &mut e)?;

    let mut idx: Vec<usize> = (0..n).collect();
    match order {
        Order::Ascending => idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j))),
        Order::Descending => idx.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j))),
    }
    let values = DVector::from_iterator(n, idx.iter().map(|&i| d[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &src) in idx.iter().enumerate() {
        vectors
            .column_mut(col)
            .copy_from_slice(&v[src * n..(src + 1) * n]);
    }
    canonicalize_clusters(values.as_slice(), &mut vectors);
    Ok((values, vectors))
}

/// Householder reduction of the symmetric matrix stored column-major in `v`.
/// On return `d` holds the diagonal, `e[1..]` the subdiagonal, and `v` the
/// accumulated orthogonal transformation.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    // v[(row, col)] == v[row + col * n]
    let at = |r: usize, c: usize| r + c * n;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on the tridiagonal matrix `(d, e)`.
fn ql_implicit(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::EigenNoConvergence {
                        index: l,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Replaces the basis of every repeated-eigenvalue cluster by a canonical
/// one and applies the sign convention to every column.
///
/// The canonical basis is obtained by pivoted Gram-Schmidt on the columns of
/// the cluster projector `Q Q^T`, i.e. on the projections of the unit vectors
/// `e_1, e_2, ...`, always taking the longest remaining residual (lowest index
/// on ties). It depends only on the eigenspace.
pub fn canonicalize_clusters(values: &[f64], vectors: &mut DMatrix<f64>) {
    let n = values.len();
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let tol = CLUSTER_TOL * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[end - 1]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 {
            canonical_basis(vectors, start, end);
        }
        start = end;
    }
    for j in 0..vectors.ncols() {
        apply_sign_convention(vectors, j);
    }
}

fn canonical_basis(vectors: &mut DMatrix<f64>, start: usize, end: usize) {
    let n = vectors.nrows();
    let m = end - start;
    let q = vectors.columns(start, m).into_owned();
    let mut residual = &q * q.transpose();
    let mut norms: Vec<f64> = (0..n).map(|j| residual.column(j).norm_squared()).collect();
    for slot in 0..m {
        let best = norms.iter().cloned().fold(0.0f64, f64::max);
        let pick = norms
            .iter()
            .position(|&v| v >= best * (1.0 - 1e-8))
            .unwrap_or(0);
        let len = norms[pick].sqrt();
        if len <= 1e-12 {
            // The projector lost rank numerically; keep the solver's own vectors.
            return;
        }
        let basis = residual.column(pick) / len;
        for j in 0..n {
            let proj = basis.dot(&residual.column(j));
            if proj != 0.0 {
                residual.column_mut(j).axpy(-proj, &basis, 1.0);
            }
            norms[j] = residual.column(j).norm_squared();
        }
        norms[pick] = 0.0;
        vectors.column_mut(start + slot).copy_from(&basis);
    }
}

fn apply_sign_convention(vectors: &mut DMatrix<f64>, j: usize) {
    let first = vectors.column(j).iter().copied().find(|v| v.abs() > SIGN_TOL);
    if let Some(v) = first {
        if v < 0.0 {
            vectors.column_mut(j).neg_mut();
        }
    }
}

/// Spectral norm of a general square or rectangular matrix via one-sided
/// (Hestenes) Jacobi orthogonalization of its columns.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    let mut w = a.clone();
    let cols = w.ncols();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..w.nrows() {
                    let up = w[(k, p)];
                    let uq = w[(k, q)];
                    w[(k, p)] = c * up - s * uq;
                    w[(k, q)] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..cols)
        .map(|j| w.column(j).norm())
        .fold(0.0, f64::max)
}

/// Rayleigh quotient `<A x, x> / <x, x>`.
pub fn rayleigh(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    (a * x).dot(x) / x.norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &DMatrix<f64>, values: &DVector<f64>, vectors: &DMatrix<f64>) -> f64 {
        let recon = vectors * DMatrix::from_diagonal(values) * vectors.transpose();
        (a - recon).abs().max()
    }

    #[test]
    fn diagonal_matrix() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let (vals, vecs) = symmetric_eigen(&a, Order::Ascending).unwrap();
        assert_eq!(vals.as_slice(), &[-1.0, 2.0, 3.0]);
        assert!(residual(&a, &vals, &vecs) < 1e-14);
    }

    #[test]
    fn one_by_one_and_empty() {
        let a = DMatrix::from_element(1, 1, 0.7);
        let (vals, vecs) = symmetric_eigen(&a, Order::Descending).unwrap();
        assert_eq!(vals[0], 0.7);
        assert_eq!(vecs[(0, 0)], 1.0);
        let (vals, _) = symmetric_eigen(&DMatrix::zeros(0, 0), Order::Ascending).unwrap();
        assert_eq!(vals.len(), 0);
    }

    #[test]
    fn rejects_non_square() {
        let a = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            symmetric_eigen(&a, Order::Ascending),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn repeated_eigenvalue_basis_is_canonical() {
        // Block-diagonal matrix of two disjoint edges: eigenspaces for 0 and 2
        // are each two-dimensional.
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, -1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0, 1.0,
            ],
        );
        let (vals, vecs) = symmetric_eigen(&a, Order::Ascending).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[h, 0.0, h, 0.0, h, 0.0, -h, 0.0, 0.0, h, 0.0, h, 0.0, h, 0.0, -h],
        );
        assert!((vals[0]).abs() < 1e-14 && (vals[3] - 2.0).abs() < 1e-14);
        assert!((vecs - expected).abs().max() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_known_values() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 4.0, 5.0]);
        // singular values of [[3,0],[4,5]] are sqrt(45) and sqrt(5)
        assert!((spectral_norm(&a) - 45f64.sqrt()).abs() < 1e-12);
        assert_eq!(spectral_norm(&DMatrix::zeros(3, 3)), 0.0);
    }
}
