//! Determinants, inverses, singular values and symmetric eigenvalues.
//!
//! Everything here targets matrices of dimension at most [`MAX_DIM`]. Small
//! determinants (up to 3x3) use closed forms; larger ones go through LU with
//! partial pivoting. The SVD is one-sided Jacobi, which is accurate to working
//! precision for the tiny sizes this crate needs.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};

/// Largest dense dimension the kernel accepts.
pub const MAX_DIM: usize = 16;

/// Default cut below which `|det|` counts as singular.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 100;

fn require_square(m: &RealMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::dims(
            "square matrix",
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    if m.rows() > MAX_DIM {
        return Err(Error::dims(format!("dimension <= {MAX_DIM}"), m.rows()));
    }
    Ok(m.rows())
}

pub fn determinant(m: &RealMatrix) -> Result<f64> {
    let n = require_square(m)?;
    Ok(match n {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => det3(m),
        _ => lu_determinant(m),
    })
}

fn det3(m: &RealMatrix) -> f64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

fn lu_determinant(m: &RealMatrix) -> f64 {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap_or(k);
        if a[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        let p = a[k][k];
        det *= p;
        for i in k + 1..n {
            let f = a[i][k] / p;
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(i);
            for (x, y) in lower[0][k + 1..].iter_mut().zip(&upper[k][k + 1..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when `|det(m)| <= tol`.
pub fn invert(m: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    let n = require_square(m)?;
    let det_abs = determinant(m)?.abs();
    if det_abs <= tol {
        return Err(Error::SingularMatrix { det_abs, tol });
    }
    let mut a = m.to_rows();
    let mut inv = RealMatrix::identity(n).to_rows();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap_or(k);
        a.swap(pivot, k);
        inv.swap(pivot, k);
        let p = a[k][k];
        if p == 0.0 {
            return Err(Error::SingularMatrix { det_abs, tol });
        }
        for j in 0..n {
            a[k][j] /= p;
            inv[k][j] /= p;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    RealMatrix::from_rows(&inv)
}

/// Transposed cofactor matrix. Computed from minors, never through an inverse.
pub fn adjugate(m: &RealMatrix) -> Result<RealMatrix> {
    let n = require_square(m)?;
    if n == 1 {
        return Ok(RealMatrix::identity(1));
    }
    let mut adj = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = RealMatrix::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < i { r } else { r + 1 };
                let cc = if c < j { c } else { c + 1 };
                m[(rr, cc)]
            });
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[(j, i)] = sign * determinant(&minor)?;
        }
    }
    Ok(adj)
}

pub fn frobenius_norm(m: &RealMatrix) -> f64 {
    m.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn spectral_norm(m: &RealMatrix) -> f64 {
    svd(m).singular_values.first().copied().unwrap_or(0.0)
}

/// `m = left * diag(singular_values) * right^T`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left_vectors: RealMatrix,
    pub singular_values: Vec<f64>,
    pub right_vectors: RealMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> RealMatrix {
        let sigma = RealMatrix::from_diag(&self.singular_values);
        &(&self.left_vectors * &sigma) * &self.right_vectors.transpose()
    }

    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

/// Thin singular value decomposition by one-sided Jacobi rotations.
///
/// Singular values come out in descending order. Each singular pair is
/// signed so that the first entry of the left vector above `1e-12` in
/// magnitude is positive.
pub fn svd(m: &RealMatrix) -> SvdResult {
    if m.rows() < m.cols() {
        let t = svd(&m.transpose());
        let mut out = SvdResult {
            left_vectors: t.right_vectors,
            singular_values: t.singular_values,
            right_vectors: t.left_vectors,
        };
        canonicalize_signs(&mut out);
        return out;
    }
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut v = RealMatrix::identity(c);

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..r {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..r {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = cs * x - sn * y;
                    a[(i, q)] = sn * x + cs * y;
                }
                for i in 0..c {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = cs * x - sn * y;
                    v[(i, q)] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..c)
        .map(|j| (0..r).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let zero_cut = sigma_max * f64::EPSILON * (r.max(c) as f64);

    let mut left = RealMatrix::zeros(r, c);
    let mut right = RealMatrix::zeros(c, c);
    let mut values = Vec::with_capacity(c);
    let mut filled: Vec<Vec<f64>> = Vec::with_capacity(c);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        let mut col: Vec<f64> = if s > zero_cut && s > 0.0 {
            (0..r).map(|i| a[(i, j)] / s).collect()
        } else {
            vec![0.0; r]
        };
        // Gram-Schmidt against earlier columns; fill null directions from the standard basis.
        orthogonalize(&mut col, &filled);
        if norm(&col) < 0.5 {
            col = complete_basis(&filled, r);
        } else {
            let nn = norm(&col);
            col.iter_mut().for_each(|x| *x /= nn);
        }
        for i in 0..r {
            left[(i, k)] = col[i];
        }
        for i in 0..c {
            right[(i, k)] = v[(i, j)];
        }
        filled.push(col);
        values.push(if s > zero_cut { s } else { 0.0 });
    }

    let mut out = SvdResult {
        left_vectors: left,
        singular_values: values,
        right_vectors: right,
    };
    canonicalize_signs(&mut out);
    out
}

fn canonicalize_signs(svd: &mut SvdResult) {
    let (r, k) = (svd.left_vectors.rows(), svd.left_vectors.cols());
    let n = svd.right_vectors.rows();
    for j in 0..k {
        let first = (0..r)
            .map(|i| svd.left_vectors[(i, j)])
            .find(|x| x.abs() > 1e-12);
        if matches!(first, Some(x) if x < 0.0) {
            for i in 0..r {
                svd.left_vectors[(i, j)] = -svd.left_vectors[(i, j)];
            }
            for i in 0..n {
                svd.right_vectors[(i, j)] = -svd.right_vectors[(i, j)];
            }
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
    }
}

fn complete_basis(basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best = vec![0.0; dim];
    let mut best_norm = -1.0;
    for e in 0..dim {
        let mut cand = vec![0.0; dim];
        cand[e] = 1.0;
        orthogonalize(&mut cand, basis);
        let nn = norm(&cand);
        if nn > best_norm {
            best_norm = nn;
            best = cand;
        }
    }
    best.iter_mut().for_each(|x| *x /= best_norm);
    best
}

/// Eigenvalues (ascending) and column eigenvectors of a real symmetric matrix
/// by cyclic Jacobi rotations.
pub fn symmetric_eigen(m: &RealMatrix) -> Result<(Vec<f64>, RealMatrix)> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::dims("square matrix", format!("{}x{}", n, m.cols())));
    }
    let mut a = m.clone();
    let mut v = RealMatrix::identity(n);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let scale: f64 = a.as_slice().iter().map(|x| x * x).sum();
        if off <= f64::EPSILON * f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = RealMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues (ascending) of a Hermitian matrix.
///
/// Uses the real embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the
/// Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::dims("square matrix", format!("{}x{}", n, m.cols())));
    }
    let embed = RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z: Complex64 = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (vals, _) = symmetric_eigen(&embed)?;
    Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}
