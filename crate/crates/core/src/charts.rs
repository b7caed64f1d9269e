//! Triangular coordinates on the orthogonal group: the LU and QR charts,
//! matrix exponentials (exact nilpotent and floating), and the standard
//! generators of the triangular and orthogonal Lie algebras.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Scalar};

/// Strictly lower generator with single entry (j+1, j) = 1, 1-based j.
pub fn frak_l<S: Scalar>(np1: usize, j: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(np1, np1);
    m[(j, j - 1)] = S::one();
    m
}

/// Rotation generator with (j+1, j) = 1, (j, j+1) = -1, 1-based j.
pub fn frak_a<S: Scalar>(np1: usize, j: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(np1, np1);
    m[(j, j - 1)] = S::one();
    m[(j - 1, j)] = -S::one();
    m
}

/// Principal nilpotent: sum of all frak_l generators.
pub fn frak_n<S: Scalar>(np1: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(np1, np1);
    for j in 1..np1 {
        m[(j, j - 1)] = S::one();
    }
    m
}

/// Lower half of the principal sl_2 triple: sum of sqrt(j(n+1-j)) frak_l_j.
pub fn h_lower<F: Real>(np1: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(np1, np1);
    for j in 1..np1 {
        m[(j, j - 1)] = F::of((j as f64 * (np1 - j) as f64).sqrt());
    }
    m
}

/// The rotation field h = h_L - h_L^T.
pub fn h_so<F: Real>(np1: usize) -> Matrix<F> {
    let hl = h_lower::<F>(np1);
    hl.sub(&hl.transpose())
}

/// The mirror X = diag(1, -1, 1, -1, ...).
pub fn x_mirror<S: Scalar>(np1: usize) -> Matrix<S> {
    Matrix::from_fn(np1, np1, |i, j| {
        if i == j {
            if i % 2 == 0 {
                S::one()
            } else {
                -S::one()
            }
        } else {
            S::zero()
        }
    })
}

/// One-parameter rotation alpha_j(theta) = exp(theta frak_a_j).
pub fn alpha<F: Real>(np1: usize, j: usize, theta: F) -> Matrix<F> {
    let mut m = Matrix::identity(np1);
    m[(j - 1, j - 1)] = theta.cos();
    m[(j - 1, j)] = -theta.sin();
    m[(j, j - 1)] = theta.sin();
    m[(j, j)] = theta.cos();
    m
}

/// Unipotent Jacobi factor lambda_j(t) = exp(t frak_l_j) = I + t frak_l_j.
pub fn lambda_gen<S: Scalar>(np1: usize, j: usize, t: &S) -> Matrix<S> {
    let mut m = Matrix::identity(np1);
    m[(j, j - 1)] = t.clone();
    m
}

/// LU chart on the orthogonal group: the unique unit lower-triangular L
/// with Q = L U, U upper with positive diagonal. Defined where every
/// northwest minor is positive; the offending index is reported
/// otherwise. `tol` is relative to the largest input entry.
pub fn lu_chart<F: Real>(q: &Matrix<F>, tol: F) -> Result<Matrix<F>> {
    if !q.is_square() {
        return Err(Error::NotSquare);
    }
    let n = q.nrows();
    let scale = q.max_abs().max(F::one());
    let mut a = q.clone();
    let mut l = Matrix::<F>::identity(n);
    for k in 0..n {
        let pivot = a[(k, k)];
        if pivot <= tol * scale {
            return Err(Error::ChartDomain {
                index: k + 1,
                pivot: pivot.to_f64c(),
            });
        }
        for i in k + 1..n {
            let m = a[(i, k)] / pivot;
            l[(i, k)] = m;
            for j in k..n {
                let v = a[(i, j)] - m * a[(k, j)];
                a[(i, j)] = v;
            }
        }
    }
    Ok(l)
}

/// Full QR with positive-diagonal R by Householder reflections.
pub fn qr_pos<F: Real>(m: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.nrows();
    let mut r = m.clone();
    let mut q = Matrix::<F>::identity(n);
    for k in 0..n {
        // Householder vector for column k below the diagonal
        let mut norm = F::zero();
        for i in k..n {
            norm = norm + r[(i, k)] * r[(i, k)];
        }
        let norm = norm.sqrt();
        if norm == F::zero() {
            return Err(Error::Singular);
        }
        let alpha = if r[(k, k)] >= F::zero() { -norm } else { norm };
        let mut v = vec![F::zero(); n];
        let mut vnorm2 = F::zero();
        for i in k..n {
            v[i] = r[(i, k)];
            if i == k {
                v[i] = v[i] - alpha;
            }
            vnorm2 = vnorm2 + v[i] * v[i];
        }
        if vnorm2 > F::zero() {
            let two = F::of(2.0);
            // apply H = I - 2 v v^T / (v^T v) to R on the left
            for j in 0..n {
                let mut dot = F::zero();
                for i in k..n {
                    dot = dot + v[i] * r[(i, j)];
                }
                let c = two * dot / vnorm2;
                for i in k..n {
                    let val = r[(i, j)] - c * v[i];
                    r[(i, j)] = val;
                }
            }
            // accumulate Q = Q H
            for i in 0..n {
                let mut dot = F::zero();
                for jj in k..n {
                    dot = dot + q[(i, jj)] * v[jj];
                }
                let c = two * dot / vnorm2;
                for jj in k..n {
                    let val = q[(i, jj)] - c * v[jj];
                    q[(i, jj)] = val;
                }
            }
        }
    }
    // force positive diagonal on R
    for k in 0..n {
        if r[(k, k)] < F::zero() {
            for j in 0..n {
                let v = -r[(k, j)];
                r[(k, j)] = v;
            }
            for i in 0..n {
                let v = -q[(i, k)];
                q[(i, k)] = v;
            }
        }
        if r[(k, k)] == F::zero() {
            return Err(Error::Singular);
        }
    }
    Ok((q, r))
}

/// QR chart: the orthogonal factor of an invertible matrix, with the
/// positive-diagonal normalization. Inverse of `lu_chart` on its domain.
pub fn qr_chart<F: Real>(l: &Matrix<F>) -> Result<Matrix<F>> {
    qr_pos(l).map(|(q, _)| q)
}

/// Exact exponential exp(t N) of a strictly lower-triangular matrix:
/// the series terminates at the nilpotency degree. Requires the ring to
/// embed 1/k!.
pub fn nilpotent_exp<S: Scalar>(n_mat: &Matrix<S>, t: &S) -> Result<Matrix<S>> {
    if !n_mat.is_strictly_lower() {
        return Err(Error::NotNilpotent);
    }
    let np1 = n_mat.nrows();
    let tn = n_mat.scale(t);
    let mut acc = Matrix::<S>::identity(np1);
    let mut term = Matrix::<S>::identity(np1);
    let mut factorial: i64 = 1;
    for k in 1..np1 {
        factorial *= k as i64;
        term = term.mul(&tn);
        let inv_fact =
            S::from_ratio(1, factorial).ok_or(Error::InexactRatio(1, factorial))?;
        acc = acc.add(&term.scale(&inv_fact));
    }
    Ok(acc)
}

/// Floating matrix exponential by scaling and squaring with a Taylor
/// series; ample accuracy at desk scale (norm <= 10 or so).
pub fn matrix_exp<F: Real>(a: &Matrix<F>) -> Matrix<F> {
    assert!(a.is_square());
    let n = a.nrows();
    let norm = a.max_abs() * F::of(n as f64);
    let s = if norm > F::of(0.5) {
        (norm / F::of(0.5)).log2().ceil().to_f64c() as i32
    } else {
        0
    };
    let scaled = a.scale(&F::of(0.5f64.powi(s)));
    let mut acc = Matrix::<F>::identity(n);
    let mut term = Matrix::<F>::identity(n);
    for k in 1..=24 {
        term = term.mul(&scaled).scale(&(F::one() / F::of(k as f64)));
        acc = acc.add(&term);
        if term.max_abs() < F::of(1e-300) {
            break;
        }
    }
    for _ in 0..s {
        acc = acc.mul(&acc);
    }
    acc
}

/// Lowest vanishing order of a polynomial at t = 0; the multiplicity of
/// the root there. Errors on the zero polynomial.
pub fn root_multiplicity_at_zero(p: &crate::scalar::Poly) -> Result<usize> {
    p.order_at_zero().ok_or(Error::ZeroPolynomial)
}
