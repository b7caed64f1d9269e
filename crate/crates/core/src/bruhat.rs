//! Signed Bruhat decomposition M = U1 P U2 of invertible matrices,
//! cell identification, the cell parameterizations and their inverse
//! angle reading, slice coordinates around a non-open cell, the
//! projective action of positive upper-triangular matrices, and
//! chop/adv labels of numerical points.

use serde::{Deserialize, Serialize};

use crate::charts::{alpha as alpha_rot, h_so, lu_chart, matrix_exp, qr_pos};
use crate::coxeter::{Permutation, ReducedWord};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Rat, Real, Scalar};
use crate::spin::{signed_acute_product, QuatElem, SpinWord};

/// Signed permutation matrix: row i carries d_i at column i^sigma.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignedPermMatrix {
    sigma: Permutation,
    signs: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn new(sigma: Permutation, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != sigma.size() {
            return Err(Error::RankMismatch(signs.len(), sigma.size()));
        }
        if signs.iter().any(|&d| d != 1 && d != -1) {
            return Err(Error::Invalid("signs must be +-1".into()));
        }
        Ok(SignedPermMatrix { sigma, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermMatrix {
            sigma: Permutation::identity(n),
            signs: vec![1; n + 1],
        }
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    pub fn det(&self) -> i8 {
        self.sigma.sign() * self.signs.iter().product::<i8>()
    }

    pub fn to_matrix<S: Scalar>(&self) -> Matrix<S> {
        let np1 = self.sigma.size();
        let mut m = Matrix::zeros(np1, np1);
        for i in 1..=np1 {
            m[(i - 1, self.sigma.image(i) - 1)] = if self.signs[i - 1] > 0 {
                S::one()
            } else {
                -S::one()
            };
        }
        m
    }

    pub fn mul(&self, rhs: &SignedPermMatrix) -> Result<SignedPermMatrix> {
        let sigma = self.sigma.compose(&rhs.sigma)?;
        let signs = (1..=self.sigma.size())
            .map(|i| self.signs[i - 1] * rhs.signs[self.sigma.image(i) - 1])
            .collect();
        SignedPermMatrix::new(sigma, signs)
    }

    /// One of the two spin preimages (the one with positive monomial
    /// sign); requires determinant +1.
    pub fn lift_to_spin(&self) -> Result<SpinWord> {
        if self.det() != 1 {
            return Err(Error::Invalid("not in the special orthogonal part".into()));
        }
        let diag: Vec<i8> = (1..=self.sigma.size())
            .map(|i| {
                let acute_sign = if self.sigma.inv_i(i) % 2 == 1 { -1 } else { 1 };
                self.signs[i - 1] * acute_sign
            })
            .collect();
        let q = QuatElem::from_pi_diag(&diag)?;
        SpinWord::from_parts(q, self.sigma.clone())
    }
}

/// Signed Bruhat decomposition of an invertible matrix.
#[derive(Clone, Debug)]
pub struct Decomposition<F: Real> {
    pub u1: Matrix<F>,
    pub p: SignedPermMatrix,
    pub u2: Matrix<F>,
    pub residual: F,
}

/// Pivot algorithm: columns left to right, pivot at the bottom-most
/// unused row above the tolerance; rows above the pivot are cleared by
/// the left factor, the pivot row rightward by the right factor. The
/// signed permutation is unique; a second candidate pivot inside the
/// tolerance band is a hard error, since misclassifying a cell is worse
/// than refusing.
pub fn signed_bruhat_decompose<F: Real>(m: &Matrix<F>, tol: F) -> Result<Decomposition<F>> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.nrows();
    let scale = m.max_abs();
    if scale == F::zero() {
        return Err(Error::Singular);
    }
    let threshold = tol * scale;
    let band = F::of(10.0);

    let mut a = m.clone();
    let mut u1 = Matrix::<F>::identity(n); // accumulates inverse row ops
    let mut u2 = Matrix::<F>::identity(n); // accumulates inverse col ops
    let mut used = vec![false; n];
    let mut perm_images = vec![0usize; n]; // row -> column (1-based)

    for col in 0..n {
        // bottom-most unused row with entry above threshold
        let pivot_row = (0..n)
            .rev()
            .find(|&i| !used[i] && a[(i, col)].abs() > threshold)
            .ok_or(Error::SingularColumn { col: col + 1 })?;
        // degeneracy band: an unused entry below the pivot within a
        // factor `band` of the threshold is ambiguous
        for i in pivot_row + 1..n {
            if !used[i] && a[(i, col)].abs() > threshold / band {
                return Err(Error::DegeneratePivot {
                    col: col + 1,
                    a: a[(pivot_row, col)].to_f64c(),
                    b: a[(i, col)].to_f64c(),
                });
            }
        }
        let pivot = a[(pivot_row, col)];
        // clear the column above the pivot with row operations
        for i in 0..pivot_row {
            if used[i] {
                continue;
            }
            let factor = a[(i, col)] / pivot;
            if factor == F::zero() {
                continue;
            }
            for j in 0..n {
                let v = a[(i, j)] - factor * a[(pivot_row, j)];
                a[(i, j)] = v;
            }
            // (I - f e_{i,p})^{-1} = I + f e_{i,p}; accumulate on the right
            for r in 0..n {
                let v = u1[(r, pivot_row)] + u1[(r, i)] * factor;
                u1[(r, pivot_row)] = v;
            }
        }
        // clear the pivot row rightward with column operations
        for j in col + 1..n {
            let factor = a[(pivot_row, j)] / pivot;
            if factor == F::zero() {
                continue;
            }
            for i in 0..n {
                let v = a[(i, j)] - factor * a[(i, col)];
                a[(i, j)] = v;
            }
            // (I - f e_{col,j})^{-1} = I + f e_{col,j}; accumulate on the left
            for c in 0..n {
                let v = u2[(col, c)] + factor * u2[(j, c)];
                u2[(col, c)] = v;
            }
        }
        used[pivot_row] = true;
        perm_images[pivot_row] = col + 1;
    }

    let sigma = Permutation::from_images(perm_images.clone())?;
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let v = a[(i, perm_images[i] - 1)];
        signs.push(if v >= F::zero() { 1 } else { -1 });
        // fold the magnitude into the left factor: scale column i of u1
        let r = v.abs();
        for row in 0..n {
            let val = u1[(row, i)] * r;
            u1[(row, i)] = val;
        }
    }
    let p = SignedPermMatrix::new(sigma, signs)?;
    let recon = u1.mul(&p.to_matrix::<F>()).mul(&u2);
    let residual = recon.sub(m).max_abs();
    Ok(Decomposition { u1, p, u2, residual })
}

/// The signed permutation part of the decomposition.
pub fn cell_of<F: Real>(m: &Matrix<F>, tol: F) -> Result<SignedPermMatrix> {
    signed_bruhat_decompose(m, tol).map(|d| d.p)
}

/// The unsigned cell: just the permutation.
pub fn unsigned_cell_of<F: Real>(m: &Matrix<F>, tol: F) -> Result<Permutation> {
    cell_of(m, tol).map(|p| p.sigma().clone())
}

/// Exact signed Bruhat decomposition over the rationals. Pivots are
/// exact nonzero tests, the factors reconstruct the input identically,
/// and the reported residual is literally zero. This is the right tool
/// very close to a cell boundary, where float elimination loses the
/// relative accuracy carried by the small entries: a float matrix is an
/// exact rational matrix, so its cell is well defined and computed
/// exactly here.
pub fn signed_bruhat_decompose_exact(
    m: &Matrix<Rat>,
) -> Result<(Matrix<Rat>, SignedPermMatrix, Matrix<Rat>)> {
    use num_traits::{Signed, Zero};
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut u1 = Matrix::<Rat>::identity(n);
    let mut u2 = Matrix::<Rat>::identity(n);
    let mut used = vec![false; n];
    let mut perm_images = vec![0usize; n];
    for col in 0..n {
        let pivot_row = (0..n)
            .rev()
            .find(|&i| !used[i] && !a[(i, col)].is_zero())
            .ok_or(Error::SingularColumn { col: col + 1 })?;
        let pivot = a[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            if used[i] || a[(i, col)].is_zero() {
                continue;
            }
            let factor = a[(i, col)].clone() / pivot.clone();
            for j in 0..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(pivot_row, j)].clone();
                a[(i, j)] = v;
            }
            for r in 0..n {
                let v = u1[(r, pivot_row)].clone() + u1[(r, i)].clone() * factor.clone();
                u1[(r, pivot_row)] = v;
            }
        }
        for j in col + 1..n {
            if a[(pivot_row, j)].is_zero() {
                continue;
            }
            let factor = a[(pivot_row, j)].clone() / pivot.clone();
            for i in 0..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(i, col)].clone();
                a[(i, j)] = v;
            }
            for c in 0..n {
                let v = u2[(col, c)].clone() + factor.clone() * u2[(j, c)].clone();
                u2[(col, c)] = v;
            }
        }
        used[pivot_row] = true;
        perm_images[pivot_row] = col + 1;
    }
    let sigma = Permutation::from_images(perm_images.clone())?;
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let v = a[(i, perm_images[i] - 1)].clone();
        signs.push(if v.is_negative() { -1 } else { 1 });
        let r = v.abs();
        for row in 0..n {
            let val = u1[(row, i)].clone() * r.clone();
            u1[(row, i)] = val;
        }
    }
    let p = SignedPermMatrix::new(sigma, signs)?;
    debug_assert_eq!(u1.mul(&p.to_matrix::<Rat>()).mul(&u2), *m);
    Ok((u1, p, u2))
}

/// Exact cell of a float matrix, through its exact rational lift.
pub fn cell_of_exact(m: &Matrix<f64>) -> Result<SignedPermMatrix> {
    let mr = m.map(|&x| {
        Rat::from_float(x).expect("finite float converts exactly")
    });
    signed_bruhat_decompose_exact(&mr).map(|(_, p, _)| p)
}

/// One-parameter rotation exp(theta frak_a_j), the SO-level alpha_j.
pub fn alpha<F: Real>(np1: usize, j: usize, theta: F) -> Matrix<F> {
    alpha_rot(np1, j, theta)
}

/// Cell-step parameterization Phi(Q, theta) = Q alpha_j(eps theta),
/// theta in (0, pi).
pub fn phi<F: Real>(q: &Matrix<F>, j: usize, eps: i8, theta: F) -> Result<Matrix<F>> {
    if theta <= F::zero() || theta >= F::PI() {
        return Err(Error::AngleRange);
    }
    let s = if eps >= 0 { theta } else { -theta };
    Ok(q.mul(&alpha(q.nrows(), j, s)))
}

/// Full cell parameterization over a reduced word with signs:
/// Pi(q) alpha_{i_1}(e_1 t_1) ... alpha_{i_k}(e_k t_k).
pub fn psi<F: Real>(
    q: &QuatElem,
    word: &ReducedWord,
    signs: &[i8],
    thetas: &[F],
) -> Result<Matrix<F>> {
    let _n = q.rank();
    if word.len() != signs.len() || word.len() != thetas.len() {
        return Err(Error::Invalid("word/sign/angle lengths differ".into()));
    }
    let mut acc = SpinWord::from_quat(q.clone()).pi_so().to_matrix::<F>();
    for ((&j, &e), &t) in word.letters().iter().zip(signs).zip(thetas) {
        if t <= F::zero() || t >= F::PI() {
            return Err(Error::AngleRange);
        }
        acc = phi(&acc, j, e, t)?;
    }
    Ok(acc)
}

/// Reads the last angle of a cell point: for Q in a cell whose
/// permutation has a right descent at j, the unique theta in (0, pi)
/// with Q alpha_j(-theta) in the predecessor cell. Computed from the U2
/// factor as atan2(U2[j,j], U2[j,j+1]).
pub fn theta_j<F: Real>(q: &Matrix<F>, j: usize, tol: F) -> Result<F> {
    let dec = signed_bruhat_decompose(q, tol)?;
    let sigma0 = dec.p.sigma();
    if j == 0 || j > sigma0.rank() {
        return Err(Error::GeneratorOutOfRange {
            index: j,
            max: sigma0.rank(),
        });
    }
    // a_j <=_L sigma0: value j+1 appears before value j
    if sigma0.inverse().image(j + 1) >= sigma0.inverse().image(j) {
        return Err(Error::CellMismatch(format!(
            "cell {sigma0} has no angle at j = {j}"
        )));
    }
    let u2 = &dec.u2;
    Ok(u2[(j - 1, j - 1)].atan2(u2[(j - 1, j)]))
}

/// Projective action Q^U = orthogonal factor of U^{-1} Q, for U upper
/// triangular with positive diagonal.
pub fn projective_act<F: Real>(u: &Matrix<F>, q: &Matrix<F>) -> Result<Matrix<F>> {
    let a = u.solve_upper(q)?;
    let (qq, _) = qr_pos(&a)?;
    Ok(qq)
}

/// Slice coordinates around the cell of z0 (sigma != eta): u spans the
/// cell, x the transversal; x = 0 exactly on the cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceCoords {
    pub u: Vec<f64>,
    pub x: Vec<f64>,
}

/// Splits L in the nilpotent lower group as L = L1 L2 with L1 supported
/// on Inv(sigma^{-1}) and L2 on Inv(sigma^{-1} eta), solving positionwise
/// by increasing band distance.
pub fn lo_factor<F: Real>(l: &Matrix<F>, sigma: &Permutation) -> Result<(Matrix<F>, Matrix<F>)> {
    if !l.is_square() || l.nrows() != sigma.size() {
        return Err(Error::RankMismatch(l.nrows(), sigma.size()));
    }
    let np1 = sigma.size();
    let sigma_inv = sigma.inverse();
    let eta = Permutation::eta(sigma.rank());
    let rho = sigma_inv.compose(&eta)?;
    let in_l1 = |i: usize, j: usize| {
        // entry (i, j), i > j, allowed in Lo_{sigma^{-1}} iff (j, i) in Inv(sigma^{-1})
        sigma_inv.image(j) > sigma_inv.image(i)
    };
    let in_l2 = |i: usize, j: usize| rho.image(j) > rho.image(i);
    let mut l1 = Matrix::<F>::identity(np1);
    let mut l2 = Matrix::<F>::identity(np1);
    for gap in 1..np1 {
        for i in gap + 1..=np1 {
            let j = i - gap;
            let mut s = F::zero();
            for k in j + 1..i {
                s = s + l1[(i - 1, k - 1)] * l2[(k - 1, j - 1)];
            }
            let v = l[(i - 1, j - 1)] - s;
            if in_l1(i, j) {
                l1[(i - 1, j - 1)] = v;
            } else {
                debug_assert!(in_l2(i, j), "inversion sets partition the band");
                l2[(i - 1, j - 1)] = v;
            }
        }
    }
    Ok((l1, l2))
}

/// Positions (row, col, col_in_l2) of the transversal slice entries of
/// z0: zeros of the signed permutation matrix lying below and to the
/// left of nonzero entries, in reading order.
pub fn slice_positions(z0: &SpinWord) -> Vec<(usize, usize)> {
    let sigma = z0.sigma_part();
    let sigma_inv = sigma.inverse();
    let np1 = sigma.size();
    let mut out = Vec::new();
    for i in 1..=np1 {
        for j in 1..=np1 {
            if j < sigma.image(i) && i > sigma_inv.image(j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Slice coordinates of Q in the chart around z0.
pub fn slice_coords(z0: &SpinWord, q: &Matrix<f64>, tol: f64) -> Result<SliceCoords> {
    let sigma = z0.sigma_part();
    let np1 = sigma.size();
    if q.nrows() != np1 || !q.is_square() {
        return Err(Error::RankMismatch(q.nrows(), np1));
    }
    if *sigma == Permutation::eta(sigma.rank()) {
        return Err(Error::Invalid("open cell has no slice coordinates".into()));
    }
    let z0_mat = z0.pi_so().to_matrix::<f64>();
    let local = z0_mat.transpose().mul(q);
    let l = lu_chart(&local, tol)?;
    let (l1, l2) = lo_factor(&l, sigma)?;
    // u: entries of U1 = z0 L1 z0^{-1} at Inv(sigma), reading order
    let signs = z0.pi_so();
    let d = signs.signs();
    let mut u = Vec::new();
    for a in 1..=np1 {
        for b in a + 1..=np1 {
            if sigma.image(a) > sigma.image(b) {
                // (a, b) in Inv(sigma): U1[a,b] = d_a d_b L1[a^sigma, b^sigma]
                let val = (d[a - 1] * d[b - 1]) as f64
                    * l1[(sigma.image(a) - 1, sigma.image(b) - 1)];
                u.push(val);
            }
        }
    }
    // x: free entries of M = Pi(z0) L2 with the row sign removed
    let x = slice_positions(z0)
        .into_iter()
        .map(|(i, j)| l2[(sigma.image(i) - 1, j - 1)])
        .collect();
    Ok(SliceCoords { u, x })
}

/// Predicted spin-level cell of a mixed-sign parameter product: the
/// word evaluated with acute or grave generators by the sign of each
/// time.
pub fn freesign_cell(n: usize, word: &ReducedWord, times_signs: &[i8]) -> Result<SpinWord> {
    if times_signs.iter().any(|&s| s == 0) {
        return Err(Error::ZeroTime);
    }
    signed_acute_product(n, word, times_signs)
}

/// Decomposes, lifts to spin, applies the advance label and projects
/// back; independent of the lift choice.
pub fn adv_point<F: Real>(q: &Matrix<F>, tol: F) -> Result<SignedPermMatrix> {
    let p = cell_of(q, tol)?;
    Ok(p.lift_to_spin()?.adv_label().pi_so())
}

/// Same with the chop label.
pub fn chop_point<F: Real>(q: &Matrix<F>, tol: F) -> Result<SignedPermMatrix> {
    let p = cell_of(q, tol)?;
    Ok(p.lift_to_spin()?.chop_label().pi_so())
}

/// A locally convex curve through a given open-cell point: the h-flow
/// conjugated by the unipotent part of the decomposition's left factor.
/// Returns samples (t, Gamma(t)) with endpoints I and (-1)^n I; the
/// midpoint passes through Q.
pub fn connect_through(q: &Matrix<f64>, tol: f64, samples: usize) -> Result<Vec<(f64, Matrix<f64>)>> {
    let np1 = q.nrows();
    let n = np1 - 1;
    let dec = signed_bruhat_decompose(q, tol)?;
    let acute_eta = SpinWord::acute(&Permutation::eta(n)).pi_so();
    if dec.p != acute_eta {
        return Err(Error::CellMismatch(format!(
            "expected the open cell of acute(eta), found {}",
            dec.p.sigma()
        )));
    }
    // unipotent part of U1
    let mut w = dec.u1.clone();
    for j in 0..np1 {
        let d = w[(j, j)];
        for i in 0..np1 {
            let v = w[(i, j)] / d;
            w[(i, j)] = v;
        }
    }
    let h = h_so::<f64>(np1);
    let mut out = Vec::with_capacity(samples + 1);
    for s in 0..=samples {
        let t = s as f64 / samples as f64;
        let gamma0 = matrix_exp(&h.scale(&(std::f64::consts::PI * t)));
        let point = {
            let a = w.mul(&gamma0);
            let (qq, _) = qr_pos(&a)?;
            qq
        };
        out.push((t, point));
    }
    Ok(out)
}
