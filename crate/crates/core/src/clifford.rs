//! Even Clifford algebra oracle: exact multiplication in the algebra
//! generated by e_1..e_{n+1} with e_i^2 = 1, coefficients in
//! Z[1/sqrt(2)]. The spin elements embed via ahat_j = e_{j+1} e_j and
//! aacute_j = (1 + ahat_j)/sqrt(2); the embedding is faithful, which is
//! what makes this an oracle for the canonical-form arithmetic.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Root2;
use crate::spin::{QuatElem, SpinWord};

/// Basis-size cap: 2^{n+1} coefficients is comfortable up to here.
pub const CLIFFORD_MAX_RANK: usize = 10;

/// Element of the even Clifford algebra; `coeffs[mask]` is the
/// coefficient of the ascending product of the e_i with i in `mask`.
/// Odd-cardinality masks stay zero.
#[derive(Clone, PartialEq, Debug)]
pub struct CliffordElem {
    n: usize,
    coeffs: Vec<Root2>,
}

impl CliffordElem {
    pub fn zero(n: usize) -> Result<Self> {
        if n > CLIFFORD_MAX_RANK {
            return Err(Error::OracleRank(n, CLIFFORD_MAX_RANK));
        }
        Ok(CliffordElem {
            n,
            coeffs: vec![Root2::zero(); 1 << (n + 1)],
        })
    }

    pub fn one(n: usize) -> Result<Self> {
        let mut c = Self::zero(n)?;
        c.coeffs[0] = Root2::one();
        Ok(c)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: usize) -> &Root2 {
        &self.coeffs[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Root2::is_zero)
    }

    fn basis(n: usize, mask: usize, c: Root2) -> Result<Self> {
        let mut out = Self::zero(n)?;
        out.coeffs[mask] = c;
        Ok(out)
    }

    /// Sign and resulting mask of a basis product e_S e_T.
    fn mul_basis(s: usize, t: usize) -> (i8, usize) {
        let mut sign = 1i8;
        let mut s_cur = s;
        let mut t_rem = t;
        while t_rem != 0 {
            let b = t_rem.trailing_zeros() as usize;
            t_rem &= t_rem - 1;
            let higher = (s_cur >> (b + 1)).count_ones();
            if higher % 2 == 1 {
                sign = -sign;
            }
            s_cur ^= 1 << b;
        }
        (sign, s_cur)
    }

    pub fn mul(&self, rhs: &CliffordElem) -> Result<CliffordElem> {
        if self.n != rhs.n {
            return Err(Error::RankMismatch(self.n, rhs.n));
        }
        let mut out = Self::zero(self.n)?;
        for (s, cs) in self.coeffs.iter().enumerate() {
            if cs.is_zero() {
                continue;
            }
            for (t, ct) in rhs.coeffs.iter().enumerate() {
                if ct.is_zero() {
                    continue;
                }
                let (sign, mask) = Self::mul_basis(s, t);
                let term = cs.clone() * ct.clone();
                let term = if sign < 0 { -term } else { term };
                out.coeffs[mask] = out.coeffs[mask].clone() + term;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &CliffordElem) -> Result<CliffordElem> {
        if self.n != rhs.n {
            return Err(Error::RankMismatch(self.n, rhs.n));
        }
        let mut out = self.clone();
        for (m, c) in rhs.coeffs.iter().enumerate() {
            out.coeffs[m] = out.coeffs[m].clone() + c.clone();
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Root2) -> CliffordElem {
        CliffordElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> CliffordElem {
        CliffordElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| -x.clone()).collect(),
        }
    }

    /// Image of ahat_j = e_{j+1} e_j = -(e_j e_{j+1}).
    pub fn hat_gen(n: usize, j: usize) -> Result<CliffordElem> {
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, max: n });
        }
        Self::basis(n, (1 << (j - 1)) | (1 << j), -Root2::one())
    }

    /// Image of aacute_j = (1 + ahat_j)/sqrt(2).
    pub fn acute_gen(n: usize, j: usize) -> Result<CliffordElem> {
        let one = Self::one(n)?;
        let hat = Self::hat_gen(n, j)?;
        Ok(one.add(&hat)?.scale(&Root2::inv_sqrt2()))
    }

    pub fn from_quat(q: &QuatElem) -> Result<CliffordElem> {
        let n = q.rank();
        let mut acc = if q.sign() > 0 {
            Self::one(n)?
        } else {
            Self::one(n)?.neg()
        };
        for j in 1..=n {
            if q.exps()[j - 1] == 1 {
                acc = acc.mul(&Self::hat_gen(n, j)?)?;
            }
        }
        Ok(acc)
    }

    pub fn from_spin(z: &SpinWord) -> Result<CliffordElem> {
        let mut acc = Self::from_quat(z.quat_part())?;
        let n = z.rank();
        for &j in z.sigma_part().canonical_reduced_word().letters() {
            acc = acc.mul(&Self::acute_gen(n, j)?)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Permutation;

    #[test]
    fn generators_square_to_minus_one() {
        let n = 3;
        for j in 1..=n {
            let h = CliffordElem::hat_gen(n, j).unwrap();
            let sq = h.mul(&h).unwrap();
            assert_eq!(sq, CliffordElem::one(n).unwrap().neg());
        }
    }

    #[test]
    fn acute_gen_squares_to_hat_gen() {
        let n = 4;
        for j in 1..=n {
            let a = CliffordElem::acute_gen(n, j).unwrap();
            assert_eq!(a.mul(&a).unwrap(), CliffordElem::hat_gen(n, j).unwrap());
        }
    }

    #[test]
    fn from_spin_of_unit() {
        let z = SpinWord::identity(3);
        assert_eq!(
            CliffordElem::from_spin(&z).unwrap(),
            CliffordElem::one(3).unwrap()
        );
    }

    #[test]
    fn acute_image_coefficients() {
        // (1 + ahat_1)/sqrt(2): coefficient 1/sqrt2 at the unit, -1/sqrt2
        // at e_1 e_2
        let a = CliffordElem::acute_gen(2, 1).unwrap();
        assert_eq!(*a.coeff(0), Root2::inv_sqrt2());
        assert_eq!(*a.coeff(0b11), -Root2::inv_sqrt2());
    }

    #[test]
    fn faithful_on_quat() {
        let n = 3;
        let all = QuatElem::all(n);
        for q1 in &all {
            for q2 in &all {
                let lhs = CliffordElem::from_quat(&q1.mul(q2).unwrap()).unwrap();
                let rhs = CliffordElem::from_quat(q1)
                    .unwrap()
                    .mul(&CliffordElem::from_quat(q2).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "q1 = {q1}, q2 = {q2}");
            }
        }
    }

    #[test]
    fn eta_squared_matches_hat_eta_small_rank() {
        // at rank 2 the squared acute(eta) is -1 in the algebra
        let n = 2;
        let eta = Permutation::eta(n);
        let c = CliffordElem::from_spin(&SpinWord::acute(&eta)).unwrap();
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq, CliffordElem::one(n).unwrap().neg());
        let hat = CliffordElem::from_quat(&SpinWord::hat(&eta)).unwrap();
        assert_eq!(sq, hat);
    }

    #[test]
    fn rank_cap_enforced() {
        assert!(matches!(
            CliffordElem::one(11),
            Err(Error::OracleRank(11, CLIFFORD_MAX_RANK))
        ));
    }

    #[test]
    fn associativity_random_against_oracle() {
        let n = 3;
        let all = QuatElem::all(n);
        let mut idx = 1usize;
        for trial in 0..1000 {
            idx = idx.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = &all[(idx >> 33) as usize % all.len()];
            idx = idx.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = &all[(idx >> 33) as usize % all.len()];
            idx = idx.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let c = &all[(idx >> 33) as usize % all.len()];
            let left = a.mul(b).unwrap().mul(c).unwrap();
            let right = a.mul(&b.mul(c).unwrap()).unwrap();
            assert_eq!(left, right, "trial {trial}");
            // and against the oracle
            let ca = CliffordElem::from_quat(a).unwrap();
            let cb = CliffordElem::from_quat(b).unwrap();
            let oracle = ca.mul(&cb).unwrap();
            assert_eq!(CliffordElem::from_quat(&a.mul(b).unwrap()).unwrap(), oracle);
        }
    }
}
