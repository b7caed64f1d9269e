//! Exact arithmetic in the lift of the even signed permutation group to
//! the spin group: signed monomials in the hat generators, canonical
//! (quat, permutation) words, the acute/grave/hat maps, chop/adv labels
//! and the projection to signed permutation matrices.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bruhat::SignedPermMatrix;
use crate::coxeter::{Permutation, ReducedWord};
use crate::error::{Error, Result};

/// Element of Quat_{n+1}: a signed monomial
/// `sign * ahat_1^{e_1} ... ahat_n^{e_n}`, e_j in {0,1}.
///
/// Generator relations: ahat_j^2 = -1; adjacent generators anticommute,
/// distant ones commute.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuatElem {
    sign: i8,
    exps: Vec<u8>,
}

impl QuatElem {
    pub fn one(n: usize) -> Self {
        QuatElem {
            sign: 1,
            exps: vec![0; n],
        }
    }

    pub fn minus_one(n: usize) -> Self {
        QuatElem {
            sign: -1,
            exps: vec![0; n],
        }
    }

    /// The generator ahat_j.
    pub fn hat_gen(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, max: n });
        }
        let mut exps = vec![0; n];
        exps[j - 1] = 1;
        Ok(QuatElem { sign: 1, exps })
    }

    pub fn from_parts(sign: i8, exps: Vec<u8>) -> Result<Self> {
        if sign != 1 && sign != -1 || exps.iter().any(|&e| e > 1) {
            return Err(Error::Invalid("sign must be +-1, exponents 0/1".into()));
        }
        Ok(QuatElem { sign, exps })
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_scalar(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn neg(&self) -> Self {
        QuatElem {
            sign: -self.sign,
            exps: self.exps.clone(),
        }
    }

    /// Right-multiplies the canonical monomial by ahat_i in place.
    fn right_mul_hat(&mut self, i: usize) {
        let n = self.exps.len();
        debug_assert!(i >= 1 && i <= n);
        // move ahat_i left past higher-index factors: only ahat_{i+1}
        // anticommutes with it
        if i < n && self.exps[i] == 1 {
            self.sign = -self.sign;
        }
        if self.exps[i - 1] == 1 {
            // ahat_i^2 = -1
            self.sign = -self.sign;
            self.exps[i - 1] = 0;
        } else {
            self.exps[i - 1] = 1;
        }
    }

    pub fn mul(&self, rhs: &QuatElem) -> Result<QuatElem> {
        if self.rank() != rhs.rank() {
            return Err(Error::RankMismatch(self.rank(), rhs.rank()));
        }
        let mut out = self.clone();
        out.sign *= rhs.sign;
        for i in 1..=rhs.rank() {
            if rhs.exps[i - 1] == 1 {
                out.right_mul_hat(i);
            }
        }
        Ok(out)
    }

    pub fn inv(&self) -> QuatElem {
        // q^2 is +-1, so q^{-1} = q^2 * q up to that sign
        let sq = self.mul(self).expect("same rank");
        debug_assert!(sq.is_scalar());
        if sq.sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Diagonal of the projected matrix: entry i is (-1)^{e_{i-1} + e_i}
    /// with e_0 = e_{n+1} = 0.
    pub fn pi_diag(&self) -> Vec<i8> {
        let n = self.rank();
        (0..=n)
            .map(|i| {
                let lo = if i > 0 { self.exps[i - 1] } else { 0 };
                let hi = if i < n { self.exps[i] } else { 0 };
                if (lo + hi) % 2 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect()
    }

    /// The +1 representative projecting to the given diagonal; errors if
    /// the diagonal has odd sign count (not in the image).
    pub fn from_pi_diag(diag: &[i8]) -> Result<QuatElem> {
        let n = diag.len() - 1;
        let mut exps = vec![0u8; n];
        let mut run = 0u8;
        for i in 1..=n {
            if diag[i - 1] == -1 {
                run ^= 1;
            }
            exps[i - 1] = run;
        }
        let parity = diag.iter().filter(|&&d| d == -1).count();
        if parity % 2 != 0 {
            return Err(Error::Invalid("diagonal has determinant -1".into()));
        }
        Ok(QuatElem { sign: 1, exps })
    }

    /// All 2^{n+1} elements.
    pub fn all(n: usize) -> Vec<QuatElem> {
        let mut out = Vec::with_capacity(1 << (n + 1));
        for mask in 0..(1usize << n) {
            let exps: Vec<u8> = (0..n).map(|j| ((mask >> j) & 1) as u8).collect();
            for sign in [1i8, -1] {
                out.push(QuatElem {
                    sign,
                    exps: exps.clone(),
                });
            }
        }
        out
    }
}

impl fmt::Display for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign > 0 { "+" } else { "-" })?;
        if self.is_scalar() {
            return write!(f, "1");
        }
        for (j, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                write!(f, "a{}", j + 1)?;
            }
        }
        Ok(())
    }
}

/// Element `z = q * acute(sigma)` of the lift of the even signed
/// permutation group; the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpinWord {
    q: QuatElem,
    sigma: Permutation,
}

impl SpinWord {
    pub fn identity(n: usize) -> Self {
        SpinWord {
            q: QuatElem::one(n),
            sigma: Permutation::identity(n),
        }
    }

    pub fn from_parts(q: QuatElem, sigma: Permutation) -> Result<Self> {
        if q.rank() != sigma.rank() {
            return Err(Error::RankMismatch(q.rank(), sigma.rank()));
        }
        Ok(SpinWord { q, sigma })
    }

    pub fn from_quat(q: QuatElem) -> Self {
        let sigma = Permutation::identity(q.rank());
        SpinWord { q, sigma }
    }

    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    pub fn quat_part(&self) -> &QuatElem {
        &self.q
    }

    pub fn sigma_part(&self) -> &Permutation {
        &self.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.q.is_one() && self.sigma.is_identity()
    }

    pub fn neg(&self) -> Self {
        SpinWord {
            q: self.q.neg(),
            sigma: self.sigma.clone(),
        }
    }

    /// acute(sigma): the canonical lift with trivial quat part.
    pub fn acute(sigma: &Permutation) -> Self {
        SpinWord {
            q: QuatElem::one(sigma.rank()),
            sigma: sigma.clone(),
        }
    }

    /// grave(sigma) = product of inverse acute generators along a
    /// reduced word.
    pub fn grave(sigma: &Permutation) -> Self {
        let mut acc = SpinWord::identity(sigma.rank());
        for &j in sigma.canonical_reduced_word().letters() {
            acc = acc.right_mul_gen(j, true).expect("letter in range");
        }
        acc
    }

    /// hat(sigma) = acute(sigma) grave(sigma)^{-1}, computed by the
    /// parity recursion along the canonical reduced word: peeling
    /// sigma = a_i sigma' contributes ahat_i exactly when the swapped
    /// values differ by an odd amount.
    pub fn hat(sigma: &Permutation) -> QuatElem {
        let n = sigma.rank();
        let mut acc = QuatElem::one(n);
        let mut cur = sigma.clone();
        for &i in sigma.canonical_reduced_word().letters() {
            let nxt = cur.left_mul_gen(i).expect("letter in range");
            let delta = nxt.image(i + 1) as i64 - nxt.image(i) as i64;
            debug_assert!(delta > 0);
            if delta % 2 == 1 {
                acc = acc
                    .mul(&QuatElem::hat_gen(n, i).expect("letter in range"))
                    .expect("same rank");
            }
            cur = nxt;
        }
        debug_assert!(cur.is_identity());
        acc
    }

    /// Monomial exponents of hat(sigma) predicted by the multiplicity
    /// vector: e_j = mult_j(sigma) mod 2. The sign is not determined by
    /// this route.
    pub fn hat_monomial_exps(sigma: &Permutation) -> Vec<u8> {
        sigma
            .mult_vector()
            .entries()
            .iter()
            .map(|&m| (m.rem_euclid(2)) as u8)
            .collect()
    }

    /// Conjugation acute(sigma) q acute(sigma)^{-1}, generator by
    /// generator along the canonical reduced word.
    pub fn conj_quat_by_acute(sigma: &Permutation, q: &QuatElem) -> QuatElem {
        let mut cur = q.clone();
        for &j in sigma.canonical_reduced_word().letters().iter().rev() {
            cur = Self::conj_quat_by_gen(j, &cur);
        }
        cur
    }

    /// aacute_j q aacute_j^{-1} for a monomial q: each factor ahat_i
    /// maps to itself unless |i-j| = 1, where it maps to ahat_j ahat_i.
    fn conj_quat_by_gen(j: usize, q: &QuatElem) -> QuatElem {
        let n = q.rank();
        let mut out = if q.sign() > 0 {
            QuatElem::one(n)
        } else {
            QuatElem::minus_one(n)
        };
        for i in 1..=n {
            if q.exps[i - 1] == 0 {
                continue;
            }
            let factor = if i.abs_diff(j) == 1 {
                QuatElem::hat_gen(n, j)
                    .unwrap()
                    .mul(&QuatElem::hat_gen(n, i).unwrap())
                    .unwrap()
            } else {
                QuatElem::hat_gen(n, i).unwrap()
            };
            out = out.mul(&factor).unwrap();
        }
        out
    }

    /// Right-multiplies by aacute_j (or agrave_j when `inverse`),
    /// keeping the canonical (q, sigma) form.
    pub fn right_mul_gen(&self, j: usize, inverse: bool) -> Result<SpinWord> {
        let n = self.rank();
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, max: n });
        }
        let new_sigma = self.sigma.right_mul_gen(j)?;
        let lengthens = new_sigma.inv() > self.sigma.inv();
        let q = match (inverse, lengthens) {
            (false, true) | (true, false) => self.q.clone(),
            (false, false) => {
                // acute(sigma) aacute_j = C(ahat_j) acute(sigma a_j)
                let c = Self::conj_quat_by_acute(&new_sigma, &QuatElem::hat_gen(n, j)?);
                self.q.mul(&c)?
            }
            (true, true) => {
                // acute(sigma) agrave_j = -C(ahat_j) acute(sigma a_j)
                let c = Self::conj_quat_by_acute(&new_sigma, &QuatElem::hat_gen(n, j)?);
                self.q.mul(&c.neg())?
            }
        };
        Ok(SpinWord { q, sigma: new_sigma })
    }

    /// Right-multiplies by a quat element.
    pub fn right_mul_quat(&self, q: &QuatElem) -> Result<SpinWord> {
        let c = Self::conj_quat_by_acute(&self.sigma, q);
        Ok(SpinWord {
            q: self.q.mul(&c)?,
            sigma: self.sigma.clone(),
        })
    }

    pub fn mul(&self, rhs: &SpinWord) -> Result<SpinWord> {
        if self.rank() != rhs.rank() {
            return Err(Error::RankMismatch(self.rank(), rhs.rank()));
        }
        let mut acc = self.right_mul_quat(&rhs.q)?;
        for &j in rhs.sigma.canonical_reduced_word().letters() {
            acc = acc.right_mul_gen(j, false)?;
        }
        Ok(acc)
    }

    pub fn inv(&self) -> SpinWord {
        // (q acute(sigma))^{-1} = grave-of-reversed-word * q^{-1}
        let mut acc = SpinWord::identity(self.rank());
        for &j in self
            .sigma
            .canonical_reduced_word()
            .letters()
            .iter()
            .rev()
        {
            acc = acc.right_mul_gen(j, true).expect("letter in range");
        }
        acc.right_mul_quat(&self.q.inv()).expect("same rank")
    }

    /// z * aacute_j^k for signed k.
    pub fn pow_gen(&self, j: usize, k: i64) -> Result<SpinWord> {
        let mut acc = self.clone();
        for _ in 0..k.unsigned_abs() {
            acc = acc.right_mul_gen(j, k < 0)?;
        }
        Ok(acc)
    }

    /// The 2-to-1 projection to signed permutation matrices: row i has
    /// its nonzero entry at column i^sigma with sign
    /// (diag of q at i) * (-1)^{inv_i(sigma)}.
    pub fn pi_so(&self) -> SignedPermMatrix {
        let diag = self.q.pi_diag();
        let signs: Vec<i8> = (1..=self.rank() + 1)
            .map(|i| {
                let s = if self.sigma.inv_i(i) % 2 == 1 { -1 } else { 1 };
                diag[i - 1] * s
            })
            .collect();
        SignedPermMatrix::new(self.sigma.clone(), signs).expect("projection is in B+")
    }

    /// Open-cell label reached immediately after this element by any
    /// locally convex curve: adv(z) = z * acute(rho^{-1}) with
    /// rho = eta sigma.
    pub fn adv_label(&self) -> SpinWord {
        let eta = Permutation::eta(self.rank());
        let rho = eta.compose(&self.sigma).expect("same rank");
        let rho_inv = rho.inverse();
        self.mul(&SpinWord::acute(&rho_inv)).expect("same rank")
    }

    /// Open-cell label reached immediately before: chop(z) acute(rho) = z.
    pub fn chop_label(&self) -> SpinWord {
        let eta = Permutation::eta(self.rank());
        let rho = eta.compose(&self.sigma).expect("same rank");
        self.mul(&SpinWord::acute(&rho).inv()).expect("same rank")
    }

    /// All 2^{n+1} (n+1)! elements.
    pub fn all(n: usize) -> Vec<SpinWord> {
        let quats = QuatElem::all(n);
        Permutation::all(n)
            .into_iter()
            .flat_map(|sigma| {
                quats.iter().map(move |q| SpinWord {
                    q: q.clone(),
                    sigma: sigma.clone(),
                })
            })
            .collect()
    }
}

impl fmt::Display for SpinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} · acute{}", self.q, self.sigma)
    }
}

#[derive(Serialize, Deserialize)]
struct SpinWordWire {
    sign: i8,
    exps: Vec<u8>,
    sigma: Permutation,
}

impl Serialize for SpinWord {
    fn serialize<T: Serializer>(&self, s: T) -> std::result::Result<T::Ok, T::Error> {
        SpinWordWire {
            sign: self.q.sign(),
            exps: self.q.exps().to_vec(),
            sigma: self.sigma.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpinWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SpinWordWire::deserialize(d)?;
        let q = QuatElem::from_parts(w.sign, w.exps).map_err(D::Error::custom)?;
        SpinWord::from_parts(q, w.sigma).map_err(D::Error::custom)
    }
}

/// Evaluates a mixed word `(aacute_{i_1})^{e_1} ... (aacute_{i_k})^{e_k}`
/// with signs e in {+1, -1}.
pub fn signed_acute_product(n: usize, word: &ReducedWord, signs: &[i8]) -> Result<SpinWord> {
    if word.len() != signs.len() {
        return Err(Error::Invalid("word and sign lengths differ".into()));
    }
    let mut acc = SpinWord::identity(n);
    for (&j, &s) in word.letters().iter().zip(signs) {
        if s != 1 && s != -1 {
            return Err(Error::Invalid("signs must be +-1".into()));
        }
        acc = acc.right_mul_gen(j, s < 0)?;
    }
    Ok(acc)
}
