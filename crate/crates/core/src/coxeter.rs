//! The symmetric group S_{n+1} as the Coxeter group A_n: one-line
//! notation, inversions, reduced words, strong and weak Bruhat orders,
//! the join-like `vee` operation and multiplicity vectors.
//!
//! Composition follows the right-action convention
//! `k^{s1 s2} = (k^{s1})^{s2}`: `s1.compose(&s2)` applies `s1` first.
//! This is the opposite of many permutation libraries; all public
//! interfaces are 1-based.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Permutation of {1..n+1} in one-line notation; `images[k-1] = k^sigma`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Identity of S_{n+1} (rank n).
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n + 1).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let np1 = images.len();
        if np1 < 2 {
            return Err(Error::Invalid("need at least S_2 (rank 1)".into()));
        }
        let mut seen = vec![false; np1 + 1];
        for &v in &images {
            if v == 0 || v > np1 || seen[v] {
                return Err(Error::NotBijection(np1));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Coxeter generator a_i = (i, i+1) in S_{n+1}.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::GeneratorOutOfRange { index: i, max: n });
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        Ok(p)
    }

    /// The longest element eta: j -> n+2-j.
    pub fn eta(n: usize) -> Self {
        Permutation {
            images: (1..=n + 1).rev().collect(),
        }
    }

    /// Rank n; the group is S_{n+1}.
    pub fn rank(&self) -> usize {
        self.images.len() - 1
    }

    /// n+1, the number of points acted on.
    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// k^sigma, 1-based.
    pub fn image(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Right-action composition: k^(self other) = (k^self)^other.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&v| other.images[v - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.size()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    /// sigma a_i: swaps the values i, i+1 wherever they occur.
    pub fn right_mul_gen(&self, i: usize) -> Result<Permutation> {
        self.compose(&Permutation::generator(self.rank(), i)?)
    }

    /// a_i sigma: swaps the entries at positions i, i+1.
    pub fn left_mul_gen(&self, i: usize) -> Result<Permutation> {
        Permutation::generator(self.rank(), i)?.compose(self)
    }

    /// Set of inversions {(i, j) : i < j, i^sigma > j^sigma}.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let np1 = self.size();
        let mut out = Vec::new();
        for i in 1..=np1 {
            for j in i + 1..=np1 {
                if self.image(i) > self.image(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn inv(&self) -> usize {
        self.inversions().len()
    }

    /// Number of j > i with i^sigma > j^sigma.
    pub fn inv_i(&self, i: usize) -> usize {
        (i + 1..=self.size())
            .filter(|&j| self.image(i) > self.image(j))
            .count()
    }

    /// Descent positions: i with i^sigma > (i+1)^sigma.
    pub fn descents(&self) -> Vec<usize> {
        (1..=self.rank())
            .filter(|&i| self.image(i) > self.image(i + 1))
            .collect()
    }

    /// Multiplicity vector (mult_1, .., mult_n), mult_k = sum_{j<=k} (j^sigma - j).
    pub fn mult_vector(&self) -> MultVector {
        let mut entries = Vec::with_capacity(self.rank());
        let mut acc = 0i64;
        for k in 1..=self.rank() {
            acc += self.image(k) as i64 - k as i64;
            entries.push(acc);
        }
        MultVector { entries }
    }

    /// Reconstructs sigma from its multiplicity vector via
    /// k^sigma = k + mult_k - mult_{k-1}.
    pub fn from_mult_vector(d: &MultVector) -> Result<Permutation> {
        let n = d.entries.len();
        let mut images = Vec::with_capacity(n + 1);
        let mut prev = 0i64;
        for k in 1..=n + 1 {
            let cur = if k <= n { d.entries[k - 1] } else { 0 };
            let v = k as i64 + cur - prev;
            if v < 1 || v > n as i64 + 1 {
                return Err(Error::BadMultVector);
            }
            images.push(v as usize);
            prev = cur;
        }
        Permutation::from_images(images).map_err(|_| Error::BadMultVector)
    }

    /// Lexicographically smallest reduced word, built by repeatedly
    /// peeling the smallest descent: sigma = a_{i_1} a_{i_2} ... a_{i_k}.
    pub fn canonical_reduced_word(&self) -> ReducedWord {
        let mut letters = Vec::with_capacity(self.inv());
        let mut cur = self.clone();
        loop {
            let Some(&i) = cur.descents().first() else { break };
            letters.push(i);
            cur = cur.left_mul_gen(i).expect("descent in range");
        }
        ReducedWord { letters }
    }

    /// Permutation matrix P_sigma with e_k^T P = e_{k^sigma}^T.
    pub fn permutation_matrix<S: Scalar>(&self) -> Matrix<S> {
        let np1 = self.size();
        let mut m = Matrix::zeros(np1, np1);
        for k in 1..=np1 {
            m[(k - 1, self.image(k) - 1)] = S::one();
        }
        m
    }

    pub fn sign(&self) -> i8 {
        if self.inv() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All of S_{n+1} in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=n + 1).collect();
        loop {
            out.push(Permutation {
                images: images.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n).rev().find(|&i| images[i] < images[i + 1]) else {
                break;
            };
            let j = (i + 1..=n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }

    /// Strong Bruhat order by the rank-dominance criterion:
    /// self <= other iff for all i, k the count |{j <= k : j^self >= i}|
    /// never exceeds the same count for `other`.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let np1 = self.size();
        for k in 1..=np1 {
            for i in 1..=np1 {
                let c0 = (1..=k).filter(|&j| self.image(j) >= i).count();
                let c1 = (1..=k).filter(|&j| other.image(j) >= i).count();
                if c0 > c1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Strong-order oracle: scans subexpressions of a fixed reduced word
    /// of `other` for one multiplying to `self`. Exponential; for
    /// cross-checks at small rank.
    pub fn bruhat_leq_subwords(&self, other: &Permutation) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let w = other.canonical_reduced_word();
        let target_len = self.inv();
        if target_len > w.len() {
            return Ok(false);
        }
        let n = self.rank();
        let letters = w.letters();
        let total = 1usize << letters.len();
        for mask in 0..total {
            if (mask as u32).count_ones() as usize != target_len {
                continue;
            }
            let mut acc = Permutation::identity(n);
            for (pos, &letter) in letters.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    acc = acc.right_mul_gen(letter)?;
                }
            }
            if acc == *self {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All immediate predecessors in the strong order, by the rectangle
    /// rule on the permutation matrix.
    pub fn covers_below(&self) -> Vec<Permutation> {
        let np1 = self.size();
        let mut out = Vec::new();
        for i0 in 1..=np1 {
            for i1 in i0 + 1..=np1 {
                let (j1, j0) = (self.image(i0), self.image(i1));
                if j1 <= j0 {
                    continue;
                }
                // the open rectangle between (i0, j1) and (i1, j0) must
                // contain no positive entry
                let blocked = (i0 + 1..i1).any(|i| {
                    let v = self.image(i);
                    j0 < v && v < j1
                });
                if !blocked {
                    let mut images = self.images.clone();
                    images.swap(i0 - 1, i1 - 1);
                    out.push(Permutation { images });
                }
            }
        }
        out
    }

    /// Weak left order: self <=_L other iff Inv(self^-1) is contained in
    /// Inv(other^-1).
    pub fn weak_leq_left(&self, other: &Permutation) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let inv1 = other.inverse().inversions();
        Ok(self
            .inverse()
            .inversions()
            .iter()
            .all(|p| inv1.contains(p)))
    }

    /// Weak right order: self <=_R other iff Inv(self) is contained in
    /// Inv(other).
    pub fn weak_leq_right(&self, other: &Permutation) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let inv1 = other.inversions();
        Ok(self.inversions().iter().all(|p| inv1.contains(p)))
    }

    /// The smallest sigma with self <=_R sigma and other <=_L sigma,
    /// computed by folding `vee_gen` over a reduced word of `other`.
    pub fn vee(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let mut acc = self.clone();
        for &i in other.canonical_reduced_word().letters() {
            acc = acc.vee_gen(i)?;
        }
        Ok(acc)
    }

    /// sigma vee a_i: sigma if sigma a_i drops the length, else sigma a_i.
    pub fn vee_gen(&self, i: usize) -> Result<Permutation> {
        let si = self.right_mul_gen(i)?;
        if si.inv() > self.inv() {
            Ok(si)
        } else {
            Ok(self.clone())
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() <= 9 {
            write!(f, "[")?;
            for v in &self.images {
                write!(f, "{v}")?;
            }
            write!(f, "]")
        } else {
            write!(f, "[")?;
            for (i, v) in self.images.iter().enumerate() {
                write!(f, "{}{}", if i > 0 { "," } else { "" }, v)?;
            }
            write!(f, "]")
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<T: Serializer>(&self, s: T) -> std::result::Result<T::Ok, T::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(images).map_err(D::Error::custom)
    }
}

/// Word in the Coxeter generators; letters are 1-based indices.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord {
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(letters: Vec<usize>) -> Self {
        ReducedWord { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product a_{i_1} ... a_{i_k} in S_{n+1}.
    pub fn evaluate(&self, n: usize) -> Result<Permutation> {
        let mut acc = Permutation::identity(n);
        for &i in &self.letters {
            acc = acc.right_mul_gen(i)?;
        }
        Ok(acc)
    }

    /// A word is reduced iff its length equals inv of its product.
    pub fn is_reduced(&self, n: usize) -> Result<bool> {
        Ok(self.evaluate(n)?.inv() == self.len())
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for &i in &self.letters {
            write!(f, "a{i}")?;
        }
        Ok(())
    }
}

/// Multiplicity vector (mult_1 .. mult_n); mult_0 = mult_{n+1} = 0 by
/// convention.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultVector {
    entries: Vec<i64>,
}

impl MultVector {
    pub fn new(entries: Vec<i64>) -> Self {
        MultVector { entries }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn leq(&self, other: &MultVector) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MultVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            write!(f, "{}{}", if i > 0 { "," } else { "" }, e)?;
        }
        write!(f, ")")
    }
}

/// Parses "[4123]", "4123" or "4,1,2,3" into a permutation.
pub fn parse_permutation(s: &str) -> Result<Permutation> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let images: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Invalid(format!("bad permutation {s:?}")))?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid(format!("bad permutation {s:?}")))?
    };
    Permutation::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    #[test]
    fn compose_follows_right_action() {
        // a_1 a_2 = [312] in S_3
        let a1 = Permutation::generator(2, 1).unwrap();
        let a2 = Permutation::generator(2, 2).unwrap();
        assert_eq!(a1.compose(&a2).unwrap(), p("312"));
        let sigma = p("2431");
        assert_eq!(sigma.compose(&Permutation::identity(3)).unwrap(), sigma);
    }

    #[test]
    fn inverse_matches_brute_force_inversion() {
        let sigma = p("2431");
        // oracle: invert the image table directly
        let mut images = vec![0usize; 4];
        for k in 1..=4 {
            images[sigma.image(k) - 1] = k;
        }
        let expect = Permutation::from_images(images).unwrap();
        assert_eq!(sigma.inverse(), expect);
        assert_eq!(sigma.inverse(), p("4132"));
        assert!(sigma.compose(&sigma.inverse()).unwrap().is_identity());
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(Permutation::eta(3).inv(), 6);
        assert_eq!(Permutation::identity(4).inv(), 0);
        assert_eq!(p("612345").inv(), 5);
        // inv is additive over inv_i
        let sigma = p("429681735");
        assert_eq!(
            sigma.inv(),
            (1..=9).map(|i| sigma.inv_i(i)).sum::<usize>()
        );
    }

    #[test]
    fn inversions_split_along_eta() {
        // Inv(sigma) and Inv(sigma eta) partition Inv(eta)
        for sigma in Permutation::all(3) {
            let rho = sigma.compose(&Permutation::eta(3)).unwrap();
            let mut both = sigma.inversions();
            both.extend(rho.inversions());
            both.sort_unstable();
            let mut eta_inv = Permutation::eta(3).inversions();
            eta_inv.sort_unstable();
            assert_eq!(both, eta_inv, "sigma = {sigma}");
        }
    }

    #[test]
    fn mult_vector_examples() {
        assert_eq!(p("432156").mult_vector().entries(), &[3, 4, 3, 0, 0]);
        assert_eq!(p("7123456").mult_vector().entries(), &[6, 5, 4, 3, 2, 1]);
        assert_eq!(p("612345").mult_vector().entries(), &[5, 4, 3, 2, 1]);
        assert_eq!(
            Permutation::identity(4).mult_vector().entries(),
            &[0, 0, 0, 0]
        );
    }

    #[test]
    fn mult_vector_round_trip() {
        for sigma in Permutation::all(4) {
            let d = sigma.mult_vector();
            assert_eq!(Permutation::from_mult_vector(&d).unwrap(), sigma);
        }
        // mult bounds: 0 <= mult_k <= k(n+1-k)
        let eta = Permutation::eta(5);
        let d = eta.mult_vector();
        for (k, &m) in d.entries().iter().enumerate() {
            let k = k as i64 + 1;
            assert_eq!(m, k * (6 - k));
        }
    }

    #[test]
    fn from_mult_vector_rejects_non_bijection() {
        let bad = MultVector::new(vec![2, 0, 0]);
        assert!(Permutation::from_mult_vector(&bad).is_err());
    }

    #[test]
    fn canonical_word_is_lex_smallest() {
        // brute-force: enumerate all reduced words by DFS over descents
        fn all_reduced_words(sigma: &Permutation) -> Vec<Vec<usize>> {
            if sigma.is_identity() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for i in sigma.descents() {
                let rest = sigma.left_mul_gen(i).unwrap();
                for mut w in all_reduced_words(&rest) {
                    w.insert(0, i);
                    out.push(w);
                }
            }
            out
        }
        for sigma in Permutation::all(3) {
            let mut words = all_reduced_words(&sigma);
            words.sort();
            let canon = sigma.canonical_reduced_word();
            assert_eq!(canon.letters(), words[0].as_slice(), "sigma = {sigma}");
            assert_eq!(canon.len(), sigma.inv());
            assert_eq!(canon.evaluate(3).unwrap(), sigma);
        }
    }

    #[test]
    fn eta_word_shape() {
        // eta = a1 a2 a1 a3 a2 a1 ... a_n ... a1
        let w = Permutation::eta(3).canonical_reduced_word();
        assert_eq!(w.letters(), &[1, 2, 1, 3, 2, 1]);
    }

    #[test]
    fn evaluate_word_examples() {
        let w = ReducedWord::new(vec![1, 2, 3, 4, 3, 2, 1]);
        let sigma = w.evaluate(4).unwrap();
        assert_eq!(sigma, p("52341")); // the transposition (1,5)
        assert!(w.is_reduced(4).unwrap());
        assert!(ReducedWord::new(vec![]).evaluate(2).unwrap().is_identity());
        assert!(!ReducedWord::new(vec![1, 1]).is_reduced(2).unwrap());
    }

    #[test]
    fn fig1_word_is_reduced() {
        let w = ReducedWord::new(vec![1, 3, 4, 5, 4, 3, 2, 1, 6, 5, 7, 6, 5, 4, 3, 8, 7, 6, 5]);
        assert!(w.is_reduced(8).unwrap());
        assert_eq!(w.evaluate(8).unwrap(), p("429681735"));
    }

    #[test]
    fn bruhat_and_weak_order_examples() {
        let s1 = p("2143");
        let s0 = p("4123");
        assert!(s1.bruhat_leq(&s0).unwrap());
        assert!(!s1.weak_leq_left(&s0).unwrap());
        assert!(!s1.weak_leq_right(&s0).unwrap());
        assert!(s1.weak_leq_left(&s1).unwrap());
        let e = Permutation::identity(3);
        for sigma in Permutation::all(3) {
            assert!(e.bruhat_leq(&sigma).unwrap());
        }
    }

    #[test]
    fn bruhat_hasse_matches_subword_enumeration_s3() {
        let all = Permutation::all(2);
        for a in &all {
            for b in &all {
                assert_eq!(
                    a.bruhat_leq(b).unwrap(),
                    a.bruhat_leq_subwords(b).unwrap(),
                    "{a} <= {b}"
                );
            }
        }
    }

    #[test]
    fn covers_below_raise_inv_by_one() {
        for sigma in Permutation::all(3) {
            for tau in sigma.covers_below() {
                assert_eq!(tau.inv() + 1, sigma.inv());
                assert!(tau.bruhat_leq(&sigma).unwrap());
            }
            // covers found by the rectangle rule match the rank-1 drops
            let count = Permutation::all(3)
                .into_iter()
                .filter(|t| t.inv() + 1 == sigma.inv() && t.bruhat_leq(&sigma).unwrap())
                .count();
            assert_eq!(count, sigma.covers_below().len(), "sigma = {sigma}");
        }
    }

    #[test]
    fn lessdot_mult_jump() {
        // if sigma0 <. sigma1 = (i0 i1) sigma0 = sigma0 (j0 j1), then
        // mult_k jumps by (j1 - j0) exactly on i0 <= k < i1
        for sigma1 in Permutation::all(3) {
            for sigma0 in sigma1.covers_below() {
                let (mut i0, mut i1, mut j0, mut j1) = (0, 0, 0, 0);
                for k in 1..=4 {
                    if sigma0.image(k) != sigma1.image(k) {
                        if i0 == 0 {
                            i0 = k;
                            j0 = sigma0.image(k).min(sigma1.image(k));
                            j1 = sigma0.image(k).max(sigma1.image(k));
                        } else {
                            i1 = k;
                        }
                    }
                }
                let d0 = sigma0.mult_vector();
                let d1 = sigma1.mult_vector();
                for k in 1..=3usize {
                    let jump = if i0 <= k && k < i1 { (j1 - j0) as i64 } else { 0 };
                    assert_eq!(d1.entries()[k - 1], d0.entries()[k - 1] + jump);
                }
            }
        }
    }

    #[test]
    fn lemma_invpi() {
        for sigma in Permutation::all(3) {
            let inv_sigma = sigma.inverse();
            for i in 1..=4usize {
                let lhs = sigma.inv_i(i) as i64 - inv_sigma.inv_i(sigma.image(i)) as i64;
                assert_eq!(lhs, sigma.image(i) as i64 - i as i64);
            }
        }
    }

    #[test]
    fn lemma_aij_commuting_covers() {
        for sigma in Permutation::all(3) {
            for i in 1..=3usize {
                for j in 1..=3usize {
                    if i.abs_diff(j) <= 1 {
                        continue;
                    }
                    let lhs = sigma.right_mul_gen(i).unwrap().inv() > sigma.inv();
                    let sj = sigma.right_mul_gen(j).unwrap();
                    let rhs = sj.right_mul_gen(i).unwrap().inv() > sj.inv();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn bruhat_monotone_in_mult_and_inv() {
        let all = Permutation::all(3);
        for a in &all {
            for b in &all {
                if a.bruhat_leq(b).unwrap() {
                    assert!(a.mult_vector().leq(&b.mult_vector()));
                    assert!(a.inv() <= b.inv());
                }
            }
        }
    }

    #[test]
    fn inversion_set_characterization() {
        // a set of pairs is an inversion set iff both closure conditions
        // hold; enumerate all subsets for n = 3
        let np1 = 4usize;
        let pairs: Vec<(usize, usize)> = (1..=np1)
            .flat_map(|i| (i + 1..=np1).map(move |j| (i, j)))
            .collect();
        let realizable: std::collections::HashSet<Vec<(usize, usize)>> = Permutation::all(3)
            .into_iter()
            .map(|s| {
                let mut v = s.inversions();
                v.sort_unstable();
                v
            })
            .collect();
        for mask in 0..(1usize << pairs.len()) {
            let set: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(idx, _)| mask & (1 << idx) != 0)
                .map(|(_, &p)| p)
                .collect();
            let has = |a: usize, b: usize| set.contains(&(a, b));
            let mut closed = true;
            for i in 1..=np1 {
                for j in i + 1..=np1 {
                    for k in j + 1..=np1 {
                        if has(i, j) && has(j, k) && !has(i, k) {
                            closed = false;
                        }
                        if !has(i, j) && !has(j, k) && has(i, k) {
                            closed = false;
                        }
                    }
                }
            }
            assert_eq!(closed, realizable.contains(&set), "set = {set:?}");
        }
    }

    #[test]
    fn vee_examples() {
        let s0 = p("2413");
        let s1 = p("2431");
        assert_eq!(s0.vee(&s1).unwrap(), Permutation::eta(3));
        for sigma in Permutation::all(3) {
            assert_eq!(sigma.vee(&Permutation::identity(3)).unwrap(), sigma);
            assert_eq!(
                Permutation::eta(3).vee(&sigma).unwrap(),
                Permutation::eta(3)
            );
        }
    }

    #[test]
    fn vee_upper_bound_and_subword_maximum() {
        // vee lands above s0 in the right weak order and above s1 in the
        // left weak order, and is the Bruhat maximum of products of s0
        // with elements below s1; brute-forced over all of S_4 x S_4.
        // (The minimum of the set of common weak upper bounds is a
        // strictly weaker notion: s0 vee s0 can exceed s0.)
        let all = Permutation::all(3);
        for s0 in &all {
            for s1 in &all {
                let v = s0.vee(s1).unwrap();
                assert!(s0.weak_leq_right(&v).unwrap(), "{s0} vee {s1} = {v}");
                assert!(s1.weak_leq_left(&v).unwrap(), "{s0} vee {s1} = {v}");
                let mut is_max = true;
                let mut attained = false;
                for u in &all {
                    if !u.bruhat_leq(s1).unwrap() {
                        continue;
                    }
                    let prod = s0.compose(u).unwrap();
                    if prod == v {
                        attained = true;
                    }
                    if !prod.bruhat_leq(&v).unwrap() {
                        is_max = false;
                    }
                }
                assert!(attained && is_max, "{s0} vee {s1} = {v}");
            }
        }
    }

    #[test]
    fn vee_self_can_grow() {
        // the paper's own remark: s vee s need not equal s
        let s = p("1342");
        assert_eq!(s.vee(&s).unwrap(), p("1432"));
    }

    #[test]
    fn eta_vee_is_minimum_upper_bound() {
        // for s0 = eta the common-upper-bound minimum exists and is eta
        let all = Permutation::all(3);
        let eta = Permutation::eta(3);
        for s1 in &all {
            let v = eta.vee(s1).unwrap();
            assert_eq!(v, eta);
            let candidates: Vec<&Permutation> = all
                .iter()
                .filter(|t| {
                    eta.weak_leq_right(t).unwrap() && s1.weak_leq_left(t).unwrap()
                })
                .collect();
            assert!(candidates.iter().all(|t| v.bruhat_leq(t).unwrap()));
            assert!(candidates.contains(&&v));
        }
    }

    #[test]
    fn vee_associative_exhaustive_rank2() {
        let all = Permutation::all(2);
        for a in &all {
            for b in &all {
                for c in &all {
                    let left = a.vee(b).unwrap().vee(c).unwrap();
                    let right = a.vee(&b.vee(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("4123").to_string(), "[4123]");
        assert_eq!(parse_permutation("[2,1,3]").unwrap(), p("213"));
        let sigma = p("2431");
        let json = serde_json::to_string(&sigma).unwrap();
        assert_eq!(json, "[2,4,3,1]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), sigma);
        assert!(serde_json::from_str::<Permutation>("[1,1,2]").is_err());
    }
}
