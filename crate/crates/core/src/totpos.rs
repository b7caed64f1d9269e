//! Totally positive and totally negative cells in the nilpotent lower
//! triangular group: parameterization by reduced words, exact
//! minor-sign membership, factorization back to parameters, the braid
//! transition between adjacent parameterizations, and the partial
//! orders induced by the positive semigroup.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charts::lambda_gen;
use crate::coxeter::{Permutation, ReducedWord};
use crate::error::{Error, Result};
use crate::matrix::{exterior_power_unit_lower, IndexSet, Matrix};
use crate::scalar::{Rat, Scalar};

/// Parameters of a cell point: a reduced word and one time per letter.
/// All positive for the positive cell, all negative for the negative
/// one; mixed signs are legal inputs for cell prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct PosParams {
    pub word: ReducedWord,
    pub times: Vec<Rat>,
}

impl Serialize for PosParams {
    fn serialize<T: Serializer>(&self, s: T) -> std::result::Result<T::Ok, T::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            word: &'a ReducedWord,
            times: Vec<String>,
        }
        Wire {
            word: &self.word,
            times: self.times.iter().map(|t| t.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PosParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            word: ReducedWord,
            times: Vec<String>,
        }
        let w = Wire::deserialize(d)?;
        let times = w
            .times
            .iter()
            .map(|s| Rat::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(PosParams {
            word: w.word,
            times,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

/// Label of a positivity cell: the permutation and the side.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PosCellLabel {
    pub sigma: Permutation,
    pub orientation: Orientation,
}

/// Product of Jacobi factors lambda_{i_1}(t_1) ... lambda_{i_k}(t_k)
/// in S_{n+1}-sized matrices.
pub fn pos_from_params(n: usize, params: &PosParams) -> Result<Matrix<Rat>> {
    if params.word.len() != params.times.len() {
        return Err(Error::Invalid("word and times lengths differ".into()));
    }
    let np1 = n + 1;
    let mut acc = Matrix::<Rat>::identity(np1);
    for (&j, t) in params.word.letters().iter().zip(&params.times) {
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, max: n });
        }
        acc = acc.mul(&lambda_gen(np1, j, t));
    }
    Ok(acc)
}

/// Times of the braid move
/// lambda_i(t1) lambda_{i+1}(t2) lambda_i(t3)
///   = lambda_{i+1}(s1) lambda_i(s2) lambda_{i+1}(s3):
/// s1 = t2 t3/(t1+t3), s2 = t1+t3, s3 = t1 t2/(t1+t3).
pub fn ababab_transition(t1: &Rat, t2: &Rat, t3: &Rat) -> Result<(Rat, Rat, Rat)> {
    let s2 = t1.clone() + t3.clone();
    if s2.is_zero() {
        return Err(Error::BraidPole);
    }
    let s1 = t2.clone() * t3.clone() / s2.clone();
    let s3 = t1.clone() * t2.clone() / s2.clone();
    Ok((s1, s2, s3))
}

fn mask_of(set: &IndexSet) -> u32 {
    set.elems().iter().fold(0u32, |m, &e| m | (1 << (e - 1)))
}

fn set_of(mask: u32, _np1: usize) -> IndexSet {
    let elems = (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b + 1)
        .collect();
    IndexSet::new(elems).expect("mask yields valid set")
}

/// Masks reachable from `start` by arrow steps along subwords of
/// sigma's canonical reduced word.
fn reachable_masks(start: u32, sigma: &Permutation) -> Vec<u32> {
    let word = sigma.canonical_reduced_word();
    let mut reach = vec![start];
    let mut member = HashMap::new();
    member.insert(start, ());
    for &j in word.letters() {
        let hi = 1u32 << j; // bit of j+1
        let lo = 1u32 << (j - 1); // bit of j
        let mut new = Vec::new();
        for &m in &reach {
            if m & hi != 0 && m & lo == 0 {
                let t = (m ^ hi) | lo;
                if !member.contains_key(&t) {
                    new.push(t);
                }
            }
        }
        for t in new {
            member.insert(t, ());
            reach.push(t);
        }
    }
    reach
}

/// Whether some reduced subword of sigma moves i0 down to i1 along
/// arrow steps. DP over (position in the canonical word, current set).
pub fn path_exists(i0: &IndexSet, i1: &IndexSet, sigma: &Permutation) -> Result<bool> {
    if i0.len() != i1.len() {
        return Err(Error::Invalid("index sets of different size".into()));
    }
    if i0 == i1 {
        return Ok(true);
    }
    if !i1.leq(i0) {
        return Ok(false);
    }
    let target = mask_of(i1);
    Ok(reachable_masks(mask_of(i0), sigma).contains(&target))
}

/// Sign pattern of a cell: for each k, the set of (i0, i1) mask pairs
/// whose minors are strictly positive on the cell; all other minors
/// with i0 >= i1 vanish there.
pub struct CellPattern {
    positive: Vec<std::collections::HashSet<(u32, u32)>>,
}

impl CellPattern {
    pub fn of(sigma: &Permutation) -> CellPattern {
        let np1 = sigma.size();
        let mut positive = Vec::with_capacity(np1);
        for k in 1..=np1 {
            let mut set = std::collections::HashSet::new();
            for i0 in IndexSet::all(np1, k) {
                let m0 = mask_of(&i0);
                for m1 in reachable_masks(m0, sigma) {
                    set.insert((m0, m1));
                }
            }
            positive.push(set);
        }
        CellPattern { positive }
    }

    pub fn is_positive(&self, k: usize, i0: u32, i1: u32) -> bool {
        self.positive[k - 1].contains(&(i0, i1))
    }
}

/// A minor whose sign contradicts membership.
#[derive(Clone, Debug, Serialize)]
pub struct MinorViolation {
    pub k: usize,
    pub i0: IndexSet,
    pub i1: IndexSet,
    pub expected_positive: bool,
    pub actual_sign: i8,
}

/// Exact membership of a unit lower-triangular matrix in the positive
/// cell of sigma, by comparing every minor sign against the
/// path-existence pattern. Returns the first violated minor on failure.
pub fn pos_membership_report(
    l: &Matrix<Rat>,
    sigma: &Permutation,
) -> Result<std::result::Result<(), MinorViolation>> {
    if !l.is_lower_unitriangular() {
        return Err(Error::Invalid("not unit lower triangular".into()));
    }
    if l.nrows() != sigma.size() {
        return Err(Error::RankMismatch(l.nrows(), sigma.size()));
    }
    let np1 = l.nrows();
    let pattern = CellPattern::of(sigma);
    for k in 1..=np1 {
        let ext = exterior_power_unit_lower(l, k)?;
        for (r, i0) in ext.sets.iter().enumerate() {
            for (c, i1) in ext.sets.iter().enumerate() {
                if !i1.leq(i0) {
                    continue;
                }
                let v = &ext.mat[(r, c)];
                let expected = pattern.is_positive(k, mask_of(i0), mask_of(i1));
                let ok = if expected {
                    v.is_positive()
                } else {
                    v.is_zero()
                };
                if !ok {
                    return Ok(Err(MinorViolation {
                        k,
                        i0: i0.clone(),
                        i1: i1.clone(),
                        expected_positive: expected,
                        actual_sign: if v.is_zero() {
                            0
                        } else if v.is_positive() {
                            1
                        } else {
                            -1
                        },
                    }));
                }
            }
        }
    }
    Ok(Ok(()))
}

pub fn pos_membership(l: &Matrix<Rat>, sigma: &Permutation) -> Result<bool> {
    pos_membership_report(l, sigma).map(|r| r.is_ok())
}

/// Whether every minor with i0 >= i1 is nonnegative (closure of the
/// positive big cell).
pub fn in_pos_closure(l: &Matrix<Rat>) -> Result<bool> {
    if !l.is_lower_unitriangular() {
        return Err(Error::Invalid("not unit lower triangular".into()));
    }
    let np1 = l.nrows();
    for k in 1..=np1 {
        let ext = exterior_power_unit_lower(l, k)?;
        for (r, i0) in ext.sets.iter().enumerate() {
            for (c, i1) in ext.sets.iter().enumerate() {
                if i1.leq(i0) && ext.mat[(r, c)].is_negative() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The mirror X L X with X = diag(1, -1, 1, ...): swaps the positive
/// and negative strata.
pub fn neg_mirror(l: &Matrix<Rat>) -> Matrix<Rat> {
    Matrix::from_fn(l.nrows(), l.ncols(), |i, j| {
        let v = l[(i, j)].clone();
        if (i + j) % 2 == 1 {
            -v
        } else {
            v
        }
    })
}

/// Finds the unique cell of the closure stratification containing L, on
/// either side; `None` when L is in neither closure. Scans S_{n+1}
/// pruned by the letter support of the first subdiagonal.
pub fn cell_of_closure(l: &Matrix<Rat>) -> Result<Option<PosCellLabel>> {
    if !l.is_lower_unitriangular() {
        return Err(Error::Invalid("not unit lower triangular".into()));
    }
    for (candidate, orientation) in [
        (l.clone(), Orientation::Positive),
        (neg_mirror(l), Orientation::Negative),
    ] {
        if !in_pos_closure(&candidate)? {
            continue;
        }
        let n = l.nrows() - 1;
        let support: Vec<bool> = (1..=n)
            .map(|j| !candidate[(j, j - 1)].is_zero())
            .collect();
        for sigma in Permutation::all(n) {
            let word = sigma.canonical_reduced_word();
            let word_support: Vec<bool> =
                (1..=n).map(|j| word.letters().contains(&j)).collect();
            if word_support != support {
                continue;
            }
            if pos_membership(&candidate, &sigma)? {
                if orientation == Orientation::Negative && sigma.is_identity() {
                    // I is the intersection of both closures; report it
                    // on the positive side only
                    continue;
                }
                return Ok(Some(PosCellLabel { sigma, orientation }));
            }
        }
    }
    Ok(None)
}

/// Exact factorization of a cell point through a reduced word: peels
/// the last letter by solving the affine vanishing of the
/// distinguishing minor; no search and no tolerance.
pub fn pos_factorize(l: &Matrix<Rat>, word: &ReducedWord, n: usize) -> Result<Vec<Rat>> {
    if !word.is_reduced(n)? {
        return Err(Error::NotReduced);
    }
    if l.nrows() != n + 1 {
        return Err(Error::RankMismatch(l.nrows(), n + 1));
    }
    let mut letters = word.letters().to_vec();
    let mut cur = l.clone();
    let mut times_rev: Vec<Rat> = Vec::with_capacity(letters.len());
    while let Some(j) = letters.pop() {
        let sigma = ReducedWord::new({
            let mut w = letters.clone();
            w.push(j);
            w
        })
        .evaluate(n)?;
        let sigma_prev = ReducedWord::new(letters.clone()).evaluate(n)?;
        let (i0, i1) = distinguishing_pair(&sigma, &sigma_prev, n + 1).ok_or_else(|| {
            Error::NotPositive("no distinguishing minor; words disagree".into())
        })?;
        // minor of cur * lambda_j(-t) at (i0, i1) is affine in t
        if !i1.contains(j) || i1.contains(j + 1) {
            return Err(Error::NotPositive(
                "distinguishing minor does not see the peeled letter".into(),
            ));
        }
        let rows: Vec<usize> = i0.elems().iter().map(|&e| e - 1).collect();
        let cols: Vec<usize> = i1.elems().iter().map(|&e| e - 1).collect();
        let cols_up: Vec<usize> = i1
            .elems()
            .iter()
            .map(|&e| if e == j { j } else { e - 1 })
            .collect();
        let m0 = cur.minor(&rows, &cols);
        let m1 = cur.minor(&rows, &cols_up);
        if m1.is_zero() {
            return Err(Error::NotPositive(format!(
                "minor ({i0},{i1}) does not move; point not in the cell"
            )));
        }
        let t = m0 / m1;
        if !t.is_positive() {
            return Err(Error::NotPositive(format!(
                "peeled time for letter {j} is {t}, not positive"
            )));
        }
        cur = cur.mul(&lambda_gen(n + 1, j, &-t.clone()));
        times_rev.push(t);
    }
    if !cur.is_identity() {
        return Err(Error::NotPositive("residue after peeling is not I".into()));
    }
    times_rev.reverse();
    Ok(times_rev)
}

/// First (sum, lex)-ordered pair whose minor is positive on the cell of
/// sigma but vanishes on the cell of sigma_prev.
fn distinguishing_pair(
    sigma: &Permutation,
    sigma_prev: &Permutation,
    np1: usize,
) -> Option<(IndexSet, IndexSet)> {
    let pat = CellPattern::of(sigma);
    let pat_prev = CellPattern::of(sigma_prev);
    for k in 1..=np1 {
        for i0 in IndexSet::all(np1, k) {
            let m0 = mask_of(&i0);
            for i1 in IndexSet::all(np1, k) {
                let m1 = mask_of(&i1);
                if pat.is_positive(k, m0, m1) && !pat_prev.is_positive(k, m0, m1) {
                    return Some((i0, set_of(m1, np1)));
                }
            }
        }
    }
    None
}

/// L0 << L1: the quotient L0^{-1} L1 is totally positive.
pub fn ll(l0: &Matrix<Rat>, l1: &Matrix<Rat>) -> Result<bool> {
    let q = l0.inverse_unit_lower()?.mul(l1);
    pos_membership(&q, &Permutation::eta(l0.nrows() - 1))
}

/// L0 <= L1: the quotient lies in the closure of the positive big cell.
pub fn leq(l0: &Matrix<Rat>, l1: &Matrix<Rat>) -> Result<bool> {
    let q = l0.inverse_unit_lower()?.mul(l1);
    in_pos_closure(&q)
}

/// The explicit positive-speed data of a non-open cell: k minimal with
/// (n-k+2)^sigma != k, j the displaced value minus one, and the three
/// index sets whose minors witness strictly positive entry speed.
pub struct SpeedData {
    pub k: usize,
    pub j: usize,
    pub i0: IndexSet,
    pub i1: IndexSet,
    pub i2: IndexSet,
}

pub fn positive_speed_data(sigma: &Permutation) -> Result<SpeedData> {
    let n = sigma.rank();
    let np1 = n + 1;
    let k = (1..=np1)
        .find(|&k| sigma.image(np1 - k + 1) != k)
        .ok_or_else(|| Error::Invalid("open cell has no transversal minor".into()))?;
    let j = sigma.image(np1 - k + 1) - 1;
    let i0 = IndexSet::new((np1 - k + 1..=np1).collect())?;
    let mut e1: Vec<usize> = (1..k).collect();
    e1.push(j + 1);
    let mut e2: Vec<usize> = (1..k).collect();
    e2.push(j);
    Ok(SpeedData {
        k,
        j,
        i0,
        i1: IndexSet::new(e1)?,
        i2: IndexSet::new(e2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::nilpotent_exp;
    use crate::coxeter::parse_permutation;
    use crate::matrix::exterior_power;
    use crate::scalar::rat;

    fn p(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    fn word(letters: &[usize]) -> ReducedWord {
        ReducedWord::new(letters.to_vec())
    }

    fn params(letters: &[usize], times: &[(i64, i64)]) -> PosParams {
        PosParams {
            word: word(letters),
            times: times.iter().map(|&(a, b)| rat(a, b)).collect(),
        }
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> u64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            self.0 >> 11
        }
        fn pos_rat(&mut self) -> Rat {
            rat(1 + (self.next() % 12) as i64, 1 + (self.next() % 7) as i64)
        }
        fn perm(&mut self, n: usize) -> Permutation {
            let mut sigma = Permutation::identity(n);
            for _ in 0..(self.next() % 16) {
                let i = 1 + (self.next() as usize) % n;
                sigma = sigma.right_mul_gen(i).unwrap();
            }
            sigma
        }
    }

    #[test]
    fn pos_from_params_small_patterns() {
        // word (1,2): L(x, y, 0); word (2,1): L(x, y, xy)
        let ab = pos_from_params(2, &params(&[1, 2], &[(2, 1), (3, 1)])).unwrap();
        assert_eq!(ab[(1, 0)], rat(2, 1));
        assert_eq!(ab[(2, 1)], rat(3, 1));
        assert_eq!(ab[(2, 0)], rat(0, 1));
        let ba = pos_from_params(2, &params(&[2, 1], &[(2, 1), (3, 1)])).unwrap();
        assert_eq!(ba[(1, 0)], rat(3, 1));
        assert_eq!(ba[(2, 1)], rat(2, 1));
        assert_eq!(ba[(2, 0)], rat(6, 1));
        let e = pos_from_params(2, &params(&[], &[])).unwrap();
        assert!(e.is_identity());
    }

    #[test]
    fn ababab_unit_case() {
        let (s1, s2, s3) =
            ababab_transition(&rat(1, 1), &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!((s1, s2.clone(), s3), (rat(1, 2), rat(2, 1), rat(1, 2)));
        // middle factor zero degenerates to a single lambda
        let (s1, s2, s3) = ababab_transition(&rat(5, 1), &rat(0, 1), &rat(3, 1)).unwrap();
        assert_eq!((s1, s2, s3), (rat(0, 1), rat(8, 1), rat(0, 1)));
        assert!(matches!(
            ababab_transition(&rat(2, 1), &rat(1, 1), &rat(-2, 1)),
            Err(Error::BraidPole)
        ));
    }

    #[test]
    fn ababab_matrix_identity_random() {
        let mut rng = Lcg(99);
        for i in 1..=2usize {
            for _ in 0..100 {
                let (t1, t2, t3) = (rng.pos_rat(), rng.pos_rat(), rng.pos_rat());
                let (s1, s2, s3) = ababab_transition(&t1, &t2, &t3).unwrap();
                let np1 = 4;
                let lhs = lambda_gen(np1, i, &t1)
                    .mul(&lambda_gen(np1, i + 1, &t2))
                    .mul(&lambda_gen(np1, i, &t3));
                let rhs = lambda_gen(np1, i + 1, &s1)
                    .mul(&lambda_gen(np1, i, &s2))
                    .mul(&lambda_gen(np1, i + 1, &s3));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn path_exists_base_cases() {
        let sigma = p("213"); // a_1
        let i0 = IndexSet::new(vec![2]).unwrap();
        let i1 = IndexSet::new(vec![1]).unwrap();
        assert!(path_exists(&i0, &i0, &sigma).unwrap());
        assert!(path_exists(&i0, &i1, &sigma).unwrap());
        let e = Permutation::identity(2);
        assert!(!path_exists(&i0, &i1, &e).unwrap());
    }

    #[test]
    fn path_exists_agrees_with_minor_positivity() {
        // exhaustive at rank 2 over sampled cell points
        let mut rng = Lcg(7);
        for sigma in Permutation::all(2) {
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
            let l = pos_from_params(
                2,
                &PosParams {
                    word: w,
                    times,
                },
            )
            .unwrap();
            for k in 1..=3usize {
                let ext = exterior_power(&l, k).unwrap();
                for i0 in &ext.sets {
                    for i1 in &ext.sets {
                        if !i1.leq(i0) {
                            continue;
                        }
                        let positive = ext.entry(i0, i1).is_positive();
                        assert_eq!(
                            positive,
                            path_exists(i0, i1, &sigma).unwrap(),
                            "sigma = {sigma}, k = {k}, {i0} -> {i1}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn membership_small_cells() {
        // L(x, y, z) with 0 < z < xy sits in the big cell of S_3
        let l = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(5, 1), rat(3, 1), rat(1, 1)],
        ])
        .unwrap();
        assert!(pos_membership(&l, &Permutation::eta(2)).unwrap());
        assert!(!pos_membership(&l, &p("312")).unwrap());
        let id = Matrix::<Rat>::identity(3);
        assert!(pos_membership(&id, &Permutation::identity(2)).unwrap());
        let label = cell_of_closure(&l).unwrap().unwrap();
        assert_eq!(label.sigma, Permutation::eta(2));
        assert_eq!(label.orientation, Orientation::Positive);
    }

    #[test]
    fn membership_reports_violated_minor() {
        // z = xy collapses the 2x2 southwest minor onto the boundary
        let l = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(6, 1), rat(3, 1), rat(1, 1)],
        ])
        .unwrap();
        let report = pos_membership_report(&l, &Permutation::eta(2)).unwrap();
        let violation = report.unwrap_err();
        assert_eq!(violation.k, 2);
        assert_eq!(violation.actual_sign, 0);
        assert!(violation.expected_positive);
    }

    #[test]
    fn cell_recovery_random_products() {
        let mut rng = Lcg(2024);
        for trial in 0..1000 {
            let n = 2 + (trial % 3);
            let sigma = rng.perm(n);
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
            let l = pos_from_params(n, &PosParams { word: w, times }).unwrap();
            let label = cell_of_closure(&l).unwrap().expect("in closure");
            assert_eq!(label.sigma, sigma, "trial {trial}");
            assert_eq!(label.orientation, Orientation::Positive);
        }
    }

    #[test]
    fn negative_cells_mirror() {
        let mut rng = Lcg(31);
        for trial in 0..50 {
            let n = 2 + (trial % 3);
            let sigma = rng.perm(n);
            if sigma.is_identity() {
                continue;
            }
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| -rng.pos_rat()).collect();
            let l = pos_from_params(n, &PosParams { word: w, times }).unwrap();
            let label = cell_of_closure(&l).unwrap().expect("negative closure");
            assert_eq!(label.sigma, sigma);
            assert_eq!(label.orientation, Orientation::Negative);
            // mirror is an involution exchanging the strata
            assert!(pos_membership(&neg_mirror(&l), &sigma).unwrap());
            assert_eq!(neg_mirror(&neg_mirror(&l)), l);
        }
    }

    #[test]
    fn factorize_frozen_example() {
        let l = pos_from_params(2, &params(&[1, 2], &[(2, 1), (3, 1)])).unwrap();
        let times = pos_factorize(&l, &word(&[1, 2]), 2).unwrap();
        assert_eq!(times, vec![rat(2, 1), rat(3, 1)]);
        let empty = pos_factorize(&Matrix::<Rat>::identity(3), &word(&[]), 2).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn factorize_round_trip_random() {
        let mut rng = Lcg(555);
        for trial in 0..300 {
            let n = 2 + (trial % 3);
            let sigma = rng.perm(n);
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
            let l = pos_from_params(
                n,
                &PosParams {
                    word: w.clone(),
                    times: times.clone(),
                },
            )
            .unwrap();
            let got = pos_factorize(&l, &w, n).unwrap();
            assert_eq!(got, times, "trial {trial}");
        }
    }

    #[test]
    fn factorize_rejects_off_cell_points() {
        // boundary point: word aba but time for the middle letter zero
        let l = pos_from_params(2, &params(&[1, 2], &[(1, 1), (1, 1)])).unwrap();
        assert!(pos_factorize(&l, &word(&[1, 2, 1]), 2).is_err());
        // non-reduced word
        assert!(matches!(
            pos_factorize(&l, &word(&[1, 1]), 2),
            Err(Error::NotReduced)
        ));
    }

    #[test]
    fn factorize_across_braid_words() {
        // factorizing through the other reduced word of eta recovers the
        // braid-transition times
        let (t1, t2, t3) = (rat(1, 1), rat(1, 1), rat(1, 1));
        let l = pos_from_params(
            2,
            &PosParams {
                word: word(&[1, 2, 1]),
                times: vec![t1.clone(), t2.clone(), t3.clone()],
            },
        )
        .unwrap();
        let other = pos_factorize(&l, &word(&[2, 1, 2]), 2).unwrap();
        let (s1, s2, s3) = ababab_transition(&t1, &t2, &t3).unwrap();
        assert_eq!(other, vec![s1, s2, s3]);
    }

    #[test]
    fn semigroup_products_land_in_vee_cell() {
        let mut rng = Lcg(808);
        for trial in 0..200 {
            let n = 2 + (trial % 3);
            let (s0, s1) = (rng.perm(n), rng.perm(n));
            let mk = |sigma: &Permutation, rng: &mut Lcg| {
                let w = sigma.canonical_reduced_word();
                let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
                pos_from_params(n, &PosParams { word: w, times }).unwrap()
            };
            let l0 = mk(&s0, &mut rng);
            let l1 = mk(&s1, &mut rng);
            let v = s0.vee(&s1).unwrap();
            assert!(
                pos_membership(&l0.mul(&l1), &v).unwrap(),
                "trial {trial}: {s0} * {s1} should land in {v}"
            );
        }
    }

    #[test]
    fn order_relations() {
        let n = 2;
        let eta = Permutation::eta(n);
        let w = eta.canonical_reduced_word();
        let mut rng = Lcg(3);
        let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
        let l = pos_from_params(n, &PosParams { word: w, times }).unwrap();
        let id = Matrix::<Rat>::identity(n + 1);
        assert!(ll(&id, &l).unwrap());
        assert!(leq(&id, &id).unwrap());
        assert!(!ll(&id, &id).unwrap());
        // closure(Pos_eta) and closure(Neg_eta) meet only at I
        assert!(leq(&l, &l).unwrap());
    }

    #[test]
    fn posline_first_time_threshold() {
        let n = 2;
        let w = word(&[1, 2, 1]);
        let (t1, t2, t3) = (rat(2, 1), rat(1, 1), rat(3, 2));
        let l = pos_from_params(
            n,
            &PosParams {
                word: w,
                times: vec![t1.clone(), t2, t3],
            },
        )
        .unwrap();
        let lam = |t: &Rat| lambda_gen(n + 1, 1, t);
        // lambda_{i1}(t) << L iff t < t1; <= iff t <= t1
        for (t, expect_ll, expect_leq) in [
            (rat(1, 1), true, true),
            (t1.clone(), false, true),
            (rat(3, 1), false, false),
        ] {
            assert_eq!(ll(&lam(&t), &l).unwrap(), expect_ll, "t = {t}");
            assert_eq!(leq(&lam(&t), &l).unwrap(), expect_leq, "t = {t}");
        }
    }

    #[test]
    fn transitivity_mixed_orders() {
        // L0 <= L1 << L2 forces L0 << L2
        let mut rng = Lcg(17);
        let n = 2;
        for _ in 0..50 {
            let l0 = {
                let sigma = rng.perm(n);
                let w = sigma.canonical_reduced_word();
                let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
                pos_from_params(n, &PosParams { word: w, times }).unwrap()
            };
            // closure point on top of l0
            let sigma = rng.perm(n);
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
            let l1 = l0.mul(&pos_from_params(n, &PosParams { word: w, times }).unwrap());
            // strictly positive point on top of l1
            let weta = Permutation::eta(n).canonical_reduced_word();
            let times: Vec<Rat> = (0..weta.len()).map(|_| rng.pos_rat()).collect();
            let l2 = l1.mul(&pos_from_params(n, &PosParams { word: weta, times }).unwrap());
            assert!(leq(&l0, &l1).unwrap());
            assert!(ll(&l1, &l2).unwrap());
            assert!(ll(&l0, &l2).unwrap());
        }
    }

    #[test]
    fn transition_sandwich_on_n_curve() {
        // points strictly between two parameters sit in the forward
        // positive cone and the backward negative cone
        let n = 3;
        let nilp = crate::charts::frak_n::<Rat>(n + 1);
        let gamma = |t: &Rat| nilpotent_exp(&nilp, t).unwrap();
        let (t0, t, t1) = (rat(0, 1), rat(1, 2), rat(2, 1));
        let g0 = gamma(&t0);
        let g = gamma(&t);
        let g1 = gamma(&t1);
        assert!(ll(&g0, &g).unwrap());
        let back = g1.inverse_unit_lower().unwrap().mul(&g);
        assert!(pos_membership(&neg_mirror(&back), &Permutation::eta(n)).unwrap());
    }

    #[test]
    fn positive_speed_explicit_construction() {
        // g(t) = Lambda^k(Gamma(t))_{i0,i2} vanishes at 0 and has a
        // positive forward difference along any convex curve
        let mut rng = Lcg(12);
        for trial in 0..60 {
            let n = 2 + trial % 3;
            let sigma = rng.perm(n);
            if sigma == Permutation::eta(n) {
                continue;
            }
            let data = positive_speed_data(&sigma).unwrap();
            let w = sigma.canonical_reduced_word();
            let times: Vec<Rat> = (0..w.len()).map(|_| rng.pos_rat()).collect();
            let l0 = pos_from_params(n, &PosParams { word: w, times }).unwrap();
            let nilp = crate::charts::frak_n::<Rat>(n + 1);
            let rows: Vec<usize> = data.i0.elems().iter().map(|&e| e - 1).collect();
            let cols: Vec<usize> = data.i2.elems().iter().map(|&e| e - 1).collect();
            let g_at = |t: &Rat| {
                let gamma = l0.mul(&nilpotent_exp(&nilp, t).unwrap());
                gamma.minor(&rows, &cols)
            };
            assert!(g_at(&rat(0, 1)).is_zero(), "trial {trial}");
            assert!(g_at(&rat(1, 8)).is_positive(), "trial {trial}");
            // sanity on the companion set: positive already at 0
            let cols1: Vec<usize> = data.i1.elems().iter().map(|&e| e - 1).collect();
            assert!(l0.minor(&rows, &cols1).is_positive(), "trial {trial}");
        }
    }
}
