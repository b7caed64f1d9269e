//! Dense row-major matrices over any `Scalar` ring, with division-free
//! determinants and exterior powers indexed by sorted subsets.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            if !self[(i, i)].is_one() {
                return false;
            }
            for j in i + 1..self.cols {
                if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_strictly_lower(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    /// Submatrix on the given 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Division-free determinant by dynamic programming over column
    /// subsets; O(n^2 2^n) ring operations, fine at desk scale.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        assert!(n < 26, "determinant DP capped at n < 26");
        let full = 1usize << n;
        let mut cur: Vec<Option<S>> = vec![None; full];
        cur[0] = Some(S::one());
        for r in 0..n {
            let mut next: Vec<Option<S>> = vec![None; full];
            for mask in 0..full {
                let Some(val) = cur[mask].take() else { continue };
                if (mask as u32).count_ones() as usize != r {
                    continue;
                }
                for c in 0..n {
                    if mask & (1 << c) != 0 {
                        continue;
                    }
                    let entry = &self[(r, c)];
                    if entry.is_zero() {
                        continue;
                    }
                    let swaps = ((mask >> (c + 1)) as u32).count_ones();
                    let mut term = val.clone() * entry.clone();
                    if swaps % 2 == 1 {
                        term = -term;
                    }
                    let slot = &mut next[mask | (1 << c)];
                    *slot = Some(match slot.take() {
                        Some(acc) => acc + term,
                        None => term,
                    });
                }
            }
            cur = next;
        }
        cur[full - 1].take().unwrap_or_else(S::zero)
    }

    /// Minor on 0-based row/column index lists.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> S {
        self.submatrix(rows, cols).det()
    }

    /// Inverse of a unit lower-triangular matrix by forward
    /// substitution; needs no division, so it works over any ring.
    pub fn inverse_unit_lower(&self) -> Result<Self> {
        if !self.is_lower_unitriangular() {
            return Err(Error::Invalid("not unit lower triangular".into()));
        }
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            inv[(j, j)] = S::one();
            for i in j + 1..n {
                let mut s = S::zero();
                for k in j..i {
                    if !self[(i, k)].is_zero() && !inv[(k, j)].is_zero() {
                        s = s + self[(i, k)].clone() * inv[(k, j)].clone();
                    }
                }
                inv[(i, j)] = -s;
            }
        }
        Ok(inv)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(|x| x.to_json()).collect()))
            .collect();
        json!({ "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("expected {\"rows\": [[..]]}".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Invalid("rows must be arrays".into()))?;
            out.push(row.iter().map(S::from_json).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(out)
    }
}

impl<F: Real> Matrix<F> {
    pub fn max_abs(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.sub(other).max_abs() <= tol
    }

    /// Max-norm deviation of Q^T Q from the identity.
    pub fn orthogonality_error(&self) -> F {
        self.transpose()
            .mul(self)
            .sub(&Matrix::identity(self.cols))
            .max_abs()
    }

    /// Solves U X = B for upper-triangular invertible U.
    pub fn solve_upper(&self, b: &Self) -> Result<Matrix<F>> {
        if !self.is_square() || self.rows != b.rows {
            return Err(Error::DimMismatch(self.rows, self.cols, b.rows, b.cols));
        }
        let n = self.rows;
        let mut x = b.clone();
        for i in (0..n).rev() {
            let d = self[(i, i)];
            if d == F::zero() {
                return Err(Error::Singular);
            }
            for j in 0..x.cols {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s = s - self[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s / d;
            }
        }
        Ok(x)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}{}", self[(i, j)], if j + 1 < self.cols { ", " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Sorted k-element subset of {1..n+1}, the index alphabet of exterior
/// powers. Ordered by (sum of elements, then lexicographic).
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
#[serde(transparent)]
pub struct IndexSet {
    elems: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.iter().any(|&e| e == 0) {
            return Err(Error::Invalid("index sets are 1-based".into()));
        }
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("index set has repeats".into()));
        }
        Ok(IndexSet { elems })
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.elems.iter().sum()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elems.binary_search(&e).is_ok()
    }

    /// Elementwise comparison after sorting: self <= other.
    pub fn leq(&self, other: &IndexSet) -> bool {
        self.len() == other.len()
            && self
                .elems
                .iter()
                .zip(&other.elems)
                .all(|(a, b)| a <= b)
    }

    /// Single arrow step: the set obtained by replacing j+1 with j, when
    /// j+1 is present and j is not.
    pub fn arrow_down(&self, j: usize) -> Option<IndexSet> {
        if !self.contains(j + 1) || self.contains(j) {
            return None;
        }
        let elems = self
            .elems
            .iter()
            .map(|&e| if e == j + 1 { j } else { e })
            .collect();
        Some(IndexSet::new(elems).expect("arrow step keeps the set valid"))
    }

    /// All k-subsets of {1..np1} in (sum, lex) order.
    pub fn all(np1: usize, k: usize) -> Vec<IndexSet> {
        let mut sets = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(np1: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if cur.len() == k {
                out.push(IndexSet { elems: cur.clone() });
                return;
            }
            for e in start..=np1 {
                cur.push(e);
                rec(np1, k, e + 1, cur, out);
                cur.pop();
            }
        }
        rec(np1, k, 1, &mut cur, &mut sets);
        sets.sort_by(|a, b| {
            a.sum()
                .cmp(&b.sum())
                .then_with(|| a.elems.cmp(&b.elems))
        });
        sets
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            write!(f, "{}{}", if i > 0 { "," } else { "" }, e)?;
        }
        write!(f, "}}")
    }
}

/// k-th exterior power of a square matrix: entries are the k x k minors,
/// rows and columns indexed by `sets` in (sum, lex) order.
pub struct ExteriorPower<S> {
    pub sets: Vec<IndexSet>,
    pub mat: Matrix<S>,
}

impl<S: Scalar> ExteriorPower<S> {
    pub fn position(&self, s: &IndexSet) -> Option<usize> {
        self.sets.iter().position(|t| t == s)
    }

    pub fn entry(&self, i0: &IndexSet, i1: &IndexSet) -> &S {
        let r = self.position(i0).expect("row index set");
        let c = self.position(i1).expect("column index set");
        &self.mat[(r, c)]
    }
}

/// Exterior power by direct minor evaluation.
pub fn exterior_power<S: Scalar>(m: &Matrix<S>, k: usize) -> Result<ExteriorPower<S>> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let np1 = m.nrows();
    if k > np1 {
        return Err(Error::Invalid(format!("exterior power {k} exceeds size {np1}")));
    }
    let sets = IndexSet::all(np1, k);
    let mat = Matrix::from_fn(sets.len(), sets.len(), |r, c| {
        let rows: Vec<usize> = sets[r].elems().iter().map(|&e| e - 1).collect();
        let cols: Vec<usize> = sets[c].elems().iter().map(|&e| e - 1).collect();
        m.minor(&rows, &cols)
    });
    Ok(ExteriorPower { sets, mat })
}

/// Exterior power of a unit lower-triangular matrix through its
/// Frobenius column factorization; much cheaper than minor evaluation
/// and exact over any ring.
pub fn exterior_power_unit_lower<S: Scalar>(m: &Matrix<S>, k: usize) -> Result<ExteriorPower<S>> {
    if !m.is_lower_unitriangular() {
        return Err(Error::Invalid("not unit lower triangular".into()));
    }
    let np1 = m.nrows();
    if k > np1 {
        return Err(Error::Invalid(format!("exterior power {k} exceeds size {np1}")));
    }
    let sets = IndexSet::all(np1, k);
    let pos: std::collections::HashMap<&[usize], usize> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.elems(), i))
        .collect();
    let c = sets.len();
    let mut acc = Matrix::<S>::identity(c);
    // L = F_1 ... F_n with F_j carrying column j's subdiagonal.
    for j in 0..np1 {
        let nonzero: Vec<usize> = (j + 1..np1).filter(|&i| !m[(i, j)].is_zero()).collect();
        if nonzero.is_empty() {
            continue;
        }
        let mut factor = Matrix::<S>::identity(c);
        for (t_idx, t_set) in sets.iter().enumerate() {
            if !t_set.contains(j + 1) {
                continue;
            }
            let col_pos = t_set.elems().iter().position(|&e| e == j + 1).unwrap();
            for &r in &nonzero {
                if t_set.contains(r + 1) {
                    continue;
                }
                let mut elems: Vec<usize> =
                    t_set.elems().iter().copied().filter(|&e| e != j + 1).collect();
                elems.push(r + 1);
                elems.sort_unstable();
                let row_pos = elems.iter().position(|&e| e == r + 1).unwrap();
                let s_idx = pos[elems.as_slice()];
                let mut v = m[(r, j)].clone();
                if (row_pos + col_pos) % 2 == 1 {
                    v = -v;
                }
                factor[(s_idx, t_idx)] = v;
            }
        }
        acc = acc.mul(&factor);
    }
    Ok(ExteriorPower { sets, mat: acc })
}
