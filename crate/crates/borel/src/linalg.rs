//! Exact rational linear algebra: rank, nullspace, solve.
//!
//! Everything downstream (structure constants, derivation spaces, extension
//! canonicalization) runs on top of this module. Scalars are
//! arbitrary-precision rationals, kept reduced with positive denominator by
//! `num_rational`. Rank and determinant use fraction-free (Bareiss)
//! elimination on integer-cleared rows; nullspace and solve use rational
//! Gauss-Jordan with deterministic first-nonzero pivoting so outputs are
//! reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar. Always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from integer literals.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= c;
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut m = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        m[(i, j)] += p;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// `self^dim == 0`, computed by repeated squaring past the dimension.
    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols, "nilpotency needs a square matrix");
        let mut p = self.clone();
        let mut e = 1usize;
        while e < self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(&p);
            e *= 2;
        }
        p.is_zero()
    }

    /// Clears denominators row by row and returns the integer matrix.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let e = &self[(i, j)];
                        e.numer() * (&lcm / e.denom())
                    })
                    .collect()
            })
            .collect()
    }

    /// Row rank via fraction-free (Bareiss) elimination, exact.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        let (n, m) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..n {
                for j in c + 1..m {
                    let t = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = &t / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Exact determinant (Bareiss on integer-cleared rows).
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        // Denominator factored out of each row up front.
        let mut denom = BigInt::one();
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            denom *= &lcm;
        }
        let mut a = self.integer_rows();
        let mut prev = BigInt::one();
        let mut sign = 1i64;
        for c in 0..n - 1 {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap(c, p);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let t = &a[c][c] * &a[i][j] - &a[i][c] * &a[c][j];
                    a[i][j] = &t / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[c][c].clone();
        }
        Rat::new(a[n - 1][n - 1].clone() * BigInt::from(sign), denom)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    /// Pivoting is deterministic: first nonzero entry in column order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right kernel, one vector per free column, deterministic.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `self * x = b` if the system is consistent;
    /// free variables are set to zero under echelon ordering.
    pub fn solve(&self, b: &[Rat]) -> Result<Option<Vec<Rat>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "matrix has {} rows, rhs has {} entries",
                self.rows,
                b.len()
            )));
        }
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// Sparse row: sorted `(column, coefficient)` pairs, coefficients nonzero.
pub type SparseRow = Vec<(usize, Rat)>;

/// Incremental sparse RREF accumulator.
///
/// Rows are fed one at a time and reduced against the pivot rows collected so
/// far; full reduced form is maintained so the kernel basis can be read off
/// directly. Used for the Leibniz constraint system, where equations vastly
/// outnumber unknowns and each touches only a handful of them.
pub struct SparseKernel {
    cols: usize,
    /// pivot column -> pivot row (leading coefficient 1).
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseKernel {
    pub fn new(cols: usize) -> Self {
        SparseKernel {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and absorbs the remainder as
    /// a new pivot if nonzero. Returns true if the rank grew.
    pub fn add_row(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some(&(lead, _)) = row.first() else {
            return false;
        };
        // Normalize leading coefficient to 1.
        let inv = row[0].1.recip();
        for (_, v) in row.iter_mut() {
            *v *= &inv;
        }
        // Keep existing pivot rows reduced against the new one.
        let mut updates = Vec::new();
        for (&pc, prow) in self.pivots.iter() {
            if let Some(pos) = prow.iter().position(|&(c, _)| c == lead) {
                let f = prow[pos].1.clone();
                updates.push((pc, axpy(prow, &-f, &row)));
            }
        }
        for (pc, prow) in updates {
            self.pivots.insert(pc, prow);
        }
        self.pivots.insert(lead, row);
        true
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some(&(lead, _)) = row.first() else {
                return row;
            };
            let Some(prow) = self.pivots.get(&lead) else {
                // Leading column is not a pivot; interior columns may still
                // hit pivots, so sweep the rest once.
                let mut changed = false;
                let mut i = 1;
                while i < row.len() {
                    let c = row[i].0;
                    if let Some(p) = self.pivots.get(&c) {
                        let f = row[i].1.clone();
                        row = axpy(&row, &-f, p);
                        changed = true;
                        i = 1;
                    } else {
                        i += 1;
                    }
                }
                if !changed || row.first().map(|&(c, _)| c) != Some(lead) {
                    if changed {
                        continue;
                    }
                    return row;
                }
                return row;
            };
            let f = row[0].1.clone();
            row = axpy(&row, &-f, prow);
        }
    }

    /// Basis of the kernel of the accumulated row space, one vector per free
    /// column, pivot entries filled from the reduced rows.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (&pc, prow) in self.pivots.iter() {
                if let Some(&(_, ref coef)) = prow.iter().find(|&&(c, _)| c == f) {
                    v[pc] = -coef.clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// `a + f * b` on sparse rows, dropping zeros.
fn axpy(a: &SparseRow, f: &Rat, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ca, ref va)), Some(&(cb, ref vb))) if ca == cb => {
                let v = va + f * vb;
                if !v.is_zero() {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ca, ref va)), Some(&(cb, _))) if ca < cb => {
                out.push((ca, va.clone()));
                i += 1;
            }
            (Some(_), Some(&(cb, ref vb))) => {
                let v = f * vb;
                if !v.is_zero() {
                    out.push((cb, v));
                }
                j += 1;
            }
            (Some(&(ca, ref va)), None) => {
                out.push((ca, va.clone()));
                i += 1;
            }
            (None, Some(&(cb, ref vb))) => {
                let v = f * vb;
                if !v.is_zero() {
                    out.push((cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Echelonized span of rational vectors; used for ideal-chain arithmetic
/// and derivation-space membership tests. Dimensions here stay small.
#[derive(Debug, Clone)]
pub struct Span {
    cols: usize,
    rows: Vec<Vec<Rat>>,
}

impl Span {
    pub fn new(cols: usize) -> Self {
        Span {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &f * b;
                }
            }
        }
        v
    }

    /// Adds a vector to the span; returns true if the dimension grew.
    pub fn add(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = self.reduce(v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[lead].recip();
        for a in v.iter_mut() {
            *a *= &inv;
        }
        // Back-substitute into earlier rows, then insert sorted by lead.
        for row in self.rows.iter_mut() {
            if !row[lead].is_zero() {
                let f = row[lead].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a -= &f * b;
                }
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|r| r.iter().position(|x| !x.is_zero()).unwrap() > lead)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.rows
    }
}
