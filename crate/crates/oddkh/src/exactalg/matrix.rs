//! Arbitrary-precision integer matrices.
//!
//! Entries are `BigInt` throughout: Smith normal form can blow up
//! intermediate entries even when the input and output are tiny, so
//! fixed-width integers are not an option here. Small matrices use a
//! dense buffer, large ones a sparse row representation; the cutover
//! follows `DENSE_LIMIT`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Matrices with both dimensions below this bound are stored densely.
pub const DENSE_LIMIT: usize = 64;

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Dense(Vec<BigInt>),
    /// One map per row, column index -> nonzero entry.
    Sparse(Vec<BTreeMap<usize, BigInt>>),
}

/// A rows x cols integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    repr: Repr,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let repr = if rows < DENSE_LIMIT && cols < DENSE_LIMIT {
            Repr::Dense(vec![BigInt::zero(); rows * cols])
        } else {
            Repr::Sparse(vec![BTreeMap::new(); rows])
        };
        IntMatrix { rows, cols, repr }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from row slices of machine integers (tests and small call sites).
    pub fn from_rows_i64(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    m.set(i, j, BigInt::from(*v));
                }
            }
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols, "index out of range");
        match &self.repr {
            Repr::Dense(d) => d[r * self.cols + c].clone(),
            Repr::Sparse(rows) => rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        match &mut self.repr {
            Repr::Dense(d) => d[r * self.cols + c] = v,
            Repr::Sparse(rows) => {
                if v.is_zero() {
                    rows[r].remove(&c);
                } else {
                    rows[r].insert(c, v);
                }
            }
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Dense(d) => d.iter().all(|v| v.is_zero()),
            Repr::Sparse(rows) => rows.iter().all(|r| r.is_empty()),
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Repr::Sparse(rows) => rows.iter().map(|r| r.len()).sum(),
        }
    }

    /// Nonzero entries as (row, col, value).
    pub fn entries(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::with_capacity(self.nnz());
        match &self.repr {
            Repr::Dense(d) => {
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        let v = &d[r * self.cols + c];
                        if !v.is_zero() {
                            out.push((r, c, v.clone()));
                        }
                    }
                }
            }
            Repr::Sparse(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row {
                        out.push((r, *c, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.set(c, r, v);
        }
        t
    }

    pub fn neg(&self) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m.set(r, c, -v);
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (r, c, v) in other.entries() {
            m.add_to(r, c, &v);
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut m = Self::zeros(self.rows, other.cols);
        // Row-by-row sparse product.
        for (r, k, a) in self.entries() {
            match &other.repr {
                Repr::Dense(d) => {
                    for c in 0..other.cols {
                        let b = &d[k * other.cols + c];
                        if !b.is_zero() {
                            m.add_to(r, c, &(&a * b));
                        }
                    }
                }
                Repr::Sparse(rows) => {
                    for (c, b) in &rows[k] {
                        m.add_to(r, *c, &(&a * b));
                    }
                }
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, c, v) in self.entries() {
            out[r] += v * &x[c];
        }
        out
    }

    /// Submatrix on the given row and column index sets (in order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let v = self.get(r, c);
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for (r, c, v) in self.entries() {
            m.set(r, c, v);
        }
        for (r, c, v) in other.entries() {
            m.set(r, self.cols + c, v);
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Used for unimodularity checks; requires a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row_vec(r)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Entrywise reduction mod 2, packed as bit rows (for GF(2) rank work).
    pub fn mod2_rows(&self) -> Vec<Vec<u64>> {
        let words = self.cols.div_ceil(64);
        let mut out = vec![vec![0u64; words]; self.rows];
        for (r, c, v) in self.entries() {
            if v.bit(0) {
                out[r][c / 64] ^= 1 << (c % 64);
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16)).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        if self.rows > 16 || self.cols > 16 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 2], vec![3, 4]]);
        let id = IntMatrix::identity(2);
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.mul(&m), m);
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.determinant(), BigInt::from(6));
        let s = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.determinant(), BigInt::from(-1));
        assert!(s.is_unimodular());
    }

    #[test]
    fn sparse_round_trip() {
        let mut m = IntMatrix::zeros(100, 100);
        m.set(3, 97, BigInt::from(-5));
        assert_eq!(m.get(3, 97), BigInt::from(-5));
        assert_eq!(m.nnz(), 1);
        let t = m.transpose();
        assert_eq!(t.get(97, 3), BigInt::from(-5));
    }
}
