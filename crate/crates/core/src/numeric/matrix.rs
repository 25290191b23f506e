//! Dense matrices over a [`Scalar`] backend with rank, kernel and inverse.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
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

    pub fn scalar(n: usize, s: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_zero_tol(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&Self::identity(self.rows), tol)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in sub"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    /// `self - lambda * I`
    pub fn shift(&self, lambda: &S) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].clone() - lambda.clone();
        }
        m
    }

    pub fn minus_identity(&self) -> Self {
        self.shift(&S::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_tol(0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero_tol(0.0) {
                        continue;
                    }
                    let cur = &mut out.data[i * other.cols + j];
                    cur.mul_sub_assign(&-a.clone(), b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, x) in v.iter().enumerate() {
                    acc.mul_sub_assign(&-self[(i, k)].clone(), x);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Kronecker product; index `(i, j)` of `self` and `(p, q)` of `other` lands at `(i*m + p, j*n + q)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, n) = (other.rows, other.cols);
        Self::from_fn(self.rows * m, self.cols * n, |r, c| {
            self[(r / m, c / n)].clone() * other[(r % m, c % n)].clone()
        })
    }

    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                for c in 0..b.cols {
                    out[(r, offset + c)] = b[(r, c)].clone();
                }
            }
            offset += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        })
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self[(i, i)].clone();
        }
        t
    }

    /// In-place row echelon form. Returns pivot columns.
    ///
    /// Float backends use partial pivoting and treat pivots below `tol * max(max|entry|, 1)` as zero.
    /// With `reduced` the result is the reduced row echelon form.
    pub fn echelon_in_place(&mut self, tol: f64, reduced: bool) -> Vec<usize> {
        self.echelon_scaled(tol, 1.0, reduced)
    }

    /// As [`Self::echelon_in_place`] with pivot threshold `tol * max(max|entry|, scale)`.
    ///
    /// `scale` supplies the magnitude of the matrix this one was derived from (e.g. `T` for `T - lambda`),
    /// so cancellation residue is not mistaken for signal.
    pub fn echelon_scaled(&mut self, tol: f64, scale: f64, reduced: bool) -> Vec<usize> {
        let exact = S::is_exact();
        let threshold = if exact {
            0.0
        } else {
            tol * self.max_abs().max(scale)
        };
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pick = if exact {
                // smallest pivot keeps coefficient growth down
                (row..self.rows)
                    .filter(|&r| !self[(r, col)].is_zero_tol(0.0))
                    .min_by_key(|&r| self[(r, col)].height())
            } else {
                (row..self.rows)
                    .map(|r| (r, self[(r, col)].modulus()))
                    .filter(|&(_, m)| m > threshold)
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(r, _)| r)
            };
            let Some(p) = pick else {
                if !exact {
                    for r in row..self.rows {
                        self[(r, col)] = S::zero();
                    }
                }
                continue;
            };
            self.swap_rows(row, p);
            let inv = S::one() / self[(row, col)].clone();
            for c in col..self.cols {
                let v = self[(row, c)].clone() * inv.clone();
                self[(row, c)] = v;
            }
            let start = if reduced { 0 } else { row + 1 };
            for r in start..self.rows {
                if r == row {
                    continue;
                }
                let factor = self[(r, col)].clone();
                if factor.is_zero_tol(0.0) {
                    continue;
                }
                for c in col..self.cols {
                    let pv = self.data[row * self.cols + c].clone();
                    if pv.is_zero_tol(0.0) {
                        continue;
                    }
                    self.data[r * self.cols + c].mul_sub_assign(&factor, &pv);
                }
                self[(r, col)] = S::zero();
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        let mut m = self.clone();
        m.echelon_in_place(tol, false).len()
    }

    pub fn rank_scaled(&self, tol: f64, scale: f64) -> usize {
        let mut m = self.clone();
        m.echelon_scaled(tol, scale, false).len()
    }

    /// Basis of the null space; `len() == cols - rank`.
    pub fn kernel_basis(&self, tol: f64) -> Vec<Vec<S>> {
        self.kernel_basis_scaled(tol, 1.0)
    }

    pub fn kernel_basis_scaled(&self, tol: f64, scale: f64) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.echelon_scaled(tol, scale, true);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, taken from the original pivot columns.
    pub fn column_space(&self, tol: f64) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.echelon_in_place(tol, false);
        pivots.into_iter().map(|c| self.column(c)).collect()
    }

    pub fn inverse(&self, tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "cannot invert {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Self::hstack(&[self, &Self::identity(n)]);
        let pivots = aug.echelon_in_place(tol, true);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        Ok(aug.submatrix(0..n, n..2 * n))
    }

    /// Solves `self * x = b` when consistent, returning one solution.
    pub fn solve(&self, b: &[S], tol: f64) -> Option<Vec<S>> {
        let bm = Self::from_columns(self.rows, &[b.to_vec()]);
        let mut aug = Self::hstack(&[self, &bm]);
        let pivots = aug.echelon_in_place(tol, true);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

/// Dimension of the span of a list of vectors.
pub fn span_rank<S: Scalar>(dim: usize, vectors: &[Vec<S>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors).rank(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::GaussRat;
    use num::complex::Complex64;

    type Q = GaussRat;

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Q>::identity(3).rank(0.0), 3);
        assert_eq!(Matrix::<Q>::zeros(2, 5).rank(0.0), 0);
        assert_eq!(Matrix::<Q>::from_i64(&[&[1, 1], &[1, 1]]).rank(0.0), 1);
        assert_eq!(
            Matrix::<Complex64>::from_i64(&[&[1, 1], &[1, 1]]).rank(1e-9),
            1
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::<Q>::identity(3).kernel_basis(0.0).is_empty());
        assert_eq!(Matrix::<Q>::zeros(3, 3).kernel_basis(0.0).len(), 3);
        let k = Matrix::<Q>::from_i64(&[&[0, 1], &[0, 0]]).kernel_basis(0.0);
        assert_eq!(k, vec![vec![Q::one(), Q::zero()]]);
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::<Q>::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse(0.0).unwrap();
        assert!(m.mul(&inv).is_identity(0.0));
        assert!(Matrix::<Q>::from_i64(&[&[1, 2], &[2, 4]])
            .inverse(0.0)
            .is_err());
        let x = m.solve(&[Q::from_i64(3), Q::from_i64(2)], 0.0).unwrap();
        assert_eq!(x, vec![Q::from_i64(1), Q::from_i64(1)]);
        assert!(Matrix::<Q>::from_i64(&[&[1, 1], &[1, 1]])
            .solve(&[Q::one(), Q::zero()], 0.0)
            .is_none());
    }

    #[test]
    fn kron_layout() {
        let a = Matrix::<Q>::from_i64(&[&[1, 2], &[3, 4]]);
        let swap = Matrix::<Q>::from_i64(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&swap);
        assert_eq!(k[(0, 1)], Q::from_i64(1));
        assert_eq!(k[(3, 2)], Q::from_i64(4));
        assert_eq!(k[(2, 1)], Q::from_i64(3));
    }
}
