//! Dense matrices and Gaussian elimination over a [`Field`].

use crate::field::Field;
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> F {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: F) {
        let i = r * self.cols + c;
        self.data[i] = self.data[i] + v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: F) -> Self {
        self.map(|x| *x * s)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.add_at(r, c, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc + *a * *b })
            })
            .collect()
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = F::one() / self.get(row, col);
            for c in col..self.cols {
                let v = self.get(row, c);
                self.set(row, c, v * inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let pv = self.get(row, c);
                    if !pv.is_zero() {
                        let v = self.get(r, c);
                        self.set(r, c, v - factor * pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.forward_rank()
    }

    fn forward_rank(&mut self) -> usize {
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = F::one() / self.get(row, col);
            for r in row + 1..self.rows {
                let factor = self.get(r, col) * inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let pv = self.get(row, c);
                    if !pv.is_zero() {
                        let v = self.get(r, c);
                        self.set(r, c, v - factor * pv);
                    }
                }
            }
            row += 1;
        }
        row
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), len);
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, *x);
            }
        }
        m
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| (0..self.rows).map(|r| self.get(r, c)).collect()).collect()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, F::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }
}

/// Incrementally maintained row-reduced basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct Span<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [F]) {
        for (p, row) in &self.rows {
            let f = v[*p];
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = *x - f * *y;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns true if it was independent of the current span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / w[p];
        for x in w.iter_mut() {
            *x = *x * inv;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[p];
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x = *x - f * *y;
                    }
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Q};

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn rank_and_nullspace_agree() {
        let m = Mat::from_rows(2, 3, vec![q(1), q(2), q(3), q(2), q(4), q(6)]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(v).iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn inverse_of_invertible() {
        let m = Mat::from_rows(2, 2, vec![q(2), q(1), q(1), q(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        let s = Mat::from_rows(2, 2, vec![q(1), q(1), q(1), q(1)]);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn span_tracks_rank() {
        let mut s = Span::<Fp>::new(3);
        assert!(s.insert(&[Fp::new(1), Fp::new(1), Fp::new(0)]));
        assert!(s.insert(&[Fp::new(0), Fp::new(1), Fp::new(1)]));
        assert!(!s.insert(&[Fp::new(1), Fp::new(2), Fp::new(1)]));
        assert!(s.contains(&[Fp::new(1), Fp::new(0), Fp::new(-1)]));
        assert_eq!(s.rank(), 2);
    }
}
