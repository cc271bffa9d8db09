//! Dense matrices over the tower fields and exact linear algebra, plus the
//! rank-metric constructions built on them (Moore and circulant matrices,
//! Frobenius powers of codes).

mod circulant;

use std::fmt;

use crate::gf::{Field, FqnElem, Subfield, TowerField};
use crate::{Error, Result};

pub use circulant::{
    circulant, circulant_inverse, circulant_invertible, frobenius_power_code, intersect_dim, moore_matrix,
    sum_dim, vec_mul_circulant,
};

/// Rank weight of `v` over the given subfield.
pub fn rank_weight(tower: &TowerField, v: &[FqnElem], base: Subfield) -> usize {
    tower.rank_weight(v, base)
}

/// Hamming weight.
pub fn hamming_weight<E: PartialEq + Default>(v: &[E]) -> usize {
    let zero = E::default();
    v.iter().filter(|x| **x != zero).count()
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Mat<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Mat { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "matrix rows must have equal length");
        let nrows = rows.len();
        Mat { rows: nrows, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map<T: Copy>(&self, f: impl FnMut(E) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().copied().map(f).collect() }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    pub fn first_rows(&self, k: usize) -> Self {
        Mat { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<E: Copy + Eq> Mat<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Mat::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(l);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        out
    }

    /// Row vector times matrix, `v·M`.
    pub fn vec_mul<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in vector product");
        let mut out = vec![f.zero(); self.cols];
        for (i, &a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(i)) {
                *d = f.add(*d, f.mul(a, b));
            }
        }
        out
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: E) -> Self {
        self.map(|x| f.mul(s, x))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|&x| f.is_zero(x))
    }

    /// Gaussian elimination in place. Returns the pivot columns. With
    /// `reduced` the result is the reduced row-echelon form; otherwise only
    /// rows below each pivot are cleared.
    fn eliminate<F: Field<Elem = E>>(&mut self, f: &F, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut prow = vec![f.zero(); self.cols];
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(inv, self.get(r, j));
                self.set(r, j, v);
                prow[j] = v;
            }
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if f.is_zero(factor) {
                    continue;
                }
                let row = self.row_mut(i);
                for j in c..row.len() {
                    row[j] = f.sub(row[j], f.mul(factor, prow[j]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.eliminate(f, true);
        (m, piv)
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        let mut m = self.clone();
        m.eliminate(f, false).len()
    }

    /// Canonical generator of the row space: the nonzero rows of the RREF.
    pub fn row_space<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let (m, piv) = self.rref(f);
        m.first_rows(piv.len())
    }

    /// Basis of the right null space `{v : M·vᵀ = 0}`.
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let (m, piv) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Basis of the left null space `{x : x·M = 0}`.
    pub fn left_kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        self.transpose().kernel(f)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(f, n));
        let (m, piv) = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Mat::from_fn(n, n, |i, j| m.get(i, n + j)))
    }

    /// Some `x` with `x·M = b`.
    pub fn solve_left<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Result<Vec<E>> {
        assert_eq!(b.len(), self.cols, "right-hand side has wrong length");
        // xM = b  ⇔  Mᵀ xᵀ = bᵀ
        let t = self.transpose();
        let bcol = Mat { rows: self.cols, cols: 1, data: b.to_vec() };
        let (m, piv) = t.hstack(&bcol).rref(f);
        if piv.last() == Some(&self.rows) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![f.zero(); self.rows];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = m.get(r, self.rows);
        }
        Ok(x)
    }
}

impl<E: fmt::Display> fmt::Display for Mat<E> {
    /// Row-major hex coordinate dump.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl<E: fmt::Debug> fmt::Debug for Mat<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mat")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}
