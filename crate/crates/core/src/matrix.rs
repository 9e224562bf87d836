//! Dense matrices over any scalar regime, with exact Gaussian elimination
//! for the kernels, ranks and inverses the exact regimes need.

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, FloatScalar, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer-entried matrix, mostly for tests and small fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| {
            S::from_int(rows[i][j])
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[S]) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r].clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> Mat<S::Float> {
        self.map(|x| x.to_float())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out: Mat<S> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(l, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Largest entry magnitude (approximate for exact scalars).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn columns(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    /// Permute columns: column `j` of the result is column `perm[j]` of self.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        self.columns(perm)
    }

    /// Permute rows: row `i` of the result is row `perm[i]` of self.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Mat::from_fn(perm.len(), self.cols, |r, c| self[(perm[r], c)].clone())
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Mat<S> {
    fn eliminate(&mut self) -> Vec<usize> {
        // Gauss–Jordan to reduced row echelon form; returns pivot columns.
        // Exact division: meaningful only in the exact regimes.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, p * self.cols + c);
                }
            }
            let inv = self[(row, col)].inv().expect("nonzero pivot");
            for c in col..self.cols {
                self[(row, c)] = self[(row, c)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let t = factor.clone() * self[(row, c)].clone();
                        self[(r, c)] = self[(r, c)].clone() - t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

impl<S: ExactScalar> Mat<S> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat<S>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(i) = slot {
                    v[c] = -r[(*i, free)].clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat<S>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(n));
        let pivots = aug.eliminate();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| aug[(r, n + c)].clone()))
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return S::zero();
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(col * n + c, p * n + c);
                }
                det = -det;
            }
            det = det * m[(col, col)].clone();
            let inv = m[(col, col)].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone() * inv.clone();
                    for c in col..n {
                        let t = factor.clone() * m[(col, c)].clone();
                        m[(r, c)] = m[(r, c)].clone() - t;
                    }
                }
            }
        }
        det
    }
}

impl<S: FloatScalar> Mat<S> {
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.sub(other).max_abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    type M = Mat<Rat>;

    #[test]
    fn product_and_identity() {
        let a = M::from_ints(&[&[1, 2], &[3, 4]]);
        let id = M::identity(2);
        assert_eq!(a.mul(&id), a);
        let b = M::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), M::from_ints(&[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn rank_kernel_inverse() {
        let a = M::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(Scalar::is_zero));

        let b = M::from_ints(&[&[2, 1], &[1, 1]]);
        let binv = b.inverse().unwrap();
        assert_eq!(b.mul(&binv), M::identity(2));
        assert_eq!(b.det(), Rat::from_int(1));

        let sing = M::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(Scalar::is_zero(&sing.det()));
    }

    #[test]
    fn empty_shapes() {
        let e = M::zeros(4, 0);
        assert_eq!(e.rank(), 0);
        let f = M::zeros(0, 3);
        assert_eq!(f.kernel_basis().len(), 3);
        let prod = e.transpose().mul(&e);
        assert_eq!((prod.rows(), prod.cols()), (0, 0));
    }

    #[test]
    fn permutations() {
        let a = M::from_ints(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(
            a.permute_cols(&[2, 0, 1]),
            M::from_ints(&[&[3, 1, 2], &[6, 4, 5]])
        );
        assert_eq!(
            a.permute_rows(&[1, 0]),
            M::from_ints(&[&[4, 5, 6], &[1, 2, 3]])
        );
    }
}
