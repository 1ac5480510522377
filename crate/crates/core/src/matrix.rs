//! Small dense matrices over a [`Field`].
//!
//! Every matrix in this crate is at most 8x8 (the adjoint representation of
//! su(3)), so a row-major `Vec` with Gaussian elimination is all that is needed,
//! and it works unchanged for exact rationals and floats.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Field> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
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

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| {
                    acc + self[(i, j)].clone() * v[j].clone()
                })
            })
            .collect()
    }

    /// `x^T M y`.
    pub fn bilinear(&self, x: &[S], y: &[S]) -> S {
        let my = self.mul_vec(y);
        x.iter()
            .zip(my)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    /// Sub-matrix picking the listed rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Self::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn map<U: Field>(&self, f: impl Fn(&S) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == S::zero())
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting.
    /// Returns `None` when the matrix is singular (exactly, or to working
    /// precision for floats).
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(rhs.rows, self.rows, "dimension mismatch");
        let n = self.rows;
        let m = rhs.cols;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| {
                a[(i, col)]
                    .magnitude()
                    .partial_cmp(&a[(j, col)].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[(pivot, col)].negligible(scale) {
                return None;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap_rows(pivot, col);
            }
            let p = a[(col, col)].clone();
            for row in (col + 1)..n {
                let factor = a[(row, col)].clone() / p.clone();
                if factor == S::zero() {
                    continue;
                }
                for k in col..n {
                    let v = a[(col, k)].clone() * factor.clone();
                    a[(row, k)] = a[(row, k)].clone() - v;
                }
                for k in 0..m {
                    let v = b[(col, k)].clone() * factor.clone();
                    b[(row, k)] = b[(row, k)].clone() - v;
                }
            }
        }
        let mut x = Self::zeros(n, m);
        for k in 0..m {
            for row in (0..n).rev() {
                let mut acc = b[(row, k)].clone();
                for j in (row + 1)..n {
                    acc = acc - a[(row, j)].clone() * x[(j, k)].clone();
                }
                x[(row, k)] = acc / a[(row, row)].clone();
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, rhs: &[S]) -> Option<Vec<S>> {
        let b = Self::from_columns(&[rhs.to_vec()]);
        self.solve(&b).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let pivot = (rank..a.rows).max_by(|&i, &j| {
                a[(i, col)]
                    .magnitude()
                    .partial_cmp(&a[(j, col)].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let Some(pivot) = pivot else { break };
            if a[(pivot, col)].negligible(scale) {
                continue;
            }
            a.swap_rows(pivot, rank);
            let p = a[(rank, col)].clone();
            for row in 0..a.rows {
                if row == rank {
                    continue;
                }
                let factor = a[(row, col)].clone() / p.clone();
                for k in col..a.cols {
                    let v = a[(rank, k)].clone() * factor.clone();
                    a[(row, k)] = a[(row, k)].clone() - v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Positive definiteness via the signs of the elimination pivots
    /// (symmetric input assumed).
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let p = a[(col, col)].clone();
            if p.negligible(scale) || p.approx_f64() <= 0.0 {
                return false;
            }
            for row in (col + 1)..n {
                let factor = a[(row, col)].clone() / p.clone();
                for k in col..n {
                    let v = a[(col, k)].clone() * factor.clone();
                    a[(row, k)] = a[(row, k)].clone() - v;
                }
            }
        }
        true
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Field> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if *a == S::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }
}

impl<S: Field> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Field> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Field> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(|x| -x.clone())
    }
}

/// Euclidean dot product of two coordinate vectors.
pub fn dot<S: Field>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

pub fn axpy<S: Field>(alpha: &S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(a, b)| alpha.clone() * a.clone() + b.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn exact_inverse_roundtrip() {
        let m = Mat::from_rows(vec![
            vec![r(2, 1), r(1, 3), r(0, 1)],
            vec![r(1, 1), r(0, 1), r(-1, 2)],
            vec![r(0, 1), r(5, 1), r(1, 1)],
        ]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(&m * &inv, Mat::identity(3));
    }

    #[test]
    fn singular_is_detected() {
        let m = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn float_solve_with_pivoting() {
        let m = Mat::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let x = m.solve_vec(&[3.0, 4.0]).unwrap();
        assert_eq!(x, vec![4.0, 3.0]);
    }

    #[test]
    fn definiteness() {
        let pd = Mat::from_rows(vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(2, 1)]]);
        let indefinite = Mat::from_rows(vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(1, 1)]]);
        assert!(pd.is_positive_definite());
        assert!(!indefinite.is_positive_definite());
    }
}
