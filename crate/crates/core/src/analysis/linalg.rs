//! Dense Gaussian elimination with partial pivoting over any [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Scalar> DenseMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, x| if x.abs() > acc { x.abs() } else { acc })
    }

    /// Solves `self * X = rhs` where `rhs` has `n` rows of equal width.
    pub fn solve(mut self, mut rhs: Vec<Vec<R>>) -> Result<Vec<Vec<R>>> {
        let n = self.n;
        assert_eq!(rhs.len(), n, "right-hand side must have one row per equation");
        let scale = {
            let m = self.max_abs();
            if m > R::one() {
                m
            } else {
                R::one()
            }
        };
        let tol = R::pivot_tolerance() * scale;
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, self[(r, col)].abs()))
                .fold((col, R::zero() - R::one()), |best, cand| if cand.1 > best.1 { cand } else { best });
            if pivot_abs <= tol || pivot_abs.is_zero() {
                return Err(Error::Singular(col));
            }
            if pivot_row != col {
                for c in 0..n {
                    self.data.swap(col * n + c, pivot_row * n + c);
                }
                rhs.swap(col, pivot_row);
            }
            let pivot = self[(col, col)];
            for r in col + 1..n {
                let factor = self[(r, col)] / pivot;
                if factor.is_zero() {
                    continue;
                }
                self[(r, col)] = R::zero();
                for c in col + 1..n {
                    let v = self[(col, c)];
                    self[(r, c)] = self[(r, c)] - factor * v;
                }
                let (upper, lower) = rhs.split_at_mut(r);
                for (x, &y) in lower[0].iter_mut().zip(&upper[col]) {
                    *x = *x - factor * y;
                }
            }
        }
        for col in (0..n).rev() {
            let pivot = self[(col, col)];
            for c in col + 1..n {
                let coeff = self[(col, c)];
                if coeff.is_zero() {
                    continue;
                }
                let (upper, lower) = rhs.split_at_mut(c);
                for (x, &y) in upper[col].iter_mut().zip(&lower[0]) {
                    *x = *x - coeff * y;
                }
            }
            for x in &mut rhs[col] {
                *x = *x / pivot;
            }
        }
        Ok(rhs)
    }
}

impl<R> std::ops::Index<(usize, usize)> for DenseMatrix<R> {
    type Output = R;

    fn index(&self, (r, c): (usize, usize)) -> &R {
        &self.data[r * self.n + c]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for DenseMatrix<R> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut R {
        &mut self.data[r * self.n + c]
    }
}
