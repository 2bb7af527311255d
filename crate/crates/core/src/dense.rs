//! Row-major dense complex matrices.
//!
//! Used for conversion into and out of [`DiaqMatrix`](crate::DiaqMatrix),
//! by the dense simulation backend, and as the reference path the sparse
//! kernels are checked against.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T: Scalar = f64> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds an `n x n` matrix from row-major data.
    pub fn from_row_major(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(DenseMatrix { n, data })
    }

    /// Builds a matrix from nested rows; every row must have as many entries
    /// as there are rows.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "non-square input: {n} rows but a row of length {}",
                bad.len()
            )));
        }
        Ok(DenseMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::NotMultiplyable {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.n {
            return Err(Error::NotMultiplyable {
                left: self.n,
                right: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.n, other.n);
        let mut out = Self::zeros(na * nb);
        for ia in 0..na {
            for ja in 0..na {
                let a = self[(ia, ja)];
                for ib in 0..nb {
                    for jb in 0..nb {
                        out[(ia * nb + ib, ja * nb + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    /// Largest `|re| + |im|` over all entries.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.re.abs() + z.im.abs())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Entries with `|re| + |im| > eps`.
    pub fn nnz(&self, eps: T) -> usize {
        self.data
            .iter()
            .filter(|z| z.re.abs() + z.im.abs() > eps)
            .count()
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.n + c]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.n + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn non_square_rows_rejected() {
        let rows = vec![vec![c(1.0), c(2.0)], vec![c(3.0)]];
        assert!(matches!(DenseMatrix::from_rows(&rows), Err(Error::Shape(_))));
    }

    #[test]
    fn kron_of_identities() {
        let i2 = DenseMatrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2), DenseMatrix::identity(4));
    }

    #[test]
    fn matmul_mismatch() {
        let a = DenseMatrix::<f64>::identity(2);
        let b = DenseMatrix::<f64>::identity(3);
        assert!(matches!(a.matmul(&b), Err(Error::NotMultiplyable { .. })));
    }
}
