//! The DiaQ matrix format.
//!
//! A square `N x N` matrix is held as an ordered map from diagonal index
//! `d = column - row` to the whole diagonal, stored as two planes (real and
//! imaginary) of length `N - |d|`. Interior zeros are stored; only diagonals
//! that are zero everywhere may be left out.
//!
//! Element `(r, c)` lives on diagonal `d = c - r` at position
//! `k = r + min(d, 0)`, so position `k` of diagonal `d >= 0` is `(k, k + d)`
//! and position `k` of diagonal `d < 0` is `(k - d, k)`.

mod json;
mod kernels;
mod memory;
mod structure;

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::aligned::AlignedVec;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use kernels::multiply_diagonals;
pub use memory::{bytes_for, MemoryEstimate, StorageFormat, DIAQ_ENTRY_OVERHEAD, INDEX_BYTES};

/// Length of diagonal `d` in an `n_dim x n_dim` matrix.
pub fn diag_len(d: isize, n_dim: usize) -> Result<usize> {
    let abs = d.unsigned_abs();
    if n_dim == 0 || abs > n_dim - 1 {
        return Err(Error::DiagonalRange { index: d, n_dim });
    }
    Ok(n_dim - abs)
}

/// Storage position of row `r` on diagonal `d`.
#[inline]
pub fn storage_position(r: usize, d: isize) -> usize {
    (r as isize + d.min(0)) as usize
}

/// Row held at storage position `k` of diagonal `d`.
#[inline]
pub fn row_at(k: usize, d: isize) -> usize {
    (k as isize - d.min(0)) as usize
}

#[inline]
pub(crate) fn magnitude<T: Scalar>(re: T, im: T) -> T {
    re.abs() + im.abs()
}

/// One stored diagonal with planar value arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal<T: Scalar = f64> {
    index: isize,
    re: AlignedVec<T>,
    im: AlignedVec<T>,
}

impl<T: Scalar> Diagonal<T> {
    pub fn zeros(index: isize, n_dim: usize) -> Result<Self> {
        let len = diag_len(index, n_dim)?;
        Ok(Diagonal {
            index,
            re: AlignedVec::zeroed(len),
            im: AlignedVec::zeroed(len),
        })
    }

    pub fn from_values(index: isize, n_dim: usize, values: &[Complex<T>]) -> Result<Self> {
        let mut diag = Self::zeros(index, n_dim)?;
        if values.len() != diag.len() {
            return Err(Error::Shape(format!(
                "diagonal {index} of a {n_dim}x{n_dim} matrix needs {} values, got {}",
                diag.len(),
                values.len()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            diag.re[k] = v.re;
            diag.im[k] = v.im;
        }
        Ok(diag)
    }

    pub fn from_planes(index: isize, n_dim: usize, re: &[T], im: &[T]) -> Result<Self> {
        let len = diag_len(index, n_dim)?;
        if re.len() != len || im.len() != len {
            return Err(Error::Shape(format!(
                "diagonal {index} of a {n_dim}x{n_dim} matrix needs {len} values, got {}/{}",
                re.len(),
                im.len()
            )));
        }
        Ok(Diagonal {
            index,
            re: AlignedVec::from_slice(re),
            im: AlignedVec::from_slice(im),
        })
    }

    pub fn index(&self) -> isize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[T] {
        &self.re
    }

    pub fn im(&self) -> &[T] {
        &self.im
    }

    pub fn planes_mut(&mut self) -> (&mut [T], &mut [T]) {
        (&mut self.re, &mut self.im)
    }

    pub fn get(&self, k: usize) -> Complex<T> {
        Complex::new(self.re[k], self.im[k])
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = Complex<T>> + '_ {
        self.re.iter().zip(self.im.iter()).map(|(&r, &i)| Complex::new(r, i))
    }

    /// Number of stored values with `|re| + |im| > eps`.
    pub fn nnz(&self, eps: T) -> usize {
        self.re
            .iter()
            .zip(self.im.iter())
            .filter(|(&r, &i)| magnitude(r, i) > eps)
            .count()
    }

    pub fn is_negligible(&self, eps: T) -> bool {
        self.nnz(eps) == 0
    }

    pub(crate) fn with_index(mut self, index: isize) -> Self {
        self.index = index;
        self
    }

    fn conj_in_place(&mut self) {
        for v in self.im.iter_mut() {
            *v = -*v;
        }
    }
}

/// Square complex matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiaqMatrix<T: Scalar = f64> {
    n: usize,
    diags: BTreeMap<isize, Diagonal<T>>,
}

impl<T: Scalar> DiaqMatrix<T> {
    /// The `n x n` zero matrix (no stored diagonals).
    pub fn zeros(n: usize) -> Self {
        DiaqMatrix {
            n,
            diags: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        if n > 0 {
            let mut d = Diagonal::zeros(0, n).expect("principal diagonal");
            d.re.fill(T::one());
            m.diags.insert(0, d);
        }
        m
    }

    /// Builds a matrix from `(index, values)` pairs. Later duplicates of an
    /// index are rejected.
    pub fn from_diagonals<I>(n: usize, diags: I) -> Result<Self>
    where
        I: IntoIterator<Item = (isize, Vec<Complex<T>>)>,
    {
        let mut m = Self::zeros(n);
        for (d, values) in diags {
            if m.diags.contains_key(&d) {
                return Err(Error::Shape(format!("duplicate diagonal {d}")));
            }
            m.insert(Diagonal::from_values(d, n, &values)?)?;
        }
        Ok(m)
    }

    pub fn n_dim(&self) -> usize {
        self.n
    }

    pub fn diag_count(&self) -> usize {
        self.diags.len()
    }

    pub fn diagonal(&self, d: isize) -> Option<&Diagonal<T>> {
        self.diags.get(&d)
    }

    /// Stored diagonals in ascending index order.
    pub fn diagonals(&self) -> impl DoubleEndedIterator<Item = &Diagonal<T>> + ExactSizeIterator {
        self.diags.values()
    }

    pub fn indices(&self) -> Vec<isize> {
        self.diags.keys().copied().collect()
    }

    /// Inserts or replaces a diagonal after checking its length.
    pub fn insert(&mut self, diag: Diagonal<T>) -> Result<()> {
        let expected = diag_len(diag.index, self.n)?;
        if diag.len() != expected {
            return Err(Error::Shape(format!(
                "diagonal {} has length {}, expected {expected}",
                diag.index,
                diag.len()
            )));
        }
        self.diags.insert(diag.index, diag);
        Ok(())
    }

    pub fn remove(&mut self, d: isize) -> Option<Diagonal<T>> {
        self.diags.remove(&d)
    }

    /// Element `(r, c)`; absent diagonals read as zero.
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        assert!(r < self.n && c < self.n, "({r}, {c}) outside {0}x{0}", self.n);
        let d = c as isize - r as isize;
        match self.diags.get(&d) {
            Some(diag) => diag.get(storage_position(r, d)),
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Keeps exactly the diagonals of `m` holding an entry with
    /// `|re| + |im| > eps`. Kept diagonals are copied whole.
    pub fn from_dense(m: &DenseMatrix<T>, eps: T) -> Self {
        let n = m.n();
        let mut out = Self::zeros(n);
        if n == 0 {
            return out;
        }
        for d in -(n as isize - 1)..=(n as isize - 1) {
            let mut diag = Diagonal::zeros(d, n).expect("index in range");
            let mut keep = false;
            for k in 0..diag.len() {
                let r = row_at(k, d);
                let v = m[(r, (r as isize + d) as usize)];
                diag.re[k] = v.re;
                diag.im[k] = v.im;
                keep |= magnitude(v.re, v.im) > eps;
            }
            if keep {
                out.diags.insert(d, diag);
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.n);
        for diag in self.diags.values() {
            let d = diag.index;
            for (k, v) in diag.values().enumerate() {
                let r = row_at(k, d);
                out[(r, (r as isize + d) as usize)] = v;
            }
        }
        out
    }

    /// Stored values with `|re| + |im| > eps`.
    pub fn nnz(&self, eps: T) -> usize {
        self.diags.values().map(|d| d.nnz(eps)).sum()
    }

    /// `1 - nnz / N^2`; the empty `0 x 0` matrix counts as fully sparse.
    pub fn sparsity(&self, eps: T) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        let total = (self.n as f64) * (self.n as f64);
        1.0 - self.nnz(eps) as f64 / total
    }

    /// Drops every diagonal whose values all have `|re| + |im| <= eps`.
    pub fn prune(&mut self, eps: T) {
        self.diags.retain(|_, d| !d.is_negligible(eps));
    }

    pub fn pruned(mut self, eps: T) -> Self {
        self.prune(eps);
        self
    }

    /// Largest `|re| + |im|` over stored values.
    pub fn max_abs(&self) -> T {
        self.diags
            .values()
            .flat_map(|d| d.re.iter().zip(d.im.iter()).map(|(&r, &i)| magnitude(r, i)))
            .fold(T::zero(), T::max)
    }

    /// Converts the value planes to another precision.
    pub fn cast<U: Scalar>(&self) -> DiaqMatrix<U> {
        let conv = |v: &T| U::from_f64_lossy(v.to_f64().expect("finite scalar"));
        let diags = self
            .diags
            .iter()
            .map(|(&idx, d)| {
                let re: Vec<U> = d.re.iter().map(conv).collect();
                let im: Vec<U> = d.im.iter().map(conv).collect();
                let diag = Diagonal::from_planes(idx, self.n, &re, &im).expect("same shape");
                (idx, diag)
            })
            .collect();
        DiaqMatrix { n: self.n, diags }
    }
}
