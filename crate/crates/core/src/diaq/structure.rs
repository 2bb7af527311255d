use std::collections::BTreeMap;

use num_complex::Complex;

use super::{row_at, storage_position, Diagonal, DiaqMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

impl<T: Scalar> DiaqMatrix<T> {
    /// Negates every diagonal index. Position `k` of diagonal `d` and of
    /// diagonal `-d` are transposes of each other, so values move unchanged.
    pub fn transpose(&self) -> DiaqMatrix<T> {
        DiaqMatrix {
            n: self.n,
            diags: self
                .diags
                .values()
                .map(|d| (-d.index(), d.clone().with_index(-d.index())))
                .collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DiaqMatrix<T> {
        let mut out = self.transpose();
        for d in out.diags.values_mut() {
            d.conj_in_place();
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    ///
    /// Diagonal `da` of `self` and `db` of `other` scatter into diagonal
    /// `da * N_B + db`; distinct source pairs landing on the same target
    /// diagonal occupy disjoint positions.
    pub fn kron(&self, other: &DiaqMatrix<T>) -> DiaqMatrix<T> {
        let nb = other.n;
        let n = self.n * nb;
        let mut diags: BTreeMap<isize, Diagonal<T>> = BTreeMap::new();
        for a in self.diags.values() {
            for b in other.diags.values() {
                let d = a.index() * nb as isize + b.index();
                let target = diags
                    .entry(d)
                    .or_insert_with(|| Diagonal::zeros(d, n).expect("kron index in range"));
                let (tr, ti) = target.planes_mut();
                for ka in 0..a.len() {
                    let ra = row_at(ka, a.index());
                    let va = a.get(ka);
                    for kb in 0..b.len() {
                        let r = ra * nb + row_at(kb, b.index());
                        let k = storage_position(r, d);
                        let v = va * b.get(kb);
                        tr[k] += v.re;
                        ti[k] += v.im;
                    }
                }
            }
        }
        DiaqMatrix { n, diags }
    }

    /// Materializes `I_left ⊗ self ⊗ I_right` directly from the diagonals.
    ///
    /// Diagonal `d` maps to `d * right`. Inside each of the `left` blocks every
    /// value is repeated `right` times; consecutive blocks are separated by
    /// `|d| * right` stored zeros.
    pub fn kron_identity(&self, left: usize, right: usize) -> DiaqMatrix<T> {
        assert!(left >= 1 && right >= 1, "identity factors must be at least 1x1");
        let nm = self.n;
        let n = left * nm * right;
        let diags = self
            .diags
            .values()
            .map(|src| {
                let d = src.index() * right as isize;
                let mut out = Diagonal::zeros(d, n).expect("scaled index in range");
                let (tr, ti) = out.planes_mut();
                for block in 0..left {
                    let base = block * nm * right;
                    for (k, (&re, &im)) in src.re().iter().zip(src.im()).enumerate() {
                        let start = base + k * right;
                        tr[start..start + right].fill(re);
                        ti[start..start + right].fill(im);
                    }
                }
                (d, out)
            })
            .collect();
        DiaqMatrix { n, diags }
    }

    /// Elementwise sum; the result holds the union of both index sets.
    pub fn add(&self, other: &DiaqMatrix<T>) -> Result<DiaqMatrix<T>> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "cannot add {0}x{0} and {1}x{1} matrices",
                self.n, other.n
            )));
        }
        let mut out = self.clone();
        for b in other.diags.values() {
            match out.diags.get_mut(&b.index()) {
                Some(a) => {
                    let (ar, ai) = a.planes_mut();
                    for ((x, y), (&u, &v)) in ar.iter_mut().zip(ai.iter_mut()).zip(b.re().iter().zip(b.im())) {
                        *x += u;
                        *y += v;
                    }
                }
                None => {
                    out.diags.insert(b.index(), b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every stored value by `s`. Diagonals are kept even when
    /// they become zero; call [`prune`](Self::prune) to drop them.
    pub fn scale(&self, s: Complex<T>) -> DiaqMatrix<T> {
        let mut out = self.clone();
        for d in out.diags.values_mut() {
            let (re, im) = d.planes_mut();
            for (x, y) in re.iter_mut().zip(im.iter_mut()) {
                let v = Complex::new(*x, *y) * s;
                *x = v.re;
                *y = v.im;
            }
        }
        out
    }
}
