use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use super::{Diagonal, DiaqMatrix};
use crate::config::MATMUL_PRUNE_EPS;
use crate::error::{Error, Result};
use crate::par::{for_each_split, PAR_MIN_WORK};
use crate::scalar::Scalar;

/// Rows where diagonal `da` of A meets diagonal `db` of B, expressed as
/// starting storage positions in A, B and the product diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Overlap {
    len: usize,
    ka: usize,
    kb: usize,
    kc: usize,
}

fn overlap(da: isize, db: isize, n: usize) -> Option<Overlap> {
    let n = n as isize;
    let dc = da + db;
    if dc.abs() >= n {
        return None;
    }
    // C[i, i+da+db] += A[i, i+da] * B[i+da, i+da+db]
    let lo = 0.max(-da).max(-dc);
    let hi = n.min(n - da).min(n - dc);
    if lo >= hi {
        return None;
    }
    Some(Overlap {
        len: (hi - lo) as usize,
        ka: (lo + da.min(0)) as usize,
        kb: (lo + da + db.min(0)) as usize,
        kc: (lo + dc.min(0)) as usize,
    })
}

/// Complex multiply-accumulate over four planar arrays into a fifth pair.
#[inline]
fn mul_acc<T: Scalar>(a: &Diagonal<T>, b: &Diagonal<T>, ov: Overlap, c_re: &mut [T], c_im: &mut [T]) {
    let ar = &a.re()[ov.ka..ov.ka + ov.len];
    let ai = &a.im()[ov.ka..ov.ka + ov.len];
    let br = &b.re()[ov.kb..ov.kb + ov.len];
    let bi = &b.im()[ov.kb..ov.kb + ov.len];
    let cr = &mut c_re[ov.kc..ov.kc + ov.len];
    let ci = &mut c_im[ov.kc..ov.kc + ov.len];
    for t in 0..ov.len {
        cr[t] += ar[t] * br[t] - ai[t] * bi[t];
        ci[t] += ar[t] * bi[t] + ai[t] * br[t];
    }
}

/// Product contribution of one diagonal of A with one diagonal of B.
///
/// Returns the index of the target diagonal `da + db` and a full-length
/// diagonal holding the partial products (zero outside the rows where both
/// inputs are defined), or `None` when the two diagonals do not meet inside
/// the matrix.
pub fn multiply_diagonals<T: Scalar>(
    a: &Diagonal<T>,
    b: &Diagonal<T>,
    n_dim: usize,
) -> Option<(isize, Diagonal<T>)> {
    let ov = overlap(a.index(), b.index(), n_dim)?;
    let dc = a.index() + b.index();
    let mut out = Diagonal::zeros(dc, n_dim).ok()?;
    let (re, im) = out.planes_mut();
    mul_acc(a, b, ov, re, im);
    Some((dc, out))
}

impl<T: Scalar> DiaqMatrix<T> {
    /// Sparse product `self * other`.
    ///
    /// Every pair of stored diagonals `(da, db)` feeds diagonal `da + db`.
    /// Contributions are accumulated per target diagonal in ascending
    /// `(da, db)` order; target diagonals are computed independently, so the
    /// result is bitwise identical for any number of worker threads. Target
    /// diagonals that end up entirely below `1e-15` are dropped.
    pub fn matmul(&self, other: &DiaqMatrix<T>) -> Result<DiaqMatrix<T>> {
        if self.n != other.n {
            return Err(Error::NotMultiplyable {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut plan: BTreeMap<isize, Vec<(&Diagonal<T>, &Diagonal<T>, Overlap)>> = BTreeMap::new();
        let mut work = 0usize;
        for a in self.diags.values() {
            for b in other.diags.values() {
                if let Some(ov) = overlap(a.index(), b.index(), n) {
                    work += ov.len;
                    plan.entry(a.index() + b.index()).or_default().push((a, b, ov));
                }
            }
        }
        let build = |(dc, pairs): (&isize, &Vec<(&Diagonal<T>, &Diagonal<T>, Overlap)>)| {
            let mut out = Diagonal::zeros(*dc, n).expect("overlap checks range");
            let (re, im) = out.planes_mut();
            for &(a, b, ov) in pairs {
                mul_acc(a, b, ov, re, im);
            }
            out
        };
        let diags: Vec<Diagonal<T>> = if work >= PAR_MIN_WORK && plan.len() > 1 {
            plan.par_iter().map(build).collect()
        } else {
            plan.iter().map(build).collect()
        };
        let eps = T::from_f64_lossy(MATMUL_PRUNE_EPS);
        Ok(DiaqMatrix {
            n,
            diags: diags
                .into_iter()
                .filter(|d| !d.is_negligible(eps))
                .map(|d| (d.index(), d))
                .collect(),
        })
    }

    /// Sparse matrix-vector product `self * x`.
    ///
    /// Each diagonal is swept with the three-branch rule (below, above and on
    /// the principal diagonal). Rows are split into independent chunks; each
    /// output entry receives its contributions in ascending diagonal order.
    pub fn spmv(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if x.len() != self.n {
            return Err(Error::NotMultiplyable {
                left: self.n,
                right: x.len(),
            });
        }
        let n = self.n;
        let x_re: Vec<T> = x.iter().map(|v| v.re).collect();
        let x_im: Vec<T> = x.iter().map(|v| v.im).collect();
        let mut y_re = vec![T::zero(); n];
        let mut y_im = vec![T::zero(); n];

        let work = n * self.diags.len();
        let chunk = if work >= PAR_MIN_WORK {
            (n / rayon::current_num_threads().max(1) / 4).max(4096)
        } else {
            n.max(1)
        };
        let sizes: Vec<usize> = (0..n).step_by(chunk).map(|r0| chunk.min(n - r0)).collect();
        let starts: Vec<usize> = (0..n).step_by(chunk).collect();

        for_each_split(&mut y_re, &mut y_im, &sizes, sizes.len() > 1, |idx, yr, yi| {
            let r0 = starts[idx] as isize;
            let r1 = r0 + yr.len() as isize;
            for diag in self.diags.values() {
                let d = diag.index();
                let (vr, vi) = (diag.re(), diag.im());
                let len = diag.len() as isize;
                if d < 0 {
                    // y[i - d] += v[i] * x[i]
                    let lo = (r0 + d).max(0);
                    let hi = (r1 + d).min(len);
                    for i in lo..hi {
                        let (i, yo) = (i as usize, (i - d - r0) as usize);
                        yr[yo] += vr[i] * x_re[i] - vi[i] * x_im[i];
                        yi[yo] += vr[i] * x_im[i] + vi[i] * x_re[i];
                    }
                } else if d > 0 {
                    // y[i] += v[i] * x[i + d]
                    let lo = r0.max(0);
                    let hi = r1.min(len);
                    for i in lo..hi {
                        let (yo, xi, i) = ((i - r0) as usize, (i + d) as usize, i as usize);
                        yr[yo] += vr[i] * x_re[xi] - vi[i] * x_im[xi];
                        yi[yo] += vr[i] * x_im[xi] + vi[i] * x_re[xi];
                    }
                } else {
                    for i in r0..r1 {
                        let (yo, i) = ((i - r0) as usize, i as usize);
                        yr[yo] += vr[i] * x_re[i] - vi[i] * x_im[i];
                        yi[yo] += vr[i] * x_im[i] + vi[i] * x_re[i];
                    }
                }
            }
        });

        Ok(y_re
            .into_iter()
            .zip(y_im)
            .map(|(re, im)| Complex::new(re, im))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn diag(d: isize, n: usize, vals: &[f64]) -> Diagonal<f64> {
        let v: Vec<_> = vals.iter().map(|&x| c(x)).collect();
        Diagonal::from_values(d, n, &v).unwrap()
    }

    #[test]
    fn corner_diagonals_meet_once() {
        // A[0,3] = 2 on d=3, B[3,0] = 5 on d=-3: only row 0 contributes.
        let a = diag(3, 4, &[2.0]);
        let b = diag(-3, 4, &[5.0]);
        assert_eq!(
            overlap(3, -3, 4),
            Some(Overlap { len: 1, ka: 0, kb: 0, kc: 0 })
        );
        let (dc, out) = multiply_diagonals(&a, &b, 4).unwrap();
        assert_eq!(dc, 0);
        assert_eq!(out.re(), &[10.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn out_of_matrix_target_is_absent() {
        let a = diag(3, 4, &[1.0]);
        assert!(multiply_diagonals(&a, &a, 4).is_none());
    }

    #[test]
    fn principal_times_principal_is_elementwise() {
        let a = diag(0, 3, &[1.0, 2.0, 3.0]);
        let b = diag(0, 3, &[4.0, 5.0, 6.0]);
        let (dc, out) = multiply_diagonals(&a, &b, 3).unwrap();
        assert_eq!(dc, 0);
        assert_eq!(out.re(), &[4.0, 10.0, 18.0]);
    }

    #[test]
    fn z_squared_is_identity() {
        let z = DiaqMatrix::from_diagonals(2, vec![(0, vec![c(1.0), c(-1.0)])]).unwrap();
        assert_eq!(z.matmul(&z).unwrap(), DiaqMatrix::identity(2));
    }

    #[test]
    fn dimension_mismatch() {
        let a = DiaqMatrix::<f64>::identity(2);
        let b = DiaqMatrix::<f64>::identity(4);
        let err = a.matmul(&b).unwrap_err();
        assert!(err.to_string().contains("not multiplyable"));
        assert!(a.spmv(&[c(1.0); 3]).is_err());
    }

    #[test]
    fn spmv_corner_example_on_ones() {
        let (a, b, cc, d, e, f) = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0);
        let m = DiaqMatrix::from_diagonals(
            4,
            vec![(-3, vec![c(e)]), (0, vec![c(a), c(cc), c(d), c(f)]), (3, vec![c(b)])],
        )
        .unwrap();
        let y = m.spmv(&[c(1.0); 4]).unwrap();
        assert_eq!(y, vec![c(a + b), c(cc), c(d), c(e + f)]);
    }

    #[test]
    fn sum_of_partials_equals_product() {
        let dense = DenseMatrix::from_rows(&[
            vec![c(1.0), c(2.0), c(0.0)],
            vec![c(0.0), c(3.0), c(4.0)],
            vec![c(5.0), c(0.0), c(6.0)],
        ])
        .unwrap();
        let a = DiaqMatrix::from_dense(&dense, 0.0);
        let mut acc = DenseMatrix::zeros(3);
        for da in a.diagonals() {
            for db in a.diagonals() {
                if let Some((_, part)) = multiply_diagonals(da, db, 3) {
                    let mut single = DiaqMatrix::zeros(3);
                    single.insert(part).unwrap();
                    let pd = single.to_dense();
                    for r in 0..3 {
                        for col in 0..3 {
                            acc[(r, col)] += pd[(r, col)];
                        }
                    }
                }
            }
        }
        assert_eq!(a.matmul(&a).unwrap().to_dense(), acc);
        assert_eq!(acc, dense.matmul(&dense).unwrap());
    }
}
