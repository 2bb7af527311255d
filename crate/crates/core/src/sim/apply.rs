//! Gate application kernels.

use num_complex::Complex;
use rayon::prelude::*;

use super::StateVector;
use crate::error::{Error, Result};
use crate::gates::Placement;
use crate::par::{for_each_split, SendPtr, PAR_MIN_WORK};
use crate::scalar::Scalar;

fn check_dims<T: Scalar>(p: &Placement<T>, x: &StateVector<T>) -> Result<()> {
    if p.n_dim() != x.len() {
        return Err(Error::Shape(format!(
            "placement acts on {} amplitudes, state has {}",
            p.n_dim(),
            x.len()
        )));
    }
    Ok(())
}

/// A contiguous run of rows `[r_lo, r_hi)` of `m` inside repetition `rep`.
#[derive(Debug, Clone, Copy)]
struct Unit {
    rep: usize,
    r_lo: usize,
    r_hi: usize,
}

/// Splits the `dim_a` repetitions (and, when there are too few of them,
/// row ranges of `m` inside each repetition) into independent work units.
fn work_units(dim_a: usize, nm: usize, parallel: bool) -> Vec<Unit> {
    let target = if parallel { rayon::current_num_threads() * 4 } else { 1 };
    let pieces = target.div_ceil(dim_a).clamp(1, nm);
    let rows = nm.div_ceil(pieces);
    (0..dim_a)
        .flat_map(|rep| {
            (0..nm).step_by(rows).map(move |r_lo| Unit {
                rep,
                r_lo,
                r_hi: (r_lo + rows).min(nm),
            })
        })
        .collect()
}

/// Applies `I_{dim_a} ⊗ m ⊗ I_{dim_b}` to `x` without materializing the
/// Kronecker product.
///
/// For each stored diagonal of `m` and each repetition `rep`, with
/// `skip = rep * dim_b * N_m`:
///
/// - `d < 0`: `x_idx = j + i*dim_b + skip`, `y_idx = x_idx + dim_b*|d|`
/// - `d >= 0`: `y_idx = j + i*dim_b + skip`, `x_idx = y_idx + dim_b*d`
///
/// and `y[y_idx] += values[i] * x[x_idx]`, with `j` the contiguous inner
/// loop over `dim_b`. Work units own disjoint slices of `y` and visit
/// diagonals in ascending order, so the result does not depend on the
/// number of threads.
pub fn apply_placed<T: Scalar>(p: &Placement<T>, x: &StateVector<T>) -> Result<StateVector<T>> {
    check_dims(p, x)?;
    let nm = p.m.n_dim();
    let db = p.dim_b;
    let mut y = StateVector::zeroed(x.n_qubits());
    let work = x.len() * p.m.diag_count().max(1);
    let parallel = work >= PAR_MIN_WORK && rayon::current_num_threads() > 1;
    let units = work_units(p.dim_a, nm, parallel);
    let sizes: Vec<usize> = units.iter().map(|u| (u.r_hi - u.r_lo) * db).collect();
    let (x_re, x_im) = (x.re(), x.im());
    let (y_re, y_im) = y.planes_mut();

    for_each_split(y_re, y_im, &sizes, parallel, |idx, yr, yi| {
        let Unit { rep, r_lo, r_hi } = units[idx];
        let skip = rep * db * nm;
        let base = skip + r_lo * db;
        for diag in p.m.diagonals() {
            let d = diag.index();
            let ad = d.unsigned_abs();
            let (vr, vi) = (diag.re(), diag.im());
            // rows of m written by this unit, as positions on the diagonal
            let (i_lo, i_hi) = if d < 0 {
                (r_lo.saturating_sub(ad), r_hi.saturating_sub(ad).min(diag.len()))
            } else {
                (r_lo, r_hi.min(diag.len()))
            };
            for i in i_lo..i_hi.max(i_lo) {
                let (v_re, v_im) = (vr[i], vi[i]);
                let (x0, y0) = if d < 0 {
                    let x0 = i * db + skip;
                    (x0, x0 + db * ad)
                } else {
                    let y0 = i * db + skip;
                    (y0 + db * ad, y0)
                };
                let xr = &x_re[x0..x0 + db];
                let xi = &x_im[x0..x0 + db];
                let yr = &mut yr[y0 - base..y0 - base + db];
                let yi = &mut yi[y0 - base..y0 - base + db];
                for j in 0..db {
                    yr[j] += v_re * xr[j] - v_im * xi[j];
                    yi[j] += v_re * xi[j] + v_im * xr[j];
                }
            }
        }
    });
    Ok(y)
}

/// Dense reference application: the gate's full `2^k x 2^k` matrix is
/// applied to every group of `2^k` amplitudes that differ only in the gate
/// qubits. Fused placements use `m` over the span.
pub fn apply_dense<T: Scalar>(p: &Placement<T>, x: &StateVector<T>) -> Result<StateVector<T>> {
    check_dims(p, x)?;
    let n = x.n_qubits();
    let span: Vec<usize>;
    let (gate, qubits) = match &p.local {
        Some(local) => (local.matrix.to_dense(), local.qubits.as_slice()),
        None => {
            span = (p.span_lo..=p.span_hi).collect();
            (p.m.to_dense(), span.as_slice())
        }
    };
    let k = qubits.len();
    let dim = 1usize << k;
    // basis offset of each local gate index; gate qubit 0 is the local MSB
    let offsets: Vec<usize> = (0..dim)
        .map(|g| {
            (0..k)
                .filter(|i| g >> (k - 1 - i) & 1 == 1)
                .fold(0, |acc, i| acc | 1 << (n - 1 - qubits[i]))
        })
        .collect();
    let mut gate_bits: Vec<usize> = qubits.iter().map(|q| n - 1 - q).collect();
    gate_bits.sort_unstable();
    let insert_zeros = |mut t: usize| -> usize {
        for &b in &gate_bits {
            let low = t & ((1 << b) - 1);
            t = ((t >> b) << (b + 1)) | low;
        }
        t
    };

    let groups = x.len() >> k;
    let mut y: StateVector<T> = StateVector::zeroed(n);
    let (x_re, x_im) = (x.re(), x.im());
    let (y_re, y_im) = y.planes_mut();
    let out_re = SendPtr(y_re.as_mut_ptr());
    let out_im = SendPtr(y_im.as_mut_ptr());
    let rows: Vec<&[Complex<T>]> = (0..dim).map(|r| gate.row(r)).collect();

    let body = |t: usize, amps: &mut Vec<Complex<T>>| {
        let base = insert_zeros(t);
        amps.clear();
        amps.extend(offsets.iter().map(|&o| Complex::new(x_re[base | o], x_im[base | o])));
        for (r, row) in rows.iter().enumerate() {
            let v = row
                .iter()
                .zip(amps.iter())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (g, a)| acc + g * a);
            let idx = base | offsets[r];
            // SAFETY: distinct groups t touch disjoint index sets base|offset.
            unsafe {
                *out_re.get().add(idx) = v.re;
                *out_im.get().add(idx) = v.im;
            }
        }
    };
    if x.len() * dim >= PAR_MIN_WORK && rayon::current_num_threads() > 1 {
        (0..groups)
            .into_par_iter()
            .for_each_init(|| Vec::with_capacity(dim), |amps, t| body(t, amps));
    } else {
        let mut amps = Vec::with_capacity(dim);
        (0..groups).for_each(|t| body(t, &mut amps));
    }
    Ok(y)
}
