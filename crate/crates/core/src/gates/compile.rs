use std::collections::BTreeMap;

use super::{gate_matrix, Circuit, GateOp};
use crate::diaq::{storage_position, Diagonal, DiaqMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The gate's own `2^k` matrix and the qubits it acts on, kept alongside a
/// compiled placement so the dense backend can apply it directly.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGate<T: Scalar = f64> {
    pub matrix: DiaqMatrix<T>,
    pub qubits: Vec<usize>,
}

/// A compiled timestep `I_{dim_a} ⊗ m ⊗ I_{dim_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement<T: Scalar = f64> {
    pub dim_a: usize,
    pub m: DiaqMatrix<T>,
    pub dim_b: usize,
    pub span_lo: usize,
    pub span_hi: usize,
    /// Name of the source gate, or `a+b+...` after fusion.
    pub label: String,
    /// Present for unfused placements.
    pub local: Option<LocalGate<T>>,
}

impl<T: Scalar> Placement<T> {
    pub fn n_dim(&self) -> usize {
        self.dim_a * self.m.n_dim() * self.dim_b
    }

    pub fn same_span(&self, other: &Placement<T>) -> bool {
        self.dim_a == other.dim_a
            && self.dim_b == other.dim_b
            && self.span_lo == other.span_lo
            && self.span_hi == other.span_hi
    }

    /// The full `2^n` timestep unitary.
    pub fn materialize(&self) -> DiaqMatrix<T> {
        self.m.kron_identity(self.dim_a, self.dim_b)
    }
}

/// Embeds a `2^k` gate into a `2^s` span. `positions[i]` is the span bit
/// (0 = most significant) carrying the gate's i-th qubit. Entry `(r, c)` is
/// `g[r_g, c_g]` when `r` and `c` agree on every non-gate bit, zero otherwise.
pub fn build_span_unitary<T: Scalar>(g: &DiaqMatrix<T>, positions: &[usize], s: usize) -> Result<DiaqMatrix<T>> {
    let k = positions.len();
    if g.n_dim() != 1 << k {
        return Err(Error::Shape(format!(
            "a {}x{} gate does not act on {k} qubits",
            g.n_dim(),
            g.n_dim()
        )));
    }
    if let Some(&p) = positions.iter().find(|&&p| p >= s) {
        return Err(Error::Shape(format!("position {p} outside a {s}-qubit span")));
    }
    for (i, p) in positions.iter().enumerate() {
        if positions[..i].contains(p) {
            return Err(Error::Shape(format!("position {p} repeated")));
        }
    }
    // span bit p is index bit (s - 1 - p); gate qubit i is gate index bit (k - 1 - i)
    let scatter_gate = |local: usize| -> usize {
        (0..k)
            .filter(|i| local >> (k - 1 - i) & 1 == 1)
            .fold(0, |acc, i| acc | 1 << (s - 1 - positions[i]))
    };
    let rest: Vec<usize> = (0..s).filter(|p| !positions.contains(p)).collect();
    let scatter_rest = |bits: usize| -> usize {
        let m = rest.len();
        (0..m)
            .filter(|j| bits >> (m - 1 - j) & 1 == 1)
            .fold(0, |acc, j| acc | 1 << (s - 1 - rest[j]))
    };
    let rest_patterns: Vec<usize> = (0..1usize << rest.len()).map(scatter_rest).collect();

    let n = 1usize << s;
    let mut diags: BTreeMap<isize, Diagonal<T>> = BTreeMap::new();
    for diag in g.diagonals() {
        for (kg, v) in diag.values().enumerate() {
            if v.re == T::zero() && v.im == T::zero() {
                continue;
            }
            let rg = crate::diaq::row_at(kg, diag.index());
            let cg = (rg as isize + diag.index()) as usize;
            let (r_bits, c_bits) = (scatter_gate(rg), scatter_gate(cg));
            for &pattern in &rest_patterns {
                let (r, c) = (r_bits | pattern, c_bits | pattern);
                let d = c as isize - r as isize;
                let target = diags
                    .entry(d)
                    .or_insert_with(|| Diagonal::zeros(d, n).expect("span index in range"));
                let pos = storage_position(r, d);
                let (tr, ti) = target.planes_mut();
                tr[pos] = v.re;
                ti[pos] = v.im;
            }
        }
    }
    let mut out = DiaqMatrix::zeros(n);
    for d in diags.into_values() {
        out.insert(d)?;
    }
    Ok(out)
}

fn place<T: Scalar>(op: &GateOp, n_qubits: usize, span_limit: usize) -> Result<Placement<T>> {
    let lo = *op.qubits.iter().min().expect("unitary ops have qubits");
    let hi = *op.qubits.iter().max().expect("unitary ops have qubits");
    let span = hi - lo + 1;
    if span > span_limit {
        return Err(Error::SpanOverflow {
            gate: op.to_string(),
            span,
            limit: span_limit,
        });
    }
    let g: DiaqMatrix<T> = gate_matrix(op)?.cast();
    let contiguous = op.qubits.iter().enumerate().all(|(i, &q)| q == lo + i);
    let m = if contiguous {
        g.clone()
    } else {
        let positions: Vec<usize> = op.qubits.iter().map(|q| q - lo).collect();
        build_span_unitary(&g, &positions, span)?
    };
    Ok(Placement {
        dim_a: 1 << lo,
        m,
        dim_b: 1 << (n_qubits - 1 - hi),
        span_lo: lo,
        span_hi: hi,
        label: op.kind.name().to_string(),
        local: Some(LocalGate {
            matrix: g,
            qubits: op.qubits.clone(),
        }),
    })
}

/// One placement per unitary op, in circuit order. Barriers and measurements
/// are skipped.
pub fn compile<T: Scalar>(circuit: &Circuit, span_limit: usize) -> Result<Vec<Placement<T>>> {
    if span_limit < 2 {
        return Err(Error::Shape(format!("span limit must be at least 2, got {span_limit}")));
    }
    circuit.validate()?;
    circuit
        .ops
        .iter()
        .filter(|op| op.kind.is_unitary())
        .map(|op| place(op, circuit.n_qubits, span_limit))
        .collect()
}
