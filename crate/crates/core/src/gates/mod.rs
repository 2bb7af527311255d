//! Gate catalog and circuit compilation.
//!
//! Qubit 0 is the most significant bit of a basis index, so it is the
//! leftmost Kronecker factor: a gate on qubits `lo..=hi` of an `n`-qubit
//! register becomes `I_{2^lo} ⊗ G ⊗ I_{2^(n-1-hi)}`.

mod compile;
mod fusion;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::diaq::DiaqMatrix;
use crate::error::{Error, Result};

pub use compile::{build_span_unitary, compile, LocalGate, Placement};
pub use fusion::fuse_pass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Cz,
    Swap,
    Ccx,
    Id,
    Barrier,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 21] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::Ccx,
        GateKind::Id,
        GateKind::Barrier,
        GateKind::Measure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Ccx => "ccx",
            GateKind::Id => "id",
            GateKind::Barrier => "barrier",
            GateKind::Measure => "measure",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Number of angle parameters.
    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    /// Number of qubit operands; `None` for barrier, which takes any number.
    pub fn qubit_count(self) -> Option<usize> {
        match self {
            GateKind::Barrier => None,
            GateKind::Cx | GateKind::Cz | GateKind::Swap => Some(2),
            GateKind::Ccx => Some(3),
            _ => Some(1),
        }
    }

    /// True for operations that carry a unitary.
    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::Barrier | GateKind::Measure)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One operation of a circuit with resolved angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    /// Classical bits written by a `measure`; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clbits: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize], params: &[f64]) -> Self {
        GateOp {
            kind,
            qubits: qubits.to_vec(),
            params: params.to_vec(),
            clbits: Vec::new(),
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        GateOp {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            params: Vec::new(),
            clbits: vec![clbit],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let invalid = |reason: String| Error::InvalidGate {
            name: self.kind.name().to_string(),
            reason,
        };
        if self.params.len() != self.kind.param_count() {
            return Err(invalid(format!(
                "expected {} parameters, got {}",
                self.kind.param_count(),
                self.params.len()
            )));
        }
        if let Some(k) = self.kind.qubit_count() {
            if self.qubits.len() != k {
                return Err(invalid(format!("expected {k} qubits, got {}", self.qubits.len())));
            }
        }
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(invalid(format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if self.qubits[..i].contains(q) {
                return Err(invalid(format!("qubit {q} used twice")));
            }
        }
        if let Some(p) = self.params.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("non-finite parameter {p}")));
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<GateOp>,
    pub creg_size: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            creg_size: 0,
        }
    }

    /// Appends an op after validating it against the register size.
    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::Shape("a circuit needs at least one qubit".into()));
        }
        self.ops.iter().try_for_each(|op| op.validate(self.n_qubits))
    }

    /// Number of ops that carry a unitary.
    pub fn gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.is_unitary()).count()
    }
}

fn cis(theta: f64) -> Complex<f64> {
    Complex::from_polar(1.0, theta)
}

fn dense2(m: [[Complex<f64>; 2]; 2]) -> DenseMatrix<f64> {
    DenseMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]).expect("2x2")
}

fn permutation(n: usize, map: impl Fn(usize) -> usize) -> DenseMatrix<f64> {
    let mut m = DenseMatrix::zeros(n);
    for c in 0..n {
        m[(map(c), c)] = Complex::new(1.0, 0.0);
    }
    m
}

fn diagonal(values: &[Complex<f64>]) -> DenseMatrix<f64> {
    let mut m = DenseMatrix::zeros(values.len());
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = v;
    }
    m
}

/// Dense unitary of a catalog gate. The first listed qubit is the most
/// significant bit of the gate's local index.
pub fn gate_dense(op: &GateOp) -> Result<DenseMatrix<f64>> {
    if op.params.len() != op.kind.param_count() {
        return Err(Error::InvalidGate {
            name: op.kind.name().into(),
            reason: format!("expected {} parameters, got {}", op.kind.param_count(), op.params.len()),
        });
    }
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    let r = |x: f64| Complex::new(x, 0.0);
    let p = &op.params;
    let m = match op.kind {
        GateKind::H => dense2([[r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)], [r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]]),
        GateKind::X => dense2([[zero, one], [one, zero]]),
        GateKind::Y => dense2([[zero, -i], [i, zero]]),
        GateKind::Z => diagonal(&[one, -one]),
        GateKind::S => diagonal(&[one, i]),
        GateKind::Sdg => diagonal(&[one, -i]),
        GateKind::T => diagonal(&[one, cis(std::f64::consts::FRAC_PI_4)]),
        GateKind::Tdg => diagonal(&[one, cis(-std::f64::consts::FRAC_PI_4)]),
        GateKind::Id => DenseMatrix::identity(2),
        GateKind::Rx => {
            let (s, c) = (p[0] / 2.0).sin_cos();
            dense2([[r(c), -i * s], [-i * s, r(c)]])
        }
        GateKind::Ry => {
            let (s, c) = (p[0] / 2.0).sin_cos();
            dense2([[r(c), r(-s)], [r(s), r(c)]])
        }
        GateKind::Rz => diagonal(&[cis(-p[0] / 2.0), cis(p[0] / 2.0)]),
        GateKind::U1 => diagonal(&[one, cis(p[0])]),
        GateKind::U2 => {
            let (phi, lam) = (p[0], p[1]);
            let s = r(FRAC_1_SQRT_2);
            dense2([[s, -cis(lam) * s], [cis(phi) * s, cis(phi + lam) * s]])
        }
        GateKind::U3 => {
            let (theta, phi, lam) = (p[0], p[1], p[2]);
            let (s, c) = (theta / 2.0).sin_cos();
            dense2([[r(c), -cis(lam) * s], [cis(phi) * s, cis(phi + lam) * c]])
        }
        GateKind::Cx => permutation(4, |b| if b >= 2 { b ^ 1 } else { b }),
        GateKind::Cz => diagonal(&[one, one, one, -one]),
        GateKind::Swap => permutation(4, |b| ((b & 1) << 1) | (b >> 1)),
        GateKind::Ccx => permutation(8, |b| if b >= 6 { b ^ 1 } else { b }),
        GateKind::Barrier | GateKind::Measure => {
            return Err(Error::InvalidGate {
                name: op.kind.name().into(),
                reason: "has no unitary".into(),
            })
        }
    };
    Ok(m)
}

/// Catalog unitary in DiaQ form (`2^k x 2^k` for a `k`-qubit gate).
pub fn gate_matrix(op: &GateOp) -> Result<DiaqMatrix<f64>> {
    Ok(DiaqMatrix::from_dense(&gate_dense(op)?, 0.0))
}
