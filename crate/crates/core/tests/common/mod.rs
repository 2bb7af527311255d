#![allow(dead_code)]

use std::path::PathBuf;

use diaq::gates::gate_dense;
use diaq::{Circuit, Complex, DenseMatrix, DiaqMatrix, GateKind, GateOp};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C64 = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Random `n x n` matrix with `1..=max_diags` distinct random diagonals.
pub fn random_diaq(rng: &mut impl Rng, n: usize, max_diags: usize) -> DiaqMatrix<f64> {
    let span = n as isize - 1;
    let mut all: Vec<isize> = (-span..=span).collect();
    all.shuffle(rng);
    let count = rng.gen_range(1..=max_diags.min(all.len()));
    let diags: Vec<(isize, Vec<C64>)> = all[..count]
        .iter()
        .map(|&d| (d, random_vec(rng, n - d.unsigned_abs())))
        .collect();
    DiaqMatrix::from_diagonals(n, diags).unwrap()
}

/// `|got - want|_max ≤ 1e-12 · max(1, scale)`.
pub fn close(got: &DenseMatrix<f64>, want: &DenseMatrix<f64>, scale: f64) -> bool {
    got.max_diff(want) <= 1e-12 * scale.max(1.0)
}

pub fn vec_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// The `2^n` unitary of one gate, built entry by entry: `(r, c)` takes
/// `g[r_g, c_g]` when `r` and `c` agree on every qubit the gate does not
/// touch. Shares nothing with the library's placement code.
pub fn full_unitary(op: &GateOp, n: usize) -> DenseMatrix<f64> {
    let g = gate_dense(op).unwrap();
    let dim = 1usize << n;
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let mask: usize = op.qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    let local = |x: usize| op.qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
    let mut u = DenseMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            if r & !mask == c & !mask {
                u[(r, c)] = g[(local(r), local(c))];
            }
        }
    }
    u
}

/// Reference final state by dense matrix-vector products over full unitaries.
pub fn oracle_state(circuit: &Circuit) -> Vec<C64> {
    let dim = 1usize << circuit.n_qubits;
    let mut x = vec![Complex::new(0.0, 0.0); dim];
    x[0] = Complex::new(1.0, 0.0);
    for op in circuit.ops.iter().filter(|op| op.kind.is_unitary()) {
        x = full_unitary(op, circuit.n_qubits).matvec(&x).unwrap();
    }
    x
}

const ONE_QUBIT: [GateKind; 13] = [
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
    GateKind::U2,
    GateKind::U3,
];

/// Random circuit over the native catalog, including non-adjacent and
/// reversed multi-qubit gates.
pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let arity = if n >= 3 { rng.gen_range(1..=3) } else { rng.gen_range(1..=n) };
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(rng);
        qubits.truncate(arity);
        let kind = match arity {
            1 => *ONE_QUBIT.choose(rng).unwrap(),
            2 => *[GateKind::Cx, GateKind::Cz, GateKind::Swap].choose(rng).unwrap(),
            _ => GateKind::Ccx,
        };
        let params: Vec<f64> = (0..kind.param_count()).map(|_| rng.gen_range(-3.2..3.2)).collect();
        c.push(GateOp::new(kind, &qubits, &params)).unwrap();
    }
    c
}

pub fn ghz_state(n: usize) -> Vec<C64> {
    let mut v = vec![Complex::new(0.0, 0.0); 1 << n];
    v[0] = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[(1 << n) - 1] = v[0];
    v
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

/// Bundled valid fixtures as `(stem, source)`, sorted by name.
pub fn fixtures() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "qasm"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}
