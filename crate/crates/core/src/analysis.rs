//! Sparsity and memory studies of timestep unitaries and their running
//! product.
//!
//! Each timestep `I ⊗ G ⊗ I` is materialized as a full `2^n` [`DiaqMatrix`],
//! so everything here is guarded by a qubit limit.

use std::fmt::Write;

use serde::Serialize;

use crate::config::{DEFAULT_ANALYSIS_MAX_QUBITS, DEFAULT_SPAN_LIMIT};
use crate::diaq::{bytes_for, DiaqMatrix, MemoryEstimate, StorageFormat};
use crate::error::{Error, Result};
use crate::gates::{compile, Circuit, Placement};
use crate::scalar::Scalar;

pub const CSV_HEADER: &str = "timestep,gate,sparsity,diag_count,nnz,bytes_dense,bytes_diaq,bytes_csr,bytes_coo,bytes_bsr";

const CSV_FORMATS: [StorageFormat; 5] = [
    StorageFormat::Dense,
    StorageFormat::Diaq,
    StorageFormat::Csr,
    StorageFormat::Coo,
    StorageFormat::Bsr,
];

/// Which side new timesteps multiply the running product from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainOrder {
    /// `P_t = U_t · P_{t-1}`, the order operators act on a state.
    #[default]
    Left,
    /// `P_t = P_{t-1} · U_t`.
    Right,
}

impl std::str::FromStr for ChainOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "left" => Ok(ChainOrder::Left),
            "right" => Ok(ChainOrder::Right),
            other => Err(format!("unknown chain order `{other}` (expected left or right)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Magnitude at or below which an entry counts as zero.
    pub eps: f64,
    pub order: ChainOrder,
    pub span_limit: usize,
    pub max_qubits: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            eps: 1e-15,
            order: ChainOrder::Left,
            span_limit: DEFAULT_SPAN_LIMIT,
            max_qubits: DEFAULT_ANALYSIS_MAX_QUBITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRecord {
    /// 1-based position in the compiled gate sequence.
    pub timestep: usize,
    pub gate: String,
    pub sparsity: f64,
    pub diag_count: usize,
    pub nnz: usize,
    pub memory: Vec<MemoryEstimate>,
}

impl AnalysisRecord {
    pub fn of<T: Scalar>(timestep: usize, gate: &str, m: &DiaqMatrix<T>, eps: f64) -> Self {
        let eps = T::from_f64_lossy(eps);
        AnalysisRecord {
            timestep,
            gate: gate.to_string(),
            sparsity: m.sparsity(eps),
            diag_count: m.diag_count(),
            nnz: m.nnz(eps),
            memory: m.memory_estimates(eps),
        }
    }

    pub fn bytes(&self, format: StorageFormat) -> u64 {
        bytes_for(&self.memory, format)
    }
}

fn guard(circuit: &Circuit, max_qubits: usize) -> Result<()> {
    if circuit.n_qubits > max_qubits {
        return Err(Error::Resource(format!(
            "analysis materializes 2^{} x 2^{} unitaries; limit is {max_qubits} qubits",
            circuit.n_qubits, circuit.n_qubits
        )));
    }
    Ok(())
}

/// Lazily materializes each timestep unitary as `(gate label, 2^n matrix)`.
pub fn timestep_unitaries<T: Scalar>(
    circuit: &Circuit,
    span_limit: usize,
    max_qubits: usize,
) -> Result<impl Iterator<Item = (String, DiaqMatrix<T>)>> {
    guard(circuit, max_qubits)?;
    let placements: Vec<Placement<T>> = compile(circuit, span_limit)?;
    Ok(placements.into_iter().map(|p| {
        let u = p.materialize();
        (p.label, u)
    }))
}

/// Statistics of each timestep unitary on its own.
pub fn timestep_analysis<T: Scalar>(circuit: &Circuit, opts: &AnalysisOptions) -> Result<Vec<AnalysisRecord>> {
    Ok(timestep_unitaries::<T>(circuit, opts.span_limit, opts.max_qubits)?
        .enumerate()
        .map(|(i, (label, u))| AnalysisRecord::of(i + 1, &label, &u, opts.eps))
        .collect())
}

/// Statistics of the running product of timestep unitaries, with default
/// options and double precision.
pub fn chain_product_analysis(circuit: &Circuit, eps: f64) -> Result<Vec<AnalysisRecord>> {
    chain_product_analysis_with::<f64>(circuit, &AnalysisOptions { eps, ..AnalysisOptions::default() })
}

pub fn chain_product_analysis_with<T: Scalar>(circuit: &Circuit, opts: &AnalysisOptions) -> Result<Vec<AnalysisRecord>> {
    let n = 1usize << circuit.n_qubits;
    let mut records = Vec::new();
    let mut product = DiaqMatrix::<T>::identity(n);
    for (i, (label, u)) in timestep_unitaries::<T>(circuit, opts.span_limit, opts.max_qubits)?.enumerate() {
        product = match opts.order {
            ChainOrder::Left => u.matmul(&product)?,
            ChainOrder::Right => product.matmul(&u)?,
        };
        records.push(AnalysisRecord::of(i + 1, &label, &product, opts.eps));
    }
    Ok(records)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_row(out: &mut String, prefix: Option<&str>, r: &AnalysisRecord) {
    if let Some(p) = prefix {
        write!(out, "{p},").unwrap();
    }
    write!(out, "{},{},{:.12},{},{}", r.timestep, csv_field(&r.gate), r.sparsity, r.diag_count, r.nnz).unwrap();
    for f in CSV_FORMATS {
        write!(out, ",{}", r.bytes(f)).unwrap();
    }
    out.push('\n');
}

/// One header line plus one row per record. Sparsity has 12 decimals.
pub fn emit_analysis_csv(records: &[AnalysisRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        write_row(&mut out, None, r);
    }
    out
}

/// Several record sets in one table, distinguished by a leading `mode`
/// column.
pub fn emit_analysis_csv_sections(sections: &[(&str, &[AnalysisRecord])]) -> String {
    let mut out = format!("mode,{CSV_HEADER}\n");
    for (mode, records) in sections {
        for r in *records {
            write_row(&mut out, Some(mode), r);
        }
    }
    out
}

/// JSON mirror of the CSV: `{"<mode>": [record, ...], ...}`.
pub fn emit_analysis_json(sections: &[(&str, &[AnalysisRecord])]) -> serde_json::Value {
    let map = sections
        .iter()
        .map(|(mode, records)| (mode.to_string(), serde_json::to_value(records).expect("records serialize")))
        .collect();
    serde_json::Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{ghz, qft};
    use crate::dense::DenseMatrix;
    use crate::gates::{GateKind, GateOp};

    fn single(kind: GateKind, q: usize, n: usize) -> Circuit {
        let mut c = Circuit::new(n);
        c.push(GateOp::new(kind, &[q], &[])).unwrap();
        c
    }

    fn indices(c: &Circuit) -> Vec<isize> {
        let (_, u) = timestep_unitaries::<f64>(c, 14, 14).unwrap().next().unwrap();
        u.indices()
    }

    #[test]
    fn hadamard_patterns() {
        assert_eq!(indices(&single(GateKind::H, 0, 4)), vec![-8, 0, 8]);
        assert_eq!(indices(&single(GateKind::H, 3, 4)), vec![-1, 0, 1]);
        let (_, u) = timestep_unitaries::<f64>(&single(GateKind::H, 3, 4), 14, 14).unwrap().next().unwrap();
        // I_8 ⊗ H leaves every other off-diagonal slot empty.
        let d = u.diagonal(1).unwrap();
        let nz: Vec<bool> = d.values().map(|v| v.norm() > 0.0).collect();
        assert!(nz.iter().step_by(2).all(|&b| b) && nz.iter().skip(1).step_by(2).all(|&b| !b));
    }

    #[test]
    fn z_is_diagonal() {
        for q in 0..4 {
            assert_eq!(indices(&single(GateKind::Z, q, 4)), vec![0]);
        }
    }

    #[test]
    fn guard_trips() {
        let c = Circuit::new(15);
        assert!(matches!(timestep_unitaries::<f64>(&c, 14, 14).map(|_| ()), Err(Error::Resource(_))));
        assert!(matches!(chain_product_analysis(&c, 1e-15), Err(Error::Resource(_))));
    }

    #[test]
    fn identity_circuit_sparsity() {
        let mut c = Circuit::new(4);
        for _ in 0..3 {
            c.push(GateOp::new(GateKind::Id, &[1], &[])).unwrap();
        }
        let recs = chain_product_analysis(&c, 1e-15).unwrap();
        assert_eq!(recs.len(), 3);
        for r in &recs {
            assert_eq!(r.sparsity, 1.0 - 16.0 / 256.0);
            assert_eq!(r.bytes(StorageFormat::Dense), 4096);
            assert_eq!(r.bytes(StorageFormat::Diaq), 280);
        }
    }

    #[test]
    fn ghz10_stays_sparse() {
        let recs = chain_product_analysis(&ghz(10).unwrap(), 1e-15).unwrap();
        assert_eq!(recs.len(), 10);
        assert!(recs.iter().all(|r| r.sparsity >= 0.998));
    }

    #[test]
    fn chain_matches_dense_oracle() {
        let c = qft(5).unwrap();
        let recs = chain_product_analysis(&c, 1e-15).unwrap();
        let mut p = DenseMatrix::<f64>::identity(32);
        for ((_, u), r) in timestep_unitaries::<f64>(&c, 14, 14).unwrap().zip(&recs) {
            p = u.to_dense().matmul(&p).unwrap();
            assert!(p.nnz(1e-15).abs_diff(r.nnz) <= 1);
        }
        assert!(recs.last().unwrap().sparsity < 0.5);
    }

    #[test]
    fn orders_agree_at_the_end_for_commuting_gates() {
        let mut c = Circuit::new(3);
        c.push(GateOp::new(GateKind::Z, &[0], &[])).unwrap();
        c.push(GateOp::new(GateKind::S, &[2], &[])).unwrap();
        let opts = AnalysisOptions { order: ChainOrder::Right, ..AnalysisOptions::default() };
        let right = chain_product_analysis_with::<f64>(&c, &opts).unwrap();
        let left = chain_product_analysis(&c, 1e-15).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn csv_layout() {
        assert_eq!(emit_analysis_csv(&[]), format!("{CSV_HEADER}\n"));
        let r = AnalysisRecord::of(1, "id", &DiaqMatrix::<f64>::identity(16), 1e-15);
        let csv = emit_analysis_csv(&[r.clone()]);
        let row = csv.lines().nth(1).unwrap();
        assert_eq!(row, "1,id,0.937500000000,1,16,4096,280,520,512,648");
        let both = emit_analysis_csv_sections(&[("timestep", &[r.clone()]), ("chain", &[r])]);
        assert!(both.starts_with("mode,timestep,gate"));
        assert!(both.lines().nth(2).unwrap().starts_with("chain,1,id,"));
    }

    #[test]
    fn json_mirror() {
        let r = AnalysisRecord::of(1, "h", &DiaqMatrix::<f64>::identity(2), 0.0);
        let v = emit_analysis_json(&[("chain", &[r])]);
        assert_eq!(v["chain"][0]["gate"], "h");
        assert_eq!(v["chain"][0]["memory"][0]["format"], "dense");
    }
}
