//! QASM generators for scaling sweeps.

use std::fmt::Write;

use crate::error::Result;
use crate::gates::Circuit;

const PRELUDE: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// GHZ preparation: `h q[0]` followed by a `cx` ladder.
pub fn ghz_qasm(n: usize) -> String {
    let mut s = format!("{PRELUDE}qreg q[{n}];\ncreg c[{n}];\nh q[0];\n");
    for i in 0..n.saturating_sub(1) {
        writeln!(s, "cx q[{i}],q[{}];", i + 1).unwrap();
    }
    s.push_str("measure q -> c;\n");
    s
}

/// Textbook QFT with qubit 0 as the most significant bit, including the
/// final bit-reversal swaps.
pub fn qft_qasm(n: usize) -> String {
    let mut s = format!("{PRELUDE}qreg q[{n}];\ncreg c[{n}];\n");
    for i in 0..n {
        writeln!(s, "h q[{i}];").unwrap();
        for j in i + 1..n {
            writeln!(s, "cu1(pi/{}) q[{j}],q[{i}];", 1u64 << (j - i)).unwrap();
        }
    }
    for i in 0..n / 2 {
        writeln!(s, "swap q[{i}],q[{}];", n - 1 - i).unwrap();
    }
    s.push_str("measure q -> c;\n");
    s
}

pub fn ghz(n: usize) -> Result<Circuit> {
    crate::qasm::load(&ghz_qasm(n))
}

pub fn qft(n: usize) -> Result<Circuit> {
    crate::qasm::load(&qft_qasm(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_gate_count() {
        let c = ghz(10).unwrap();
        assert_eq!(c.n_qubits, 10);
        assert_eq!(c.gate_count(), 10);
    }

    #[test]
    fn qft_shape() {
        let c = qft(4).unwrap();
        // 4 h, 6 cu1 (5 ops each), 2 swaps
        assert_eq!(c.gate_count(), 4 + 6 * 5 + 2);
        assert!(qft(1).is_ok());
    }
}
