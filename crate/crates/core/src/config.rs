use serde::{Deserialize, Serialize};

use crate::scalar::Precision;

pub const DEFAULT_ALIGNMENT: usize = 64;
pub const DEFAULT_SPAN_LIMIT: usize = 14;
pub const DEFAULT_MAX_QUBITS: usize = 30;
pub const DEFAULT_ANALYSIS_MAX_QUBITS: usize = 14;

/// Pruning threshold applied to result diagonals of a matrix product.
pub const MATMUL_PRUNE_EPS: f64 = 1e-15;

/// Library-wide knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub precision: Precision,
    /// Byte alignment of diagonal and state-vector buffers. Must be a power
    /// of two; values below the scalar's natural alignment are raised to it.
    pub alignment: usize,
    /// Widest contiguous qubit range a single gate may be materialized over.
    pub span_limit: usize,
    /// Largest state vector `init_state` will allocate.
    pub max_qubits: usize,
    /// Largest circuit the analysis module will materialize full unitaries for.
    pub analysis_max_qubits: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: Precision::Double,
            alignment: DEFAULT_ALIGNMENT,
            span_limit: DEFAULT_SPAN_LIMIT,
            max_qubits: DEFAULT_MAX_QUBITS,
            analysis_max_qubits: DEFAULT_ANALYSIS_MAX_QUBITS,
        }
    }
}
