use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("diagonal index {index} out of range for a {n_dim}x{n_dim} matrix")]
    DiagonalRange { index: isize, n_dim: usize },

    #[error("shape error: {0}")]
    Shape(String),

    /// Operand dimensions disagree in a product.
    #[error("not multiplyable: {left} vs {right}")]
    NotMultiplyable { left: usize, right: usize },

    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),

    #[error("invalid gate `{name}`: {reason}")]
    InvalidGate { name: String, reason: String },

    #[error(
        "gate `{gate}` spans {span} qubits, more than the span limit of {limit}; \
         raise --span-limit or reorder qubits so multi-qubit gates act on nearby wires"
    )]
    SpanOverflow {
        gate: String,
        span: usize,
        limit: usize,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("state is not normalized (norm^2 = {0})")]
    Normalization(f64),

    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("{line}:{col}: unsupported feature `{construct}`")]
    UnsupportedFeature {
        construct: String,
        line: usize,
        col: usize,
    },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
