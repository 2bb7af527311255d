//! Diagonal-major sparse matrices for quantum circuit simulation.
//!
//! A [`DiaqMatrix`] stores a square complex matrix as an ordered map from
//! diagonal index (`column - row`) to the full diagonal, with separate real
//! and imaginary planes. Gate unitaries and the timestep operators
//! `I ⊗ G ⊗ I` built from them are banded and have very few diagonals, so
//! products, matrix-vector products and fused gate application all run in
//! time proportional to `diagonals × N`.
//!
//! The crate is split into:
//!
//! - [`diaq`]: the matrix container and its kernels (products, transpose,
//!   Kronecker products, conversion, memory accounting).
//! - [`gates`]: the gate catalog, compilation of circuits into
//!   [`Placement`]s and optional gate fusion.
//! - [`sim`]: state vectors, the dense and DiaQ backends, and sampling.
//! - [`qasm`]: an OpenQASM 2.0 subset parser and lowerer.
//! - [`analysis`]: per-timestep and chain-product sparsity studies.
//! - [`cli`]: the `diaq` command-line front end.

pub mod aligned;
pub mod analysis;
pub mod circuits;
pub mod cli;
pub mod config;
pub mod dense;
pub mod diaq;
pub mod error;
pub mod gates;
pub mod qasm;
pub mod scalar;
pub mod sim;

mod par;

pub use crate::config::Config;
pub use crate::dense::DenseMatrix;
pub use crate::diaq::{diag_len, Diagonal, DiaqMatrix, MemoryEstimate, StorageFormat};
pub use crate::error::{Error, Result};
pub use crate::gates::{Circuit, GateKind, GateOp, Placement};
pub use crate::scalar::{Precision, Scalar};
pub use crate::sim::{Backend, RunOptions, RunResult, StateVector};

pub use num_complex::Complex;
