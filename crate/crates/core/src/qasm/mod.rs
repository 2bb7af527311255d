//! OpenQASM 2.0 subset front end.
//!
//! Supported: the `OPENQASM 2.0;` header, `include "qelib1.inc";` (the
//! standard library is built in, nothing is read from disk), `qreg`/`creg`,
//! gate calls with register broadcasting, non-recursive `gate` definitions,
//! `barrier`, and trailing `measure`. `if`, `reset` and `opaque` are
//! rejected with [`Error::UnsupportedFeature`](crate::Error::UnsupportedFeature).

pub mod ast;
mod lexer;
mod lower;
mod parser;
mod qelib1;

pub use ast::Program;
pub use lower::lower;
pub use parser::parse;

use crate::error::Result;
use crate::gates::Circuit;

/// Parses and lowers in one step.
pub fn load(source: &str) -> Result<Circuit> {
    lower(&parse(source)?)
}
