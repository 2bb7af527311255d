use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::{report, write_output, EXIT_OK, EXIT_USAGE};
use crate::circuits::{ghz_qasm, qft_qasm};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Ghz,
    Qft,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: Family,
    #[arg(long)]
    pub qubits: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_gen(args: &GenArgs) -> i32 {
    if args.qubits == 0 {
        eprintln!("error: --qubits must be at least 1");
        return EXIT_USAGE;
    }
    let text = match args.family {
        Family::Ghz => ghz_qasm(args.qubits),
        Family::Qft => qft_qasm(args.qubits),
    };
    match write_output(args.out.as_ref(), &text) {
        Ok(()) => EXIT_OK,
        Err(e) => report(None, &e),
    }
}
