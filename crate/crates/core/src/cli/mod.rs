//! The `diaq` command-line front end.
//!
//! Exit codes are stable:
//!
//! | code | meaning                                          |
//! |------|--------------------------------------------------|
//! | 0    | success                                          |
//! | 1    | other failure (I/O, numerical)                   |
//! | 2    | QASM parse error                                 |
//! | 3    | unsupported QASM feature or gate                 |
//! | 4    | resource guard (qubit limit, span limit)         |
//! | 64   | bad command-line usage                           |

mod analyze;
mod bench;
mod gen;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use bench::{bench_rows, emit_bench_csv, BenchArgs, BenchRow, BENCH_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Maps a library error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::InvalidGate { .. } => EXIT_PARSE,
        Error::UnsupportedFeature { .. } | Error::UnsupportedGate(_) => EXIT_UNSUPPORTED,
        Error::Resource(_) | Error::SpanOverflow { .. } => EXIT_RESOURCE,
        _ => EXIT_OTHER,
    }
}

/// Short machine-readable class name used in bench status columns.
pub fn error_class(err: &Error) -> &'static str {
    match exit_code(err) {
        EXIT_PARSE => "parse_error",
        EXIT_UNSUPPORTED => "unsupported",
        EXIT_RESOURCE => "resource",
        _ => "error",
    }
}

#[derive(Debug, Parser)]
#[command(name = "diaq", version, about = "DiaQ sparse state-vector simulator")]
pub struct Cli {
    /// Worker threads for kernel parallelism (default: all cores).
    #[arg(long, global = true, env = "DIAQ_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one circuit and print counts (and optionally the state).
    Run(run::RunArgs),
    /// Time circuits on several backends with repetitions.
    Bench(bench::BenchArgs),
    /// Per-timestep and chain-product sparsity/memory analysis.
    Analyze(analyze::AnalyzeArgs),
    /// Print a generated benchmark circuit as QASM.
    Gen(gen::GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    pub fn enabled(self) -> bool {
        self == Switch::On
    }
}

/// Entry point used by the binary: parses `std::env::args` and returns the
/// exit code.
pub fn main() -> i32 {
    run_cli(std::env::args_os())
}

pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => {
                eprintln!("error: cannot start thread pool: {e}");
                EXIT_OTHER
            }
        },
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> i32 {
    match command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
        Command::Analyze(args) => analyze::cmd_analyze(&args),
        Command::Gen(args) => gen::cmd_gen(&args),
    }
}

/// Prints `err` to stderr, prefixing located errors with the file name, and
/// returns its exit code.
fn report(file: Option<&Path>, err: &Error) -> i32 {
    match (file, err) {
        (Some(f), Error::Parse { .. } | Error::UnsupportedFeature { .. }) => {
            eprintln!("error: {}:{err}", f.display())
        }
        (Some(f), _) => eprintln!("error: {}: {err}", f.display()),
        (None, _) => eprintln!("error: {err}"),
    }
    exit_code(err)
}

fn read_circuit(path: &Path) -> crate::Result<crate::Circuit> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read: {e}")))?;
    crate::qasm::load(&src)
}

fn circuit_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Writes to `path`, or stdout when it is `None` or `-`.
fn write_output(path: Option<&PathBuf>, text: &str) -> crate::Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
