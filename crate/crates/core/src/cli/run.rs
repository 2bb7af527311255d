use std::fmt::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use super::{circuit_name, read_circuit, report, write_output, Switch, EXIT_OK};
use crate::config::{DEFAULT_MAX_QUBITS, DEFAULT_SPAN_LIMIT};
use crate::scalar::{Precision, Scalar};
use crate::sim::{run, Backend, RunOptions, RunResult};
use crate::{Circuit, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "diaq")]
    pub backend: Backend,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "off")]
    pub fusion: Switch,
    #[arg(long, default_value_t = DEFAULT_SPAN_LIMIT)]
    pub span_limit: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
    /// Include the final state vector in the JSON output.
    #[arg(long)]
    pub emit_state: bool,
    /// `json` prints the full record; `csv` prints `bitstring,count` rows.
    #[arg(long, value_enum, default_value = "json")]
    pub out: RunFormat,
    #[arg(long, default_value = "double")]
    pub precision: Precision,
}

pub fn cmd_run(args: &RunArgs) -> i32 {
    let result = read_circuit(&args.file).and_then(|c| execute(args, &c));
    match result.and_then(|text| write_output(None, &text)) {
        Ok(()) => EXIT_OK,
        Err(e) => report(Some(&args.file), &e),
    }
}

fn execute(args: &RunArgs, circuit: &Circuit) -> Result<String> {
    let opts = RunOptions {
        backend: args.backend,
        shots: args.shots,
        seed: args.seed,
        fusion: args.fusion.enabled(),
        span_limit: args.span_limit,
        max_qubits: args.max_qubits,
        emit_state: args.emit_state,
    };
    let name = circuit_name(&args.file);
    match args.precision {
        Precision::Double => format(args.out, &name, &run::<f64>(circuit, &opts)?),
        Precision::Single => format(args.out, &name, &run::<f32>(circuit, &opts)?),
    }
}

fn format<T: Scalar>(fmt: RunFormat, name: &str, res: &RunResult<T>) -> Result<String> {
    Ok(match fmt {
        RunFormat::Json => {
            let mut v = run_json(name, res);
            v.as_object_mut().unwrap().insert("precision".into(), json!(T::PRECISION));
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        RunFormat::Csv => {
            let mut s = String::from("bitstring,count\n");
            for (b, c) in &res.counts {
                writeln!(s, "{b},{c}").unwrap();
            }
            s
        }
    })
}

/// The `run` JSON record; see `docs/run-output.schema.json`.
pub fn run_json<T: Scalar>(name: &str, res: &RunResult<T>) -> Value {
    let t = &res.timings;
    let mut v = json!({
        "circuit": name,
        "n_qubits": res.n_qubits,
        "backend": res.backend.name(),
        "shots": res.shots,
        "seed": res.seed,
        "counts": res.counts,
        "timings_ns": {
            "compile": t.compile,
            "fuse": t.fuse,
            "apply": t.apply_total,
            "sample": t.sample,
            "total": t.total(),
            "per_gate": t.per_gate,
        },
    });
    if let Some(state) = &res.state {
        let amps: Vec<[f64; 2]> = state
            .iter()
            .map(|a| [a.re.to_f64().unwrap_or(f64::NAN), a.im.to_f64().unwrap_or(f64::NAN)])
            .collect();
        v.as_object_mut().unwrap().insert("state".into(), json!(amps));
    }
    v
}
