use std::fmt::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use super::{circuit_name, error_class, read_circuit, report, write_output, Switch, EXIT_OK, EXIT_USAGE};
use crate::config::{DEFAULT_MAX_QUBITS, DEFAULT_SPAN_LIMIT};
use crate::sim::{run, Backend, RunOptions};

pub const BENCH_HEADER: &str = "row,circuit,n_qubits,backend,fusion,rep,shots,status,\
compile_ns,fuse_ns,apply_ns,sample_ns,total_ns,mean_ns,std_ns,speedup,message";

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Comma-separated backend list.
    #[arg(long, value_delimiter = ',', default_value = "dense,diaq")]
    pub backends: Vec<Backend>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
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
    /// Output CSV path; `-` for stdout.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
}

/// Timings of one repetition, or the mean/deviation summary of all
/// successful repetitions of a (circuit, backend) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub summary: bool,
    pub circuit: String,
    pub n_qubits: Option<usize>,
    pub backend: Backend,
    pub fusion: bool,
    /// 1-based; `None` on summary rows.
    pub rep: Option<usize>,
    pub shots: u64,
    /// `ok`, or the error class of a failed run.
    pub status: String,
    pub compile_ns: Option<u64>,
    pub fuse_ns: Option<u64>,
    pub apply_ns: Option<u64>,
    pub sample_ns: Option<u64>,
    pub total_ns: Option<u64>,
    pub mean_ns: Option<f64>,
    pub std_ns: Option<f64>,
    /// Mean dense total over mean diaq total, on summary rows.
    pub speedup: Option<f64>,
    pub message: String,
}

impl BenchRow {
    fn blank(circuit: &str, backend: Backend, args: &BenchArgs) -> Self {
        BenchRow {
            summary: false,
            circuit: circuit.to_string(),
            n_qubits: None,
            backend,
            fusion: args.fusion.enabled(),
            rep: None,
            shots: args.shots,
            status: "ok".into(),
            compile_ns: None,
            fuse_ns: None,
            apply_ns: None,
            sample_ns: None,
            total_ns: None,
            mean_ns: None,
            std_ns: None,
            speedup: None,
            message: String::new(),
        }
    }

    fn csv(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        fn fixed(v: Option<f64>, places: usize) -> String {
            v.map(|v| format!("{v:.places$}")).unwrap_or_default()
        }
        let message = if self.message.contains([',', '"', '\n']) {
            format!("\"{}\"", self.message.replace('"', "\"\""))
        } else {
            self.message.clone()
        };
        [
            if self.summary { "summary" } else { "detail" }.to_string(),
            self.circuit.clone(),
            opt(self.n_qubits),
            self.backend.name().to_string(),
            if self.fusion { "on" } else { "off" }.to_string(),
            opt(self.rep),
            self.shots.to_string(),
            self.status.clone(),
            opt(self.compile_ns),
            opt(self.fuse_ns),
            opt(self.apply_ns),
            opt(self.sample_ns),
            opt(self.total_ns),
            fixed(self.mean_ns, 1),
            fixed(self.std_ns, 1),
            fixed(self.speedup, 4),
            message,
        ]
        .join(",")
    }
}

/// Mean and sample standard deviation (zero for a single value).
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every circuit on every backend `reps` times, sequentially. Failures
/// become rows rather than aborting the sweep.
pub fn bench_rows(args: &BenchArgs) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for file in &args.files {
        let name = circuit_name(file);
        let circuit = match read_circuit(file) {
            Ok(c) => c,
            Err(e) => {
                for &b in &args.backends {
                    rows.push(BenchRow {
                        status: error_class(&e).into(),
                        message: e.to_string(),
                        ..BenchRow::blank(&name, b, args)
                    });
                }
                continue;
            }
        };
        let opts = RunOptions {
            shots: args.shots,
            seed: args.seed,
            fusion: args.fusion.enabled(),
            span_limit: args.span_limit,
            max_qubits: args.max_qubits,
            emit_state: false,
            ..RunOptions::default()
        };
        let mut summaries = Vec::new();
        for &backend in &args.backends {
            let mut totals = Vec::new();
            for rep in 1..=args.reps {
                let base = BenchRow {
                    n_qubits: Some(circuit.n_qubits),
                    rep: Some(rep),
                    ..BenchRow::blank(&name, backend, args)
                };
                match run::<f64>(&circuit, &RunOptions { backend, ..opts.clone() }) {
                    Ok(res) => {
                        let t = &res.timings;
                        totals.push(t.total() as f64);
                        rows.push(BenchRow {
                            compile_ns: Some(t.compile),
                            fuse_ns: Some(t.fuse),
                            apply_ns: Some(t.apply_total),
                            sample_ns: Some(t.sample),
                            total_ns: Some(t.total()),
                            ..base
                        });
                    }
                    Err(e) => {
                        rows.push(BenchRow { status: error_class(&e).into(), message: e.to_string(), ..base });
                        break;
                    }
                }
            }
            if !totals.is_empty() {
                let (mean, std) = mean_std(&totals);
                summaries.push(BenchRow {
                    summary: true,
                    n_qubits: Some(circuit.n_qubits),
                    mean_ns: Some(mean),
                    std_ns: Some(std),
                    ..BenchRow::blank(&name, backend, args)
                });
            }
        }
        let mean_of = |b: Backend| summaries.iter().find(|r| r.backend == b).and_then(|r| r.mean_ns);
        let speedup = match (mean_of(Backend::Dense), mean_of(Backend::Diaq)) {
            (Some(d), Some(q)) if q > 0.0 => Some(d / q),
            _ => None,
        };
        for s in &mut summaries {
            s.speedup = speedup;
        }
        rows.extend(summaries);
    }
    rows
}

pub fn emit_bench_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{BENCH_HEADER}\n");
    for r in rows {
        writeln!(out, "{}", r.csv()).unwrap();
    }
    out
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    if args.reps == 0 || args.backends.is_empty() {
        eprintln!("error: --reps and --backends must be non-empty");
        return EXIT_USAGE;
    }
    let rows = bench_rows(args);
    for r in rows.iter().filter(|r| r.status != "ok") {
        eprintln!("warning: {} on {}: {}", r.circuit, r.backend.name(), r.message);
    }
    match write_output(Some(&args.out), &emit_bench_csv(&rows)) {
        Ok(()) => EXIT_OK,
        Err(e) => report(None, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_deviation() {
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn message_quoting() {
        let args = BenchArgs {
            files: vec![],
            backends: vec![Backend::Diaq],
            reps: 1,
            shots: 0,
            seed: 0,
            fusion: Switch::Off,
            span_limit: 14,
            max_qubits: 30,
            out: "-".into(),
        };
        let row = BenchRow { message: "a, \"b\"".into(), ..BenchRow::blank("c", Backend::Diaq, &args) };
        assert!(row.csv().ends_with(",\"a, \"\"b\"\"\""));
        assert_eq!(row.csv().split(',').count(), BENCH_HEADER.split(',').count() + 1);
    }
}
