use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::{read_circuit, report, write_output, EXIT_OK};
use crate::analysis::{
    chain_product_analysis_with, emit_analysis_csv, emit_analysis_csv_sections, emit_analysis_json, timestep_analysis,
    AnalysisOptions, AnalysisRecord, ChainOrder,
};
use crate::config::{DEFAULT_ANALYSIS_MAX_QUBITS, DEFAULT_SPAN_LIMIT};
use crate::scalar::{Precision, Scalar};
use crate::{Circuit, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Each timestep unitary on its own.
    Timestep,
    /// The running product of timestep unitaries.
    Chain,
    /// Both, in one table with a leading `mode` column.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 1e-15)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "chain")]
    pub mode: Mode,
    /// Side new timesteps multiply the chain product from.
    #[arg(long, default_value = "left")]
    pub order: ChainOrder,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: AnalyzeFormat,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SPAN_LIMIT)]
    pub span_limit: usize,
    #[arg(long, default_value_t = DEFAULT_ANALYSIS_MAX_QUBITS)]
    pub max_qubits: usize,
    #[arg(long, default_value = "double")]
    pub precision: Precision,
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> i32 {
    let text = read_circuit(&args.file).and_then(|c| match args.precision {
        Precision::Double => render::<f64>(args, &c),
        Precision::Single => render::<f32>(args, &c),
    });
    match text.and_then(|t| write_output(args.out.as_ref(), &t)) {
        Ok(()) => EXIT_OK,
        Err(e) => report(Some(&args.file), &e),
    }
}

fn render<T: Scalar>(args: &AnalyzeArgs, circuit: &Circuit) -> Result<String> {
    let opts = AnalysisOptions {
        eps: args.eps,
        order: args.order,
        span_limit: args.span_limit,
        max_qubits: args.max_qubits,
    };
    let mut sections: Vec<(&str, Vec<AnalysisRecord>)> = Vec::new();
    if matches!(args.mode, Mode::Timestep | Mode::Both) {
        sections.push(("timestep", timestep_analysis::<T>(circuit, &opts)?));
    }
    if matches!(args.mode, Mode::Chain | Mode::Both) {
        sections.push(("chain", chain_product_analysis_with::<T>(circuit, &opts)?));
    }
    let borrowed: Vec<(&str, &[AnalysisRecord])> = sections.iter().map(|(m, r)| (*m, r.as_slice())).collect();
    Ok(match (args.format, args.mode) {
        (AnalyzeFormat::Json, _) => format!("{}\n", serde_json::to_string_pretty(&emit_analysis_json(&borrowed)).expect("json")),
        (AnalyzeFormat::Csv, Mode::Both) => emit_analysis_csv_sections(&borrowed),
        (AnalyzeFormat::Csv, _) => emit_analysis_csv(borrowed[0].1),
    })
}
