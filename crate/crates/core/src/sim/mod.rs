//! State-vector simulation with a dense reference backend and the DiaQ
//! backend.

mod apply;
mod sample;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::aligned::AlignedVec;
use crate::config::{DEFAULT_MAX_QUBITS, DEFAULT_SPAN_LIMIT};
use crate::error::{Error, Result};
use crate::gates::{compile, fuse_pass, Circuit, Placement};
use crate::scalar::Scalar;

pub use apply::{apply_dense, apply_placed};
pub use sample::{bitstring, measure_all_sample, Sampler, NORMALIZATION_TOLERANCE, PROBABILITY_QUANTUM};

/// `2^n` amplitudes in planar (real / imaginary) layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar = f64> {
    n_qubits: usize,
    re: AlignedVec<T>,
    im: AlignedVec<T>,
}

impl<T: Scalar> StateVector<T> {
    /// `|0...0>` with the default 30-qubit cap.
    pub fn new(n_qubits: usize) -> Result<Self> {
        init_state(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub(crate) fn zeroed(n_qubits: usize) -> Self {
        let len = 1usize << n_qubits;
        StateVector {
            n_qubits,
            re: AlignedVec::zeroed(len),
            im: AlignedVec::zeroed(len),
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        if index >= s.len() {
            return Err(Error::Shape(format!("basis index {index} out of range")));
        }
        s.re[0] = T::zero();
        s.re[index] = T::one();
        Ok(s)
    }

    /// Wraps explicit amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: &[Complex<T>]) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "state length {} is not a power of two",
                amps.len()
            )));
        }
        let mut s = Self::zeroed(amps.len().trailing_zeros() as usize);
        for (i, a) in amps.iter().enumerate() {
            s.re[i] = a.re;
            s.im[i] = a.im;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[T] {
        &self.re
    }

    pub fn im(&self) -> &[T] {
        &self.im
    }

    pub(crate) fn planes_mut(&mut self) -> (&mut [T], &mut [T]) {
        (&mut self.re, &mut self.im)
    }

    pub fn amplitude(&self, i: usize) -> Complex<T> {
        Complex::new(self.re[i], self.im[i])
    }

    pub fn amplitudes(&self) -> Vec<Complex<T>> {
        self.re
            .iter()
            .zip(self.im.iter())
            .map(|(&r, &i)| Complex::new(r, i))
            .collect()
    }

    /// Squared 2-norm, accumulated in double precision.
    pub fn norm_sqr(&self) -> f64 {
        self.re
            .iter()
            .zip(self.im.iter())
            .map(|(r, i)| {
                let (r, i) = (r.to_f64().unwrap_or(f64::NAN), i.to_f64().unwrap_or(f64::NAN));
                r * r + i * i
            })
            .sum()
    }
}

/// `|0...0>` on `n_qubits`, refusing registers above `max_qubits`.
pub fn init_state<T: Scalar>(n_qubits: usize, max_qubits: usize) -> Result<StateVector<T>> {
    if n_qubits == 0 {
        return Err(Error::Shape("a state needs at least one qubit".into()));
    }
    if n_qubits > max_qubits {
        return Err(Error::Resource(format!(
            "{n_qubits} qubits exceeds the cap of {max_qubits}"
        )));
    }
    let mut s = StateVector::zeroed(n_qubits);
    s.re[0] = T::one();
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dense,
    #[default]
    Diaq,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Dense => "dense",
            Backend::Diaq => "diaq",
        }
    }

    pub fn apply<T: Scalar>(self, p: &Placement<T>, x: &StateVector<T>) -> Result<StateVector<T>> {
        match self {
            Backend::Dense => apply_dense(p, x),
            Backend::Diaq => apply_placed(p, x),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dense" => Ok(Backend::Dense),
            "diaq" => Ok(Backend::Diaq),
            other => Err(format!("unknown backend `{other}` (expected dense or diaq)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub backend: Backend,
    pub shots: u64,
    pub seed: u64,
    pub fusion: bool,
    pub span_limit: usize,
    pub max_qubits: usize,
    pub emit_state: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            backend: Backend::Diaq,
            shots: 1024,
            seed: 0,
            fusion: false,
            span_limit: DEFAULT_SPAN_LIMIT,
            max_qubits: DEFAULT_MAX_QUBITS,
            emit_state: false,
        }
    }
}

/// Wall-clock time per phase, in nanoseconds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub compile: u64,
    pub fuse: u64,
    pub apply_total: u64,
    pub sample: u64,
    pub per_gate: Vec<u64>,
}

impl Timings {
    pub fn total(&self) -> u64 {
        self.compile + self.fuse + self.apply_total + self.sample
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T: Scalar = f64> {
    pub n_qubits: usize,
    pub backend: Backend,
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
    pub state: Option<Vec<Complex<T>>>,
    pub timings: Timings,
}

fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}

/// Compiles `circuit`, optionally fuses, and applies every placement.
pub fn final_state<T: Scalar>(circuit: &Circuit, backend: Backend, fusion: bool, span_limit: usize) -> Result<StateVector<T>> {
    let placements = fuse_pass(compile::<T>(circuit, span_limit)?, fusion);
    let mut state = StateVector::new(circuit.n_qubits)?;
    for p in &placements {
        state = backend.apply(p, &state)?;
    }
    Ok(state)
}

/// Full simulation: compile, fuse, apply, sample.
pub fn run<T: Scalar>(circuit: &Circuit, opts: &RunOptions) -> Result<RunResult<T>> {
    let mut timings = Timings::default();

    let start = Instant::now();
    let placements = compile::<T>(circuit, opts.span_limit)?;
    timings.compile = elapsed_ns(start);

    let start = Instant::now();
    let placements = fuse_pass(placements, opts.fusion);
    timings.fuse = elapsed_ns(start);

    let mut state = init_state::<T>(circuit.n_qubits, opts.max_qubits)?;
    let apply_start = Instant::now();
    timings.per_gate.reserve(placements.len());
    for p in &placements {
        let start = Instant::now();
        state = opts.backend.apply(p, &state)?;
        timings.per_gate.push(elapsed_ns(start));
    }
    timings.apply_total = elapsed_ns(apply_start);

    let start = Instant::now();
    let counts = measure_all_sample(&state, opts.shots, opts.seed)?;
    timings.sample = elapsed_ns(start);

    Ok(RunResult {
        n_qubits: circuit.n_qubits,
        backend: opts.backend,
        shots: opts.shots,
        seed: opts.seed,
        counts,
        state: opts.emit_state.then(|| state.amplitudes()),
        timings,
    })
}
