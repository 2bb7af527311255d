//! Measurement sampling.
//!
//! Samples are drawn by inverse-CDF lookup over the cumulative probability
//! vector. Probabilities are first rounded to a multiple of `1e-12`, so
//! backends that agree to ~1e-13 produce identical counts for the same seed.
//!
//! The generator is xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`); a uniform double is
//! `(next_u64() >> 11) * 2^-53`.

use std::collections::BTreeMap;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const PROBABILITY_QUANTUM: f64 = 1e-12;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Deterministic uniform doubles in `[0, 1)`.
pub struct Sampler {
    rng: Xoshiro256PlusPlus,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Basis index as a bitstring, qubit 0 leftmost.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index >> (n_qubits - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` i.i.d. measurements of every qubit.
pub fn measure_all_sample<T: Scalar>(x: &StateVector<T>, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
    let norm = x.norm_sqr();
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(norm));
    }
    let mut counts = BTreeMap::new();
    if shots == 0 {
        return Ok(counts);
    }
    let mut cdf = Vec::with_capacity(x.len());
    let mut acc = 0.0f64;
    for (re, im) in x.re().iter().zip(x.im()) {
        let (re, im) = (re.to_f64().unwrap_or(0.0), im.to_f64().unwrap_or(0.0));
        let p = ((re * re + im * im) / PROBABILITY_QUANTUM).round() * PROBABILITY_QUANTUM;
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut hits: BTreeMap<usize, u64> = BTreeMap::new();
    let mut sampler = Sampler::new(seed);
    for _ in 0..shots {
        let u = sampler.next_f64() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *hits.entry(idx).or_default() += 1;
    }
    for (idx, n) in hits {
        counts.insert(bitstring(idx, x.n_qubits()), n);
    }
    Ok(counts)
}
