//! Closed-form storage footprints of a matrix in several sparse formats.
//!
//! All formats share the complex value width (16 bytes in double
//! precision, 8 in single) and 8-byte indices. A DiaQ diagonal costs its
//! values plus an index and 16 bytes of map-entry overhead. BSR uses fixed
//! 2x2 blocks.

use serde::{Deserialize, Serialize};

use super::{magnitude, row_at, DiaqMatrix};
use crate::scalar::Scalar;

pub const INDEX_BYTES: usize = 8;
pub const DIAQ_ENTRY_OVERHEAD: usize = 16;
const BSR_BLOCK: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageFormat {
    Dense,
    Diaq,
    Csr,
    Csc,
    Coo,
    Bsr,
}

impl StorageFormat {
    pub const ALL: [StorageFormat; 6] = [
        StorageFormat::Dense,
        StorageFormat::Diaq,
        StorageFormat::Csr,
        StorageFormat::Csc,
        StorageFormat::Coo,
        StorageFormat::Bsr,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryEstimate {
    pub format: StorageFormat,
    pub bytes: u64,
}

impl<T: Scalar> DiaqMatrix<T> {
    /// Byte counts for every [`StorageFormat`], in `StorageFormat::ALL` order.
    pub fn memory_estimates(&self, eps: T) -> Vec<MemoryEstimate> {
        let cv = T::PRECISION.complex_bytes() as u64;
        let idx = INDEX_BYTES as u64;
        let n = self.n as u64;
        let nnz = self.nnz(eps) as u64;

        let stored: u64 = self.diags.values().map(|d| d.len() as u64).sum();
        let diaq = stored * cv + self.diags.len() as u64 * (idx + DIAQ_ENTRY_OVERHEAD as u64);
        let csr = nnz * cv + nnz * idx + (n + 1) * idx;
        let coo = nnz * (cv + 2 * idx);
        let nblocks = self.nonzero_blocks(eps) as u64;
        let block = BSR_BLOCK as u64;
        let bsr = nblocks * (block * block * cv) + nblocks * idx + (n / block + 1) * idx;

        StorageFormat::ALL
            .iter()
            .map(|&format| MemoryEstimate {
                format,
                bytes: match format {
                    StorageFormat::Dense => n * n * cv,
                    StorageFormat::Diaq => diaq,
                    StorageFormat::Csr | StorageFormat::Csc => csr,
                    StorageFormat::Coo => coo,
                    StorageFormat::Bsr => bsr,
                },
            })
            .collect()
    }

    /// Number of `2x2` blocks holding at least one entry above `eps`.
    fn nonzero_blocks(&self, eps: T) -> usize {
        let nb = self.n.div_ceil(BSR_BLOCK) as u64;
        let mut blocks: Vec<u64> = Vec::new();
        for diag in self.diags.values() {
            let d = diag.index();
            for (k, (&re, &im)) in diag.re().iter().zip(diag.im()).enumerate() {
                if magnitude(re, im) > eps {
                    let r = row_at(k, d);
                    let c = (r as isize + d) as usize;
                    blocks.push((r / BSR_BLOCK) as u64 * nb + (c / BSR_BLOCK) as u64);
                }
            }
        }
        blocks.sort_unstable();
        blocks.dedup();
        blocks.len()
    }
}

/// Looks up one format's byte count.
pub fn bytes_for(estimates: &[MemoryEstimate], format: StorageFormat) -> u64 {
    estimates
        .iter()
        .find(|e| e.format == format)
        .map(|e| e.bytes)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_16_double() {
        let est = DiaqMatrix::<f64>::identity(16).memory_estimates(0.0);
        assert_eq!(bytes_for(&est, StorageFormat::Dense), 4096);
        assert_eq!(bytes_for(&est, StorageFormat::Diaq), 280);
        // 16 values, 16 column indices, 17 row pointers
        assert_eq!(bytes_for(&est, StorageFormat::Csr), 16 * 16 + 16 * 8 + 17 * 8);
        assert_eq!(bytes_for(&est, StorageFormat::Coo), 16 * 32);
        // 8 diagonal blocks of 4 values each
        assert_eq!(bytes_for(&est, StorageFormat::Bsr), 8 * 64 + 8 * 8 + 9 * 8);
    }

    #[test]
    fn identity_16_single() {
        let est = DiaqMatrix::<f32>::identity(16).memory_estimates(0.0);
        assert_eq!(bytes_for(&est, StorageFormat::Dense), 2048);
        assert_eq!(bytes_for(&est, StorageFormat::Diaq), 16 * 8 + 24);
    }

    #[test]
    fn zero_matrix_diaq_is_empty() {
        let est = DiaqMatrix::<f64>::zeros(8).memory_estimates(0.0);
        assert_eq!(bytes_for(&est, StorageFormat::Diaq), 0);
        assert_eq!(bytes_for(&est, StorageFormat::Coo), 0);
    }
}
