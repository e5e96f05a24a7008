//! The sweep engines: serial full-table, serial in-place, and the two-phase
//! parallel wavefront. All of them evaluate the same recurrence
//! `D_ij = max(D_{i-1,j}, D_{i,j-1}) + tau_ij` in anti-diagonal order and
//! produce identical values; they differ in what they keep in memory and in
//! who does the work.

mod parallel;
mod serial;

pub use parallel::parallel_wavefront;
pub use serial::{serial_full, serial_inplace, serial_inplace_ring};

use std::fmt;
use std::time::Duration;

/// Which engine produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    SerialFull,
    SerialInplace,
    SerialInplaceRing,
    ParallelWavefront,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::SerialFull => "serial",
            EngineKind::SerialInplace => "inplace",
            EngineKind::SerialInplaceRing => "inplace-ring",
            EngineKind::ParallelWavefront => "parallel",
        })
    }
}

/// Counters every engine reports alongside its output.
///
/// `scalar_ops` counts one per maximization and one per addition, which makes
/// it 2(M+1)N for every engine regardless of worker count. `parallel_steps`
/// counts barrier-delimited rounds in which up to P workers each perform one
/// unit operation; only the parallel engine reports it. `peak_working_slots`
/// is the high-water mark of buffer slots an in-place engine ever touched.
/// Wall time is informational only: the step counters are the model-facing
/// quantities, and they deliberately ignore indexing and synchronization
/// cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineInstrumentation {
    pub engine: EngineKind,
    pub workers: usize,
    pub scalar_ops: u64,
    pub parallel_steps: Option<u64>,
    pub peak_working_slots: Option<usize>,
    pub wall: Duration,
}

/// Column range of diagonal `k`: cells (k-j, j) for j in the returned range.
/// Iterating j ascending visits rows in descending order, which is the order
/// the in-place update relies on.
#[inline]
pub(crate) fn diagonal_columns(m: usize, n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    k.saturating_sub(m).max(1)..=k.min(n)
}
