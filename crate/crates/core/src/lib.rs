//! Simulation of tandem queueing lines with infinite buffers.
//!
//! A tandem line is a chain of M single-server FIFO stations; every customer
//! enters at station 1 and passes through all stations in order, never
//! blocked and never dropped. Given the interarrival times and per-station
//! service times as an (M+1) x N matrix (row 0 is the arrival process), the
//! departure epochs obey
//!
//! ```text
//! D[i][j] = max(D[i-1][j], D[i][j-1]) + tau[i][j],    D[i][0] = 0, D[-1][j] = 0
//! ```
//!
//! because customer j starts service at station i only once it has left
//! station i-1 and customer j-1 has left station i. Every cell depends only
//! on its north and west neighbors, so the cells of an anti-diagonal
//! (i + j constant) are mutually independent: sweeping diagonals in order is
//! both a correct serial schedule and a natural parallel one.
//!
//! The crate provides:
//!
//! - [`engines`]: three sweep engines over that recurrence: a full-table
//!   serial sweep, an in-place serial sweep (with a ring-buffer variant that
//!   keeps only min(M+1, N+1) slots), and a barrier-synchronized parallel
//!   wavefront. All produce bit-identical values.
//! - [`perf`]: the closed-form step model (diagonal widths, exact and
//!   asymptotic parallel step counts, and speedup) that the parallel
//!   engine's instrumentation is tested against.
//! - [`oracle`]: an independent event-driven simulator of the same system,
//!   used to validate the recurrence engines without sharing their code.
//! - [`metrics`]: per-customer waiting and sojourn times derived from a
//!   departure table.
//! - [`gen`] and [`io`]: seeded workload generation and the CSV file format.
//! - [`report`] and [`bench`]: serialization of run results and a sweep
//!   harness comparing measured step counts with the model.

pub mod bench;
pub mod engines;
pub mod gen;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod perf;
pub mod report;
pub mod table;
pub mod time;
pub mod workload;

pub use engines::{
    parallel_wavefront, serial_full, serial_inplace, serial_inplace_ring, EngineInstrumentation,
    EngineKind,
};
pub use table::DepartureTable;
pub use time::TimeValue;
pub use workload::{Workload, WorkloadError};
