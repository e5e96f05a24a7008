//! Worker-count sweeps: measured steps against predicted steps.
//!
//! Each sweep row runs the parallel engine at one worker count and sets the
//! measured step count against the closed-form prediction; their difference
//! is the headline column and is expected to be zero everywhere. Wall time
//! rides along for context only. The step model deliberately ignores
//! synchronization and indexing overhead, so on a real machine wall-clock
//! speedup routinely falls short of step-count speedup and no test asserts
//! otherwise.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engines::parallel_wavefront;
use crate::perf::{self, PerfError};
use crate::report::ReportFormat;
use crate::time::TimeValue;
use crate::workload::Workload;

/// Wall-time measurement policy. The defaults (one warm-up run, median of
/// five measured runs) suit desk-scale workloads; step counts are identical
/// across runs, so tests on large grids can drop to a single run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub warmup_runs: usize,
    pub measured_runs: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            warmup_runs: 1,
            measured_runs: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub p: usize,
    pub steps_measured: u64,
    pub steps_predicted: u64,
    pub delta: i64,
    pub speedup_steps: f64,
    pub wall_ns: u128,
    pub speedup_wall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub servers: usize,
    pub customers: usize,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("sweep needs at least one worker count")]
    EmptySweep,
    #[error("worker count at position {index} must be >= 1")]
    ZeroWorkers { index: usize },
    #[error(transparent)]
    Model(#[from] PerfError),
}

/// The sweep covering both regimes of the step model: P = 1 (serial count)
/// through min(M+1, N) + 1 (one past the plateau boundary).
pub fn default_sweep(m: usize, n: usize) -> Vec<usize> {
    (1..=(m + 1).min(n) + 1).collect()
}

/// Runs the parallel engine once per measured run; identical step counts
/// across runs are a determinism invariant, so steps come from the first
/// measured run and the median of the run durations becomes `wall_ns`.
fn measure<T: TimeValue>(w: &Workload<T>, p: usize, opts: &BenchOptions) -> (u64, u128) {
    for _ in 0..opts.warmup_runs {
        parallel_wavefront(w, p);
    }
    let runs = opts.measured_runs.max(1);
    let mut steps = 0u64;
    let mut walls = Vec::with_capacity(runs);
    for run in 0..runs {
        let (_, instr) = parallel_wavefront(w, p);
        let measured = instr.parallel_steps.expect("parallel engine counts steps");
        if run == 0 {
            steps = measured;
        } else {
            debug_assert_eq!(steps, measured, "step counts must not vary across runs");
        }
        walls.push(instr.wall.as_nanos().max(1));
    }
    walls.sort_unstable();
    (steps, walls[walls.len() / 2])
}

/// Sweeps the given worker counts over one workload. Rows are ordered by P
/// with duplicates collapsed. Wall-clock speedup is relative to the P = 1
/// measurement, which is taken even when 1 is not in the sweep.
pub fn run_sweep<T: TimeValue>(
    w: &Workload<T>,
    p_values: &[usize],
    opts: &BenchOptions,
) -> Result<BenchTable, BenchError> {
    if p_values.is_empty() {
        return Err(BenchError::EmptySweep);
    }
    if let Some(index) = p_values.iter().position(|&p| p == 0) {
        return Err(BenchError::ZeroWorkers { index });
    }
    let mut sweep = p_values.to_vec();
    sweep.sort_unstable();
    sweep.dedup();

    let (m, n) = (w.num_servers(), w.num_customers());
    let measurements: Vec<(usize, u64, u128)> = sweep
        .iter()
        .map(|&p| {
            let (steps, wall) = measure(w, p, opts);
            (p, steps, wall)
        })
        .collect();
    let baseline_wall = match measurements.iter().find(|(p, _, _)| *p == 1) {
        Some(&(_, _, wall)) => wall,
        None => measure(w, 1, opts).1,
    };

    let rows = measurements
        .into_iter()
        .map(|(p, steps_measured, wall_ns)| {
            let predicted = perf::exact_parallel_time(m as u64, n as u64, p as u64)?;
            let steps_predicted = predicted
                .to_u64()
                .expect("step counts of runnable workloads fit u64");
            Ok(BenchRow {
                p,
                steps_measured,
                steps_predicted,
                delta: steps_measured as i64 - steps_predicted as i64,
                speedup_steps: perf::speedup(m as u64, n as u64, p as u64)?,
                wall_ns,
                speedup_wall: baseline_wall as f64 / wall_ns as f64,
            })
        })
        .collect::<Result<_, BenchError>>()?;
    Ok(BenchTable {
        servers: m,
        customers: n,
        rows,
    })
}

/// Stable column order: P, steps_measured, steps_predicted, delta,
/// speedup_steps, wall_ns, speedup_wall. JSON mirrors the same fields.
pub fn emit_report(table: &BenchTable, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = format!(
                "# tandem-bench M={} N={}\n\
                 P,steps_measured,steps_predicted,delta,speedup_steps,wall_ns,speedup_wall\n",
                table.servers, table.customers
            );
            for r in &table.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.p,
                    r.steps_measured,
                    r.steps_predicted,
                    r.delta,
                    r.speedup_steps,
                    r.wall_ns,
                    r.speedup_wall
                ));
            }
            out
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(table).expect("table serializes");
            s.push('\n');
            s
        }
    }
}
