//! The two-phase parallel wavefront sweep.

use std::cell::UnsafeCell;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Barrier;
use std::thread;
use std::time::Instant;

use crate::engines::{diagonal_columns, EngineInstrumentation, EngineKind};
use crate::table::DepartureTable;
use crate::time::TimeValue;
use crate::workload::Workload;

/// Cell array writable from multiple workers.
///
/// Soundness is scheduling discipline, not types: within one phase no two
/// workers touch the same index, and phases are separated by barriers, so
/// every read of a cell happens after the barrier following its write.
struct SharedCells<T>(Vec<UnsafeCell<T>>);

unsafe impl<T: Send> Sync for SharedCells<T> {}

impl<T: TimeValue> SharedCells<T> {
    fn zeroed(len: usize) -> Self {
        SharedCells((0..len).map(|_| UnsafeCell::new(T::ZERO)).collect())
    }

    /// Caller guarantees no worker writes `idx` during the current phase.
    #[inline]
    unsafe fn get(&self, idx: usize) -> T {
        unsafe { *self.0[idx].get() }
    }

    /// Caller guarantees `idx` belongs to the calling worker this phase.
    #[inline]
    unsafe fn set(&self, idx: usize, value: T) {
        unsafe { *self.0[idx].get() = value }
    }

    fn into_values(self) -> Vec<T> {
        self.0.into_iter().map(UnsafeCell::into_inner).collect()
    }
}

/// Wavefront sweep with `workers` cooperating workers.
///
/// Diagonals are processed in order. On diagonal k the cells are numbered
/// c = 0..l_k in ascending column order and dealt in contiguous rounds of
/// `workers` cells, worker w taking cell c when c mod workers = w. Each
/// diagonal runs two barrier-terminated phases: first every initiation epoch
/// `B = max(north, west)` is written to a scratch buffer, then every
/// departure `D = B + tau` is written to the output table. The produced
/// table is bit-identical to `serial_full`'s: every cell is computed from
/// the same two operands by the same two operations, whichever worker
/// evaluates it.
///
/// `scalar_ops` sums each worker's unit operations and is 2(M+1)N regardless
/// of `workers`. `parallel_steps` sums, over every phase, the largest number
/// of rounds any worker executed in that phase.
///
/// Workers beyond the widest diagonal (min(M+1, N) cells) never receive a
/// cell; they are reported in the instrumentation but not spawned.
pub fn parallel_wavefront<T: TimeValue>(
    w: &Workload<T>,
    workers: usize,
) -> (DepartureTable<T>, EngineInstrumentation) {
    assert!(workers >= 1, "workers must be >= 1");
    let start = Instant::now();
    let (m, n) = (w.num_servers(), w.num_customers());
    let l1 = (m + 1).min(n);
    let active = workers.min(l1);

    let d = SharedCells::zeroed((m + 1) * (n + 1));
    let b = SharedCells::zeroed(l1);
    let barrier = Barrier::new(active);
    // one counter per phase, two phases per diagonal; workers publish their
    // executed round counts and the maximum is the phase's step count
    let phase_steps: Vec<AtomicU64> = (0..2 * (m + n)).map(|_| AtomicU64::new(0)).collect();
    let mut worker_ops = vec![0u64; active];

    thread::scope(|s| {
        let handles: Vec<_> = (0..active)
            .map(|wid| {
                let (d, b, barrier, phase_steps) = (&d, &b, &barrier, &phase_steps);
                s.spawn(move || worker_loop(w, workers, wid, d, b, barrier, phase_steps))
            })
            .collect();
        for (wid, h) in handles.into_iter().enumerate() {
            worker_ops[wid] = h.join().expect("wavefront worker panicked");
        }
    });

    let instr = EngineInstrumentation {
        engine: EngineKind::ParallelWavefront,
        workers,
        scalar_ops: worker_ops.iter().sum(),
        parallel_steps: Some(phase_steps.iter().map(|s| s.load(Ordering::Relaxed)).sum()),
        peak_working_slots: None,
        wall: start.elapsed(),
    };
    (DepartureTable::from_raw(m, n, d.into_values()), instr)
}

fn worker_loop<T: TimeValue>(
    w: &Workload<T>,
    stride: usize,
    wid: usize,
    d: &SharedCells<T>,
    b: &SharedCells<T>,
    barrier: &Barrier,
    phase_steps: &[AtomicU64],
) -> u64 {
    let (m, n) = (w.num_servers(), w.num_customers());
    let cols = n + 1;
    let mut ops = 0u64;
    for k in 1..=m + n {
        let range = diagonal_columns(m, n, k);
        let (j_lo, j_hi) = (*range.start(), *range.end());
        let len = j_hi - j_lo + 1;

        let mut rounds = 0u64;
        let mut c = wid;
        while c < len {
            let j = j_lo + c;
            let i = k - j;
            // both operands sit on diagonal k-1, completed before the
            // barrier that closed its departure phase
            let north = if i == 0 {
                T::ZERO
            } else {
                unsafe { d.get((i - 1) * cols + j) }
            };
            let west = unsafe { d.get(i * cols + j - 1) };
            unsafe { b.set(c, north.max_with(west)) };
            ops += 1;
            rounds += 1;
            c += stride;
        }
        phase_steps[2 * (k - 1)].fetch_max(rounds, Ordering::Relaxed);
        barrier.wait();

        let mut rounds = 0u64;
        let mut c = wid;
        while c < len {
            let j = j_lo + c;
            let i = k - j;
            let value = unsafe { b.get(c) } + w.tau(i, j);
            unsafe { d.set(i * cols + j, value) };
            ops += 1;
            rounds += 1;
            c += stride;
        }
        phase_steps[2 * (k - 1) + 1].fetch_max(rounds, Ordering::Relaxed);
        barrier.wait();
    }
    ops
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::serial_full;

    #[test]
    fn unit_times_match_serial_for_every_worker_count() {
        let w = Workload::constant(2, 5, 1u64).unwrap();
        let (reference, _) = serial_full(&w);
        for p in 1..=6 {
            let (table, instr) = parallel_wavefront(&w, p);
            assert!(table.exact_eq(&reference), "P = {p}");
            assert_eq!(instr.scalar_ops, 30, "P = {p}");
            assert_eq!(instr.workers, p);
        }
    }

    #[test]
    fn step_counts_follow_the_width_schedule() {
        let w = Workload::constant(2, 5, 1u64).unwrap();
        let expected = [(1, 30), (2, 20), (3, 14), (4, 14)];
        for (p, steps) in expected {
            let (_, instr) = parallel_wavefront(&w, p);
            assert_eq!(instr.parallel_steps, Some(steps), "P = {p}");
        }
    }

    #[test]
    fn float_tables_are_bit_identical_across_worker_counts() {
        let w = Workload::from_fn(3, 7, |i, j| 0.1 * ((i * 13 + j * 7) % 10) as f64 + 0.01)
            .unwrap();
        let (reference, _) = serial_full(&w);
        for p in 1..=5 {
            let (table, _) = parallel_wavefront(&w, p);
            assert!(table.exact_eq(&reference), "P = {p}");
        }
    }

    #[test]
    #[should_panic(expected = "workers must be >= 1")]
    fn zero_workers_panic() {
        let w = Workload::constant(1, 1, 1u64).unwrap();
        parallel_wavefront(&w, 0);
    }
}
