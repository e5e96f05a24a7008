//! Single-threaded sweeps: the full-table sweep and two in-place variants.

use std::time::Instant;

use crate::engines::{diagonal_columns, EngineInstrumentation, EngineKind};
use crate::table::DepartureTable;
use crate::time::TimeValue;
use crate::workload::Workload;

/// Full-table sweep in anti-diagonal order.
///
/// Visits diagonals k = 1..=M+N, and within a diagonal the cells in ascending
/// column order, filling `D_ij = max(D_{i-1,j}, D_{i,j-1}) + tau_ij`. Any
/// topological order would produce the same table; the diagonal order is kept
/// because it is the schedule the step model and the parallel engine are
/// built on.
pub fn serial_full<T: TimeValue>(w: &Workload<T>) -> (DepartureTable<T>, EngineInstrumentation) {
    let start = Instant::now();
    let (m, n) = (w.num_servers(), w.num_customers());
    let mut table = DepartureTable::zeroed(m, n);
    let mut scalar_ops = 0u64;
    for k in 1..=m + n {
        for j in diagonal_columns(m, n, k) {
            let i = k - j;
            let north = if i == 0 {
                T::ZERO
            } else {
                table.departure(i - 1, j)
            };
            let b = north.max_with(table.departure(i, j - 1));
            table.set_departure(i, j, b + w.tau(i, j));
            scalar_ops += 2;
        }
    }
    let instr = EngineInstrumentation {
        engine: EngineKind::SerialFull,
        workers: 1,
        scalar_ops,
        parallel_steps: None,
        peak_working_slots: None,
        wall: start.elapsed(),
    };
    (table, instr)
}

/// In-place sweep over a single working vector of M+2 slots.
///
/// Slot 0 is the constant-zero sentinel standing in for `D_{-1,j}`; slot i+1
/// carries row i. While diagonal k is being processed in ascending column
/// order, slot i+1 holds `D_{i,j-1}` until cell (i, j) overwrites it, and the
/// row above has not been updated yet, so the northern read sees `D_{i-1,j}`.
/// After the last diagonal, slot i+1 holds `D_{i,N}`; that final column is
/// the return value and is bit-identical to the last column of
/// `serial_full`'s table.
pub fn serial_inplace<T: TimeValue>(w: &Workload<T>) -> (Vec<T>, EngineInstrumentation) {
    let start = Instant::now();
    let (m, n) = (w.num_servers(), w.num_customers());
    let mut d = vec![T::ZERO; m + 2];
    let mut scalar_ops = 0u64;
    let mut peak = 0usize;
    for k in 1..=m + n {
        for j in diagonal_columns(m, n, k) {
            let i = k - j;
            d[i + 1] = d[i].max_with(d[i + 1]) + w.tau(i, j);
            scalar_ops += 2;
            // slots 0..=i+1 have all been read or written by now
            peak = peak.max(i + 2);
        }
    }
    let instr = EngineInstrumentation {
        engine: EngineKind::SerialInplace,
        workers: 1,
        scalar_ops,
        parallel_steps: None,
        peak_working_slots: Some(peak),
        wall: start.elapsed(),
    };
    (d.split_off(1), instr)
}

/// In-place sweep over a modular ring of min(M+1, N+1) slots, keeping only
/// the rows whose values can still be read. The price is output: only the
/// last server's departure epochs `D_{M,j}`, j = 1..=N, survive; they are
/// streamed into the returned vector as they are produced.
///
/// Row i lives in slot i mod C with C = min(M+1, N+1). When N >= M, C = M+1
/// and no slot is ever reused. When N < M, row i's value is last read while
/// diagonal i+N+1 computes cell (i+1, N), and row i+C first writes on
/// diagonal i+N+2, so the reuse distance is safe by exactly one diagonal.
/// A reused slot still holds the previous tenant's value when its new row
/// starts, which is why column 1 substitutes the constant zero for the
/// western neighbor instead of reading the slot.
pub fn serial_inplace_ring<T: TimeValue>(w: &Workload<T>) -> (Vec<T>, EngineInstrumentation) {
    let start = Instant::now();
    let (m, n) = (w.num_servers(), w.num_customers());
    let cap = (m + 1).min(n + 1);
    let mut d = vec![T::ZERO; cap];
    let mut last_row = Vec::with_capacity(n);
    let mut scalar_ops = 0u64;
    let mut peak = 0usize;
    for k in 1..=m + n {
        for j in diagonal_columns(m, n, k) {
            let i = k - j;
            let north = if i == 0 { T::ZERO } else { d[(i - 1) % cap] };
            let west = if j == 1 { T::ZERO } else { d[i % cap] };
            let value = north.max_with(west) + w.tau(i, j);
            d[i % cap] = value;
            scalar_ops += 2;
            // no sentinel slot here: rows 0..=i have touched min(i+1, cap)
            // distinct slots so far
            peak = peak.max((i + 1).min(cap));
            if i == m {
                last_row.push(value);
            }
        }
    }
    let instr = EngineInstrumentation {
        engine: EngineKind::SerialInplaceRing,
        workers: 1,
        scalar_ops,
        parallel_steps: None,
        peak_working_slots: Some(peak),
        wall: start.elapsed(),
    };
    (last_row, instr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_workload(m: usize, n: usize) -> Workload<u64> {
        Workload::constant(m, n, 1).unwrap()
    }

    #[test]
    fn unit_times_collapse_to_index_sum() {
        let (table, instr) = serial_full(&unit_workload(2, 5));
        for i in 0..=2 {
            for j in 0..=5 {
                let expected = if j == 0 { 0 } else { (i + j) as u64 };
                assert_eq!(table.departure(i, j), expected, "cell ({i}, {j})");
            }
        }
        assert_eq!(instr.scalar_ops, 30);
        assert_eq!(instr.workers, 1);
        assert!(instr.parallel_steps.is_none());
    }

    #[test]
    fn hand_unrolled_two_row_case() {
        let w = Workload::from_rows(vec![vec![1u64, 1, 1], vec![2, 2, 2]]).unwrap();
        let (table, _) = serial_full(&w);
        assert_eq!(table.row(0), &[0, 1, 2, 3]);
        assert_eq!(table.row(1), &[0, 3, 5, 7]);
        assert!(table.monotonicity_violation().is_none());
    }

    #[test]
    fn inplace_final_column_matches_full_table() {
        let w = Workload::from_rows(vec![vec![1u64, 1, 1], vec![2, 2, 2]]).unwrap();
        let (final_col, instr) = serial_inplace(&w);
        assert_eq!(final_col, vec![3, 7]);
        assert_eq!(instr.scalar_ops, 12);
        assert_eq!(instr.peak_working_slots, Some(3));

        let (final_col, _) = serial_inplace(&unit_workload(2, 5));
        assert_eq!(final_col, vec![5, 6, 7]);
    }

    #[test]
    fn inplace_peak_counts_sentinel() {
        let (_, instr) = serial_inplace(&unit_workload(3, 100));
        assert_eq!(instr.peak_working_slots, Some(5));
    }

    #[test]
    fn ring_streams_last_row() {
        let w = Workload::from_rows(vec![vec![1u64, 1, 1], vec![2, 2, 2]]).unwrap();
        let (last_row, instr) = serial_inplace_ring(&w);
        assert_eq!(last_row, vec![3, 5, 7]);
        assert_eq!(instr.scalar_ops, 12);
        assert_eq!(instr.peak_working_slots, Some(2));
    }

    #[test]
    fn ring_agrees_with_full_when_servers_exceed_customers() {
        // N < M exercises actual slot reuse
        let w = Workload::from_fn(7, 3, |i, j| ((i * 31 + j * 17) % 11) as u64).unwrap();
        let (table, _) = serial_full(&w);
        let (last_row, instr) = serial_inplace_ring(&w);
        let expected: Vec<u64> = (1..=3).map(|j| table.departure(7, j)).collect();
        assert_eq!(last_row, expected);
        assert_eq!(instr.peak_working_slots, Some(4));
    }

    #[test]
    fn ring_capacity_tracks_smaller_dimension() {
        let (_, instr) = serial_inplace_ring(&unit_workload(3, 100));
        assert_eq!(instr.peak_working_slots, Some(4));
        let (_, instr) = serial_inplace_ring(&unit_workload(100, 3));
        assert_eq!(instr.peak_working_slots, Some(4));
    }
}
