//! Independent event-driven simulator used to validate the sweep engines.
//!
//! This deliberately shares no code with the recurrence engines: it keeps
//! explicit FIFO queues and busy flags per station and processes timestamped
//! events from a priority queue, so a bug in the recurrence cannot hide by
//! being present on both sides of a comparison.

use std::cmp::Ordering;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::table::DepartureTable;
use crate::time::TimeValue;
use crate::workload::Workload;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    /// A customer finishes service at a station.
    Completion = 0,
    /// A customer reaches a station's queue.
    Arrival = 1,
}

#[derive(Debug, Clone, Copy)]
struct Event<T> {
    time: T,
    kind: EventKind,
    server: usize,
    customer: usize,
}

/// Events are processed in (time, kind, server, customer) order, completions
/// before arrivals at equal times. Any consistent tie order yields the same
/// departure epochs; fixing one makes runs reproducible.
impl<T: TimeValue> Ord for Event<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .partial_cmp(&other.time)
            .expect("event times come from validated workloads and are ordered")
            .then_with(|| (self.kind as u8).cmp(&(other.kind as u8)))
            .then_with(|| self.server.cmp(&other.server))
            .then_with(|| self.customer.cmp(&other.customer))
    }
}

impl<T: TimeValue> PartialOrd for Event<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: TimeValue> PartialEq for Event<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: TimeValue> Eq for Event<T> {}

fn start_service<T: TimeValue>(
    w: &Workload<T>,
    table: &mut DepartureTable<T>,
    heap: &mut BinaryHeap<Reverse<Event<T>>>,
    queue: &mut VecDeque<usize>,
    in_service: &mut Option<usize>,
    server: usize,
    now: T,
) {
    let customer = queue.pop_front().expect("caller checked the queue");
    table.set_initiation(server, customer, now);
    *in_service = Some(customer);
    heap.push(Reverse(Event {
        time: now + w.tau(server, customer),
        kind: EventKind::Completion,
        server,
        customer,
    }));
}

/// Simulates the tandem line as FIFO single-server stations with infinite
/// buffers, empty at time zero. Arrival epochs are the running sums of row 0;
/// each station serves its queue in arrival order and hands completed
/// customers to the next station instantaneously. Returns the full departure
/// table with the observed service-initiation epochs filled in.
pub fn simulate_event_driven<T: TimeValue>(w: &Workload<T>) -> DepartureTable<T> {
    let (m, n) = (w.num_servers(), w.num_customers());
    let mut table = DepartureTable::zeroed(m, n);
    table.enable_initiations();

    // row 0 is the arrival process: epoch j is the cumulative interarrival
    // time, and its "initiation" is the previous epoch
    let mut t = T::ZERO;
    for j in 1..=n {
        table.set_initiation(0, j, t);
        t = t + w.tau(0, j);
        table.set_departure(0, j, t);
    }

    let mut heap: BinaryHeap<Reverse<Event<T>>> = BinaryHeap::new();
    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); m + 1];
    let mut in_service: Vec<Option<usize>> = vec![None; m + 1];

    for j in 1..=n {
        heap.push(Reverse(Event {
            time: table.departure(0, j),
            kind: EventKind::Arrival,
            server: 1,
            customer: j,
        }));
    }

    while let Some(Reverse(ev)) = heap.pop() {
        let i = ev.server;
        match ev.kind {
            EventKind::Arrival => {
                queues[i].push_back(ev.customer);
                if in_service[i].is_none() {
                    start_service(
                        w,
                        &mut table,
                        &mut heap,
                        &mut queues[i],
                        &mut in_service[i],
                        i,
                        ev.time,
                    );
                }
            }
            EventKind::Completion => {
                debug_assert_eq!(in_service[i], Some(ev.customer));
                table.set_departure(i, ev.customer, ev.time);
                in_service[i] = None;
                if !queues[i].is_empty() {
                    start_service(
                        w,
                        &mut table,
                        &mut heap,
                        &mut queues[i],
                        &mut in_service[i],
                        i,
                        ev.time,
                    );
                }
                if i < m {
                    heap.push(Reverse(Event {
                        time: ev.time,
                        kind: EventKind::Arrival,
                        server: i + 1,
                        customer: ev.customer,
                    }));
                }
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::serial_full;

    #[test]
    fn unit_times_produce_index_sums() {
        let w = Workload::constant(2, 5, 1u64).unwrap();
        let table = simulate_event_driven(&w);
        for i in 0..=2 {
            for j in 1..=5 {
                assert_eq!(table.departure(i, j), (i + j) as u64);
                assert_eq!(table.initiation(i, j), Some((i + j - 1) as u64));
            }
        }
    }

    #[test]
    fn hand_traced_queue_buildup() {
        // server 1 is twice as slow as the arrivals, so a queue forms
        let w = Workload::from_rows(vec![vec![1u64, 1, 1], vec![2, 2, 2]]).unwrap();
        let table = simulate_event_driven(&w);
        assert_eq!(table.row(0), &[0, 1, 2, 3]);
        assert_eq!(table.row(1), &[0, 3, 5, 7]);
        assert_eq!(table.initiation(1, 1), Some(1));
        assert_eq!(table.initiation(1, 2), Some(3));
        assert_eq!(table.initiation(1, 3), Some(5));
    }

    #[test]
    fn zero_times_collapse_to_zero() {
        let w = Workload::constant(3, 4, 0u64).unwrap();
        let table = simulate_event_driven(&w);
        for i in 0..=3 {
            for j in 0..=4 {
                assert_eq!(table.departure(i, j), 0);
            }
        }
    }

    #[test]
    fn stored_initiations_satisfy_their_defining_relation() {
        let w = Workload::from_fn(3, 6, |i, j| ((i * 7 + j * 5) % 4) as u64).unwrap();
        let table = simulate_event_driven(&w);
        for i in 0..=3 {
            for j in 1..=6 {
                let north = if i == 0 { 0 } else { table.departure(i - 1, j) };
                let west = table.departure(i, j - 1);
                assert_eq!(table.initiation(i, j), Some(north.max(west)), "({i}, {j})");
            }
        }
    }

    #[test]
    fn matches_the_recurrence_on_small_random_instances() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..40 {
            let m = (next() % 6 + 1) as usize;
            let n = (next() % 12 + 1) as usize;
            let w = Workload::from_fn(m, n, |_, _| next() % 10).unwrap();
            let oracle = simulate_event_driven(&w);
            // departures leave each station in customer order
            assert_eq!(oracle.monotonicity_violation(), None);
            let (sweep, _) = serial_full(&w);
            assert!(oracle.exact_eq(&sweep), "trial {trial}: M={m} N={n}");
        }
    }
}
