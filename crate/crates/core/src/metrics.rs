//! Per-customer queueing metrics derived from a departure table.

use serde::Serialize;
use thiserror::Error;

use crate::table::DepartureTable;
use crate::time::TimeValue;
use crate::workload::Workload;

/// One customer's passage through the line.
///
/// `waits[i-1]` is the queueing delay at server i: the gap between leaving
/// server i-1 (or arriving, for i = 1) and starting service at server i.
/// Sojourn decomposes as the sum over servers of wait plus service time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CustomerMetrics<T> {
    pub customer: usize,
    pub arrival: T,
    pub departure: T,
    pub sojourn: T,
    pub waits: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error(
        "table shape ({table_servers} servers, {table_customers} customers) \
         does not match workload ({servers}, {customers})"
    )]
    ShapeMismatch {
        servers: usize,
        customers: usize,
        table_servers: usize,
        table_customers: usize,
    },
}

/// Derives per-customer metrics from a table produced for `w`.
///
/// Service-initiation epochs are taken from the table when the producing
/// engine recorded them and reconstructed as `max(D_{i-1,j}, D_{i,j-1})`
/// otherwise, so tables from any engine or from the event-driven simulator
/// work alike.
pub fn compute_metrics<T: TimeValue>(
    w: &Workload<T>,
    t: &DepartureTable<T>,
) -> Result<Vec<CustomerMetrics<T>>, MetricsError> {
    let (m, n) = (w.num_servers(), w.num_customers());
    if t.num_servers() != m || t.num_customers() != n {
        return Err(MetricsError::ShapeMismatch {
            servers: m,
            customers: n,
            table_servers: t.num_servers(),
            table_customers: t.num_customers(),
        });
    }
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let arrival = t.departure(0, j);
        let departure = t.departure(m, j);
        let waits = (1..=m)
            .map(|i| t.initiation_or_reconstructed(i, j) - t.departure(i - 1, j))
            .collect();
        out.push(CustomerMetrics {
            customer: j,
            arrival,
            departure,
            sojourn: departure - arrival,
            waits,
        });
    }
    Ok(out)
}
