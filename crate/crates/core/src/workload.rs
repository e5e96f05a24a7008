//! The input matrix of interarrival and service times.

use thiserror::Error;

use crate::time::TimeValue;

/// Problem instance for a tandem line: `M` servers and `N` customers.
///
/// Row `i = 0` holds the interarrival times (the time between customer `j-1`
/// and customer `j` reaching the system); rows `i = 1..=M` hold the service
/// times at server `i`. Columns are indexed by customer `j = 1..=N`. Every
/// entry is a non-negative, finite time; construction enforces this, so a
/// `Workload` in hand is always valid and the engines take it on trust.
#[derive(Debug, Clone, PartialEq)]
pub struct Workload<T> {
    servers: usize,
    customers: usize,
    tau: Vec<T>, // row-major, (servers + 1) * customers
}

/// Rejection reasons for a candidate workload matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkloadError {
    #[error("workload needs at least one server: got {rows} row(s), expected an arrival row plus M >= 1 server rows")]
    NoServers { rows: usize },
    #[error("workload needs at least one customer: row 0 is empty")]
    NoCustomers,
    #[error("ragged workload matrix: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("negative time at (i = {server}, j = {customer})")]
    Negative { server: usize, customer: usize },
    #[error("non-finite time at (i = {server}, j = {customer})")]
    NonFinite { server: usize, customer: usize },
}

impl<T: TimeValue> Workload<T> {
    /// Builds a workload from rows `i = 0..=M`, validating shape and entries.
    ///
    /// Customer indices in errors are 1-based, matching the `j = 1..=N`
    /// convention used everywhere else.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, WorkloadError> {
        if rows.len() < 2 {
            return Err(WorkloadError::NoServers { rows: rows.len() });
        }
        let customers = rows[0].len();
        if customers == 0 {
            return Err(WorkloadError::NoCustomers);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != customers {
                return Err(WorkloadError::Ragged {
                    row: i,
                    got: row.len(),
                    expected: customers,
                });
            }
            for (jz, &v) in row.iter().enumerate() {
                if !v.is_finite_value() {
                    return Err(WorkloadError::NonFinite {
                        server: i,
                        customer: jz + 1,
                    });
                }
                if !v.is_non_negative() {
                    return Err(WorkloadError::Negative {
                        server: i,
                        customer: jz + 1,
                    });
                }
            }
        }
        let servers = rows.len() - 1;
        let tau = rows.into_iter().flatten().collect();
        Ok(Workload {
            servers,
            customers,
            tau,
        })
    }

    /// Builds a workload by evaluating `f(i, j)` for `i = 0..=M`, `j = 1..=N`.
    pub fn from_fn(
        servers: usize,
        customers: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self, WorkloadError> {
        let rows = (0..=servers)
            .map(|i| (1..=customers).map(|j| f(i, j)).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// A workload with every entry equal to `value`.
    pub fn constant(servers: usize, customers: usize, value: T) -> Result<Self, WorkloadError> {
        Self::from_fn(servers, customers, |_, _| value)
    }

    /// Number of servers `M` (the arrival row is not counted).
    pub fn num_servers(&self) -> usize {
        self.servers
    }

    /// Number of customers `N`.
    pub fn num_customers(&self) -> usize {
        self.customers
    }

    /// Entry `tau_ij` for `i = 0..=M`, `j = 1..=N`.
    #[inline]
    pub fn tau(&self, server: usize, customer: usize) -> T {
        debug_assert!(server <= self.servers);
        debug_assert!((1..=self.customers).contains(&customer));
        self.tau[server * self.customers + (customer - 1)]
    }

    /// Row `i` as a slice of `N` entries.
    pub fn row(&self, server: usize) -> &[T] {
        let start = server * self.customers;
        &self.tau[start..start + self.customers]
    }

    /// Rows `i = 0..=M` in order.
    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        (0..=self.servers).map(|i| self.row(i))
    }
}
