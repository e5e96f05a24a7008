//! Departure-epoch tables produced by the engines and the oracle.

use crate::time::TimeValue;

/// The matrix of departure epochs `D_ij` for `i = 0..=M`, `j = 0..=N`.
///
/// Column `j = 0` is materialized as zeros (`D_{i,0} = 0`); the boundary
/// `D_{-1,j} = 0` is never stored; row 0 reads a constant zero for its north
/// neighbor. Row 0 holds the arrival epochs. An optional second matrix holds
/// the service-initiation epochs `B_ij` (`j = 1..=N`); engines that do not
/// track it leave it unset, and consumers reconstruct `B_ij` as
/// `max(D_{i-1,j}, D_{i,j-1})`.
#[derive(Debug, Clone)]
pub struct DepartureTable<T> {
    servers: usize,
    customers: usize,
    d: Vec<T>,         // (servers + 1) * (customers + 1), column 0 zeros
    b: Option<Vec<T>>, // (servers + 1) * customers
}

impl<T: TimeValue> DepartureTable<T> {
    pub(crate) fn zeroed(servers: usize, customers: usize) -> Self {
        DepartureTable {
            servers,
            customers,
            d: vec![T::ZERO; (servers + 1) * (customers + 1)],
            b: None,
        }
    }

    /// Wraps a fully computed departure matrix laid out like `d` above.
    pub(crate) fn from_raw(servers: usize, customers: usize, d: Vec<T>) -> Self {
        assert_eq!(d.len(), (servers + 1) * (customers + 1));
        DepartureTable {
            servers,
            customers,
            d,
            b: None,
        }
    }

    #[inline]
    fn idx(&self, server: usize, customer: usize) -> usize {
        debug_assert!(server <= self.servers);
        debug_assert!(customer <= self.customers);
        server * (self.customers + 1) + customer
    }

    pub fn num_servers(&self) -> usize {
        self.servers
    }

    pub fn num_customers(&self) -> usize {
        self.customers
    }

    /// `D_ij` for `i = 0..=M`, `j = 0..=N`.
    #[inline]
    pub fn departure(&self, server: usize, customer: usize) -> T {
        self.d[self.idx(server, customer)]
    }

    #[inline]
    pub(crate) fn set_departure(&mut self, server: usize, customer: usize, value: T) {
        let idx = self.idx(server, customer);
        self.d[idx] = value;
    }

    /// Stored `B_ij` for `j = 1..=N`, if the producing engine recorded it.
    pub fn initiation(&self, server: usize, customer: usize) -> Option<T> {
        debug_assert!((1..=self.customers).contains(&customer));
        self.b
            .as_ref()
            .map(|b| b[server * self.customers + (customer - 1)])
    }

    pub(crate) fn enable_initiations(&mut self) {
        self.b = Some(vec![T::ZERO; (self.servers + 1) * self.customers]);
    }

    pub(crate) fn set_initiation(&mut self, server: usize, customer: usize, value: T) {
        let n = self.customers;
        let b = self.b.as_mut().expect("initiations not enabled");
        b[server * n + (customer - 1)] = value;
    }

    /// `B_ij` from storage when present, otherwise `max(D_{i-1,j}, D_{i,j-1})`.
    pub fn initiation_or_reconstructed(&self, server: usize, customer: usize) -> T {
        self.initiation(server, customer).unwrap_or_else(|| {
            let north = if server == 0 {
                T::ZERO
            } else {
                self.departure(server - 1, customer)
            };
            north.max_with(self.departure(server, customer - 1))
        })
    }

    /// Row `i` of the departure matrix (`N + 1` entries, `j = 0..=N`).
    pub fn row(&self, server: usize) -> &[T] {
        let start = server * (self.customers + 1);
        &self.d[start..start + self.customers + 1]
    }

    /// The last column: `D_{i,N}` for every `i = 0..=M`.
    pub fn final_departures(&self) -> Vec<T> {
        (0..=self.servers)
            .map(|i| self.departure(i, self.customers))
            .collect()
    }

    /// Bitwise equality of the departure matrices (shape and every entry).
    pub fn exact_eq(&self, other: &Self) -> bool {
        self.servers == other.servers
            && self.customers == other.customers
            && self
                .d
                .iter()
                .zip(other.d.iter())
                .all(|(&a, &b)| a.exact_eq(b))
    }

    /// First cell violating `D_ij >= D_{i,j-1}` or `D_ij >= D_{i-1,j}`, if any.
    pub fn monotonicity_violation(&self) -> Option<(usize, usize)> {
        for i in 0..=self.servers {
            for j in 1..=self.customers {
                if self.departure(i, j) < self.departure(i, j - 1) {
                    return Some((i, j));
                }
                if i > 0 && self.departure(i, j) < self.departure(i - 1, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroed_table_has_zero_boundary() {
        let t = DepartureTable::<u64>::zeroed(2, 5);
        for i in 0..=2 {
            assert_eq!(t.departure(i, 0), 0);
        }
        assert_eq!(t.final_departures(), vec![0, 0, 0]);
        assert!(t.monotonicity_violation().is_none());
    }

    #[test]
    fn reconstructed_initiation_uses_neighbors() {
        let mut t = DepartureTable::<u64>::zeroed(1, 2);
        t.set_departure(0, 1, 1);
        t.set_departure(0, 2, 2);
        t.set_departure(1, 1, 3);
        t.set_departure(1, 2, 5);
        // row 0 reads a constant zero to the north
        assert_eq!(t.initiation_or_reconstructed(0, 1), 0);
        // max(west departure 3, north departure 2)
        assert_eq!(t.initiation_or_reconstructed(1, 2), 3);
    }

    #[test]
    fn monotonicity_violation_is_reported() {
        let mut t = DepartureTable::<u64>::zeroed(1, 2);
        t.set_departure(0, 1, 5);
        t.set_departure(0, 2, 4);
        assert_eq!(t.monotonicity_violation(), Some((0, 2)));
    }
}
