//! Closed-form predictions for the wavefront schedule.
//!
//! Nothing in this module runs a simulation: every function is arithmetic on
//! (M, N, P). The parallel engine counts the steps it actually executes, and
//! the test suites compare those counts against this module. Keeping the two
//! code paths independent is the point; neither is allowed to borrow the
//! other's shortcut.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Grid-size cutoff below which `exact_parallel_time` re-derives its result
/// by direct summation over the diagonals and asserts agreement. Above the
/// cutoff (M+N > 2^24) the per-diagonal loop would dominate the call, so only
/// the closed form is evaluated.
const SUMMATION_CHECK_LIMIT: u128 = 1 << 24;

/// Rejections for the model entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerfError {
    #[error("{name} must be >= 1")]
    NonPositive { name: &'static str },
}

fn require(name: &'static str, v: u64) -> Result<(), PerfError> {
    if v == 0 {
        Err(PerfError::NonPositive { name })
    } else {
        Ok(())
    }
}

/// (L1, L2) = (min(M+1, N), max(M+1, N)).
fn width_bounds(m: u128, n: u128) -> (u128, u128) {
    let rows = m + 1;
    if rows <= n {
        (rows, n)
    } else {
        (n, rows)
    }
}

/// Anti-diagonal cell counts for the (M+1) x N grid.
///
/// Diagonal `k` (k = 1..=M+N) holds the cells (i, j) with i + j = k for
/// i = 0..=M, j = 1..=N. The widths ramp up 1, 2, ..., L1-1, stay at L1 for
/// L2-L1+1 diagonals, then ramp back down, where L1 = min(M+1, N) and
/// L2 = max(M+1, N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavefrontProfile {
    /// `widths[k-1]` is the number of cells on diagonal `k`.
    pub widths: Vec<u64>,
    /// min(M+1, N); the widest diagonal.
    pub l1: u64,
    /// max(M+1, N).
    pub l2: u64,
}

impl WavefrontProfile {
    /// Number of diagonals, M+N.
    pub fn num_diagonals(&self) -> usize {
        self.widths.len()
    }

    /// Total cells across all diagonals; equals (M+1) * N.
    pub fn total_cells(&self) -> u128 {
        self.widths.iter().map(|&w| w as u128).sum()
    }
}

/// Number of cells on diagonal `k` of the (M+1) x N grid, `k` in 1..=M+N.
pub fn diagonal_width(m: u64, n: u64, k: u64) -> u64 {
    let (l1, _) = width_bounds(m as u128, n as u128);
    let diag = m as u128 + n as u128;
    let k = k as u128;
    debug_assert!(k >= 1 && k <= diag);
    l1.min(k).min(diag + 1 - k) as u64
}

/// The full width sequence for the (M+1) x N grid.
pub fn wavefront_widths(m: u64, n: u64) -> Result<WavefrontProfile, PerfError> {
    require("servers", m)?;
    require("customers", n)?;
    let (l1, l2) = width_bounds(m as u128, n as u128);
    let widths = (1..=m + n).map(|k| diagonal_width(m, n, k)).collect();
    Ok(WavefrontProfile {
        widths,
        l1: l1 as u64,
        l2: l2 as u64,
    })
}

/// Operations performed by any single-worker sweep: 2(M+1)N, counting each
/// maximization and each addition as one.
pub fn serial_op_count(m: u64, n: u64) -> Result<BigUint, PerfError> {
    require("servers", m)?;
    require("customers", n)?;
    Ok(BigUint::from(2u8) * (BigUint::from(m) + 1u8) * BigUint::from(n))
}

/// Direct summation for the small-grid consistency check: all intermediate
/// values fit u64 because M+N is capped by `SUMMATION_CHECK_LIMIT`.
fn summation_small(m: u64, n: u64, p: u64) -> u64 {
    let l1 = (m + 1).min(n);
    let diag = m + n;
    let mut steps = 0u64;
    for k in 1..=diag {
        let w = l1.min(k).min(diag + 1 - k);
        steps += (w - 1) / p + 1;
    }
    2 * steps
}

/// Parallel steps with P workers, summed diagonal by diagonal: each of the
/// two phases on a diagonal of width l takes floor((l-1)/P)+1 steps, so the
/// total is 2 * sum over k of (floor((l_k-1)/P) + 1).
pub fn exact_parallel_time_summation(m: u64, n: u64, p: u64) -> Result<BigUint, PerfError> {
    require("servers", m)?;
    require("customers", n)?;
    require("workers", p)?;
    let diag = m as u128 + n as u128;
    if diag <= SUMMATION_CHECK_LIMIT {
        return Ok(BigUint::from(summation_small(m, n, p)));
    }
    let (l1, _) = width_bounds(m as u128, n as u128);
    let p = p as u128;
    let mut total = BigUint::from(0u8);
    let mut local: u128 = 0;
    for k in 1..=diag {
        let w = l1.min(k).min(diag + 1 - k);
        local += (w - 1) / p + 1;
        if local > 1 << 110 {
            total += local;
            local = 0;
        }
    }
    total += local;
    Ok(BigUint::from(2u8) * total)
}

/// Parallel steps with P workers, by the closed form
/// 2(L1+L2-1) + 2q(L1+L2-1-P-Pq) with q = floor((L1-1)/P).
///
/// On grids with M+N below the consistency cutoff, the per-diagonal summation
/// is also evaluated and the two results are asserted equal.
pub fn exact_parallel_time(m: u64, n: u64, p: u64) -> Result<BigUint, PerfError> {
    require("servers", m)?;
    require("customers", n)?;
    require("workers", p)?;
    let (l1, _) = width_bounds(m as u128, n as u128);
    let diag = m as u128 + n as u128; // = L1 + L2 - 1
    let q = (l1 - 1) / p as u128;
    let mut t = BigUint::from(2u8) * BigUint::from(diag);
    if q > 0 {
        // q >= 1 implies P <= L1-1 and Pq <= L1-1, so the factor below is
        // at least L2-L1+1 >= 1 and the subtraction cannot wrap.
        let inner = diag - p as u128 - p as u128 * q;
        t += BigUint::from(2u8) * BigUint::from(q) * BigUint::from(inner);
    }
    if diag <= SUMMATION_CHECK_LIMIT {
        let sum = BigUint::from(summation_small(m, n, p));
        assert_eq!(
            t, sum,
            "closed form disagrees with width summation for M={m} N={n} P={p}"
        );
    }
    Ok(t)
}

/// The order expression 2M + 2N + 2*floor((L1-1)/P)*(L2-P), evaluated with
/// implied constant 1. Exact at P = 1 and at P >= L1; an approximation in
/// between, and the tests treat it that way.
pub fn asymptotic_parallel_time(m: u64, n: u64, p: u64) -> Result<f64, PerfError> {
    require("servers", m)?;
    require("customers", n)?;
    require("workers", p)?;
    let (l1, l2) = width_bounds(m as u128, n as u128);
    let q = (l1 - 1) / p as u128;
    let base = 2.0 * m as f64 + 2.0 * n as f64;
    Ok(if q == 0 {
        base
    } else {
        // q >= 1 implies P < L1 <= L2, so L2 - P stays positive.
        base + 2.0 * q as f64 * (l2 - p as u128) as f64
    })
}

/// Step-count speedup S_P = T_1 / T_P.
pub fn speedup(m: u64, n: u64, p: u64) -> Result<f64, PerfError> {
    let t1 = exact_parallel_time(m, n, 1)?;
    debug_assert_eq!(
        t1,
        serial_op_count(m, n)?,
        "single-worker schedule must degenerate to the serial operation count"
    );
    let tp = exact_parallel_time(m, n, p)?;
    Ok(t1.to_f64().unwrap_or(f64::INFINITY) / tp.to_f64().unwrap_or(f64::INFINITY))
}

/// Large-N speedup limit (M+1) / (1 + floor(M/P)).
pub fn asymptotic_speedup(m: u64, p: u64) -> Result<f64, PerfError> {
    require("servers", m)?;
    require("workers", p)?;
    Ok((m as f64 + 1.0) / (1.0 + (m / p) as f64))
}

/// Bundle of the exact and asymptotic predictions for one (M, N, P).
#[derive(Debug, Clone, PartialEq)]
pub struct PerfPrediction {
    pub processors: u64,
    /// Exact parallel steps T_P.
    pub t_exact: BigUint,
    /// Serial operation count T_1 = 2(M+1)N.
    pub t_serial: BigUint,
    /// The order expression for T_P evaluated numerically.
    pub t_asymptotic: f64,
    /// T_1 / T_P.
    pub speedup: f64,
    /// (M+1) / (1 + floor(M/P)), the N -> infinity limit of `speedup`.
    pub speedup_asymptotic: f64,
}

/// All predictions for one (M, N, P) in a single call.
pub fn prediction(m: u64, n: u64, p: u64) -> Result<PerfPrediction, PerfError> {
    Ok(PerfPrediction {
        processors: p,
        t_exact: exact_parallel_time(m, n, p)?,
        t_serial: serial_op_count(m, n)?,
        t_asymptotic: asymptotic_parallel_time(m, n, p)?,
        speedup: speedup(m, n, p)?,
        speedup_asymptotic: asymptotic_speedup(m, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn width_sequences() {
        assert_eq!(
            wavefront_widths(2, 5).unwrap().widths,
            vec![1, 2, 3, 3, 3, 2, 1]
        );
        assert_eq!(wavefront_widths(1, 1).unwrap().widths, vec![1, 1]);
        assert_eq!(
            wavefront_widths(5, 3).unwrap().widths,
            vec![1, 2, 3, 3, 3, 3, 2, 1]
        );
    }

    #[test]
    fn width_profile_shape() {
        let p = wavefront_widths(2, 5).unwrap();
        assert_eq!((p.l1, p.l2), (3, 5));
        assert_eq!(p.num_diagonals(), 7);
        assert_eq!(p.total_cells(), 15);
    }

    // Independent construction of the width sequence from its ramp/plateau
    // description, to cross-check the per-diagonal min() formula.
    fn ramp_plateau(m: u64, n: u64) -> Vec<u64> {
        let l1 = (m + 1).min(n);
        let l2 = (m + 1).max(n);
        let mut v: Vec<u64> = (1..l1).collect();
        v.extend(std::iter::repeat_n(l1, (l2 - l1 + 1) as usize));
        v.extend((1..l1).rev());
        v
    }

    #[test]
    fn widths_match_ramp_plateau_construction() {
        for m in 1..=64u64 {
            for n in 1..=64u64 {
                let p = wavefront_widths(m, n).unwrap();
                assert_eq!(p.widths, ramp_plateau(m, n), "M={m} N={n}");
                assert_eq!(p.total_cells(), (m as u128 + 1) * n as u128);
                assert_eq!(p.num_diagonals() as u64, m + n);
                assert_eq!(*p.widths.iter().max().unwrap(), p.l1);
            }
        }
    }

    #[test]
    fn exact_time_examples() {
        assert_eq!(exact_parallel_time(2, 5, 1).unwrap(), big(30));
        assert_eq!(exact_parallel_time(2, 5, 2).unwrap(), big(20));
        assert_eq!(exact_parallel_time(2, 5, 3).unwrap(), big(14));
        // extra workers beyond the widest diagonal change nothing
        assert_eq!(exact_parallel_time(2, 5, 64).unwrap(), big(14));
    }

    #[test]
    fn summation_route_matches_examples() {
        assert_eq!(exact_parallel_time_summation(2, 5, 2).unwrap(), big(20));
        assert_eq!(exact_parallel_time_summation(5, 3, 2).unwrap(), big(24));
    }

    #[test]
    fn asymptotic_time_examples() {
        assert_eq!(asymptotic_parallel_time(2, 5, 1).unwrap(), 30.0);
        assert_eq!(asymptotic_parallel_time(2, 5, 3).unwrap(), 14.0);
        assert_eq!(asymptotic_parallel_time(10, 1000, 4).unwrap(), 6004.0);
    }

    #[test]
    fn speedup_examples() {
        let s = speedup(2, 5, 3).unwrap();
        assert!((s - 30.0 / 14.0).abs() < 1e-12);
        assert_eq!(speedup(2, 5, 1).unwrap(), 1.0);
        assert_eq!(speedup(9, 40, 1).unwrap(), 1.0);
        // three workers on a two-server line approach a speedup of three
        let s = speedup(2, 100_000, 3).unwrap();
        assert!((s - 3.0).abs() / 3.0 < 0.001, "s = {s}");
    }

    #[test]
    fn asymptotic_speedup_examples() {
        assert_eq!(asymptotic_speedup(2, 3).unwrap(), 3.0);
        assert_eq!(asymptotic_speedup(5, 1).unwrap(), 1.0);
        assert_eq!(asymptotic_speedup(12, 1).unwrap(), 1.0);
        assert_eq!(asymptotic_speedup(7, 4).unwrap(), 4.0);
        let exact = speedup(7, 1_000_000, 4).unwrap();
        assert!((exact - 4.0).abs() / 4.0 < 0.02, "exact = {exact}");
    }

    #[test]
    fn zero_arguments_are_rejected() {
        assert!(wavefront_widths(0, 5).is_err());
        assert!(wavefront_widths(5, 0).is_err());
        assert!(serial_op_count(0, 1).is_err());
        assert!(exact_parallel_time(1, 1, 0).is_err());
        assert!(exact_parallel_time(0, 1, 1).is_err());
        assert!(exact_parallel_time_summation(1, 0, 1).is_err());
        assert!(asymptotic_parallel_time(1, 1, 0).is_err());
        assert!(speedup(1, 0, 1).is_err());
        assert!(asymptotic_speedup(0, 1).is_err());
        assert!(asymptotic_speedup(1, 0).is_err());
    }

    #[test]
    fn plateau_boundary() {
        for m in 1..=8u64 {
            for n in 1..=8u64 {
                let l1 = (m + 1).min(n);
                for p in l1..=l1 + 4 {
                    assert_eq!(exact_parallel_time(m, n, p).unwrap(), big(2 * (m + n)));
                }
            }
        }
    }

    #[test]
    fn prediction_bundles_all_fields() {
        let pred = prediction(2, 5, 2).unwrap();
        assert_eq!(pred.processors, 2);
        assert_eq!(pred.t_exact, big(20));
        assert_eq!(pred.t_serial, big(30));
        assert_eq!(pred.speedup, 1.5);
        assert_eq!(pred.speedup_asymptotic, 1.5);
    }
}
