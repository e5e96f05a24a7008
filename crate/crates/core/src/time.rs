//! Scalar time representation shared by all engines.

use std::fmt::{Debug, Display};
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::Serialize;

/// Scalar type the departure recurrence runs on.
///
/// Two instantiations are provided: `f64` for ordinary simulation and `u64`
/// for exact integer arithmetic. The recurrence uses only `max` and `+`, both
/// of which are exact on integers, so integer workloads produce bit-identical
/// results across every engine; that is what the verification paths compare.
/// Floating-point runs are also schedule-independent: every cell is computed
/// from the same two operands by the same two operations regardless of which
/// worker evaluates it.
pub trait TimeValue:
    Copy
    + Debug
    + Display
    + FromStr
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// The additive identity; also the boundary value `D_{i,0}` and `D_{-1,j}`.
    const ZERO: Self;

    /// The maximum of `self` and `other`.
    ///
    /// On ties `self` wins, which keeps the result deterministic without
    /// relying on IEEE `max` semantics. Inputs are never NaN: validation
    /// rejects non-finite workloads before any engine runs.
    fn max_with(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// True when the value is a representable, finite time.
    fn is_finite_value(self) -> bool;

    /// True when the value is `>= 0`.
    fn is_non_negative(self) -> bool;

    /// Bitwise equality: `==` for integers, `to_bits` equality for floats.
    fn exact_eq(self, other: Self) -> bool;

    /// Lossy conversion for summary statistics and tolerance checks.
    fn to_f64(self) -> f64;
}

impl TimeValue for f64 {
    const ZERO: Self = 0.0;

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }

    fn is_non_negative(self) -> bool {
        self >= 0.0
    }

    fn exact_eq(self, other: Self) -> bool {
        self.to_bits() == other.to_bits()
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl TimeValue for u64 {
    const ZERO: Self = 0;

    fn is_finite_value(self) -> bool {
        true
    }

    fn is_non_negative(self) -> bool {
        true
    }

    fn exact_eq(self, other: Self) -> bool {
        self == other
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}
