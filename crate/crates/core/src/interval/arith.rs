use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{less_or_equal, strictly_less, Interval, IntervalError, PrecisionPolicy, Verdict};

/// An enclosure type usable in the generic formulas of this crate.
///
/// Arithmetic operators round outward; they panic on division by an
/// enclosure containing zero.
pub trait Enclosure:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Outward conversion to an f64 interval.
    fn to_interval(&self) -> Result<Interval, IntervalError>;
    fn strictly_less(&self, other: &Self) -> Verdict;
    fn less_or_equal(&self, other: &Self) -> Verdict;
    fn intersects(&self, other: &Self) -> bool;
    fn intersection(&self, other: &Self) -> Option<Self>;
    fn square(&self) -> Self;
}

/// Constants and elementary functions for an enclosure type.
pub trait Arith: Send + Sync {
    type Value: Enclosure;

    fn int(&self, v: i64) -> Self::Value;
    fn ratio(&self, p: i64, q: i64) -> Self::Value;
    fn from_f64(&self, x: f64) -> Self::Value;
    fn pi(&self) -> Self::Value;
    fn exp(&self, x: &Self::Value) -> Result<Self::Value, IntervalError>;
    fn ln(&self, x: &Self::Value) -> Result<Self::Value, IntervalError>;
    fn cosh(&self, x: &Self::Value) -> Result<Self::Value, IntervalError>;
    /// `e^x - 1` without cancellation for small `x`.
    fn exp_m1(&self, x: &Self::Value) -> Result<Self::Value, IntervalError>;

    fn nat(&self, n: u64) -> Self::Value {
        self.int(i64::try_from(n).expect("index exceeds i64"))
    }

    fn ln_two_pi(&self) -> Result<Self::Value, IntervalError> {
        self.ln(&(self.int(2) * self.pi()))
    }
}

/// The f64 tier.
#[derive(Debug, Clone, Copy, Default)]
pub struct F64Arith {
    policy: PrecisionPolicy,
}

impl F64Arith {
    pub fn new(policy: PrecisionPolicy) -> Self {
        Self { policy }
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }
}

impl Enclosure for Interval {
    fn to_interval(&self) -> Result<Interval, IntervalError> {
        Ok(*self)
    }

    fn strictly_less(&self, other: &Self) -> Verdict {
        strictly_less(self, other)
    }

    fn less_or_equal(&self, other: &Self) -> Verdict {
        less_or_equal(self, other)
    }

    fn intersects(&self, other: &Self) -> bool {
        Interval::intersects(self, other)
    }

    fn intersection(&self, other: &Self) -> Option<Self> {
        Interval::intersection(self, other)
    }

    fn square(&self) -> Self {
        Interval::square(*self).unwrap_or_else(|e| panic!("interval square: {e}"))
    }
}

impl Arith for F64Arith {
    type Value = Interval;

    fn int(&self, v: i64) -> Interval {
        Interval::from_int(v)
    }

    fn ratio(&self, p: i64, q: i64) -> Interval {
        Interval::from_ratio(p, q).unwrap_or_else(|e| panic!("ratio {p}/{q}: {e}"))
    }

    fn from_f64(&self, x: f64) -> Interval {
        Interval::point(x).unwrap_or_else(|e| panic!("point {x}: {e}"))
    }

    fn pi(&self) -> Interval {
        Interval::pi()
    }

    fn exp(&self, x: &Interval) -> Result<Interval, IntervalError> {
        x.exp(&self.policy)
    }

    fn ln(&self, x: &Interval) -> Result<Interval, IntervalError> {
        x.ln(&self.policy)
    }

    fn cosh(&self, x: &Interval) -> Result<Interval, IntervalError> {
        x.cosh(&self.policy)
    }

    fn exp_m1(&self, x: &Interval) -> Result<Interval, IntervalError> {
        x.exp_m1(&self.policy)
    }
}
