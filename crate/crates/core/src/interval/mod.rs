//! Interval arithmetic with outward rounding.
//!
//! [`Interval`] is the f64 enclosure type used for every certified
//! comparison in the crate. Basic arithmetic is rounded outward by
//! inspecting the exact rounding error of each endpoint operation
//! (two-sum for `+`/`-`, fused multiply-add residuals for `*`/`/`), so an
//! endpoint is moved by one ulp only when the floating-point result is
//! inexact and on the wrong side. No process-wide rounding mode is touched.
//!
//! Elementary functions call the platform `exp`/`ln` on each endpoint and
//! widen outward by [`PrecisionPolicy::slack_ulps`].
//!
//! The multi-precision counterpart lives in [`mp`], and the [`Arith`] /
//! [`Enclosure`] traits let formulas be written once for both.

mod arith;
pub mod mp;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use arith::{Arith, Enclosure, F64Arith};
pub use mp::{MpArith, MpInterval};

/// Errors raised by interval operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: endpoint is not finite")]
    Overflow,
    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: f64, hi: f64 },
    #[error("invalid precision policy: {0}")]
    Policy(String),
}

/// Outward rounding slack and oracle precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    slack_ulps: u32,
    oracle_digits: u32,
}

impl PrecisionPolicy {
    pub const DEFAULT_SLACK_ULPS: u32 = 2;
    pub const DEFAULT_ORACLE_DIGITS: u32 = 60;
    pub const MIN_ORACLE_DIGITS: u32 = 30;

    pub fn new(slack_ulps: u32, oracle_digits: u32) -> Result<Self, IntervalError> {
        if slack_ulps < 1 {
            return Err(IntervalError::Policy("slack_ulps must be at least 1".into()));
        }
        if oracle_digits < Self::MIN_ORACLE_DIGITS {
            return Err(IntervalError::Policy(format!(
                "oracle_digits must be at least {}",
                Self::MIN_ORACLE_DIGITS
            )));
        }
        Ok(Self { slack_ulps, oracle_digits })
    }

    pub fn slack_ulps(&self) -> u32 {
        self.slack_ulps
    }

    pub fn oracle_digits(&self) -> u32 {
        self.oracle_digits
    }

    /// The policy after one precision escalation (oracle digits doubled).
    pub fn escalated(&self) -> Self {
        Self { slack_ulps: self.slack_ulps, oracle_digits: self.oracle_digits * 2 }
    }

    /// Binary precision of the multi-precision tier used when a fast
    /// comparison is inconclusive.
    pub fn tight_bits(&self) -> u32 {
        digits_to_bits(self.escalated().oracle_digits)
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { slack_ulps: Self::DEFAULT_SLACK_ULPS, oracle_digits: Self::DEFAULT_ORACLE_DIGITS }
    }
}

/// Bits needed to carry `digits` decimal digits, plus a small guard.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Closed interval `[lo, hi]` with finite f64 endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

// f64 enclosure of pi: the nearest double lies below pi, the next one above.
const PI_LO: f64 = std::f64::consts::PI;

// Below this magnitude the fma residual of a product or quotient may itself
// be rounded, so the endpoint is nudged on both sides instead.
const TINY: f64 = 1.0e-290;

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Overflow);
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self, IntervalError> {
        Self::new(x, x)
    }

    /// Enclosure of an integer; exact when `|v| <= 2^53`.
    pub fn from_int(v: i64) -> Self {
        let x = v as f64;
        // Conversion rounds to nearest; compare back in i128 to find the side.
        let back = x as i128;
        let v = i128::from(v);
        if back == v {
            Self { lo: x, hi: x }
        } else if back > v {
            Self { lo: x.next_down(), hi: x }
        } else {
            Self { lo: x, hi: x.next_up() }
        }
    }

    /// Enclosure of the rational `p / q`.
    pub fn from_ratio(p: i64, q: i64) -> Result<Self, IntervalError> {
        Self::from_int(p).checked_div(Self::from_int(q))
    }

    pub fn pi() -> Self {
        Self { lo: PI_LO, hi: PI_LO.next_up() }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Width divided by the smallest magnitude in the interval; infinite if
    /// the interval touches zero and is not a point.
    pub fn relative_width(&self) -> f64 {
        let mag = self.mig();
        if self.width() == 0.0 {
            0.0
        } else if mag == 0.0 {
            f64::INFINITY
        } else {
            self.width() / mag
        }
    }

    /// Smallest absolute value of a member.
    pub fn mig(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    /// Largest absolute value of a member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Widens both endpoints outward by `ulps` ulps.
    pub fn widen(&self, ulps: u32) -> Result<Self, IntervalError> {
        Self::new(down_by(self.lo, ulps), up_by(self.hi, ulps))
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, IntervalError> {
        Self::new(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, IntervalError> {
        Self::new(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, IntervalError> {
        let pairs = [(self.lo, rhs.lo), (self.lo, rhs.hi), (self.hi, rhs.lo), (self.hi, rhs.hi)];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| mul_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::Domain(format!("division by {rhs:?}, which contains zero")));
        }
        let pairs = [(self.lo, rhs.lo), (self.lo, rhs.hi), (self.hi, rhs.lo), (self.hi, rhs.hi)];
        let lo = pairs.iter().map(|&(a, b)| div_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| div_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi)
    }

    pub fn square(self) -> Result<Self, IntervalError> {
        let lo_abs = self.mig();
        let hi_abs = self.mag();
        Self::new(mul_down(lo_abs, lo_abs), mul_up(hi_abs, hi_abs))
    }

    pub fn exp(&self, policy: &PrecisionPolicy) -> Result<Self, IntervalError> {
        let slack = policy.slack_ulps();
        Self::new(exp_down(self.lo, slack).max(0.0), exp_up(self.hi, slack))
    }

    pub fn exp_m1(&self, policy: &PrecisionPolicy) -> Result<Self, IntervalError> {
        let slack = policy.slack_ulps();
        let at = |x: f64, upward: bool| {
            if x == 0.0 {
                0.0
            } else if upward {
                up_by(x.exp_m1(), slack)
            } else {
                down_by(x.exp_m1(), slack).max(-1.0)
            }
        };
        Self::new(at(self.lo, false), at(self.hi, true))
    }

    pub fn ln(&self, policy: &PrecisionPolicy) -> Result<Self, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain(format!("ln of {self:?}, which is not positive")));
        }
        let slack = policy.slack_ulps();
        Self::new(ln_endpoint(self.lo, slack, false), ln_endpoint(self.hi, slack, true))
    }

    /// `cosh` evaluated as `(e^x + e^-x) / 2` from enclosures of `exp`, using
    /// monotonicity on each side of zero.
    pub fn cosh(&self, policy: &PrecisionPolicy) -> Result<Self, IntervalError> {
        let slack = policy.slack_ulps();
        let at = |x: f64, upward: bool| -> f64 {
            if x == 0.0 {
                return 1.0;
            }
            if upward {
                add_up(exp_up(x, slack), exp_up(-x, slack)) / 2.0
            } else {
                add_down(exp_down(x, slack), exp_down(-x, slack)) / 2.0
            }
        };
        let (lo, hi) = if self.lo >= 0.0 {
            (at(self.lo, false), at(self.hi, true))
        } else if self.hi <= 0.0 {
            (at(self.hi, false), at(self.lo, true))
        } else {
            (1.0, at(self.lo, true).max(at(self.hi, true)))
        };
        Self::new(lo.max(1.0), hi)
    }

    /// Enclosure of `self^(p/q)` as `exp(ln(self) * p/q)`.
    pub fn pow_rat(&self, p: i64, q: i64, policy: &PrecisionPolicy) -> Result<Self, IntervalError> {
        if q <= 0 {
            return Err(IntervalError::Domain(format!("exponent denominator {q} must be positive")));
        }
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain(format!("pow_rat base {self:?} is not positive")));
        }
        let exponent = Self::from_ratio(p, q)?;
        self.ln(policy)?.checked_mul(exponent)?.exp(policy)
    }
}

/// Certified `a < b`: `Yes` if every member of `a` is below every member of
/// `b`, `No` if none is, `Unknown` otherwise.
pub fn strictly_less(a: &Interval, b: &Interval) -> Verdict {
    if a.hi < b.lo {
        Verdict::Yes
    } else if a.lo >= b.hi {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

/// Certified `a <= b`.
pub fn less_or_equal(a: &Interval, b: &Interval) -> Verdict {
    if a.hi <= b.lo {
        Verdict::Yes
    } else if a.lo > b.hi {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Shortest round-trip decimal rendering of an endpoint.
pub fn format_endpoint(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        IntervalRepr { lo: format_endpoint(self.lo), hi: format_endpoint(self.hi) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = IntervalRepr::deserialize(deserializer)?;
        let lo = repr.lo.parse::<f64>().map_err(D::Error::custom)?;
        let hi = repr.hi.parse::<f64>().map_err(D::Error::custom)?;
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

// Operators panic where the checked form would return an error. Formulas in
// this crate only divide by intervals bounded away from zero.
impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("interval addition: {e}"))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("interval subtraction: {e}"))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("interval multiplication: {e}"))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).unwrap_or_else(|e| panic!("interval division: {e}"))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

fn down_by(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_down();
    }
    x
}

fn up_by(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_up();
    }
    x
}

// Exact error of a + b (Knuth two-sum); valid whenever the sum is finite.
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

// Sign of (exact - computed) for a product.
fn mul_residual_sign(a: f64, b: f64, p: f64) -> Option<f64> {
    if a == 0.0 || b == 0.0 {
        return Some(0.0);
    }
    if p.abs() < TINY {
        return None;
    }
    Some(a.mul_add(b, -p))
}

fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    match mul_residual_sign(a, b, p) {
        Some(r) if r >= 0.0 => p,
        _ => p.next_down(),
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    match mul_residual_sign(a, b, p) {
        Some(r) if r <= 0.0 => p,
        _ => p.next_up(),
    }
}

// Sign of (exact - computed) for a quotient: a/b - q = (a - q*b)/b.
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if a == 0.0 {
        return Some(0.0);
    }
    if q.abs() < TINY || b.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if b > 0.0 { r } else { -r })
}

fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(r) if r >= 0.0 => q,
        _ => q.next_down(),
    }
}

fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(r) if r <= 0.0 => q,
        _ => q.next_up(),
    }
}

fn exp_down(x: f64, slack: u32) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        down_by(x.exp(), slack)
    }
}

fn exp_up(x: f64, slack: u32) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        up_by(x.exp(), slack)
    }
}

fn ln_endpoint(x: f64, slack: u32, upward: bool) -> f64 {
    if x == 1.0 {
        0.0
    } else if upward {
        up_by(x.ln(), slack)
    } else {
        down_by(x.ln(), slack)
    }
}
