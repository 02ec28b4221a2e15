//! Multi-precision intervals on MPFR with explicit directed rounding.
//!
//! Every endpoint is computed with `Round::Down` or `Round::Up`, and MPFR
//! rounds correctly in each mode, so the enclosure property holds without
//! any slack.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer};

use super::{Arith, Enclosure, Interval, IntervalError, Verdict};

#[derive(Clone, PartialEq)]
pub struct MpInterval {
    lo: Float,
    hi: Float,
}

impl MpInterval {
    pub fn new(lo: Float, hi: Float) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Overflow);
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo: lo.to_f64(), hi: hi.to_f64() });
        }
        Ok(Self { lo, hi })
    }

    /// Enclosure of an arbitrary integer at `prec` bits.
    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let (lo, _) = Float::with_val_round(prec, v, Round::Down);
        let (hi, _) = Float::with_val_round(prec, v, Round::Up);
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    fn pair_prec(&self, other: &Self) -> u32 {
        self.prec().max(other.prec())
    }

    fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Some(Ordering::Greater) && self.hi.cmp0() != Some(Ordering::Less)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::Domain("division by an interval containing zero".into()));
        }
        let prec = self.pair_prec(rhs);
        let (lo, hi) = corner_extremes(self, rhs, |a, b, r| Float::with_val_round(prec, a / b, r).0);
        MpInterval::new(lo, hi)
    }
}

// min over Round::Down and max over Round::Up of op at the four corners.
fn corner_extremes(
    a: &MpInterval,
    b: &MpInterval,
    op: impl Fn(&Float, &Float, Round) -> Float,
) -> (Float, Float) {
    let corners = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)];
    let lo = corners
        .iter()
        .map(|(x, y)| op(x, y, Round::Down))
        .min_by(|x, y| x.partial_cmp(y).expect("finite endpoints"))
        .expect("four corners");
    let hi = corners
        .iter()
        .map(|(x, y)| op(x, y, Round::Up))
        .max_by(|x, y| x.partial_cmp(y).expect("finite endpoints"))
        .expect("four corners");
    (lo, hi)
}

impl fmt::Debug for MpInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_string_radix(10, Some(25)), self.hi.to_string_radix(10, Some(25)))
    }
}

impl Add for MpInterval {
    type Output = MpInterval;
    fn add(self, rhs: Self) -> Self {
        let prec = self.pair_prec(&rhs);
        let lo = Float::with_val_round(prec, &self.lo + &rhs.lo, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi + &rhs.hi, Round::Up).0;
        MpInterval::new(lo, hi).unwrap_or_else(|e| panic!("mp addition: {e}"))
    }
}

impl Sub for MpInterval {
    type Output = MpInterval;
    fn sub(self, rhs: Self) -> Self {
        let prec = self.pair_prec(&rhs);
        let lo = Float::with_val_round(prec, &self.lo - &rhs.hi, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi - &rhs.lo, Round::Up).0;
        MpInterval::new(lo, hi).unwrap_or_else(|e| panic!("mp subtraction: {e}"))
    }
}

impl Mul for MpInterval {
    type Output = MpInterval;
    fn mul(self, rhs: Self) -> Self {
        let prec = self.pair_prec(&rhs);
        let (lo, hi) = corner_extremes(&self, &rhs, |a, b, r| Float::with_val_round(prec, a * b, r).0);
        MpInterval::new(lo, hi).unwrap_or_else(|e| panic!("mp multiplication: {e}"))
    }
}

impl Div for MpInterval {
    type Output = MpInterval;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).unwrap_or_else(|e| panic!("mp division: {e}"))
    }
}

impl Neg for MpInterval {
    type Output = MpInterval;
    fn neg(self) -> Self {
        MpInterval { lo: -self.hi, hi: -self.lo }
    }
}

impl Enclosure for MpInterval {
    fn to_interval(&self) -> Result<Interval, IntervalError> {
        Interval::new(self.lo.to_f64_round(Round::Down), self.hi.to_f64_round(Round::Up))
    }

    fn strictly_less(&self, other: &Self) -> Verdict {
        if self.hi < other.lo {
            Verdict::Yes
        } else if self.lo >= other.hi {
            Verdict::No
        } else {
            Verdict::Unknown
        }
    }

    fn less_or_equal(&self, other: &Self) -> Verdict {
        if self.hi <= other.lo {
            Verdict::Yes
        } else if self.lo > other.hi {
            Verdict::No
        } else {
            Verdict::Unknown
        }
    }

    fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn intersection(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| MpInterval { lo: lo.clone(), hi: hi.clone() })
    }

    fn square(&self) -> Self {
        let prec = self.prec();
        let abs_lo = Float::with_val(prec, self.lo.abs_ref());
        let abs_hi = Float::with_val(prec, self.hi.abs_ref());
        let (small, large) = if abs_lo <= abs_hi { (abs_lo, abs_hi) } else { (abs_hi, abs_lo) };
        let small = if self.contains_zero() { Float::with_val(prec, 0) } else { small };
        let lo = Float::with_val_round(prec, small.square_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, large.square_ref(), Round::Up).0;
        MpInterval { lo, hi }
    }
}

/// The multi-precision tier at a fixed binary precision.
#[derive(Debug, Clone, Copy)]
pub struct MpArith {
    prec: u32,
}

impl MpArith {
    pub fn new(prec: u32) -> Self {
        Self { prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn integer(&self, v: &Integer) -> MpInterval {
        MpInterval::from_integer(v, self.prec)
    }
}

impl Arith for MpArith {
    type Value = MpInterval;

    fn int(&self, v: i64) -> MpInterval {
        MpInterval::from_integer(&Integer::from(v), self.prec)
    }

    fn ratio(&self, p: i64, q: i64) -> MpInterval {
        self.int(p) / self.int(q)
    }

    fn from_f64(&self, x: f64) -> MpInterval {
        let lo = Float::with_val_round(self.prec, x, Round::Down).0;
        let hi = Float::with_val_round(self.prec, x, Round::Up).0;
        MpInterval::new(lo, hi).unwrap_or_else(|e| panic!("point {x}: {e}"))
    }

    fn pi(&self) -> MpInterval {
        let lo = Float::with_val_round(self.prec, Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(self.prec, Constant::Pi, Round::Up).0;
        MpInterval { lo, hi }
    }

    fn exp(&self, x: &MpInterval) -> Result<MpInterval, IntervalError> {
        let lo = Float::with_val_round(self.prec, x.lo.exp_ref(), Round::Down).0;
        let hi = Float::with_val_round(self.prec, x.hi.exp_ref(), Round::Up).0;
        MpInterval::new(lo, hi)
    }

    fn exp_m1(&self, x: &MpInterval) -> Result<MpInterval, IntervalError> {
        let lo = Float::with_val_round(self.prec, x.lo.exp_m1_ref(), Round::Down).0;
        let hi = Float::with_val_round(self.prec, x.hi.exp_m1_ref(), Round::Up).0;
        MpInterval::new(lo, hi)
    }

    fn ln(&self, x: &MpInterval) -> Result<MpInterval, IntervalError> {
        if x.lo.cmp0() != Some(Ordering::Greater) {
            return Err(IntervalError::Domain(format!("ln of {x:?}, which is not positive")));
        }
        let lo = Float::with_val_round(self.prec, x.lo.ln_ref(), Round::Down).0;
        let hi = Float::with_val_round(self.prec, x.hi.ln_ref(), Round::Up).0;
        MpInterval::new(lo, hi)
    }

    fn cosh(&self, x: &MpInterval) -> Result<MpInterval, IntervalError> {
        let prec = self.prec;
        let down = |v: &Float| Float::with_val_round(prec, v.cosh_ref(), Round::Down).0;
        let up = |v: &Float| Float::with_val_round(prec, v.cosh_ref(), Round::Up).0;
        let (lo, hi) = if x.lo.cmp0() != Some(Ordering::Less) {
            (down(&x.lo), up(&x.hi))
        } else if x.hi.cmp0() != Some(Ordering::Greater) {
            (down(&x.hi), up(&x.lo))
        } else {
            let a = up(&x.lo);
            let b = up(&x.hi);
            (Float::with_val(prec, 1), if a > b { a } else { b })
        };
        MpInterval::new(lo, hi)
    }
}
