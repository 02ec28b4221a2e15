//! Numerical confirmation of limits and expansion coefficients.
//!
//! Each target is a quantity computed by the oracle at a schedule of indices
//! together with its claimed limit. Convergence is judged by the trend of
//! `|value - limit|` over the schedule, never by a rate.

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::PrecisionPolicy;
use crate::oracle::{guarded_eval, LogSums};

pub const DEFAULT_SCHEDULE: [u64; 3] = [100, 1_000, 10_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    LalescuLimit,
    RootRatioE,
    RatioToOne,
    Lim1E,
    ResidualXn,
    ResidualMain,
    DiffExpansion,
    SumExpansion,
}

impl Target {
    pub const ALL: [Target; 8] = [
        Target::LalescuLimit,
        Target::RootRatioE,
        Target::RatioToOne,
        Target::Lim1E,
        Target::ResidualXn,
        Target::ResidualMain,
        Target::DiffExpansion,
        Target::SumExpansion,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Target::LalescuLimit => "lalescu_limit",
            Target::RootRatioE => "root_ratio_e",
            Target::RatioToOne => "ratio_to_one",
            Target::Lim1E => "lim1_e",
            Target::ResidualXn => "residual_xn",
            Target::ResidualMain => "residual_main",
            Target::DiffExpansion => "diff_expansion",
            Target::SumExpansion => "sum_expansion",
        }
    }

    pub fn claimed_limit(self) -> ClosedForm {
        match self {
            Target::LalescuLimit => ClosedForm::InverseE,
            Target::RootRatioE | Target::Lim1E => ClosedForm::E,
            Target::RatioToOne => ClosedForm::Rational(1, 1),
            Target::ResidualXn => ClosedForm::Rational(-7, 12),
            Target::ResidualMain => ClosedForm::Rational(1, 2),
            Target::DiffExpansion => ClosedForm::HalfOnePlusTwoLog2Pi,
            Target::SumExpansion => ClosedForm::NegOnePlusLog2Pi,
        }
    }

    /// Scaled residuals amplify rounding by `n^3` and carry a precision floor.
    pub fn is_scaled_residual(self) -> bool {
        matches!(
            self,
            Target::ResidualXn | Target::ResidualMain | Target::DiffExpansion | Target::SumExpansion
        )
    }

    fn reach(self) -> u64 {
        match self {
            Target::RootRatioE | Target::Lim1E => 0,
            Target::LalescuLimit | Target::RatioToOne | Target::ResidualXn => 1,
            Target::ResidualMain | Target::DiffExpansion | Target::SumExpansion => 2,
        }
    }

    fn value(self, s: &LogSums, n: u64) -> Float {
        let prec = s.prec();
        let nf = s.int(n);
        let n1 = s.int(n + 1);
        let ln_n = Float::with_val(prec, nf.ln_ref());
        let cube = Float::with_val(prec, nf.square_ref()) * &nf;
        match self {
            Target::LalescuLimit => s.lalescu(n),
            Target::RootRatioE => nf / s.ell(n),
            Target::RatioToOne => s.x(n).exp(),
            Target::Lim1E => {
                let exponent = Float::with_val(prec, &nf / &n1);
                (n1 / s.ell(n)).pow(exponent)
            }
            Target::ResidualXn => {
                // 1/n - (ln n + ln 2pi)/(2n(n+1))
                let twice = Float::with_val(prec, &nf * &n1) * 2u32;
                let lead = Float::with_val(prec, nf.recip_ref()) - (ln_n + s.ln_two_pi()) / twice;
                (s.x(n) - lead) * cube
            }
            Target::ResidualMain => (Float::with_val(prec, 2) - s.f(n)) * cube,
            Target::DiffExpansion => {
                let diff = s.x(n + 1) - s.x(n);
                let square = Float::with_val(prec, nf.square_ref());
                (diff + square.recip() - ln_n / &cube) * cube
            }
            Target::SumExpansion => {
                let sum = s.x(n + 1) + s.x(n);
                let product = Float::with_val(prec, &nf * &n1);
                let log_term = Float::with_val(prec, product.ln_ref()) / (product * 2u32);
                let square = Float::with_val(prec, nf.square_ref());
                (sum - Float::with_val(prec, 2u32) / &nf + log_term) * square
            }
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.token() == s)
            .ok_or_else(|| Error::UnknownExpression(s.to_string()))
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

/// An exactly known limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Rational(i64, i64),
    E,
    InverseE,
    /// `(1 + 2 ln 2pi)/2`
    HalfOnePlusTwoLog2Pi,
    /// `-(1 + ln 2pi)`
    NegOnePlusLog2Pi,
}

impl ClosedForm {
    pub fn evaluate(self, prec: u32) -> Float {
        let ln_two_pi = || (Float::with_val(prec, Constant::Pi) * 2u32).ln();
        match self {
            ClosedForm::Rational(p, q) => Float::with_val(prec, p) / q,
            ClosedForm::E => Float::with_val(prec, 1).exp(),
            ClosedForm::InverseE => Float::with_val(prec, -1).exp(),
            ClosedForm::HalfOnePlusTwoLog2Pi => (ln_two_pi() * 2u32 + 1u32) / 2u32,
            ClosedForm::NegOnePlusLog2Pi => -(ln_two_pi() + 1u32),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.evaluate(128).to_f64()
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Rational(p, 1) => write!(f, "{p}"),
            ClosedForm::Rational(p, q) => write!(f, "{p}/{q}"),
            ClosedForm::E => f.write_str("e"),
            ClosedForm::InverseE => f.write_str("1/e"),
            ClosedForm::HalfOnePlusTwoLog2Pi => f.write_str("(1 + 2 ln 2pi)/2"),
            ClosedForm::NegOnePlusLog2Pi => f.write_str("-(1 + ln 2pi)"),
        }
    }
}

impl Serialize for ClosedForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSample {
    pub n: u64,
    /// The sampled quantity to 30 significant digits.
    pub value: String,
    pub error_bound: f64,
    /// `value - claimed_limit`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub target: Target,
    pub claimed_limit: ClosedForm,
    pub samples: Vec<ResidualSample>,
    pub digits: u32,
}

impl ResidualSeries {
    /// `|value - limit|` per sample.
    pub fn distances(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.deviation.abs()).collect()
    }

    /// `|value - limit|` is non-increasing over the last three samples.
    pub fn tail_non_increasing(&self) -> bool {
        let d = self.distances();
        let tail = &d[d.len().saturating_sub(3)..];
        tail.windows(2).all(|w| w[1] <= w[0])
    }

    /// `|value - limit|` strictly decreases across the whole schedule.
    pub fn strictly_shrinking(&self) -> bool {
        self.distances().windows(2).all(|w| w[1] < w[0])
    }

    pub fn last(&self) -> &ResidualSample {
        self.samples.last().expect("series is never empty")
    }
}

/// Decimal digits needed to resolve a scaled residual at `n`:
/// `10 + 3 log10 n`, rounded up.
pub fn required_digits(n: u64) -> u32 {
    10 + (3.0 * (n as f64).log10()).ceil() as u32
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    let increasing = schedule.windows(2).all(|w| w[0] < w[1]);
    match (schedule.first(), schedule.last()) {
        (Some(&first), Some(_)) if first >= 1 && increasing => Ok(()),
        (first, last) => Err(Error::Range { from: first.copied().unwrap_or(0), to: last.copied().unwrap_or(0) }),
    }
}

/// Samples `target` on `schedule` with the oracle at `policy.oracle_digits()`.
pub fn series(target: Target, schedule: &[u64], policy: &PrecisionPolicy) -> Result<ResidualSeries> {
    check_schedule(schedule)?;
    let digits = policy.oracle_digits();
    if target.is_scaled_residual() {
        for &n in schedule {
            let required = required_digits(n);
            if required > digits {
                return Err(Error::Precision { n, required, available: digits });
            }
        }
    }
    let limit = target.claimed_limit();
    let values = guarded_eval(target.token(), digits, schedule, target.reach(), |s, n| target.value(s, n))?;
    let samples = schedule
        .iter()
        .zip(values)
        .map(|(&n, v)| {
            let prec = v.value.prec();
            let deviation = Float::with_val(prec, &v.value - limit.evaluate(prec)).to_f64();
            ResidualSample { n, value: v.to_decimal(30), error_bound: v.error_bound.to_f64(), deviation }
        })
        .collect();
    Ok(ResidualSeries { target, claimed_limit: limit, samples, digits })
}

/// One of the four limit targets.
pub fn limit_check(target: Target, schedule: &[u64], policy: &PrecisionPolicy) -> Result<ResidualSeries> {
    if target.is_scaled_residual() {
        return Err(Error::Unsupported(format!("{target} is not a limit target")));
    }
    series(target, schedule, policy)
}

/// `n^3 (x_n - 1/n + (ln n + ln 2pi)/(2n(n+1)))`, claimed to tend to `-7/12`.
pub fn residual_xn(schedule: &[u64], policy: &PrecisionPolicy) -> Result<ResidualSeries> {
    series(Target::ResidualXn, schedule, policy)
}

/// `n^3 (2 - F_n)`, claimed to tend to `1/2`.
pub fn residual_main(schedule: &[u64], policy: &PrecisionPolicy) -> Result<ResidualSeries> {
    series(Target::ResidualMain, schedule, policy)
}

/// The difference or sum expansion of `x_{n+1} -+ x_n`.
pub fn residual_diff_sum(target: Target, schedule: &[u64], policy: &PrecisionPolicy) -> Result<ResidualSeries> {
    if !matches!(target, Target::DiffExpansion | Target::SumExpansion) {
        return Err(Error::Unsupported(format!("{target} is not a difference or sum expansion")));
    }
    series(target, schedule, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn closed_forms() {
        assert!((ClosedForm::HalfOnePlusTwoLog2Pi.to_f64() - 2.33787706641).abs() < 1e-10);
        assert!((ClosedForm::NegOnePlusLog2Pi.to_f64() + 2.83787706641).abs() < 1e-10);
        assert_eq!(ClosedForm::Rational(-7, 12).to_string(), "-7/12");
    }

    #[test]
    fn precision_floor() {
        assert_eq!(required_digits(10_000), 22);
        assert_eq!(required_digits(1_000_000_000_000), 46);
        let p = PrecisionPolicy::new(2, 40).unwrap();
        let err = residual_xn(&[1_000_000_000_000], &p).unwrap_err();
        assert_eq!(err, Error::Precision { n: 1_000_000_000_000, required: 46, available: 40 });
    }

    #[test]
    fn schedule_validation() {
        assert!(residual_xn(&[], &policy()).is_err());
        assert!(residual_xn(&[100, 10], &policy()).is_err());
        assert!(residual_xn(&[0, 10], &policy()).is_err());
        assert!(limit_check(Target::ResidualMain, &[10], &policy()).is_err());
        assert!(residual_diff_sum(Target::Lim1E, &[10], &policy()).is_err());
    }

    #[test]
    fn residual_xn_at_one_hundred() {
        let s = residual_xn(&[100], &policy()).unwrap();
        assert!((s.samples[0].deviation - 0.009051626519).abs() < 1e-11);
    }

    #[test]
    fn ratio_to_one_at_one_thousand() {
        let s = limit_check(Target::RatioToOne, &[1000], &policy()).unwrap();
        assert!((s.samples[0].deviation - 0.0009961267749).abs() < 1e-13);
    }

    #[test]
    fn tokens_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.token().parse::<Target>().unwrap(), t);
        }
    }
}
