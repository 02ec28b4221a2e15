//! Independent high-precision evaluator.
//!
//! Values are computed with round-to-nearest MPFR arithmetic from naive sums
//! of `ln j`, at `digits + 10` and `digits + 20` decimal digits; the
//! difference of the two runs is the reported error bound. Nothing here
//! shares code with the enclosure path in [`crate::factorial`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::float::{Constant, Round};
use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::error::{Error, Result};
use crate::interval::{digits_to_bits, Interval, PrecisionPolicy};
use crate::verifier::LalescuVerifier;

pub const GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expression {
    Ell,
    Lalescu,
    X,
    F,
    RobbinsLower,
    RobbinsUpper,
    ConstantE,
    ConstantPi,
    ConstantLog2Pi,
}

impl Expression {
    pub const ALL: [Expression; 9] = [
        Expression::Ell,
        Expression::Lalescu,
        Expression::X,
        Expression::F,
        Expression::RobbinsLower,
        Expression::RobbinsUpper,
        Expression::ConstantE,
        Expression::ConstantPi,
        Expression::ConstantLog2Pi,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Expression::Ell => "ell",
            Expression::Lalescu => "lalescu",
            Expression::X => "x",
            Expression::F => "F",
            Expression::RobbinsLower => "robbins_lower",
            Expression::RobbinsUpper => "robbins_upper",
            Expression::ConstantE => "constant_e",
            Expression::ConstantPi => "constant_pi",
            Expression::ConstantLog2Pi => "constant_log2pi",
        }
    }

    pub fn needs_index(self) -> bool {
        !matches!(self, Expression::ConstantE | Expression::ConstantPi | Expression::ConstantLog2Pi)
    }

    /// Largest `k` such that `ln (n+k)!` is read.
    fn reach(self) -> u64 {
        match self {
            Expression::Lalescu | Expression::X => 1,
            Expression::F => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expression::ALL
            .into_iter()
            .find(|e| e.token() == s)
            .ok_or_else(|| Error::UnknownExpression(s.to_string()))
    }
}

/// A value with an absolute error radius.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    pub value: Float,
    pub error_bound: Float,
    pub digits: u32,
}

impl OracleValue {
    /// `[value - error_bound, value + error_bound]`, rounded outward to f64.
    pub fn to_interval(&self) -> Result<Interval> {
        let lo = (&self.value - &self.error_bound).complete_round(self.value.prec(), Round::Down).0;
        let hi = (&self.value + &self.error_bound).complete_round(self.value.prec(), Round::Up).0;
        Ok(Interval::new(lo.to_f64_round(Round::Down), hi.to_f64_round(Round::Up))?)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.value.to_string_radix(10, Some(digits))
    }
}

/// `ln k!` by naive summation, at the requested indices only.
#[derive(Debug, Clone)]
pub struct LogSums {
    prec: u32,
    sums: BTreeMap<u64, Float>,
}

impl LogSums {
    /// One pass over `1..=max(indices)`.
    pub fn compute(prec: u32, indices: &BTreeSet<u64>) -> Self {
        let mut sums = BTreeMap::new();
        let mut acc = Float::with_val(prec, 0);
        let mut j = 0u64;
        for &n in indices {
            while j < n {
                j += 1;
                acc += Float::with_val(prec, j).ln();
            }
            sums.insert(n, acc.clone());
        }
        Self { prec, sums }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, n: u64) -> &Float {
        self.sums.get(&n).unwrap_or_else(|| panic!("ln {n}! was not requested"))
    }

    pub fn float(&self, v: impl Into<f64>) -> Float {
        Float::with_val(self.prec, v.into())
    }

    pub fn int(&self, v: u64) -> Float {
        Float::with_val(self.prec, v)
    }

    /// `ln(n!)/n`.
    pub fn log_mean(&self, n: u64) -> Float {
        Float::with_val(self.prec, self.get(n) / n)
    }

    pub fn ell(&self, n: u64) -> Float {
        self.log_mean(n).exp()
    }

    pub fn x(&self, n: u64) -> Float {
        Float::with_val(self.prec, self.log_mean(n + 1) - self.log_mean(n))
    }

    pub fn lalescu(&self, n: u64) -> Float {
        Float::with_val(self.prec, self.ell(n + 1) - self.ell(n))
    }

    /// `2 exp((x_{n+1} - x_n)/2) cosh((x_{n+1} + x_n)/2)`.
    pub fn f(&self, n: u64) -> Float {
        let x0 = self.x(n);
        let x1 = self.x(n + 1);
        let d = Float::with_val(self.prec, &x1 - &x0) / 2u32;
        let s = Float::with_val(self.prec, &x1 + &x0) / 2u32;
        d.exp() * s.cosh() * 2u32
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec, Constant::Pi)
    }

    pub fn ln_two_pi(&self) -> Float {
        (self.pi() * 2u32).ln()
    }

    fn robbins(&self, n: u64, denominator: u64) -> Float {
        let nf = self.int(n);
        let core = (self.pi() * 2u32 * &nf).ln() / 2u32 + Float::with_val(self.prec, nf.ln_ref()) * n - n;
        (core + Float::with_val(self.prec, 1) / denominator).exp()
    }

    pub fn eval(&self, expr: Expression, n: u64) -> Float {
        match expr {
            Expression::Ell => self.ell(n),
            Expression::Lalescu => self.lalescu(n),
            Expression::X => self.x(n),
            Expression::F => self.f(n),
            Expression::RobbinsLower => self.robbins(n, 12 * n + 1),
            Expression::RobbinsUpper => self.robbins(n, 12 * n),
            Expression::ConstantE => self.float(1.0).exp(),
            Expression::ConstantPi => self.pi(),
            Expression::ConstantLog2Pi => self.ln_two_pi(),
        }
    }
}

/// Evaluates `f` at each `n` in `ns` twice, with `digits + 10` and
/// `digits + 20` decimal digits, reading `ln k!` for `k` in `n..=n+reach`.
///
/// Fails with [`Error::OracleUnstable`] if the two runs differ by more than
/// `10^(1-digits)` relative.
pub fn guarded_eval<F>(label: &str, digits: u32, ns: &[u64], reach: u64, f: F) -> Result<Vec<OracleValue>>
where
    F: Fn(&LogSums, u64) -> Float + Sync,
{
    check_digits(digits)?;
    let indices: BTreeSet<u64> = ns.iter().flat_map(|&n| n..=n + reach).collect();
    let (coarse, fine) = rayon::join(
        || LogSums::compute(digits_to_bits(digits + GUARD_DIGITS), &indices),
        || LogSums::compute(digits_to_bits(digits + 2 * GUARD_DIGITS), &indices),
    );
    ns.par_iter()
        .map(|&n| {
            let value = f(&coarse, n);
            let reference = f(&fine, n);
            let error_bound =
                (&value - &reference).complete_round(coarse.prec(), Round::Up).0.abs();
            let tolerance = Float::with_val(64, 10).pow(1 - digits as i32) * value.clone().abs();
            if !value.is_finite() || error_bound > tolerance {
                return Err(Error::OracleUnstable { expression: format!("{label}({n})"), digits });
            }
            Ok(OracleValue { value, error_bound, digits })
        })
        .collect()
}

fn check_digits(digits: u32) -> Result<()> {
    if digits < PrecisionPolicy::MIN_ORACLE_DIGITS {
        return Err(Error::Unsupported(format!(
            "oracle needs at least {} digits, got {digits}",
            PrecisionPolicy::MIN_ORACLE_DIGITS
        )));
    }
    Ok(())
}

/// Oracle value of a catalog expression at one index.
pub fn oracle_eval(expr: Expression, n: Option<u64>, digits: u32) -> Result<OracleValue> {
    let n = match (expr.needs_index(), n) {
        (false, _) => 0,
        (true, Some(0)) => return Err(Error::Range { from: 0, to: 0 }),
        (true, Some(n)) => n,
        (true, None) => return Err(Error::Unsupported(format!("{expr} needs an index n"))),
    };
    Ok(guarded_eval(expr.token(), digits, &[n], expr.reach(), |s, n| s.eval(expr, n))?.remove(0))
}

/// Oracle values of one expression over many indices with a single pass of
/// the log sums.
pub fn oracle_eval_many(expr: Expression, ns: &[u64], digits: u32) -> Result<Vec<OracleValue>> {
    if expr.needs_index() && ns.contains(&0) {
        return Err(Error::Range { from: 0, to: 0 });
    }
    guarded_eval(expr.token(), digits, ns, expr.reach(), |s, n| s.eval(expr, n))
}

/// Something that produces certified enclosures of catalog expressions.
pub trait EnclosureProvider: Sync {
    fn enclose(&self, expr: Expression, n: u64) -> Result<Interval>;
}

impl EnclosureProvider for LalescuVerifier {
    fn enclose(&self, expr: Expression, n: u64) -> Result<Interval> {
        match expr {
            Expression::Ell => self.root_factorial(n),
            Expression::Lalescu => self.lalescu_term(n),
            Expression::X => self.x_term(n),
            Expression::F => self.exp_cosh_form(n),
            Expression::RobbinsLower => Ok(crate::factorial::robbins_bounds(n, self.policy())?.0),
            Expression::RobbinsUpper => Ok(crate::factorial::robbins_bounds(n, self.policy())?.1),
            Expression::ConstantE => Ok(Interval::from_int(1).exp(self.policy())?),
            Expression::ConstantPi => Ok(Interval::pi()),
            Expression::ConstantLog2Pi => {
                Ok(Interval::pi().checked_mul(Interval::from_int(2))?.ln(self.policy())?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub from: u64,
    pub to: u64,
    pub expressions: Vec<Expression>,
    pub comparisons: usize,
}

/// Checks that oracle and enclosure intersect for every `n` in `from..=to`
/// and every expression.
pub fn cross_check(
    from: u64,
    to: u64,
    expressions: &[Expression],
    provider: &dyn EnclosureProvider,
    digits: u32,
) -> Result<CrossCheckReport> {
    if from == 0 || from > to {
        return Err(Error::Range { from, to });
    }
    let ns: Vec<u64> = (from..=to).collect();
    let mut comparisons = 0;
    for &expr in expressions {
        let values = oracle_eval_many(expr, &ns, digits)?;
        let checked: Vec<Result<()>> = ns
            .par_iter()
            .zip(values.par_iter())
            .map(|(&n, value)| {
                let oracle = value.to_interval()?;
                let enclosure = provider.enclose(expr, n)?;
                if oracle.intersects(&enclosure) {
                    Ok(())
                } else {
                    Err(Error::Disagreement { expression: expr.token().to_string(), n, oracle, enclosure })
                }
            })
            .collect();
        checked.into_iter().collect::<Result<()>>()?;
        comparisons += ns.len();
    }
    Ok(CrossCheckReport { from, to, expressions: expressions.to_vec(), comparisons })
}

/// Confirms that the hard-coded π bracket and the enclosure of `e` contain
/// the oracle values.
pub fn verify_constants(policy: &PrecisionPolicy) -> Result<()> {
    let digits = policy.oracle_digits();
    let pi = oracle_eval(Expression::ConstantPi, None, digits)?;
    let e = oracle_eval(Expression::ConstantE, None, digits)?;
    let checks = [
        (Expression::ConstantPi, Interval::pi(), pi),
        (Expression::ConstantE, Interval::from_int(1).exp(policy)?, e),
    ];
    for (expr, enclosure, value) in checks {
        let inside = Float::with_val(64, enclosure.lo()) <= value.value
            && value.value <= Float::with_val(64, enclosure.hi());
        if !inside {
            return Err(Error::Disagreement {
                expression: expr.token().to_string(),
                n: 0,
                oracle: value.to_interval()?,
                enclosure,
            });
        }
    }
    Ok(())
}
