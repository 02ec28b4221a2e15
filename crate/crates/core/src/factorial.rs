//! Enclosures of `ln n!`, `ℓ_n = n!^(1/n)` and the Robbins bounds
//! `√(2πn)(n/e)^n e^(1/(12n+1)) ≤ n! ≤ √(2πn)(n/e)^n e^(1/(12n))`.

use std::sync::RwLock;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Arith, Enclosure, F64Arith, Interval, IntervalError, MpArith, PrecisionPolicy, Verdict};
use crate::report::InequalityReport;

/// Largest `n` for which exact factorials are formed.
pub const MAX_EXACT_FACTORIAL: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootFactorialRecord {
    pub n: u64,
    pub log_factorial: Interval,
    pub ell: Interval,
}

/// Incrementally extended table of `ln k!` enclosures.
///
/// Readers share the table; extension takes the write lock, so computing
/// every value up to `N` costs `O(N)` logarithms in total.
pub struct LogFactorials<A: Arith> {
    arith: A,
    table: RwLock<Vec<A::Value>>,
}

impl<A: Arith> LogFactorials<A> {
    pub fn new(arith: A) -> Self {
        let zero = arith.int(0);
        Self { arith, table: RwLock::new(vec![zero]) }
    }

    pub fn arith(&self) -> &A {
        &self.arith
    }

    /// Number of cached entries (`ln 0!` through `ln (len-1)!`).
    pub fn len(&self) -> usize {
        self.table.read().expect("log-factorial table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extend_to(&self, n: u64) -> Result<()> {
        let n = n as usize;
        if self.table.read().expect("log-factorial table poisoned").len() > n {
            return Ok(());
        }
        let mut table = self.table.write().expect("log-factorial table poisoned");
        while table.len() <= n {
            let j = table.len() as u64;
            let term = self.arith.ln(&self.arith.nat(j))?;
            let next = table[table.len() - 1].clone() + term;
            table.push(next);
        }
        Ok(())
    }

    /// Enclosure of `ln n!`; `n = 0` gives exactly zero.
    pub fn log_factorial(&self, n: u64) -> Result<A::Value> {
        self.extend_to(n)?;
        Ok(self.table.read().expect("log-factorial table poisoned")[n as usize].clone())
    }

    /// Enclosure of `ln ℓ_n = ln(n!)/n`.
    pub fn log_mean(&self, n: u64) -> Result<A::Value> {
        if n == 0 {
            return Err(IntervalError::Domain("ℓ_0 is undefined".into()).into());
        }
        Ok(self.log_factorial(n)? / self.arith.nat(n))
    }

    /// Enclosure of `ℓ_n = exp(ln(n!)/n)`.
    pub fn root_factorial(&self, n: u64) -> Result<A::Value> {
        Ok(self.arith.exp(&self.log_mean(n)?)?)
    }

    /// `ℓ_n` for every `n` in `from..=to`, evaluated in parallel after a
    /// single sequential extension of the table.
    pub fn root_factorials(&self, from: u64, to: u64) -> Result<Vec<A::Value>> {
        self.extend_to(to)?;
        (from..=to).into_par_iter().map(|n| self.root_factorial(n)).collect()
    }
}

impl LogFactorials<F64Arith> {
    pub fn with_policy(policy: PrecisionPolicy) -> Self {
        Self::new(F64Arith::new(policy))
    }

    pub fn record(&self, n: u64) -> Result<RootFactorialRecord> {
        Ok(RootFactorialRecord { n, log_factorial: self.log_factorial(n)?, ell: self.root_factorial(n)? })
    }

    /// `ℓ_n` from both the log-sum and the product of `j^(1/n)`; returns
    /// their intersection, or a consistency error if they are disjoint.
    pub fn root_factorial_cross_checked(&self, n: u64) -> Result<Interval> {
        let primary = self.root_factorial(n)?;
        let product = root_factorial_product(n, self.arith.policy())?;
        primary.intersection(&product).ok_or_else(|| Error::Consistency {
            n,
            detail: format!("log-sum ℓ_n {primary:?} and product ℓ_n {product:?} are disjoint"),
        })
    }
}

impl LogFactorials<MpArith> {
    pub fn with_bits(prec: u32) -> Self {
        Self::new(MpArith::new(prec))
    }
}

/// `ℓ_n` as the product `∏_{j=1..n} j^(1/n)`, each factor an interval
/// rational power. Costs `O(n)` per index.
pub fn root_factorial_product(n: u64, policy: &PrecisionPolicy) -> Result<Interval> {
    if n == 0 {
        return Err(IntervalError::Domain("ℓ_0 is undefined".into()).into());
    }
    let q = i64::try_from(n).map_err(|_| Error::Range { from: n, to: n })?;
    let mut acc = Interval::from_int(1);
    for j in 1..=q {
        acc = acc.checked_mul(Interval::from_int(j).pow_rat(1, q, policy)?)?;
    }
    Ok(acc)
}

/// Lower and upper Robbins bounds on `n!`, generic over the tier.
pub fn robbins_bounds_with<A: Arith>(arith: &A, n: u64) -> Result<(A::Value, A::Value)> {
    if n == 0 {
        return Err(IntervalError::Domain("Robbins bounds need n >= 1".into()).into());
    }
    let nn = arith.nat(n);
    let twelve_n = arith.int(12) * nn.clone();
    // √(2πn) (n/e)^n = exp(ln(2πn)/2 + n ln n - n)
    let log_core = arith.ln(&(arith.int(2) * arith.pi() * nn.clone()))? / arith.int(2)
        + nn.clone() * arith.ln(&nn)?
        - nn;
    let lower = arith.exp(&(log_core.clone() + arith.int(1) / (twelve_n.clone() + arith.int(1))))?;
    let upper = arith.exp(&(log_core + arith.int(1) / twelve_n))?;
    Ok((lower, upper))
}

/// Robbins bounds as f64 intervals. Fails with an overflow error once the
/// bounds exceed the f64 range (around `n = 170`).
pub fn robbins_bounds(n: u64, policy: &PrecisionPolicy) -> Result<(Interval, Interval)> {
    let arith = MpArith::new(policy.tight_bits());
    let (lower, upper) = robbins_bounds_with(&arith, n)?;
    Ok((lower.to_interval()?, upper.to_interval()?))
}

pub fn exact_factorial(n: u64) -> Integer {
    let n = u32::try_from(n).expect("factorial argument exceeds u32");
    Integer::from(Integer::factorial(n))
}

/// Certifies `lower(n) < n! < upper(n)` for `n = 1..=n_max` with exact
/// integer factorials.
pub fn check_robbins(n_max: u64, policy: &PrecisionPolicy) -> Result<InequalityReport> {
    if n_max == 0 || n_max > MAX_EXACT_FACTORIAL {
        return Err(Error::Range { from: 1, to: n_max });
    }
    let arith = MpArith::new(policy.tight_bits());
    let verdicts = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Verdict> {
            let (lower, upper) = robbins_bounds_with(&arith, n)?;
            let exact = arith.integer(&exact_factorial(n));
            Ok(both(lower.strictly_less(&exact), exact.strictly_less(&upper)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_indices("robbins", 1, verdicts))
}

/// Conjunction of two certified verdicts.
pub(crate) fn both(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
        (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
        _ => Verdict::Unknown,
    }
}
