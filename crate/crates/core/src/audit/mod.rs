//! Certified re-checks of the inequality ladder behind the monotonicity
//! argument.
//!
//! Each bound is evaluated with intervals on both sides; a non-strict bound
//! is certified when `hi(lhs) <= lo(rhs)`, a strict one when
//! `hi(lhs) < lo(rhs)`. Indices or grid points left `Unknown` by the f64
//! tier are recomputed once in the MPFR tier.

mod catalog;
mod predicates;

use rayon::prelude::*;

pub use catalog::{catalog, CatalogEntry, Domain, InequalityId, Kind};

use crate::error::{Error, Result};
use crate::factorial::MAX_EXACT_FACTORIAL;
use crate::interval::{IntervalError, PrecisionPolicy, Verdict};
use crate::report::InequalityReport;
use crate::verifier::LalescuVerifier;

/// Number of points in the default pointwise grids.
pub const DEFAULT_GRID_POINTS: usize = 1000;

/// `points` values spaced evenly in `ln x` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2, "bad grid [{lo}, {hi}] x {points}");
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// The grid used when no explicit grid is given: log-spaced on
/// `[1e-4, 1e4]` for `x > 0`; zero plus mirrored log-spaced points in
/// `[1e-4, 0.999]` for `-1 < x < 1` (one extra point).
pub fn default_grid(domain: Domain) -> Vec<f64> {
    match domain {
        Domain::Positive => log_grid(1e-4, 1e4, DEFAULT_GRID_POINTS),
        Domain::UnitOpen => {
            let half = log_grid(1e-4, 0.999, DEFAULT_GRID_POINTS / 2);
            let mut grid: Vec<f64> = half.iter().rev().map(|x| -x).collect();
            grid.push(0.0);
            grid.extend(half);
            grid
        }
    }
}

pub struct InequalityAuditor {
    verifier: LalescuVerifier,
}

impl InequalityAuditor {
    pub fn new(policy: PrecisionPolicy) -> Self {
        Self { verifier: LalescuVerifier::new(policy) }
    }

    pub fn with_verifier(verifier: LalescuVerifier) -> Self {
        Self { verifier }
    }

    pub fn verifier(&self) -> &LalescuVerifier {
        &self.verifier
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        self.verifier.policy()
    }

    fn pointwise_at(&self, id: InequalityId, x: f64) -> Result<Verdict> {
        let fast = predicates::pointwise(id, self.verifier.fast().arith(), x)?;
        if fast != Verdict::Unknown {
            return Ok(fast);
        }
        predicates::pointwise(id, self.verifier.tight().arith(), x)
    }

    fn sequence_at(&self, id: InequalityId, n: u64) -> Result<Verdict> {
        let fast = predicates::sequence(id, self.verifier.fast(), n)?;
        if fast != Verdict::Unknown {
            return Ok(fast);
        }
        predicates::sequence(id, self.verifier.tight(), n)
    }

    /// Checks a pointwise bound at every grid point.
    pub fn audit_pointwise(&self, id: InequalityId, grid: &[f64]) -> Result<InequalityReport> {
        let Kind::Pointwise { domain } = id.kind() else {
            return Err(Error::Unsupported(format!("{id} is not a pointwise bound")));
        };
        if let Some(x) = grid.iter().find(|x| !domain.contains(**x)) {
            return Err(IntervalError::Domain(format!("{id} is asserted for {domain}; grid has {x}")).into());
        }
        let verdicts = grid.par_iter().map(|&x| self.pointwise_at(id, x)).collect::<Result<Vec<_>>>()?;
        Ok(InequalityReport::from_grid(id.token(), grid.to_vec(), verdicts))
    }

    /// `2^n <= (2n)!` for `n = 0..=n_max`.
    pub fn audit_cosh_factorial(&self, n_max: u64) -> Result<InequalityReport> {
        self.exact_range(0, n_max)
    }

    fn exact_range(&self, from: u64, to: u64) -> Result<InequalityReport> {
        if from > to || 2 * to > MAX_EXACT_FACTORIAL {
            return Err(Error::Range { from, to });
        }
        let verdicts: Vec<Verdict> = (from..=to).into_par_iter().map(predicates::cosh_factorial).collect();
        Ok(InequalityReport::from_indices(InequalityId::CoshFactorial.token(), from, verdicts)
            .with_thresholds(InequalityId::CoshFactorial.entry().claimed_thresholds.to_vec()))
    }

    /// Checks an index-family bound for `n in [from, to]`. `from` must be at
    /// least the bound's documented threshold.
    pub fn audit_sequence_inequality(&self, id: InequalityId, from: u64, to: u64) -> Result<InequalityReport> {
        let entry = id.entry();
        if from < entry.min_n {
            return Err(Error::Precondition { id: id.token().to_string(), min_n: entry.min_n, from });
        }
        self.scan(id, from, to)
    }

    fn scan(&self, id: InequalityId, from: u64, to: u64) -> Result<InequalityReport> {
        match id.kind() {
            Kind::Pointwise { .. } => Err(Error::Unsupported(format!("{id} is a pointwise bound"))),
            Kind::Exact => self.exact_range(from, to),
            Kind::Sequence => {
                if from == 0 || from > to {
                    return Err(Error::Range { from, to });
                }
                self.verifier.fast().extend_to(to + 2)?;
                let verdicts =
                    (from..=to).into_par_iter().map(|n| self.sequence_at(id, n)).collect::<Result<Vec<_>>>()?;
                Ok(InequalityReport::from_indices(id.token(), from, verdicts)
                    .with_thresholds(id.entry().claimed_thresholds.to_vec()))
            }
        }
    }

    /// Least `n <= limit` from which the bound certifies at every scanned
    /// index up to `limit`; `Unknown` counts as a failure. The scan starts at
    /// the first index where the bound is defined, not at its threshold.
    pub fn find_crossover(&self, id: InequalityId, limit: u64) -> Result<Option<u64>> {
        Ok(self.crossover_scan(id, limit)?.first_valid_n)
    }

    /// The full scan behind [`find_crossover`](Self::find_crossover),
    /// including verdicts below the threshold.
    pub fn crossover_scan(&self, id: InequalityId, limit: u64) -> Result<InequalityReport> {
        let start = match id.kind() {
            Kind::Exact => 0,
            _ => 1,
        };
        if limit < start.max(1) {
            return Err(Error::Range { from: start, to: limit });
        }
        self.scan(id, start, limit)
    }

    /// Audits one bound: pointwise bounds on their default grid, index
    /// bounds over `[max(from, min_n), to]`.
    pub fn audit_clamped(&self, id: InequalityId, from: u64, to: u64) -> Result<InequalityReport> {
        match id.kind() {
            Kind::Pointwise { domain } => self.audit_pointwise(id, &default_grid(domain)),
            _ => self.audit_sequence_inequality(id, from.max(id.min_n()), to),
        }
    }
}

impl Default for InequalityAuditor {
    fn default() -> Self {
        Self::new(PrecisionPolicy::default())
    }
}
