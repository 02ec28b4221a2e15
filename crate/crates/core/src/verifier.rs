//! Certified evaluation of `a_n`, `x_n = ln(ℓ_{n+1}/ℓ_n)` and the
//! monotonicity certificate `a_{n+1} < a_n`.
//!
//! Every quantity is first enclosed in f64 interval arithmetic (the fast
//! tier). A comparison that comes back `Unknown` is retried once in the
//! tight tier: MPFR intervals with directed rounding at the precision of
//! [`PrecisionPolicy::escalated`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorial::LogFactorials;
use crate::interval::{Arith, Enclosure, F64Arith, Interval, MpArith, PrecisionPolicy, Verdict};
use crate::report::InequalityReport;

/// Relative width above which a single-term enclosure is recomputed in the
/// tight tier.
pub const TERM_RELATIVE_WIDTH: f64 = 1e-9;

/// Default upper end of a monotonicity sweep.
pub const DEFAULT_SWEEP_END: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Fast,
    Tight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceTermRecord {
    pub n: u64,
    pub a: Interval,
    pub x: Interval,
}

/// One certified step `a_{n+1} < a_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub n: u64,
    pub a: Interval,
    pub a_next: Interval,
    pub verdict: Verdict,
    /// Certified lower bound on `a_n - a_{n+1}`.
    pub gap_lower_bound: f64,
    pub tier: Tier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCertificate {
    pub from: u64,
    pub to: u64,
    pub entries: Vec<CertificateEntry>,
    pub policy: PrecisionPolicy,
}

impl MonotonicityCertificate {
    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.is_yes())
    }

    pub fn first_failure(&self) -> Option<u64> {
        self.entries.iter().find(|e| !e.verdict.is_yes()).map(|e| e.n)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == verdict).count()
    }
}

/// `a_n`, intersecting `ℓ_{n+1} - ℓ_n` with `ℓ_n (e^{x_n} - 1)`.
pub fn lalescu_in<A: Arith>(table: &LogFactorials<A>, n: u64) -> Result<A::Value> {
    let direct = table.root_factorial(n + 1)? - table.root_factorial(n)?;
    let factored = table.root_factorial(n)? * table.arith().exp_m1(&x_in(table, n)?)?;
    direct.intersection(&factored).ok_or_else(|| Error::Consistency {
        n,
        detail: format!("ℓ_(n+1) - ℓ_n = {direct:?} misses ℓ_n (e^x_n - 1) = {factored:?}"),
    })
}

/// `x_n = ln(n+1!)/(n+1) - ln(n!)/n`, rearranged as
/// `(ln(n+1) - ln(n!)/n) / (n+1)` so the log-factorial sum enters once.
pub fn x_in<A: Arith>(table: &LogFactorials<A>, n: u64) -> Result<A::Value> {
    let arith = table.arith();
    let next = arith.nat(n + 1);
    Ok((arith.ln(&next)? - table.log_mean(n)?) / next)
}

/// `ℓ_{n+2}/ℓ_{n+1} + ℓ_n/ℓ_{n+1}`.
pub fn ratio_form_in<A: Arith>(table: &LogFactorials<A>, n: u64) -> Result<A::Value> {
    let mid = table.root_factorial(n + 1)?;
    Ok(table.root_factorial(n + 2)? / mid.clone() + table.root_factorial(n)? / mid)
}

/// `F_n = 2 exp((x_{n+1} - x_n)/2) cosh((x_{n+1} + x_n)/2)`.
pub fn exp_cosh_form_in<A: Arith>(table: &LogFactorials<A>, n: u64) -> Result<A::Value> {
    let arith = table.arith();
    let x0 = x_in(table, n)?;
    let x1 = x_in(table, n + 1)?;
    let two = arith.int(2);
    let e = arith.exp(&((x1.clone() - x0.clone()) / two.clone()))?;
    let c = arith.cosh(&((x1 + x0) / two.clone()))?;
    Ok(two * e * c)
}

/// Verdicts of the three equivalent statements of `a_{n+1} < a_n`.
fn form_verdicts<A: Arith>(table: &LogFactorials<A>, n: u64) -> Result<[Verdict; 3]> {
    let two = table.arith().int(2);
    let direct = lalescu_in(table, n + 1)?.strictly_less(&lalescu_in(table, n)?);
    let ratio = ratio_form_in(table, n)?.strictly_less(&two);
    let exp_cosh = exp_cosh_form_in(table, n)?.strictly_less(&two);
    Ok([direct, ratio, exp_cosh])
}

fn combine_forms(n: u64, verdicts: [Verdict; 3]) -> Result<Verdict> {
    let yes = verdicts.iter().any(|v| *v == Verdict::Yes);
    let no = verdicts.iter().any(|v| *v == Verdict::No);
    match (yes, no) {
        (true, true) => Err(Error::Consistency {
            n,
            detail: format!("direct, ratio and exp-cosh forms gave {verdicts:?}"),
        }),
        (true, false) => Ok(Verdict::Yes),
        (false, true) => Ok(Verdict::No),
        (false, false) => Ok(Verdict::Unknown),
    }
}

/// Owns both enclosure tiers and their log-factorial caches.
pub struct LalescuVerifier {
    policy: PrecisionPolicy,
    fast: LogFactorials<F64Arith>,
    tight: LogFactorials<MpArith>,
}

impl LalescuVerifier {
    pub fn new(policy: PrecisionPolicy) -> Self {
        Self {
            policy,
            fast: LogFactorials::with_policy(policy),
            tight: LogFactorials::with_bits(policy.tight_bits()),
        }
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    pub fn fast(&self) -> &LogFactorials<F64Arith> {
        &self.fast
    }

    pub fn tight(&self) -> &LogFactorials<MpArith> {
        &self.tight
    }

    pub fn lalescu_term_at(&self, n: u64, tier: Tier) -> Result<Interval> {
        check_index(n)?;
        match tier {
            Tier::Fast => lalescu_in(&self.fast, n),
            Tier::Tight => Ok(lalescu_in(&self.tight, n)?.to_interval()?),
        }
    }

    pub fn x_term_at(&self, n: u64, tier: Tier) -> Result<Interval> {
        check_index(n)?;
        match tier {
            Tier::Fast => x_in(&self.fast, n),
            Tier::Tight => Ok(x_in(&self.tight, n)?.to_interval()?),
        }
    }

    /// Enclosure of `a_n`, recomputed in the tight tier when the fast one is
    /// wider than [`TERM_RELATIVE_WIDTH`].
    pub fn lalescu_term(&self, n: u64) -> Result<Interval> {
        let fast = self.lalescu_term_at(n, Tier::Fast)?;
        if fast.relative_width() <= TERM_RELATIVE_WIDTH {
            Ok(fast)
        } else {
            self.lalescu_term_at(n, Tier::Tight)
        }
    }

    /// Enclosure of `x_n`, with the same escalation rule as [`Self::lalescu_term`].
    pub fn x_term(&self, n: u64) -> Result<Interval> {
        let fast = self.x_term_at(n, Tier::Fast)?;
        if fast.relative_width() <= TERM_RELATIVE_WIDTH {
            Ok(fast)
        } else {
            self.x_term_at(n, Tier::Tight)
        }
    }

    pub fn root_factorial(&self, n: u64) -> Result<Interval> {
        check_index(n)?;
        self.fast.root_factorial(n)
    }

    /// Enclosure of `F_n = 2 exp((x_{n+1}-x_n)/2) cosh((x_{n+1}+x_n)/2)`.
    pub fn exp_cosh_form(&self, n: u64) -> Result<Interval> {
        check_index(n)?;
        exp_cosh_form_in(&self.fast, n)
    }

    pub fn record(&self, n: u64) -> Result<SequenceTermRecord> {
        Ok(SequenceTermRecord { n, a: self.lalescu_term(n)?, x: self.x_term(n)? })
    }

    /// Evaluates `a_{n+1} < a_n` directly, as `ℓ_{n+2}/ℓ_{n+1} + ℓ_n/ℓ_{n+1} < 2`
    /// and as `F_n < 2`. `Yes` needs at least one certified form and no
    /// certified contradiction; a `Yes` next to a `No` is a consistency error.
    pub fn check_equivalent_forms(&self, n: u64) -> Result<Verdict> {
        check_index(n)?;
        let fast = combine_forms(n, form_verdicts(&self.fast, n)?)?;
        if fast != Verdict::Unknown {
            return Ok(fast);
        }
        combine_forms(n, form_verdicts(&self.tight, n)?)
    }

    /// Certificate for `a_{n+1} < a_n` over `n in [from, to - 1]`.
    pub fn verify_decreasing(&self, from: u64, to: u64) -> Result<MonotonicityCertificate> {
        if from < 1 || from >= to {
            return Err(Error::Range { from, to });
        }
        self.fast.extend_to(to + 1)?;
        let terms: Vec<Interval> =
            (from..=to).into_par_iter().map(|n| lalescu_in(&self.fast, n)).collect::<Result<_>>()?;

        let mut entries: Vec<CertificateEntry> = (from..to)
            .zip(terms.windows(2))
            .map(|(n, pair)| {
                let (a, a_next) = (pair[0], pair[1]);
                Ok(CertificateEntry {
                    n,
                    a,
                    a_next,
                    verdict: a_next.strictly_less(&a),
                    gap_lower_bound: a.checked_sub(a_next)?.lo(),
                    tier: Tier::Fast,
                })
            })
            .collect::<Result<_>>()?;

        let retry: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.verdict == Verdict::Unknown)
            .map(|(i, _)| i)
            .collect();
        if !retry.is_empty() {
            self.tight.extend_to(to + 1)?;
            let redone: Vec<CertificateEntry> = retry
                .par_iter()
                .map(|&i| self.tight_entry(entries[i].n))
                .collect::<Result<_>>()?;
            for (i, entry) in retry.into_iter().zip(redone) {
                entries[i] = entry;
            }
        }
        Ok(MonotonicityCertificate { from, to, entries, policy: self.policy })
    }

    fn tight_entry(&self, n: u64) -> Result<CertificateEntry> {
        let a = lalescu_in(&self.tight, n)?;
        let a_next = lalescu_in(&self.tight, n + 1)?;
        let gap = a.clone() - a_next.clone();
        Ok(CertificateEntry {
            n,
            verdict: a_next.strictly_less(&a),
            gap_lower_bound: gap.to_interval()?.lo(),
            a: a.to_interval()?,
            a_next: a_next.to_interval()?,
            tier: Tier::Tight,
        })
    }

    /// Certifies `a_n > 0` for `n in [from, to]`.
    pub fn verify_positive(&self, from: u64, to: u64) -> Result<InequalityReport> {
        if from < 1 || from > to {
            return Err(Error::Range { from, to });
        }
        self.fast.extend_to(to + 1)?;
        let zero = Interval::from_int(0);
        let verdicts = (from..=to)
            .into_par_iter()
            .map(|n| Ok(zero.strictly_less(&self.lalescu_term(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(InequalityReport::from_indices("lalescu_positive", from, verdicts))
    }
}

impl Default for LalescuVerifier {
    fn default() -> Self {
        Self::new(PrecisionPolicy::default())
    }
}

/// Convenience wrapper building a fresh verifier.
pub fn verify_decreasing(from: u64, to: u64, policy: &PrecisionPolicy) -> Result<MonotonicityCertificate> {
    LalescuVerifier::new(*policy).verify_decreasing(from, to)
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Range { from: n, to: n })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::encloses;

    #[test]
    fn first_terms() {
        let v = LalescuVerifier::default();
        assert!(encloses(&v.lalescu_term(1).unwrap(), "0.41421356237309504880168872420969807857"));
        assert!(encloses(&v.lalescu_term(2).unwrap(), "0.402907030459044975"));
        assert!(encloses(&v.x_term(1).unwrap(), "0.34657359027997265470861606072908828403"));
        assert!(encloses(&v.x_term(2).unwrap(), "0.250679566129379"));
        assert!(v.lalescu_term(0).is_err());
    }

    #[test]
    fn tiers_agree() {
        let v = LalescuVerifier::default();
        for n in [1, 7, 100, 2500] {
            let fast = v.lalescu_term_at(n, Tier::Fast).unwrap();
            let tight = v.lalescu_term_at(n, Tier::Tight).unwrap();
            assert!(tight.is_subset(&fast) || fast.intersects(&tight), "n = {n}");
            assert!(tight.width() <= fast.width());
        }
    }

    #[test]
    fn equivalent_forms_small_n() {
        let v = LalescuVerifier::default();
        assert_eq!(v.check_equivalent_forms(1).unwrap(), Verdict::Yes);
        assert_eq!(v.check_equivalent_forms(100).unwrap(), Verdict::Yes);
    }

    #[test]
    fn combine_forms_rules() {
        use Verdict::*;
        assert_eq!(combine_forms(1, [Yes, Unknown, Unknown]).unwrap(), Yes);
        assert_eq!(combine_forms(1, [Unknown, Unknown, Unknown]).unwrap(), Unknown);
        assert_eq!(combine_forms(1, [No, Unknown, No]).unwrap(), No);
        assert!(matches!(combine_forms(1, [Yes, No, Yes]), Err(Error::Consistency { .. })));
    }

    #[test]
    fn single_step_certificate() {
        let cert = verify_decreasing(1, 2, &PrecisionPolicy::default()).unwrap();
        assert_eq!(cert.entries.len(), 1);
        let entry = &cert.entries[0];
        assert_eq!(entry.verdict, Verdict::Yes);
        assert!(entry.gap_lower_bound >= 0.011);
        assert!(cert.is_valid());
    }

    #[test]
    fn malformed_ranges() {
        let v = LalescuVerifier::default();
        assert!(v.verify_decreasing(5, 3).is_err());
        assert!(v.verify_decreasing(3, 3).is_err());
        assert!(v.verify_decreasing(0, 3).is_err());
        assert!(v.verify_positive(4, 2).is_err());
    }

    #[test]
    fn positivity() {
        let v = LalescuVerifier::default();
        let report = v.verify_positive(1, 50).unwrap();
        assert!(report.all_hold);
        assert!(v.lalescu_term(1).unwrap().lo() > 0.41);
    }
}
