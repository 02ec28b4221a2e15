//! Certified enclosures for the Lalescu sequence
//! `a_n = (n+1)!^(1/(n+1)) - n!^(1/n)`.
//!
//! The crate certifies `a_{n+1} < a_n` over index ranges with interval
//! arithmetic, re-checks a ladder of elementary and Stirling-type
//! inequalities, and confirms asymptotic expansion coefficients against an
//! independent multi-precision oracle.

pub mod asymptotics;
pub mod audit;
pub mod error;
pub mod factorial;
pub mod interval;
pub mod oracle;
pub mod report;
pub mod verifier;

#[cfg(test)]
mod testutil;

pub use interval::{
    less_or_equal, strictly_less, Arith, Enclosure, F64Arith, Interval, IntervalError, MpArith,
    MpInterval, PrecisionPolicy, Verdict,
};
pub use error::{Error, Result};
pub use audit::{InequalityAuditor, InequalityId};
pub use oracle::{Expression, OracleValue};
pub use report::{InequalityReport, ScanRange};
pub use verifier::{LalescuVerifier, MonotonicityCertificate, Tier};
