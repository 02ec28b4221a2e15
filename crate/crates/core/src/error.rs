use thiserror::Error;

use crate::interval::{Interval, IntervalError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("{id} is only claimed for n >= {min_n}; requested range starts at {from}")]
    Precondition { id: String, min_n: u64, from: u64 },
    #[error("invalid range: from = {from}, to = {to}")]
    Range { from: u64, to: u64 },
    #[error("certified disagreement between equivalent forms at n = {n}: {detail}")]
    Consistency { n: u64, detail: String },
    #[error("n = {n} needs at least {required} oracle digits, policy has {available}")]
    Precision { n: u64, required: u32, available: u32 },
    #[error("oracle value for {expression} did not stabilise at {digits} digits")]
    OracleUnstable { expression: String, digits: u32 },
    #[error("unknown expression '{0}'")]
    UnknownExpression(String),
    #[error("unknown inequality '{0}'")]
    UnknownInequality(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("oracle {oracle:?} and enclosure {enclosure:?} of {expression} at n = {n} are disjoint")]
    Disagreement { expression: String, n: u64, oracle: Interval, enclosure: Interval },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
