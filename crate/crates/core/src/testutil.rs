use rug::Float;

use crate::interval::Interval;

/// Whether `iv` contains the real written as a long decimal string.
pub(crate) fn encloses(iv: &Interval, decimal: &str) -> bool {
    let v = Float::with_val(256, Float::parse(decimal).expect("decimal literal"));
    iv.lo() <= v && v <= iv.hi()
}
