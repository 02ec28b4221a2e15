use rug::ops::Pow;
use rug::{Integer, Rational};

use super::catalog::InequalityId;
use crate::error::{Error, Result};
use crate::factorial::{both, LogFactorials};
use crate::interval::{Arith, Enclosure, Verdict};
use crate::verifier::{exp_cosh_form_in, x_in};

fn pow<V: Enclosure>(v: &V, k: u32) -> V {
    (1..k).fold(v.clone(), |acc, _| acc * v.clone())
}

/// Pointwise bound at `x`, evaluated in the tier of `a`.
pub(crate) fn pointwise<A: Arith>(id: InequalityId, a: &A, x: f64) -> Result<Verdict> {
    use InequalityId::*;
    let one = a.int(1);
    let xv = a.from_f64(x);
    let x2 = pow(&xv, 2);
    let ln1p = || a.ln(&(one.clone() + xv.clone()));
    let verdict = match id {
        LogLowerQuadratic => (xv.clone() - x2 / a.int(2)).less_or_equal(&ln1p()?),
        LogUpperLinear => ln1p()?.less_or_equal(&xv),
        LogLowerQuartic => {
            let poly = xv.clone() - x2 / a.int(2) + pow(&xv, 3) / a.int(3) - pow(&xv, 4) / a.int(4);
            poly.less_or_equal(&ln1p()?)
        }
        LogUpperCubic => ln1p()?.less_or_equal(&(xv.clone() - x2 / a.int(2) + pow(&xv, 3) / a.int(3))),
        RecipLower => (one.clone() - xv.clone()).less_or_equal(&(one.clone() / (one + xv))),
        RecipUpper => (one.clone() / (one.clone() + xv.clone())).less_or_equal(&(one - xv + x2)),
        ExpGeom => a.exp(&xv)?.less_or_equal(&(one.clone() / (one - xv))),
        CoshGeom => a.cosh(&xv)?.less_or_equal(&(one.clone() / (one - x2 / a.int(2)))),
        _ => return Err(Error::Unsupported(format!("{id} is not a pointwise bound"))),
    };
    Ok(verdict)
}

/// `2^n <= (2n)!` in exact integers.
pub(crate) fn cosh_factorial(n: u64) -> Verdict {
    let two_n = u32::try_from(2 * n).expect("index exceeds u32");
    let lhs = Integer::from(Integer::u_pow_u(2, n as u32));
    let rhs = Integer::from(Integer::factorial(two_n));
    if lhs <= rhs {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

/// `13/(4n^4) <= 1/(144n^3)` in exact rationals.
fn poly_468(n: u64) -> Verdict {
    let n = Integer::from(n);
    let lhs = Rational::from((Integer::from(13), Integer::from(4) * n.clone().pow(4)));
    let rhs = Rational::from((Integer::from(1), Integer::from(144) * n.pow(3)));
    if lhs <= rhs {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

/// Index-family bound at `n`, evaluated in the tier of `table`.
pub(crate) fn sequence<A: Arith>(id: InequalityId, table: &LogFactorials<A>, n: u64) -> Result<Verdict> {
    use InequalityId::*;
    if n == 0 {
        return Err(Error::Range { from: 0, to: 0 });
    }
    let a = table.arith();
    let r = |p: i64, q: i64| a.ratio(p, q);
    let nn = a.nat(n);
    let n1 = a.nat(n + 1);
    let l = a.ln(&nn)?;
    let p = a.ln_two_pi()?;
    let inv = |k: u32| a.int(1) / pow(&nn, k);
    // 1/n - (ln n + ln 2pi)/(2n(n+1))
    let base = || a.int(1) / nn.clone() - (l.clone() + p.clone()) / (a.int(2) * nn.clone() * n1.clone());
    let x0 = || x_in(table, n);
    let x1 = || x_in(table, n + 1);

    let verdict = match id {
        XnUpperFull => x0()?.less_or_equal(&(base() - r(83, 144) * inv(3) + r(3, 2) * inv(4))),
        XnUpperSimple => x0()?.less_or_equal(&base()),
        XnLowerFull => (base() - r(85, 144) * inv(3) - r(49, 144) * inv(4)).less_or_equal(&x0()?),
        XnLowerSimple => (base() - inv(3)).less_or_equal(&x0()?),
        DiffUpper => {
            let rhs = -inv(2) + (l.clone() + r(74, 144) + p.clone()) * inv(3) + a.int(6) * inv(4);
            (x1()? - x0()?).less_or_equal(&rhs)
        }
        DiffLower => (-inv(2)).less_or_equal(&(x1()? - x0()?)),
        DiffSquared => (x1()? - x0()?).square().less_or_equal(&inv(4)),
        SumUpper => {
            let rhs = a.int(2) * inv(1) - (l.clone() + r(15, 16) + p.clone()) * inv(2);
            both((x1()? + x0()?).less_or_equal(&rhs), rhs.less_or_equal(&(a.int(2) * inv(1))))
        }
        SumNonneg => a.int(0).less_or_equal(&(x1()? + x0()?)),
        LogN16 => {
            let lhs = l.clone() + a.int(2) + a.int(2) * p.clone() + a.ln(&n1)?;
            lhs.less_or_equal(&(nn.clone() / a.int(16)))
        }
        SqBound2048 => {
            let inner = a.int(16) * l.clone() + a.int(15) + a.int(16) * p.clone();
            let lhs = (inner.square() + a.int(1024)) / (a.int(2048) * pow(&nn, 4));
            lhs.less_or_equal(&(a.int(1) / (a.int(32) * pow(&nn, 3))))
        }
        Poly468 => poly_468(n),
        BracketNegative => {
            let tail = (l.clone() / a.int(2) + r(101, 288) + p.clone() / a.int(2)) * inv(2);
            (-r(25, 144) - a.int(1) / (a.int(4) * nn.clone()) + tail).strictly_less(&a.int(0))
        }
        FinalProduct => {
            let f = exp_cosh_form_in(table, n)?;
            let tail = (l.clone() / a.int(2) + r(101, 288) + p.clone() / a.int(2)) * inv(5);
            let lead = a.int(2) * (a.int(1) - r(25, 144) * inv(3) - r(1, 4) * inv(4) + tail);
            let cross = (l.clone() + r(76, 144) + p.clone()) * (l.clone() + r(14, 16) + p.clone())
                / (a.int(2) * pow(&nn, 6));
            let bound = lead - cross;
            both(f.less_or_equal(&bound), bound.strictly_less(&a.int(2)))
        }
        CoshFactorial => cosh_factorial(n),
        _ => return Err(Error::Unsupported(format!("{id} is a pointwise bound"))),
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{F64Arith, MpArith, PrecisionPolicy};

    #[test]
    fn exact_checks() {
        assert_eq!(cosh_factorial(0), Verdict::Yes);
        assert_eq!(cosh_factorial(1), Verdict::Yes);
        assert_eq!(poly_468(467), Verdict::No);
        assert_eq!(poly_468(468), Verdict::Yes);
    }

    #[test]
    fn equality_points_certify_non_strict_bounds() {
        let a = F64Arith::new(PrecisionPolicy::default());
        assert_eq!(pointwise(InequalityId::CoshGeom, &a, 0.0).unwrap(), Verdict::Yes);
        assert_eq!(pointwise(InequalityId::ExpGeom, &a, 0.0).unwrap(), Verdict::Yes);
        assert_eq!(pointwise(InequalityId::ExpGeom, &a, -0.5).unwrap(), Verdict::Yes);
    }

    #[test]
    fn tight_tier_resolves_small_x() {
        let f = F64Arith::new(PrecisionPolicy::default());
        let m = MpArith::new(PrecisionPolicy::default().tight_bits());
        let id = InequalityId::LogUpperCubic;
        assert_eq!(pointwise(id, &f, 1e-6).unwrap(), Verdict::Unknown);
        assert_eq!(pointwise(id, &m, 1e-6).unwrap(), Verdict::Yes);
    }

    #[test]
    fn pointwise_rejects_sequence_ids() {
        let a = F64Arith::new(PrecisionPolicy::default());
        assert!(pointwise(InequalityId::LogN16, &a, 0.5).is_err());
    }

    #[test]
    fn bracket_negative_fails_at_two() {
        let t = LogFactorials::with_policy(PrecisionPolicy::default());
        assert_eq!(sequence(InequalityId::BracketNegative, &t, 2).unwrap(), Verdict::No);
        assert_eq!(sequence(InequalityId::BracketNegative, &t, 3).unwrap(), Verdict::Yes);
    }

    #[test]
    fn inline_polynomial_step() {
        for n in 4u64..=10_000 {
            assert!(1 + 3 * n + 3 * n * n <= 4 * n * n);
        }
        assert!(1 + 3 * 3 + 3 * 9 > 4 * 9);
    }
}
