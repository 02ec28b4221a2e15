//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Two criteria are known to fail: `sq_bound_2048` is certified false at
//! n = 304 itself, so its crossover is 305 and the full-ladder audit over
//! [1, 1000] reports a certified violation. The test asserts that exactly
//! those criteria fail, so a regression elsewhere or a change in either
//! outcome is caught.

use std::process::Command;
use std::time::{Duration, Instant};

use lalescu_core::asymptotics::{self, Target, DEFAULT_SCHEDULE};
use lalescu_core::audit::{default_grid, log_grid, Domain, InequalityAuditor, InequalityId};
use lalescu_core::factorial::{check_robbins, LogFactorials};
use lalescu_core::oracle::{cross_check, EnclosureProvider, Expression};
use lalescu_core::{Error, Interval, LalescuVerifier, PrecisionPolicy, Verdict};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::Float;
use serde_json::Value;

const EXPECTED_FAILURES: [u32; 2] = [3, 4];
const FUZZ_TRIALS: usize = 100_000;
const ORACLE_BITS: u32 = 208;
const EXACT_BITS: u32 = 1024;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_cli(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lalescu"))
        .args(args)
        .env_remove("LALESCU_ORACLE_DIGITS")
        .env_remove("LALESCU_SLACK_ULPS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), start.elapsed())
}

fn criterion_1() -> Check {
    let (code, text, elapsed) = run_cli(&["verify", "--from", "1", "--to", "500", "--format", "json"]);
    ensure(code == 0, format!("exit {code}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let entries = doc["entries"].as_array().ok_or("no entries")?;
    ensure(entries.len() == 499, format!("{} entries", entries.len()))?;
    ensure(entries.iter().all(|e| e["verdict"] == "Yes"), "non-Yes verdict")?;
    ensure(elapsed <= Duration::from_secs(10), format!("{elapsed:?}"))?;
    Ok(format!("499 Yes for n in [1, 499] in {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let (code, text, elapsed) = run_cli(&["verify", "--to", "100000", "--format", "csv"]);
    ensure(code == 0, format!("exit {code}"))?;
    let rows: Vec<&str> = text.lines().skip(1).collect();
    ensure(rows.len() == 99_999, format!("{} rows", rows.len()))?;
    ensure(rows.iter().all(|r| r.split(',').nth(5) == Some("Yes")), "non-Yes verdict")?;
    ensure(elapsed <= Duration::from_secs(300), format!("{elapsed:?}"))?;
    Ok(format!("99999 Yes for n in [1, 99999] in {elapsed:.2?}"))
}

fn criterion_3() -> Check {
    let a = InequalityAuditor::default();
    let crossover = |id| a.find_crossover(id, 1000).map_err(|e| e.to_string());
    let poly = crossover(InequalityId::Poly468)?;
    let log = crossover(InequalityId::LogN16)?;
    let sq = crossover(InequalityId::SqBound2048)?;
    let bracket = crossover(InequalityId::BracketNegative)?;
    let scan = a.crossover_scan(InequalityId::BracketNegative, 10).map_err(|e| e.to_string())?;
    let detail = format!("poly_468 {poly:?}, log_n16 {log:?}, sq_bound_2048 {sq:?}, bracket_negative {bracket:?}");
    ensure(poly == Some(468), detail.clone())?;
    ensure(log.is_some_and(|n| n <= 271), detail.clone())?;
    ensure(bracket == Some(3) && scan.verdict_at(2) == Some(Verdict::No), detail.clone())?;
    ensure(sq.is_some_and(|n| n <= 304), format!("{detail}; sq_bound_2048 is certified false at n = 304"))?;
    Ok(detail)
}

fn criterion_4() -> Check {
    let (code, text, _) = run_cli(&["audit", "all", "--to", "1000", "--format", "json"]);
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let entry = |id: &str| doc["entries"].as_array().and_then(|es| es.iter().find(|e| e["id"] == id)).cloned();
    let diff = entry("diff_lower").ok_or("diff_lower missing")?;
    let fin = entry("final_product").ok_or("final_product missing")?;
    let sub_claims = diff["all_hold"] == true && diff["range"]["from"] == 1 && fin["all_hold"] == true;
    let failure = &doc["summary"]["first_failure"];
    ensure(code == 0, format!("exit {code}; first failure {failure}; diff_lower and final_product hold: {sub_claims}"))?;
    ensure(sub_claims, "sub-claims")?;
    Ok("every catalog bound holds over its valid range".into())
}

fn criterion_5() -> Check {
    let r = check_robbins(200, &PrecisionPolicy::default()).map_err(|e| e.to_string())?;
    ensure(r.all_hold && r.verdicts.len() == 200, format!("first failure {:?}", r.first_failure()))?;
    Ok("200 Yes".into())
}

// Residuals observed with the oracle at 60 digits; tolerances are twice the
// gap to the claimed limit at n = 10^4.
const PINNED: [(Target, [f64; 3], f64); 4] = [
    (Target::ResidualXn, [0.009051626519, 0.0009155041401, 9.165502914e-5], 1.84e-4),
    (Target::ResidualMain, [-0.08781175696, -0.01660677019, -0.002689851915], 5.38e-3),
    (Target::DiffExpansion, [-0.1649053214, -0.02368636224, -0.003063797826], 6.13e-3),
    (Target::SumExpansion, [0.07941849417, 0.01039240227, 0.001271628859], 2.55e-3),
];

fn criterion_6() -> Check {
    let p = PrecisionPolicy::default();
    let mut gaps = Vec::new();
    for (target, observed, tolerance) in PINNED {
        let s = asymptotics::series(target, &DEFAULT_SCHEDULE, &p).map_err(|e| e.to_string())?;
        ensure(s.strictly_shrinking(), format!("{target} not shrinking: {:?}", s.distances()))?;
        ensure(s.last().deviation.abs() <= tolerance, format!("{target} final gap {}", s.last().deviation))?;
        for (sample, expected) in s.samples.iter().zip(observed) {
            let drift = (sample.deviation - expected).abs();
            ensure(drift <= 1e-9 * expected.abs().max(1e-3), format!("{target} drifted at n = {}", sample.n))?;
        }
        gaps.push(format!("{target} {:.3e}", s.last().deviation));
    }
    Ok(format!("final gaps: {}", gaps.join(", ")))
}

fn criterion_7() -> Check {
    let p = PrecisionPolicy::default();
    let a = LalescuVerifier::default().lalescu_term(10_000).map_err(|e| e.to_string())?;
    let inv_e = (-1f64).exp();
    ensure((a.lo() - inv_e).abs() < 0.01 && (a.hi() - inv_e).abs() < 0.01, format!("a_10000 in {a}"))?;
    let table = LogFactorials::with_policy(p);
    let ratio = table
        .root_factorial(1001)
        .and_then(|x| Ok(x.checked_div(table.root_factorial(1000)?)?))
        .map_err(|e| e.to_string())?;
    ensure(ratio.hi() - 1.0 < 0.01 && 1.0 - ratio.lo() < 0.01, format!("ratio {ratio}"))?;
    let e = asymptotics::limit_check(Target::RootRatioE, &[1000, 10_000, 100_000], &p).map_err(|e| e.to_string())?;
    ensure(e.strictly_shrinking(), format!("n/l_n - e: {:?}", e.distances()))?;
    Ok(format!("a_10000 - 1/e <= {:.3e}, n/l_n - e at 10^5: {:.3e}", a.hi() - inv_e, e.last().deviation))
}

fn inside(iv: &Interval, v: &Float) -> bool {
    Float::with_val(64, iv.lo()) <= *v && *v <= Float::with_val(64, iv.hi())
}

fn sample(rng: &mut StdRng, x: f64) -> (Interval, f64) {
    if rng.gen_bool(0.5) {
        return (Interval::point(x).unwrap(), x);
    }
    let iv = Interval::new(x - x.abs() * 1e-7, x + x.abs() * 1e-7).unwrap();
    let t: f64 = rng.gen();
    (iv, (iv.lo() + t * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi()))
}

fn fuzz() -> Result<(), String> {
    let p = PrecisionPolicy::default();
    let mut rng = StdRng::seed_from_u64(0xacce97);
    let magnitude = |rng: &mut StdRng| {
        let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        sign * rng.gen_range(1.0..10.0) * 10f64.powi(rng.gen_range(-30..=30))
    };
    let mut violations = 0usize;
    let mut first = None;
    for trial in 0..FUZZ_TRIALS {
        let (mx, my, arg, pos) = (magnitude(&mut rng), magnitude(&mut rng), rng.gen_range(-60.0..60.0), magnitude(&mut rng).abs());
        let ((a, x), (b, y), (e, u), (l, v)) = (sample(&mut rng, mx), sample(&mut rng, my), sample(&mut rng, arg), sample(&mut rng, pos));
        let (fx, fy) = (Float::with_val(EXACT_BITS, x), Float::with_val(EXACT_BITS, y));
        let (fu, fv) = (Float::with_val(ORACLE_BITS, u), Float::with_val(ORACLE_BITS, v));
        let mut cases = vec![
            ("add", a + b, Float::with_val(EXACT_BITS, &fx + &fy)),
            ("sub", a - b, Float::with_val(EXACT_BITS, &fx - &fy)),
            ("mul", a * b, Float::with_val(EXACT_BITS, &fx * &fy)),
            ("exp", e.exp(&p).unwrap(), fu.clone().exp()),
            ("exp_m1", e.exp_m1(&p).unwrap(), fu.clone().exp_m1()),
            ("cosh", e.cosh(&p).unwrap(), fu.clone().cosh()),
            ("ln", l.ln(&p).unwrap(), fv.clone().ln()),
        ];
        if !b.contains_zero() {
            cases.push(("div", a / b, Float::with_val(ORACLE_BITS, &fx / &fy)));
        }
        for (name, iv, exact) in cases {
            if !inside(&iv, &exact) {
                violations += 1;
                first.get_or_insert(format!("trial {trial}: {name}"));
            }
        }
    }
    ensure(violations == 0, format!("{violations} containment violations, first {first:?}"))
}

struct Corrupted(LalescuVerifier);

impl EnclosureProvider for Corrupted {
    fn enclose(&self, expr: Expression, n: u64) -> lalescu_core::Result<Interval> {
        let honest = self.0.enclose(expr, n)?;
        if n == 250 {
            Ok(honest.checked_add(Interval::point(1e-9)?)?)
        } else {
            Ok(honest)
        }
    }
}

fn criterion_8() -> Check {
    fuzz()?;
    let v = LalescuVerifier::default();
    let exprs = [Expression::Ell, Expression::Lalescu, Expression::X, Expression::F];
    let report = cross_check(1, 500, &exprs, &v, 60).map_err(|e| e.to_string())?;
    ensure(report.comparisons == 2000, format!("{} comparisons", report.comparisons))?;
    match cross_check(1, 500, &[Expression::Lalescu], &Corrupted(v), 60) {
        Err(Error::Disagreement { n: 250, .. }) => {}
        other => return Err(format!("fault injection not detected: {other:?}")),
    }
    Ok(format!("{FUZZ_TRIALS} fuzz trials clean, 2000 oracle comparisons agree, injected fault caught"))
}

fn criterion_9() -> Check {
    let a = InequalityAuditor::default();
    let grid = log_grid(1e-4, 1e4, 1000);
    let positive = [
        InequalityId::LogLowerQuadratic,
        InequalityId::LogUpperLinear,
        InequalityId::LogLowerQuartic,
        InequalityId::LogUpperCubic,
        InequalityId::RecipLower,
        InequalityId::RecipUpper,
    ];
    for id in positive {
        let r = a.audit_pointwise(id, &grid).map_err(|e| e.to_string())?;
        ensure(r.all_hold, format!("{id} fails at grid position {:?}", r.first_failure()))?;
    }
    for id in [InequalityId::ExpGeom, InequalityId::CoshGeom] {
        let r = a.audit_pointwise(id, &default_grid(Domain::UnitOpen)).map_err(|e| e.to_string())?;
        ensure(r.all_hold, format!("{id} fails"))?;
    }
    let cosh = a.audit_cosh_factorial(50).map_err(|e| e.to_string())?;
    ensure(cosh.all_hold && cosh.count(Verdict::Yes) == 51, "cosh_factorial")?;
    Ok("six bounds on 1000 points, both unit-interval bounds, 2^n <= (2n)! for n <= 50".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Check); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {id}: PASS: {detail}"),
            Err(reason) => {
                println!("criterion {id}: FAIL: {reason}");
                failed.push(id);
            }
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES, "unexpected set of failing criteria");
}
