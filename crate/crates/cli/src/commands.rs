use lalescu_core::asymptotics::{self, Target, DEFAULT_SCHEDULE};
use lalescu_core::audit::{InequalityAuditor, InequalityId, Kind};
use lalescu_core::factorial::check_robbins;
use lalescu_core::report::ScanRange;
use lalescu_core::{Error, InequalityReport, LalescuVerifier, PrecisionPolicy, Verdict};
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Overall result of a run, in exit-code order of precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
    Unknown,
}

impl Status {
    pub fn from_verdicts<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Self {
        let mut status = Status::Pass;
        for v in verdicts {
            match v {
                Verdict::No => return Status::Violation,
                Verdict::Unknown => status = Status::Unknown,
                Verdict::Yes => {}
            }
        }
        status
    }

    fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violation, _) | (_, Status::Violation) => Status::Violation,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Unknown => 2,
        }
    }
}

/// A finished command, ready to render in any format.
pub struct Outcome {
    pub status: Status,
    pub entries: Vec<Value>,
    pub first_failure: Value,
    pub extra_summary: Vec<(&'static str, Value)>,
    pub text: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Outcome {
    fn new(status: Status, header: Vec<&'static str>) -> Self {
        Self {
            status,
            entries: Vec::new(),
            first_failure: Value::Null,
            extra_summary: Vec::new(),
            text: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

pub fn verify(config: &RunConfig, policy: PrecisionPolicy) -> Result<Outcome, Error> {
    let from = config.from.unwrap_or(1);
    let cert = LalescuVerifier::new(policy).verify_decreasing(from, config.to)?;
    let mut out = Outcome::new(
        Status::from_verdicts(cert.entries.iter().map(|e| &e.verdict)),
        vec!["n", "a_lo", "a_hi", "a_next_lo", "a_next_hi", "verdict", "gap_lower_bound", "tier"],
    );
    for e in &cert.entries {
        let n = e.n;
        out.text.push(format!("a_{n} = {}  a_{} < a_{n}: {}", e.a, n + 1, e.verdict));
        out.rows.push(vec![
            n.to_string(),
            format!("{:?}", e.a.lo()),
            format!("{:?}", e.a.hi()),
            format!("{:?}", e.a_next.lo()),
            format!("{:?}", e.a_next.hi()),
            e.verdict.to_string(),
            format!("{:?}", e.gap_lower_bound),
            to_value(&e.tier).as_str().unwrap_or_default().to_string(),
        ]);
        out.entries.push(to_value(e));
    }
    if let Some(last) = cert.entries.last() {
        out.text.push(format!("a_{} = {}", last.n + 1, last.a_next));
    }
    let tight = cert.entries.iter().filter(|e| e.tier == lalescu_core::Tier::Tight).count();
    out.text.push(format!(
        "{} of {} steps certified decreasing ({} Unknown, {} No, {tight} needed the MPFR tier)",
        cert.count(Verdict::Yes),
        cert.entries.len(),
        cert.count(Verdict::Unknown),
        cert.count(Verdict::No),
    ));
    out.first_failure = json!(cert.first_failure());
    Ok(out)
}

fn resolve_ids(ids: &[String]) -> Result<(Vec<InequalityId>, bool), Error> {
    if ids.iter().any(|s| s == "all") {
        return Ok((InequalityId::ALL.to_vec(), true));
    }
    let ids = ids.iter().map(|s| s.parse()).collect::<Result<Vec<InequalityId>, _>>()?;
    Ok((ids, false))
}

fn describe(report: &InequalityReport) -> String {
    let counts = format!(
        "{} Yes, {} No, {} Unknown",
        report.count(Verdict::Yes),
        report.count(Verdict::No),
        report.count(Verdict::Unknown)
    );
    match &report.range {
        ScanRange::Indices { from, to } => {
            let head = format!("{}: n in [{from}, {to}]: {counts}", report.id);
            match (report.all_hold, report.first_failure(), report.first_valid_n) {
                (true, _, _) => format!("{head}; holds"),
                (false, Some(f), Some(v)) => format!("{head}; first failure at n = {f}, holds from n = {v}"),
                (false, Some(f), None) => format!("{head}; first failure at n = {f}"),
                (false, None, _) => head,
            }
        }
        ScanRange::Grid { points } => {
            let head = format!("{}: {} grid points: {counts}", report.id, points.len());
            match report.first_failure() {
                None => format!("{head}; holds"),
                Some(i) => format!("{head}; first failure at x = {:?}", points[i as usize]),
            }
        }
    }
}

fn report_rows(report: &InequalityReport, rows: &mut Vec<Vec<String>>) {
    let points: Vec<String> = match &report.range {
        ScanRange::Indices { from, .. } => (0..report.verdicts.len() as u64).map(|i| (from + i).to_string()).collect(),
        ScanRange::Grid { points } => points.iter().map(|x| format!("{x:?}")).collect(),
    };
    for (p, v) in points.into_iter().zip(&report.verdicts) {
        rows.push(vec![report.id.clone(), p, v.to_string()]);
    }
}

fn first_failure_of(report: &InequalityReport) -> Value {
    match (&report.range, report.first_failure()) {
        (_, None) => Value::Null,
        (ScanRange::Indices { .. }, Some(n)) => json!({"id": report.id, "n": n}),
        (ScanRange::Grid { points }, Some(i)) => json!({"id": report.id, "x": points[i as usize]}),
    }
}

fn push_report(out: &mut Outcome, report: InequalityReport) {
    out.status = out.status.and(Status::from_verdicts(&report.verdicts));
    out.text.push(describe(&report));
    report_rows(&report, &mut out.rows);
    if out.first_failure.is_null() {
        out.first_failure = first_failure_of(&report);
    }
    out.entries.push(to_value(&report));
}

pub fn audit(config: &RunConfig, policy: PrecisionPolicy) -> Result<Outcome, Error> {
    let (ids, all) = resolve_ids(&config.args)?;
    let auditor = InequalityAuditor::new(policy);
    let mut out = Outcome::new(Status::Pass, vec!["id", "point", "verdict"]);
    let mut skipped = Vec::new();
    for id in ids {
        let report = match (id.kind(), config.from) {
            (Kind::Pointwise { .. }, _) => auditor.audit_clamped(id, 0, config.to)?,
            // An explicit start below a named bound's threshold is an error.
            (_, Some(from)) if !all => auditor.audit_sequence_inequality(id, from, config.to)?,
            (_, from) => {
                let start = from.unwrap_or(0).max(id.min_n());
                if start > config.to {
                    out.text.push(format!("{id}: skipped, asserted only from n = {}", id.min_n()));
                    skipped.push(id.token());
                    continue;
                }
                auditor.audit_clamped(id, start, config.to)?
            }
        };
        push_report(&mut out, report);
    }
    out.extra_summary.push(("skipped", json!(skipped)));
    Ok(out)
}

pub fn crossover(config: &RunConfig, policy: PrecisionPolicy) -> Result<Outcome, Error> {
    let id: InequalityId = config.args[0].parse()?;
    let found = InequalityAuditor::new(policy).find_crossover(id, config.limit)?;
    let status = if found.is_some() { Status::Pass } else { Status::Violation };
    let mut out = Outcome::new(status, vec!["id", "limit", "crossover"]);
    let shown = match found {
        Some(n) => n.to_string(),
        None => format!("none ≤ {}", config.limit),
    };
    out.text.push(shown.clone());
    out.rows.push(vec![id.token().to_string(), config.limit.to_string(), found.map(|n| n.to_string()).unwrap_or_default()]);
    out.entries.push(json!({"id": id.token(), "limit": config.limit, "crossover": found}));
    out.first_failure = match found {
        Some(_) => Value::Null,
        None => json!(config.limit),
    };
    Ok(out)
}

pub fn asymptotics(config: &RunConfig, policy: PrecisionPolicy) -> Result<Outcome, Error> {
    let target: Target = config.args[0].parse()?;
    let schedule: Vec<u64> = match config.args[1..].iter().map(|s| s.parse::<u64>()).collect::<Result<Vec<_>, _>>() {
        Ok(s) if !s.is_empty() => s,
        _ => DEFAULT_SCHEDULE.to_vec(),
    };
    let series = asymptotics::series(target, &schedule, &policy)?;
    let shrinking = series.strictly_shrinking();
    let mut out = Outcome::new(
        if shrinking { Status::Pass } else { Status::Violation },
        vec!["n", "residual", "deviation", "error_bound"],
    );
    out.text.push(format!("{target} -> {} ({} digits)", series.claimed_limit, series.digits));
    let distances = series.distances();
    for (i, s) in series.samples.iter().enumerate() {
        out.text.push(format!("n = {:>8}  {}  deviation {:+.6e}", s.n, s.value, s.deviation));
        out.rows.push(vec![s.n.to_string(), s.value.clone(), format!("{:?}", s.deviation), format!("{:?}", s.error_bound)]);
        out.entries.push(to_value(s));
        if i > 0 && distances[i] >= distances[i - 1] && out.first_failure.is_null() {
            out.first_failure = json!(s.n);
        }
    }
    out.text.push(format!("distance to the limit strictly shrinking: {}", if shrinking { "yes" } else { "no" }));
    out.extra_summary.push(("target", json!(target)));
    out.extra_summary.push(("claimed_limit", json!(series.claimed_limit)));
    Ok(out)
}

pub fn robbins(config: &RunConfig, policy: PrecisionPolicy) -> Result<Outcome, Error> {
    let report = check_robbins(config.to, &policy)?;
    let mut out = Outcome::new(Status::Pass, vec!["id", "point", "verdict"]);
    push_report(&mut out, report);
    Ok(out)
}

pub fn catalog() -> Outcome {
    let mut out = Outcome::new(Status::Pass, vec!["id", "kind", "min_n", "claimed_thresholds", "strict", "statement"]);
    for entry in lalescu_core::audit::catalog() {
        let kind = match entry.kind {
            Kind::Pointwise { domain } => format!("pointwise on {domain}"),
            Kind::Exact => "exact".to_string(),
            Kind::Sequence => "index".to_string(),
        };
        let thresholds: Vec<String> = entry.claimed_thresholds.iter().map(u64::to_string).collect();
        out.text.push(format!("{:<22} {:<28} n >= {:<4} {}", entry.id.token(), kind, entry.min_n, entry.statement));
        out.rows.push(vec![
            entry.id.token().to_string(),
            kind,
            entry.min_n.to_string(),
            thresholds.join(" "),
            entry.strict.to_string(),
            entry.statement.to_string(),
        ]);
        out.entries.push(to_value(&entry));
    }
    out
}
