use serde::{Deserialize, Serialize};

use crate::interval::Verdict;

/// What a report scanned: a contiguous index range or a grid of reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanRange {
    Indices { from: u64, to: u64 },
    Grid { points: Vec<f64> },
}

/// Per-point verdicts for one inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: String,
    pub range: ScanRange,
    pub verdicts: Vec<Verdict>,
    /// Least scanned index from which every later scanned index holds.
    pub first_valid_n: Option<u64>,
    pub all_hold: bool,
    /// Thresholds from which the inequality is asserted to hold.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claimed_thresholds: Vec<u64>,
}

impl InequalityReport {
    /// Report over the indices `from, from + 1, ...`, one verdict each.
    pub fn from_indices(id: impl Into<String>, from: u64, verdicts: Vec<Verdict>) -> Self {
        let to = from + verdicts.len() as u64;
        let trailing = verdicts.iter().rev().take_while(|v| v.is_yes()).count() as u64;
        let first_valid_n = (trailing > 0).then(|| to - trailing);
        Self {
            id: id.into(),
            range: ScanRange::Indices { from, to: to.saturating_sub(1).max(from) },
            all_hold: verdicts.iter().all(|v| v.is_yes()),
            verdicts,
            first_valid_n,
            claimed_thresholds: Vec::new(),
        }
    }

    pub fn from_grid(id: impl Into<String>, points: Vec<f64>, verdicts: Vec<Verdict>) -> Self {
        Self {
            id: id.into(),
            all_hold: verdicts.iter().all(|v| v.is_yes()),
            range: ScanRange::Grid { points },
            verdicts,
            first_valid_n: None,
            claimed_thresholds: Vec::new(),
        }
    }

    pub fn with_thresholds(mut self, thresholds: Vec<u64>) -> Self {
        self.claimed_thresholds = thresholds;
        self
    }

    /// Verdict at index `n` for index-range reports.
    pub fn verdict_at(&self, n: u64) -> Option<Verdict> {
        match self.range {
            ScanRange::Indices { from, .. } if n >= from => {
                self.verdicts.get((n - from) as usize).copied()
            }
            _ => None,
        }
    }

    /// Index (or grid position) of the first verdict that is not `Yes`.
    pub fn first_failure(&self) -> Option<u64> {
        let pos = self.verdicts.iter().position(|v| !v.is_yes())? as u64;
        match self.range {
            ScanRange::Indices { from, .. } => Some(from + pos),
            ScanRange::Grid { .. } => Some(pos),
        }
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.verdicts.iter().filter(|&&v| v == verdict).count()
    }
}
