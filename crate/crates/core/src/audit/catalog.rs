use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Where a pointwise inequality is asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `x > 0`
    Positive,
    /// `-1 < x < 1`
    UnitOpen,
}

impl Domain {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::Positive => x > 0.0,
            Domain::UnitOpen => x > -1.0 && x < 1.0,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Positive => f.write_str("x > 0"),
            Domain::UnitOpen => f.write_str("-1 < x < 1"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    /// A bound in a real variable, checked on a grid.
    Pointwise { domain: Domain },
    /// An integer identity checked with big integers.
    Exact,
    /// A bound on `x_n`-derived quantities, checked per index.
    Sequence,
}

macro_rules! inequality_ids {
    ($($variant:ident => $token:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(into = "&'static str", try_from = "String")]
        pub enum InequalityId {
            $($variant),*
        }

        impl InequalityId {
            pub const ALL: &'static [InequalityId] = &[$(InequalityId::$variant),*];

            pub fn token(self) -> &'static str {
                match self {
                    $(InequalityId::$variant => $token),*
                }
            }
        }
    };
}

inequality_ids! {
    LogLowerQuadratic => "log_lower_quadratic",
    LogUpperLinear => "log_upper_linear",
    LogLowerQuartic => "log_lower_quartic",
    LogUpperCubic => "log_upper_cubic",
    RecipLower => "recip_lower",
    RecipUpper => "recip_upper",
    ExpGeom => "exp_geom",
    CoshGeom => "cosh_geom",
    CoshFactorial => "cosh_factorial",
    XnUpperFull => "xn_upper_full",
    XnUpperSimple => "xn_upper_simple",
    XnLowerFull => "xn_lower_full",
    XnLowerSimple => "xn_lower_simple",
    DiffUpper => "diff_upper",
    DiffLower => "diff_lower",
    DiffSquared => "diff_squared",
    SumUpper => "sum_upper",
    SumNonneg => "sum_nonneg",
    LogN16 => "log_n16",
    SqBound2048 => "sq_bound_2048",
    Poly468 => "poly_468",
    BracketNegative => "bracket_negative",
    FinalProduct => "final_product",
}

/// Catalog metadata for one inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: InequalityId,
    pub statement: &'static str,
    #[serde(flatten)]
    pub kind: Kind,
    /// Least index from which the bound is asserted; zero for pointwise bounds.
    pub min_n: u64,
    /// Every threshold at which the bound is asserted to start.
    pub claimed_thresholds: &'static [u64],
    pub strict: bool,
}

impl InequalityId {
    pub fn entry(self) -> CatalogEntry {
        use InequalityId::*;
        let pos = Kind::Pointwise { domain: Domain::Positive };
        let unit = Kind::Pointwise { domain: Domain::UnitOpen };
        let seq = Kind::Sequence;
        let (statement, kind, min_n, claimed_thresholds, strict): (_, _, _, &'static [u64], _) = match self {
            LogLowerQuadratic => ("x - x^2/2 <= ln(1+x)", pos, 0, &[], false),
            LogUpperLinear => ("ln(1+x) <= x", pos, 0, &[], false),
            LogLowerQuartic => ("x - x^2/2 + x^3/3 - x^4/4 <= ln(1+x)", pos, 0, &[], false),
            LogUpperCubic => ("ln(1+x) <= x - x^2/2 + x^3/3", pos, 0, &[], false),
            RecipLower => ("1 - x <= 1/(1+x)", pos, 0, &[], false),
            RecipUpper => ("1/(1+x) <= 1 - x + x^2", pos, 0, &[], false),
            ExpGeom => ("e^x <= 1/(1-x)", unit, 0, &[], false),
            CoshGeom => ("cosh x <= 1/(1 - x^2/2)", unit, 0, &[], false),
            CoshFactorial => ("2^n <= (2n)!", Kind::Exact, 0, &[0], false),
            XnUpperFull => (
                "x_n <= 1/n - (ln n + ln 2pi)/(2n(n+1)) - 83/(144n^3) + 3/(2n^4)",
                seq,
                2,
                &[2],
                false,
            ),
            XnUpperSimple => ("x_n <= 1/n - (ln n + ln 2pi)/(2n(n+1))", seq, 3, &[3], false),
            XnLowerFull => (
                "x_n >= 1/n - (ln n + ln 2pi)/(2n(n+1)) - 85/(144n^3) - 49/(144n^4)",
                seq,
                1,
                &[1],
                false,
            ),
            XnLowerSimple => ("x_n >= 1/n - (ln n + ln 2pi)/(2n(n+1)) - 1/n^3", seq, 1, &[1], false),
            DiffUpper => (
                "x_{n+1} - x_n <= -1/n^2 + (ln n + 74/144 + ln 2pi)/n^3 + 6/n^4",
                seq,
                4,
                &[4],
                false,
            ),
            DiffLower => ("-1/n^2 <= x_{n+1} - x_n", seq, 1, &[1, 4], false),
            DiffSquared => ("(x_{n+1} - x_n)^2 <= 1/n^4", seq, 4, &[4], false),
            SumUpper => (
                "x_{n+1} + x_n <= 2/n - (ln n + 15/16 + ln 2pi)/n^2 <= 2/n",
                seq,
                271,
                &[271],
                false,
            ),
            SumNonneg => ("0 <= x_{n+1} + x_n", seq, 271, &[271], false),
            LogN16 => ("ln n + 2 + 2 ln 2pi + ln(n+1) <= n/16", seq, 271, &[271], false),
            SqBound2048 => (
                "((16 ln n + 15 + 16 ln 2pi)^2 + 1024)/(2048n^4) <= 1/(32n^3)",
                seq,
                304,
                &[304],
                false,
            ),
            Poly468 => ("13/(4n^4) <= 1/(144n^3)", seq, 468, &[468], false),
            BracketNegative => (
                "-25/144 - 1/(4n) + (ln n/2 + 101/288 + ln(2pi)/2)/n^2 < 0",
                seq,
                3,
                &[3],
                true,
            ),
            FinalProduct => (
                "F_n <= 2(1 - 25/(144n^3) - 1/(4n^4) + (ln n/2 + 101/288 + ln(2pi)/2)/n^5) \
                 - (ln n + 76/144 + ln 2pi)(ln n + 14/16 + ln 2pi)/(2n^6) < 2, \
                 F_n = 2 exp((x_{n+1}-x_n)/2) cosh((x_{n+1}+x_n)/2)",
                seq,
                396,
                &[396, 468],
                true,
            ),
        };
        CatalogEntry { id: self, statement, kind, min_n, claimed_thresholds, strict }
    }

    pub fn kind(self) -> Kind {
        self.entry().kind
    }

    pub fn min_n(self) -> u64 {
        self.entry().min_n
    }

    pub fn is_pointwise(self) -> bool {
        matches!(self.kind(), Kind::Pointwise { .. })
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.token() == s)
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

impl From<InequalityId> for &'static str {
    fn from(id: InequalityId) -> Self {
        id.token()
    }
}

impl TryFrom<String> for InequalityId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    InequalityId::ALL.iter().map(|id| id.entry()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_three_distinct_tokens() {
        let tokens: std::collections::BTreeSet<_> = InequalityId::ALL.iter().map(|i| i.token()).collect();
        assert_eq!(tokens.len(), 23);
        for id in InequalityId::ALL {
            assert_eq!(id.token().parse::<InequalityId>().unwrap(), *id);
            let json = serde_json::to_string(id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.token()));
        }
        assert!("log_n17".parse::<InequalityId>().is_err());
    }

    #[test]
    fn thresholds_start_at_min_n() {
        for entry in catalog() {
            if let Some(first) = entry.claimed_thresholds.first() {
                assert_eq!(*first, entry.min_n, "{}", entry.id);
            }
        }
    }
}
