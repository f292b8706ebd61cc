//! Verdicts and the JSON / CSV report formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use bei_algebra::oracle::OracleCaps;
use bei_algebra::BettiTable;
use bei_core::{Bound, Firing, InvariantValue};
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const SCHEMA: u32 = 1;
pub const KERNEL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "exact-match")]
    ExactMatch,
    #[serde(rename = "within-interval")]
    WithinInterval,
    #[serde(rename = "VIOLATION")]
    Violation,
    #[serde(rename = "oracle-unavailable")]
    OracleUnavailable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ExactMatch => "exact-match",
            Verdict::WithinInterval => "within-interval",
            Verdict::Violation => "VIOLATION",
            Verdict::OracleUnavailable => "oracle-unavailable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleValue {
    Value(u32),
    Unavailable(String),
}

impl OracleValue {
    pub fn value(&self) -> Option<u32> {
        match self {
            OracleValue::Value(v) => Some(*v),
            OracleValue::Unavailable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub bound: Bound,
    pub provenance: Vec<Firing>,
}

impl From<&InvariantValue> for Prediction {
    fn from(v: &InvariantValue) -> Self {
        Prediction { bound: v.bound.clone(), provenance: v.firings.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub invariant: String,
    pub predicted: Option<Prediction>,
    pub oracle: Option<OracleValue>,
    pub verdict: Option<Verdict>,
}

impl InvariantCheck {
    pub fn new(invariant: &str, predicted: Option<Prediction>, oracle: Option<OracleValue>) -> Self {
        let verdict = match (&predicted, &oracle) {
            (Some(p), Some(OracleValue::Value(v))) => Some(match p.bound {
                Bound::Exact { value } if value == *v => Verdict::ExactMatch,
                Bound::Interval { lo, hi } if lo <= *v && *v <= hi => Verdict::WithinInterval,
                _ => Verdict::Violation,
            }),
            (Some(_), Some(OracleValue::Unavailable(_))) => Some(Verdict::OracleUnavailable),
            _ => None,
        };
        InvariantCheck { invariant: invariant.into(), predicted, oracle, verdict }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmCheck {
    pub predicted: Option<bool>,
    pub oracle: Option<bool>,
    pub verdict: Option<Verdict>,
}

impl CmCheck {
    pub fn new(predicted: Option<bool>, oracle: Option<bool>) -> Self {
        let verdict = match (predicted, oracle) {
            (Some(a), Some(b)) if a == b => Some(Verdict::ExactMatch),
            (Some(_), Some(_)) => Some(Verdict::Violation),
            (Some(_), None) => Some(Verdict::OracleUnavailable),
            _ => None,
        };
        CmCheck { predicted, oracle, verdict }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema: u32,
    pub kernel_version: String,
    pub expr: String,
    /// Serialization of the realized, labelled graph.
    pub canonical: String,
    pub num_vertices: usize,
    pub m: u32,
    pub characteristic: u32,
    pub order: String,
    pub caps: OracleCaps,
    pub checks: Vec<InvariantCheck>,
    pub cm: Option<CmCheck>,
    pub combinatorial_dim: Option<u32>,
    pub betti: Option<BettiTable>,
    /// `betti` as a Macaulay-style grid: rows j - i, columns i.
    pub betti_grid: Option<String>,
    /// Set when the catalog contradicts itself; counted as a violation.
    pub prediction_error: Option<String>,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl VerdictReport {
    pub fn verdicts(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.checks.iter().filter_map(|c| c.verdict).chain(self.cm.iter().filter_map(|c| c.verdict))
    }

    pub fn violations(&self) -> usize {
        self.verdicts().filter(|v| *v == Verdict::Violation).count() + usize::from(self.prediction_error.is_some())
    }

    pub fn check(&self, invariant: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.invariant == invariant)
    }

    pub fn oracle_value(&self, invariant: &str) -> Option<u32> {
        self.check(invariant)?.oracle.as_ref()?.value()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "expr:  {}", self.expr);
        let _ = writeln!(s, "graph: {}", self.canonical);
        let _ = writeln!(s, "m = {}, |V| = {}, char = {}, order = {}", self.m, self.num_vertices, self.characteristic, self.order);
        if let Some(e) = &self.prediction_error {
            let _ = writeln!(s, "prediction error: {e}");
        }
        for c in &self.checks {
            let pred = c.predicted.as_ref().map_or("-".to_string(), |p| {
                let rules: Vec<&str> = p.provenance.iter().map(|f| f.rule.as_str()).collect();
                format!("{} [{}]", p.bound, rules.join(", "))
            });
            let oracle = match &c.oracle {
                None => "-".to_string(),
                Some(OracleValue::Value(v)) => v.to_string(),
                Some(OracleValue::Unavailable(why)) => format!("unavailable ({why})"),
            };
            let verdict = c.verdict.map_or("", |v| v.as_str());
            let _ = writeln!(s, "{:<6} predicted {pred}  oracle {oracle}  {verdict}", c.invariant);
        }
        if let Some(cm) = &self.cm {
            let show = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
            let verdict = cm.verdict.map_or("", |v| v.as_str());
            let _ = writeln!(s, "{:<6} predicted {}  oracle {}  {verdict}", "cm", show(cm.predicted), show(cm.oracle));
        }
        if let Some(d) = self.combinatorial_dim {
            let _ = writeln!(s, "combinatorial dim {d}");
        }
        if let Some(b) = &self.betti {
            let _ = write!(s, "betti table:\n{}", b.grid());
        }
        let times: Vec<String> = self.timings.iter().map(|(k, v)| format!("{k} {v:.1} ms")).collect();
        let _ = writeln!(s, "timings: {}", times.join(", "));
        s
    }
}

/// One row per invariant and report.
#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    expr: &'a str,
    canonical: &'a str,
    m: u32,
    characteristic: u32,
    invariant: &'a str,
    predicted_lo: Option<u32>,
    predicted_hi: Option<u32>,
    predicted_exact: Option<bool>,
    rules: String,
    oracle: Option<u32>,
    oracle_note: String,
    verdict: &'a str,
}

pub fn write_csv<W: Write>(out: W, reports: &[VerdictReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for c in &r.checks {
            let (lo, hi, exact, rules) = match &c.predicted {
                Some(p) => (
                    Some(p.bound.lo()),
                    Some(p.bound.hi()),
                    Some(p.bound.exact().is_some()),
                    p.provenance.iter().map(|f| f.rule.as_str()).collect::<Vec<_>>().join(";"),
                ),
                None => (None, None, None, String::new()),
            };
            let (oracle, note) = match &c.oracle {
                Some(OracleValue::Value(v)) => (Some(*v), String::new()),
                Some(OracleValue::Unavailable(why)) => (None, why.clone()),
                None => (None, String::new()),
            };
            w.serialize(CsvRow {
                expr: &r.expr,
                canonical: &r.canonical,
                m: r.m,
                characteristic: r.characteristic,
                invariant: &c.invariant,
                predicted_lo: lo,
                predicted_hi: hi,
                predicted_exact: exact,
                rules,
                oracle,
                oracle_note: note,
                verdict: c.verdict.map_or("", |v| v.as_str()),
            })?;
        }
        if let Some(cm) = &r.cm {
            w.serialize(CsvRow {
                expr: &r.expr,
                canonical: &r.canonical,
                m: r.m,
                characteristic: r.characteristic,
                invariant: "cm",
                predicted_lo: cm.predicted.map(u32::from),
                predicted_hi: cm.predicted.map(u32::from),
                predicted_exact: cm.predicted.map(|_| true),
                rules: String::new(),
                oracle: cm.oracle.map(u32::from),
                oracle_note: String::new(),
                verdict: cm.verdict.map_or("", |v| v.as_str()),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}
