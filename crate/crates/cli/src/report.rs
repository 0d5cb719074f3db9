//! Machine-readable analysis reports.
//!
//! Every numeric quantity is serialized at full precision next to a
//! display string rounded to three significant decimals, so downstream
//! tooling never has to re-derive the human-facing rounding.

use serde::{Deserialize, Serialize};

use ccf_core::imprecise::ElicitationTable;
use ccf_core::Interval;

use crate::config::AnalysisConfig;

/// Complete output of one analysis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    /// RFC 3339 creation time; the only field excluded from determinism
    /// comparisons.
    pub generated_at: String,
    /// The configuration that produced this report.
    pub config: AnalysisConfig,
    /// Posterior expectation bounds of each alpha factor.
    pub alpha_factors: Vec<BoundsEntry>,
    /// Posterior expectation bounds of the marginal rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_rate: Option<BoundsEntry>,
    /// Series-approximated rate factor bounds with certified error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_factors: Option<Vec<FactorEntry>>,
    /// Error-inflated failure rate intervals, the headline result.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<BoundsEntry>>,
    /// Hypothetical-data tables, present when the config requested them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elicitation: Option<ElicitationSection>,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<String>,
}

/// A named interval with its display rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsEntry {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub display: String,
}

/// A rate factor interval together with its series remainder bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// Upper bound on the posterior expectation of the truncation error.
    pub error_bound: f64,
    pub display: String,
}

/// Run statistics and the uninflated products kept for cross-checking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// False when any optimizer search hit its evaluation budget; the
    /// report then carries best-found values.
    pub converged: bool,
    /// Total objective evaluations across all searches.
    pub objective_evaluations: usize,
    /// Largest posterior mean of the excess multiplicity over the box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excess_mean_max: Option<f64>,
    /// Products of the factor and rate intervals without error inflation;
    /// always contained in the reported `rates`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uninflated_rates: Option<Vec<BoundsEntry>>,
}

/// Elicitation tables embedded in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<TableDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<TableDocument>,
}

/// Serialized form of a hypothetical-data table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub rows: Vec<RowDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDocument {
    pub evidence: String,
    pub amount: f64,
    pub expectation: f64,
    pub display: String,
}

/// Rounds to three significant decimals for display; full precision stays
/// in the numeric fields.
pub fn format_significant(x: f64) -> String {
    const DIGITS: i32 = 3;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (DIGITS - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn format_interval(lo: f64, hi: f64) -> String {
    format!("[{}, {}]", format_significant(lo), format_significant(hi))
}

impl BoundsEntry {
    pub fn new(name: impl Into<String>, interval: Interval) -> Self {
        Self {
            name: name.into(),
            lower: interval.lo(),
            upper: interval.hi(),
            display: format_interval(interval.lo(), interval.hi()),
        }
    }
}

impl FactorEntry {
    pub fn new(name: impl Into<String>, interval: Interval, error_bound: f64) -> Self {
        Self {
            name: name.into(),
            lower: interval.lo(),
            upper: interval.hi(),
            error_bound,
            display: format!(
                "{} error <= {}",
                format_interval(interval.lo(), interval.hi()),
                format_significant(error_bound)
            ),
        }
    }
}

impl TableDocument {
    pub fn from_table(table: &ElicitationTable) -> Self {
        Self {
            rows: table
                .rows
                .iter()
                .map(|row| RowDocument {
                    evidence: row.evidence.clone(),
                    amount: row.amount,
                    expectation: row.expectation,
                    display: format_significant(row.expectation),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_rounding() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(0.967391), "0.967");
        assert_eq!(format_significant(0.0278378), "0.0278");
        assert_eq!(format_significant(0.000405), "0.000405");
        assert_eq!(format_significant(14.525), "14.5");
        assert_eq!(format_significant(1.0), "1.00");
        assert_eq!(format_significant(-0.12345), "-0.123");
    }

    #[test]
    fn interval_display() {
        assert_eq!(
            format_interval(0.19040043, 0.24009626),
            "[0.190, 0.240]"
        );
    }

    #[test]
    fn entries_carry_full_precision() {
        let entry = BoundsEntry::new("q_2", Interval::new(0.19040043, 0.24009626).unwrap());
        assert_eq!(entry.lower, 0.19040043);
        assert_eq!(entry.display, "[0.190, 0.240]");
        let factor =
            FactorEntry::new("g_2", Interval::new(0.3596, 0.4105).unwrap(), 0.005742);
        assert_eq!(factor.display, "[0.360, 0.410] error <= 0.00574");
    }
}
