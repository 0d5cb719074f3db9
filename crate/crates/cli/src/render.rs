//! Plain-text rendering of reports and elicitation tables.

use std::fmt::Write;

use crate::report::{BoundsEntry, FactorEntry, ReportDocument, TableDocument};

/// Renders a report as an aligned text table, one section per result block.
pub fn render_report(report: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "common-cause failure analysis: k = {}, counts = {:?}",
        report.config.system, report.config.counts
    );
    if let Some(marginal) = &report.config.marginal {
        let unit = marginal.time_unit.as_deref().unwrap_or("time units");
        let _ = writeln!(
            out,
            "marginal data: {} events over {} {unit}",
            marginal.m, marginal.t
        );
    }
    let _ = writeln!(out, "generated at {}", report.generated_at);

    push_bounds_section(&mut out, "alpha factors", &report.alpha_factors);
    if let Some(total) = &report.total_rate {
        push_bounds_section(&mut out, "marginal rate", std::slice::from_ref(total));
    }
    if let Some(factors) = &report.rate_factors {
        push_factor_section(&mut out, report.config.taylor_order, factors);
    }
    if let Some(rates) = &report.rates {
        push_bounds_section(&mut out, "failure rates (error-inflated)", rates);
    }
    if let Some(section) = &report.elicitation {
        if let Some(alpha) = &section.alpha {
            out.push_str("\nalpha-factor elicitation\n");
            out.push_str(&render_table(alpha));
        }
        if let Some(rate) = &section.rate {
            out.push_str("\nmarginal-rate elicitation\n");
            out.push_str(&render_table(rate));
        }
    }

    let _ = writeln!(
        out,
        "\noptimizer: {} objective evaluations, converged = {}",
        report.diagnostics.objective_evaluations, report.diagnostics.converged
    );
    if !report.warnings.is_empty() {
        out.push_str("warnings:\n");
        for warning in &report.warnings {
            let _ = writeln!(out, "  - {warning}");
        }
    }
    out
}

/// Renders one elicitation table with its hypothetical data sizes.
pub fn render_table(table: &TableDocument) -> String {
    let width = table
        .rows
        .iter()
        .map(|r| r.evidence.len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for row in &table.rows {
        let _ = writeln!(
            out,
            "  {:<width$}  amount {:>8}  ->  {}",
            row.evidence, row.amount, row.display
        );
    }
    out
}

fn push_bounds_section(out: &mut String, title: &str, entries: &[BoundsEntry]) {
    let _ = writeln!(out, "\n{title}");
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for entry in entries {
        let _ = writeln!(out, "  {:<width$}  {}", entry.name, entry.display);
    }
}

fn push_factor_section(out: &mut String, order: u32, entries: &[FactorEntry]) {
    let _ = writeln!(out, "\nrate factors (series order {order})");
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for entry in entries {
        let _ = writeln!(out, "  {:<width$}  {}", entry.name, entry.display);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rendered_report_names_every_section() {
        let case = fixtures::network();
        let report = fixtures::reproduce(&case).unwrap();
        let text = render_report(&report);
        assert!(text.contains("alpha factors"));
        assert!(text.contains("marginal rate"));
        assert!(text.contains("rate factors (series order 4)"));
        assert!(text.contains("failure rates"));
        assert!(text.contains("q_2"));
        assert!(text.contains("converged = true"));
    }

    #[test]
    fn warnings_are_listed() {
        let case = fixtures::kelly_atwood();
        let report = fixtures::reproduce(&case).unwrap();
        let text = render_report(&report);
        assert!(text.contains("warnings:"));
        assert!(text.contains("0.0270"));
    }
}
