//! Orchestration from parsed configuration to finished report.

use chrono::{SecondsFormat, Utc};

use ccf_core::conjugate::{FailureCounts, MarginalData};
use ccf_core::imprecise::{
    alpha_learning_table, rate_learning_table, theta_posterior_bounds,
};
use ccf_core::rate::full_rate_report;
use ccf_core::Error as CoreError;

use crate::config::{AnalysisConfig, ElicitationConfig, MarginalConfig};
use crate::report::{
    BoundsEntry, Diagnostics, ElicitationSection, FactorEntry, ReportDocument, TableDocument,
};

/// Failure modes of a run, each tied to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Schema(String),
    #[error("infeasible prior box: {0}")]
    Infeasible(String),
}

impl CliError {
    /// Exit code contract: 2 for unusable input, 3 for a feasibility
    /// violation. Code 4 (non-convergence) is decided by the caller after
    /// the partial report is written, and 0 is success.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Output { .. } | CliError::Schema(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }

    /// Sorts core validation failures into the exit-code buckets: a box
    /// that misses the simplex is a feasibility problem, everything else is
    /// a bad configuration value.
    pub fn from_validation(err: CoreError) -> Self {
        match err {
            CoreError::InfeasibleBox { detail } => CliError::Infeasible(detail),
            other => CliError::Schema(other.to_string()),
        }
    }
}

/// Runs the full analysis for a configuration.
///
/// Optimizer non-convergence is not an error here: the report is returned
/// with `diagnostics.converged == false` and a warning, and the caller
/// decides the exit code after writing it out.
pub fn run_analysis(config: &AnalysisConfig) -> Result<ReportDocument, CliError> {
    let k = config.system_size()?;
    let counts = FailureCounts::new(k, config.counts.clone())
        .map_err(CliError::from_validation)?;
    let hbox = config.dirichlet_box.build(k)?;
    let mut warnings = hbox
        .validate()
        .map_err(CliError::from_validation)?
        .warnings();

    let marginal = match (&config.marginal, &config.gamma_box) {
        (Some(m), Some(g)) => Some((build_marginal_data(m)?, g.build()?)),
        (None, None) => None,
        (Some(_), None) => {
            return Err(CliError::Schema(
                "marginal data requires a gamma_box".to_string(),
            ))
        }
        (None, Some(_)) => {
            return Err(CliError::Schema(
                "gamma_box requires marginal data".to_string(),
            ))
        }
    };

    let settings = config.optimizer.to_settings();
    settings.validate().map_err(CliError::from_validation)?;

    let mut report = match marginal {
        Some((data, jbox)) => {
            let full = full_rate_report(
                k,
                &counts,
                &hbox,
                &data,
                &jbox,
                config.taylor_order,
                &settings,
            )
            .map_err(CliError::from_validation)?;
            warnings.extend(full.warnings.iter().cloned());
            let evaluations =
                full.multiplicities.iter().map(|m| m.evaluations).sum::<usize>();
            ReportDocument {
                generated_at: String::new(),
                config: config.clone(),
                alpha_factors: named_bounds("theta", &full.theta_bounds),
                total_rate: Some(BoundsEntry::new("q_t", full.total_rate_bounds)),
                rate_factors: Some(
                    full.multiplicities
                        .iter()
                        .map(|m| {
                            FactorEntry::new(
                                format!("g_{}", m.multiplicity),
                                m.factor_bounds,
                                m.factor_error,
                            )
                        })
                        .collect(),
                ),
                rates: Some(
                    full.multiplicities
                        .iter()
                        .map(|m| {
                            BoundsEntry::new(format!("q_{}", m.multiplicity), m.rate_bounds)
                        })
                        .collect(),
                ),
                elicitation: None,
                diagnostics: Diagnostics {
                    converged: full.converged,
                    objective_evaluations: evaluations,
                    excess_mean_max: Some(full.excess_mean_max),
                    uninflated_rates: Some(
                        full.multiplicities
                            .iter()
                            .map(|m| {
                                BoundsEntry::new(
                                    format!("q_{}", m.multiplicity),
                                    m.product_bounds,
                                )
                            })
                            .collect(),
                    ),
                },
                warnings: Vec::new(),
            }
        }
        None => {
            let theta = theta_posterior_bounds(&counts, &hbox)
                .map_err(CliError::from_validation)?;
            ReportDocument {
                generated_at: String::new(),
                config: config.clone(),
                alpha_factors: named_bounds("theta", &theta),
                total_rate: None,
                rate_factors: None,
                rates: None,
                elicitation: None,
                diagnostics: Diagnostics {
                    converged: true,
                    objective_evaluations: 0,
                    excess_mean_max: None,
                    uninflated_rates: None,
                },
                warnings: Vec::new(),
            }
        }
    };

    if let Some(request) = config.output.as_ref().and_then(|o| o.elicitation.as_ref()) {
        report.elicitation = Some(build_elicitation(config, request)?);
    }

    report.warnings = warnings;
    report.generated_at = Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true);
    Ok(report)
}

fn build_marginal_data(m: &MarginalConfig) -> Result<MarginalData, CliError> {
    MarginalData::new(m.m, m.t).map_err(CliError::from_validation)
}

/// Builds the tables requested by the config's output options.
pub fn build_elicitation(
    config: &AnalysisConfig,
    request: &ElicitationConfig,
) -> Result<ElicitationSection, CliError> {
    let mut section = ElicitationSection { alpha: None, rate: None };
    if let Some(events) = request.alpha_events {
        let k = config.system_size()?;
        let hbox = config.dirichlet_box.build(k)?;
        section.alpha = Some(TableDocument::from_table(&alpha_learning_table(
            &hbox, events,
        )));
    }
    if let Some(hypothetical) = &request.rate_hypothetical {
        let jbox = config
            .gamma_box
            .as_ref()
            .ok_or_else(|| {
                CliError::Schema(
                    "rate elicitation requires a gamma_box in the config".to_string(),
                )
            })?
            .build()?;
        let data = build_marginal_data(hypothetical)?;
        section.rate = Some(TableDocument::from_table(&rate_learning_table(
            &jbox, &data,
        )));
    }
    Ok(section)
}

fn named_bounds(prefix: &str, bounds: &[ccf_core::Interval]) -> Vec<BoundsEntry> {
    bounds
        .iter()
        .enumerate()
        .map(|(i, &b)| BoundsEntry::new(format!("{prefix}_{}", i + 1), b))
        .collect()
}
