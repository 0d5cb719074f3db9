//! Built-in case studies.
//!
//! Two configurations from the reliability literature, shipped so the full
//! pipeline can be exercised and checked without authoring a config file.

use crate::config::{
    AnalysisConfig, DirichletBoxConfig, GammaBoxConfig, MarginalConfig, OptimizerConfig,
};
use crate::pipeline::{run_analysis, CliError};
use crate::report::ReportDocument;
use ccf_core::taylor::DEFAULT_EXPANSION_ORDER;

/// A shipped scenario: its configuration plus notes appended to the report
/// warnings (known discrepancies in the published source values).
pub struct CaseStudy {
    pub name: &'static str,
    pub config: AnalysisConfig,
    pub notes: Vec<String>,
}

/// Emergency diesel generator data: 36 common-cause events across a
/// four-component group, analyzed with a Dirichlet box alone (no marginal
/// rate data). The box pairs a concentration range of [1, 10] with wide
/// prior mean bounds around a nominal single-failure fraction of 0.95.
pub fn kelly_atwood() -> CaseStudy {
    CaseStudy {
        name: "kelly-atwood",
        config: AnalysisConfig {
            system: 4,
            counts: vec![35, 1, 0, 0],
            marginal: None,
            dirichlet_box: DirichletBoxConfig {
                s_lo: 1.0,
                s_hi: 10.0,
                t_lo: vec![0.95, 0.0, 0.0, 0.0],
                t_hi: vec![1.0, 0.03, 0.015, 0.005],
            },
            gamma_box: None,
            taylor_order: DEFAULT_EXPANSION_ORDER,
            optimizer: OptimizerConfig::default(),
            output: None,
        },
        notes: vec![
            "the lower bound on theta_2 evaluates to 1/46 = 0.0217; the published \
             reference prints 0.0270 for this quantity, which is not consistent \
             with the bound formula at either concentration endpoint"
                .to_string(),
        ],
    }
}

/// Two redundant network switches: 11 common-cause events (8 single, 3
/// double), 14 failures of one switch over 24 years for the marginal rate,
/// and moderate prior boxes on both channels.
pub fn network() -> CaseStudy {
    CaseStudy {
        name: "network",
        config: AnalysisConfig {
            system: 2,
            counts: vec![8, 3],
            marginal: Some(MarginalConfig {
                m: 14,
                t: 24.0,
                time_unit: Some("years".to_string()),
            }),
            dirichlet_box: DirichletBoxConfig {
                s_lo: 1.0,
                s_hi: 4.0,
                t_lo: vec![0.8, 0.1],
                t_hi: vec![0.9, 0.2],
            },
            gamma_box: Some(GammaBoxConfig {
                u_lo: 3.0,
                u_hi: 3.0,
                v_lo: 0.175,
                v_hi: 0.525,
            }),
            taylor_order: DEFAULT_EXPANSION_ORDER,
            optimizer: OptimizerConfig::default(),
            output: None,
        },
        notes: Vec::new(),
    }
}

/// Looks a case study up by its CLI name.
pub fn by_name(name: &str) -> Option<CaseStudy> {
    match name {
        "kelly-atwood" => Some(kelly_atwood()),
        "network" => Some(network()),
        _ => None,
    }
}

/// Runs a case study and appends its notes to the report warnings.
pub fn reproduce(case: &CaseStudy) -> Result<ReportDocument, CliError> {
    let mut report = run_analysis(&case.config)?;
    report.warnings.extend(case.notes.iter().cloned());
    Ok(report)
}
