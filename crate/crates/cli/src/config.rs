//! JSON analysis configuration.
//!
//! The schema is strict: unknown keys and type mismatches are rejected at
//! parse time, and every referenced model invariant is re-checked when the
//! configuration is turned into core types, before any computation starts.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use ccf_core::imprecise::{DirichletBox, GammaBox};
use ccf_core::optimize::OptimizerSettings;
use ccf_core::taylor::DEFAULT_EXPANSION_ORDER;
use ccf_core::{Interval, SystemSize};

use crate::pipeline::CliError;

/// One full analysis: the system, the observed data, and the prior boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Number of redundant components `k`.
    pub system: usize,
    /// Common-cause event counts by multiplicity; length `k`.
    pub counts: Vec<u64>,
    /// Failure data for one specific component, driving the marginal rate.
    /// Requires `gamma_box`; omit both for an alpha-factor-only analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal: Option<MarginalConfig>,
    /// Dirichlet hyperparameter box for the alpha factors.
    pub dirichlet_box: DirichletBoxConfig,
    /// Gamma hyperparameter box for the marginal rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_box: Option<GammaBoxConfig>,
    /// Series expansion order for the rate factors.
    #[serde(default = "default_taylor_order")]
    pub taylor_order: u32,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// Marginal failure data: `m` events over exposure time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalConfig {
    /// Observed failure events of the component.
    pub m: u64,
    /// Exposure time over which the events were counted.
    pub t: f64,
    /// Label for the time unit; informational only, never converted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_unit: Option<String>,
}

/// Bounds on the Dirichlet concentration `s` and prior means `t_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletBoxConfig {
    pub s_lo: f64,
    pub s_hi: f64,
    pub t_lo: Vec<f64>,
    pub t_hi: Vec<f64>,
}

/// Bounds on the Gamma prior weight `u` and prior mean `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaBoxConfig {
    pub u_lo: f64,
    pub u_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

/// Search settings, mirroring the library defaults field by field so a
/// config may override any subset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "default_grid_points")]
    pub grid_points_per_dim: usize,
    #[serde(default = "default_refinement_tolerance")]
    pub refinement_tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_multistart_count")]
    pub multistart_count: usize,
}

/// Extra report content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Embed hypothetical-data elicitation tables in the report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elicitation: Option<ElicitationConfig>,
}

/// Which elicitation tables to embed, with their hypothetical data sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElicitationConfig {
    /// Hypothetical event count for the alpha-factor table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_events: Option<u64>,
    /// Hypothetical marginal data for the rate table; needs `gamma_box`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_hypothetical: Option<MarginalConfig>,
}

fn default_taylor_order() -> u32 {
    DEFAULT_EXPANSION_ORDER
}

fn default_grid_points() -> usize {
    OptimizerSettings::default().grid_points_per_dim
}

fn default_refinement_tolerance() -> f64 {
    OptimizerSettings::default().refinement_tolerance
}

fn default_max_iterations() -> usize {
    OptimizerSettings::default().max_iterations
}

fn default_multistart_count() -> usize {
    OptimizerSettings::default().multistart_count
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let s = OptimizerSettings::default();
        Self {
            grid_points_per_dim: s.grid_points_per_dim,
            refinement_tolerance: s.refinement_tolerance,
            max_iterations: s.max_iterations,
            multistart_count: s.multistart_count,
        }
    }
}

impl OptimizerConfig {
    pub fn to_settings(self) -> OptimizerSettings {
        OptimizerSettings {
            grid_points_per_dim: self.grid_points_per_dim,
            refinement_tolerance: self.refinement_tolerance,
            max_iterations: self.max_iterations,
            multistart_count: self.multistart_count,
        }
    }
}

impl AnalysisConfig {
    /// Reads and parses a config file, rejecting unknown keys.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    pub fn system_size(&self) -> Result<SystemSize, CliError> {
        SystemSize::new(self.system).map_err(CliError::from_validation)
    }
}

impl DirichletBoxConfig {
    pub fn build(&self, k: SystemSize) -> Result<DirichletBox, CliError> {
        if self.t_lo.len() != self.t_hi.len() {
            return Err(CliError::Schema(format!(
                "dirichlet_box.t_lo has {} entries but t_hi has {}",
                self.t_lo.len(),
                self.t_hi.len()
            )));
        }
        let s_range =
            Interval::new(self.s_lo, self.s_hi).map_err(CliError::from_validation)?;
        let t_ranges: Result<Vec<Interval>, _> = self
            .t_lo
            .iter()
            .zip(&self.t_hi)
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect();
        let t_ranges = t_ranges.map_err(CliError::from_validation)?;
        DirichletBox::new(k, s_range, t_ranges).map_err(CliError::from_validation)
    }
}

impl GammaBoxConfig {
    pub fn build(&self) -> Result<GammaBox, CliError> {
        let u_range =
            Interval::new(self.u_lo, self.u_hi).map_err(CliError::from_validation)?;
        let v_range =
            Interval::new(self.v_lo, self.v_hi).map_err(CliError::from_validation)?;
        GammaBox::new(u_range, v_range).map_err(CliError::from_validation)
    }
}
