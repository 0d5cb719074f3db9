//! End-to-end failure-rate bounds.
//!
//! Combines the three ingredients into per-multiplicity rate intervals:
//! lower/upper posterior expectations of the rate factors `g_j` (series
//! approximation optimized over the Dirichlet box, plus the maximized
//! remainder bound), and lower/upper posterior expectations of the marginal
//! rate `q_t` (closed form over the Gamma box). Since the two data channels
//! are independent, `q_j = g_j q_t` multiplies endpoint-wise.

use serde::{Deserialize, Serialize};

use crate::conjugate::{FailureCounts, MarginalData};
use crate::error::Result;
use crate::imprecise::{rate_posterior_bounds, theta_posterior_bounds, DirichletBox, GammaBox};
use crate::interval::Interval;
use crate::model::SystemSize;
use crate::optimize::{optimize_posterior_expectation, Direction, OptimizerSettings};
use crate::poly::MonomialPoly;
use crate::taylor::rate_factor_series;

/// Posterior mass of the excess multiplicity above which the series loses
/// practical accuracy; crossing it triggers a warning (the bounds stay
/// valid).
pub const EXCESS_MEAN_WARN_THRESHOLD: f64 = 0.5;

/// Bounds for one failure multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityBounds {
    /// Failure multiplicity `j`.
    pub multiplicity: usize,
    /// Lower/upper posterior expectation of the series approximation to
    /// `g_j` over the Dirichlet box.
    pub factor_bounds: Interval,
    /// Largest posterior expectation of the series remainder over the box.
    pub factor_error: f64,
    /// Error-inflated rate interval: `[(g_lo - err) q_t_lo, (g_hi + err)
    /// q_t_hi]`, floored at zero. This is the reported `q_j` interval.
    pub rate_bounds: Interval,
    /// Uninflated product interval, for diagnostics.
    pub product_bounds: Interval,
    /// Objective evaluations spent on this multiplicity (all three
    /// searches).
    pub evaluations: usize,
    /// False when any of the three searches hit its evaluation budget.
    pub converged: bool,
}

/// Complete inference output for one data set and prior box pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBoundsReport {
    pub system: SystemSize,
    pub order: u32,
    /// Closed-form posterior expectation bounds of each alpha factor.
    pub theta_bounds: Vec<Interval>,
    /// Closed-form posterior expectation bounds of the marginal rate.
    pub total_rate_bounds: Interval,
    pub multiplicities: Vec<MultiplicityBounds>,
    /// Largest posterior mean of the excess multiplicity
    /// `x = sum_{l>=2} (l-1) theta_l` over the box.
    pub excess_mean_max: f64,
    /// False when any search hit its evaluation budget.
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// Error-inflated product of a rate-factor interval and a marginal-rate
/// interval, floored at zero.
pub fn rate_product_bounds(
    factor: Interval,
    factor_error: f64,
    total: Interval,
) -> Result<Interval> {
    let error = factor_error.max(0.0);
    let lo = (factor.lo() - error).max(0.0) * total.lo();
    let hi = (factor.hi() + error).max(0.0) * total.hi();
    Interval::new(lo, hi)
}

/// Computes the full report: alpha-factor bounds, marginal-rate bounds, and
/// per-multiplicity rate intervals with certified series error.
pub fn full_rate_report(
    k: SystemSize,
    counts: &FailureCounts,
    hbox: &DirichletBox,
    data: &MarginalData,
    jbox: &GammaBox,
    order: u32,
    settings: &OptimizerSettings,
) -> Result<RateBoundsReport> {
    let theta_bounds = theta_posterior_bounds(counts, hbox)?;
    let total_rate_bounds = rate_posterior_bounds(data, jbox);

    let mut multiplicities = Vec::with_capacity(k.get());
    let mut converged = true;
    for j in 1..=k.get() {
        let series = rate_factor_series(k, j, order)?;
        let lo = optimize_posterior_expectation(
            series.main_poly(),
            counts,
            hbox,
            Direction::Minimize,
            settings,
        )?;
        let hi = optimize_posterior_expectation(
            series.main_poly(),
            counts,
            hbox,
            Direction::Maximize,
            settings,
        )?;
        let err = optimize_posterior_expectation(
            series.error_poly(),
            counts,
            hbox,
            Direction::Maximize,
            settings,
        )?;
        let factor_bounds = Interval::new(lo.value.min(hi.value), hi.value.max(lo.value))?;
        let factor_error = err.value.max(0.0);
        let rate_bounds = rate_product_bounds(factor_bounds, factor_error, total_rate_bounds)?;
        let product_bounds = rate_product_bounds(factor_bounds, 0.0, total_rate_bounds)?;
        let ok = lo.converged && hi.converged && err.converged;
        converged &= ok;
        multiplicities.push(MultiplicityBounds {
            multiplicity: j,
            factor_bounds,
            factor_error,
            rate_bounds,
            product_bounds,
            evaluations: lo.evaluations + hi.evaluations + err.evaluations,
            converged: ok,
        });
    }

    // Accuracy watchdog: maximize the posterior mean of the excess
    // multiplicity over the box.
    let excess = MonomialPoly::linear(
        &(1..=k.get()).map(|l| (l - 1) as f64).collect::<Vec<_>>(),
    )?;
    let excess_out =
        optimize_posterior_expectation(&excess, counts, hbox, Direction::Maximize, settings)?;
    converged &= excess_out.converged;
    let excess_mean_max = excess_out.value;

    let mut warnings = Vec::new();
    if excess_mean_max > EXCESS_MEAN_WARN_THRESHOLD {
        warnings.push(format!(
            "posterior mean of the excess multiplicity reaches {excess_mean_max:.3}; \
             series accuracy degrades above {EXCESS_MEAN_WARN_THRESHOLD} even though \
             the error bounds remain valid"
        ));
    }
    if !converged {
        warnings.push(
            "optimizer hit its evaluation budget; reported bounds are best-found values"
                .to_string(),
        );
    }

    Ok(RateBoundsReport {
        system: k,
        order,
        theta_bounds,
        total_rate_bounds,
        multiplicities,
        excess_mean_max,
        converged,
        warnings,
    })
}
