//! Polynomial approximation of the rate factors with certified remainders.
//!
//! On the simplex the mean multiplicity satisfies `sum_l l theta_l = 1 + x`
//! with `x = sum_{l>=2} (l-1) theta_l >= 0`, so each rate factor
//! `g_j = c j theta_j / (1 + x)` can be expanded through the geometric
//! series of `1/(1+x)`. Truncating at order `p` yields a polynomial, and the
//! discarded tail is bounded by the single term `c j theta_j x^(p+1)`:
//!
//! - even `p`: `0 <= series - g_j <= c j theta_j x^(p+1)`,
//! - odd `p`:  `0 <= g_j - series <= c j theta_j x^(p+1)`,
//!
//! valid for every `x >= 0`, not just inside the radius of convergence.
//! Taking posterior expectations preserves both inequalities, which is what
//! makes the reported error bounds certificates rather than heuristics.

use serde::{Deserialize, Serialize};

use crate::conjugate::{posterior_poly_expectation, DirichletHyper, FailureCounts};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::model::{binomial, SystemSize};
use crate::poly::MonomialPoly;

/// Largest allowed expansion order.
///
/// Together with the system-size cap this bounds the series at
/// `C(order + k - 1, k - 1) <= 490_314` monomials, keeping every expansion
/// cheap enough for thousands of optimizer evaluations.
pub const MAX_EXPANSION_ORDER: u32 = 8;

/// Default expansion order; fourth order keeps the remainder below one
/// percent for posteriors with moderate multi-component mass.
pub const DEFAULT_EXPANSION_ORDER: u32 = 4;

/// Which side of the true value the truncated series lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproxSide {
    /// Series >= true value (even order).
    Over,
    /// Series <= true value (odd order).
    Under,
}

/// Truncated geometric series `sum_{m=0}^{order} (-x)^m` for `1/(1+x)`,
/// evaluated in Horner form.
pub fn truncated_reciprocal(x: f64, order: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..order {
        acc = 1.0 - x * acc;
    }
    acc
}

/// Order-`p` polynomial surrogate for one rate factor, with the remainder
/// term that certifies it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFactorSeries {
    system: SystemSize,
    multiplicity: usize,
    order: u32,
    main_poly: MonomialPoly,
    error_poly: MonomialPoly,
    side: ApproxSide,
}

impl RateFactorSeries {
    pub fn system(&self) -> SystemSize {
        self.system
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The truncated series for `g_j`; total degree `order + 1` (except for
    /// `k = 1`, where every rate factor is constant).
    pub fn main_poly(&self) -> &MonomialPoly {
        &self.main_poly
    }

    /// Nonnegative polynomial dominating `|g_j - main_poly|` on the simplex;
    /// total degree `order + 2`.
    pub fn error_poly(&self) -> &MonomialPoly {
        &self.error_poly
    }

    pub fn side(&self) -> ApproxSide {
        self.side
    }
}

/// Expands the rate factor `g_j` to the given order.
pub fn rate_factor_series(k: SystemSize, j: usize, order: u32) -> Result<RateFactorSeries> {
    if j == 0 || j > k.get() {
        return Err(Error::Multiplicity { j, k: k.get() });
    }
    if order > MAX_EXPANSION_ORDER {
        return Err(Error::ExpansionOrder { got: order, max: MAX_EXPANSION_ORDER });
    }
    let n = k.get();
    let scale = j as f64 / binomial(n - 1, j - 1) as f64;
    let theta_j = MonomialPoly::var(n, j - 1)?;
    let excess = MonomialPoly::linear(
        &(1..=n).map(|l| (l - 1) as f64).collect::<Vec<_>>(),
    )?;
    let mut series = MonomialPoly::constant(n, 1.0);
    let mut power = MonomialPoly::constant(n, 1.0);
    for m in 1..=order {
        power = power.mul(&excess)?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        series = series.add(&power.scale(sign))?;
    }
    power = power.mul(&excess)?;
    let main_poly = theta_j.mul(&series)?.scale(scale);
    let error_poly = theta_j.mul(&power)?.scale(scale);
    let side = if order.is_multiple_of(2) { ApproxSide::Over } else { ApproxSide::Under };
    Ok(RateFactorSeries { system: k, multiplicity: j, order, main_poly, error_poly, side })
}

/// Posterior expectation of a rate-factor series under one fixed prior,
/// together with its certified error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedRateFactor {
    /// Posterior expectation of the truncated series.
    pub value: f64,
    /// Posterior expectation of the remainder bound; always nonnegative.
    pub error_bound: f64,
    pub side: ApproxSide,
}

impl ExpectedRateFactor {
    /// Interval certain to contain the exact posterior expectation of
    /// `g_j`, floored at zero.
    pub fn enclosure(&self) -> Interval {
        let (lo, hi) = match self.side {
            ApproxSide::Over => (self.value - self.error_bound, self.value),
            ApproxSide::Under => (self.value, self.value + self.error_bound),
        };
        Interval::new(lo.max(0.0), hi.max(0.0)).expect("error bound is nonnegative")
    }
}

/// Computes the posterior expectation of the series and of its remainder
/// bound under a single Dirichlet prior.
pub fn expected_rate_factor(
    counts: &FailureCounts,
    prior: &DirichletHyper,
    series: &RateFactorSeries,
) -> Result<ExpectedRateFactor> {
    let value = posterior_poly_expectation(&series.main_poly, counts, prior)?;
    let error_bound = posterior_poly_expectation(&series.error_poly, counts, prior)?;
    Ok(ExpectedRateFactor { value, error_bound, side: series.side })
}
