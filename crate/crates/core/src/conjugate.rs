//! Conjugate Bayesian updating for the two independent data channels.
//!
//! Alpha factors get a Dirichlet prior updated by multinomial event counts;
//! the marginal rate gets a Gamma prior updated by a Poisson event count
//! over an exposure time. Posterior moments of both are closed-form, so no
//! sampling is involved anywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SystemSize, SIMPLEX_TOLERANCE};
use crate::poly::MonomialPoly;

/// Observed common-cause events by multiplicity: `counts[j-1]` events
/// involved exactly `j` components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    counts: Vec<u64>,
}

impl FailureCounts {
    pub fn new(k: SystemSize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != k.get() {
            return Err(Error::Dimension { expected: k.get(), got: counts.len() });
        }
        Ok(Self { counts })
    }

    pub fn count(&self, j: usize) -> u64 {
        self.counts[j - 1]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Dirichlet prior in mean parametrization: concentration `s > 0` and mean
/// vector `t` on the simplex, so the density is proportional to
/// `prod_j theta_j^(s t_j - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletHyper {
    s: f64,
    t: Vec<f64>,
}

impl DirichletHyper {
    pub fn new(s: f64, t: Vec<f64>) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::NotFinite { name: "concentration s", value: s });
        }
        if s <= 0.0 {
            return Err(Error::NotPositive { name: "concentration s", value: s });
        }
        for &tj in &t {
            if !tj.is_finite() {
                return Err(Error::NotFinite { name: "prior mean t_j", value: tj });
            }
            if !(0.0..=1.0).contains(&tj) {
                return Err(Error::OutsideUnit { name: "prior mean t_j", value: tj });
            }
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotASimplex { sum, tolerance: SIMPLEX_TOLERANCE });
        }
        Ok(Self { s, t })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Uniform Dirichlet prior: every pseudo-count `s t_j` equals one.
pub fn uniform_prior(k: SystemSize) -> DirichletHyper {
    let k_f = k.get() as f64;
    DirichletHyper { s: k_f, t: vec![1.0 / k_f; k.get()] }
}

/// Jeffreys-style Dirichlet prior: every pseudo-count `s t_j` equals one
/// half, with the same prior weight `s = k` as the uniform prior.
///
/// The mean vector is deliberately sub-normalized (it sums to one half):
/// this follows the reliability-literature convention of halving the
/// uniform pseudo-counts while keeping the denominator weight, rather than
/// the textbook Dirichlet(1/2, ..., 1/2). Posterior moments remain
/// well-defined since they only read the pseudo-counts `s t_j` and `s`.
pub fn jeffreys_prior(k: SystemSize) -> DirichletHyper {
    let k_f = k.get() as f64;
    DirichletHyper { s: k_f, t: vec![0.5 / k_f; k.get()] }
}

/// Constrained noninformative prior for an elicited mean vector: the prior
/// mean is matched exactly and the concentration is set so that the first
/// component's marginal Beta prior carries half a pseudo-observation,
/// `s (1 - t_1) = 1/2`.
pub fn constrained_noninformative_prior(mean: &[f64]) -> Result<DirichletHyper> {
    let k = SystemSize::new(mean.len())?;
    let _ = k;
    let probe = DirichletHyper::new(1.0, mean.to_vec())?;
    let spread = 1.0 - probe.t[0];
    if spread <= 0.0 {
        return Err(Error::NotPositive { name: "1 - t_1", value: spread });
    }
    DirichletHyper::new(0.5 / spread, mean.to_vec())
}

/// Rising factorial `x (x+1) ... (x+m-1)`, with the empty product equal to
/// one.
pub fn rising_factorial(x: f64, m: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..m {
        acc *= x + i as f64;
    }
    acc
}

/// Posterior mean of each alpha factor: `(n_j + s t_j) / (N + s)`.
pub fn posterior_mean_theta(counts: &FailureCounts, prior: &DirichletHyper) -> Result<Vec<f64>> {
    if counts.len() != prior.len() {
        return Err(Error::Dimension { expected: prior.len(), got: counts.len() });
    }
    let total = counts.total() as f64 + prior.s;
    Ok(counts
        .as_slice()
        .iter()
        .zip(&prior.t)
        .map(|(&n, &t)| (n as f64 + prior.s * t) / total)
        .collect())
}

/// Posterior expectation of a polynomial in the alpha factors.
///
/// Each monomial's expectation is a ratio of rising factorials in the
/// posterior pseudo-counts; linearity does the rest.
pub fn posterior_poly_expectation(
    poly: &MonomialPoly,
    counts: &FailureCounts,
    prior: &DirichletHyper,
) -> Result<f64> {
    if counts.len() != prior.len() {
        return Err(Error::Dimension { expected: prior.len(), got: counts.len() });
    }
    if poly.num_vars() != prior.len() {
        return Err(Error::Dimension { expected: prior.len(), got: poly.num_vars() });
    }
    Ok(poly_expectation_raw(poly, counts.as_slice(), prior.s, &prior.t))
}

/// Expectation kernel without hyperparameter validation; the optimizer calls
/// this with simplex points reconstructed from free coordinates, whose sum
/// can drift a few ulps off one.
pub(crate) fn poly_expectation_raw(poly: &MonomialPoly, counts: &[u64], s: f64, t: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let mut acc = 0.0;
    for term in poly.terms() {
        let degree: u32 = term.exponents.iter().sum();
        let mut value = term.coeff / rising_factorial(total as f64 + s, degree);
        for ((&n, &tj), &e) in counts.iter().zip(t).zip(&term.exponents) {
            if e > 0 {
                value *= rising_factorial(n as f64 + s * tj, e);
            }
        }
        acc += value;
    }
    acc
}

/// Poisson count data for the marginal rate: `events` failures of a specific
/// component over `exposure` time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalData {
    events: u64,
    exposure: f64,
}

impl MarginalData {
    pub fn new(events: u64, exposure: f64) -> Result<Self> {
        if !exposure.is_finite() {
            return Err(Error::NotFinite { name: "exposure time", value: exposure });
        }
        if exposure < 0.0 {
            return Err(Error::Negative { name: "exposure time", value: exposure });
        }
        if events > 0 && exposure == 0.0 {
            return Err(Error::NotPositive { name: "exposure time with events observed", value: exposure });
        }
        Ok(Self { events, exposure })
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn exposure(&self) -> f64 {
        self.exposure
    }
}

/// Gamma prior in mean parametrization: time-like weight `u > 0` and prior
/// mean `v > 0`, so shape is `u v` and rate is `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaHyper {
    u: f64,
    v: f64,
}

impl GammaHyper {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::NotFinite { name: "prior weight u", value: u });
        }
        if u <= 0.0 {
            return Err(Error::NotPositive { name: "prior weight u", value: u });
        }
        if !v.is_finite() {
            return Err(Error::NotFinite { name: "prior mean v", value: v });
        }
        if v <= 0.0 {
            return Err(Error::NotPositive { name: "prior mean v", value: v });
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Posterior mean of the marginal rate: `(M + u v) / (u + T)`.
pub fn posterior_mean_rate(data: &MarginalData, prior: &GammaHyper) -> f64 {
    (data.events as f64 + prior.u * prior.v) / (prior.u + data.exposure)
}
