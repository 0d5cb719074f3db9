//! Alpha-factor parametrization of common-cause failure.
//!
//! A system of `k` identical components is described either by basic event
//! rates `q_1..q_k` (`q_j` is the rate of a specific group of `j` components
//! failing together) or by the pair of a marginal rate `q_t` (rate at which
//! one specific component fails, from any cause size) and alpha factors
//! `theta_1..theta_k` (`theta_j` is the fraction of failure events that
//! involve exactly `j` components). The two parametrizations are related by
//! exact combinatorial identities implemented here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of redundant components.
///
/// Keeps every binomial coefficient exactly representable and bounds the
/// term growth of the series expansions downstream.
pub const MAX_COMPONENTS: usize = 16;

/// Tolerance on `sum(theta) == 1` when validating alpha factors.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Number of identical redundant components in the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SystemSize(usize);

impl SystemSize {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_COMPONENTS {
            return Err(Error::SystemSize { got: k, max: MAX_COMPONENTS });
        }
        Ok(Self(k))
    }

    pub fn get(&self) -> usize {
        self.0
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.0 {
            return Err(Error::Dimension { expected: self.0, got: len });
        }
        Ok(())
    }

    fn check_multiplicity(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.0 {
            return Err(Error::Multiplicity { j, k: self.0 });
        }
        Ok(())
    }
}

/// Exact binomial coefficient; safe for all arguments reachable with
/// `n <= MAX_COMPONENTS`.
pub(crate) fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Basic event rates `q_1..q_k`, indexed by failure multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicParams {
    rates: Vec<f64>,
}

impl BasicParams {
    pub fn new(k: SystemSize, rates: Vec<f64>) -> Result<Self> {
        k.check_len(rates.len())?;
        for &q in &rates {
            if !q.is_finite() {
                return Err(Error::NotFinite { name: "basic event rate", value: q });
            }
            if q < 0.0 {
                return Err(Error::Negative { name: "basic event rate", value: q });
            }
        }
        Ok(Self { rates })
    }

    /// Rate of a specific group of exactly `j` components failing together.
    pub fn rate(&self, j: usize) -> Result<f64> {
        SystemSize(self.rates.len()).check_multiplicity(j)?;
        Ok(self.rates[j - 1])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rates
    }

    /// Total failure rate of one specific component: each size-`j` event
    /// containing it can be completed by any of the `C(k-1, j-1)` groups of
    /// other components.
    pub fn marginal_rate(&self, k: SystemSize) -> Result<MarginalRate> {
        k.check_len(self.rates.len())?;
        let qt = self
            .rates
            .iter()
            .enumerate()
            .map(|(i, &q)| binomial(k.get() - 1, i) as f64 * q)
            .sum();
        MarginalRate::new(qt)
    }

    /// Fractions of failure events by multiplicity. System-wide, a size-`j`
    /// event occurs at rate `C(k, j) q_j`; normalizing over `j` yields the
    /// alpha factors.
    pub fn alpha_factors(&self, k: SystemSize) -> Result<AlphaFactors> {
        k.check_len(self.rates.len())?;
        let event_rates: Vec<f64> = self
            .rates
            .iter()
            .enumerate()
            .map(|(i, &q)| binomial(k.get(), i + 1) as f64 * q)
            .collect();
        let total: f64 = event_rates.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateAlpha);
        }
        AlphaFactors::new(k, event_rates.iter().map(|&r| r / total).collect())
    }
}

/// Alpha factors `theta_1..theta_k`: a point on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaFactors {
    fractions: Vec<f64>,
}

impl AlphaFactors {
    pub fn new(k: SystemSize, fractions: Vec<f64>) -> Result<Self> {
        k.check_len(fractions.len())?;
        for &a in &fractions {
            if !a.is_finite() {
                return Err(Error::NotFinite { name: "alpha factor", value: a });
            }
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::OutsideUnit { name: "alpha factor", value: a });
            }
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotASimplex { sum, tolerance: SIMPLEX_TOLERANCE });
        }
        Ok(Self { fractions })
    }

    /// Builds alpha factors from non-negative weights by explicit
    /// normalization. Rejects the all-zero weight vector.
    pub fn from_weights(k: SystemSize, weights: Vec<f64>) -> Result<Self> {
        k.check_len(weights.len())?;
        for &w in &weights {
            if !w.is_finite() {
                return Err(Error::NotFinite { name: "alpha weight", value: w });
            }
            if w < 0.0 {
                return Err(Error::Negative { name: "alpha weight", value: w });
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateAlpha);
        }
        Self::new(k, weights.iter().map(|&w| w / total).collect())
    }

    pub fn fraction(&self, j: usize) -> Result<f64> {
        SystemSize(self.fractions.len()).check_multiplicity(j)?;
        Ok(self.fractions[j - 1])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.fractions
    }

    /// Mean multiplicity `sum_l l * theta_l`, the normalizer shared by all
    /// rate factors.
    pub fn mean_multiplicity(&self) -> f64 {
        self.fractions
            .iter()
            .enumerate()
            .map(|(i, &a)| (i + 1) as f64 * a)
            .sum()
    }

    /// Rate factor `g_j`: the proportionality constant between `q_j` and the
    /// marginal rate, `q_j = g_j(theta) q_t`.
    pub fn rate_factor(&self, k: SystemSize, j: usize) -> Result<f64> {
        k.check_len(self.fractions.len())?;
        k.check_multiplicity(j)?;
        let denom = self.mean_multiplicity();
        if denom <= 0.0 {
            return Err(Error::DegenerateAlpha);
        }
        let scale = 1.0 / binomial(k.get() - 1, j - 1) as f64;
        Ok(scale * j as f64 * self.fractions[j - 1] / denom)
    }

    /// Recovers basic event rates from alpha factors and a marginal rate.
    pub fn basic_params(&self, k: SystemSize, qt: MarginalRate) -> Result<BasicParams> {
        k.check_len(self.fractions.len())?;
        let mut rates = Vec::with_capacity(k.get());
        for j in 1..=k.get() {
            rates.push(self.rate_factor(k, j)? * qt.get());
        }
        BasicParams::new(k, rates)
    }
}

/// Marginal failure rate `q_t` of one specific component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarginalRate(f64);

impl MarginalRate {
    pub fn new(qt: f64) -> Result<Self> {
        if !qt.is_finite() {
            return Err(Error::NotFinite { name: "marginal rate", value: qt });
        }
        if qt < 0.0 {
            return Err(Error::Negative { name: "marginal rate", value: qt });
        }
        Ok(Self(qt))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}
