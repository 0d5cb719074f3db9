//! Imprecise priors: boxes of hyperparameters instead of single values.
//!
//! Epistemic uncertainty about the priors is modeled by letting the
//! Dirichlet hyperparameters range over a box `H` (a concentration interval
//! times per-component mean intervals) and the Gamma hyperparameters over a
//! box `J`. Lower and upper posterior expectations of the alpha factors and
//! of the marginal rate are then available in closed form: the extrema sit
//! at box corners because each posterior mean is monotone in every
//! hyperparameter separately.

use serde::{Deserialize, Serialize};

use crate::conjugate::MarginalData;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::model::{SystemSize, SIMPLEX_TOLERANCE};

/// Box of Dirichlet hyperparameters: `s` in `s_range`, each prior mean
/// component `t_j` in `t_ranges[j-1]`, subject to `t` lying on the simplex.
///
/// Construction enforces the hard feasibility requirement that the box meets
/// the simplex at all (`sum t_lo <= 1 <= sum t_hi`). Per-component bound
/// attainability is softer and reported by [`DirichletBox::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletBox {
    s_range: Interval,
    t_ranges: Vec<Interval>,
}

impl DirichletBox {
    pub fn new(k: SystemSize, s_range: Interval, t_ranges: Vec<Interval>) -> Result<Self> {
        if t_ranges.len() != k.get() {
            return Err(Error::Dimension { expected: k.get(), got: t_ranges.len() });
        }
        if s_range.lo() <= 0.0 {
            return Err(Error::NotPositive { name: "concentration lower bound", value: s_range.lo() });
        }
        for r in &t_ranges {
            if r.lo() < 0.0 {
                return Err(Error::OutsideUnit { name: "prior mean bound", value: r.lo() });
            }
            if r.hi() > 1.0 {
                return Err(Error::OutsideUnit { name: "prior mean bound", value: r.hi() });
            }
        }
        check_simplex_intersection(&t_ranges)?;
        Ok(Self { s_range, t_ranges })
    }

    pub fn s_range(&self) -> Interval {
        self.s_range
    }

    pub fn t_ranges(&self) -> &[Interval] {
        &self.t_ranges
    }

    pub fn len(&self) -> usize {
        self.t_ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_ranges.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.s_range.is_singleton() && self.t_ranges.iter().all(Interval::is_singleton)
    }

    /// Checks which per-component bounds are attainable on the simplex.
    ///
    /// A lower bound `t_lo_j` is attainable when the other components can
    /// make up the remaining mass, `t_lo_j + sum_{i != j} t_hi_i >= 1`;
    /// upper bounds symmetrically. Unattainable bounds are legal but slack,
    /// so they are reported instead of rejected.
    pub fn validate(&self) -> Result<BoxValidation> {
        check_simplex_intersection(&self.t_ranges)?;
        let lo_sum: f64 = self.t_ranges.iter().map(Interval::lo).sum();
        let hi_sum: f64 = self.t_ranges.iter().map(Interval::hi).sum();
        let mut lower_attainable = Vec::with_capacity(self.t_ranges.len());
        let mut upper_attainable = Vec::with_capacity(self.t_ranges.len());
        for r in &self.t_ranges {
            let others_hi = hi_sum - r.hi();
            let others_lo = lo_sum - r.lo();
            lower_attainable.push(r.lo() + others_hi >= 1.0 - SIMPLEX_TOLERANCE);
            upper_attainable.push(r.hi() + others_lo <= 1.0 + SIMPLEX_TOLERANCE);
        }
        Ok(BoxValidation { lower_attainable, upper_attainable })
    }
}

/// Hard feasibility: the box must contain at least one simplex point, i.e.
/// `sum t_lo <= 1 <= sum t_hi` up to the simplex tolerance.
fn check_simplex_intersection(t_ranges: &[Interval]) -> Result<()> {
    let lo_sum: f64 = t_ranges.iter().map(Interval::lo).sum();
    let hi_sum: f64 = t_ranges.iter().map(Interval::hi).sum();
    if lo_sum > 1.0 + SIMPLEX_TOLERANCE {
        return Err(Error::InfeasibleBox {
            detail: format!("sum of prior mean lower bounds is {lo_sum}, above 1"),
        });
    }
    if hi_sum < 1.0 - SIMPLEX_TOLERANCE {
        return Err(Error::InfeasibleBox {
            detail: format!("sum of prior mean upper bounds is {hi_sum}, below 1"),
        });
    }
    Ok(())
}

/// Attainability report for a [`DirichletBox`], one flag per component
/// bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxValidation {
    pub lower_attainable: Vec<bool>,
    pub upper_attainable: Vec<bool>,
}

impl BoxValidation {
    pub fn all_attainable(&self) -> bool {
        self.lower_attainable.iter().all(|&b| b) && self.upper_attainable.iter().all(|&b| b)
    }

    /// Human-readable notes for every slack bound.
    pub fn warnings(&self) -> Vec<String> {
        let mut notes = Vec::new();
        for (i, &ok) in self.lower_attainable.iter().enumerate() {
            if !ok {
                notes.push(format!(
                    "lower bound on t_{} is not attainable on the simplex; it is slack",
                    i + 1
                ));
            }
        }
        for (i, &ok) in self.upper_attainable.iter().enumerate() {
            if !ok {
                notes.push(format!(
                    "upper bound on t_{} is not attainable on the simplex; it is slack",
                    i + 1
                ));
            }
        }
        notes
    }
}

/// Near-ignorance box: a fixed concentration with the prior mean free over
/// the whole simplex.
pub fn near_ignorance_box(k: SystemSize, s: f64) -> Result<DirichletBox> {
    if !s.is_finite() {
        return Err(Error::NotFinite { name: "concentration s", value: s });
    }
    if s <= 0.0 {
        return Err(Error::NotPositive { name: "concentration s", value: s });
    }
    let unit = Interval::new(0.0, 1.0).expect("static bounds");
    DirichletBox::new(k, Interval::singleton(s)?, vec![unit; k.get()])
}

/// Lower and upper posterior expectations of each alpha factor over a
/// hyperparameter box.
///
/// For fixed `s` the posterior mean `(n_j + s t_j)/(N + s)` is increasing in
/// `t_j`, so the extrema in `t_j` are at the interval ends; in `s` the mean
/// is monotone towards `t_j`, so it suffices to evaluate both concentration
/// endpoints and take the min or max. When the data fraction `n_j/N` falls
/// outside `[t_lo_j, t_hi_j]` the two endpoints split between lower and
/// upper, widening the interval: prior-data conflict shows up as extra
/// imprecision rather than being averaged away.
pub fn theta_posterior_bounds(
    counts: &crate::conjugate::FailureCounts,
    hbox: &DirichletBox,
) -> Result<Vec<Interval>> {
    if counts.len() != hbox.len() {
        return Err(Error::Dimension { expected: hbox.len(), got: counts.len() });
    }
    let total = counts.total() as f64;
    let (s_lo, s_hi) = (hbox.s_range.lo(), hbox.s_range.hi());
    let mean = |n: f64, s: f64, t: f64| (n + s * t) / (total + s);
    counts
        .as_slice()
        .iter()
        .zip(&hbox.t_ranges)
        .map(|(&n, r)| {
            let n = n as f64;
            let lo = mean(n, s_lo, r.lo()).min(mean(n, s_hi, r.lo()));
            let hi = mean(n, s_lo, r.hi()).max(mean(n, s_hi, r.hi()));
            Interval::new(lo, hi)
        })
        .collect()
}

/// Box of Gamma hyperparameters: prior weight `u` in `u_range`, prior mean
/// `v` in `v_range`.
///
/// `v_range.lo() == 0` is allowed. The precise conjugate prior needs
/// `v > 0`, so a zero bound denotes the infimum over priors as `v` tends to
/// zero, which the closed-form posterior bounds attain continuously.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaBox {
    u_range: Interval,
    v_range: Interval,
}

impl GammaBox {
    pub fn new(u_range: Interval, v_range: Interval) -> Result<Self> {
        if u_range.lo() <= 0.0 {
            return Err(Error::NotPositive { name: "prior weight lower bound", value: u_range.lo() });
        }
        if v_range.lo() < 0.0 {
            return Err(Error::Negative { name: "prior mean lower bound", value: v_range.lo() });
        }
        Ok(Self { u_range, v_range })
    }

    pub fn u_range(&self) -> Interval {
        self.u_range
    }

    pub fn v_range(&self) -> Interval {
        self.v_range
    }

    pub fn is_singleton(&self) -> bool {
        self.u_range.is_singleton() && self.v_range.is_singleton()
    }
}

/// Lower and upper posterior expectations of the marginal rate over a Gamma
/// hyperparameter box.
///
/// The posterior mean `(M + u v)/(u + T)` is increasing in `v`; in `u` it
/// moves from the data rate towards `v`, so for each `v` endpoint both `u`
/// endpoints are evaluated and the extreme kept.
pub fn rate_posterior_bounds(data: &MarginalData, jbox: &GammaBox) -> Interval {
    // Closed form evaluated directly: the precise prior needs v > 0, but
    // the posterior mean extends continuously to the box's allowed v = 0.
    let mean = |u: f64, v: f64| (data.events() as f64 + u * v) / (u + data.exposure());
    let (u_lo, u_hi) = (jbox.u_range.lo(), jbox.u_range.hi());
    let (v_lo, v_hi) = (jbox.v_range.lo(), jbox.v_range.hi());
    let lo = mean(u_lo, v_lo).min(mean(u_hi, v_lo));
    let hi = mean(u_lo, v_hi).max(mean(u_hi, v_hi));
    Interval::new(lo, hi).expect("lower endpoint cannot exceed upper")
}

/// One hypothetical-data row: the evidence considered, its size (a count of
/// events or a time), and the posterior expectation it would produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitationRow {
    pub evidence: String,
    pub amount: f64,
    pub expectation: f64,
}

/// Table of hypothetical posterior expectations used to elicit the prior
/// weight bounds by inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitationTable {
    pub rows: Vec<ElicitationRow>,
}

/// Hypothetical-data table for choosing the concentration bounds of a
/// Dirichlet box.
///
/// The interpretations assume a draft box with `t_hi_1 = 1` and `t_lo_j = 0`
/// for `j >= 2` (total ignorance about multi-component failures). The rules:
/// the upper weight is the number of single failures that halves the upper
/// probability of any multi-component failure; the lower weight is the
/// number of multi-component failures that halves the lower probability of
/// a single failure.
pub fn alpha_learning_table(draft: &DirichletBox, m: u64) -> ElicitationTable {
    let m_f = m as f64;
    let s_lo = draft.s_range.lo();
    let s_hi = draft.s_range.hi();
    let mut rows = Vec::new();
    for j in 2..=draft.len() {
        let t_hi = draft.t_ranges[j - 1].hi();
        rows.push(ElicitationRow {
            evidence: format!("upper P(multiplicity {j} next) after m single failures"),
            amount: m_f,
            expectation: s_hi * t_hi / (m_f + s_hi),
        });
    }
    rows.push(ElicitationRow {
        evidence: "lower P(single failure next) after m multi-component failures".to_string(),
        amount: m_f,
        expectation: s_lo * draft.t_ranges[0].lo() / (m_f + s_lo),
    });
    for j in 2..=draft.len() {
        let t_hi = draft.t_ranges[j - 1].hi();
        rows.push(ElicitationRow {
            evidence: format!("upper P(multiplicity {j} next) after m multiplicity-{j} events"),
            amount: m_f,
            expectation: (m_f + s_lo * t_hi) / (m_f + s_lo),
        });
    }
    rows.push(ElicitationRow {
        evidence: "lower P(same multiplicity next) after m multi-component failures".to_string(),
        amount: m_f,
        expectation: m_f / (m_f + s_hi),
    });
    ElicitationTable { rows }
}

/// Hypothetical-data table for choosing the prior weight bounds of a Gamma
/// box.
///
/// The upper weight is the failure-free-equivalent observation time that
/// pulls the lower expected rate up to half the observed rate (starting from
/// a vacuous lower mean); the lower weight is the failure-free time that
/// halves the prior lower mean.
pub fn rate_learning_table(draft: &GammaBox, hypothetical: &MarginalData) -> ElicitationTable {
    let m = hypothetical.events() as f64;
    let t = hypothetical.exposure();
    let rows = vec![
        ElicitationRow {
            evidence: format!("lower E(rate) after {m} failures in time T, zero prior lower mean"),
            amount: t,
            expectation: m / (t + draft.u_range.hi()),
        },
        ElicitationRow {
            evidence: "lower E(rate) after failure-free time T".to_string(),
            amount: t,
            expectation: draft.u_range.lo() * draft.v_range.lo() / (t + draft.u_range.lo()),
        },
    ];
    ElicitationTable { rows }
}
