//! Deterministic search for extreme posterior expectations over a
//! hyperparameter box.
//!
//! The objective is the posterior expectation of a fixed polynomial in the
//! alpha factors, viewed as a function of the Dirichlet hyperparameters
//! `(s, t)` ranging over a box intersected with the simplex. The search is
//! derivative-free and fully deterministic: a coarse lattice scan (phase 1)
//! followed by coordinate-wise golden-section refinement from the best
//! lattice points (phase 2). The simplex constraint is eliminated by
//! treating `t_1 = 1 - sum_{j>=2} t_j` as dependent, leaving a box-plus-sum
//! polytope over the free coordinates.
//!
//! The lattice includes every box vertex, which matters in practice: each
//! coordinate influences the objective monotonically for the objectives
//! used here, so the extrema sit on the boundary.

use serde::{Deserialize, Serialize};

use crate::conjugate::{poly_expectation_raw, FailureCounts};
use crate::error::{Error, Result};
use crate::imprecise::DirichletBox;
use crate::poly::MonomialPoly;

/// Tuning knobs for the two-phase search. The defaults converge on every
/// problem in the test corpus with a few thousand objective evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Lattice resolution per free coordinate in phase 1; endpoints are
    /// always included, so 2 means vertices only.
    pub grid_points_per_dim: usize,
    /// Convergence threshold, used both for the coordinate bracket width
    /// and for the per-sweep objective improvement.
    pub refinement_tolerance: f64,
    /// Budget of objective evaluations for one search; exceeding it stops
    /// the search and flags the result as non-converged.
    pub max_iterations: usize,
    /// Number of best lattice points used to seed phase 2.
    pub multistart_count: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_points_per_dim: 5,
            refinement_tolerance: 1e-9,
            max_iterations: 10_000,
            multistart_count: 8,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_dim < 2 {
            return Err(Error::OptimizerSetting { name: "grid_points_per_dim" });
        }
        if !(self.refinement_tolerance > 0.0 && self.refinement_tolerance.is_finite()) {
            return Err(Error::OptimizerSetting { name: "refinement_tolerance" });
        }
        if self.max_iterations == 0 {
            return Err(Error::OptimizerSetting { name: "max_iterations" });
        }
        if self.multistart_count == 0 {
            return Err(Error::OptimizerSetting { name: "multistart_count" });
        }
        Ok(())
    }
}

/// Whether to search for the lower or the upper posterior expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Result of one search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    /// Best objective value found.
    pub value: f64,
    /// Concentration at the best point.
    pub s: f64,
    /// Full prior mean vector at the best point (including the dependent
    /// first coordinate).
    pub t: Vec<f64>,
    /// Objective evaluations spent.
    pub evaluations: usize,
    /// False when the evaluation budget ran out before the refinement
    /// settled; the reported value is still the best one seen.
    pub converged: bool,
}

/// The free-coordinate search domain: `s` plus `t_2..t_k`, with the sum of
/// the free means constrained so that the dependent `t_1` stays inside its
/// own range.
struct Domain {
    s_lo: f64,
    s_hi: f64,
    t_lo: Vec<f64>,
    t_hi: Vec<f64>,
    sum_lo: f64,
    sum_hi: f64,
}

impl Domain {
    fn new(hbox: &DirichletBox) -> Self {
        let ranges = hbox.t_ranges();
        let t_lo: Vec<f64> = ranges[1..].iter().map(|r| r.lo()).collect();
        let t_hi: Vec<f64> = ranges[1..].iter().map(|r| r.hi()).collect();
        // Feasible sums for the free coordinates: t_1 in its range, and the
        // free coordinates inside their own boxes.
        let sum_lo = (1.0 - ranges[0].hi()).max(t_lo.iter().sum());
        let sum_hi = (1.0 - ranges[0].lo()).min(t_hi.iter().sum());
        Self {
            s_lo: hbox.s_range().lo(),
            s_hi: hbox.s_range().hi(),
            t_lo,
            t_hi,
            sum_lo,
            sum_hi,
        }
    }

    fn free_dims(&self) -> usize {
        1 + self.t_lo.len()
    }

    /// Pulls the free means into the feasible sum range by walking the
    /// coordinates in order and clamping each against its own box; the box
    /// feasibility invariant guarantees enough slack overall.
    fn project_sum(&self, free: &mut [f64]) {
        let sum: f64 = free.iter().sum();
        if sum < self.sum_lo {
            let mut need = self.sum_lo - sum;
            for (x, &hi) in free.iter_mut().zip(&self.t_hi) {
                let room = hi - *x;
                let step = room.min(need);
                *x += step;
                need -= step;
                if need <= 0.0 {
                    break;
                }
            }
        } else if sum > self.sum_hi {
            let mut excess = sum - self.sum_hi;
            for (x, &lo) in free.iter_mut().zip(&self.t_lo) {
                let room = *x - lo;
                let step = room.min(excess);
                *x -= step;
                excess -= step;
                if excess <= 0.0 {
                    break;
                }
            }
        }
    }

    /// Feasible range for free coordinate `c` (0 is `s`) with the others
    /// held fixed.
    fn line_range(&self, coords: &[f64], c: usize) -> (f64, f64) {
        if c == 0 {
            return (self.s_lo, self.s_hi);
        }
        let i = c - 1;
        let others: f64 = coords[1..].iter().sum::<f64>() - coords[c];
        let lo = self.t_lo[i].max(self.sum_lo - others);
        let hi = self.t_hi[i].min(self.sum_hi - others);
        // Floating-point drift can cross the endpoints; collapse to a point
        // rather than report an empty line.
        if lo > hi {
            let mid = 0.5 * (lo + hi);
            (mid, mid)
        } else {
            (lo, hi)
        }
    }

    /// Rebuilds the full prior mean vector from free coordinates.
    fn full_t(&self, coords: &[f64]) -> Vec<f64> {
        let free_sum: f64 = coords[1..].iter().sum();
        let mut t = Vec::with_capacity(self.t_lo.len() + 1);
        t.push((1.0 - free_sum).clamp(0.0, 1.0));
        t.extend_from_slice(&coords[1..]);
        t
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if lo == hi || n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

struct Search<'a> {
    poly: &'a MonomialPoly,
    counts: &'a [u64],
    domain: Domain,
    sign: f64,
    budget: usize,
    evaluations: usize,
}

impl<'a> Search<'a> {
    /// Signed objective (always minimized); `None` once the budget is gone.
    fn eval(&mut self, coords: &[f64]) -> Option<f64> {
        if self.evaluations >= self.budget {
            return None;
        }
        self.evaluations += 1;
        let t = self.domain.full_t(coords);
        Some(self.sign * poly_expectation_raw(self.poly, self.counts, coords[0], &t))
    }
}

/// Minimizes `f` over `[a, b]` by golden-section search, with the endpoints
/// checked explicitly so boundary optima are hit exactly. Returns the best
/// `(x, f(x))` seen, or `None` if the evaluation budget ran out.
fn golden_line<F: FnMut(f64) -> Option<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
) -> Option<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let fa = f(a)?;
    let mut best = (a, fa);
    let fb = f(b)?;
    if fb < best.1 {
        best = (b, fb);
    }
    if b - a <= xtol {
        return Some(best);
    }
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - INVPHI * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > xtol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INVPHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = f(d)?;
        }
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    if fx < best.1 {
        best = (x, fx);
    }
    Some(best)
}

/// Finds the extreme posterior expectation of `poly` over the box.
///
/// Deterministic: candidate enumeration, seeding, and refinement follow a
/// fixed order, and ties are broken towards the earlier candidate.
pub fn optimize_posterior_expectation(
    poly: &MonomialPoly,
    counts: &FailureCounts,
    hbox: &DirichletBox,
    direction: Direction,
    settings: &OptimizerSettings,
) -> Result<OptimizeOutcome> {
    settings.validate()?;
    if counts.len() != hbox.len() {
        return Err(Error::Dimension { expected: hbox.len(), got: counts.len() });
    }
    if poly.num_vars() != hbox.len() {
        return Err(Error::Dimension { expected: hbox.len(), got: poly.num_vars() });
    }
    hbox.validate()?;
    let domain = Domain::new(hbox);
    if domain.sum_lo > domain.sum_hi + crate::model::SIMPLEX_TOLERANCE {
        return Err(Error::InfeasibleBox {
            detail: format!(
                "free prior-mean coordinates admit no sum in [{}, {}]",
                domain.sum_lo, domain.sum_hi
            ),
        });
    }
    let sign = match direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let mut search = Search {
        poly,
        counts: counts.as_slice(),
        domain,
        sign,
        budget: settings.max_iterations,
        evaluations: 0,
    };
    let dims = search.domain.free_dims();

    // Phase 1: lattice scan. Axes include both endpoints, so all box
    // vertices are visited; points whose free sum is infeasible are
    // projected onto the boundary of the feasible polytope.
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(dims);
    axes.push(linspace(search.domain.s_lo, search.domain.s_hi, settings.grid_points_per_dim));
    for i in 0..dims - 1 {
        axes.push(linspace(
            search.domain.t_lo[i],
            search.domain.t_hi[i],
            settings.grid_points_per_dim,
        ));
    }
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut exhausted = false;
    let mut index = vec![0usize; dims];
    'lattice: loop {
        let mut coords: Vec<f64> =
            index.iter().enumerate().map(|(d, &i)| axes[d][i]).collect();
        search.domain.project_sum(&mut coords[1..]);
        match search.eval(&coords) {
            Some(v) => candidates.push((v, coords)),
            None => {
                exhausted = true;
                break 'lattice;
            }
        }
        // Odometer increment over the lattice indices.
        let mut d = dims;
        loop {
            if d == 0 {
                break 'lattice;
            }
            d -= 1;
            index[d] += 1;
            if index[d] < axes[d].len() {
                break;
            }
            index[d] = 0;
        }
    }

    // Deduplicate projected points and order by objective, tie-broken by
    // coordinates for determinism.
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("objective values are finite")
            .then_with(|| a.1.partial_cmp(&b.1).expect("coordinates are finite"))
    });
    candidates.dedup_by(|a, b| a.1 == b.1);

    let mut best = candidates
        .first()
        .cloned()
        .ok_or_else(|| Error::InfeasibleBox { detail: "no feasible candidate point".into() })?;

    // Phase 2: coordinate descent with golden-section line searches from
    // the best lattice points.
    let xtol = settings.refinement_tolerance.max(1e-12);
    let mut settled = !exhausted;
    if !exhausted {
        let starts: Vec<Vec<f64>> = candidates
            .iter()
            .take(settings.multistart_count)
            .map(|(_, c)| c.clone())
            .collect();
        'starts: for start in starts {
            let mut coords = start;
            let mut current = match search.eval(&coords) {
                Some(v) => v,
                None => {
                    settled = false;
                    break 'starts;
                }
            };
            loop {
                let sweep_begin = current;
                for c in 0..dims {
                    let (lo, hi) = search.domain.line_range(&coords, c);
                    if hi - lo <= 0.0 {
                        coords[c] = lo;
                        continue;
                    }
                    let mut probe = coords.clone();
                    let line = golden_line(
                        |x| {
                            probe[c] = x;
                            search.eval(&probe)
                        },
                        lo,
                        hi,
                        xtol,
                    );
                    match line {
                        Some((x, fx)) => {
                            if fx < current {
                                current = fx;
                                coords[c] = x;
                            }
                        }
                        None => {
                            settled = false;
                            break 'starts;
                        }
                    }
                }
                if sweep_begin - current <= settings.refinement_tolerance {
                    break;
                }
            }
            if current < best.0 {
                best = (current, coords.clone());
            }
        }
    }

    let t = search.domain.full_t(&best.1);
    Ok(OptimizeOutcome {
        value: sign * best.0,
        s: best.1[0],
        t,
        evaluations: search.evaluations,
        converged: settled,
    })
}
