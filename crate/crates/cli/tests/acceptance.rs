//! Acceptance suite: one test per shipped claim about the published case
//! studies, printing one pass line each (failures surface through the
//! harness with the offending values in the panic message).
//!
//! Tolerances are pinned per claim: values quoted at a printed precision
//! must match within one unit of the last printed decimal place; the
//! optimizer-backed network bounds within 0.001 per endpoint; the
//! two-decimal approximation table within 0.005.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ccf_cli::fixtures;
use ccf_core::conjugate::{
    constrained_noninformative_prior, jeffreys_prior, posterior_mean_theta,
    posterior_poly_expectation, uniform_prior, DirichletHyper, FailureCounts, MarginalData,
};
use ccf_core::imprecise::{rate_posterior_bounds, theta_posterior_bounds, DirichletBox, GammaBox};
use ccf_core::model::{AlphaFactors, BasicParams, SystemSize};
use ccf_core::optimize::{optimize_posterior_expectation, Direction, OptimizerSettings};
use ccf_core::poly::MonomialPoly;
use ccf_core::taylor::{rate_factor_series, truncated_reciprocal, ApproxSide};
use ccf_core::Interval;

#[path = "../../core/tests/common/mod.rs"]
mod oracle;

/// Asserts agreement with a value printed to `decimals` places: the
/// computed value must lie within one unit of the last printed digit,
/// which covers both round-to-nearest and truncation in the source.
fn assert_printed(computed: f64, printed: f64, decimals: i32, what: &str) {
    let tol = 10f64.powi(-decimals);
    assert!(
        (computed - printed).abs() <= tol,
        "{what}: computed {computed} vs printed {printed} (tolerance {tol})"
    );
}

/// Endpoint check with the fixed 0.001 slack used for optimizer-backed
/// network values.
fn assert_near(computed: f64, expected: f64, what: &str) {
    assert!(
        (computed - expected).abs() <= 1e-3,
        "{what}: computed {computed} vs expected {expected} (tolerance 0.001)"
    );
}

fn k4() -> SystemSize {
    SystemSize::new(4).unwrap()
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn diesel_counts() -> FailureCounts {
    FailureCounts::new(k4(), vec![35, 1, 0, 0]).unwrap()
}

const SPECIFIED_MEAN: [f64; 4] = [0.950, 0.030, 0.015, 0.005];

#[test]
fn criterion_1_posterior_means_under_reference_priors() {
    let n = diesel_counts();

    let cni = constrained_noninformative_prior(&SPECIFIED_MEAN).unwrap();
    assert!((cni.s() - 10.0).abs() < 1e-12, "matched concentration is 10");
    let mean = posterior_mean_theta(&n, &cni).unwrap();
    for (j, printed) in [(0, 0.967), (1, 0.028), (2, 0.003), (3, 0.001)] {
        assert_printed(mean[j], printed, 3, "constrained noninformative mean");
    }

    let mean = posterior_mean_theta(&n, &uniform_prior(k4())).unwrap();
    for (j, exact) in [(0, 0.9), (1, 0.05), (2, 0.025), (3, 0.025)] {
        assert!((mean[j] - exact).abs() <= 1e-12, "uniform mean {j}: {}", mean[j]);
    }

    let mean = posterior_mean_theta(&n, &jeffreys_prior(k4())).unwrap();
    for (j, exact) in [(0, 0.8875), (1, 0.0375), (2, 0.0125), (3, 0.0125)] {
        assert!((mean[j] - exact).abs() <= 1e-12, "half-count mean {j}: {}", mean[j]);
    }

    println!("PASS criterion 1: posterior means under the three reference priors");
}

#[test]
fn criterion_2_interval_concentration_with_fixed_mean() {
    let hbox = DirichletBox::new(
        k4(),
        iv(1.0, 10.0),
        SPECIFIED_MEAN.iter().map(|&t| iv(t, t)).collect(),
    )
    .unwrap();
    let bounds = theta_posterior_bounds(&diesel_counts(), &hbox).unwrap();
    let printed: [(f64, f64, i32); 4] = [
        (0.967, 0.972, 3),
        (0.0278, 0.0283, 4),
        (0.00041, 0.00326, 5),
        (0.00014, 0.00109, 5),
    ];
    for (j, (lo, hi, d)) in printed.into_iter().enumerate() {
        assert_printed(bounds[j].lo(), lo, d, "lower bound");
        assert_printed(bounds[j].hi(), hi, d, "upper bound");
    }
    println!("PASS criterion 2: interval concentration with the specified prior mean");
}

#[test]
fn criterion_3_box_bounds_with_erratum_note() {
    let case = fixtures::kelly_atwood();
    let report = fixtures::reproduce(&case).unwrap();
    let theta = &report.alpha_factors;

    assert_printed(theta[0].lower, 0.967, 3, "theta_1 lower");
    assert_printed(theta[0].upper, 0.978, 3, "theta_1 upper");
    // The second component's lower bound follows the bound formula, giving
    // 1/46; the published source prints 0.0270 instead, so the report must
    // carry a note quoting that figure.
    assert_printed(theta[1].lower, 0.0217, 4, "theta_2 lower");
    assert!((theta[1].lower - 1.0 / 46.0).abs() <= 1e-15, "exact value is 1/46");
    assert_printed(theta[1].upper, 0.0283, 4, "theta_2 upper");
    assert_eq!(theta[2].lower, 0.0, "theta_3 lower is exactly zero");
    assert_printed(theta[2].upper, 0.00326, 5, "theta_3 upper");
    assert_eq!(theta[3].lower, 0.0, "theta_4 lower is exactly zero");
    assert_printed(theta[3].upper, 0.00109, 5, "theta_4 upper");
    assert!(
        report.warnings.iter().any(|w| w.contains("0.0270")),
        "report must note the published 0.0270 figure: {:?}",
        report.warnings
    );
    println!("PASS criterion 3: hyperparameter box bounds with the erratum note");
}

#[test]
fn criterion_4_fixed_concentration_box_bounds() {
    let hbox = DirichletBox::new(
        k4(),
        iv(2.0, 2.0),
        vec![iv(0.95, 1.0), iv(0.0, 0.03), iv(0.0, 0.015), iv(0.0, 0.005)],
    )
    .unwrap();
    let bounds = theta_posterior_bounds(&diesel_counts(), &hbox).unwrap();
    let printed: [(f64, f64, i32); 4] = [
        (0.971, 0.974, 3),
        (0.026, 0.028, 3),
        (0.0, 0.0007, 4),
        (0.0, 0.0002, 4),
    ];
    for (j, (lo, hi, d)) in printed.into_iter().enumerate() {
        assert_printed(bounds[j].lo(), lo, d, "lower bound");
        assert_printed(bounds[j].hi(), hi, d, "upper bound");
    }
    println!("PASS criterion 4: fixed-concentration box bounds");
}

#[test]
// 0.318 is the published lower bound for q_1; its closeness to 1/pi is a
// coincidence.
#[allow(clippy::approx_constant)]
fn criterion_5_network_rate_bounds() {
    let case = fixtures::network();
    let report = fixtures::reproduce(&case).unwrap();
    assert!(report.diagnostics.converged);

    let qt = report.total_rate.as_ref().unwrap();
    assert_near(qt.lower, 0.538, "q_t lower");
    assert_near(qt.upper, 0.577, "q_t upper");

    let factors = report.rate_factors.as_ref().unwrap();
    assert_near(factors[1].lower, 0.360, "g_2 lower");
    assert_near(factors[1].upper, 0.410, "g_2 upper");
    assert!(factors[1].error_bound <= 0.006 + 1e-3, "g_2 error {}", factors[1].error_bound);
    assert_near(factors[0].lower, 0.595, "g_1 lower");
    assert_near(factors[0].upper, 0.643, "g_1 upper");
    assert!(factors[0].error_bound <= 0.003 + 1e-3, "g_1 error {}", factors[0].error_bound);

    let rates = report.rates.as_ref().unwrap();
    assert_near(rates[1].lower, 0.190, "q_2 lower");
    assert_near(rates[1].upper, 0.240, "q_2 upper");
    assert_near(rates[0].lower, 0.318, "q_1 lower");
    assert_near(rates[0].upper, 0.373, "q_1 upper");

    println!("PASS criterion 5: network rate bounds within 0.001 per endpoint");
}

#[test]
fn criterion_6_truncated_reciprocal_table() {
    // Thirty two-decimal values: the reciprocal itself and its first and
    // second order truncations on a 0.1 grid.
    let exact = [1.0, 0.91, 0.83, 0.77, 0.71, 0.67, 0.63, 0.59, 0.56, 0.53];
    let first = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1];
    let second = [1.0, 0.91, 0.84, 0.79, 0.76, 0.75, 0.76, 0.79, 0.84, 0.91];
    let tol = 0.005 + 1e-9;
    for i in 0..10 {
        let x = i as f64 * 0.1;
        // Order 100 is converged to well below the table's resolution for
        // every tabulated x < 1.
        assert!(
            (truncated_reciprocal(x, 100) - exact[i]).abs() <= tol,
            "reciprocal at x={x}"
        );
        assert!(
            (truncated_reciprocal(x, 1) - first[i]).abs() <= tol,
            "first order at x={x}"
        );
        assert!(
            (truncated_reciprocal(x, 2) - second[i]).abs() <= tol,
            "second order at x={x}"
        );
    }
    println!("PASS criterion 6: thirty tabulated approximation values at two decimals");
}

#[test]
fn criterion_7_property_suite() {
    round_trip_1000();
    mean_vs_moment_consistency();
    quadrature_agreement_100();
    parity_enclosure_1000();
    grid_enclosure_on_fixtures();
    println!(
        "PASS criterion 7: round-trip x1000, mean/moment consistency, quadrature x100, \
         parity x1000, grid enclosure on both case studies"
    );
}

/// (a) Rate vector -> (alpha, marginal rate) -> rate vector at 1e-12
/// relative accuracy, one thousand random systems of size 1 through 8.
fn round_trip_1000() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let k = rng.random_range(1..=8usize);
        let kk = SystemSize::new(k).unwrap();
        let mut q: Vec<f64> = (0..k)
            .map(|_| {
                if rng.random_range(0.0..1.0f64) < 0.2 {
                    0.0
                } else {
                    rng.random_range(1e-6..1.0)
                }
            })
            .collect();
        // Keep at least one channel active.
        q[0] = rng.random_range(1e-6..1.0);
        let params = BasicParams::new(kk, q.clone()).unwrap();
        let qt = params.marginal_rate(kk).unwrap();
        let alpha = params.alpha_factors(kk).unwrap();
        let back = alpha.basic_params(kk, qt).unwrap();
        for (orig, rec) in q.iter().zip(back.as_slice()) {
            if *orig == 0.0 {
                assert!(rec.abs() <= 1e-15, "zero rate must stay zero, got {rec}");
            } else {
                assert!(
                    (orig - rec).abs() <= 1e-12 * orig.abs(),
                    "round trip drifted: {orig} -> {rec}"
                );
            }
        }
    }
}

/// (b) The closed-form posterior mean agrees with the rising-factorial
/// moment of a degree-one monomial.
fn mean_vs_moment_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..200 {
        let k = rng.random_range(1..=6usize);
        let kk = SystemSize::new(k).unwrap();
        let s = rng.random_range(0.2..15.0);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(1e-3..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let t: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let n: Vec<u64> = (0..k).map(|_| rng.random_range(0..60)).collect();
        let prior = DirichletHyper::new(s, t).unwrap();
        let counts = FailureCounts::new(kk, n).unwrap();
        let mean = posterior_mean_theta(&counts, &prior).unwrap();
        for (j, &mean_j) in mean.iter().enumerate() {
            let poly = MonomialPoly::var(k, j).unwrap();
            let moment = posterior_poly_expectation(&poly, &counts, &prior).unwrap();
            assert!((mean_j - moment).abs() <= 1e-13, "mean {mean_j} vs moment {moment}");
        }
    }
}

/// (c) Rising-factorial moments agree with direct numerical integration
/// against the posterior Beta density, for a hundred random polynomials of
/// degree at most six in a two-component system.
fn quadrature_agreement_100() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let kk = SystemSize::new(2).unwrap();
    let counts = FailureCounts::new(kk, vec![8, 3]).unwrap();
    let s = 2.5;
    let t = [0.8, 0.2];
    let prior = DirichletHyper::new(s, t.to_vec()).unwrap();
    for _ in 0..100 {
        let terms: Vec<(f64, Vec<u32>)> = (0..rng.random_range(1..=5usize))
            .map(|_| {
                let e1 = rng.random_range(0..=6u32);
                let e2 = rng.random_range(0..=(6 - e1));
                (rng.random_range(-2.0..2.0f64), vec![e1, e2])
            })
            .collect();
        let poly = MonomialPoly::from_terms(2, terms).unwrap();
        let expected = posterior_poly_expectation(&poly, &counts, &prior).unwrap();
        let via_quadrature = oracle::posterior_expectation_k2(
            |x| poly.eval(&[1.0 - x, x]).unwrap(),
            [8, 3],
            s,
            t,
        );
        assert!(
            (expected - via_quadrature).abs() <= 1e-8,
            "moment {expected} vs quadrature {via_quadrature}"
        );
    }
}

/// (d) At a thousand random simplex points, the truncated series sits on
/// its promised side of the exact rate factor and the gap never exceeds
/// the remainder polynomial.
fn parity_enclosure_1000() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..1000 {
        let k = rng.random_range(2..=4usize);
        let kk = SystemSize::new(k).unwrap();
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(1e-3..1.0)).collect();
        let alpha = AlphaFactors::from_weights(kk, raw).unwrap();
        let theta = alpha.as_slice().to_vec();
        let j = rng.random_range(1..=k);
        let p = rng.random_range(0..=6u32);
        let exact = alpha.rate_factor(kk, j).unwrap();
        let series = rate_factor_series(kk, j, p).unwrap();
        let approx = series.main_poly().eval(&theta).unwrap();
        let slack = series.error_poly().eval(&theta).unwrap();
        match series.side() {
            ApproxSide::Over => {
                assert!(approx >= exact - 1e-12, "even order must over-approximate");
                assert!(approx - exact <= slack + 1e-12, "gap exceeds remainder");
            }
            ApproxSide::Under => {
                assert!(approx <= exact + 1e-12, "odd order must under-approximate");
                assert!(exact - approx <= slack + 1e-12, "gap exceeds remainder");
            }
        }
    }
}

/// (e) Dense hyperparameter grids never escape the reported bounds, on both
/// shipped case studies. The marginal-rate grid applies to the network case
/// only; the other fixture has no marginal data channel.
fn grid_enclosure_on_fixtures() {
    network_grid_enclosure();
    diesel_grid_enclosure();
}

fn network_grid_enclosure() {
    let kk = SystemSize::new(2).unwrap();
    let counts = FailureCounts::new(kk, vec![8, 3]).unwrap();
    let hbox = DirichletBox::new(kk, iv(1.0, 4.0), vec![iv(0.8, 0.9), iv(0.1, 0.2)]).unwrap();

    // Alpha-factor bounds against a dense (s, t_2) grid.
    let theta_bounds = theta_posterior_bounds(&counts, &hbox).unwrap();
    for &s in &oracle::grid(1.0, 4.0, 0.05) {
        for &t2 in &oracle::grid(0.1, 0.2, 0.002) {
            let prior = DirichletHyper::new(s, vec![1.0 - t2, t2]).unwrap();
            let mean = posterior_mean_theta(&counts, &prior).unwrap();
            for (m, b) in mean.iter().zip(&theta_bounds) {
                assert!(
                    *m >= b.lo() - 1e-12 && *m <= b.hi() + 1e-12,
                    "grid mean {m} escapes [{}, {}]",
                    b.lo(),
                    b.hi()
                );
            }
        }
    }

    // Marginal-rate bounds against a dense prior-mean grid.
    let data = MarginalData::new(14, 24.0).unwrap();
    let jbox = GammaBox::new(iv(3.0, 3.0), iv(0.175, 0.525)).unwrap();
    let qt = rate_posterior_bounds(&data, &jbox);
    let mut seen_lo = f64::INFINITY;
    let mut seen_hi = f64::NEG_INFINITY;
    for &v in &oracle::grid(0.175, 0.525, 0.005) {
        let mean = (14.0 + 3.0 * v) / (3.0 + 24.0);
        assert!(mean >= qt.lo() - 1e-12 && mean <= qt.hi() + 1e-12);
        seen_lo = seen_lo.min(mean);
        seen_hi = seen_hi.max(mean);
    }
    assert!((seen_lo - qt.lo()).abs() <= 1e-12, "lower endpoint attained on grid");
    assert!((seen_hi - qt.hi()).abs() <= 1e-12, "upper endpoint attained on grid");

    // Optimized series bounds against the same (s, t_2) grid.
    let settings = OptimizerSettings::default();
    for j in 1..=2usize {
        let series = rate_factor_series(kk, j, 4).unwrap();
        let lo = optimize_posterior_expectation(
            series.main_poly(),
            &counts,
            &hbox,
            Direction::Minimize,
            &settings,
        )
        .unwrap();
        let hi = optimize_posterior_expectation(
            series.main_poly(),
            &counts,
            &hbox,
            Direction::Maximize,
            &settings,
        )
        .unwrap();
        assert!(lo.converged && hi.converged);
        let mut grid_lo = f64::INFINITY;
        let mut grid_hi = f64::NEG_INFINITY;
        for &s in &oracle::grid(1.0, 4.0, 0.05) {
            for &t2 in &oracle::grid(0.1, 0.2, 0.002) {
                let prior = DirichletHyper::new(s, vec![1.0 - t2, t2]).unwrap();
                let value =
                    posterior_poly_expectation(series.main_poly(), &counts, &prior).unwrap();
                assert!(
                    value >= lo.value - 1e-9 && value <= hi.value + 1e-9,
                    "grid value {value} escapes [{}, {}] for multiplicity {j}",
                    lo.value,
                    hi.value
                );
                grid_lo = grid_lo.min(value);
                grid_hi = grid_hi.max(value);
            }
        }
        // The extremes sit at box corners, which the grid contains.
        assert!((grid_lo - lo.value).abs() <= 1e-9, "lower bound attained on grid");
        assert!((grid_hi - hi.value).abs() <= 1e-9, "upper bound attained on grid");
    }
}

fn diesel_grid_enclosure() {
    let counts = diesel_counts();
    let hbox = DirichletBox::new(
        k4(),
        iv(1.0, 10.0),
        vec![iv(0.95, 1.0), iv(0.0, 0.03), iv(0.0, 0.015), iv(0.0, 0.005)],
    )
    .unwrap();

    // Every multi-component mean combination in the box is feasible with
    // t_1 = 1 - (t_2 + t_3 + t_4), since the free sums stay below 0.05.
    let s_axis = oracle::grid(1.0, 10.0, 0.25);
    let t2_axis = oracle::grid(0.0, 0.03, 0.003);
    let t3_axis = oracle::grid(0.0, 0.015, 0.0015);
    let t4_axis = oracle::grid(0.0, 0.005, 0.0005);

    let theta_bounds = theta_posterior_bounds(&counts, &hbox).unwrap();
    let settings = OptimizerSettings::default();
    let mut factor_bounds = Vec::new();
    for j in 1..=4usize {
        let series = rate_factor_series(k4(), j, 4).unwrap();
        let lo = optimize_posterior_expectation(
            series.main_poly(),
            &counts,
            &hbox,
            Direction::Minimize,
            &settings,
        )
        .unwrap();
        let hi = optimize_posterior_expectation(
            series.main_poly(),
            &counts,
            &hbox,
            Direction::Maximize,
            &settings,
        )
        .unwrap();
        assert!(lo.converged && hi.converged, "search budget must suffice");
        factor_bounds.push((series, lo.value, hi.value));
    }

    let mut grid_lo = [f64::INFINITY; 4];
    let mut grid_hi = [f64::NEG_INFINITY; 4];
    for &s in &s_axis {
        for &t2 in &t2_axis {
            for &t3 in &t3_axis {
                for &t4 in &t4_axis {
                    let t1 = 1.0 - t2 - t3 - t4;
                    let prior = DirichletHyper::new(s, vec![t1, t2, t3, t4]).unwrap();
                    let mean = posterior_mean_theta(&counts, &prior).unwrap();
                    for (m, b) in mean.iter().zip(&theta_bounds) {
                        assert!(*m >= b.lo() - 1e-12 && *m <= b.hi() + 1e-12);
                    }
                    for (i, (series, lo, hi)) in factor_bounds.iter().enumerate() {
                        let value = posterior_poly_expectation(
                            series.main_poly(),
                            &counts,
                            &prior,
                        )
                        .unwrap();
                        assert!(
                            value >= lo - 1e-9 && value <= hi + 1e-9,
                            "grid value {value} escapes [{lo}, {hi}] for multiplicity {}",
                            i + 1
                        );
                        grid_lo[i] = grid_lo[i].min(value);
                        grid_hi[i] = grid_hi[i].max(value);
                    }
                }
            }
        }
    }
    // Non-vacuous: the reported bounds are close to the best grid values.
    for (i, (_, lo, hi)) in factor_bounds.iter().enumerate() {
        assert!(grid_lo[i] - lo <= 1e-3, "lower bound {lo} far from grid {}", grid_lo[i]);
        assert!(hi - grid_hi[i] <= 1e-3, "upper bound {hi} far from grid {}", grid_hi[i]);
    }
}

#[test]
fn criterion_8_deterministic_reports() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_ccf"))
            .args(["reproduce", "network"])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .filter(|line| !line.contains("\"generated_at\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "reports must be byte-identical modulo the timestamp");
    println!("PASS criterion 8: repeated runs produce identical reports");
}
