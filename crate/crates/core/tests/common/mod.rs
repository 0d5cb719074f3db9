//! Shared numerical oracles for the integration tests.
//!
//! The quadrature oracle recomputes posterior expectations by direct
//! integration against the Beta density, deliberately avoiding the library's
//! rising-factorial moment formulas so that agreement between the two paths
//! is meaningful evidence.

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Integrates `f(x) x^(a-1) (1-x)^(b-1)` over (0, 1) by tanh-sinh
/// quadrature at step `h`, returning the unnormalized sum.
fn tanh_sinh_sum<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, h: f64) -> f64 {
    const T_MAX: f64 = 6.0;
    let steps = (T_MAX / h).ceil() as i64;
    let mut acc = 0.0;
    for i in -steps..=steps {
        let t = i as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        // x = 1/(1 + e^(-2u)) in log form, stable at both endpoints.
        let ln_x = -softplus(-2.0 * u);
        let ln_1mx = -softplus(2.0 * u);
        let ln_w = (std::f64::consts::FRAC_PI_4).ln() + t.cosh().ln() - 2.0 * u.cosh().ln();
        let ln_kernel = (a - 1.0) * ln_x + (b - 1.0) * ln_1mx;
        let x = ln_x.exp();
        let weight = (ln_w + ln_kernel).exp();
        if weight > 0.0 && weight.is_finite() {
            acc += weight * f(x);
        }
    }
    acc * h
}

/// Expectation of `f` under a Beta(a, b) distribution, computed without any
/// special functions: the normalizing constant cancels in the ratio of two
/// tanh-sinh integrals.
pub fn beta_expectation<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "Beta parameters must be positive");
    let mut h = 0.5;
    let mut prev_num = tanh_sinh_sum(&f, a, b, h);
    let mut prev_den = tanh_sinh_sum(&|_| 1.0, a, b, h);
    loop {
        h *= 0.5;
        let num = tanh_sinh_sum(&f, a, b, h);
        let den = tanh_sinh_sum(&|_| 1.0, a, b, h);
        let settled = (num - prev_num).abs() <= 1e-13 * num.abs().max(1e-30)
            && (den - prev_den).abs() <= 1e-13 * den.abs().max(1e-30);
        prev_num = num;
        prev_den = den;
        if settled || h < 1.0 / 128.0 {
            return prev_num / prev_den;
        }
    }
}

/// Posterior expectation of `f(theta_2)` for a two-component system: the
/// marginal of `theta_2` is Beta(n_2 + s t_2, n_1 + s t_1).
pub fn posterior_expectation_k2<F: Fn(f64) -> f64>(
    f: F,
    n: [u64; 2],
    s: f64,
    t: [f64; 2],
) -> f64 {
    beta_expectation(f, n[1] as f64 + s * t[1], n[0] as f64 + s * t[0])
}

/// Evenly spaced grid including both endpoints; a single point when the
/// range is degenerate.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let count = ((hi - lo) / step).round() as usize;
    let mut points: Vec<f64> = (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect();
    if points.last() != Some(&hi) {
        points.push(hi);
    }
    points
}
