use proptest::prelude::*;
use statgame::bayes::{solve_bayes_dist, SolverConfig};
use statgame::dist::binom_pmfs;
use statgame::limits::{
    alphas, asymptotics, bayes_prior_approx, bayes_prior_table, beta, beta_fn, fisher_policy_limit,
    fisher_policy_table, fisher_prior_limit_bounds, gamma_critical, kernel_c, kernel_c_gamma,
    phase, phase_series_prior, rate_function, sampi_first_order, table_grid, xi,
};

fn pair() -> impl Strategy<Value = (f64, f64)> {
    (0.02f64..0.98, 0.02f64..0.98)
        .prop_filter("distinct", |(a, b)| (a - b).abs() > 0.02)
        .prop_map(|(a, b)| (a.min(b), a.max(b)))
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// `C^γ(α)` as `∫ e^{−γατ} γ ((1 + e^τ)^{−(1−γ)} − 1)/(1 − γ) dτ`.
fn kernel_by_quadrature(alpha: f64, gamma: f64) -> f64 {
    let f = |t: f64| {
        let inner = (-(1.0 - gamma) * t.exp().ln_1p()).exp_m1();
        (-gamma * alpha * t).exp() * gamma * inner / (1.0 - gamma)
    };
    // Tails decay like e^{(1−γα)τ} on the left and e^{−(γα − max(γ−1, 0))τ} on the right.
    let hi = 40.0 / (gamma * alpha - (gamma - 1.0).max(0.0));
    let lo = -40.0 / (1.0 - gamma * alpha);
    simpson(f, lo, hi, 400_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rates_balance_at_the_policy_limit((xa, xb) in pair()) {
        let x0 = fisher_policy_limit(xa, xb).unwrap();
        prop_assert!(xa < x0 && x0 < xb);
        let (ia, ib) = (rate_function(x0, xa).unwrap().i, rate_function(x0, xb).unwrap().i);
        prop_assert!((ia - ib).abs() < 1e-12, "{} vs {}", ia, ib);
    }

    #[test]
    fn alpha_identities((xa, xb) in pair()) {
        let (aa, ab) = alphas(xa, xb).unwrap();
        prop_assert!((aa - ab - 1.0).abs() < 1e-12);
        prop_assert!(aa > 0.0 && aa < 1.0);
        let x0 = fisher_policy_limit(xa, xb).unwrap();
        let b = beta(xa, xb).unwrap();
        prop_assert!((aa - rate_function(x0, xa).unwrap().i_prime / b).abs() < 1e-12);
        let g = gamma_critical(xa, xb).unwrap();
        prop_assert!(g > 1.0 && g <= 2.0 + 1e-12);
    }

    #[test]
    fn rate_derivatives_match_differences(x in 0.05f64..0.95, xt in 0.05f64..0.95) {
        let h = 1e-5;
        let r = |x: f64| rate_function(x, xt).unwrap();
        let d1 = (r(x + h).i - r(x - h).i) / (2.0 * h);
        let d2 = (r(x + h).i_prime - r(x - h).i_prime) / (2.0 * h);
        prop_assert!((d1 - r(x).i_prime).abs() < 1e-7);
        prop_assert!((d2 - r(x).i_second).abs() < 1e-5 * r(x).i_second);
    }

    #[test]
    fn generalized_kernel_reduces_at_log_utility(alpha in 0.05f64..0.95) {
        let (c, c1) = (kernel_c(alpha).unwrap(), kernel_c_gamma(alpha, 1.0).unwrap());
        prop_assert!((c - c1).abs() < 1e-8 * c.abs());
    }

    #[test]
    fn fisher_prior_bounds_are_ordered((xa, xb) in pair()) {
        let (lo, hi) = fisher_prior_limit_bounds(xa, xb).unwrap();
        prop_assert!(0.0 < lo && lo <= hi && hi < 1.0);
    }

    #[test]
    fn relabelling_mirrors_the_limits((xa, xb) in pair()) {
        let (ya, yb) = (1.0 - xb, 1.0 - xa);
        let x0 = fisher_policy_limit(xa, xb).unwrap();
        prop_assert!((fisher_policy_limit(ya, yb).unwrap() - (1.0 - x0)).abs() < 1e-12);
        let p = bayes_prior_approx(xa, xb).unwrap();
        prop_assert!((bayes_prior_approx(ya, yb).unwrap() - (1.0 - p)).abs() < 1e-12);
    }
}

#[test]
fn kernel_matches_quadrature() {
    for (alpha, gamma) in [(0.4, 0.5), (0.7, 0.5), (0.4, 1.5), (0.2, 0.3), (0.6, 1.2)] {
        let q = kernel_by_quadrature(alpha, gamma);
        let c = kernel_c_gamma(alpha, gamma).unwrap();
        assert!(
            (q - c).abs() < 1e-6 * c.abs().max(1.0),
            "({alpha}, {gamma}): {q} vs {c}"
        );
    }
}

#[test]
fn kernel_poles() {
    assert!(kernel_c(0.0).is_err() && kernel_c(1.0).is_err());
    assert!(kernel_c_gamma(0.0, 0.5).is_err());
    assert!(kernel_c_gamma(0.5, 0.0).is_err());
    assert!((kernel_c(0.5).unwrap() + 2.0 * std::f64::consts::PI).abs() < 1e-13);
    // B(x, y) = B(y, x), and B(1, 1) = 1.
    assert!((beta_fn(0.3, 2.5).unwrap() - beta_fn(2.5, 0.3).unwrap()).abs() < 1e-13);
    assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn symmetric_pairs() {
    for x in [0.1, 0.25, 0.4] {
        let y = 1.0 - x;
        assert!((fisher_policy_limit(x, y).unwrap() - 0.5).abs() < 1e-15);
        assert!((bayes_prior_approx(x, y).unwrap() - 0.5).abs() < 1e-15);
        let (aa, _) = alphas(x, y).unwrap();
        assert!((aa - 0.5).abs() < 1e-14);
        assert!((gamma_critical(x, y).unwrap() - 2.0).abs() < 1e-12);
        assert!(sampi_first_order(x, y).unwrap().sampi.abs() < 1e-10);
    }
}

#[test]
fn tables_cover_the_grid() {
    let grid = table_grid();
    assert_eq!(grid.len(), 36);
    let (f, b) = (fisher_policy_table().unwrap(), bayes_prior_table().unwrap());
    for ((cf, cb), (xa, xb)) in f.iter().zip(&b).zip(&grid) {
        assert_eq!((cf.x_a, cf.x_b), (*xa, *xb));
        assert!(cf.x_a < cf.value && cf.value < cf.x_b);
        assert!(0.0 < cb.value && cb.value < 1.0);
    }
}

#[test]
fn zero_harmonics_is_the_zeroth_order_prior() {
    let r = phase_series_prior(0.2, 0.5, 100, 0).unwrap();
    assert_eq!(r.prior, bayes_prior_approx(0.2, 0.5).unwrap());
    assert!(r.converged);
    // With harmonics the prior moves only by the tiny phase term when β is small.
    let r = phase_series_prior(0.2, 0.5, 100, 3).unwrap();
    assert!(r.converged && (r.prior - bayes_prior_approx(0.2, 0.5).unwrap()).abs() < 1e-4);
}

#[test]
fn phase_is_periodic_in_n() {
    let x0 = fisher_policy_limit(0.3, 0.7).unwrap();
    assert!((x0 - 0.5).abs() < 1e-15);
    assert!({
        let p = phase(0.3, 0.7, 2).unwrap();
        !(1e-12..=2.0 * std::f64::consts::PI - 1e-12).contains(&p)
    });
    assert!((phase(0.3, 0.7, 1).unwrap() - std::f64::consts::PI).abs() < 1e-12);
    // Large N keeps fractional digits.
    let p = phase(0.2, 0.5, 1 << 40).unwrap();
    assert!((0.0..2.0 * std::f64::consts::PI).contains(&p));
}

#[test]
fn xi_without_harmonics() {
    let a: f64 = 0.3;
    let want = ((1.0 - a) / a).ln();
    assert!((xi(0.0, a, 2.0, 1.0, 0).unwrap() - want).abs() < 1e-14);
}

#[test]
fn asymptotic_bundle_is_consistent() {
    let r = asymptotics(0.2, 0.5, 100).unwrap();
    assert!((r.alpha_a - r.alpha_b - 1.0).abs() < 1e-12);
    assert!((r.theta_first_order - (r.theta_approx + r.sampi / 100.0)).abs() < 1e-15);
    assert!((r.epsilon - rate_function(r.x0_star, 0.5).unwrap().i).abs() < 1e-12);
    let p = 1.0 / (1.0 + (-r.theta_approx).exp());
    assert!((p - r.p_approx).abs() < 1e-12);
}

#[test]
fn bayes_prior_approaches_its_limit() {
    let cfg = SolverConfig {
        tol: 1e-13,
        ..SolverConfig::default()
    };
    let theta = |n: u64| {
        solve_bayes_dist(&binom_pmfs(n, 0.2, 0.5).unwrap(), &cfg, false)
            .unwrap()
            .theta_star
            .unwrap()
    };
    let s = sampi_first_order(0.2, 0.5).unwrap();
    let gaps: Vec<f64> = [100u64, 400, 1600]
        .iter()
        .map(|&n| (n as f64 * (theta(n) - s.theta_approx) - s.sampi).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!((theta(1600) - s.theta_approx).abs() < 5e-3);
}
