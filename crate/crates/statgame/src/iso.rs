//! Isoelastic betting games and generalized entropies.
//!
//! PI has utility `u_γ(c) = (c^{1−γ} − 1)/(1 − γ)`; `γ = 1` is the log-utility
//! game of [`crate::bayes`] and `γ → 0` recovers the win/lose game.

use alloc::format;
use alloc::vec::Vec;

use crate::bayes::{self, SolverConfig};
use crate::dist::{
    classify, hypergeom_pmfs, rational_to_f64, GameClass, GameSpec, ScenarioDistributions,
};
use crate::error::{Error, Result};
use crate::fisher::solve_fisher;
use crate::numeric::{bisect_increasing, ln, log_add_exp, log_sum_exp, logit, sigmoid, softplus};

/// Largest contraction bound for which `Φ` is iterated instead of bisected.
pub const PHI_ITERATION_LIMIT: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsoMethod {
    PhiIteration,
    Bisection,
    /// `γ = 1`, solved by the log-utility solver.
    Bayes,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoEquilibrium {
    pub class: GameClass,
    pub swapped: bool,
    pub gamma: f64,
    pub p_star: Option<f64>,
    pub theta_star: Option<f64>,
    pub splits: Vec<(u64, f64)>,
    pub u_star: f64,
    pub err_bound: f64,
    /// `tanh(Λ̄/(2γ))`, defined only when both scenarios have the same support.
    pub contraction_bound: Option<f64>,
    pub method: IsoMethod,
    pub iterations: usize,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "gamma = {gamma} must be positive"
        )))
    }
}

/// `u_γ(c)`; `−∞` at `c = 0` when `γ ≥ 1`.
pub fn utility(c: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::DomainError(format!(
            "capital fraction {c} not in [0,1]"
        )));
    }
    if gamma == 1.0 {
        return Ok(ln(c));
    }
    if c == 0.0 {
        return Ok(if gamma > 1.0 {
            f64::NEG_INFINITY
        } else {
            -1.0 / (1.0 - gamma)
        });
    }
    Ok(libm::expm1((1.0 - gamma) * libm::log(c)) / (1.0 - gamma))
}

struct Logs {
    k: Vec<u64>,
    la: Vec<f64>,
    lb: Vec<f64>,
}

impl Logs {
    fn new(d: &ScenarioDistributions<f64>) -> Self {
        let mut s = Logs {
            k: Vec::new(),
            la: Vec::new(),
            lb: Vec::new(),
        };
        for (k, (&a, &b)) in d.pmf_a.iter().zip(&d.pmf_b).enumerate() {
            if a > 0.0 || b > 0.0 {
                s.k.push(k as u64);
                s.la.push(ln(a));
                s.lb.push(ln(b));
            }
        }
        s
    }

    fn len(&self) -> usize {
        self.k.len()
    }

    /// Log-odds of the split on A at count index `i`.
    fn z(&self, i: usize, theta: f64, gamma: f64) -> f64 {
        match (self.la[i].is_finite(), self.lb[i].is_finite()) {
            (true, true) => (theta + self.la[i] - self.lb[i]) / gamma,
            (true, false) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        }
    }
}

fn log_sigmoid(z: f64) -> f64 {
    if z == f64::INFINITY {
        0.0
    } else if z == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        -softplus(-z)
    }
}

/// `p'_{γ,k}(P) = (P p_k(A))^{1/γ} / ((P p_k(A))^{1/γ} + ((1−P) p_k(B))^{1/γ})`.
pub fn split(p: f64, d: &ScenarioDistributions<f64>, gamma: f64) -> Result<Vec<(u64, f64)>> {
    check_gamma(gamma)?;
    check_prob(p)?;
    Ok(splits_at(&Logs::new(d), logit(p), gamma))
}

fn splits_at(l: &Logs, theta: f64, gamma: f64) -> Vec<(u64, f64)> {
    (0..l.len())
        .map(|i| (l.k[i], sigmoid(l.z(i, theta, gamma))))
        .collect()
}

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("P = {p} is not in (0,1)")))
    }
}

/// `U_γ(P)` with PI's splits at their optimum, `(Σ_k S_k^γ − 1)/(1 − γ)`.
pub fn expected_utility(p: f64, d: &ScenarioDistributions<f64>, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_prob(p)?;
    if gamma == 1.0 {
        return bayes::delta_g(p, d);
    }
    let l = Logs::new(d);
    let (lp, lq) = (libm::log(p), libm::log1p(-p));
    let terms =
        (0..l.len()).map(|i| gamma * log_add_exp((lp + l.la[i]) / gamma, (lq + l.lb[i]) / gamma));
    let lse = log_sum_exp(terms);
    Ok(libm::expm1(lse) / (1.0 - gamma))
}

/// Sign-adjusted `log(Σ p_k(A) p'^{1−γ}) − log(Σ p_k(B) (1−p')^{1−γ})`; increasing in `ϑ`, zero at `ϑ*_γ`.
///
/// Each side is `log1p(Σ w (s^{1−γ} − 1))` over a normalized pmf, so only the
/// overlap of the scenarios contributes and nearly separable games keep precision.
fn indifference(l: &Logs, theta: f64, gamma: f64) -> f64 {
    let g1 = 1.0 - gamma;
    let side = |first: bool| {
        let excess: f64 = (0..l.len())
            .filter_map(|i| {
                let z = l.z(i, theta, gamma);
                let (lw, ls) = if first {
                    (l.la[i], log_sigmoid(z))
                } else {
                    (l.lb[i], log_sigmoid(-z))
                };
                if !lw.is_finite() {
                    return None;
                }
                let x = g1 * ls;
                Some(if x > 1.0 {
                    libm::exp(lw + x) - libm::exp(lw)
                } else {
                    libm::exp(lw) * libm::expm1(x)
                })
            })
            .sum();
        libm::log1p(excess)
    };
    let h = side(true) - side(false);
    if g1 > 0.0 {
        h
    } else {
        -h
    }
}

fn phi_logs(l: &Logs, theta: f64, gamma: f64) -> (f64, f64) {
    let h = 0.5 * theta / gamma;
    let g1 = 1.0 - gamma;
    let log_a = |i: usize| log_add_exp(h + l.la[i] / gamma, -h + l.lb[i] / gamma);
    let sa = log_sum_exp((0..l.len()).map(move |i| l.la[i] / gamma - g1 * log_a(i)));
    let sb = log_sum_exp((0..l.len()).map(move |i| l.lb[i] / gamma - g1 * log_a(i)));
    (sa, sb)
}

/// The contraction `Φ(ϑ)` whose fixed point is `ϑ*_γ` (`γ ≠ 1`).
pub fn phi(theta: f64, d: &ScenarioDistributions<f64>, gamma: f64) -> f64 {
    let (sa, sb) = phi_logs(&Logs::new(d), theta, gamma);
    -gamma / (1.0 - gamma) * (sa - sb)
}

pub fn phi_prime(theta: f64, d: &ScenarioDistributions<f64>, gamma: f64) -> f64 {
    let l = Logs::new(d);
    let h = 0.5 * theta / gamma;
    let g1 = 1.0 - gamma;
    let mut acc = [(0.0, 0.0); 2];
    for i in 0..l.len() {
        let (u, v) = (h + l.la[i] / gamma, -h + l.lb[i] / gamma);
        let la = log_add_exp(u, v);
        let t = if u.is_finite() && v.is_finite() {
            libm::tanh(0.5 * (u - v))
        } else if u.is_finite() {
            1.0
        } else {
            -1.0
        };
        for (s, lw) in [(0, l.la[i]), (1, l.lb[i])] {
            if lw.is_finite() {
                let w = libm::exp(lw / gamma - g1 * la);
                acc[s].0 += w * t;
                acc[s].1 += w;
            }
        }
    }
    0.5 * (acc[0].0 / acc[0].1 - acc[1].0 / acc[1].1)
}

/// `Λ̄ = max_{k,ℓ} ½ |log(p_k(A) p_ℓ(B) / (p_ℓ(A) p_k(B)))|`, or `None` when the supports differ.
pub fn lambda_bar(d: &ScenarioDistributions<f64>) -> Option<f64> {
    if !d.same_support() || d.support_ab.is_none() {
        return None;
    }
    let l = Logs::new(d);
    let r = (0..l.len()).map(|i| l.la[i] - l.lb[i]);
    let hi = r.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = r.fold(f64::INFINITY, f64::min);
    Some(0.5 * (hi - lo))
}

/// Global bound `(1 − e^{−Λ̄/γ})/(1 + e^{−Λ̄/γ})` on `|Φ′|`.
pub fn contraction_bound(d: &ScenarioDistributions<f64>, gamma: f64) -> Option<f64> {
    lambda_bar(d).map(|lb| libm::tanh(0.5 * lb / gamma))
}

fn shell(
    class: GameClass,
    swapped: bool,
    d: &ScenarioDistributions<f64>,
    gamma: f64,
) -> Result<IsoEquilibrium> {
    let l = Logs::new(d);
    let blind = class == GameClass::BlindGuessing;
    let splits = splits_at(&l, 0.0, gamma)
        .into_iter()
        .map(|(k, s)| (k, if blind { 0.5 } else { s }))
        .collect();
    Ok(IsoEquilibrium {
        class,
        swapped,
        gamma,
        p_star: blind.then_some(0.5),
        theta_star: blind.then_some(0.0),
        splits,
        u_star: if blind { utility(0.5, gamma)? } else { 0.0 },
        err_bound: 0.0,
        contraction_bound: None,
        method: IsoMethod::Bisection,
        iterations: 0,
    })
}

/// Equilibrium of `SG(N, K_A, K_B, M, γ)`.
pub fn solve_iso(spec: &GameSpec, gamma: f64, tol: f64) -> Result<IsoEquilibrium> {
    spec.validate()?;
    check_gamma(gamma)?;
    let (canon, swapped) = spec.canonical();
    let class = classify(&canon);
    let d = hypergeom_pmfs(&canon)?.to_f64();
    if class != GameClass::Nontrivial {
        return shell(class, swapped, &d, gamma);
    }
    solve_iso_dist(&d, gamma, tol, swapped)
}

pub fn solve_iso_dist(
    d: &ScenarioDistributions<f64>,
    gamma: f64,
    tol: f64,
    swapped: bool,
) -> Result<IsoEquilibrium> {
    check_gamma(gamma)?;
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if d.support_ab.is_none() {
        return shell(GameClass::SureWinning, swapped, d, gamma);
    }
    if !d
        .pmf_a
        .iter()
        .zip(&d.pmf_b)
        .any(|(a, b)| *a > 0.0 && *b > 0.0)
    {
        return Err(Error::DomainError(
            "scenario pmfs overlap only below f64 range".into(),
        ));
    }
    let l = Logs::new(d);
    let bound = contraction_bound(d, gamma);
    let (theta, err_bound, method, iterations) = if gamma == 1.0 {
        let cfg = SolverConfig {
            tol,
            ..SolverConfig::default()
        };
        let eq = bayes::solve_bayes_dist(d, &cfg, swapped)?;
        (
            eq.theta_star.unwrap_or(0.0),
            eq.err_bound,
            IsoMethod::Bayes,
            eq.iterations,
        )
    } else {
        // Near γ = 1 the factor γ/(1−γ) in Φ amplifies rounding above tol, so the iteration can stall.
        match bound
            .filter(|&q| q <= PHI_ITERATION_LIMIT)
            .map(|q| iterate_phi(&l, gamma, q, tol))
        {
            Some(Ok(r)) => r,
            _ => {
                let r = bisect_increasing(|t| indifference(&l, t, gamma), tol, 10_000)?;
                (r.root, r.half_width, IsoMethod::Bisection, r.iterations)
            }
        }
    };
    let p = sigmoid(theta);
    Ok(IsoEquilibrium {
        class: GameClass::Nontrivial,
        swapped,
        gamma,
        p_star: Some(p),
        theta_star: Some(theta),
        splits: splits_at(&l, theta, gamma),
        u_star: expected_utility(p, d, gamma)?,
        err_bound,
        contraction_bound: bound,
        method,
        iterations,
    })
}

fn iterate_phi(l: &Logs, gamma: f64, q: f64, tol: f64) -> Result<(f64, f64, IsoMethod, usize)> {
    let mut theta = 0.0;
    for it in 1..=10_000 {
        let (sa, sb) = phi_logs(l, theta, gamma);
        let next = -gamma / (1.0 - gamma) * (sa - sb);
        let err = q / (1.0 - q) * (next - theta).abs();
        theta = next;
        if err <= tol {
            return Ok((theta, err, IsoMethod::PhiIteration, it));
        }
    }
    Err(Error::NoConvergence { iterations: 10_000 })
}

/// Convergence of the isoelastic equilibrium to the win/lose one as `γ → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnificationReport {
    /// `(γ, P*_γ, p'_{γ,k*})` in grid order.
    pub rows: Vec<(f64, f64, f64)>,
    pub p_star_fisher: f64,
    pub nu_star: f64,
    pub k_star: u64,
    pub max_dev_prior: f64,
    pub max_dev_split: f64,
    /// Richardson estimate of `dϑ*_γ/dγ` at zero from `γ ∈ {1e-2, 5e-3, 2.5e-3}`.
    pub slope: f64,
    /// `log(ν*/(1 − ν*))`.
    pub slope_expected: f64,
}

pub fn gamma_to_zero_check(spec: &GameSpec, gamma_grid: &[f64]) -> Result<UnificationReport> {
    let f = solve_fisher(spec)?;
    let (Some(k), Some(nu), Some(p0)) = (f.k_star, f.nu_star.as_ref(), f.p_star.as_ref()) else {
        return Err(Error::Degenerate(f.class));
    };
    let nu = rational_to_f64(nu);
    if nu == 0.0 {
        return Err(Error::Degenerate(GameClass::Nontrivial));
    }
    let p0 = rational_to_f64(p0);
    let solve = |g: f64| -> Result<(f64, f64, f64)> {
        let eq = solve_iso(spec, g, 1e-13)?;
        let s = eq
            .splits
            .iter()
            .find(|s| s.0 == k)
            .map_or(f64::NAN, |s| s.1);
        Ok((
            eq.p_star.unwrap_or(f64::NAN),
            eq.theta_star.unwrap_or(f64::NAN),
            s,
        ))
    };
    let mut rows = Vec::new();
    let (mut dp, mut ds) = (0.0_f64, 0.0_f64);
    for &g in gamma_grid {
        let (p, _, s) = solve(g)?;
        rows.push((g, p, s));
        dp = dp.max((p - p0).abs());
        ds = ds.max((s - nu).abs());
    }
    let theta0 = logit(p0);
    let h = 5e-3;
    let (_, t1, _) = solve(2.0 * h)?;
    let (_, t2, _) = solve(h)?;
    let (_, t3, _) = solve(0.5 * h)?;
    let (s1, s2, s3) = (
        (t1 - theta0) / (2.0 * h),
        (t2 - theta0) / h,
        (t3 - theta0) / (0.5 * h),
    );
    // Two levels of Richardson on a first-order difference quotient.
    let (r1, r2) = (2.0 * s2 - s1, 2.0 * s3 - s2);
    let slope = (4.0 * r2 - r1) / 3.0;
    Ok(UnificationReport {
        rows,
        p_star_fisher: p0,
        nu_star: nu,
        k_star: k,
        max_dev_prior: dp,
        max_dev_split: ds,
        slope,
        slope_expected: libm::log(nu / (1.0 - nu)),
    })
}

fn check_normalized(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::DomainError(format!(
            "negative or NaN probability in {p:?}"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "order {order} must be positive"
        )))
    }
}

pub fn entropy_shannon(p: &[f64]) -> Result<f64> {
    check_normalized(p)?;
    Ok(shannon(p))
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * libm::log(x))
        .sum::<f64>()
}

/// `log Σ p_k^s` over the positive entries.
fn log_power_sum(p: &[f64], s: f64) -> f64 {
    log_sum_exp(
        p.iter()
            .filter(|&&x| x > 0.0)
            .map(move |&x| s * libm::log(x)),
    )
}

/// `H^EU_γ(p) = (1 − ||p||_{1/γ})/(1 − γ)`; Shannon at `γ = 1`.
pub fn entropy_eu(p: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_normalized(p)?;
    if gamma == 1.0 {
        return Ok(shannon(p));
    }
    Ok(-libm::expm1(gamma * log_power_sum(p, 1.0 / gamma)) / (1.0 - gamma))
}

/// Rényi entropy of order `α`; Shannon at `α = 1`.
pub fn entropy_renyi(p: &[f64], alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    check_normalized(p)?;
    Ok(renyi(p, alpha))
}

fn renyi(p: &[f64], alpha: f64) -> f64 {
    if alpha == 1.0 {
        shannon(p)
    } else {
        log_power_sum(p, alpha) / (1.0 - alpha)
    }
}

/// Tsallis entropy of order `q`; Shannon at `q = 1`.
pub fn entropy_tsallis(p: &[f64], q: f64) -> Result<f64> {
    check_order(q)?;
    check_normalized(p)?;
    Ok(tsallis(p, q))
}

fn tsallis(p: &[f64], q: f64) -> f64 {
    if q == 1.0 {
        shannon(p)
    } else {
        libm::expm1(log_power_sum(p, q)) / (1.0 - q)
    }
}

pub fn entropy_renyi_with_gamma(p: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    entropy_renyi(p, 1.0 / gamma)
}

pub fn entropy_tsallis_with_gamma(p: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    entropy_tsallis(p, 1.0 / gamma)
}

/// `joint[x][y]`; rows are the conditioning variable.
fn check_joint(joint: &[Vec<f64>]) -> Result<Vec<f64>> {
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    check_normalized(&flat)?;
    Ok(joint.iter().map(|r| r.iter().sum()).collect())
}

/// `H^EU_γ[Y|X] = (1 − Σ_x ||p(x, ·)||_{1/γ})/(1 − γ)`.
pub fn conditional_entropy_eu(joint: &[Vec<f64>], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_joint(joint)?;
    Ok(cond_eu(joint, gamma))
}

fn cond_eu(joint: &[Vec<f64>], gamma: f64) -> f64 {
    if gamma == 1.0 {
        return cond_renyi(joint, 1.0);
    }
    let lse = log_sum_exp(joint.iter().map(|r| gamma * log_power_sum(r, 1.0 / gamma)));
    -libm::expm1(lse) / (1.0 - gamma)
}

/// `E_x H_α(Y | X = x)`.
pub fn conditional_entropy_renyi(joint: &[Vec<f64>], alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    check_joint(joint)?;
    Ok(cond_renyi(joint, alpha))
}

fn cond_renyi(joint: &[Vec<f64>], alpha: f64) -> f64 {
    joint
        .iter()
        .map(|r| {
            let m: f64 = r.iter().sum();
            if m > 0.0 {
                let post: Vec<f64> = r.iter().map(|x| x / m).collect();
                m * renyi(&post, alpha)
            } else {
                0.0
            }
        })
        .sum()
}

/// `(S_q(X,Y) − S_q(X))/(1 + (1 − q) S_q(X))`.
pub fn conditional_entropy_tsallis(joint: &[Vec<f64>], q: f64) -> Result<f64> {
    check_order(q)?;
    let marginal = check_joint(joint)?;
    Ok(cond_tsallis(joint, &marginal, q))
}

fn cond_tsallis(joint: &[Vec<f64>], marginal: &[f64], q: f64) -> f64 {
    if q == 1.0 {
        return cond_renyi(joint, 1.0);
    }
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    // In log space: S(X,Y) − S(X) = (e^{L_XY} − e^{L_X})/(1−q) and 1 + (1−q)S(X) = e^{L_X}.
    let (lxy, lx) = (log_power_sum(&flat, q), log_power_sum(marginal, q));
    libm::expm1(lxy - lx) / (1.0 - q)
}

/// `D^γ_EU(p‖q) = γ/(1 − γ) log Σ q_k (p_k/q_k)^{1/γ}`; KL divergence at `γ = 1`.
pub fn divergence_eu(p: &[f64], q: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_normalized(p)?;
    check_normalized(q)?;
    if p.len() != q.len() {
        return Err(Error::DomainError(format!(
            "lengths {} and {} differ",
            p.len(),
            q.len()
        )));
    }
    if p.iter().zip(q).any(|(&a, &b)| a > 0.0 && b <= 0.0) {
        return Err(Error::SupportViolation);
    }
    let pairs = p.iter().zip(q).filter(|(&a, _)| a > 0.0);
    if gamma == 1.0 {
        return Ok(pairs.map(|(&a, &b)| a * libm::log(a / b)).sum());
    }
    let s = 1.0 / gamma;
    let lse = log_sum_exp(pairs.map(move |(&a, &b)| s * libm::log(a) + (1.0 - s) * libm::log(b)));
    Ok(gamma / (1.0 - gamma) * lse)
}

/// Priors maximizing each conditional entropy of the scenario given the count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyCriteria {
    pub gamma: f64,
    pub expected_utility: f64,
    pub renyi: f64,
    pub tsallis: f64,
}

/// Joint pmf of `(count, scenario)` under prior `P`.
pub fn scenario_joint(p: f64, d: &ScenarioDistributions<f64>) -> Vec<Vec<f64>> {
    d.pmf_a
        .iter()
        .zip(&d.pmf_b)
        .map(|(a, b)| alloc::vec![p * a, (1.0 - p) * b])
        .collect()
}

pub fn prior_vs_entropy_criteria(spec: &GameSpec, gamma: f64) -> Result<EntropyCriteria> {
    spec.validate()?;
    check_gamma(gamma)?;
    let (canon, _) = spec.canonical();
    let class = classify(&canon);
    if class != GameClass::Nontrivial {
        return Err(Error::Degenerate(class));
    }
    let d = hypergeom_pmfs(&canon)?.to_f64();
    let eu = solve_iso_dist(&d, gamma, 1e-12, false)?
        .p_star
        .unwrap_or(f64::NAN);
    let order = 1.0 / gamma;
    let renyi = maximize_prior(|p| cond_renyi(&scenario_joint(p, &d), order));
    let tsallis = maximize_prior(|p| {
        let j = scenario_joint(p, &d);
        let m: Vec<f64> = j.iter().map(|r| r.iter().sum()).collect();
        if order == 1.0 {
            return cond_renyi(&j, 1.0);
        }
        // Same argmax as expm1(L)/(1 − q), which saturates at 1/(q − 1) for large q.
        let flat: Vec<f64> = j.iter().flatten().copied().collect();
        (log_power_sum(&flat, order) - log_power_sum(&m, order)) * (1.0 - order).signum()
    });
    Ok(EntropyCriteria {
        gamma,
        expected_utility: eu,
        renyi,
        tsallis,
    })
}

/// Grid scan in log-odds followed by golden-section refinement.
fn maximize_prior(f: impl Fn(f64) -> f64) -> f64 {
    let g = |t: f64| f(sigmoid(t));
    let n = 800;
    let (lo, hi) = (-20.0, 20.0);
    let step = (hi - lo) / n as f64;
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=n {
        let v = g(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    let (mut a, mut b) = (
        lo + step * (best as f64 - 1.0),
        lo + step * (best as f64 + 1.0),
    );
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let (mut c, mut e) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fe) = (g(c), g(e));
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = g(e);
        }
    }
    sigmoid(0.5 * (a + b))
}
