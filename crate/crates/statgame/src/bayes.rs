//! Log-utility betting games.
//!
//! PI splits its capital `p'_k` on scenario A after observing `k` ones; PII picks
//! the scenario with prior `P`. The equilibrium prior minimizes the growth-rate
//! difference `ΔG(P)`, a strictly convex function, and every solver here
//! reports a bound on `|ϑ̂ − ϑ*|` in log-odds.

use alloc::format;
use alloc::vec::Vec;

use crate::dist::{classify, hypergeom_pmfs, GameClass, GameSpec, ScenarioDistributions};
use crate::error::{Error, Result};
use crate::numeric::{
    bisect_increasing, bracket_increasing, ln, log_add_exp, logit, sigmoid, softplus,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Bisection,
    FixedPoint,
    Interval,
    Newton,
    /// Fixed point of the restricted map in the `χ` variable.
    Restricted,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 10_000,
            method: Method::Auto,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        SolverConfig {
            method,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "tol must be positive, got {}",
                self.tol
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BettingEquilibrium {
    pub class: GameClass,
    pub swapped: bool,
    /// Absent for sure-winning games.
    pub p_star: Option<f64>,
    pub theta_star: Option<f64>,
    /// `(k, p'_k)` for every count possible under some scenario.
    pub splits: Vec<(u64, f64)>,
    pub delta_g: f64,
    /// `G* / log 2` where `G* = ΔG* + log 2`.
    pub g_over_log2: f64,
    pub err_bound: f64,
    pub method: Method,
    pub iterations: usize,
}

/// Per-count data with logs precomputed.
struct Terms {
    k: Vec<u64>,
    a: Vec<f64>,
    b: Vec<f64>,
    la: Vec<f64>,
    lb: Vec<f64>,
}

impl Terms {
    fn new(d: &ScenarioDistributions<f64>) -> Self {
        let mut t = Terms {
            k: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            la: Vec::new(),
            lb: Vec::new(),
        };
        for (k, (&a, &b)) in d.pmf_a.iter().zip(&d.pmf_b).enumerate() {
            if a > 0.0 || b > 0.0 {
                t.k.push(k as u64);
                t.a.push(a);
                t.b.push(b);
                t.la.push(ln(a));
                t.lb.push(ln(b));
            }
        }
        t
    }

    fn len(&self) -> usize {
        self.k.len()
    }

    fn both(&self, i: usize) -> bool {
        self.a[i] > 0.0 && self.b[i] > 0.0
    }

    /// `H_A − H_B`, optionally restricted to the common support.
    fn delta_h(&self, common_only: bool) -> f64 {
        (0..self.len())
            .filter(|&i| !common_only || self.both(i))
            .map(|i| xlogx(self.b[i]) - xlogx(self.a[i]))
            .sum()
    }

    fn split(&self, i: usize, theta: f64) -> f64 {
        split_at(theta, self.la[i], self.lb[i])
    }
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * libm::log(x)
    } else {
        0.0
    }
}

fn split_at(theta: f64, la: f64, lb: f64) -> f64 {
    if la == f64::NEG_INFINITY {
        0.0
    } else if lb == f64::NEG_INFINITY {
        1.0
    } else {
        sigmoid(theta + la - lb)
    }
}

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("P = {p} is not in (0,1)")))
    }
}

/// Growth-rate difference `ΔG(P) = P log P + (1−P) log(1−P) − P H_A − (1−P) H_B − Σ m_k log m_k`.
pub fn delta_g(p: f64, d: &ScenarioDistributions<f64>) -> Result<f64> {
    check_prob(p)?;
    let t = Terms::new(d);
    let (lp, lq) = (libm::log(p), libm::log1p(-p));
    let mut h_a = 0.0;
    let mut h_b = 0.0;
    let mut mlogm = 0.0;
    for i in 0..t.len() {
        h_a -= xlogx(t.a[i]);
        h_b -= xlogx(t.b[i]);
        mlogm += xlogx(p * t.a[i] + (1.0 - p) * t.b[i]);
    }
    Ok(p * lp + (1.0 - p) * lq - p * h_a - (1.0 - p) * h_b - mlogm)
}

/// `(ΔG′(P), ΔG″(P))`.
pub fn delta_g_derivs(p: f64, d: &ScenarioDistributions<f64>) -> Result<(f64, f64)> {
    check_prob(p)?;
    let t = Terms::new(d);
    let theta = logit(p);
    let first = g_terms(&t, theta);
    let second = (0..t.len())
        .filter(|&i| t.both(i))
        .map(|i| t.a[i] * t.b[i] / (p * t.a[i] + (1.0 - p) * t.b[i]))
        .sum::<f64>()
        / (p * (1.0 - p));
    Ok((first, second))
}

/// Per-scenario growth differences `(Σ p_k(A) log p'_k, Σ p_k(B) log(1 − p'_k))`.
pub fn delta_g_scenarios(p: f64, d: &ScenarioDistributions<f64>) -> Result<(f64, f64)> {
    check_prob(p)?;
    let t = Terms::new(d);
    let theta = logit(p);
    let mut ga = 0.0;
    let mut gb = 0.0;
    for i in 0..t.len() {
        // log p' = -softplus(-(ϑ + la - lb)), log(1-p') = -softplus(ϑ + la - lb)
        if t.a[i] > 0.0 {
            let z = if t.b[i] > 0.0 {
                theta + t.la[i] - t.lb[i]
            } else {
                f64::INFINITY
            };
            ga -= t.a[i] * if z.is_infinite() { 0.0 } else { softplus(-z) };
        }
        if t.b[i] > 0.0 {
            let z = if t.a[i] > 0.0 {
                theta + t.la[i] - t.lb[i]
            } else {
                f64::NEG_INFINITY
            };
            gb -= t.b[i] * if z.is_infinite() { 0.0 } else { softplus(z) };
        }
    }
    Ok((ga, gb))
}

/// PI's optimal splits `p'_k` against prior `P`.
pub fn splits(p: f64, d: &ScenarioDistributions<f64>) -> Result<Vec<(u64, f64)>> {
    check_prob(p)?;
    Ok(splits_at_theta(logit(p), d))
}

fn splits_at_theta(theta: f64, d: &ScenarioDistributions<f64>) -> Vec<(u64, f64)> {
    let t = Terms::new(d);
    (0..t.len()).map(|i| (t.k[i], t.split(i, theta))).collect()
}

/// `ϑ − F(ϑ) = Σ p_k(B) softplus(ϑ + la − lb) − Σ p_k(A) softplus(lb − la − ϑ)`.
///
/// Both sums only see the overlap of the pmfs, so the value keeps its relative
/// precision when the scenarios are nearly separable.
fn g_terms(t: &Terms, theta: f64) -> f64 {
    let (mut up, mut down) = (0.0, 0.0);
    for i in 0..t.len() {
        let z = theta + t.la[i] - t.lb[i];
        if t.b[i] > 0.0 {
            up += t.b[i] * softplus(z);
        }
        if t.a[i] > 0.0 {
            down += t.a[i] * softplus(-z);
        }
    }
    up - down
}

/// `1 − F′(ϑ)`, again summed over the overlap only.
fn gp_terms(t: &Terms, theta: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..t.len() {
        let z = theta + t.la[i] - t.lb[i];
        if t.b[i] > 0.0 {
            s += t.b[i] * sigmoid(z);
        }
        if t.a[i] > 0.0 {
            s += t.a[i] * sigmoid(-z);
        }
    }
    s
}

fn f_terms(t: &Terms, theta: f64) -> f64 {
    theta - g_terms(t, theta)
}

fn f_prime_terms(t: &Terms, theta: f64) -> f64 {
    (0..t.len())
        .map(|i| (t.a[i] - t.b[i]) * t.split(i, theta))
        .sum()
}

/// The fixed-point map `F(ϑ) = ΔH + Σ (p_k(A) − p_k(B)) log(e^{ϑ/2} p_k(A) + e^{−ϑ/2} p_k(B))`.
pub fn f_map(theta: f64, d: &ScenarioDistributions<f64>) -> f64 {
    let t = Terms::new(d);
    f_terms(&t, theta)
}

pub fn f_map_prime(theta: f64, d: &ScenarioDistributions<f64>) -> f64 {
    f_prime_terms(&Terms::new(d), theta)
}

/// Lipschitz constant of `F`: the total variation distance of the two pmfs.
pub fn contraction_q(d: &ScenarioDistributions<f64>) -> f64 {
    0.5 * d
        .pmf_a
        .iter()
        .zip(&d.pmf_b)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

/// Root estimate in log-odds with a guaranteed error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaEstimate {
    pub theta: f64,
    pub err_bound: f64,
    pub iterations: usize,
}

pub fn method_bisection(
    d: &ScenarioDistributions<f64>,
    cfg: &SolverConfig,
) -> Result<ThetaEstimate> {
    cfg.check()?;
    let t = Terms::new(d);
    let r = bisect_increasing(|x| g_terms(&t, x), cfg.tol, cfg.max_iter)?;
    Ok(ThetaEstimate {
        theta: r.root,
        err_bound: r.half_width,
        iterations: r.iterations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointResult {
    pub theta: f64,
    pub err_bound: f64,
    pub q: f64,
    pub iterations: usize,
    /// `|ϑ_n − ϑ_{n−1}|` for each iteration.
    pub steps: Vec<f64>,
}

pub fn method_fixed_point(
    d: &ScenarioDistributions<f64>,
    cfg: &SolverConfig,
) -> Result<FixedPointResult> {
    cfg.check()?;
    let q = contraction_q(d);
    // 1 − q summed directly, since 1 − TV cancels when the pmfs barely overlap.
    let overlap: f64 = d.pmf_a.iter().zip(&d.pmf_b).map(|(a, b)| a.min(*b)).sum();
    if overlap <= 0.0 {
        return Err(Error::NotContractive { q });
    }
    let t = Terms::new(d);
    let mut theta = 0.0;
    let mut steps = Vec::new();
    for it in 1..=cfg.max_iter {
        let next = f_terms(&t, theta);
        let step = (next - theta).abs();
        steps.push(step);
        theta = next;
        let err = step / overlap;
        if err <= cfg.tol {
            return Ok(FixedPointResult {
                theta,
                err_bound: err,
                q,
                iterations: it,
                steps,
            });
        }
        // Give up early when geometric decay at rate q cannot reach tol in time.
        let needed = libm::log(cfg.tol / err) / libm::log1p(-overlap);
        if it == 1 && needed > cfg.max_iter as f64 {
            return Err(Error::NoConvergence { iterations: it });
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalResult {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    /// Width of `F_n` for `n = 1, 2, ...`.
    pub widths: Vec<f64>,
}

impl IntervalResult {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

fn pad(x: f64) -> f64 {
    4.0 * f64::EPSILON * (1.0 + x.abs())
}

pub fn method_interval(
    d: &ScenarioDistributions<f64>,
    cfg: &SolverConfig,
) -> Result<IntervalResult> {
    cfg.check()?;
    if !d.same_support() {
        return Err(Error::SupportMismatch);
    }
    let t = Terms::new(d);
    let q = contraction_q(d);
    let (mut kl_ab, mut kl_ba) = (0.0, 0.0);
    for i in 0..t.len() {
        kl_ab += t.a[i] * (t.la[i] - t.lb[i]);
        kl_ba += t.b[i] * (t.lb[i] - t.la[i]);
    }
    let (mut lo, mut hi) = (-kl_ab, kl_ba);
    let mut widths = alloc::vec![hi - lo];
    for it in 1..=cfg.max_iter {
        if 0.5 * (hi - lo) <= cfg.tol {
            return Ok(IntervalResult {
                lo,
                hi,
                iterations: it,
                widths,
            });
        }
        // Rigorous bounds on F′ over [lo, hi]: each split is increasing in ϑ.
        let (mut dmin, mut dmax) = (0.0, 0.0);
        for i in 0..t.len() {
            let w = t.a[i] - t.b[i];
            let (s_lo, s_hi) = (t.split(i, lo), t.split(i, hi));
            if w > 0.0 {
                dmin += w * s_lo;
                dmax += w * s_hi;
            } else {
                dmin += w * s_hi;
                dmax += w * s_lo;
            }
        }
        let (f_lo, f_hi) = if dmin >= 0.0 {
            (f_terms(&t, lo), f_terms(&t, hi))
        } else if dmax <= 0.0 {
            (f_terms(&t, hi), f_terms(&t, lo))
        } else {
            let mid = 0.5 * (lo + hi);
            let fm = f_terms(&t, mid);
            let rad = q * 0.5 * (hi - lo);
            (fm - rad, fm + rad)
        };
        let new_lo = lo.max(f_lo - pad(f_lo));
        let new_hi = hi.min(f_hi + pad(f_hi));
        if new_hi - new_lo >= hi - lo {
            return Err(Error::NoConvergence { iterations: it });
        }
        lo = new_lo;
        hi = new_hi;
        widths.push(hi - lo);
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonResult {
    pub theta: f64,
    /// Guaranteed enclosure of `ϑ*`.
    pub lower: f64,
    pub upper: f64,
    /// Bisection steps before the guard held.
    pub warmup: usize,
    pub iterations: usize,
    /// `|ϑ_n − F(ϑ_n)|` at each Newton iterate.
    pub residuals: Vec<f64>,
}

impl NewtonResult {
    pub fn err_bound(&self) -> f64 {
        (self.theta - self.lower).max(self.upper - self.theta)
    }
}

/// Offsets `(ϑ* − ϑ)` lower and upper bounds from residual `r`, slope `s = 1 − F′` and curvature bound `Q`.
fn newton_offsets(r: f64, s: f64, big_q: f64) -> (f64, f64) {
    let lin = 2.0 * r / s;
    if big_q <= 0.0 {
        return (-0.5 * lin, 0.5 * lin);
    }
    let x = 2.0 * big_q * r / (s * s);
    let down = lin / (libm::sqrt((1.0 - x).max(0.0)) + 1.0);
    let up = lin / (libm::sqrt(1.0 + x) + 1.0);
    (-down, up)
}

pub fn method_newton(d: &ScenarioDistributions<f64>, cfg: &SolverConfig) -> Result<NewtonResult> {
    cfg.check()?;
    let t = Terms::new(d);
    let big_q = 0.5 * contraction_q(d);
    let g = |x: f64| g_terms(&t, x);
    let (mut lo, mut hi) = bracket_increasing(&g)?;
    let mut theta = 0.5 * (lo + hi);
    let mut warmup = 0;
    loop {
        let gv = g_terms(&t, theta);
        let s = gp_terms(&t, theta);
        if 2.0 * big_q * gv.abs() <= s * s {
            break;
        }
        warmup += 1;
        if warmup >= cfg.max_iter || hi - lo <= cfg.tol {
            return Err(Error::GuardNotMet { iterations: warmup });
        }
        if gv < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        theta = 0.5 * (lo + hi);
    }
    let mut residuals = Vec::new();
    let mut best: Option<(f64, f64, f64)> = None;
    for it in 0..cfg.max_iter {
        let gv = g_terms(&t, theta);
        let s = gp_terms(&t, theta);
        let r = gv.abs();
        residuals.push(r);
        let (dlo, dhi) = if gv == 0.0 {
            (0.0, 0.0)
        } else {
            newton_offsets(r, s, big_q)
        };
        let (lower, upper) = (theta + dlo - pad(theta), theta + dhi + pad(theta));
        let err = (theta - lower).max(upper - theta);
        let improved = best.is_none_or(|(bt, bl, bu)| err < (bt - bl).max(bu - bt));
        if improved {
            best = Some((theta, lower, upper));
        }
        if err <= cfg.tol || !improved {
            let (theta, lower, upper) = best.unwrap_or((theta, lower, upper));
            if (theta - lower).max(upper - theta) > cfg.tol {
                return Err(Error::NoConvergence { iterations: it + 1 });
            }
            return Ok(NewtonResult {
                theta,
                lower,
                upper,
                warmup,
                iterations: it + 1,
                residuals,
            });
        }
        theta -= gv / s;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedResult {
    pub chi: f64,
    pub theta: f64,
    /// Certified by a sign change of `ΔG′` across `[ϑ − e, ϑ + e]`.
    pub err_bound: f64,
    /// Largest observed ratio of consecutive steps.
    pub contraction: f64,
    pub iterations: usize,
    /// The iteration expanded or could not be certified, so bisection produced the result.
    pub fell_back: bool,
}

pub fn method_restricted(
    d: &ScenarioDistributions<f64>,
    cfg: &SolverConfig,
) -> Result<RestrictedResult> {
    cfg.check()?;
    let t = Terms::new(d);
    let common: Vec<usize> = (0..t.len()).filter(|&i| t.both(i)).collect();
    if common.is_empty() {
        return Err(Error::Degenerate(GameClass::SureWinning));
    }
    let z_a: f64 = common.iter().map(|&i| t.a[i]).sum();
    let z_b: f64 = common.iter().map(|&i| t.b[i]).sum();
    let (s_a, s_b) = (libm::sqrt(z_a / z_b), libm::sqrt(z_b / z_a));
    let norm = libm::sqrt(z_a * z_b);
    let dh = t.delta_h(true);
    let chi_of = |th: f64| -s_a * softplus(-th) + s_b * softplus(th);
    let theta_of = |c: f64| bisect_increasing(|th| chi_of(th) - c, 0.0, 4000).map(|r| r.root);
    let f_breve = |th: f64| {
        let (lp, lq) = (-softplus(-th), -softplus(th));
        let sum: f64 = common
            .iter()
            .map(|&i| (t.a[i] - t.b[i]) * log_add_exp(lp + t.la[i], lq + t.lb[i]))
            .sum();
        (dh + sum) / norm
    };
    let g = |x: f64| g_terms(&t, x);
    // dχ/dϑ is at least this, so χ-steps bound ϑ-steps.
    let slope_min = s_a.min(s_b);

    let mut chi = 0.0;
    let mut theta = theta_of(chi)?;
    let mut prev_step = f64::INFINITY;
    let mut contraction: f64 = 0.0;
    let mut iterations = 0;
    let mut expanded = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        let next = f_breve(theta);
        let step = (next - chi).abs();
        chi = next;
        theta = theta_of(chi)?;
        if prev_step.is_finite() && prev_step > 0.0 {
            let ratio = step / prev_step;
            if step > 1e-13 * (1.0 + chi.abs()) {
                contraction = contraction.max(ratio);
                if ratio > 1.0 {
                    expanded = true;
                    break;
                }
            }
        }
        if step / slope_min <= 1e-3 * cfg.tol || step <= 4.0 * f64::EPSILON * (1.0 + chi.abs()) {
            break;
        }
        prev_step = step;
    }
    if !expanded {
        let mut e = 1e-14 * (1.0 + theta.abs());
        while e <= cfg.tol {
            if g(theta - e) <= 0.0 && g(theta + e) >= 0.0 {
                return Ok(RestrictedResult {
                    chi,
                    theta,
                    err_bound: e,
                    contraction,
                    iterations,
                    fell_back: false,
                });
            }
            e *= 2.0;
        }
    }
    let b = bisect_increasing(g, cfg.tol, cfg.max_iter)?;
    Ok(RestrictedResult {
        chi: chi_of(b.root),
        theta: b.root,
        err_bound: b.half_width,
        contraction,
        iterations: iterations + b.iterations,
        fell_back: true,
    })
}

fn shell(
    class: GameClass,
    swapped: bool,
    d: &ScenarioDistributions<f64>,
    method: Method,
) -> BettingEquilibrium {
    let t = Terms::new(d);
    let blind = class == GameClass::BlindGuessing;
    let splits = (0..t.len())
        .map(|i| (t.k[i], if blind { 0.5 } else { t.split(i, 0.0) }))
        .collect();
    BettingEquilibrium {
        class,
        swapped,
        p_star: blind.then_some(0.5),
        theta_star: blind.then_some(0.0),
        splits,
        delta_g: if blind { -core::f64::consts::LN_2 } else { 0.0 },
        g_over_log2: if blind { 0.0 } else { 1.0 },
        err_bound: 0.0,
        method,
        iterations: 0,
    }
}

/// Equilibrium of the betting game `BG(N, K_A, K_B, M)`.
///
/// `K_A > K_B` is relabelled and flagged. Blind games return `P* = 1/2` with
/// even splits; sure games return all-in splits and no prior.
pub fn solve_bayes(spec: &GameSpec, cfg: &SolverConfig) -> Result<BettingEquilibrium> {
    spec.validate()?;
    let (canon, swapped) = spec.canonical();
    let class = classify(&canon);
    let d = hypergeom_pmfs(&canon)?.to_f64();
    if class != GameClass::Nontrivial {
        cfg.check()?;
        return Ok(shell(class, swapped, &d, cfg.method));
    }
    solve_bayes_dist(&d, cfg, swapped)
}

/// Solve from explicit pmfs, which must overlap and differ.
pub fn solve_bayes_dist(
    d: &ScenarioDistributions<f64>,
    cfg: &SolverConfig,
    swapped: bool,
) -> Result<BettingEquilibrium> {
    cfg.check()?;
    if d.support_ab.is_none() {
        return Ok(shell(GameClass::SureWinning, swapped, d, cfg.method));
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
    let (theta, err_bound, method, iterations) = match cfg.method {
        Method::Bisection => {
            let r = method_bisection(d, cfg)?;
            (r.theta, r.err_bound, Method::Bisection, r.iterations)
        }
        Method::FixedPoint => {
            let r = method_fixed_point(d, cfg)?;
            (r.theta, r.err_bound, Method::FixedPoint, r.iterations)
        }
        Method::Interval => {
            let r = method_interval(d, cfg)?;
            (
                r.midpoint(),
                0.5 * (r.hi - r.lo),
                Method::Interval,
                r.iterations,
            )
        }
        Method::Newton => {
            let r = method_newton(d, cfg)?;
            (
                r.theta,
                r.err_bound(),
                Method::Newton,
                r.warmup + r.iterations,
            )
        }
        Method::Restricted => {
            let r = method_restricted(d, cfg)?;
            let m = if r.fell_back {
                Method::Bisection
            } else {
                Method::Restricted
            };
            (r.theta, r.err_bound, m, r.iterations)
        }
        Method::Auto => auto(d, cfg)?,
    };
    let p = sigmoid(theta);
    let delta = delta_g(p, d)?;
    Ok(BettingEquilibrium {
        class: GameClass::Nontrivial,
        swapped,
        p_star: Some(p),
        theta_star: Some(theta),
        splits: splits_at_theta(theta, d),
        delta_g: delta,
        g_over_log2: (delta + core::f64::consts::LN_2) / core::f64::consts::LN_2,
        err_bound,
        method,
        iterations,
    })
}

fn auto(d: &ScenarioDistributions<f64>, cfg: &SolverConfig) -> Result<(f64, f64, Method, usize)> {
    let first = if d.same_support() {
        method_fixed_point(d, cfg).map(|r| (r.theta, r.err_bound, Method::FixedPoint, r.iterations))
    } else {
        method_restricted(d, cfg).map(|r| {
            let m = if r.fell_back {
                Method::Bisection
            } else {
                Method::Restricted
            };
            (r.theta, r.err_bound, m, r.iterations)
        })
    };
    first
        .or_else(|_| {
            method_newton(d, cfg).map(|r| {
                (
                    r.theta,
                    r.err_bound(),
                    Method::Newton,
                    r.warmup + r.iterations,
                )
            })
        })
        .or_else(|_| {
            method_bisection(d, cfg)
                .map(|r| (r.theta, r.err_bound, Method::Bisection, r.iterations))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(n: u64, ka: u64, kb: u64, m: u64) -> ScenarioDistributions<f64> {
        hypergeom_pmfs(&GameSpec::bayesian(n, ka, kb, m))
            .unwrap()
            .to_f64()
    }

    fn golden_theta() -> f64 {
        let p = 1.0 / libm::sqrt(5.0);
        libm::log(p / (1.0 - p))
    }

    #[test]
    fn golden_game_all_methods() {
        let d = dist(1, 0, 1, 2);
        let cfg = SolverConfig::default();
        let b = method_bisection(&d, &cfg).unwrap();
        assert!((b.theta - golden_theta()).abs() < 1e-10);
        assert!(b.iterations <= 60);
        let r = method_restricted(&d, &cfg).unwrap();
        assert!(!r.fell_back);
        assert!((r.theta - golden_theta()).abs() <= r.err_bound.max(1e-12));
        let n = method_newton(&d, &cfg).unwrap();
        assert!(n.lower <= golden_theta() && golden_theta() <= n.upper);
        let eq = solve_bayes(&GameSpec::bayesian(1, 0, 1, 2), &cfg).unwrap();
        let p = eq.p_star.unwrap();
        assert!((p - 1.0 / libm::sqrt(5.0)).abs() < 1e-10);
        assert!((eq.splits[0].1 - (libm::sqrt(5.0) - 1.0) / 2.0).abs() < 1e-10);
        assert_eq!(eq.splits[1].1, 0.0);
        assert!((eq.g_over_log2 - 0.3058).abs() < 5e-5);
    }

    #[test]
    fn delta_g_edges() {
        let d = dist(2, 1, 1, 4);
        assert!((delta_g(0.5, &d).unwrap() + core::f64::consts::LN_2).abs() < 1e-15);
        assert!(delta_g(1e-9, &dist(3, 1, 2, 5)).unwrap().abs() < 1e-7);
        assert!(delta_g(1.0, &d).is_err());
    }

    #[test]
    fn blind_and_sure() {
        let cfg = SolverConfig::default();
        let eq = solve_bayes(&GameSpec::bayesian(2, 2, 2, 5), &cfg).unwrap();
        assert_eq!(eq.p_star, Some(0.5));
        assert!(eq.splits.iter().all(|s| s.1 == 0.5));
        let eq = solve_bayes(&GameSpec::bayesian(2, 0, 4, 4), &cfg).unwrap();
        assert_eq!(eq.p_star, None);
        assert_eq!(eq.delta_g, 0.0);
        assert_eq!(eq.splits, alloc::vec![(0, 1.0), (2, 0.0)]);
    }

    #[test]
    fn symmetric_is_zero() {
        let d = dist(3, 1, 3, 4);
        let cfg = SolverConfig::default();
        assert!(method_bisection(&d, &cfg).unwrap().theta.abs() < 1e-10);
        assert!(method_newton(&d, &cfg).unwrap().theta.abs() < 1e-10);
    }

    #[test]
    fn identical_pmfs_interval_is_point() {
        let d = dist(2, 1, 1, 4);
        let r = method_interval(&d, &SolverConfig::default()).unwrap();
        assert_eq!((r.lo, r.hi), (0.0, 0.0));
        let f = method_fixed_point(&d, &SolverConfig::default()).unwrap();
        assert_eq!((f.theta, f.q, f.iterations), (0.0, 0.0, 1));
    }

    #[test]
    fn fig_game() {
        let eq = solve_bayes(
            &GameSpec::bayesian(17, 10, 16, 27),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!((eq.p_star.unwrap() - 0.4953).abs() < 5e-5);
    }
}
