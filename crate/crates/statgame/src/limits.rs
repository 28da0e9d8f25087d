//! Large-`N` asymptotics of Binomial games `BG∞(N, x_A, x_B)`.
//!
//! Everything is expressed through the rate function `I(x, x_θ)`, the slope
//! `β` of `I_A − I_B` and the exponents `α_A = I′_A(x₀*)/β`, `α_B = α_A − 1`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{logit, sigmoid};

/// Binomial limit game with `K_θ/M → x_θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialGameSpec {
    pub n: u64,
    pub x_a: f64,
    pub x_b: f64,
}

impl BinomialGameSpec {
    pub fn new(n: u64, x_a: f64, x_b: f64) -> Result<Self> {
        for x in [x_a, x_b] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidFraction(x));
            }
        }
        Ok(BinomialGameSpec { n, x_a, x_b })
    }

    /// Orders the fractions so that `x_A ≤ x_B`; the flag reports a swap.
    pub fn canonical(&self) -> (BinomialGameSpec, bool) {
        if self.x_a > self.x_b {
            (
                BinomialGameSpec {
                    n: self.n,
                    x_a: self.x_b,
                    x_b: self.x_a,
                },
                true,
            )
        } else {
            (*self, false)
        }
    }
}

fn check_pair(x_a: f64, x_b: f64) -> Result<()> {
    if x_a > 0.0 && x_a < x_b && x_b < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "need 0 < x_A < x_B < 1, got ({x_a}, {x_b})"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFunction {
    pub i: f64,
    pub i_prime: f64,
    pub i_second: f64,
}

/// `I(x, x_θ) = x log(x/x_θ) + (1−x) log((1−x)/(1−x_θ))` and its `x`-derivatives.
pub fn rate_function(x: f64, x_theta: f64) -> Result<RateFunction> {
    for v in [x, x_theta] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::DomainError(format!("{v} is not in (0,1)")));
        }
    }
    let i = x * libm::log(x / x_theta) + (1.0 - x) * (libm::log1p(-x) - libm::log1p(-x_theta));
    Ok(RateFunction {
        i: i.max(0.0),
        i_prime: logit(x) - logit(x_theta),
        i_second: 1.0 / (x * (1.0 - x)),
    })
}

/// `β = log(x_B (1−x_A) / (x_A (1−x_B)))`.
pub fn beta(x_a: f64, x_b: f64) -> Result<f64> {
    check_pair(x_a, x_b)?;
    Ok(logit(x_b) - logit(x_a))
}

/// Limiting Fisher policy `x₀*`, the point where `I(x, x_A) = I(x, x_B)`.
pub fn fisher_policy_limit(x_a: f64, x_b: f64) -> Result<f64> {
    let b = beta(x_a, x_b)?;
    Ok((libm::log1p(-x_a) - libm::log1p(-x_b)) / b)
}

/// `(α_A, α_B)`.
pub fn alphas(x_a: f64, x_b: f64) -> Result<(f64, f64)> {
    let b = beta(x_a, x_b)?;
    let x0 = fisher_policy_limit(x_a, x_b)?;
    let l0 = logit(x0);
    Ok(((l0 - logit(x_a)) / b, (l0 - logit(x_b)) / b))
}

/// Conjectured `(liminf, limsup)` of the Binomial Fisher prior.
pub fn fisher_prior_limit_bounds(x_a: f64, x_b: f64) -> Result<(f64, f64)> {
    let b = beta(x_a, x_b)?;
    let (aa, ab) = alphas(x_a, x_b)?;
    let l = libm::log(-libm::expm1(ab * b)) - libm::log(-libm::expm1(-aa * b));
    Ok((sigmoid(l - aa * b), sigmoid(l - ab * b)))
}

/// Zeroth-order limiting prior `P≈ = log((1−x₀*) x_B / (x₀* (1−x_B))) / β`.
pub fn bayes_prior_approx(x_a: f64, x_b: f64) -> Result<f64> {
    let b = beta(x_a, x_b)?;
    let x0 = fisher_policy_limit(x_a, x_b)?;
    Ok((logit(x_b) - logit(x0)) / b)
}

fn near_int(z: f64) -> bool {
    (z - libm::round(z)).abs() < 1e-9
}

/// `C(α) = −π / (α sin πα)`.
pub fn kernel_c(alpha: f64) -> Result<f64> {
    if near_int(alpha) {
        return Err(Error::PoleError(alpha));
    }
    Ok(-PI / (alpha * libm::sin(PI * alpha)))
}

/// `log|Γ(z)|` and the sign of `Γ(z)`.
fn lgamma_signed(z: f64) -> Result<(f64, f64)> {
    if z <= 0.0 && near_int(z) {
        return Err(Error::PoleError(z));
    }
    let (lg, sign) = libm::lgamma_r(z);
    Ok((lg, if sign < 0 { -1.0 } else { 1.0 }))
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`, zero when `x + y` is a pole.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    let (lx, sx) = lgamma_signed(x)?;
    let (ly, sy) = lgamma_signed(y)?;
    let s = x + y;
    if s <= 0.0 && near_int(s) {
        return Ok(0.0);
    }
    let (ls, ss) = lgamma_signed(s)?;
    Ok(sx * sy * ss * libm::exp(lx + ly - ls))
}

/// `C^γ(α) = −(1/α) B(1 − γα, 1 − γ(1−α))`.
pub fn kernel_c_gamma(alpha: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::DomainError(format!(
            "gamma = {gamma} must be positive"
        )));
    }
    if near_int(alpha) && libm::round(alpha) == 0.0 {
        return Err(Error::PoleError(alpha));
    }
    Ok(-beta_fn(1.0 - gamma * alpha, 1.0 - gamma * (1.0 - alpha))? / alpha)
}

/// Critical risk aversion `γ⋄ = min(1/α_A, 1/(1−α_A))`.
pub fn gamma_critical(x_a: f64, x_b: f64) -> Result<f64> {
    let (aa, _) = alphas(x_a, x_b)?;
    let g = (1.0 / aa).min(1.0 / (1.0 - aa));
    if !(g > 1.0 && g <= 2.0 + 1e-12) {
        return Err(Error::BoundViolation(format!(
            "gamma critical {g} outside (1, 2]"
        )));
    }
    Ok(g)
}

/// First-order large-`N` correction of the Bayesian log-odds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampi {
    pub sampi: f64,
    /// `ϑ≈ = log((1−α_A)/α_A)`.
    pub theta_approx: f64,
}

impl Sampi {
    /// `ϑ≈ + ϝ/N`.
    pub fn theta_at(&self, n: u64) -> f64 {
        self.theta_approx + self.sampi / n as f64
    }

    pub fn prior_at(&self, n: u64) -> f64 {
        sigmoid(self.theta_at(n))
    }
}

pub fn sampi_first_order(x_a: f64, x_b: f64) -> Result<Sampi> {
    let b = beta(x_a, x_b)?;
    let x0 = fisher_policy_limit(x_a, x_b)?;
    let (a, _) = alphas(x_a, x_b)?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::DomainError(format!("alpha_A = {a} not in (0,1)")));
    }
    let theta = libm::log((1.0 - a) / a);
    let kappa = 1.0 / (x0 * (1.0 - x0));
    let n_prime = -(1.0 - 2.0 * x0) / (2.0 * x0 * (1.0 - x0));
    let aa = a * (1.0 - a);
    let ratio =
        -2.0 * (1.0 - 2.0 * a) / (aa * aa) - 2.0 * PI / aa * libm::cos(PI * a) / libm::sin(PI * a);
    let sampi = (n_prime / b - kappa * theta / (b * b)) / aa + 0.5 * kappa / (b * b) * ratio;
    Ok(Sampi {
        sampi,
        theta_approx: theta,
    })
}

/// `φ = 2π N x₀* mod 2π`.
pub fn phase(x_a: f64, x_b: f64, n: u64) -> Result<f64> {
    let x0 = fisher_policy_limit(x_a, x_b)?;
    // Reduce N mod a large power of two first so the product keeps its fractional digits.
    let fract = |x: f64| x - libm::floor(x);
    let t = (n % (1 << 20)) as f64 * x0 + (n >> 20) as f64 * fract((1u64 << 20) as f64 * x0);
    Ok(2.0 * PI * fract(t))
}

/// Truncated `Ξ^φ(ϑ)` with `harmonics` Fourier terms; `None` when the ratio is not positive.
pub fn xi(theta: f64, alpha: f64, beta: f64, phi: f64, harmonics: usize) -> Option<f64> {
    let s = libm::sin(PI * alpha);
    let mut num = PI / alpha / s;
    let mut den = PI / (1.0 - alpha) / s;
    let omega = phi + 2.0 * PI * theta / beta;
    for m in 1..=harmonics {
        let mf = m as f64;
        let im = 2.0 * PI * PI * mf / beta;
        if im > 700.0 {
            break;
        }
        let rot = Complex64::from_polar(1.0, mf * omega);
        let shift = Complex64::new(0.0, 2.0 * PI * mf / beta);
        let tn = Complex64::from(PI) / (Complex64::from(alpha) - shift) * rot
            / Complex64::new(PI * alpha, -im).sin();
        let td = Complex64::from(PI) / (Complex64::from(1.0 - alpha) + shift) * rot
            / Complex64::new(PI * alpha, im).sin();
        num += 2.0 * tn.re;
        den += 2.0 * td.re;
    }
    let r = num / den;
    (r > 0.0 && r.is_finite()).then(|| libm::log(r))
}

pub const PHASE_DAMPING: f64 = 0.5;
pub const PHASE_MAX_ITER: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSeriesPrior {
    pub prior: f64,
    pub theta: f64,
    pub phi: f64,
    pub iterations: usize,
    /// False when the damped iteration hit its cap or left the domain of `log`.
    pub converged: bool,
}

/// Fixed point of the truncated phase-dependent series, seeded at `ϑ≈`.
pub fn phase_series_prior(
    x_a: f64,
    x_b: f64,
    n: u64,
    harmonics: usize,
) -> Result<PhaseSeriesPrior> {
    let b = beta(x_a, x_b)?;
    let (a, _) = alphas(x_a, x_b)?;
    let phi = phase(x_a, x_b, n)?;
    if harmonics == 0 {
        let p = bayes_prior_approx(x_a, x_b)?;
        return Ok(PhaseSeriesPrior {
            prior: p,
            theta: logit(p),
            phi,
            iterations: 0,
            converged: true,
        });
    }
    let mut theta = libm::log((1.0 - a) / a);
    for it in 1..=PHASE_MAX_ITER {
        let Some(x) = xi(theta, a, b, phi, harmonics) else {
            return Ok(PhaseSeriesPrior {
                prior: sigmoid(theta),
                theta,
                phi,
                iterations: it,
                converged: false,
            });
        };
        let step = x - theta;
        theta += PHASE_DAMPING * step;
        if step.abs() < 1e-12 {
            return Ok(PhaseSeriesPrior {
                prior: sigmoid(theta),
                theta,
                phi,
                iterations: it,
                converged: true,
            });
        }
    }
    Ok(PhaseSeriesPrior {
        prior: sigmoid(theta),
        theta,
        phi,
        iterations: PHASE_MAX_ITER,
        converged: false,
    })
}

/// Every limit quantity of a Binomial game at one `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticResult {
    pub x0_star: f64,
    pub beta: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub epsilon: f64,
    pub p_approx: f64,
    pub theta_approx: f64,
    pub sampi: f64,
    pub theta_first_order: f64,
    pub phi: f64,
    pub gamma_diamond: f64,
    pub fisher_prior_bounds: (f64, f64),
}

pub fn asymptotics(x_a: f64, x_b: f64, n: u64) -> Result<AsymptoticResult> {
    let x0 = fisher_policy_limit(x_a, x_b)?;
    let (aa, ab) = alphas(x_a, x_b)?;
    let s = sampi_first_order(x_a, x_b)?;
    Ok(AsymptoticResult {
        x0_star: x0,
        beta: beta(x_a, x_b)?,
        alpha_a: aa,
        alpha_b: ab,
        epsilon: rate_function(x0, x_a)?.i,
        p_approx: bayes_prior_approx(x_a, x_b)?,
        theta_approx: s.theta_approx,
        sampi: s.sampi,
        theta_first_order: if n > 0 { s.theta_at(n) } else { f64::NAN },
        phi: phase(x_a, x_b, n)?,
        gamma_diamond: gamma_critical(x_a, x_b)?,
        fisher_prior_bounds: fisher_prior_limit_bounds(x_a, x_b)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableCell {
    pub x_a: f64,
    pub x_b: f64,
    pub value: f64,
}

/// The 36 pairs `x_A < x_B` on the grid `0.1, ..., 0.9`.
pub fn table_grid() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for i in 1..9 {
        for j in (i + 1)..10 {
            v.push((i as f64 / 10.0, j as f64 / 10.0));
        }
    }
    v
}

fn table(f: impl Fn(f64, f64) -> Result<f64>) -> Result<Vec<TableCell>> {
    table_grid()
        .into_iter()
        .map(|(x_a, x_b)| {
            Ok(TableCell {
                x_a,
                x_b,
                value: f(x_a, x_b)?,
            })
        })
        .collect()
}

pub fn fisher_policy_table() -> Result<Vec<TableCell>> {
    table(fisher_policy_limit)
}

pub fn bayes_prior_table() -> Result<Vec<TableCell>> {
    table(bayes_prior_approx)
}
