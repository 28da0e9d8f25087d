//! Symmetric equilibrium of Fisher games: threshold `k*`, mixing `nu*`,
//! prior `P*`, winning rate `v*` and the composite policy `s*`.
//!
//! Finite games are solved exactly over [`Rational`]; the Binomial limit
//! uses `f64` with scar detection at `|nu*| < 1e-12`.

use alloc::vec::Vec;

use num_traits::{Num, Zero};

use crate::dist::{
    binom_pmfs, classify, hypergeom_pmfs, GameClass, GameSpec, Rational, Scenario,
    ScenarioDistributions,
};
use crate::error::{Error, Result};

/// Tolerance under which a float `nu*` counts as a scar (`nu* = 0`).
pub const SCAR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FisherEquilibrium<T> {
    pub class: GameClass,
    /// The input had `K_A > K_B` (or `x_A > x_B`); values belong to the relabelled game.
    pub swapped: bool,
    pub k_star: Option<u64>,
    pub nu_star: Option<T>,
    pub p_star: Option<T>,
    pub v_star: T,
    pub s_star: Option<T>,
    /// Admissible priors `[P_low, P_high]` at a scar (`nu* = 0`).
    pub prior_interval: Option<(T, T)>,
}

/// Scalars the closed form runs over.
pub trait FisherScalar: Clone + Num + PartialOrd {
    /// Normalizes a threshold sitting on a rounding boundary. Exact types keep it unchanged.
    fn snap(_k: &mut usize, _nu: &mut Self, _n: usize) {}

    fn from_count(n: u64) -> Self;
}

impl FisherScalar for Rational {
    fn from_count(n: u64) -> Self {
        Rational::from_integer(n.into())
    }
}

impl FisherScalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn snap(k: &mut usize, nu: &mut f64, n: usize) {
        if *nu < SCAR_TOL {
            *nu = 0.0;
        } else if *nu > 1.0 - SCAR_TOL && *k < n {
            *k += 1;
            *nu = 0.0;
        }
    }
}

fn half<T: Num>() -> T {
    T::one() / (T::one() + T::one())
}

/// Smallest `k` with `sum_{j<=k} (p_j(A) + p_j(B)) > 1`, and the mixing weight at it.
///
/// Evaluated as `sum_{j<=k} p_j(B) > sum_{j>k} p_j(A)` so that floats keep their
/// precision when both masses are tiny at the threshold.
pub fn threshold<T: FisherScalar>(pa: &[T], pb: &[T]) -> (usize, T) {
    let n = pa.len() - 1;
    let mut tail_a = alloc::vec![T::zero(); n + 2];
    for j in (0..=n).rev() {
        tail_a[j] = tail_a[j + 1].clone() + pa[j].clone();
    }
    let mut below_b = T::zero();
    let mut k_star = n;
    for k in 0..=n {
        if below_b.clone() + pb[k].clone() > tail_a[k + 1] {
            k_star = k;
            break;
        }
        below_b = below_b + pb[k].clone();
    }
    let mut nu = (tail_a[k_star].clone() - below_b) / (pa[k_star].clone() + pb[k_star].clone());
    let mut k = k_star;
    T::snap(&mut k, &mut nu, n);
    (k, nu)
}

/// PI's winning rate when switching from A to B at `k_bullet`.
pub fn winning_rate_at<T: FisherScalar>(pa: &[T], pb: &[T], k_bullet: usize) -> T {
    let below_a = pa[..k_bullet].iter().cloned().fold(T::zero(), |s, x| s + x);
    let from_b = pb[k_bullet..].iter().cloned().fold(T::zero(), |s, x| s + x);
    let (a, b) = (pa[k_bullet].clone(), pb[k_bullet].clone());
    (a.clone() * from_b + b.clone() * below_a) / (a + b)
}

/// Scenario-wise winning rates `(v_A, v_B)` of the threshold policy `(k, nu)`.
pub fn scenario_values<T: FisherScalar>(pa: &[T], pb: &[T], k: usize, nu: &T) -> (T, T) {
    let below_a = pa[..k].iter().cloned().fold(T::zero(), |s, x| s + x);
    let above_b = pb[k + 1..].iter().cloned().fold(T::zero(), |s, x| s + x);
    let v_a = below_a + nu.clone() * pa[k].clone();
    let v_b = above_b + (T::one() - nu.clone()) * pb[k].clone();
    (v_a, v_b)
}

fn shell<T: FisherScalar>(class: GameClass, swapped: bool) -> FisherEquilibrium<T> {
    let blind = class == GameClass::BlindGuessing;
    FisherEquilibrium {
        class,
        swapped,
        k_star: None,
        nu_star: None,
        p_star: blind.then(half),
        v_star: if blind { half() } else { T::one() },
        s_star: None,
        prior_interval: None,
    }
}

/// Closed-form equilibrium of a game whose class is already known to be nontrivial.
pub fn solve_from_pmfs<T: FisherScalar>(
    d: &ScenarioDistributions<T>,
    swapped: bool,
) -> FisherEquilibrium<T> {
    let (pa, pb) = (&d.pmf_a[..], &d.pmf_b[..]);
    let (k, nu) = threshold(pa, pb);
    let mass = pa[k].clone() + pb[k].clone();
    let p_star = pb[k].clone() / mass;
    let v_star = winning_rate_at(pa, pb, k);
    let s_star = (T::from_count(k as u64) + nu.clone()) / T::from_count(d.n + 1);
    let prior_interval = (nu.is_zero() && k > 0).then(|| {
        let below = pa[k - 1].clone() + pb[k - 1].clone();
        (pb[k - 1].clone() / below, p_star.clone())
    });
    FisherEquilibrium {
        class: GameClass::Nontrivial,
        swapped,
        k_star: Some(k as u64),
        nu_star: Some(nu),
        p_star: Some(p_star),
        v_star,
        s_star: Some(s_star),
        prior_interval,
    }
}

/// Exact symmetric equilibrium of `G(N, K_A, K_B, M)`.
///
/// `K_A > K_B` is relabelled first and flagged; degenerate classes return shells.
pub fn solve_fisher(spec: &GameSpec) -> Result<FisherEquilibrium<Rational>> {
    spec.validate()?;
    let (canon, swapped) = spec.canonical();
    let class = classify(&canon);
    if class != GameClass::Nontrivial {
        return Ok(shell(class, swapped));
    }
    Ok(solve_from_pmfs(&hypergeom_pmfs(&canon)?, swapped))
}

/// `v(k)` for every `k` in `K_AB` of the relabelled game.
///
/// `v(k)` is PI's best-response winning rate against the prior that makes `k`
/// the indifference count, so `v*` is the minimum of the curve, attained at `k*`.
pub fn winning_rate_curve(spec: &GameSpec) -> Result<Vec<(u64, Rational)>> {
    spec.validate()?;
    let (canon, _) = spec.canonical();
    let class = classify(&canon);
    if class != GameClass::Nontrivial {
        return Err(Error::Degenerate(class));
    }
    let d = hypergeom_pmfs(&canon)?;
    let ab = d
        .support_ab
        .ok_or(Error::Degenerate(GameClass::SureWinning))?;
    Ok(ab
        .iter()
        .map(|k| (k, winning_rate_at(&d.pmf_a, &d.pmf_b, k as usize)))
        .collect())
}

/// Strong medians bracketing the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MedianBounds {
    /// Largest strong median of the A count.
    pub m_a: u64,
    /// Smallest strong median of the B count.
    pub m_b: u64,
    /// `k*`, moved to `k* - 1` at a scar (the `nu` in `(0,1]` labelling).
    pub k_adjusted: u64,
}

impl MedianBounds {
    pub fn brackets(&self) -> bool {
        self.m_a <= self.k_adjusted && self.k_adjusted <= self.m_b
    }
}

/// Set of `c` with `P(X <= c) >= 1/2` and `P(X >= c) >= 1/2`.
pub fn strong_medians(p: &[Rational]) -> Vec<u64> {
    let h = half::<Rational>();
    let total: Rational = p.iter().cloned().sum();
    let mut below = Rational::zero();
    let mut out = Vec::new();
    for (c, pc) in p.iter().enumerate() {
        let upper = &total - &below;
        below += pc;
        if below >= h && upper >= h {
            out.push(c as u64);
        }
    }
    out
}

pub fn median_bounds(spec: &GameSpec) -> Result<MedianBounds> {
    spec.validate()?;
    let (canon, _) = spec.canonical();
    let class = classify(&canon);
    if class != GameClass::Nontrivial {
        return Err(Error::Degenerate(class));
    }
    let d = hypergeom_pmfs(&canon)?;
    let (k, nu) = threshold(&d.pmf_a, &d.pmf_b);
    let m_a = *strong_medians(d.pmf(Scenario::A))
        .last()
        .expect("a pmf has a median");
    let m_b = strong_medians(d.pmf(Scenario::B))[0];
    let k_adjusted = if nu.is_zero() && k > 0 { k - 1 } else { k } as u64;
    let out = MedianBounds {
        m_a,
        m_b,
        k_adjusted,
    };
    if !out.brackets() {
        return Err(Error::BoundViolation(alloc::format!(
            "medians {m_a}, {m_b} do not bracket {k_adjusted}"
        )));
    }
    Ok(out)
}

/// Symmetric equilibrium of the Binomial Fisher game `(N, x_A, x_B)`.
pub fn binomial_fisher(n: u64, x_a: f64, x_b: f64) -> Result<FisherEquilibrium<f64>> {
    let d = binom_pmfs(n, x_a, x_b)?;
    let swapped = x_a > x_b;
    if x_a == x_b || n == 0 {
        return Ok(shell(GameClass::BlindGuessing, swapped));
    }
    let d = if swapped {
        ScenarioDistributions {
            pmf_a: d.pmf_b,
            pmf_b: d.pmf_a,
            ..d
        }
    } else {
        d
    };
    Ok(solve_from_pmfs(&d, swapped))
}

impl<T: FisherScalar> FisherEquilibrium<T> {
    pub fn is_scar(&self) -> bool {
        self.nu_star.as_ref().is_some_and(|nu| nu.is_zero())
    }
}

impl FisherEquilibrium<Rational> {
    pub fn to_f64(&self) -> FisherEquilibrium<f64> {
        let f = crate::dist::rational_to_f64;
        FisherEquilibrium {
            class: self.class,
            swapped: self.swapped,
            k_star: self.k_star,
            nu_star: self.nu_star.as_ref().map(f),
            p_star: self.p_star.as_ref().map(f),
            v_star: f(&self.v_star),
            s_star: self.s_star.as_ref().map(f),
            prior_interval: self.prior_interval.as_ref().map(|(a, b)| (f(a), f(b))),
        }
    }
}
