//! Game parameters, outcome supports and the exact per-scenario pmfs.
//!
//! Counts are `u64`. Finite-game probabilities are exact [`Rational`]s;
//! Binomial (M -> infinity) games use `f64`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational with big-integer numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Which payoff the game uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GameKind {
    Fisher,
    Bayesian,
    Statistical { gamma: f64 },
}

/// Finite game `G(N, K_A, K_B, M)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameSpec {
    pub n: u64,
    pub k_a: u64,
    pub k_b: u64,
    pub m: u64,
    pub kind: GameKind,
}

impl GameSpec {
    pub fn fisher(n: u64, k_a: u64, k_b: u64, m: u64) -> Self {
        GameSpec {
            n,
            k_a,
            k_b,
            m,
            kind: GameKind::Fisher,
        }
    }

    pub fn bayesian(n: u64, k_a: u64, k_b: u64, m: u64) -> Self {
        GameSpec {
            n,
            k_a,
            k_b,
            m,
            kind: GameKind::Bayesian,
        }
    }

    pub fn statistical(n: u64, k_a: u64, k_b: u64, m: u64, gamma: f64) -> Self {
        GameSpec {
            n,
            k_a,
            k_b,
            m,
            kind: GameKind::Statistical { gamma },
        }
    }

    /// Relative risk aversion; `1` for Bayesian games, `None` for Fisher games.
    pub fn gamma(&self) -> Option<f64> {
        match self.kind {
            GameKind::Fisher => None,
            GameKind::Bayesian => Some(1.0),
            GameKind::Statistical { gamma } => Some(gamma),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_a > self.m || self.k_b > self.m || self.n > self.m {
            return Err(Error::InvalidSpec(alloc::format!(
                "need K_A, K_B, N <= M, got N={} K_A={} K_B={} M={}",
                self.n,
                self.k_a,
                self.k_b,
                self.m
            )));
        }
        if let GameKind::Statistical { gamma } = self.kind {
            if !(gamma > 0.0) || !gamma.is_finite() {
                return Err(Error::InvalidSpec(alloc::format!(
                    "gamma must be positive, got {gamma}"
                )));
            }
        }
        Ok(())
    }

    /// Relabels the scenarios so that `K_A <= K_B`; the flag is set when a swap happened.
    pub fn canonical(&self) -> (GameSpec, bool) {
        if self.k_a > self.k_b {
            (
                GameSpec {
                    k_a: self.k_b,
                    k_b: self.k_a,
                    ..*self
                },
                true,
            )
        } else {
            (*self, false)
        }
    }

    pub fn support(&self, scenario: Scenario) -> Support {
        let k = match scenario {
            Scenario::A => self.k_a,
            Scenario::B => self.k_b,
        };
        hypergeom_support(self.n, k, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    A,
    B,
}

/// Non-empty inclusive integer interval `{lo, ..., hi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    pub lo: u64,
    pub hi: u64,
}

impl Support {
    pub fn contains(&self, k: u64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> core::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }

    pub fn intersect(&self, other: &Support) -> Option<Support> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Support { lo, hi })
    }
}

/// Feasible sampled counts of ones when `K` of the `M` bits are ones.
pub fn hypergeom_support(n: u64, k: u64, m: u64) -> Support {
    Support {
        lo: n.saturating_sub(m - k),
        hi: k.min(n),
    }
}

/// Per-scenario pmfs of the number of sampled ones, dense over `k = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioDistributions<T> {
    pub n: u64,
    pub support_a: Support,
    pub support_b: Support,
    pub support_ab: Option<Support>,
    pub pmf_a: Vec<T>,
    pub pmf_b: Vec<T>,
}

impl<T> ScenarioDistributions<T> {
    pub fn pmf(&self, scenario: Scenario) -> &[T] {
        match scenario {
            Scenario::A => &self.pmf_a,
            Scenario::B => &self.pmf_b,
        }
    }

    pub fn support(&self, scenario: Scenario) -> Support {
        match scenario {
            Scenario::A => self.support_a,
            Scenario::B => self.support_b,
        }
    }

    pub fn same_support(&self) -> bool {
        self.support_a == self.support_b
    }

    /// Counts that can occur under at least one scenario, ascending.
    pub fn outcomes(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.n).filter(move |&k| self.support_a.contains(k) || self.support_b.contains(k))
    }

    /// Size of the union of the supports.
    pub fn union_len(&self) -> u64 {
        self.support_a.len() + self.support_b.len() - self.support_ab.map_or(0, |s| s.len())
    }
}

impl ScenarioDistributions<Rational> {
    pub fn to_f64(&self) -> ScenarioDistributions<f64> {
        ScenarioDistributions {
            n: self.n,
            support_a: self.support_a,
            support_b: self.support_b,
            support_ab: self.support_ab,
            pmf_a: self.pmf_a.iter().map(rational_to_f64).collect(),
            pmf_b: self.pmf_b.iter().map(rational_to_f64).collect(),
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameClass {
    BlindGuessing,
    SureWinning,
    Nontrivial,
}

pub fn classify(spec: &GameSpec) -> GameClass {
    if spec.k_a == spec.k_b || spec.n == 0 {
        return GameClass::BlindGuessing;
    }
    let a = spec.support(Scenario::A);
    let b = spec.support(Scenario::B);
    match a.intersect(&b) {
        None => GameClass::SureWinning,
        Some(_) => GameClass::Nontrivial,
    }
}

/// `C(n, 0..=kmax)` as big integers.
fn binomial_row(n: u64, kmax: u64) -> Vec<BigUint> {
    let kmax = kmax.min(n);
    let mut row = Vec::with_capacity(kmax as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..kmax {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    binomial_row(n, k).pop().unwrap_or_else(BigUint::one)
}

fn hypergeom_exact(n: u64, k: u64, m: u64, denom: &BigUint) -> Vec<Rational> {
    let supp = hypergeom_support(n, k, m);
    let ones = binomial_row(k, supp.hi);
    let zeros = binomial_row(m - k, n - supp.lo);
    let den = BigInt::from(denom.clone());
    (0..=n)
        .map(|j| {
            if supp.contains(j) {
                let num = &ones[j as usize] * &zeros[(n - j) as usize];
                Rational::new(BigInt::from(num), den.clone())
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Exact hypergeometric pmfs `C(K,k) C(M-K,N-k) / C(M,N)` for both scenarios.
pub fn hypergeom_pmfs(spec: &GameSpec) -> Result<ScenarioDistributions<Rational>> {
    spec.validate()?;
    let denom = binomial(spec.m, spec.n);
    let support_a = spec.support(Scenario::A);
    let support_b = spec.support(Scenario::B);
    Ok(ScenarioDistributions {
        n: spec.n,
        support_a,
        support_b,
        support_ab: support_a.intersect(&support_b),
        pmf_a: hypergeom_exact(spec.n, spec.k_a, spec.m, &denom),
        pmf_b: hypergeom_exact(spec.n, spec.k_b, spec.m, &denom),
    })
}

/// `C(M,N) * 2^log2`, kept factored because `log2` can itself be `2^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpCount {
    pub factor: BigUint,
    pub log2: BigUint,
}

impl ExpCount {
    const MAX_BITS: u64 = 1 << 24;

    fn pow2(log2: BigUint) -> Self {
        ExpCount {
            factor: BigUint::one(),
            log2,
        }
    }

    /// The count itself, when it fits in a few megabytes.
    pub fn value(&self) -> Option<BigUint> {
        let e = self.log2.to_u64().filter(|&e| e <= Self::MAX_BITS)?;
        Some(&self.factor << e)
    }
}

/// Action-set sizes of both players, plus the restricted policy-set sizes of PI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCountReport {
    /// `|A_2| = C(M,K_A) + C(M,K_B)`.
    pub a2: BigUint,
    /// `|A_1| = C(M,N) 2^(2^N)`.
    pub a1: ExpCount,
    /// Policies defined on reachable counts only.
    pub p_prime: ExpCount,
    /// Permutation-invariant policies, `2^(N+1)`.
    pub p_r: ExpCount,
    pub p_prime_r: ExpCount,
    /// Policies free only on `K_AB`.
    pub p_dprime: ExpCount,
    pub p_dprime_r: ExpCount,
}

pub fn action_counts(spec: &GameSpec) -> Result<ActionCountReport> {
    spec.validate()?;
    let n = spec.n;
    let a = spec.support(Scenario::A);
    let b = spec.support(Scenario::B);
    let ab = a.intersect(&b);
    let row = binomial_row(n, n);
    let mass = |s: Option<Support>| -> BigUint {
        s.map_or_else(BigUint::zero, |s| s.iter().map(|k| &row[k as usize]).sum())
    };
    let in_union = mass(Some(a)) + mass(Some(b)) - mass(ab);
    let union_len = a.len() + b.len() - ab.map_or(0, |s| s.len());
    let ab_len = ab.map_or(0, |s| s.len());
    Ok(ActionCountReport {
        a2: binomial(spec.m, spec.k_a) + binomial(spec.m, spec.k_b),
        a1: ExpCount {
            factor: binomial(spec.m, n),
            log2: BigUint::one() << n,
        },
        p_prime: ExpCount::pow2(in_union),
        p_r: ExpCount::pow2(BigUint::from(n + 1)),
        p_prime_r: ExpCount::pow2(BigUint::from(union_len)),
        p_dprime: ExpCount::pow2(mass(ab)),
        p_dprime_r: ExpCount::pow2(BigUint::from(ab_len)),
    })
}

/// Binomial pmf over `0..=n`; `x` may be 0 or 1.
pub fn binomial_pmf(n: u64, x: f64) -> Vec<f64> {
    if x <= 0.0 || x >= 1.0 {
        let hit = if x <= 0.0 { 0 } else { n };
        return (0..=n).map(|k| if k == hit { 1.0 } else { 0.0 }).collect();
    }
    let (lx, l1x) = (libm::log(x), libm::log1p(-x));
    let mut ln_c = 0.0;
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        if k > 0 {
            ln_c += libm::log((n - k + 1) as f64) - libm::log(k as f64);
        }
        out.push(libm::exp(ln_c + k as f64 * lx + (n - k) as f64 * l1x));
    }
    out
}

fn check_fraction(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction(x))
    }
}

/// Binomial limit pmfs `C(N,k) x^k (1-x)^(N-k)` for both scenarios.
pub fn binom_pmfs(n: u64, x_a: f64, x_b: f64) -> Result<ScenarioDistributions<f64>> {
    check_fraction(x_a)?;
    check_fraction(x_b)?;
    let full = Support { lo: 0, hi: n };
    Ok(ScenarioDistributions {
        n,
        support_a: full,
        support_b: full,
        support_ab: Some(full),
        pmf_a: binomial_pmf(n, x_a),
        pmf_b: binomial_pmf(n, x_b),
    })
}

/// Total variation between a hypergeometric pmf and its Binomial limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvReport {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn tv_distance_hyper_binom(spec: &GameSpec, scenario: Scenario) -> Result<TvReport> {
    spec.validate()?;
    if spec.m < 2 {
        return Err(Error::InvalidSpec(
            "total variation bounds need M >= 2".into(),
        ));
    }
    let k = match scenario {
        Scenario::A => spec.k_a,
        Scenario::B => spec.k_b,
    };
    let d = hypergeom_pmfs(spec)?.to_f64();
    let hyper = d.pmf(scenario);
    let binom = binomial_pmf(spec.n, k as f64 / spec.m as f64);
    let value = 0.5
        * hyper
            .iter()
            .zip(&binom)
            .map(|(h, b)| libm::fabs(h - b))
            .sum::<f64>();
    let ratio = (spec.n as f64 - 1.0).max(0.0) / (spec.m as f64 - 1.0);
    // With K in {0, M} both laws are the same point mass.
    let lower = if k == 0 || k == spec.m {
        0.0
    } else {
        ratio / 28.0
    };
    let report = TvReport {
        value,
        lower,
        upper: ratio,
    };
    let slack = 1e-12;
    if value > report.upper + slack || value + slack < report.lower {
        return Err(Error::BoundViolation(alloc::format!(
            "TV {value} outside [{}, {}]",
            report.lower,
            report.upper
        )));
    }
    Ok(report)
}

/// `gcd`-reduced exact ratio helper used by the tests and the oracle.
pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
