//! Brute-force enumeration of small games and Nash certificates.
//!
//! Sequences and samplings are bitmasks over the `M` positions, so `M ≤ 63`.
//! PI's pure actions are (sampling, policy) pairs. PII's are (scenario, sequence)
//! pairs. Fisher certificates are exact; betting certificates check the
//! optimality conditions of the continuous game numerically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::bayes::{self, BettingEquilibrium};
use crate::dist::{
    binomial, classify, hypergeom_pmfs, GameClass, GameSpec, Rational, Scenario,
    ScenarioDistributions,
};
use crate::error::{Error, Result};
use crate::fisher::{solve_fisher, FisherEquilibrium};
use crate::iso::{self, IsoEquilibrium};

/// Bound on each action-set size.
pub const SIZE_LIMIT: u128 = 1_000_000;
/// Bound on the number of payoff evaluations of one certificate.
pub const WORK_LIMIT: u128 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionSet {
    /// Count-based policies, free only on the common support.
    Reduced,
    /// Every count-based policy, `2^(N+1)` per sampling.
    PermutationInvariant,
    /// Every map from sampled bit patterns to guesses; `M ≤ 3` only.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RowAction {
    /// Sampled positions.
    pub sampling: u64,
    /// Bit `i` set means "guess B" on count `i`, or on pattern `i` when `by_pattern`.
    pub policy: u64,
    pub by_pattern: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColAction {
    pub scenario: Scenario,
    pub sequence: u64,
}

/// Sampled bits packed in position order.
fn pattern(sequence: u64, sampling: u64) -> u64 {
    let (mut out, mut bit, mut s) = (0u64, 0u32, sampling);
    while s != 0 {
        let pos = s.trailing_zeros();
        if sequence >> pos & 1 == 1 {
            out |= 1 << bit;
        }
        bit += 1;
        s &= s - 1;
    }
    out
}

/// PI wins (1) or loses (0).
pub fn payoff(row: &RowAction, col: &ColAction) -> u8 {
    let idx = if row.by_pattern {
        pattern(col.sequence, row.sampling)
    } else {
        u64::from((col.sequence & row.sampling).count_ones())
    };
    let guess_b = row.policy >> idx & 1 == 1;
    u8::from(guess_b == (col.scenario == Scenario::B))
}

/// All `k`-subsets of `m` positions, ascending.
fn subsets(m: u64, k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let limit = 1u128 << m;
    let mut x: u64 = (1u64 << k) - 1;
    while (x as u128) < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        if r == 0 {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn check_size(spec: &GameSpec, rows: u128) -> Result<u128> {
    if spec.m > 63 {
        return Err(Error::TooLarge {
            size: u128::MAX,
            limit: SIZE_LIMIT,
        });
    }
    let cols = big_u128(&(binomial(spec.m, spec.k_a) + binomial(spec.m, spec.k_b)));
    for size in [cols, rows] {
        if size > SIZE_LIMIT {
            return Err(Error::TooLarge {
                size,
                limit: SIZE_LIMIT,
            });
        }
    }
    Ok(cols)
}

fn big_u128(x: &num_bigint::BigUint) -> u128 {
    x.to_u128().unwrap_or(u128::MAX)
}

/// Count-policy bitmask that guesses B on `free` (a mask over the common support,
/// lowest count first) and is forced elsewhere.
fn reduced_policy(spec: &GameSpec, free: u64) -> u64 {
    let (a, b) = (spec.support(Scenario::A), spec.support(Scenario::B));
    let mut policy = 0u64;
    let mut j = 0;
    for k in 0..=spec.n {
        match (a.contains(k), b.contains(k)) {
            (true, true) => {
                if free >> j & 1 == 1 {
                    policy |= 1 << k;
                }
                j += 1;
            }
            (false, true) => policy |= 1 << k,
            _ => {}
        }
    }
    policy
}

fn row_count(spec: &GameSpec, set: ActionSet) -> Result<u128> {
    let samplings = big_u128(&binomial(spec.m, spec.n));
    let per = match set {
        ActionSet::Reduced => {
            let ab = spec
                .support(Scenario::A)
                .intersect(&spec.support(Scenario::B))
                .map_or(0, |s| s.len());
            1u128.checked_shl(ab as u32).unwrap_or(u128::MAX)
        }
        ActionSet::PermutationInvariant => {
            1u128.checked_shl(spec.n as u32 + 1).unwrap_or(u128::MAX)
        }
        ActionSet::Full => {
            if spec.m > 3 {
                return Err(Error::TooLarge {
                    size: 1u128 << (1u32 << spec.n.min(6)),
                    limit: 1 << 8,
                });
            }
            1u128 << (1u32 << spec.n)
        }
    };
    Ok(samplings.saturating_mul(per))
}

pub fn enumerate_rows(spec: &GameSpec, set: ActionSet) -> Result<Vec<RowAction>> {
    spec.validate()?;
    check_size(spec, row_count(spec, set)?)?;
    let mut rows = Vec::new();
    for sampling in subsets(spec.m, spec.n) {
        match set {
            ActionSet::Reduced => {
                let ab = spec
                    .support(Scenario::A)
                    .intersect(&spec.support(Scenario::B))
                    .map_or(0, |s| s.len());
                for free in 0..(1u64 << ab) {
                    rows.push(RowAction {
                        sampling,
                        policy: reduced_policy(spec, free),
                        by_pattern: false,
                    });
                }
            }
            ActionSet::PermutationInvariant => {
                for policy in 0..(1u64 << (spec.n + 1)) {
                    rows.push(RowAction {
                        sampling,
                        policy,
                        by_pattern: false,
                    });
                }
            }
            ActionSet::Full => {
                for policy in 0..(1u64 << (1u64 << spec.n)) {
                    rows.push(RowAction {
                        sampling,
                        policy,
                        by_pattern: true,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// A-sequences first, then B-sequences, each in ascending bitmask order.
pub fn enumerate_cols(spec: &GameSpec) -> Result<Vec<ColAction>> {
    spec.validate()?;
    check_size(spec, 0)?;
    let mut cols = Vec::new();
    for (scenario, k) in [(Scenario::A, spec.k_a), (Scenario::B, spec.k_b)] {
        cols.extend(
            subsets(spec.m, k)
                .into_iter()
                .map(|sequence| ColAction { scenario, sequence }),
        );
    }
    Ok(cols)
}

/// Win/lose matrix of a Fisher game, rows indexed by PI actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityMatrix {
    pub rows: Vec<RowAction>,
    pub cols: Vec<ColAction>,
    /// Row-major.
    pub entries: Vec<u8>,
}

impl UtilityMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols.len() + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols.len()..(r + 1) * self.cols.len()]
    }
}

pub fn enumerate_game(spec: &GameSpec) -> Result<UtilityMatrix> {
    enumerate_game_with(spec, ActionSet::Reduced)
}

pub fn enumerate_game_with(spec: &GameSpec, set: ActionSet) -> Result<UtilityMatrix> {
    let rows = enumerate_rows(spec, set)?;
    let cols = enumerate_cols(spec)?;
    let work = rows.len() as u128 * cols.len() as u128;
    if work > WORK_LIMIT {
        return Err(Error::TooLarge {
            size: work,
            limit: WORK_LIMIT,
        });
    }
    let entries = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |c| payoff(r, c)))
        .collect();
    Ok(UtilityMatrix {
        rows,
        cols,
        entries,
    })
}

/// Keeps the first of each group of identical rows.
pub fn dedup_rows(m: &UtilityMatrix) -> UtilityMatrix {
    let mut keep: Vec<usize> = Vec::new();
    for r in 0..m.n_rows() {
        if !keep.iter().any(|&s| m.row(s) == m.row(r)) {
            keep.push(r);
        }
    }
    UtilityMatrix {
        rows: keep.iter().map(|&r| m.rows[r]).collect(),
        cols: m.cols.clone(),
        entries: keep
            .iter()
            .flat_map(|&r| m.row(r).iter().copied())
            .collect(),
    }
}

/// A mixed strategy profile with few distinct weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub weights: Vec<Rational>,
    /// Support of PI's mix, with indices into `weights`.
    pub rows: Vec<(RowAction, usize)>,
    pub cols: Vec<(ColAction, usize)>,
}

impl Profile {
    pub fn row_weight(&self, i: usize) -> &Rational {
        &self.weights[self.rows[i].1]
    }

    pub fn col_weight(&self, j: usize) -> &Rational {
        &self.weights[self.cols[j].1]
    }
}

fn count_weighted<T>(
    items: &[(T, usize)],
    n_weights: usize,
    wins: impl Fn(&T) -> bool,
) -> Vec<u64> {
    let mut counts = alloc::vec![0u64; n_weights];
    for (x, w) in items {
        if wins(x) {
            counts[*w] += 1;
        }
    }
    counts
}

fn dot(weights: &[Rational], counts: &[u64]) -> Rational {
    weights
        .iter()
        .zip(counts)
        .fold(Rational::zero(), |acc, (w, &c)| {
            acc + w * Rational::from_integer(BigInt::from(c))
        })
}

impl Profile {
    /// PI's expected win rate with `row` against PII's mix.
    pub fn row_value(&self, row: &RowAction) -> Rational {
        dot(
            &self.weights,
            &count_weighted(&self.cols, self.weights.len(), |c| payoff(row, c) == 1),
        )
    }

    /// PI's expected win rate under its mix against `col`.
    pub fn col_value(&self, col: &ColAction) -> Rational {
        dot(
            &self.weights,
            &count_weighted(&self.rows, self.weights.len(), |r| payoff(r, col) == 1),
        )
    }

    pub fn value(&self) -> Rational {
        self.cols.iter().fold(Rational::zero(), |acc, (c, w)| {
            acc + &self.weights[*w] * self.col_value(c)
        })
    }
}

fn ratio_big(num: &Rational, den: &num_bigint::BigUint) -> Rational {
    num / Rational::from_integer(BigInt::from(den.clone()))
}

/// The symmetric equilibrium profile of the canonical game.
///
/// PI samples uniformly and mixes the two threshold policies (guess A up to
/// `k*` with weight `ν*`, below `k*` otherwise). PII draws the scenario with
/// prior `P*` and a uniform sequence.
pub fn equilibrium_profile(spec: &GameSpec, eq: &FisherEquilibrium<Rational>) -> Result<Profile> {
    let (spec, _) = spec.canonical();
    check_size(&spec, row_count(&spec, ActionSet::Reduced)?)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let all_b: u64 = if spec.n >= 63 {
        u64::MAX
    } else {
        (1u64 << (spec.n + 1)) - 1
    };
    let (policies, p): (Vec<(u64, Rational)>, Rational) = match eq.class {
        GameClass::BlindGuessing => (
            alloc::vec![(0, half.clone()), (all_b, half.clone())],
            half.clone(),
        ),
        GameClass::SureWinning => (
            alloc::vec![(reduced_policy(&spec, 0), Rational::one())],
            half.clone(),
        ),
        GameClass::Nontrivial => {
            let (Some(k), Some(nu), Some(p)) = (eq.k_star, eq.nu_star.clone(), eq.p_star.clone())
            else {
                return Err(Error::Refuted(String::from(
                    "nontrivial equilibrium without k*, nu*, P*",
                )));
            };
            let hat = all_b & !((1u64 << (k + 1)) - 1);
            let check = all_b & !((1u64 << k) - 1);
            let rest = Rational::one() - &nu;
            (alloc::vec![(hat, nu), (check, rest)], p)
        }
    };
    let samplings = binomial(spec.m, spec.n);
    let mut weights = Vec::new();
    let mut rows = Vec::new();
    for (policy, w) in policies {
        if w.is_zero() {
            continue;
        }
        weights.push(ratio_big(&w, &samplings));
        let idx = weights.len() - 1;
        rows.extend(subsets(spec.m, spec.n).into_iter().map(|sampling| {
            (
                RowAction {
                    sampling,
                    policy,
                    by_pattern: false,
                },
                idx,
            )
        }));
    }
    let mut cols = Vec::new();
    for (scenario, k, w) in [
        (Scenario::A, spec.k_a, p.clone()),
        (Scenario::B, spec.k_b, Rational::one() - p),
    ] {
        if w.is_zero() {
            continue;
        }
        weights.push(ratio_big(&w, &binomial(spec.m, k)));
        let idx = weights.len() - 1;
        cols.extend(
            subsets(spec.m, k)
                .into_iter()
                .map(|sequence| (ColAction { scenario, sequence }, idx)),
        );
    }
    Ok(Profile {
        weights,
        rows,
        cols,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    pub value: T,
    pub nash_ok: bool,
    /// Best gain of a PI deviation; `≤ 0` when certified.
    pub worst_row_gap: T,
    /// Best gain of a PII deviation; `≤ 0` when certified.
    pub worst_col_gap: T,
}

fn work_guard(rows: u128, cols: u128) -> Result<()> {
    let work = rows.saturating_mul(cols);
    if work > WORK_LIMIT {
        return Err(Error::TooLarge {
            size: work,
            limit: WORK_LIMIT,
        });
    }
    Ok(())
}

/// Exact best-response gaps of the closed-form profile over the chosen action set.
pub fn certify_fisher(
    spec: &GameSpec,
    eq: &FisherEquilibrium<Rational>,
    set: ActionSet,
) -> Result<Certificate<Rational>> {
    spec.validate()?;
    let (canon, _) = spec.canonical();
    let profile = equilibrium_profile(&canon, eq)?;
    let rows = enumerate_rows(&canon, set)?;
    let cols = enumerate_cols(&canon)?;
    work_guard(rows.len() as u128, cols.len() as u128)?;
    let value = profile.value();
    let best_row = rows
        .iter()
        .map(|r| profile.row_value(r))
        .max()
        .unwrap_or_else(Rational::zero);
    let worst_col = cols
        .iter()
        .map(|c| profile.col_value(c))
        .min()
        .unwrap_or_else(Rational::zero);
    let worst_row_gap = best_row - &value;
    let worst_col_gap = &value - worst_col;
    let nash_ok = value == eq.v_star
        && worst_row_gap <= Rational::zero()
        && worst_col_gap <= Rational::zero();
    Ok(Certificate {
        value,
        nash_ok,
        worst_row_gap,
        worst_col_gap,
    })
}

/// Certifies a Fisher equilibrium over the reduced action set.
pub fn verify_fisher(
    spec: &GameSpec,
    eq: &FisherEquilibrium<Rational>,
) -> Result<Certificate<Rational>> {
    verify_fisher_with(spec, eq, ActionSet::Reduced)
}

pub fn verify_fisher_with(
    spec: &GameSpec,
    eq: &FisherEquilibrium<Rational>,
    set: ActionSet,
) -> Result<Certificate<Rational>> {
    let cert = certify_fisher(spec, eq, set)?;
    if cert.nash_ok {
        return Ok(cert);
    }
    Err(Error::Refuted(format!(
        "value {} (closed form {}), row gap {}, column gap {}",
        cert.value, eq.v_star, cert.worst_row_gap, cert.worst_col_gap
    )))
}

/// Game value as `max_r u(r, y*) = min_c u(x*, c)`, without a linear program.
pub fn game_value_lp_free(spec: &GameSpec) -> Result<Rational> {
    game_value_lp_free_with(spec, ActionSet::Reduced)
}

pub fn game_value_lp_free_with(spec: &GameSpec, set: ActionSet) -> Result<Rational> {
    let eq = solve_fisher(spec)?;
    let (canon, _) = spec.canonical();
    let profile = equilibrium_profile(&canon, &eq)?;
    let rows = enumerate_rows(&canon, set)?;
    let cols = enumerate_cols(&canon)?;
    work_guard(rows.len() as u128, cols.len() as u128)?;
    let upper = rows
        .iter()
        .map(|r| profile.row_value(r))
        .max()
        .unwrap_or_else(Rational::zero);
    let lower = cols
        .iter()
        .map(|c| profile.col_value(c))
        .min()
        .unwrap_or_else(Rational::zero);
    if upper != lower {
        return Err(Error::Refuted(format!(
            "max over rows {upper} differs from min over columns {lower}"
        )));
    }
    Ok(upper)
}

/// Step of the split grid used as a secondary best-response floor.
pub const SPLIT_GRID: u32 = 64;
const SPLIT_TOL: f64 = 1e-10;

struct BettingCheck {
    value: f64,
    split_err: f64,
    split_gain: f64,
    grid_gain: f64,
    grid_slack: f64,
    indifference: f64,
    indifference_tol: f64,
}

impl BettingCheck {
    fn into_certificate(self) -> Result<Certificate<f64>> {
        let mut failed = Vec::new();
        if self.split_err > SPLIT_TOL || self.split_gain > 1e-12 {
            failed.push(format!(
                "(a) split error {:.3e}, split-grid gain {:.3e}",
                self.split_err, self.split_gain
            ));
        }
        if self.grid_gain > self.grid_slack {
            failed.push(format!(
                "(b) prior grid improves by {:.3e} > {:.3e}",
                self.grid_gain, self.grid_slack
            ));
        }
        if self.indifference > self.indifference_tol {
            failed.push(format!(
                "(c) scenario gap {:.3e} > {:.3e}",
                self.indifference, self.indifference_tol
            ));
        }
        if failed.is_empty() {
            Ok(Certificate {
                value: self.value,
                nash_ok: true,
                worst_row_gap: self.split_gain.max(self.split_err),
                worst_col_gap: self.grid_gain.max(self.indifference),
            })
        } else {
            Err(Error::Refuted(failed.join("; ")))
        }
    }
}

fn canonical_pmfs(spec: &GameSpec) -> Result<(ScenarioDistributions<f64>, GameClass)> {
    spec.validate()?;
    let (canon, _) = spec.canonical();
    Ok((hypergeom_pmfs(&canon)?.to_f64(), classify(&canon)))
}

/// Largest gain available to PI by moving any split to a point of the `1/64` grid.
fn split_grid_gain(
    p: f64,
    d: &ScenarioDistributions<f64>,
    splits: &[(u64, f64)],
    u: impl Fn(f64) -> f64,
) -> f64 {
    let mut gain = f64::NEG_INFINITY;
    for &(k, s) in splits {
        let (a, b) = (d.pmf_a[k as usize], d.pmf_b[k as usize]);
        if a == 0.0 || b == 0.0 {
            continue;
        }
        let f = |x: f64| p * a * u(x) + (1.0 - p) * b * u(1.0 - x);
        let base = f(s);
        for j in 1..SPLIT_GRID {
            gain = gain.max(f(j as f64 / SPLIT_GRID as f64) - base);
        }
    }
    if gain == f64::NEG_INFINITY {
        0.0
    } else {
        gain
    }
}

fn prior_grid(grid: usize) -> impl Iterator<Item = f64> {
    (1..=grid).map(move |i| i as f64 / (grid + 1) as f64)
}

/// Optimality conditions of a log-utility equilibrium.
pub fn verify_bayes(
    spec: &GameSpec,
    eq: &BettingEquilibrium,
    grid: usize,
) -> Result<Certificate<f64>> {
    let (d, class) = canonical_pmfs(spec)?;
    if class == GameClass::SureWinning {
        let all_in = eq
            .splits
            .iter()
            .all(|&(k, s)| s == if d.pmf_a[k as usize] > 0.0 { 1.0 } else { 0.0 });
        return sure_certificate(all_in && eq.delta_g == 0.0);
    }
    let p = eq
        .p_star
        .ok_or_else(|| Error::Refuted(String::from("missing prior")))?;
    let want = bayes::splits(p, &d)?;
    let split_err = max_split_err(&want, &eq.splits);
    let split_gain = split_grid_gain(p, &d, &eq.splits, crate::numeric::ln);
    let value = bayes::delta_g(p, &d)?;
    let (_, second) = bayes::delta_g_derivs(p, &d)?;
    let mut grid_min = f64::INFINITY;
    for x in prior_grid(grid) {
        grid_min = grid_min.min(bayes::delta_g(x, &d)?);
    }
    let err = eq.err_bound.max(1e-12);
    let (ga, gb) = bayes::delta_g_scenarios(p, &d)?;
    BettingCheck {
        value,
        split_err,
        split_gain,
        grid_gain: value - grid_min,
        grid_slack: second * err * err + 1e-13,
        indifference: (ga - gb).abs(),
        indifference_tol: 10.0 * err * (1.0 + second * p * (1.0 - p)),
    }
    .into_certificate()
}

fn sure_certificate(ok: bool) -> Result<Certificate<f64>> {
    if ok {
        Ok(Certificate {
            value: 0.0,
            nash_ok: true,
            worst_row_gap: 0.0,
            worst_col_gap: 0.0,
        })
    } else {
        Err(Error::Refuted(String::from(
            "(a) sure-winning splits are not all-in",
        )))
    }
}

fn max_split_err(want: &[(u64, f64)], got: &[(u64, f64)]) -> f64 {
    if want.len() != got.len() || want.iter().zip(got).any(|(w, g)| w.0 != g.0) {
        return f64::INFINITY;
    }
    want.iter()
        .zip(got)
        .map(|(w, g)| (w.1 - g.1).abs())
        .fold(0.0, f64::max)
}

/// Optimality conditions of an isoelastic equilibrium.
pub fn verify_iso(spec: &GameSpec, eq: &IsoEquilibrium, grid: usize) -> Result<Certificate<f64>> {
    let (d, class) = canonical_pmfs(spec)?;
    let gamma = eq.gamma;
    if class == GameClass::SureWinning {
        let all_in = eq
            .splits
            .iter()
            .all(|&(k, s)| s == if d.pmf_a[k as usize] > 0.0 { 1.0 } else { 0.0 });
        return sure_certificate(all_in);
    }
    let p = eq
        .p_star
        .ok_or_else(|| Error::Refuted(String::from("missing prior")))?;
    let want = iso::split(p, &d, gamma)?;
    let split_err = max_split_err(&want, &eq.splits);
    let u = |c: f64| iso::utility(c, gamma).unwrap_or(f64::NEG_INFINITY);
    let split_gain = split_grid_gain(p, &d, &eq.splits, u);
    let value = iso::expected_utility(p, &d, gamma)?;
    let h = 1e-4 * p.min(1.0 - p);
    let second = ((iso::expected_utility(p + h, &d, gamma)? - 2.0 * value
        + iso::expected_utility(p - h, &d, gamma)?)
        / (h * h))
        .abs();
    let mut grid_min = f64::INFINITY;
    for x in prior_grid(grid) {
        grid_min = grid_min.min(iso::expected_utility(x, &d, gamma)?);
    }
    let err = eq.err_bound.max(1e-12);
    let (mut ua, mut ub) = (0.0, 0.0);
    for &(k, s) in &eq.splits {
        let (a, b) = (d.pmf_a[k as usize], d.pmf_b[k as usize]);
        if a > 0.0 {
            ua += a * u(s);
        }
        if b > 0.0 {
            ub += b * u(1.0 - s);
        }
    }
    BettingCheck {
        value,
        split_err,
        split_gain,
        grid_gain: value - grid_min,
        grid_slack: second * err * err + 1e-12,
        indifference: (ua - ub).abs(),
        indifference_tol: 10.0 * err * (1.0 + second * p * (1.0 - p)) + 1e-12,
    }
    .into_certificate()
}
