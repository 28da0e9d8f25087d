//! Equilibrium reports for one game.

use serde_json::{json, Value};
use statgame::bayes::{self, BettingEquilibrium, SolverConfig};
use statgame::dist::{GameClass, GameSpec, Rational, ScenarioDistributions};
use statgame::error::Result;
use statgame::fisher::{self, FisherEquilibrium};
use statgame::iso::{self, IsoEquilibrium};
use statgame::oracle::{self, Certificate};

use crate::output::{exact, num, opt_num, opt_rat, rat, splits, Record};

pub fn class_name(c: GameClass) -> &'static str {
    match c {
        GameClass::BlindGuessing => "BlindGuessing",
        GameClass::SureWinning => "SureWinning",
        GameClass::Nontrivial => "Nontrivial",
    }
}

fn head(r: &mut Record, class: GameClass, swapped: bool) {
    r.insert("class".into(), class_name(class).into());
    r.insert("swapped".into(), swapped.into());
    r.insert("degenerate".into(), (class != GameClass::Nontrivial).into());
}

pub fn fisher_fields(r: &mut Record, eq: &FisherEquilibrium<Rational>) {
    head(r, eq.class, eq.swapped);
    r.insert("k_star".into(), eq.k_star.into());
    r.insert("nu_star".into(), opt_rat(eq.nu_star.as_ref()));
    r.insert("p_star".into(), opt_rat(eq.p_star.as_ref()));
    r.insert("v_star".into(), rat(&eq.v_star));
    r.insert("s_star".into(), opt_rat(eq.s_star.as_ref()));
}

pub fn fisher_float_fields(r: &mut Record, eq: &FisherEquilibrium<f64>) {
    head(r, eq.class, eq.swapped);
    r.insert("k_star".into(), eq.k_star.into());
    r.insert("nu_star".into(), opt_num(eq.nu_star));
    r.insert("p_star".into(), opt_num(eq.p_star));
    r.insert("v_star".into(), num(eq.v_star));
    r.insert("s_star".into(), opt_num(eq.s_star));
}

pub fn bayes_fields(r: &mut Record, eq: &BettingEquilibrium) {
    head(r, eq.class, eq.swapped);
    r.insert("p_star".into(), opt_num(eq.p_star));
    r.insert("theta_star".into(), opt_num(eq.theta_star));
    r.insert("g_over_log2".into(), num(eq.g_over_log2));
    r.insert("delta_g".into(), num(eq.delta_g));
    r.insert("err_bound".into(), num(eq.err_bound));
    r.insert("method".into(), format!("{:?}", eq.method).into());
    r.insert("iterations".into(), eq.iterations.into());
    r.insert("splits".into(), splits(&eq.splits));
}

pub fn iso_fields(r: &mut Record, eq: &IsoEquilibrium) {
    head(r, eq.class, eq.swapped);
    r.insert("gamma".into(), num(eq.gamma));
    r.insert("p_star".into(), opt_num(eq.p_star));
    r.insert("theta_star".into(), opt_num(eq.theta_star));
    r.insert("u_star".into(), num(eq.u_star));
    r.insert("err_bound".into(), num(eq.err_bound));
    r.insert("contraction_bound".into(), opt_num(eq.contraction_bound));
    r.insert("method".into(), format!("{:?}", eq.method).into());
    r.insert("iterations".into(), eq.iterations.into());
    r.insert("splits".into(), splits(&eq.splits));
}

fn float_certificate(c: &Certificate<f64>) -> Value {
    json!({ "nash_ok": c.nash_ok, "value": num(c.value), "worst_row_gap": num(c.worst_row_gap), "worst_col_gap": num(c.worst_col_gap) })
}

fn spec_fields(spec: &GameSpec) -> Record {
    let mut r = Record::new();
    r.insert("N".into(), spec.n.into());
    r.insert("KA".into(), spec.k_a.into());
    r.insert("KB".into(), spec.k_b.into());
    r.insert("M".into(), spec.m.into());
    r
}

/// Fisher report, with the exact rationals and, when asked, the oracle certificate.
pub fn fisher_report(spec: &GameSpec, verify: bool) -> Result<Value> {
    let eq = fisher::solve_fisher(spec)?;
    let mut r = spec_fields(spec);
    r.insert("game".into(), "fisher".into());
    fisher_fields(&mut r, &eq);
    r.insert(
        "prior_interval".into(),
        eq.prior_interval
            .as_ref()
            .map_or(Value::Null, |(lo, hi)| Value::Array(vec![rat(lo), rat(hi)])),
    );
    r.insert(
        "exact".into(),
        json!({
            "nu_star": exact(eq.nu_star.as_ref()),
            "p_star": exact(eq.p_star.as_ref()),
            "v_star": exact(Some(&eq.v_star)),
            "s_star": exact(eq.s_star.as_ref()),
        }),
    );
    if verify {
        let c = oracle::verify_fisher(spec, &eq)?;
        r.insert(
            "certificate".into(),
            json!({
                "nash_ok": c.nash_ok,
                "value": c.value.to_string(),
                "worst_row_gap": c.worst_row_gap.to_string(),
                "worst_col_gap": c.worst_col_gap.to_string(),
            }),
        );
    }
    Ok(Value::Object(r))
}

pub fn bayes_report(
    spec: &GameSpec,
    cfg: &SolverConfig,
    verify: bool,
    grid: usize,
) -> Result<Value> {
    let eq = bayes::solve_bayes(spec, cfg)?;
    let mut r = spec_fields(spec);
    r.insert("game".into(), "bayes".into());
    bayes_fields(&mut r, &eq);
    if verify {
        r.insert(
            "certificate".into(),
            float_certificate(&oracle::verify_bayes(spec, &eq, grid)?),
        );
    }
    Ok(Value::Object(r))
}

pub fn iso_report(
    spec: &GameSpec,
    gamma: f64,
    tol: f64,
    verify: bool,
    grid: usize,
) -> Result<Value> {
    let eq = iso::solve_iso(spec, gamma, tol)?;
    let mut r = spec_fields(spec);
    r.insert("game".into(), "iso".into());
    iso_fields(&mut r, &eq);
    if verify {
        r.insert(
            "certificate".into(),
            float_certificate(&oracle::verify_iso(spec, &eq, grid)?),
        );
    }
    Ok(Value::Object(r))
}

/// Binomial pmfs ordered so that `x_A ≤ x_B`.
pub fn canonical_binomial(
    n: u64,
    x_a: f64,
    x_b: f64,
) -> Result<(ScenarioDistributions<f64>, bool)> {
    let swapped = x_a > x_b;
    let (lo, hi) = if swapped { (x_b, x_a) } else { (x_a, x_b) };
    Ok((statgame::dist::binom_pmfs(n, lo, hi)?, swapped))
}
