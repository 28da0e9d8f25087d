use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use statgame::bayes::{solve_bayes, splits, SolverConfig};
use statgame::dist::{action_counts, binomial, classify, GameClass, GameSpec, Rational, Scenario};
use statgame::fisher::solve_fisher;
use statgame::iso::{self, solve_iso};
use statgame::oracle::{
    certify_fisher, dedup_rows, enumerate_cols, enumerate_game, enumerate_game_with,
    game_value_lp_free, game_value_lp_free_with, payoff, verify_bayes, verify_fisher, verify_iso,
    ActionSet,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn all_games(max_m: u64) -> Vec<GameSpec> {
    let mut v = Vec::new();
    for m in 1..=max_m {
        for n in 0..=m {
            for ka in 0..=m {
                for kb in 0..=m {
                    v.push(GameSpec::fisher(n, ka, kb, m));
                }
            }
        }
    }
    v
}

/// Pure maximin over PI's pure rows, a lower bound on the value.
fn pure_maximin(spec: &GameSpec) -> Rational {
    let m = enumerate_game(&spec.canonical().0).unwrap();
    (0..m.n_rows())
        .map(|r| m.row(r).iter().map(|&x| u32::from(x)).min().unwrap())
        .max()
        .map_or_else(Rational::zero, |x| Rational::from_integer(BigInt::from(x)))
}

#[test]
fn small_table_matches_closed_form() {
    for spec in all_games(2) {
        let eq = solve_fisher(&spec).unwrap();
        assert_eq!(game_value_lp_free(&spec).unwrap(), eq.v_star, "{spec:?}");
        assert!(pure_maximin(&spec) <= eq.v_star);
    }
    assert_eq!(
        game_value_lp_free(&GameSpec::fisher(1, 1, 2, 2)).unwrap(),
        q(2, 3)
    );
    assert_eq!(
        game_value_lp_free(&GameSpec::fisher(2, 0, 1, 2)).unwrap(),
        Rational::one()
    );
    assert_eq!(
        game_value_lp_free(&GameSpec::fisher(1, 0, 1, 2)).unwrap(),
        q(2, 3)
    );
}

#[test]
fn richer_action_sets_do_not_help() {
    for spec in all_games(3) {
        let v = solve_fisher(&spec).unwrap().v_star;
        for set in [ActionSet::PermutationInvariant, ActionSet::Full] {
            assert_eq!(
                game_value_lp_free_with(&spec, set).unwrap(),
                v,
                "{spec:?} {set:?}"
            );
        }
    }
}

#[test]
fn matrix_dimensions_follow_the_counts() {
    for spec in all_games(5) {
        let (canon, _) = spec.canonical();
        let Ok(r) = action_counts(&canon) else {
            continue;
        };
        let samplings = binomial(canon.m, canon.n).to_u64().unwrap();
        let m = enumerate_game(&canon).unwrap();
        assert_eq!(m.n_cols() as u64, r.a2.to_u64().unwrap(), "{spec:?}");
        let ab = canon
            .support(Scenario::A)
            .intersect(&canon.support(Scenario::B))
            .map_or(0, |s| s.len());
        assert_eq!(m.n_rows() as u64, samplings << ab, "{spec:?}");
        let m = enumerate_game_with(&canon, ActionSet::PermutationInvariant).unwrap();
        assert_eq!(m.n_rows() as u64, samplings << (canon.n + 1), "{spec:?}");
        assert_eq!(
            m.n_rows() as u64,
            samplings * r.p_r.value().unwrap().to_u64().unwrap()
        );
    }
}

#[test]
fn columns_list_a_sequences_first() {
    let cols = enumerate_cols(&GameSpec::fisher(1, 1, 2, 3)).unwrap();
    assert_eq!(cols.len(), 3 + 3);
    assert!(cols[..3]
        .iter()
        .all(|c| c.scenario == Scenario::A && c.sequence.count_ones() == 1));
    assert!(cols[3..]
        .iter()
        .all(|c| c.scenario == Scenario::B && c.sequence.count_ones() == 2));
}

#[test]
fn dedup_keeps_distinct_rows() {
    let m = enumerate_game_with(&GameSpec::fisher(1, 0, 1, 2), ActionSet::Full).unwrap();
    let d = dedup_rows(&m);
    assert!(d.n_rows() <= m.n_rows() && d.n_cols() == m.n_cols());
    for i in 0..d.n_rows() {
        for j in 0..i {
            assert_ne!(d.row(i), d.row(j));
        }
    }
}

#[test]
fn payoff_is_a_win_indicator() {
    let m = enumerate_game_with(
        &GameSpec::fisher(2, 1, 2, 3),
        ActionSet::PermutationInvariant,
    )
    .unwrap();
    for (r, row) in m.rows.iter().enumerate() {
        for (c, col) in m.cols.iter().enumerate() {
            let k = (col.sequence & row.sampling).count_ones();
            let guess_b = row.policy >> k & 1 == 1;
            let win = guess_b == (col.scenario == Scenario::B);
            assert_eq!(payoff(row, col), u8::from(win));
            assert_eq!(m.get(r, c), u8::from(win));
        }
    }
}

#[test]
fn perturbed_mixing_is_refuted() {
    for spec in [
        GameSpec::fisher(1, 0, 1, 2),
        GameSpec::fisher(2, 1, 2, 4),
        GameSpec::fisher(3, 1, 3, 5),
    ] {
        let eq = solve_fisher(&spec).unwrap();
        let mut bad = eq.clone();
        bad.nu_star = Some(eq.nu_star.clone().unwrap() + q(1, 100));
        assert!(verify_fisher(&spec, &bad).is_err(), "{spec:?}");
        let mut bad = eq.clone();
        bad.p_star = Some(eq.p_star.clone().unwrap() + q(1, 100));
        let cert = certify_fisher(&spec, &bad, ActionSet::Reduced).unwrap();
        assert!(
            !cert.nash_ok && cert.worst_row_gap > Rational::zero(),
            "{spec:?}"
        );
    }
}

#[test]
fn betting_certificates() {
    let cfg = SolverConfig::default();
    let spec = GameSpec::bayesian(3, 2, 4, 8);
    let eq = solve_bayes(&spec, &cfg).unwrap();
    assert!(verify_bayes(&spec, &eq, 200).unwrap().nash_ok);
    let spec = GameSpec::bayesian(1, 0, 1, 2);
    let eq = solve_bayes(&spec, &cfg).unwrap();
    let mut bad = eq.clone();
    let p = eq.p_star.unwrap() + 0.05;
    let d = statgame::dist::hypergeom_pmfs(&spec).unwrap().to_f64();
    bad.p_star = Some(p);
    bad.splits = splits(p, &d).unwrap();
    assert!(verify_bayes(&spec, &bad, 200).is_err());
    let mut bad = eq.clone();
    bad.splits[0].1 = (bad.splits[0].1 + 0.1).min(1.0);
    assert!(verify_bayes(&spec, &bad, 200).is_err());
}

#[test]
fn isoelastic_certificates() {
    let spec = GameSpec::bayesian(2, 1, 3, 5);
    for gamma in [0.3, 0.5, 2.0, 4.0] {
        let eq = solve_iso(&spec, gamma, 1e-12).unwrap();
        assert!(verify_iso(&spec, &eq, 200).unwrap().nash_ok, "γ = {gamma}");
        let mut bad = eq.clone();
        let p = eq.p_star.unwrap() + 0.05;
        bad.p_star = Some(p);
        bad.splits = iso::split(
            p,
            &statgame::dist::hypergeom_pmfs(&spec).unwrap().to_f64(),
            gamma,
        )
        .unwrap();
        assert!(verify_iso(&spec, &bad, 200).is_err(), "γ = {gamma}");
    }
}

#[test]
fn size_guard() {
    assert!(enumerate_game_with(&GameSpec::fisher(2, 1, 2, 4), ActionSet::Full).is_err());
    assert!(enumerate_game(&GameSpec::fisher(20, 10, 20, 40)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_games_are_certified(m in 2u64..=7, n_frac in 0.0f64..1.0, ka in 0u64..=7, kb in 0u64..=7) {
        let n = ((m as f64 * n_frac) as u64).clamp(1, m);
        let spec = GameSpec::fisher(n, ka.min(m), kb.min(m), m);
        prop_assume!(classify(&spec) == GameClass::Nontrivial);
        let eq = solve_fisher(&spec).unwrap();
        let cert = verify_fisher(&spec, &eq).unwrap();
        prop_assert_eq!(&cert.value, &eq.v_star);
        prop_assert!(pure_maximin(&spec) <= eq.v_star);
    }
}
