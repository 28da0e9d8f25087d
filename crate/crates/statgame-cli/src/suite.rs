//! Oracle certification over every small game plus optional random larger ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use statgame::dist::{classify, GameClass, GameSpec, Rational};
use statgame::fisher::solve_fisher;
use statgame::oracle::certify_fisher;
use statgame::oracle::ActionSet;

pub struct SuiteRequest {
    pub max_m: u64,
    pub seed: Option<u64>,
    pub samples: usize,
    pub sample_max_m: u64,
    /// Shifts every `ν*` by `1/100` before certifying, which must be refuted.
    pub perturb: bool,
}

pub struct SuiteOutcome {
    pub report: Value,
    pub refuted: usize,
}

/// Every game with `N >= 1` and `K_A <= K_B`, degenerate classes included.
fn exhaustive(max_m: u64) -> Vec<GameSpec> {
    let mut v = Vec::new();
    for m in 1..=max_m {
        for n in 1..=m {
            for ka in 0..=m {
                for kb in ka..=m {
                    v.push(GameSpec::fisher(n, ka, kb, m));
                }
            }
        }
    }
    v
}

fn sampled(seed: u64, count: usize, lo: u64, hi: u64) -> Vec<GameSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::new();
    while v.len() < count && lo <= hi {
        let m = rng.gen_range(lo..=hi);
        let s = GameSpec::fisher(
            rng.gen_range(1..=m),
            rng.gen_range(0..=m),
            rng.gen_range(0..=m),
            m,
        );
        if classify(&s) == GameClass::Nontrivial {
            v.push(s);
        }
    }
    v
}

fn check(spec: &GameSpec, perturb: bool) -> Value {
    let class = crate::solve::class_name(classify(spec));
    let base = json!({ "N": spec.n, "KA": spec.k_a, "KB": spec.k_b, "M": spec.m, "class": class });
    let mut rec = match base {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let outcome = solve_fisher(spec).and_then(|mut eq| {
        if perturb {
            let step = Rational::new(1.into(), 100.into());
            let nu = eq
                .nu_star
                .clone()
                .unwrap_or_else(|| Rational::from_integer(0.into()));
            let one = Rational::from_integer(1.into());
            eq.nu_star = Some(if &nu + &step < one {
                nu + step
            } else {
                nu - step
            });
        }
        let cert = certify_fisher(spec, &eq, ActionSet::Reduced)?;
        Ok((eq.v_star, cert))
    });
    match outcome {
        Ok((v, cert)) => {
            rec.insert("v_star".into(), v.to_string().into());
            rec.insert("oracle_value".into(), cert.value.to_string().into());
            rec.insert("nash_ok".into(), cert.nash_ok.into());
        }
        Err(e) => {
            rec.insert("nash_ok".into(), false.into());
            rec.insert("error".into(), e.to_string().into());
        }
    }
    Value::Object(rec)
}

pub fn run_suite(req: &SuiteRequest, jobs: usize) -> Result<SuiteOutcome, String> {
    let mut games = exhaustive(req.max_m);
    let n_exhaustive = games.len();
    if let Some(seed) = req.seed {
        games.extend(sampled(seed, req.samples, req.max_m + 1, req.sample_max_m));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let records: Vec<Value> =
        pool.install(|| games.par_iter().map(|s| check(s, req.perturb)).collect());
    let refuted = records
        .iter()
        .filter(|r| r["nash_ok"] != Value::Bool(true))
        .count();
    let nontrivial = records
        .iter()
        .filter(|r| r["class"] == "Nontrivial")
        .count();
    let report = json!({
        "max_M": req.max_m,
        "seed": req.seed,
        "perturb": req.perturb,
        "exhaustive": n_exhaustive,
        "nontrivial": nontrivial,
        "sampled": records.len() - n_exhaustive,
        "certified": records.len() - refuted,
        "refuted": refuted,
        "games": records,
    });
    Ok(SuiteOutcome { report, refuted })
}
