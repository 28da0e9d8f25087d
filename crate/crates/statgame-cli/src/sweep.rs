//! Grid sweeps and the limit tables.

use rayon::prelude::*;
use serde_json::{json, Value};
use statgame::bayes::{self, SolverConfig};
use statgame::dist::{GameClass, GameSpec};
use statgame::error::{Error, Result};
use statgame::fisher;
use statgame::iso;
use statgame::limits;

use crate::output::{num, Record};
use crate::solve::{
    bayes_fields, canonical_binomial, class_name, fisher_fields, fisher_float_fields, iso_fields,
};
use crate::Game;

/// Column order of sweep records; the sidecar schema documents each one.
pub const SWEEP_FIELDS: &[&str] = &[
    "game",
    "N",
    "KA",
    "KB",
    "M",
    "x_A",
    "x_B",
    "gamma",
    "class",
    "swapped",
    "degenerate",
    "conjecture",
    "k_star",
    "nu_star",
    "p_star",
    "v_star",
    "s_star",
    "g_over_log2",
    "err_bound",
    "splits",
    "error",
];

pub const VALUE_TABLE_FIELDS: &[&str] = &["x_A", "x_B", "value", "conjecture"];

pub const ASYMPTOTIC_FIELDS: &[&str] = &[
    "x_A",
    "x_B",
    "N",
    "x0_star",
    "beta",
    "alpha_A",
    "alpha_B",
    "epsilon",
    "p_approx",
    "theta_approx",
    "sampi",
    "theta_first_order",
    "phi",
    "gamma_diamond",
    "p_low",
    "p_high",
    "conjecture",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    Counts {
        ka: (u64, u64),
        kb: (u64, u64),
        m: u64,
    },
    Fractions {
        xa: (f64, f64, f64),
        xb: (f64, f64, f64),
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRequest {
    pub game: Game,
    pub n: u64,
    pub axis: Axis,
    pub gamma: Option<f64>,
    pub tol: f64,
}

/// `lo, lo + step, ...` up to `hi`, each rounded to 12 digits so that `0.1 + 0.2` prints as `0.3`.
pub fn float_grid(lo: f64, hi: f64, step: f64) -> std::result::Result<Vec<f64>, String> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(format!("step must be positive, got {step}"));
    }
    if !(lo <= hi) {
        return Err(format!("empty grid {lo}:{hi}"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| crate::output::round12(lo + i as f64 * step))
        .collect())
}

enum Cell {
    Counts(u64, u64),
    Fractions(f64, f64),
}

fn cells(req: &SweepRequest) -> std::result::Result<Vec<Cell>, String> {
    let out: Vec<Cell> = match req.axis {
        Axis::Counts { ka, kb, m } => {
            if ka.0 > ka.1 || kb.0 > kb.1 {
                return Err("empty K range".into());
            }
            if ka.1 > m || kb.1 > m {
                return Err(format!("K ranges must stay within 0:{m}"));
            }
            (ka.0..=ka.1)
                .flat_map(|a| (kb.0..=kb.1).map(move |b| Cell::Counts(a, b)))
                .collect()
        }
        Axis::Fractions { xa, xb } => {
            let (ga, gb) = (float_grid(xa.0, xa.1, xa.2)?, float_grid(xb.0, xb.1, xb.2)?);
            ga.iter()
                .flat_map(|&a| gb.iter().map(move |&b| Cell::Fractions(a, b)))
                .collect()
        }
    };
    if out.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(out)
}

fn base(req: &SweepRequest, cell: &Cell) -> Record {
    let mut r = Record::new();
    for f in SWEEP_FIELDS {
        r.insert((*f).into(), Value::Null);
    }
    r.insert("game".into(), req.game.name().into());
    r.insert("N".into(), req.n.into());
    match (cell, req.axis) {
        (Cell::Counts(a, b), Axis::Counts { m, .. }) => {
            r.insert("KA".into(), (*a).into());
            r.insert("KB".into(), (*b).into());
            r.insert("M".into(), m.into());
        }
        (Cell::Fractions(a, b), _) => {
            r.insert("x_A".into(), num(*a));
            r.insert("x_B".into(), num(*b));
        }
        _ => unreachable!("cell kind follows the axis"),
    }
    r.insert("gamma".into(), req.gamma.map_or(Value::Null, num));
    r.insert("conjecture".into(), false.into());
    r
}

fn solve_cell(req: &SweepRequest, cell: &Cell, r: &mut Record) -> Result<()> {
    let cfg = SolverConfig {
        tol: req.tol,
        ..SolverConfig::default()
    };
    match *cell {
        Cell::Counts(a, b) => {
            let Axis::Counts { m, .. } = req.axis else {
                unreachable!()
            };
            match req.game {
                Game::Fisher => {
                    fisher_fields(r, &fisher::solve_fisher(&GameSpec::fisher(req.n, a, b, m))?)
                }
                Game::Bayes => bayes_fields(
                    r,
                    &bayes::solve_bayes(&GameSpec::bayesian(req.n, a, b, m), &cfg)?,
                ),
                Game::Iso => {
                    let g = req.gamma.expect("iso sweeps carry gamma");
                    iso_fields(
                        r,
                        &iso::solve_iso(&GameSpec::statistical(req.n, a, b, m, g), g, req.tol)?,
                    )
                }
            }
        }
        Cell::Fractions(xa, xb) => {
            if req.game == Game::Fisher {
                fisher_float_fields(r, &fisher::binomial_fisher(req.n, xa, xb)?);
                return Ok(());
            }
            let (d, swapped) = canonical_binomial(req.n, xa, xb)?;
            match req.game {
                Game::Bayes => bayes_fields(r, &bayes::solve_bayes_dist(&d, &cfg, swapped)?),
                _ => iso_fields(
                    r,
                    &iso::solve_iso_dist(
                        &d,
                        req.gamma.expect("iso sweeps carry gamma"),
                        req.tol,
                        swapped,
                    )?,
                ),
            }
            if xa == xb || req.n == 0 {
                r.insert("class".into(), class_name(GameClass::BlindGuessing).into());
                r.insert("degenerate".into(), true.into());
            }
        }
    }
    Ok(())
}

/// One record per grid cell, in grid order. Cells that fail keep empty values and an `error` text.
pub fn run_sweep(req: &SweepRequest, jobs: usize) -> std::result::Result<Vec<Record>, String> {
    let cells = cells(req)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let mut r = base(req, c);
                if let Err(e) = solve_cell(req, c, &mut r) {
                    r = base(req, c);
                    r.insert("error".into(), e.to_string().into());
                }
                // Extra solver fields are not part of the sweep layout.
                r.retain(|k, _| SWEEP_FIELDS.contains(&k.as_str()));
                r
            })
            .collect()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    FisherPolicy,
    BayesPrior,
    Asymptotics,
}

pub fn run_table(table: Table, n: u64) -> Result<(Vec<Record>, &'static [&'static str])> {
    let rows: Vec<Record> = match table {
        Table::FisherPolicy | Table::BayesPrior => {
            let cells = if table == Table::FisherPolicy {
                limits::fisher_policy_table()?
            } else {
                limits::bayes_prior_table()?
            };
            cells
                .iter()
                .map(|c| {
                    let mut r = Record::new();
                    r.insert("x_A".into(), num(c.x_a));
                    r.insert("x_B".into(), num(c.x_b));
                    r.insert("value".into(), num(c.value));
                    r.insert("conjecture".into(), false.into());
                    r
                })
                .collect()
        }
        Table::Asymptotics => {
            if n == 0 {
                return Err(Error::DomainError("asymptotics need N >= 1".into()));
            }
            limits::table_grid()
                .into_iter()
                .map(|(xa, xb)| {
                    let a = limits::asymptotics(xa, xb, n)?;
                    let v = json!({
                        "x_A": num(xa), "x_B": num(xb), "N": n, "x0_star": num(a.x0_star), "beta": num(a.beta),
                        "alpha_A": num(a.alpha_a), "alpha_B": num(a.alpha_b), "epsilon": num(a.epsilon),
                        "p_approx": num(a.p_approx), "theta_approx": num(a.theta_approx), "sampi": num(a.sampi),
                        "theta_first_order": num(a.theta_first_order), "phi": num(a.phi),
                        "gamma_diamond": num(a.gamma_diamond), "p_low": num(a.fisher_prior_bounds.0),
                        "p_high": num(a.fisher_prior_bounds.1), "conjecture": true,
                    });
                    let Value::Object(r) = v else { unreachable!() };
                    Ok(r)
                })
                .collect::<Result<_>>()?
        }
    };
    let fields = if table == Table::Asymptotics {
        ASYMPTOTIC_FIELDS
    } else {
        VALUE_TABLE_FIELDS
    };
    Ok((rows, fields))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        assert_eq!(float_grid(0.05, 0.95, 0.05).unwrap().len(), 19);
        assert_eq!(float_grid(0.1, 0.3, 0.1).unwrap(), vec![0.1, 0.2, 0.3]);
        assert!(float_grid(0.1, 0.3, 0.0).is_err());
        assert!(float_grid(0.3, 0.1, 0.1).is_err());
    }
}
