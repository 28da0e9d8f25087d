//! `statgame` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or solver errors, 2 when a certificate is refuted.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod plot;
mod solve;
mod suite;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use statgame::bayes::{Method, SolverConfig};
use statgame::dist::GameSpec;
use statgame::error::Error;

use crate::output::{to_csv, to_json, write_atomic};
use crate::sweep::{Axis, SweepRequest, Table};

#[derive(Parser)]
#[command(
    name = "statgame",
    version,
    about = "Equilibria of statistical guessing games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one game and print a JSON report.
    Solve(SolveArgs),
    /// Evaluate a grid of games, or a limit table, into CSV or JSON.
    Sweep(SweepArgs),
    /// Draw the equilibrium strategy plot of a Fisher game as SVG.
    StrategyPlot(PlotArgs),
    /// Certify closed-form Fisher equilibria against the brute-force oracle.
    VerifySuite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Game {
    Fisher,
    Bayes,
    Iso,
}

impl Game {
    pub fn name(self) -> &'static str {
        match self {
            Game::Fisher => "fisher",
            Game::Bayes => "bayes",
            Game::Iso => "iso",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Bisection,
    FixedPoint,
    Interval,
    Newton,
    Restricted,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Bisection => Method::Bisection,
            MethodArg::FixedPoint => Method::FixedPoint,
            MethodArg::Interval => Method::Interval,
            MethodArg::Newton => Method::Newton,
            MethodArg::Restricted => Method::Restricted,
        }
    }
}

#[derive(Args)]
struct GameArgs {
    /// Sample size.
    #[arg(long = "N")]
    n: u64,
    /// Marked items under scenario A.
    #[arg(long = "KA")]
    k_a: u64,
    /// Marked items under scenario B.
    #[arg(long = "KB")]
    k_b: u64,
    /// Population size.
    #[arg(long = "M")]
    m: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    game: Game,
    #[command(flatten)]
    spec: GameArgs,
    /// Relative risk aversion, required for `iso`.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Root finder for `bayes`.
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Attach an oracle certificate; a refuted certificate exits with 2.
    #[arg(long)]
    verify: bool,
    /// Prior grid size of the betting-game certificate.
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableArg {
    FisherPolicy,
    BayesPrior,
    Asymptotics,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "fisher")]
    game: Game,
    #[arg(long = "N", default_value_t = 0)]
    n: u64,
    /// Population size of a count sweep.
    #[arg(long = "M")]
    m: Option<u64>,
    /// Inclusive `lo:hi` range of K_A; defaults to `0:M`.
    #[arg(long = "KA-range")]
    ka_range: Option<String>,
    #[arg(long = "KB-range")]
    kb_range: Option<String>,
    /// `lo:hi:step` grid of x_A; selects a Binomial sweep.
    #[arg(long = "XA-grid")]
    xa_grid: Option<String>,
    #[arg(long = "XB-grid")]
    xb_grid: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Reproduce a limit table instead of sweeping games.
    #[arg(long, value_enum)]
    table: Option<TableArg>,
    /// Comma-separated subset of columns.
    #[arg(long)]
    fields: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    spec: GameArgs,
    /// Side length in user units.
    #[arg(long, default_value_t = 600.0)]
    size: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long = "max-M", default_value_t = 4)]
    max_m: u64,
    /// Also certify random games with `max-M < M <= sample-max-M`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long = "sample-max-M", default_value_t = 8)]
    sample_max_m: u64,
    /// Inject a fault into every closed form; the suite must then fail.
    #[arg(long)]
    perturb: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

enum Failure {
    Usage(String),
    Refuted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Refuted(_) => Failure::Refuted(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn print(doc: &Value) -> Outcome {
    std::io::stdout()
        .write_all(&to_json(doc))
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let GameArgs { n, k_a, k_b, m } = a.spec;
    let doc = match a.game {
        Game::Fisher => solve::fisher_report(&GameSpec::fisher(n, k_a, k_b, m), a.verify)?,
        Game::Bayes => {
            let cfg = SolverConfig {
                tol: a.tol,
                method: a.method.into(),
                ..SolverConfig::default()
            };
            solve::bayes_report(&GameSpec::bayesian(n, k_a, k_b, m), &cfg, a.verify, a.grid)?
        }
        Game::Iso => {
            let g = a
                .gamma
                .ok_or_else(|| Failure::Usage("--gamma is required for --game iso".into()))?;
            solve::iso_report(
                &GameSpec::statistical(n, k_a, k_b, m, g),
                g,
                a.tol,
                a.verify,
                a.grid,
            )?
        }
    };
    print(&doc)
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("expected lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_grid(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("expected lo:hi:step, got {s:?}")))?;
    match parts[..] {
        [lo, hi, step] => Ok((lo, hi, step)),
        _ => Err(Failure::Usage(format!("expected lo:hi:step, got {s:?}"))),
    }
}

fn select(all: &[&str], fields: Option<&str>) -> Result<Vec<String>, Failure> {
    let Some(list) = fields else {
        return Ok(all.iter().map(|s| s.to_string()).collect());
    };
    list.split(',')
        .map(|f| {
            let f = f.trim();
            if all.contains(&f) {
                Ok(f.to_string())
            } else {
                Err(Failure::Usage(format!(
                    "unknown field {f:?}; known: {}",
                    all.join(",")
                )))
            }
        })
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    if a.format == Format::Svg {
        return Err(Failure::Usage(
            "sweeps write csv or json; use strategy-plot for SVG".into(),
        ));
    }
    let (records, all, request) = if let Some(t) = a.table {
        let table = match t {
            TableArg::FisherPolicy => Table::FisherPolicy,
            TableArg::BayesPrior => Table::BayesPrior,
            TableArg::Asymptotics => Table::Asymptotics,
        };
        let (rows, fields) = sweep::run_table(table, a.n)?;
        (rows, fields, json!({ "table": format!("{t:?}"), "N": a.n }))
    } else {
        let axis = match (&a.xa_grid, &a.xb_grid) {
            (Some(xa), Some(xb)) => Axis::Fractions {
                xa: parse_grid(xa)?,
                xb: parse_grid(xb)?,
            },
            (None, None) => {
                let m =
                    a.m.ok_or_else(|| Failure::Usage("--M is required for a count sweep".into()))?;
                let ka = a.ka_range.as_deref().map_or(Ok((0, m)), parse_range)?;
                let kb = a.kb_range.as_deref().map_or(Ok((0, m)), parse_range)?;
                Axis::Counts { ka, kb, m }
            }
            _ => return Err(Failure::Usage("--XA-grid and --XB-grid go together".into())),
        };
        if a.game == Game::Iso && a.gamma.is_none() {
            return Err(Failure::Usage("--gamma is required for --game iso".into()));
        }
        let req = SweepRequest {
            game: a.game,
            n: a.n,
            axis,
            gamma: a.gamma,
            tol: a.tol,
        };
        let rows = sweep::run_sweep(&req, a.jobs).map_err(Failure::Usage)?;
        let request = json!({
            "game": a.game.name(), "N": a.n, "M": a.m, "KA_range": a.ka_range, "KB_range": a.kb_range,
            "XA_grid": a.xa_grid, "XB_grid": a.xb_grid, "gamma": a.gamma, "tol": a.tol,
        });
        (rows, sweep::SWEEP_FIELDS, request)
    };
    let header = select(all, a.fields.as_deref())?;
    let bytes = match a.format {
        Format::Csv => to_csv(&header, &records).map_err(|e| Failure::Usage(e.to_string()))?,
        _ => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .map(|h| (h.clone(), r.get(h).cloned().unwrap_or(Value::Null)))
                            .collect(),
                    )
                })
                .collect();
            to_json(&json!({ "request": request, "fields": header, "records": rows }))
        }
    };
    write_atomic(&a.out, &bytes).map_err(|e| Failure::Usage(format!("{}: {e}", a.out.display())))
}

fn cmd_strategy_plot(a: PlotArgs) -> Outcome {
    if !(a.size > 0.0 && a.size.is_finite()) {
        return Err(Failure::Usage(format!(
            "--size must be positive, got {}",
            a.size
        )));
    }
    let GameArgs { n, k_a, k_b, m } = a.spec;
    let p = plot::strategy_plot(&GameSpec::fisher(n, k_a, k_b, m), a.size)?;
    write_atomic(&a.out, p.svg.as_bytes())
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.out.display())))?;
    print(&json!({ "rows": p.rows, "cols": p.cols, "win_fraction": output::num(p.win_fraction) }))
}

fn cmd_verify_suite(a: SuiteArgs) -> Outcome {
    let req = suite::SuiteRequest {
        max_m: a.max_m,
        seed: a.seed,
        samples: a.samples,
        sample_max_m: a.sample_max_m,
        perturb: a.perturb,
    };
    let out = suite::run_suite(&req, a.jobs).map_err(Failure::Usage)?;
    print(&out.report)?;
    if out.refuted > 0 {
        return Err(Failure::Refuted(format!("{} game(s) refuted", out.refuted)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::StrategyPlot(a) => cmd_strategy_plot(a),
        Command::VerifySuite(a) => cmd_verify_suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refuted(msg)) => {
            eprintln!("refuted: {msg}");
            ExitCode::from(2)
        }
    }
}
