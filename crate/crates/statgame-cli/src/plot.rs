//! Equilibrium strategy plot of a Fisher game as an SVG tile diagram.
//!
//! Columns are PII's pure actions weighted by the equilibrium mix (A-sequences
//! then B-sequences), rows are PI's (policy, sampling) pairs. A tile is filled
//! with class `win` when PI wins that pairing.

use std::fmt::Write;

use statgame::dist::{rational_to_f64, GameSpec, Rational, Scenario};
use statgame::error::Result;
use statgame::fisher::solve_fisher;
use statgame::oracle::{equilibrium_profile, payoff};

use crate::output::round12;

pub struct Plot {
    pub svg: String,
    pub rows: usize,
    pub cols: usize,
    pub win_fraction: f64,
}

/// Cumulative offsets of consecutive weights, scaled to `size`.
fn offsets(weights: impl Iterator<Item = Rational>, size: f64) -> Vec<f64> {
    let mut acc = Rational::from_integer(0.into());
    let mut out = vec![0.0];
    for w in weights {
        acc += w;
        out.push(rational_to_f64(&acc) * size);
    }
    out
}

fn f(x: f64) -> String {
    let r = round12(x);
    if r.fract() == 0.0 && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        serde_json::Number::from_f64(r).map_or_else(|| "0".into(), |n| n.to_string())
    }
}

pub fn strategy_plot(spec: &GameSpec, size: f64) -> Result<Plot> {
    let eq = solve_fisher(spec)?;
    let (canon, swapped) = spec.canonical();
    let profile = equilibrium_profile(&canon, &eq)?;
    let xs = offsets(
        profile
            .cols
            .iter()
            .map(|(_, i)| profile.weights[*i].clone()),
        size,
    );
    let ys = offsets(
        profile
            .rows
            .iter()
            .map(|(_, i)| profile.weights[*i].clone()),
        size,
    );

    let mut body = String::new();
    let mut win_area = 0.0;
    for (ri, (row, _)) in profile.rows.iter().enumerate() {
        let (y, h) = (ys[ri], ys[ri + 1] - ys[ri]);
        for (ci, (col, _)) in profile.cols.iter().enumerate() {
            let (x, w) = (xs[ci], xs[ci + 1] - xs[ci]);
            let win = payoff(row, col) == 1;
            if win {
                win_area += w * h;
            }
            let _ = writeln!(
                body,
                r#"<rect class="{}" x="{}" y="{}" width="{}" height="{}"/>"#,
                if win { "win" } else { "lose" },
                f(x),
                f(y),
                f(w),
                f(h)
            );
        }
    }
    // Scenario boundary between the A and B columns, and policy boundaries between row blocks.
    let n_a = profile
        .cols
        .iter()
        .filter(|(c, _)| c.scenario == Scenario::A)
        .count();
    let mut lines = String::new();
    if n_a > 0 && n_a < profile.cols.len() {
        let _ = writeln!(
            lines,
            r#"<line class="sep" x1="{0}" y1="0" x2="{0}" y2="{1}"/>"#,
            f(xs[n_a]),
            f(size)
        );
    }
    for (ri, pair) in profile.rows.windows(2).enumerate() {
        if pair[1].0.policy != pair[0].0.policy {
            let _ = writeln!(
                lines,
                r#"<line class="sep" x1="0" y1="{0}" x2="{1}" y2="{0}"/>"#,
                f(ys[ri + 1]),
                f(size)
            );
        }
    }
    let title = format!(
        "G({},{},{},{}){} P*={} nu*={} v*={}",
        canon.n,
        canon.k_a,
        canon.k_b,
        canon.m,
        if swapped { " relabelled" } else { "" },
        eq.p_star
            .as_ref()
            .map_or_else(|| "-".into(), |p| p.to_string()),
        eq.nu_star
            .as_ref()
            .map_or_else(|| "-".into(), |p| p.to_string()),
        eq.v_star
    );
    let s = f(size);
    let svg = format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
            "<title>{title}</title>\n",
            "<style>.win{{fill:#4c9a5b}}.lose{{fill:#c8553d}}.sep{{stroke:#000;stroke-width:2}}rect{{stroke:#fff;stroke-width:0.5}}</style>\n",
            "<g id=\"tiles\">\n{body}</g>\n<g id=\"separators\">\n{lines}</g>\n</svg>\n"
        ),
        s = s,
        title = title,
        body = body,
        lines = lines
    );
    Ok(Plot {
        svg,
        rows: profile.rows.len(),
        cols: profile.cols.len(),
        win_fraction: win_area / (size * size),
    })
}
