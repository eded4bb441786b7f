//! Executes a [`RunManifest`] and writes the CSV dataset plus its JSON
//! sidecar.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::capacity::ChannelEnsemble;
use crate::channel::LinkDistances;
use crate::cli::config::{Command, RunManifest};
use crate::cooperation::{compare_coverage, extension_report};
use crate::coverage::{
    solve_coverage_radius, solve_relay_radius, sweep_boundary, RateMetric, SweepOptions,
};
use crate::error::{Error, Result};

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// Formats like C's `%.9g`.
pub fn format_float(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

fn csv_row(out: &mut String, cells: &[f64]) {
    let row: Vec<String> = cells.iter().map(|&c| format_float(c)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// In-memory result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    /// Command-specific summary placed in the sidecar.
    pub report: Value,
}

pub fn execute(m: &RunManifest) -> Result<RunOutput> {
    m.validate()?;
    let ens = ChannelEnsemble::draw(&m.scenario, &m.mc)?;
    match m.command {
        Command::Bounds => bounds(m, &ens),
        Command::OptLoc => optloc(m, &ens),
        Command::Coverage => coverage(m, &ens),
        Command::Coop => coop(m, &ens),
    }
}

fn bounds(m: &RunManifest, ens: &ChannelEnsemble) -> Result<RunOutput> {
    let p = &m.params;
    let xs = linspace(p.d_x_min, p.d_x_max, p.sweep_points);
    let rows: Vec<_> = xs
        .par_iter()
        .map(|&x| {
            ens.bounds(
                &LinkDistances::from_cartesian((x, p.d_y), (1.0, 0.0)),
                p.min_mode,
            )
        })
        .collect();
    let mut csv = String::from(
        "d_x,c1,c2,c3,cutset,df,stderr_c1,stderr_c2,stderr_c3,stderr_cutset,stderr_df\n",
    );
    for (x, b) in xs.iter().zip(&rows) {
        let est = [b.c1, b.c2, b.c3, b.cutset, b.df];
        let mut cells = vec![*x];
        cells.extend(est.iter().map(|e| e.mean));
        cells.extend(est.iter().map(|e| e.std_error));
        csv_row(&mut csv, &cells);
    }
    Ok(RunOutput {
        csv,
        report: json!({ "d_y": p.d_y, "dest": [1.0, 0.0], "points": xs.len() }),
    })
}

fn optloc(m: &RunManifest, ens: &ChannelEnsemble) -> Result<RunOutput> {
    let p = &m.params;
    let radii = linspace(p.r_r_min, p.r_r_max, p.sweep_points);
    let rates: Vec<f64> = radii.par_iter().map(|&r| ens.c3(r).mean).collect();
    let mut csv = String::from("r_R,rate\n");
    for (r, c) in radii.iter().zip(&rates) {
        csv_row(&mut csv, &[*r, *c]);
    }
    let sol = solve_relay_radius(ens, &m.solver)?;
    Ok(RunOutput {
        csv,
        report: json!({
            "r_star": sol.radius,
            "rate_at_r_star": ens.c3(sol.radius).mean,
            "rate_target": m.scenario.rate_target,
            "iterations": sol.iterations,
            "bracket": [sol.bracket.0, sol.bracket.1],
        }),
    })
}

/// Configured relay radius, or the backed-off optimum.
fn relay_radius(m: &RunManifest, ens: &ChannelEnsemble) -> Result<(f64, Option<f64>)> {
    match m.params.relay_radius {
        Some(r) => Ok((r, None)),
        None => {
            let r_star = solve_relay_radius(ens, &m.solver)?.radius;
            Ok((m.params.backoff * r_star, Some(r_star)))
        }
    }
}

fn coverage(m: &RunManifest, ens: &ChannelEnsemble) -> Result<RunOutput> {
    let p = &m.params;
    let (r_r, r_star) = relay_radius(m, ens)?;
    let options = SweepOptions {
        metric: p.metric,
        min_mode: p.min_mode,
        use_symmetry: p.use_symmetry,
    };
    let region = sweep_boundary(
        &ens.with_relay(r_r),
        p.relay_count,
        p.angular_steps,
        &options,
        &m.solver,
    )?;
    if region.is_empty() {
        return Err(Error::NoSolution(format!(
            "no direction reaches R_c = {} with relays at r_R = {r_r}",
            m.scenario.rate_target
        )));
    }
    let mut csv = String::from("theta_deg,r_max\n");
    for e in &region.entries {
        csv_row(&mut csv, &[e.theta.to_degrees(), e.r_max]);
    }
    let radii = region.radii();
    Ok(RunOutput {
        csv,
        report: json!({
            "r_R": r_r,
            "r_star": r_star,
            "L": p.relay_count,
            "metric": p.metric.label(),
            "r_max_min": radii.iter().cloned().fold(f64::INFINITY, f64::min),
            "r_max_max": radii.iter().cloned().fold(0.0, f64::max),
        }),
    })
}

fn coop(m: &RunManifest, ens: &ChannelEnsemble) -> Result<RunOutput> {
    let p = &m.params;
    let (r_r, r_star) = relay_radius(m, ens)?;
    let view = ens.with_relay(r_r);
    let cmp = compare_coverage(
        &view,
        p.relay_count,
        p.angular_steps,
        &m.solver,
        p.use_symmetry,
    )?;
    if cmp.coop.is_empty() {
        return Err(Error::NoSolution(format!(
            "no direction reaches R_c = {} with relays at r_R = {r_r}, even cooperatively",
            m.scenario.rate_target
        )));
    }
    let gains = cmp.gains();
    let mut csv = String::from("theta_deg,r_max_noncoop,r_max_coop,gain\n");
    for ((n, c), g) in cmp
        .noncoop
        .entries
        .iter()
        .zip(&cmp.coop.entries)
        .zip(&gains)
    {
        csv_row(&mut csv, &[n.theta.to_degrees(), n.r_max, c.r_max, *g]);
    }

    let edge = PI / p.relay_count as f64;
    let base = SweepOptions {
        metric: RateMetric::Df,
        ..SweepOptions::default()
    };
    let edge_radius = solve_coverage_radius(&view, edge, p.relay_count, &base, &m.solver)?.radius;
    let extension = if edge_radius > 0.0 {
        serde_json::to_value(extension_report(
            &view,
            p.relay_count,
            edge_radius,
            edge,
            &p.hata,
            p.p_max_t,
        )?)
        .map_err(|e| Error::Io(e.to_string()))?
    } else {
        Value::Null
    };
    let min_gain = gains.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RunOutput {
        csv,
        report: json!({
            "r_R": r_r,
            "r_star": r_star,
            "L": p.relay_count,
            "min_gain": finite_or_null(min_gain),
            "extension": extension,
        }),
    })
}

/// Files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub sidecar_path: PathBuf,
    pub sidecar: Value,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    let p = csv.with_extension("json");
    if p == csv {
        csv.with_extension("meta.json")
    } else {
        p
    }
}

/// Runs the command, then writes the CSV and the sidecar.
pub fn run(m: &RunManifest) -> Result<RunSummary> {
    let start = Instant::now();
    let out = execute(m)?;
    let csv_path = m.output_path();
    fs::write(&csv_path, &out.csv)?;
    let sidecar = json!({
        "version": VERSION,
        "command": m.command.name(),
        "seed": m.mc.seed,
        "samples": m.mc.samples,
        "streams": m.mc.streams,
        "csv": csv_path.to_string_lossy(),
        "wall_time_s": start.elapsed().as_secs_f64(),
        "report": out.report,
    });
    let sidecar_path = sidecar_path(&csv_path);
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&sidecar_path, text + "\n")?;
    Ok(RunSummary {
        csv_path,
        sidecar_path,
        sidecar,
    })
}

/// `{"error": code, "field": name, "message": text}`.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.code(), "field": e.field(), "message": e.to_string() }).to_string()
}
