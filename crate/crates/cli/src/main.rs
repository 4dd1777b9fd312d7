//! Command line driver: runs the front tracker, the limit model, the κ sweep,
//! the finite-volume comparison and the functional audit, writing CSV and a
//! JSON summary into an output directory.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use machzero::fronttracker::{run, RunOptions};
use machzero::glimm::{audit, default_weights, estimate_constants, GlimmWeights};
use machzero::limits::{kappa_sweep, run_limit_model};
use machzero::oracle::{godunov, l1_distance, Mesh};
use machzero::Scenario;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Numerical(#[from] machzero::Error),
    #[error("i/o: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Validation { .. } => 1,
            CliError::Numerical(
                machzero::Error::InadmissibleScenario(_) | machzero::Error::InvalidMesh(_) | machzero::Error::CflViolation(_),
            ) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
            CliError::Check(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "machzero", version, about = "Front tracking for a liquid slab in gas and its zero-Mach limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, conflicts_with = "fixture")]
    scenario: Option<PathBuf>,
    /// Built-in datum: `standard` or `admissible:<seed>`.
    #[arg(long)]
    fixture: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Front tracking at one κ.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<f64>,
        /// Number of equal time intervals between snapshots.
        #[arg(long, default_value_t = 10)]
        snapshots: usize,
        /// Extra probe points besides 0, m/2 and m.
        #[arg(long, value_delimiter = ',')]
        probes: Vec<f64>,
    },
    /// Runs at several κ and compares with the limit model.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0.2,0.1,0.05,0.025")]
        kappas: String,
        /// Piston update interval; defaults to 1e-3 t_end.
        #[arg(long)]
        dt_piston: Option<f64>,
    },
    /// Gas half-lines around a rigid slab.
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dt_piston: Option<f64>,
    },
    /// L¹ distance to a first-order finite-volume solution at t_end.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 800)]
        cells: usize,
        #[arg(long, default_value_t = 0.45)]
        cfl: f64,
        /// Mesh bounds; the upper one defaults to m + 3.
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
    },
    /// Tracks the interaction functional and checks it event by event.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<f64>,
    },
}

fn load(common: &Common, kappa: Option<f64>) -> Result<Scenario, CliError> {
    match (&common.scenario, &common.fixture) {
        (Some(path), _) => config::parse_scenario(path, kappa),
        (None, Some(name)) => config::fixture(name, kappa),
        (None, None) => config::fixture("standard", kappa),
    }
}

/// Jitter seed: `MACHZERO_SEED` when set, else zero.
fn seed() -> Result<u64, CliError> {
    match std::env::var("MACHZERO_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Validation {
            field: "MACHZERO_SEED".into(),
            message: format!("{v:?} is not an unsigned integer"),
        }),
        Err(_) => Ok(0),
    }
}

fn prepare(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// Weights for the pressure range of the datum, widened by 5 % of `p_o`.
fn weights(s: &Scenario) -> Result<GlimmWeights, CliError> {
    let ps = s.initial.field().states.iter().map(|u| u.p).collect::<Vec<_>>();
    let pad = 0.05 * s.p_o;
    let lo = ps.iter().copied().fold(f64::INFINITY, f64::min) - pad;
    let hi = ps.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad;
    let (c_int, c_refl) = estimate_constants(&s.gas, &s.liquid_base, s.p_bar, lo, hi, &[s.kappa])?;
    Ok(default_weights(c_int, c_refl, 1.0)?)
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let seed = seed()?;
    match cmd {
        Command::Run { common, kappa, snapshots, probes } => {
            let s = load(&common, kappa)?;
            let n = snapshots.max(1);
            let mut points = vec![0.5 * s.m];
            points.extend(probes);
            let opts = RunOptions {
                seed,
                snapshots: (0..=n).map(|k| s.t_end * k as f64 / n as f64).collect(),
                probes: points,
                glimm: Some(weights(&s)?),
                ..RunOptions::default()
            };
            let tr = run(&s, &opts)?;
            prepare(&common.out)?;
            let reach = 4.0 + s.t_end * 2.0;
            output::snapshots(&common.out, &tr, -reach, s.m + reach)?;
            output::traces(&common.out, &tr.probes)?;
            output::events(&common.out, &tr.ledger)?;
            output::glimm(&common.out, &tr.glimm)?;
            output::summary(
                &common.out,
                &json!({
                    "command": "run",
                    "scenario": s,
                    "seed": seed,
                    "events": tr.events,
                    "fronts_born": tr.fronts_born,
                    "max_fronts": tr.max_fronts,
                    "max_rarefaction": tr.max_rarefaction,
                    "initial_wtv": tr.initial_wtv,
                }),
            )?;
        }
        Command::Sweep { common, kappas, dt_piston } => {
            let kappas = config::parse_kappas(&kappas)?;
            let s = load(&common, kappas.first().copied())?;
            let dt = dt_piston.unwrap_or(1e-3 * s.t_end);
            let r = kappa_sweep(&s, &kappas, dt)?;
            prepare(&common.out)?;
            output::sweep(&common.out, &r)?;
            output::summary(
                &common.out,
                &json!({
                    "command": "sweep",
                    "scenario": s,
                    "kappas": kappas,
                    "dt_piston": dt,
                    "windows": r.windows,
                    "tv_p_cap": r.tv_p_cap,
                    "limit_events": r.limit.events,
                    "verdicts": r.verdicts,
                }),
            )?;
        }
        Command::Limit { common, dt_piston } => {
            let s = load(&common, None)?;
            let dt = dt_piston.unwrap_or(1e-3 * s.t_end);
            let lim = run_limit_model(&s, dt)?;
            prepare(&common.out)?;
            output::limit(&common.out, &lim)?;
            output::summary(
                &common.out,
                &json!({
                    "command": "limit",
                    "scenario": s,
                    "dt_piston": dt,
                    "events": lim.events,
                    "v_l_final": lim.v_l.last().map(|n| n.1),
                }),
            )?;
        }
        Command::Compare { common, kappa, cells, cfl, lo, hi } => {
            let s = load(&common, kappa)?;
            let hi = hi.unwrap_or(s.m + 3.0);
            if cells < 2 || cells % 2 != 0 {
                return Err(CliError::Validation {
                    field: "cells".into(),
                    message: format!("{cells} must be even and at least 2"),
                });
            }
            let opts = RunOptions {
                seed,
                snapshots: vec![s.t_end],
                ledger: false,
                ..RunOptions::default()
            };
            let tr = run(&s, &opts)?;
            let fine = godunov(&s, Mesh::new(lo, hi, cells)?, cfl, s.t_end)?;
            let coarse = godunov(&s, Mesh::new(lo, hi, cells / 2)?, cfl, s.t_end)?;
            let distance = l1_distance(tr.sample(s.t_end)?, &fine.field(), lo, hi);
            let gap = l1_distance(&coarse.field(), &fine.field(), lo, hi);
            let passed = distance <= 2.0 * gap;
            prepare(&common.out)?;
            output::summary(
                &common.out,
                &json!({
                    "command": "compare",
                    "scenario": s,
                    "cells": cells,
                    "cfl": cfl,
                    "domain": [lo, hi],
                    "l1_distance": distance,
                    "self_convergence_gap": gap,
                    "passed": passed,
                }),
            )?;
            if !passed {
                return Err(CliError::Check(format!(
                    "L1 distance {distance:.3e} exceeds twice the {}-{cells} gap {gap:.3e}",
                    cells / 2
                )));
            }
        }
        Command::Audit { common, kappa } => {
            let s = load(&common, kappa)?;
            let w = weights(&s)?;
            let opts = RunOptions {
                seed,
                glimm: Some(w),
                ..RunOptions::default()
            };
            let tr = run(&s, &opts)?;
            let rep = audit(&tr.ledger, s.kappa);
            let upsilon0 = tr.glimm.first().map(|g| g.1.upsilon).unwrap_or(0.0);
            let admissible = upsilon0 < w.delta_bar;
            prepare(&common.out)?;
            output::events(&common.out, &tr.ledger)?;
            output::glimm(&common.out, &tr.glimm)?;
            output::summary(
                &common.out,
                &json!({
                    "command": "audit",
                    "scenario": s,
                    "weights": w,
                    "upsilon_initial": upsilon0,
                    "admissible": admissible,
                    "events": rep.events,
                    "interface_events": rep.interface_events,
                    "worst_decay_margin": rep.worst_decay_margin,
                    "worst_relative_increase": rep.worst_relative_increase,
                    "worst_sigma_sum_defect": rep.worst_sigma_sum_defect,
                    "violations": rep.violations.len(),
                }),
            )?;
            if !admissible {
                return Err(CliError::Check(format!(
                    "initial functional {upsilon0:.3e} is not below delta_bar {:.3e}",
                    w.delta_bar
                )));
            }
            if !rep.passed() {
                return Err(CliError::Check(format!("{} violations", rep.violations.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
