//! CSV and JSON writers. Floats carry 17 significant digits.

use std::fs::File;
use std::path::Path;

use machzero::fronttracker::{EventRecord, Trajectory};
use machzero::glimm::GlimmReport;
use machzero::limits::{LimitTrajectory, SweepReport};
use machzero::{Field, Region, Scenario, State, TimeSeries, WaveFamily};

use crate::CliError;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(dir: &Path, name: &str, header: &[&str]) -> Result<csv::Writer<File>, CliError> {
    let mut w = csv::Writer::from_path(dir.join(name))?;
    w.write_record(header)?;
    Ok(w)
}

fn waves(ws: &[(WaveFamily, f64)]) -> String {
    ws.iter()
        .map(|(f, s)| format!("{}:{}", f.index(), num(*s)))
        .collect::<Vec<_>>()
        .join(";")
}

fn tau(s: &Scenario, region: Region, u: State) -> Result<f64, CliError> {
    Ok(s.medium(region)?.tau_of_p(u.p)?)
}

/// One row per constant piece met in `[lo, hi]`, at its left end.
fn field_rows(w: &mut csv::Writer<File>, s: &Scenario, t: f64, f: &Field, lo: f64, hi: f64) -> Result<(), CliError> {
    let mut starts = vec![lo];
    starts.extend(f.breaks.iter().copied().filter(|&z| z > lo && z < hi));
    for z in starts {
        let u = f.value_at(z);
        let region = if z >= 0.0 && z < s.m { Region::Liquid } else { Region::GasLeft };
        w.write_record([num(t), num(z), num(u.p), num(u.v), num(tau(s, region, u)?)])?;
    }
    Ok(())
}

pub fn snapshots(dir: &Path, tr: &Trajectory, lo: f64, hi: f64) -> Result<(), CliError> {
    let mut w = writer(dir, "snapshots.csv", &["t", "z", "p", "v", "tau"])?;
    for (t, f) in &tr.snapshots {
        field_rows(&mut w, &tr.scenario, *t, f, lo, hi)?;
    }
    w.flush()?;
    Ok(())
}

pub fn traces(dir: &Path, probes: &[(f64, TimeSeries)]) -> Result<(), CliError> {
    let mut w = writer(dir, "traces.csv", &["z", "t", "p", "v"])?;
    for (z, ts) in probes {
        for (t, u) in ts.times.iter().zip(&ts.values) {
            w.write_record([num(*z), num(*t), num(u.p), num(u.v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn events(dir: &Path, ledger: &[EventRecord]) -> Result<(), CliError> {
    let mut w = writer(
        dir,
        "events.csv",
        &["t", "z", "location", "class", "sigmas_in", "sigmas_out", "d_upsilon"],
    )?;
    for e in ledger {
        w.write_record([
            num(e.t),
            num(e.z),
            e.location.as_str().to_string(),
            e.class.as_str().to_string(),
            waves(&e.incoming),
            waves(&e.outgoing),
            e.d_upsilon.map(num).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn glimm(dir: &Path, rows: &[(f64, GlimmReport)]) -> Result<(), CliError> {
    let mut w = writer(dir, "glimm.csv", &["t", "V_Gin", "V_Gout", "V_L", "Q_G", "Q_L", "upsilon", "wtv"])?;
    for (t, g) in rows {
        w.write_record([t, &g.v_g_in, &g.v_g_out, &g.v_l, &g.q_g, &g.q_l, &g.upsilon, &g.wtv].map(|x| num(*x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep(dir: &Path, r: &SweepReport) -> Result<(), CliError> {
    let mut w = writer(dir, "sweep.csv", &["kappa", "metric", "value"])?;
    for x in &r.records {
        let mut rows = vec![
            ("events", x.events as f64),
            ("initial_wtv", x.initial_wtv),
            ("tv_v", x.tv_v),
            ("tv_tau", x.tv_tau),
            ("tv_p", x.tv_p),
            ("tau_deviation", x.tau_deviation),
            ("piston_error", x.piston_error),
            ("path_a_error", x.path_a_error),
            ("path_b_error", x.path_b_error),
            ("lipschitz_v", x.lipschitz_v),
            ("lipschitz_p", x.lipschitz_p),
            ("lipschitz_gas", x.lipschitz_gas),
        ];
        let names: Vec<String> = (0..x.weakstar.len()).map(|k| format!("weakstar_{k}")).collect();
        rows.extend(names.iter().map(String::as_str).zip(x.weakstar.iter().copied()));
        for (metric, value) in rows {
            w.write_record([num(x.kappa), metric.to_string(), num(value)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn limit(dir: &Path, lim: &LimitTrajectory) -> Result<(), CliError> {
    let mut w = writer(dir, "piston.csv", &["t", "v_l"])?;
    for (t, v) in &lim.v_l {
        w.write_record([num(*t), num(*v)])?;
    }
    w.flush()?;
    let mut w = writer(dir, "walls.csv", &["side", "t", "p", "v"])?;
    for (side, ts) in [("left", &lim.wall_left), ("right", &lim.wall_right)] {
        for (t, u) in ts.times.iter().zip(&ts.values) {
            w.write_record([side.to_string(), num(*t), num(u.p), num(u.v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn summary(dir: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(dir.join("summary.json"), text + "\n")?;
    Ok(())
}
