//! The incompressible limit and the κ → 0 measurements.
//!
//! As κ → 0 the liquid becomes a rigid slab moving with velocity `v_l(t)`,
//! pushed by the gas pressures on its two faces: `m v̇_l = p(0−) − p(m+)`.
//! [`run_limit_model`] solves this model by front tracking in the two gas
//! half-lines; [`kappa_sweep`] compares it with the compressible runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eos::Medium;
use crate::error::{Error, Result};
use crate::field::{Field, TimeSeries};
use crate::fronttracker::{RunOptions, Tracker, Trajectory, DEFAULT_EVENT_CAP as EVENT_CAP, ZERO_WAVE};
use crate::laxwaves::{char_speed, classify, shock_speed, State, WaveFamily, WaveKind};
use crate::riemann::{discretize_rarefaction, solve_interior, solve_piston_boundary, WallSide, DEFAULT_TOL};
use crate::scenario::{Region, Scenario};

#[derive(Debug, Clone, Copy)]
struct GasFront {
    family: WaveFamily,
    z: f64,
    speed: f64,
}

/// Front tracking on one gas half-line closed by the moving slab.
///
/// `cells[0]` is the far-field state on the left line and the state at the
/// wall on the right line.
struct HalfLine {
    side: WallSide,
    wall: f64,
    gas: Medium,
    eps: f64,
    fronts: Vec<GasFront>,
    cells: Vec<State>,
}

impl HalfLine {
    fn adjacent(&self) -> State {
        match self.side {
            WallSide::LeftGas => *self.cells.last().expect("non-empty"),
            WallSide::RightGas => self.cells[0],
        }
    }

    fn speed(&self, fam: WaveFamily, left: State, right: State) -> Result<f64> {
        match classify(fam, right.p - left.p)? {
            WaveKind::Shock => shock_speed(&self.gas, fam, left.p, right.p),
            WaveKind::Rarefaction => char_speed(&self.gas, fam, left.p),
        }
    }

    /// Waves `(family, right state)` from `left`, rarefactions split when asked.
    fn expand(&self, fam: WaveFamily, left: State, right: State, split: bool, out: &mut Vec<(WaveFamily, State)>) -> Result<()> {
        let sigma = right.p - left.p;
        if sigma.abs() < ZERO_WAVE {
            return Ok(());
        }
        if split && sigma.abs() > self.eps * (1.0 + 1e-9) && classify(fam, sigma)? == WaveKind::Rarefaction {
            let w = discretize_rarefaction(&self.gas, fam, left, sigma, self.eps)?;
            let n = w.len();
            for (k, x) in w.into_iter().enumerate() {
                out.push((fam, if k + 1 == n { right } else { x.right }));
            }
        } else {
            out.push((fam, right));
        }
        Ok(())
    }

    /// Replaces the `old` fronts after `cells[a]` by `waves`, all placed at
    /// `z`. `cells[a]` and `cells[b]` stay; the last wave ends on `cells[b]`.
    fn replace(&mut self, a: usize, b: usize, old: usize, z: f64, mut waves: Vec<(WaveFamily, State)>) -> Result<()> {
        if waves.is_empty() {
            self.cells.drain(a + 1..=b);
            self.fronts.drain(a..a + old);
            return Ok(());
        }
        let end = self.cells[b];
        waves.last_mut().expect("non-empty").1 = end;
        let mut prev = self.cells[a];
        let mut fronts = Vec::with_capacity(waves.len());
        for &(fam, right) in &waves {
            fronts.push(GasFront {
                family: fam,
                z,
                speed: self.speed(fam, prev, right)?,
            });
            prev = right;
        }
        waves.pop();
        self.cells.splice(a + 1..b, waves.into_iter().map(|w| w.1));
        self.fronts.splice(a..a + old, fronts);
        Ok(())
    }

    /// Riemann problem between `cells[a]` and `cells[b]` at `z`, replacing
    /// `old` fronts.
    fn resolve(&mut self, a: usize, b: usize, old: usize, z: f64, split: [bool; 2]) -> Result<()> {
        let (left, right) = (self.cells[a], self.cells[b]);
        let sol = solve_interior(&self.gas, left, right, DEFAULT_TOL)?;
        let mut waves = Vec::new();
        self.expand(WaveFamily::One, left, sol.middle, split[0], &mut waves)?;
        self.expand(WaveFamily::Two, sol.middle, right, split[1], &mut waves)?;
        self.replace(a, b, old, z, waves)
    }

    fn collide(&mut self, i: usize) -> Result<()> {
        let z = 0.5 * (self.fronts[i].z + self.fronts[i + 1].z);
        // an incoming rarefaction re-emerges with its own size, already split
        let mut split = [true; 2];
        for j in [i, i + 1] {
            let f = self.fronts[j];
            if classify(f.family, self.cells[j + 1].p - self.cells[j].p)? == WaveKind::Rarefaction {
                split[f.family.index() as usize - 1] = false;
            }
        }
        self.resolve(i, i + 2, 2, z, split)
    }

    /// Re-imposes the wall velocity `v_l`, emitting one wave into the gas.
    fn wall_emit(&mut self, v_l: f64) -> Result<()> {
        let adj = self.adjacent();
        let w = solve_piston_boundary(self.side, self.gas.base(), adj, v_l, DEFAULT_TOL)?;
        let mut waves = Vec::new();
        match self.side {
            WallSide::LeftGas => {
                let n = self.fronts.len();
                self.expand(WaveFamily::One, adj, w.wall, true, &mut waves)?;
                if waves.is_empty() {
                    self.cells[n] = w.wall;
                    return Ok(());
                }
                self.cells.push(w.wall);
                self.replace(n, n + 1, 0, self.wall, waves)
            }
            WallSide::RightGas => {
                self.expand(WaveFamily::Two, w.wall, adj, true, &mut waves)?;
                if waves.is_empty() {
                    self.cells[0] = w.wall;
                    return Ok(());
                }
                self.cells.insert(0, w.wall);
                self.replace(0, 1, 0, self.wall, waves)
            }
        }
    }

    /// Removes the front that just reached the wall and reflects it.
    fn absorb(&mut self, v_l: f64) -> Result<()> {
        match self.side {
            WallSide::LeftGas => {
                self.fronts.pop();
                self.cells.pop();
            }
            WallSide::RightGas => {
                self.fronts.remove(0);
                self.cells.remove(0);
            }
        }
        self.wall_emit(v_l)
    }

    /// Earliest collision or wall hit on this line, as `(dt, event)`.
    fn next_event(&self) -> Option<(f64, LineEvent)> {
        let mut best: Option<(f64, LineEvent)> = None;
        let mut offer = |dt: f64, e: LineEvent| {
            if best.is_none_or(|(b, _)| dt < b) {
                best = Some((dt.max(0.0), e));
            }
        };
        for (i, w) in self.fronts.windows(2).enumerate() {
            if w[0].speed > w[1].speed {
                offer((w[1].z - w[0].z) / (w[0].speed - w[1].speed), LineEvent::Collision(i));
            }
        }
        match self.side {
            WallSide::LeftGas => {
                if let Some(f) = self.fronts.last().filter(|f| f.speed > 0.0) {
                    offer((self.wall - f.z) / f.speed, LineEvent::Wall);
                }
            }
            WallSide::RightGas => {
                if let Some(f) = self.fronts.first().filter(|f| f.speed < 0.0) {
                    offer((self.wall - f.z) / f.speed, LineEvent::Wall);
                }
            }
        }
        best
    }

    fn advance(&mut self, dt: f64) {
        for f in &mut self.fronts {
            f.z += f.speed * dt;
        }
        // a front may not cross its wall through rounding
        match self.side {
            WallSide::LeftGas => self.fronts.iter_mut().for_each(|f| f.z = f.z.min(self.wall)),
            WallSide::RightGas => self.fronts.iter_mut().for_each(|f| f.z = f.z.max(self.wall)),
        }
    }

    fn field(&self) -> Field {
        Field::new(self.fronts.iter().map(|f| f.z).collect(), self.cells.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LineEvent {
    Collision(usize),
    Wall,
}

/// Solution of the rigid-slab model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTrajectory {
    pub scenario: Scenario,
    pub dt_piston: f64,
    /// `(t, v_l)` at every update; `v_l` is linear in between.
    pub v_l: Vec<(f64, f64)>,
    /// Gas state against the slab on either side.
    pub wall_left: TimeSeries,
    pub wall_right: TimeSeries,
    /// Gas fields at `t_end`, left and right of the slab.
    pub gas_left: Field,
    pub gas_right: Field,
    pub events: u64,
}

impl LimitTrajectory {
    pub fn v_l_at(&self, t: f64) -> f64 {
        piecewise_linear(&self.v_l, t)
    }

    /// Left face of the slab in Eulerian coordinates, `a_o + ∫₀ᵗ v_l`.
    pub fn left_face(&self, a_o: f64) -> Vec<(f64, f64)> {
        let mut out = vec![(self.v_l[0].0, a_o)];
        for w in self.v_l.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            let x = out.last().expect("seeded").1 + 0.5 * (v0 + v1) * (t1 - t0);
            out.push((t1, x));
        }
        out
    }
}

/// Linear interpolation through `nodes`, constant beyond the ends.
pub fn piecewise_linear(nodes: &[(f64, f64)], t: f64) -> f64 {
    let j = nodes.partition_point(|n| n.0 <= t);
    if j == 0 {
        return nodes[0].1;
    }
    if j == nodes.len() {
        return nodes[j - 1].1;
    }
    let ((t0, a), (t1, b)) = (nodes[j - 1], nodes[j]);
    if t1 == t0 {
        b
    } else {
        a + (b - a) * (t - t0) / (t1 - t0)
    }
}

/// Rigid-slab model for the gas datum of `s`. The slab starts with the
/// velocity the datum has on `[0, m]`, which must be constant there.
pub fn run_limit_model(s: &Scenario, dt_piston: f64) -> Result<LimitTrajectory> {
    if !(dt_piston > 0.0 && dt_piston.is_finite()) {
        return Err(Error::InadmissibleScenario(format!("dt_piston = {dt_piston} must be positive")));
    }
    s.validate()?;
    let init = s.initial.field();
    let v_o = init.value_at(0.0).v;
    if init.breaks.iter().any(|&z| z > 0.0 && z < s.m && init.value_at(z).v != v_o) {
        return Err(Error::InadmissibleScenario(
            "the initial velocity must be constant on the liquid".into(),
        ));
    }
    let gas = Medium::Gas(s.gas);
    let line = |side: WallSide| -> Result<HalfLine> {
        let (wall, first) = match side {
            WallSide::LeftGas => (0.0, s.initial.left),
            WallSide::RightGas => (s.m, init.value_at(s.m)),
        };
        let mut h = HalfLine {
            side,
            wall,
            gas,
            eps: s.eps,
            fronts: Vec::new(),
            cells: vec![first],
        };
        let inside = |z: f64| match side {
            WallSide::LeftGas => z < 0.0,
            WallSide::RightGas => z > s.m,
        };
        for j in s.initial.jumps.iter().filter(|j| inside(j.z)) {
            let n = h.fronts.len();
            h.cells.push(j.state());
            h.resolve(n, n + 1, 0, j.z, [true; 2])?;
        }
        Ok(h)
    };
    let mut lines = [line(WallSide::LeftGas)?, line(WallSide::RightGas)?];
    let mut v_l = v_o;
    for h in &mut lines {
        h.wall_emit(v_l)?;
    }
    let mut traj = LimitTrajectory {
        scenario: s.clone(),
        dt_piston,
        v_l: vec![(0.0, v_l)],
        wall_left: TimeSeries::starting(0.0, lines[0].adjacent()),
        wall_right: TimeSeries::starting(0.0, lines[1].adjacent()),
        gas_left: Field::constant(s.initial.left),
        gas_right: Field::constant(s.initial.left),
        events: 0,
    };
    let mut t = 0.0;
    let mut k = 1u64;
    let mut t_piston = dt_piston.min(s.t_end);
    loop {
        let mut best = (t_piston - t, None);
        for (side, h) in lines.iter().enumerate() {
            if let Some((dt, e)) = h.next_event() {
                if dt < best.0 {
                    best = (dt, Some((side, e)));
                }
            }
        }
        let dt = best.0.max(0.0);
        for h in &mut lines {
            h.advance(dt);
        }
        t += dt;
        match best.1 {
            Some((side, e)) => {
                traj.events += 1;
                if traj.events > EVENT_CAP {
                    let fronts = lines[0].fronts.len() + lines[1].fronts.len();
                    return Err(Error::EventCapExceeded { cap: EVENT_CAP, t, fronts });
                }
                match e {
                    LineEvent::Collision(i) => lines[side].collide(i)?,
                    LineEvent::Wall => lines[side].absorb(v_l)?,
                }
            }
            None => {
                t = t_piston;
                let h = t - traj.v_l.last().expect("seeded").0;
                v_l += h / s.m * (lines[0].adjacent().p - lines[1].adjacent().p);
                traj.v_l.push((t, v_l));
                for h in &mut lines {
                    h.wall_emit(v_l)?;
                }
            }
        }
        traj.wall_left.push(t, lines[0].adjacent());
        traj.wall_right.push(t, lines[1].adjacent());
        if best.1.is_none() {
            if t >= s.t_end {
                break;
            }
            k += 1;
            t_piston = (k as f64 * dt_piston).min(s.t_end);
        }
    }
    traj.gas_left = lines[0].field();
    traj.gas_right = lines[1].field();
    Ok(traj)
}

/// Slab faces `a(t)`, `b(t)` in Eulerian coordinates, as nodes of a
/// piecewise-linear path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerianPaths {
    pub a: Vec<(f64, f64)>,
    pub b: Vec<(f64, f64)>,
}

fn integrate_velocity(ts: &TimeSeries, x0: f64, t_end: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(ts.times[0], x0)];
    for j in 1..=ts.times.len() {
        let t = if j < ts.times.len() { ts.times[j].min(t_end) } else { t_end };
        let (t0, x) = *out.last().expect("seeded");
        if t > t0 {
            out.push((t, x + ts.values[j - 1].v * (t - t0)));
        }
    }
    out
}

/// Interface paths of a compressible run, starting from `a(0) = a_o` and
/// `b(0) = a_o + ∫_L τ`.
pub fn eulerian_interfaces(traj: &Trajectory, a_o: f64) -> Result<EulerianPaths> {
    let s = &traj.scenario;
    let liq = s.medium(Region::Liquid)?;
    let init = s.initial.field();
    let mut b_o = a_o;
    let mut lo = 0.0;
    for z in init.breaks.iter().copied().filter(|&z| z > 0.0 && z < s.m).chain([s.m]) {
        b_o += liq.tau_of_p(init.value_at(lo).p)? * (z - lo);
        lo = z;
    }
    Ok(EulerianPaths {
        a: integrate_velocity(traj.trace(0.0)?, a_o, s.t_end),
        b: integrate_velocity(traj.trace(s.m)?, b_o, s.t_end),
    })
}

/// For each window, `∫_L |⟨p(·,z)⟩ − ⟨(1−z/m) p(·,0) + (z/m) p(·,m)⟩| dz` by
/// the midpoint rule on the probe points `zs`, `⟨·⟩` being the time average
/// over the window.
pub fn weakstar_pressure_error(traj: &Trajectory, windows: &[(f64, f64)], zs: &[f64]) -> Result<Vec<f64>> {
    let s = &traj.scenario;
    let (left, right) = (traj.trace(0.0)?, traj.trace(s.m)?);
    let traces = zs.iter().map(|&z| traj.trace(z)).collect::<Result<Vec<_>>>()?;
    let dz = s.m / zs.len() as f64;
    windows
        .iter()
        .map(|&(ta, tb)| {
            if !(0.0 <= ta && ta < tb && tb <= s.t_end) {
                return Err(Error::OutOfRange { t: if ta < 0.0 { ta } else { tb }, t_end: s.t_end });
            }
            let avg = |ts: &TimeSeries| ts.integral(|u| u.p, ta, tb) / (tb - ta);
            let (pl, pr) = (avg(left), avg(right));
            Ok(zs
                .iter()
                .zip(&traces)
                .map(|(&z, ts)| (avg(ts) - ((1.0 - z / s.m) * pl + z / s.m * pr)).abs() * dz)
                .sum())
        })
        .collect()
}

/// Largest `|v(t) − v_l(t)|` for a probe series against the piston velocity.
fn piston_distance(ts: &TimeSeries, lim: &LimitTrajectory, t_end: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, &t) in ts.times.iter().enumerate() {
        let vl = lim.v_l_at(t);
        worst = worst.max((ts.values[j].v - vl).abs());
        if j > 0 {
            worst = worst.max((ts.values[j - 1].v - vl).abs());
        }
    }
    for &(t, vl) in lim.v_l.iter().filter(|n| n.0 <= t_end) {
        worst = worst.max((ts.value_at(t).v - vl).abs());
    }
    worst
}

/// Largest distance between two piecewise-linear paths, checked at the
/// nodes of both.
fn path_distance(x: &[(f64, f64)], y: &[(f64, f64)]) -> f64 {
    x.iter()
        .map(|&(t, a)| (a - piecewise_linear(y, t)).abs())
        .chain(y.iter().map(|&(t, b)| (b - piecewise_linear(x, t)).abs()))
        .fold(0.0, f64::max)
}

/// Measurements of one compressible run of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub kappa: f64,
    pub events: u64,
    pub initial_wtv: f64,
    /// `sup_t TV(·; L)` away from the strips.
    pub tv_v: f64,
    pub tv_tau: f64,
    pub tv_p: f64,
    /// `sup |τ − τ̄|` over the liquid cells.
    pub tau_deviation: f64,
    /// `max_t |v(t, m/2) − v_l(t)|`.
    pub piston_error: f64,
    pub weakstar: Vec<f64>,
    /// Sup distance of the interface paths to the slab faces of the limit.
    pub path_a_error: f64,
    pub path_b_error: f64,
    /// Largest `∫_L |v(t₂) − v(t₁)| / |t₂ − t₁|` between snapshots.
    pub lipschitz_v: f64,
    /// Same for `p`, multiplied by `κ`.
    pub lipschitz_p: f64,
    /// Largest `∫ |v(t, z₂) − v(t, z₁)| dt / |z₂ − z₁|` over gas probes.
    pub lipschitz_gas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepVerdicts {
    /// Successive ratios of `tv_v/κ` within `[1/3, 3]`.
    pub tv_v_scaling: bool,
    /// Same for `tv_tau/κ²`.
    pub tv_tau_scaling: bool,
    /// Every `tv_p` below [`SweepReport::tv_p_cap`].
    pub tv_p_bounded: bool,
    /// Strictly decreasing, last below half of the first.
    pub piston: bool,
    /// Non-increasing along κ, one entry per window.
    pub weakstar: Vec<bool>,
    pub tau_deviation: bool,
    pub paths: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub scenario: Scenario,
    pub dt_piston: f64,
    pub windows: Vec<(f64, f64)>,
    pub probes: Vec<f64>,
    pub tv_p_cap: f64,
    pub limit: LimitTrajectory,
    pub records: Vec<SweepRecord>,
    /// Absent for a single κ.
    pub verdicts: Option<SweepVerdicts>,
}

/// `sup_t TV(p; L)` may not exceed this multiple of the initial `WTV_κ`.
pub const TV_P_CAP_FACTOR: f64 = 1.0;
/// Number of weak-star windows and of probe points in the liquid.
pub const WINDOWS: usize = 4;
pub const LIQUID_PROBES: usize = 16;
const SNAPSHOTS: usize = 20;

#[derive(Default)]
struct Sup {
    tv_v: f64,
    tv_tau: f64,
    tv_p: f64,
    tau_dev: f64,
}

fn observe(tr: &Tracker, liq: &Medium, tau_bar: f64, sup: &mut Sup) -> Result<()> {
    let m = tr.scenario().m;
    let strip = tr.geometry().strip;
    let (f, c) = (tr.fronts(), tr.cells());
    let lo = f.partition_point(|x| x.z <= strip);
    let hi = f.partition_point(|x| x.z < m - strip);
    let (mut tv_v, mut tv_tau, mut tv_p) = (0.0, 0.0, 0.0);
    for j in lo..hi {
        let (a, b) = (c[j], c[j + 1]);
        tv_p += (b.p - a.p).abs();
        tv_v += (b.v - a.v).abs();
        tv_tau += (liq.tau_of_p(b.p)? - liq.tau_of_p(a.p)?).abs();
    }
    // cells meeting ]0, m[
    let first = f.partition_point(|x| x.z <= 0.0);
    let last = f.partition_point(|x| x.z < m);
    let mut dev: f64 = 0.0;
    for u in &c[first..=last] {
        dev = dev.max((liq.tau_of_p(u.p)? - tau_bar).abs());
    }
    sup.tv_v = sup.tv_v.max(tv_v);
    sup.tv_tau = sup.tv_tau.max(tv_tau);
    sup.tv_p = sup.tv_p.max(tv_p);
    sup.tau_dev = sup.tau_dev.max(dev);
    Ok(())
}

fn measure(s: &Scenario, lim: &LimitTrajectory, windows: &[(f64, f64)], zs: &[f64]) -> Result<SweepRecord> {
    let m = s.m;
    let gas_probes = [-1.0, -0.5, m + 0.5, m + 1.0];
    let mut probes: Vec<f64> = zs.to_vec();
    probes.push(0.5 * m);
    probes.extend(gas_probes);
    let times: Vec<f64> = (0..=SNAPSHOTS).map(|k| s.t_end * k as f64 / SNAPSHOTS as f64).collect();
    let opts = RunOptions {
        snapshots: times.clone(),
        probes,
        ledger: false,
        ..RunOptions::default()
    };
    let liq = s.medium(Region::Liquid)?;
    let tau_bar = s.liquid()?.tau_bar;
    let mut sup = Sup::default();
    let mut failure = None;
    let traj = Tracker::new(s, &opts)?.run_with(|tr| {
        if failure.is_none() {
            failure = observe(tr, &liq, tau_bar, &mut sup).err();
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let piston_error = piston_distance(traj.trace(0.5 * m)?, lim, s.t_end);
    let weakstar = weakstar_pressure_error(&traj, windows, zs)?;
    let paths = eulerian_interfaces(&traj, 0.0)?;
    let a_lim = lim.left_face(0.0);
    let width = paths.b[0].1 - paths.a[0].1;
    let b_lim: Vec<(f64, f64)> = a_lim.iter().map(|&(t, x)| (t, x + width)).collect();
    let (mut lip_v, mut lip_p) = (0.0f64, 0.0f64);
    for w in times.windows(2) {
        let (f1, f2) = (traj.sample(w[0])?, traj.sample(w[1])?);
        let dt = w[1] - w[0];
        lip_v = lip_v.max(f1.l1_distance(f2, |u| u.v, 0.0, m) / dt);
        lip_p = lip_p.max(s.kappa * f1.l1_distance(f2, |u| u.p, 0.0, m) / dt);
    }
    let mut lip_gas: f64 = 0.0;
    for pair in [(gas_probes[0], gas_probes[1]), (gas_probes[2], gas_probes[3])] {
        let (t1, t2) = (traj.trace(pair.0)?, traj.trace(pair.1)?);
        let mut total = 0.0;
        let mut knots: Vec<f64> = t1.times.iter().chain(&t2.times).copied().chain([s.t_end]).collect();
        knots.sort_by(f64::total_cmp);
        for k in knots.windows(2).filter(|k| k[1] > k[0] && k[1] <= s.t_end) {
            total += (t1.value_at(k[0]).v - t2.value_at(k[0]).v).abs() * (k[1] - k[0]);
        }
        lip_gas = lip_gas.max(total / (pair.1 - pair.0));
    }
    Ok(SweepRecord {
        kappa: s.kappa,
        events: traj.events,
        initial_wtv: traj.initial_wtv,
        tv_v: sup.tv_v,
        tv_tau: sup.tv_tau,
        tv_p: sup.tv_p,
        tau_deviation: sup.tau_dev,
        piston_error,
        weakstar,
        path_a_error: path_distance(&paths.a, &a_lim),
        path_b_error: path_distance(&paths.b, &b_lim),
        lipschitz_v: lip_v,
        lipschitz_p: lip_p,
        lipschitz_gas: lip_gas,
    })
}

fn strictly_decreasing(xs: impl Iterator<Item = f64>) -> bool {
    let xs: Vec<f64> = xs.collect();
    xs.windows(2).all(|w| w[1] < w[0])
}

fn ratios_within(xs: impl Iterator<Item = f64>, lo: f64, hi: f64) -> bool {
    let xs: Vec<f64> = xs.collect();
    xs.windows(2).all(|w| {
        let r = w[1] / w[0];
        (lo..=hi).contains(&r)
    })
}

fn verdicts(records: &[SweepRecord], cap: f64) -> SweepVerdicts {
    let first = &records[0];
    let last = &records[records.len() - 1];
    SweepVerdicts {
        tv_v_scaling: ratios_within(records.iter().map(|r| r.tv_v / r.kappa), 1.0 / 3.0, 3.0),
        tv_tau_scaling: ratios_within(records.iter().map(|r| r.tv_tau / (r.kappa * r.kappa)), 1.0 / 3.0, 3.0),
        tv_p_bounded: records.iter().all(|r| r.tv_p <= cap),
        piston: strictly_decreasing(records.iter().map(|r| r.piston_error))
            && last.piston_error < 0.5 * first.piston_error,
        weakstar: (0..first.weakstar.len())
            .map(|w| records.windows(2).all(|p| p[1].weakstar[w] <= p[0].weakstar[w]))
            .collect(),
        tau_deviation: strictly_decreasing(records.iter().map(|r| r.tau_deviation)),
        paths: strictly_decreasing(records.iter().map(|r| r.path_a_error))
            && strictly_decreasing(records.iter().map(|r| r.path_b_error)),
    }
}

/// Runs `s` at every κ of the strictly decreasing list `kappas` and
/// compares each run with the rigid-slab model.
pub fn kappa_sweep(s: &Scenario, kappas: &[f64], dt_piston: f64) -> Result<SweepReport> {
    if kappas.is_empty() || kappas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InadmissibleScenario(format!(
            "κ list {kappas:?} must be non-empty and strictly decreasing"
        )));
    }
    let lim = run_limit_model(s, dt_piston)?;
    let windows: Vec<(f64, f64)> = (0..WINDOWS)
        .map(|k| (s.t_end * k as f64 / WINDOWS as f64, s.t_end * (k + 1) as f64 / WINDOWS as f64))
        .collect();
    let zs: Vec<f64> = (0..LIQUID_PROBES)
        .map(|i| s.m * (i as f64 + 0.5) / LIQUID_PROBES as f64)
        .collect();
    let records = kappas
        .par_iter()
        .map(|&k| measure(&s.with_kappa(k), &lim, &windows, &zs))
        .collect::<Result<Vec<_>>>()?;
    let cap = TV_P_CAP_FACTOR * records[0].initial_wtv;
    let verdicts = (records.len() > 1).then(|| verdicts(&records, cap));
    Ok(SweepReport {
        scenario: s.clone(),
        dt_piston,
        windows,
        probes: zs,
        tv_p_cap: cap,
        limit: lim,
        records,
        verdicts,
    })
}
