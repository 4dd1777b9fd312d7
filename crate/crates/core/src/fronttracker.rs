//! Event-driven wave-front tracking on the whole line with the liquid slab
//! on `]0, m[`.
//!
//! Fronts are kept ordered in `z`; front `j` separates `cells[j]` from
//! `cells[j + 1]`. Inside the strips `|z| < ε²` and `|z − m| < ε²` every
//! 1-wave travels at speed −1 and every 2-wave at +1, so that waves hit
//! an interface one at a time and no non-physical fronts are needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::{LiquidEos, Medium};
use crate::error::{Error, Result};
use crate::field::{Field, TimeSeries};
use crate::glimm::{self, GlimmReport, GlimmWeights, Wave};
use crate::laxwaves::{char_speed, classify, shock_speed, State, WaveFamily, WaveKind};
use crate::riemann::{discretize_rarefaction, solve_between, solve_interface, InterfaceOrientation, RiemannSolution, DEFAULT_TOL};
use crate::scenario::{Geometry, Region, Scenario};

/// Waves smaller than this are removed and their cells merged.
pub const ZERO_WAVE: f64 = 1e-13;
/// Collisions this close to an interface are treated as interface events.
pub const INTERFACE_SNAP: f64 = 1e-12;
pub const DEFAULT_EVENT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Seed of the speed perturbation.
    pub seed: u64,
    /// Amplitude of the random speed perturbation outside the strips.
    pub jitter: f64,
    pub event_cap: u64,
    /// Times at which the whole field is recorded.
    pub snapshots: Vec<f64>,
    /// Points whose time series are recorded, in addition to `0` and `m`.
    pub probes: Vec<f64>,
    /// Keep one [`EventRecord`] per event.
    pub ledger: bool,
    /// Evaluate `Υ` before and after every event.
    pub glimm: Option<GlimmWeights>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            jitter: 1e-10,
            event_cap: DEFAULT_EVENT_CAP,
            snapshots: Vec::new(),
            probes: Vec::new(),
            ledger: true,
            glimm: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Front {
    pub id: u64,
    pub family: WaveFamily,
    /// `p_right − p_left`.
    pub sigma: f64,
    pub z: f64,
    pub speed: f64,
    pub in_strip: bool,
    pub region: Region,
    pub birth: f64,
}

impl Front {
    pub fn kind(&self) -> WaveKind {
        classify(self.family, self.sigma).unwrap_or(WaveKind::Shock)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Gas,
    Liquid,
    /// The interface at `z = 0`.
    InterfaceLeft,
    /// The interface at `z = m`.
    InterfaceRight,
    StripEdge,
}

impl Location {
    pub fn as_str(self) -> &'static str {
        match self {
            Location::Gas => "gas",
            Location::Liquid => "liquid",
            Location::InterfaceLeft => "interface_left",
            Location::InterfaceRight => "interface_right",
            Location::StripEdge => "strip_edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventClass {
    Collision,
    Interface,
    StripEntry,
    StripExit,
}

impl EventClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EventClass::Collision => "collision",
            EventClass::Interface => "interface",
            EventClass::StripEntry => "strip_entry",
            EventClass::StripExit => "strip_exit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub seq: u64,
    pub t: f64,
    pub z: f64,
    pub location: Location,
    pub class: EventClass,
    /// Incoming waves, left to right.
    pub incoming: Vec<(WaveFamily, f64)>,
    /// Outgoing waves before fan splitting (Riemann sizes, zeros kept), or
    /// the resulting fronts for strip events.
    pub outgoing: Vec<(WaveFamily, f64)>,
    pub upsilon_before: Option<f64>,
    pub d_upsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    Collision(usize),
    Mark(usize, f64),
    End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub scenario: Scenario,
    pub options: RunOptions,
    pub initial_wtv: f64,
    pub events: u64,
    pub fronts_born: u64,
    pub max_fronts: usize,
    /// Largest rarefaction travelling outside the strips.
    pub max_rarefaction: f64,
    pub ledger: Vec<EventRecord>,
    pub snapshots: Vec<(f64, Field)>,
    pub probes: Vec<(f64, TimeSeries)>,
    /// `Υ` after time zero and after every event, when tracked.
    pub glimm: Vec<(f64, GlimmReport)>,
}

impl Trajectory {
    pub fn sample(&self, t: f64) -> Result<&Field> {
        if !(t >= 0.0 && t <= self.scenario.t_end) {
            return Err(Error::OutOfRange {
                t,
                t_end: self.scenario.t_end,
            });
        }
        self.snapshots
            .iter()
            .find(|(s, _)| *s == t)
            .map(|(_, f)| f)
            .ok_or(Error::MissingSnapshot(t))
    }

    pub fn trace(&self, z: f64) -> Result<&TimeSeries> {
        self.probes
            .iter()
            .find(|(x, _)| *x == z)
            .map(|(_, ts)| ts)
            .ok_or(Error::MissingTrace(z))
    }
}

pub struct Tracker {
    scen: Scenario,
    opts: RunOptions,
    geo: Geometry,
    gas: Medium,
    liq: Medium,
    liq_eos: LiquidEos,
    t: f64,
    fronts: Vec<Front>,
    cells: Vec<State>,
    rng: ChaCha8Rng,
    next_id: u64,
    events: u64,
    max_fronts: usize,
    max_rarefaction: f64,
    initial_wtv: f64,
    ledger: Vec<EventRecord>,
    snap_times: Vec<f64>,
    snap_next: usize,
    snapshots: Vec<(f64, Field)>,
    probes: Vec<(f64, TimeSeries)>,
    glimm: Vec<(f64, GlimmReport)>,
}

/// A wave about to be inserted, given by its family and right state.
struct Piece {
    family: WaveFamily,
    right: State,
}

impl Tracker {
    /// Validates the scenario and resolves every jump of the initial datum.
    pub fn new(scen: &Scenario, opts: &RunOptions) -> Result<Self> {
        let initial_wtv = scen.validate()?;
        let liq_eos = scen.liquid()?;
        let mut snap_times: Vec<f64> = opts.snapshots.iter().copied().filter(|&t| t >= 0.0 && t <= scen.t_end).collect();
        snap_times.sort_by(f64::total_cmp);
        snap_times.dedup();
        let mut probe_points = vec![0.0, scen.m];
        for &z in &opts.probes {
            if !probe_points.contains(&z) {
                probe_points.push(z);
            }
        }
        let mut tr = Tracker {
            scen: scen.clone(),
            opts: opts.clone(),
            geo: scen.geometry(),
            gas: Medium::Gas(scen.gas),
            liq: Medium::Liquid(liq_eos),
            liq_eos,
            t: 0.0,
            fronts: Vec::new(),
            cells: vec![scen.initial.left],
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            next_id: 0,
            events: 0,
            max_fronts: 0,
            max_rarefaction: 0.0,
            initial_wtv,
            ledger: Vec::new(),
            snap_times,
            snap_next: 0,
            snapshots: Vec::new(),
            probes: Vec::new(),
            glimm: Vec::new(),
        };
        for j in &scen.initial.jumps {
            let left = *tr.cells.last().expect("at least one cell");
            let region = tr.geo.region(WaveFamily::One, j.z);
            let m = tr.medium(region);
            let sol = solve_between(&m, &m, left, j.state(), DEFAULT_TOL)?;
            let pieces = tr.pieces(&sol, &m, &m, true, true)?;
            let n = tr.fronts.len();
            tr.splice(n, n, j.z, pieces, j.state())?;
        }
        tr.max_fronts = tr.fronts.len();
        tr.probes = probe_points
            .into_iter()
            .map(|z| {
                let s = tr.cells[tr.probe_index(z)];
                (z, TimeSeries::starting(0.0, s))
            })
            .collect();
        tr.record_glimm();
        Ok(tr)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn fronts(&self) -> &[Front] {
        &self.fronts
    }

    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geo
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scen
    }

    pub fn medium(&self, r: Region) -> Medium {
        match r {
            Region::Liquid => self.liq,
            _ => self.gas,
        }
    }

    /// The current piecewise-constant solution.
    pub fn field(&self) -> Field {
        self.field_at(self.t)
    }

    fn field_at(&self, t: f64) -> Field {
        let dt = t - self.t;
        let mut last = f64::NEG_INFINITY;
        let breaks = self
            .fronts
            .iter()
            .map(|f| {
                // keep rounding from unsorting nearly coincident fronts
                last = last.max(f.z + f.speed * dt);
                last
            })
            .collect();
        Field::new(breaks, self.cells.clone())
    }

    pub fn waves(&self) -> Vec<Wave> {
        self.fronts
            .iter()
            .map(|f| Wave {
                region: f.region,
                family: f.family,
                sigma: f.sigma,
            })
            .collect()
    }

    /// Weighted total variation with liquid velocity jumps scaled by `1/κ`.
    pub fn wtv(&self) -> f64 {
        let k = self.scen.kappa;
        self.fronts
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let (a, b) = (self.cells[j], self.cells[j + 1]);
                let dv = (b.v - a.v).abs();
                (b.p - a.p).abs() + if f.region == Region::Liquid { dv / k } else { dv }
            })
            .sum()
    }

    pub fn glimm_report(&self, w: &GlimmWeights) -> GlimmReport {
        glimm::upsilon(&self.waves(), w, self.scen.kappa, self.wtv())
    }

    fn record_glimm(&mut self) {
        if let Some(w) = self.opts.glimm {
            let r = self.glimm_report(&w);
            self.glimm.push((self.t, r));
        }
    }

    /// Earliest upcoming collision, mark crossing, or the end of the run.
    pub fn next_event(&self) -> Event {
        let mut best = (self.scen.t_end - self.t, EventKind::End);
        for (i, f) in self.fronts.iter().enumerate() {
            if self.pending_mark(f) {
                best = (0.0, EventKind::Mark(i, f.z));
                continue;
            }
            if let Some(b) = self.geo.next_mark(f.z, f.speed) {
                let dt = (b - f.z) / f.speed;
                if dt < best.0 {
                    best = (dt, EventKind::Mark(i, b));
                }
            }
        }
        for (i, w) in self.fronts.windows(2).enumerate() {
            if w[0].speed > w[1].speed {
                let dt = ((w[1].z - w[0].z) / (w[0].speed - w[1].speed)).max(0.0);
                if dt <= best.0 {
                    best = (dt, EventKind::Collision(i));
                }
            }
        }
        Event {
            t: self.t + best.0.max(0.0),
            kind: best.1,
        }
    }

    /// Moves to `target` without resolving anything beyond it.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let target = target.min(self.scen.t_end);
        loop {
            let ev = self.next_event();
            if ev.t > target || ev.kind == EventKind::End {
                self.advance(target - self.t);
                return Ok(());
            }
            self.step()?;
        }
    }

    /// Resolves the next event; `false` once `t_end` is reached.
    pub fn step(&mut self) -> Result<bool> {
        let ev = self.next_event();
        if ev.kind == EventKind::End {
            self.advance(ev.t - self.t);
            self.flush_snapshots();
            return Ok(false);
        }
        self.events += 1;
        if self.events > self.opts.event_cap {
            return Err(Error::EventCapExceeded {
                cap: self.opts.event_cap,
                t: self.t,
                fronts: self.fronts.len(),
            });
        }
        self.advance(ev.t - self.t);
        let before = self.opts.glimm.map(|w| self.glimm_report(&w).upsilon);
        let mut rec = match ev.kind {
            EventKind::Collision(i) => self.collide(i)?,
            EventKind::Mark(i, b) => self.cross_mark(i, b)?,
            EventKind::End => unreachable!(),
        };
        self.max_fronts = self.max_fronts.max(self.fronts.len());
        for k in 0..self.probes.len() {
            let z = self.probes[k].0;
            let s = self.cells[self.probe_index(z)];
            self.probes[k].1.push(self.t, s);
        }
        if let Some(u) = before {
            self.record_glimm();
            let after = self.glimm.last().expect("just recorded").1.upsilon;
            rec.upsilon_before = Some(u);
            rec.d_upsilon = Some(after - u);
        }
        if self.opts.ledger {
            self.ledger.push(rec);
        }
        Ok(true)
    }

    pub fn run(self) -> Result<Trajectory> {
        self.run_with(|_| {})
    }

    /// Runs to `t_end`, calling `observe` at time zero and after every event.
    pub fn run_with<F: FnMut(&Tracker)>(mut self, mut observe: F) -> Result<Trajectory> {
        observe(&self);
        while self.step()? {
            observe(&self);
        }
        observe(&self);
        Ok(self.finish())
    }

    fn finish(self) -> Trajectory {
        Trajectory {
            scenario: self.scen,
            options: self.opts,
            initial_wtv: self.initial_wtv,
            events: self.events,
            fronts_born: self.next_id,
            max_fronts: self.max_fronts,
            max_rarefaction: self.max_rarefaction,
            ledger: self.ledger,
            snapshots: self.snapshots,
            probes: self.probes,
            glimm: self.glimm,
        }
    }

    fn flush_snapshots(&mut self) {
        while self.snap_next < self.snap_times.len() && self.snap_times[self.snap_next] <= self.t {
            let ts = self.snap_times[self.snap_next];
            self.snapshots.push((ts, self.field_at(ts)));
            self.snap_next += 1;
        }
    }

    /// A front sitting on a mark whose crossing has not been resolved yet.
    fn pending_mark(&self, f: &Front) -> bool {
        self.geo.marks.contains(&f.z)
            && (f.region != self.geo.region(f.family, f.z) || f.in_strip != self.geo.in_strip(f.family, f.z))
    }

    /// Index of the cell seen at `z` just after the current time.
    fn probe_index(&self, z: f64) -> usize {
        let mut i = self.fronts.partition_point(|f| f.z < z);
        while i < self.fronts.len() && self.fronts[i].z == z && self.fronts[i].speed < 0.0 {
            i += 1;
        }
        i
    }

    /// Moves every front by `dt`, recording snapshots and probe crossings.
    fn advance(&mut self, dt: f64) {
        if dt <= 0.0 {
            return;
        }
        let t_new = self.t + dt;
        while self.snap_next < self.snap_times.len() && self.snap_times[self.snap_next] < t_new {
            let ts = self.snap_times[self.snap_next];
            self.snapshots.push((ts, self.field_at(ts)));
            self.snap_next += 1;
        }
        let before: Vec<usize> = self.probes.iter().map(|(z, _)| self.probe_index(*z)).collect();
        let old: Vec<f64> = self.fronts.iter().map(|f| f.z).collect();
        for f in &mut self.fronts {
            let z = f.z + f.speed * dt;
            // rounding must not carry a front past a mark unprocessed
            f.z = match self.geo.next_mark(f.z, f.speed) {
                Some(b) if f.speed > 0.0 => z.min(b),
                Some(b) => z.max(b),
                None => z,
            };
        }
        for (k, &b) in before.iter().enumerate() {
            let z = self.probes[k].0;
            let a = self.probe_index(z);
            let (t0, cells, fronts) = (self.t, &self.cells, &self.fronts);
            let series = &mut self.probes[k].1;
            let mut last = t0;
            let mut hit = |j: usize, s: State| {
                let tc = (t0 + (z - old[j]) / fronts[j].speed).clamp(last, t_new);
                last = tc;
                series.push(tc, s);
            };
            if a > b {
                for j in b..a {
                    hit(j, cells[j + 1]);
                }
            } else {
                for j in (a..b).rev() {
                    hit(j, cells[j]);
                }
            }
        }
        self.t = t_new;
    }

    fn jitter(&mut self) -> f64 {
        if self.opts.jitter > 0.0 {
            self.rng.gen_range(-self.opts.jitter..self.opts.jitter)
        } else {
            0.0
        }
    }

    fn physical_speed(&mut self, region: Region, fam: WaveFamily, left: State, right: State) -> Result<f64> {
        let m = self.medium(region);
        let s = match classify(fam, right.p - left.p)? {
            WaveKind::Shock => shock_speed(&m, fam, left.p, right.p)?,
            WaveKind::Rarefaction => char_speed(&m, fam, left.p)?,
        };
        Ok(s + self.jitter())
    }

    /// Outgoing pieces of a Riemann solution, rarefactions split into
    /// wavelets when `split_k` is set for family `k`.
    fn pieces(
        &self,
        sol: &RiemannSolution,
        m1: &Medium,
        m2: &Medium,
        split1: bool,
        split2: bool,
    ) -> Result<Vec<Piece>> {
        let eps = self.scen.eps;
        let mut out = Vec::new();
        for (fam, m, from, to, sigma, split) in [
            (WaveFamily::One, m1, sol.left, sol.middle, sol.sigma1, split1),
            (WaveFamily::Two, m2, sol.middle, sol.right, sol.sigma2, split2),
        ] {
            let fan = split
                && sigma.abs() > eps * (1.0 + 1e-9)
                && classify(fam, sigma)? == WaveKind::Rarefaction;
            if fan {
                let w = discretize_rarefaction(m, fam, from, sigma, eps)?;
                let n = w.len();
                for (k, x) in w.into_iter().enumerate() {
                    let right = if k + 1 == n { to } else { x.right };
                    out.push(Piece { family: fam, right });
                }
            } else {
                out.push(Piece { family: fam, right: to });
            }
        }
        Ok(out)
    }

    /// Replaces fronts `a..b` by `pieces` located at `z`. Zero waves are
    /// dropped; the outer states `cells[a]` and `outer_right` are kept.
    fn splice(&mut self, a: usize, b: usize, z: f64, pieces: Vec<Piece>, outer_right: State) -> Result<()> {
        let left = self.cells[a];
        let mut kept: Vec<Piece> = Vec::with_capacity(pieces.len());
        let mut cur = left;
        for p in pieces {
            if (p.right.p - cur.p).abs() < ZERO_WAVE {
                continue;
            }
            cur = p.right;
            kept.push(p);
        }
        // the last wave must end exactly on the outer state
        while let Some(n) = kept.len().checked_sub(1) {
            kept[n].right = outer_right;
            let from = if n == 0 { left } else { kept[n - 1].right };
            if (outer_right.p - from.p).abs() >= ZERO_WAVE {
                break;
            }
            kept.pop();
        }
        let mut new_fronts = Vec::with_capacity(kept.len());
        let mut new_cells = Vec::with_capacity(kept.len());
        let mut prev = left;
        for p in &kept {
            let region = self.geo.region(p.family, z);
            let in_strip = self.geo.in_strip(p.family, z);
            let speed = if in_strip {
                p.family.direction()
            } else {
                self.physical_speed(region, p.family, prev, p.right)?
            };
            let sigma = p.right.p - prev.p;
            if !in_strip && classify(p.family, sigma)? == WaveKind::Rarefaction {
                self.max_rarefaction = self.max_rarefaction.max(sigma.abs());
            }
            new_fronts.push(Front {
                id: self.next_id,
                family: p.family,
                sigma,
                z,
                speed,
                in_strip,
                region,
                birth: self.t,
            });
            self.next_id += 1;
            new_cells.push(p.right);
            prev = p.right;
        }
        // cells[a+1..=b] are the states right of the removed fronts
        let end = if b > a { b + 1 } else { a + 1 };
        self.cells.splice(a + 1..end, new_cells);
        self.fronts.splice(a..b, new_fronts);
        // neighbours may border a merged cell
        let lo = a.saturating_sub(1);
        let hi = (a + kept.len() + 1).min(self.fronts.len());
        for j in lo..hi {
            self.fronts[j].sigma = self.cells[j + 1].p - self.cells[j].p;
        }
        debug_assert_eq!(self.cells.len(), self.fronts.len() + 1);
        Ok(())
    }

    fn collide(&mut self, i: usize) -> Result<EventRecord> {
        let (fa, fb) = (self.fronts[i], self.fronts[i + 1]);
        let z = 0.5 * (fa.z + fb.z);
        let crossing = fa.region != fb.region && fa.family == WaveFamily::Two && fb.family == WaveFamily::One;
        if crossing {
            let z0 = if z.abs() <= (z - self.scen.m).abs() { 0.0 } else { self.scen.m };
            if (z - z0).abs() > INTERFACE_SNAP {
                return Err(Error::NoConvergence(format!(
                    "fronts of different phases met at z = {z} away from an interface"
                )));
            }
            return self.interface(i, i + 2, z0);
        }
        let region = fa.region;
        let m = self.medium(region);
        let (left, right) = (self.cells[i], self.cells[i + 2]);
        let sol = solve_between(&m, &m, left, right, DEFAULT_TOL)?;
        let rare_in = |f: WaveFamily| [fa, fb].iter().any(|x| x.family == f && x.kind() == WaveKind::Rarefaction);
        let strip = self.geo.in_strip(WaveFamily::One, z) || self.geo.in_strip(WaveFamily::Two, z);
        let split1 = !strip && !rare_in(WaveFamily::One);
        let split2 = !strip && !rare_in(WaveFamily::Two);
        let pieces = self.pieces(&sol, &m, &m, split1, split2)?;
        self.splice(i, i + 2, z, pieces, right)?;
        Ok(EventRecord {
            seq: self.events,
            t: self.t,
            z,
            location: if region == Region::Liquid { Location::Liquid } else { Location::Gas },
            class: EventClass::Collision,
            incoming: vec![(fa.family, fa.sigma), (fb.family, fb.sigma)],
            outgoing: vec![(WaveFamily::One, sol.sigma1), (WaveFamily::Two, sol.sigma2)],
            upsilon_before: None,
            d_upsilon: None,
        })
    }

    /// Resolves the fronts `a..b` (one or two) hitting the interface `z0`.
    fn interface(&mut self, a: usize, b: usize, z0: f64) -> Result<EventRecord> {
        let incoming: Vec<(WaveFamily, f64)> = self.fronts[a..b].iter().map(|f| (f.family, f.sigma)).collect();
        let (left, right) = (self.cells[a], self.cells[b]);
        let (orientation, m1, m2, location) = if z0 == 0.0 {
            (InterfaceOrientation::GasLeft, self.gas, self.liq, Location::InterfaceLeft)
        } else {
            (InterfaceOrientation::LiquidLeft, self.liq, self.gas, Location::InterfaceRight)
        };
        let sol = solve_interface(orientation, &self.scen.gas, &self.liq_eos, left, right, DEFAULT_TOL)?;
        let pieces = self.pieces(&sol, &m1, &m2, false, false)?;
        self.splice(a, b, z0, pieces, right)?;
        Ok(EventRecord {
            seq: self.events,
            t: self.t,
            z: z0,
            location,
            class: EventClass::Interface,
            incoming,
            outgoing: vec![(WaveFamily::One, sol.sigma1), (WaveFamily::Two, sol.sigma2)],
            upsilon_before: None,
            d_upsilon: None,
        })
    }

    fn cross_mark(&mut self, i: usize, b: f64) -> Result<EventRecord> {
        self.fronts[i].z = b;
        let f = self.fronts[i];
        if self.geo.is_interface(b) {
            // a partner arriving from the other side at the same instant
            let (a, end) = match f.family {
                WaveFamily::Two => {
                    let partner = self.fronts.get(i + 1).filter(|g| {
                        g.family == WaveFamily::One && g.region != f.region && (g.z - b).abs() <= INTERFACE_SNAP
                    });
                    (i, if partner.is_some() { i + 2 } else { i + 1 })
                }
                WaveFamily::One => {
                    let partner = i.checked_sub(1).and_then(|k| self.fronts.get(k)).filter(|g| {
                        g.family == WaveFamily::Two && g.region != f.region && (g.z - b).abs() <= INTERFACE_SNAP
                    });
                    (if partner.is_some() { i - 1 } else { i }, i + 1)
                }
            };
            for j in a..end {
                self.fronts[j].z = b;
            }
            return self.interface(a, end, b);
        }
        let entering = self.geo.in_strip(f.family, b);
        let incoming = vec![(f.family, f.sigma)];
        if entering {
            let fr = &mut self.fronts[i];
            fr.in_strip = true;
            fr.speed = fr.family.direction();
            return Ok(self.edge_record(b, EventClass::StripEntry, incoming, vec![(f.family, f.sigma)]));
        }
        let (left, right) = (self.cells[i], self.cells[i + 1]);
        let m = self.medium(f.region);
        let outgoing;
        if f.kind() == WaveKind::Rarefaction && f.sigma.abs() > self.scen.eps * (1.0 + 1e-9) {
            let w = discretize_rarefaction(&m, f.family, left, f.sigma, self.scen.eps)?;
            let n = w.len();
            let pieces: Vec<Piece> = w
                .into_iter()
                .enumerate()
                .map(|(k, x)| Piece {
                    family: f.family,
                    right: if k + 1 == n { right } else { x.right },
                })
                .collect();
            self.splice(i, i + 1, b, pieces, right)?;
            outgoing = self.fronts[i..i + n].iter().map(|g| (g.family, g.sigma)).collect();
        } else {
            let speed = self.physical_speed(f.region, f.family, left, right)?;
            if f.kind() == WaveKind::Rarefaction {
                self.max_rarefaction = self.max_rarefaction.max(f.sigma.abs());
            }
            let fr = &mut self.fronts[i];
            fr.in_strip = false;
            fr.speed = speed;
            outgoing = vec![(f.family, f.sigma)];
        }
        Ok(self.edge_record(b, EventClass::StripExit, incoming, outgoing))
    }

    fn edge_record(
        &self,
        z: f64,
        class: EventClass,
        incoming: Vec<(WaveFamily, f64)>,
        outgoing: Vec<(WaveFamily, f64)>,
    ) -> EventRecord {
        EventRecord {
            seq: self.events,
            t: self.t,
            z,
            location: Location::StripEdge,
            class,
            incoming,
            outgoing,
            upsilon_before: None,
            d_upsilon: None,
        }
    }
}

/// Convenience wrapper: build a tracker and run it to `t_end`.
pub fn run(s: &Scenario, opts: &RunOptions) -> Result<Trajectory> {
    Tracker::new(s, opts)?.run()
}
