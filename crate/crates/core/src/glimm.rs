//! Weighted total variation, the interaction functional `Υ`, its weights,
//! and the per-event audit of its decay.

use serde::{Deserialize, Serialize};

use crate::eos::{GammaLaw, LiquidEos, Medium};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fronttracker::{EventClass, EventRecord, Location};
use crate::laxwaves::{classify, lax_velocity, State, WaveFamily, WaveKind};
use crate::riemann::{solve_between, DEFAULT_TOL};
use crate::scenario::Region;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlimmWeights {
    pub k_in: f64,
    pub k_l: f64,
    pub h_g: f64,
    pub h_l: f64,
    /// Interaction constant `C`.
    pub c_int: f64,
    /// Interface reflection constant `c`.
    pub c_refl: f64,
    pub delta_bar: f64,
}

impl GlimmWeights {
    /// Slack of each of the five weight conditions; all must be `≤ 0`.
    pub fn condition_slacks(&self) -> [f64; 6] {
        let (cc, c) = (self.c_int, self.c_refl);
        [
            cc - c * self.k_l + 2.0,
            2.0 - self.k_in + 3.0 * self.k_l + 2.0,
            cc * (1.0 + self.k_in) - 0.5 * self.h_g + 1.0,
            cc * self.k_l - 0.5 * self.h_l + 1.0,
            (cc * self.h_g + self.h_l) * self.delta_bar - 1.0,
            (2.0 * self.h_g + 3.0 * self.h_l) * self.delta_bar - 1.0,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GlimmReport {
    pub v_g_in: f64,
    pub v_g_out: f64,
    pub v_l: f64,
    pub q_g: f64,
    pub q_l: f64,
    pub upsilon: f64,
    pub wtv: f64,
}

/// A wave as seen by the functional: its phase, family and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub region: Region,
    pub family: WaveFamily,
    pub sigma: f64,
}

/// `TV(p; ℝ) + TV(v; G) + TV(v; L)/κ`, with jumps on `]0, m[` counted as liquid.
pub fn wtv(field: &Field, kappa: f64, m: f64) -> f64 {
    let mut total = 0.0;
    for (j, &z) in field.breaks.iter().enumerate() {
        let (a, b) = (field.states[j], field.states[j + 1]);
        let dv = (b.v - a.v).abs();
        total += (b.p - a.p).abs() + if z > 0.0 && z < m { dv / kappa } else { dv };
    }
    total
}

fn is_shock(w: &Wave) -> bool {
    matches!(classify(w.family, w.sigma), Ok(WaveKind::Shock))
}

/// Sum of `|σ_α σ_β|` over approaching pairs, for waves in one interval
/// listed left to right.
fn approaching_sum<'a, I: Iterator<Item = &'a Wave>>(waves: I) -> f64 {
    // running sums of |σ| over waves already passed
    let (mut one_all, mut one_shock, mut two_all, mut two_shock) = (0.0, 0.0, 0.0, 0.0);
    let mut q = 0.0;
    for w in waves {
        let s = w.sigma.abs();
        let shock = is_shock(w);
        match w.family {
            WaveFamily::One => {
                q += s * two_all;
                q += s * if shock { one_all } else { one_shock };
                one_all += s;
                if shock {
                    one_shock += s;
                }
            }
            WaveFamily::Two => {
                q += s * if shock { two_all } else { two_shock };
                two_all += s;
                if shock {
                    two_shock += s;
                }
            }
        }
    }
    q
}

/// The potentials and `Υ` for waves listed left to right.
pub fn upsilon(waves: &[Wave], w: &GlimmWeights, kappa: f64, wtv: f64) -> GlimmReport {
    let mut r = GlimmReport {
        wtv,
        ..GlimmReport::default()
    };
    for x in waves {
        let s = x.sigma.abs();
        match (x.region, x.family) {
            (Region::Liquid, _) => r.v_l += s,
            (Region::GasLeft, WaveFamily::Two) | (Region::GasRight, WaveFamily::One) => r.v_g_in += s,
            _ => r.v_g_out += s,
        }
    }
    let within = |reg: Region| approaching_sum(waves.iter().filter(move |x| x.region == reg));
    r.q_g = within(Region::GasLeft) + within(Region::GasRight);
    r.q_l = within(Region::Liquid);
    r.upsilon = w.k_in * r.v_g_in + r.v_g_out + w.k_l * r.v_l + w.h_g * r.q_g + kappa * kappa * w.h_l * r.q_l;
    r
}

fn ceil_int(x: f64) -> f64 {
    (x - 1e-12).ceil()
}

/// Smallest integer weights meeting the five conditions for the constants
/// `C` and `c`, with `δ̄` reduced to satisfy the last two.
pub fn default_weights(c_int: f64, c_refl: f64, delta_bar: f64) -> Result<GlimmWeights> {
    if !(c_refl > 0.0) {
        return Err(Error::InfeasibleConstants(format!("c = {c_refl} must be positive")));
    }
    if !(c_int >= 1.0) || !c_int.is_finite() {
        return Err(Error::InfeasibleConstants(format!("C = {c_int} must be at least 1")));
    }
    if !(delta_bar > 0.0) {
        return Err(Error::InfeasibleConstants(format!("delta_bar = {delta_bar} must be positive")));
    }
    let k_l = ceil_int((c_int + 2.0) / c_refl).max(1.0);
    let k_in = ceil_int(4.0 + 3.0 * k_l);
    let h_g = ceil_int(2.0 * (c_int * (1.0 + k_in) + 1.0));
    let h_l = ceil_int(2.0 * (c_int * k_l + 1.0));
    let delta_bar = delta_bar
        .min(1.0 / (c_int * h_g + h_l))
        .min(1.0 / (2.0 * h_g + 3.0 * h_l));
    Ok(GlimmWeights {
        k_in,
        k_l,
        h_g,
        h_l,
        c_int,
        c_refl,
        delta_bar,
    })
}

/// Samples interactions in the pressure box `[lo, hi]` for each κ and returns
/// `(C, c)`: twice the largest observed interaction ratio (at least 1), and
/// half the smallest ratio of the liquid to the gas kernel.
pub fn estimate_constants(
    gas: &GammaLaw,
    liquid_base: &GammaLaw,
    p_bar: f64,
    box_lo: f64,
    box_hi: f64,
    kappas: &[f64],
) -> Result<(f64, f64)> {
    let grid = |n: usize| -> Vec<f64> {
        if box_hi <= box_lo {
            return vec![box_lo];
        }
        (0..n).map(|i| box_lo + (box_hi - box_lo) * i as f64 / (n - 1) as f64).collect()
    };
    let mut c_refl = f64::INFINITY;
    for &kappa in kappas {
        let liq = LiquidEos::new(*liquid_base, p_bar, kappa)?;
        for &x in &grid(5) {
            for &y in &grid(5) {
                let r = liquid_base.f_kernel(liq.transform(x), liq.transform(y))? / gas.f_kernel(x, y)?;
                c_refl = c_refl.min(r);
            }
        }
    }
    let c_refl = 0.5 * c_refl;

    let d = 0.25 * (box_hi - box_lo);
    if d <= 0.0 {
        return Ok((1.0, c_refl));
    }
    let sizes: Vec<f64> = [-1.0, -0.5, -0.25, 0.25, 0.5, 1.0].iter().map(|f| f * d).collect();
    let g = Medium::Gas(*gas);
    let mut worst: f64 = 0.0;
    for &kappa in kappas {
        let l = Medium::Liquid(LiquidEos::new(*liquid_base, p_bar, kappa)?);
        for &p0 in &grid(5) {
            let left = State::new(p0, 0.0);
            for &a in &sizes {
                for &b in &sizes {
                    for (medium, scale) in [(&g, 1.0), (&l, kappa * kappa)] {
                        if let Some(r) = interior_ratio(medium, left, a, b)? {
                            worst = worst.max(r / scale);
                        }
                    }
                    if let Some(r) = interface_ratio(&g, &l, kappa, d, c_refl, left, a, b)? {
                        worst = worst.max(r);
                    }
                }
                if let Some(r) = interface_ratio(&g, &l, kappa, d, c_refl, left, a, 0.0)? {
                    worst = worst.max(r);
                }
                if let Some(r) = interface_ratio(&g, &l, kappa, d, c_refl, left, 0.0, a)? {
                    worst = worst.max(r);
                }
            }
        }
    }
    Ok(((2.0 * worst).max(1.0), c_refl))
}

fn step(m: &Medium, fam: WaveFamily, from: State, sigma: f64) -> Option<State> {
    let p = from.p + sigma;
    lax_velocity(m, fam, p, from).ok().map(|v| State::new(p, v))
}

/// Largest of the three interior interaction ratios for incoming sizes `a`, `b`.
fn interior_ratio(m: &Medium, left: State, a: f64, b: f64) -> Result<Option<f64>> {
    use WaveFamily::{One, Two};
    let mut worst: Option<f64> = None;
    let patterns = [(Two, One), (Two, Two), (One, One)];
    for (fa, fb) in patterns {
        if fa == fb && classify(fa, a)? != WaveKind::Shock && classify(fb, b)? != WaveKind::Shock {
            continue;
        }
        let Some(mid) = step(m, fa, left, a) else { continue };
        let Some(right) = step(m, fb, mid, b) else { continue };
        let Ok(sol) = solve_between(m, m, left, right, DEFAULT_TOL) else { continue };
        let (s1, s2) = (sol.sigma1, sol.sigma2);
        let defect = match (fa, fb) {
            (Two, One) => (s1 - b).abs() + (s2 - a).abs(),
            (Two, Two) => s1.abs() + (s2 - (a + b)).abs(),
            _ => (s1 - (a + b)).abs() + s2.abs(),
        };
        let r = defect / (a * b).abs();
        worst = Some(worst.map_or(r, |w: f64| w.max(r)));
    }
    Ok(worst)
}

/// Interface ratios at `z = 0` for an incoming gas 2-wave `a` and liquid
/// 1-wave `b` (either may be zero).
#[allow(clippy::too_many_arguments)]
fn interface_ratio(
    gas: &Medium,
    liq: &Medium,
    kappa: f64,
    delta: f64,
    c_refl: f64,
    left: State,
    a: f64,
    b: f64,
) -> Result<Option<f64>> {
    let mid = if a == 0.0 { Some(left) } else { step(gas, WaveFamily::Two, left, a) };
    let Some(mid) = mid else { return Ok(None) };
    let right = if b == 0.0 { Some(mid) } else { step(liq, WaveFamily::One, mid, b) };
    let Some(right) = right else { return Ok(None) };
    let Ok(sol) = solve_between(gas, liq, left, right, DEFAULT_TOL) else { return Ok(None) };
    let (s1, s2) = (sol.sigma1.abs(), sol.sigma2.abs());
    let (s2m, s1m) = (a.abs(), b.abs());
    let mut r: f64 = 0.0;
    // |σ1+| ≤ Cκ|σ1−| + (1 + C(κ+δ))|σ2−|
    let den = kappa * s1m + (kappa + delta) * s2m;
    if den > 0.0 {
        r = r.max((s1 - s2m) / den);
    }
    // |σ2+| ≤ (1 − cκ)|σ1−| + (2 + Cδ)|σ2−|
    if s2m > 0.0 {
        r = r.max((s2 - (1.0 - c_refl * kappa) * s1m - 2.0 * s2m) / (delta * s2m));
    }
    Ok(Some(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// `ΔΥ` above the relative monotonicity tolerance.
    Increase,
    /// The location-specific decay bound fails.
    DecayBound,
    /// `σ₁ + σ₂` changed across an interface event.
    SigmaSum,
    /// Outgoing signs contradict the single-incoming-wave pattern.
    SignPattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub t: f64,
    pub location: Location,
    pub kind: ViolationKind,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AuditReport {
    pub events: usize,
    pub interface_events: usize,
    /// Smallest `bound − ΔΥ` over located events (positive means slack).
    pub worst_decay_margin: f64,
    /// Largest `ΔΥ / Υ` over all events.
    pub worst_relative_increase: f64,
    pub worst_sigma_sum_defect: f64,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const MONOTONE_TOL: f64 = 1e-9;
pub const SIGMA_SUM_TOL: f64 = 1e-10;

fn incoming_of(e: &EventRecord, fam: WaveFamily) -> f64 {
    e.incoming.iter().filter(|(f, _)| *f == fam).map(|(_, s)| *s).sum()
}

/// Checks monotonicity, the location-specific decay bounds, and at the
/// interfaces the `σ`-sum identity and single-wave sign patterns.
pub fn audit(ledger: &[EventRecord], kappa: f64) -> AuditReport {
    let mut rep = AuditReport {
        worst_decay_margin: f64::INFINITY,
        ..AuditReport::default()
    };
    for (index, e) in ledger.iter().enumerate() {
        let mut flag = |kind: ViolationKind, excess: f64| {
            rep.violations.push(Violation {
                index,
                t: e.t,
                location: e.location,
                kind,
                excess,
            })
        };
        if let Location::InterfaceLeft | Location::InterfaceRight = e.location {
            rep.interface_events += 1;
            let before: f64 = e.incoming.iter().map(|(_, s)| s).sum();
            let after: f64 = e.outgoing.iter().map(|(_, s)| s).sum();
            let defect = (after - before).abs();
            rep.worst_sigma_sum_defect = rep.worst_sigma_sum_defect.max(defect);
            if defect > SIGMA_SUM_TOL {
                flag(ViolationKind::SigmaSum, defect);
            }
            if let Some(bad) = sign_pattern_defect(e) {
                flag(ViolationKind::SignPattern, bad);
            }
        }
        let (Some(u), Some(du)) = (e.upsilon_before, e.d_upsilon) else {
            continue;
        };
        rep.events += 1;
        if u > 0.0 {
            rep.worst_relative_increase = rep.worst_relative_increase.max(du / u);
        }
        if du > MONOTONE_TOL * u {
            flag(ViolationKind::Increase, du - MONOTONE_TOL * u);
        }
        if e.class == EventClass::StripEntry || e.class == EventClass::StripExit {
            continue;
        }
        let a = e.incoming.first().map_or(0.0, |x| x.1.abs());
        let b = e.incoming.get(1).map_or(0.0, |x| x.1.abs());
        let bound = match e.location {
            Location::Gas => -a * b,
            Location::Liquid => -kappa * kappa * a * b,
            Location::InterfaceLeft => {
                -incoming_of(e, WaveFamily::Two).abs() - kappa * incoming_of(e, WaveFamily::One).abs()
            }
            Location::InterfaceRight => {
                -kappa * incoming_of(e, WaveFamily::Two).abs() - incoming_of(e, WaveFamily::One).abs()
            }
            Location::StripEdge => continue,
        };
        // same per-event tolerance as monotonicity: at admissible sizes the
        // bounds sit near the resolution of pressures close to p_o
        let slack = MONOTONE_TOL * u;
        let margin = bound - du;
        rep.worst_decay_margin = rep.worst_decay_margin.min(margin);
        if margin < -slack {
            flag(ViolationKind::DecayBound, -margin);
        }
    }
    if rep.worst_decay_margin == f64::INFINITY {
        rep.worst_decay_margin = 0.0;
    }
    rep
}

/// For an interface event with exactly one incoming wave, the size of the
/// largest sign or magnitude defect, if any.
fn sign_pattern_defect(e: &EventRecord) -> Option<f64> {
    if e.incoming.len() != 1 {
        return None;
    }
    let (fam, s_in) = e.incoming[0];
    let out = |f: WaveFamily| e.outgoing.iter().filter(|(g, _)| *g == f).map(|(_, s)| *s).sum::<f64>();
    let (o1, o2) = (out(WaveFamily::One), out(WaveFamily::Two));
    let from_gas = matches!(
        (e.location, fam),
        (Location::InterfaceLeft, WaveFamily::Two) | (Location::InterfaceRight, WaveFamily::One)
    );
    // transmitted keeps the family of the incoming wave
    let (trans, refl) = if fam == WaveFamily::Two { (o2, o1) } else { (o1, o2) };
    let tol = SIGMA_SUM_TOL;
    let mut worst: f64 = 0.0;
    if from_gas {
        worst = worst.max(-(s_in * trans)).max(s_in * refl);
        worst = worst.max((trans.abs() - refl.abs() - s_in.abs()).abs() - tol);
    } else {
        worst = worst.max(-(s_in * trans)).max(-(s_in * refl));
        worst = worst.max((trans.abs() + refl.abs() - s_in.abs()).abs() - tol);
    }
    (worst > 0.0).then_some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxwaves::WaveFamily::{One, Two};

    fn w() -> GlimmWeights {
        default_weights(1.0, 1.0, 1.0).unwrap()
    }

    fn wave(region: Region, family: WaveFamily, sigma: f64) -> Wave {
        Wave { region, family, sigma }
    }

    fn brute_q(waves: &[Wave]) -> f64 {
        let mut q = 0.0;
        for i in 0..waves.len() {
            for j in i + 1..waves.len() {
                let (a, b) = (waves[i], waves[j]);
                if a.region != b.region {
                    continue;
                }
                let approaching = if a.family == b.family {
                    is_shock(&a) || is_shock(&b)
                } else {
                    a.family == Two && b.family == One
                };
                if approaching {
                    q += (a.sigma * b.sigma).abs();
                }
            }
        }
        q
    }

    #[test]
    fn weight_example() {
        let w = w();
        assert_eq!((w.k_l, w.k_in, w.h_g, w.h_l), (3.0, 13.0, 30.0, 8.0));
        assert!((w.delta_bar - 1.0 / 84.0).abs() < 1e-15);
        assert!(w.condition_slacks().iter().all(|&s| s <= 1e-15));
        let small = default_weights(1.0, 1.0, 1e-3).unwrap();
        assert_eq!(small.delta_bar, 1e-3);
    }

    #[test]
    fn weights_monotone_in_c() {
        let mut prev = default_weights(1.0, 0.3, 1.0).unwrap();
        for c in [1.5, 2.0, 3.7, 10.0] {
            let next = default_weights(c, 0.3, 1.0).unwrap();
            assert!(next.k_in >= prev.k_in && next.k_l >= prev.k_l);
            assert!(next.h_g >= prev.h_g && next.h_l >= prev.h_l);
            assert!(next.k_l >= 1.0 && next.h_l >= 1.0);
            assert!(next.condition_slacks().iter().all(|&s| s <= 1e-12));
            prev = next;
        }
        assert!(matches!(default_weights(1.0, 0.0, 1.0), Err(Error::InfeasibleConstants(_))));
    }

    #[test]
    fn wtv_examples() {
        let s = |p, v| State::new(p, v);
        assert_eq!(wtv(&Field::constant(s(1.0, 0.0)), 0.1, 1.0), 0.0);
        let gas = Field::new(vec![-1.0], vec![s(1.0, 0.0), s(1.1, 0.05)]);
        assert!((wtv(&gas, 0.1, 1.0) - 0.15).abs() < 1e-14);
        let liq = Field::new(vec![0.5], vec![s(1.0, 0.0), s(1.0, 0.01)]);
        assert!((wtv(&liq, 0.1, 1.0) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn upsilon_examples() {
        let w = w();
        let empty = upsilon(&[], &w, 0.1, 0.0);
        assert_eq!(empty.upsilon, 0.0);
        let one = upsilon(&[wave(Region::GasLeft, Two, -0.01)], &w, 0.1, 0.0);
        assert_eq!(one.v_g_in, 0.01);
        assert_eq!(one.q_g, 0.0);
        assert!((one.upsilon - 13.0 * 0.01).abs() < 1e-15);
        let apart = [wave(Region::Liquid, One, 0.01), wave(Region::Liquid, Two, -0.01)];
        assert_eq!(upsilon(&apart, &w, 0.1, 0.0).q_l, 0.0);
        let head_on = [wave(Region::Liquid, Two, -0.01), wave(Region::Liquid, One, 0.02)];
        assert!((upsilon(&head_on, &w, 0.1, 0.0).q_l - 2e-4).abs() < 1e-18);
        let fan = [wave(Region::GasRight, Two, 1e-3), wave(Region::GasRight, Two, 1e-3)];
        assert_eq!(upsilon(&fan, &w, 0.1, 0.0).q_g, 0.0);
        let split = [wave(Region::GasLeft, Two, -0.01), wave(Region::Liquid, One, 0.02)];
        assert_eq!(upsilon(&split, &w, 0.1, 0.0).q_g, 0.0);
    }

    #[test]
    fn prefix_sums_match_pairs() {
        let regions = [Region::GasLeft, Region::Liquid, Region::GasRight];
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let waves: Vec<Wave> = (0..40)
                .map(|i| {
                    let fam = if next() < 0.5 { One } else { Two };
                    wave(regions[i * 3 / 40], fam, next() - 0.5)
                })
                .collect();
            let r = upsilon(&waves, &w(), 1.0, 0.0);
            let brute = brute_q(&waves);
            assert!((r.q_g + r.q_l - brute).abs() < 1e-12 * brute.max(1.0));
        }
    }

    #[test]
    fn degenerate_box_constant() {
        let gas = GammaLaw::new(1.0, 1.4).unwrap();
        let base = GammaLaw::new(1.0, 1.0).unwrap();
        let (cc, c) = estimate_constants(&gas, &base, 1.0, 1.0, 1.0, &[0.1]).unwrap();
        assert_eq!(cc, 1.0);
        let expected = 0.5 * (base.dtau(1.0).unwrap() / gas.dtau(1.0).unwrap()).sqrt();
        assert!((c - expected).abs() < 1e-14);
    }

    #[test]
    fn sampled_constants_for_unit_laws() {
        let unit = GammaLaw::new(1.0, 1.0).unwrap();
        let (cc, c) = estimate_constants(&unit, &unit, 1.0, 0.9, 1.1, &[0.2, 0.1, 0.05]).unwrap();
        assert!(cc >= 1.0);
        assert!(c > 0.0 && c <= 0.5 + 1e-12, "{c}");
        assert!(cc < 50.0, "{cc}");
    }

    #[test]
    fn empty_ledger_passes() {
        assert!(audit(&[], 0.1).passed());
    }
}
