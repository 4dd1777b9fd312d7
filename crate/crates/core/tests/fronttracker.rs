use machzero::fixtures;
use machzero::fronttracker::{run, EventClass, EventKind, Location, RunOptions, Tracker};
use machzero::glimm::audit;
use machzero::laxwaves::{shock_speed, State, WaveFamily, WaveKind};
use machzero::riemann::{solve_interior, DEFAULT_TOL};
use machzero::scenario::{InitialProfile, Jump, Scenario};
use machzero::{GammaLaw, Medium};
use proptest::prelude::*;

fn slab(left: State, jumps: Vec<Jump>, t_end: f64) -> Scenario {
    let mut s = fixtures::standard(0.2);
    s.initial = InitialProfile { left, jumps };
    s.t_end = t_end;
    s
}

fn quiet() -> RunOptions {
    RunOptions {
        jitter: 0.0,
        ..RunOptions::default()
    }
}

#[test]
fn constant_datum_has_no_events() {
    let s = slab(State::new(1.0, 0.0), vec![], 1.0);
    let tr = run(&s, &quiet()).unwrap();
    assert_eq!(tr.events, 0);
    assert_eq!(tr.fronts_born, 0);
    assert!(tr.ledger.is_empty());
}

#[test]
fn single_jump_before_the_strips_is_exact() {
    let (l, r) = (State::new(1.0, 0.05), State::new(1.0, -0.05));
    let s = slab(l, vec![Jump { z: -2.0, p: r.p, v: r.v }], 0.5);
    let opts = RunOptions {
        snapshots: vec![0.5],
        ..quiet()
    };
    let tr = run(&s, &opts).unwrap();
    assert_eq!(tr.events, 0);
    let gas = Medium::Gas(s.gas);
    let sol = solve_interior(&gas, l, r, DEFAULT_TOL).unwrap();
    assert!(sol.sigma1 > 0.0 && sol.sigma2 < 0.0, "two shocks expected");
    let s1 = shock_speed(&gas, WaveFamily::One, l.p, sol.middle.p).unwrap();
    let s2 = shock_speed(&gas, WaveFamily::Two, sol.middle.p, r.p).unwrap();
    let field = tr.sample(0.5).unwrap();
    assert_eq!(field.breaks.len(), 2);
    assert!((field.breaks[0] - (-2.0 + 0.5 * s1)).abs() < 1e-12);
    assert!((field.breaks[1] - (-2.0 + 0.5 * s2)).abs() < 1e-12);
    let mid = field.value_at(-2.0);
    assert!((mid.p - sol.middle.p).abs() < 1e-12 && (mid.v - sol.middle.v).abs() < 1e-12);
}

#[test]
fn rarefaction_of_three_eps_gives_three_wavelets() {
    let s = slab(State::new(1.0, 0.0), vec![], 0.1);
    let eps = s.eps;
    let gas = Medium::Gas(s.gas);
    // a pure 2-rarefaction: right state on the 2-curve through the left one
    let p_r = 1.0 + 3.0 * eps;
    let v_r = machzero::laxwaves::lax_velocity(&gas, WaveFamily::Two, p_r, State::new(1.0, 0.0)).unwrap();
    let s = slab(s.initial.left, vec![Jump { z: -2.0, p: p_r, v: v_r }], 0.1);
    let tr = Tracker::new(&s, &quiet()).unwrap();
    let fronts = tr.fronts();
    assert_eq!(fronts.len(), 3);
    for f in fronts {
        assert_eq!(f.family, WaveFamily::Two);
        assert_eq!(f.kind(), WaveKind::Rarefaction);
        assert!((f.sigma - eps).abs() < 1e-6 * eps);
    }
    assert!(fronts.windows(2).all(|w| w[0].speed <= w[1].speed));
}

#[test]
fn next_event_kinematics() {
    // a pure 2-shock at −2 overtakes a pure 1-shock at −1.5
    let gas = Medium::Gas(fixtures::standard(0.2).gas);
    let a = State::new(1.03, 0.0);
    let b = State::new(1.0, machzero::laxwaves::lax_velocity(&gas, WaveFamily::Two, 1.0, a).unwrap());
    let c = State::new(1.03, machzero::laxwaves::lax_velocity(&gas, WaveFamily::One, 1.03, b).unwrap());
    let s = slab(
        a,
        vec![Jump { z: -2.0, p: b.p, v: b.v }, Jump { z: -1.5, p: c.p, v: c.v }],
        1.0,
    );
    let tr = Tracker::new(&s, &quiet()).unwrap();
    let f = tr.fronts();
    assert_eq!(f.len(), 2);
    assert_eq!((f[0].family, f[1].family), (WaveFamily::Two, WaveFamily::One));
    let expect = (f[1].z - f[0].z) / (f[0].speed - f[1].speed);
    let ev = tr.next_event();
    assert_eq!(ev.kind, EventKind::Collision(0));
    assert!((ev.t - expect).abs() < 1e-14);
}

#[test]
fn mark_crossing_is_scheduled_at_the_strip_edge() {
    let s = slab(State::new(1.0, 0.02), vec![Jump { z: -0.1, p: 1.0, v: 0.0 }], 1.0);
    let tr = Tracker::new(&s, &quiet()).unwrap();
    let right = *tr.fronts().last().unwrap();
    assert_eq!(right.family, WaveFamily::Two);
    let ev = tr.next_event();
    let edge = -s.eps * s.eps;
    assert_eq!(ev.kind, EventKind::Mark(tr.fronts().len() - 1, edge));
    assert!((ev.t - (edge - right.z) / right.speed).abs() < 1e-14);
}

#[test]
fn single_gas_wave_at_the_interface() {
    // a 2-shock in the left gas moving into the slab
    let s = slab(State::new(1.0, 0.02), vec![Jump { z: -0.1, p: 1.0, v: 0.0 }], 0.5);
    let tr = run(&s, &quiet()).unwrap();
    let first = tr
        .ledger
        .iter()
        .find(|e| e.class == EventClass::Interface)
        .expect("the shock reaches the interface");
    assert_eq!(first.location, Location::InterfaceLeft);
    assert_eq!(first.incoming.len(), 1);
    let (fam, inc) = first.incoming[0];
    assert_eq!(fam, WaveFamily::Two);
    let refl = first.outgoing.iter().find(|w| w.0 == WaveFamily::One).unwrap().1;
    let trans = first.outgoing.iter().find(|w| w.0 == WaveFamily::Two).unwrap().1;
    assert_eq!(trans.signum(), inc.signum());
    assert_eq!(refl.signum(), -inc.signum());
    assert!((trans.abs() - refl.abs() - inc.abs()).abs() < 1e-10);
    let rep = audit(&tr.ledger, s.kappa);
    assert!(rep.violations.iter().all(|v| v.kind != machzero::glimm::ViolationKind::SignPattern));
    assert!(rep.worst_sigma_sum_defect < 1e-10);
}

#[test]
fn runs_are_deterministic() {
    let s = fixtures::random_small(3, 0.2, 0.02);
    let opts = RunOptions {
        seed: 11,
        snapshots: vec![0.5, 1.0],
        ..RunOptions::default()
    };
    let a = run(&s, &opts).unwrap();
    let b = run(&s, &opts).unwrap();
    assert!(a.events > 0);
    assert_eq!(a.ledger, b.ledger);
    assert_eq!(a.snapshots, b.snapshots);
    assert_eq!(a.probes, b.probes);
}

#[test]
fn finite_propagation_speed() {
    let base = fixtures::standard(0.2);
    let mut far = base.clone();
    far.initial.jumps.push(Jump { z: 40.0, p: 1.1, v: 0.0 });
    let opts = RunOptions {
        snapshots: vec![1.0],
        ..quiet()
    };
    let a = run(&base, &opts).unwrap();
    let b = run(&far, &opts).unwrap();
    let (fa, fb) = (a.sample(1.0).unwrap(), b.sample(1.0).unwrap());
    // gas sound speed stays far below 30
    assert_eq!(fa.l1_distance(fb, |u| u.p, -10.0, 10.0), 0.0);
    assert_eq!(fa.l1_distance(fb, |u| u.v, -10.0, 10.0), 0.0);
}

#[test]
fn event_cap_is_enforced() {
    let s = fixtures::standard(0.2);
    let opts = RunOptions {
        event_cap: 50,
        ..RunOptions::default()
    };
    match run(&s, &opts) {
        Err(machzero::Error::EventCapExceeded { cap, .. }) => assert_eq!(cap, 50),
        other => panic!("expected the cap to trip, got {:?}", other.map(|t| t.events)),
    }
}

#[test]
fn rarefactions_stay_small_outside_strips() {
    let s = fixtures::standard(0.1);
    let tr = run(&s, &RunOptions { ledger: false, ..RunOptions::default() }).unwrap();
    assert!(tr.max_rarefaction <= s.eps * (1.0 + 1e-9), "{}", tr.max_rarefaction);
}

fn check_consistency(tr: &Tracker) -> Result<(), TestCaseError> {
    let (f, c) = (tr.fronts(), tr.cells());
    prop_assert_eq!(c.len(), f.len() + 1);
    for (j, x) in f.iter().enumerate() {
        prop_assert!((x.sigma - (c[j + 1].p - c[j].p)).abs() < 1e-12);
        prop_assert!(x.sigma.abs() >= machzero::fronttracker::ZERO_WAVE);
        if j > 0 {
            prop_assert!(f[j - 1].z <= x.z, "fronts out of order at {}", j);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tracker_stays_consistent(seed in 0u64..1000, kappa in 0.1f64..0.5) {
        let mut s = fixtures::random_small(seed, kappa, 0.02);
        s.eps = 3e-3;
        s.t_end = 0.5;
        let mut tr = Tracker::new(&s, &RunOptions { ledger: false, ..RunOptions::default() }).unwrap();
        check_consistency(&tr)?;
        let mut last = 0.0;
        while tr.step().unwrap() {
            prop_assert!(tr.time() >= last);
            last = tr.time();
            check_consistency(&tr)?;
        }
        prop_assert_eq!(tr.time(), s.t_end);
    }
}

#[test]
fn gas_law_defaults_match_the_fixture() {
    let s = fixtures::standard(0.2);
    assert_eq!(s.gas, GammaLaw::new(1.0, 1.4).unwrap());
}
