//! Reference scenarios shared by the test suites and the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eos::GammaLaw;
use crate::error::{Error, Result};
use crate::fronttracker::{RunOptions, Tracker};
use crate::glimm::GlimmWeights;
use crate::laxwaves::State;
use crate::scenario::{InitialProfile, Jump, Scenario};

/// Two gas compressions, one on each side of a unit slab at rest.
pub fn standard(kappa: f64) -> Scenario {
    let rest = |p| State::new(p, 0.0);
    let jump = |z, p| Jump { z, p, v: 0.0 };
    Scenario {
        m: 1.0,
        p_o: 1.0,
        gas: GammaLaw { k: 1.0, gamma: 1.4 },
        liquid_base: GammaLaw { k: 1.0, gamma: 1.0 },
        p_bar: 1.0,
        kappa,
        initial: InitialProfile {
            left: rest(1.0),
            jumps: vec![
                jump(-1.25, 1.04),
                jump(-0.25, 1.0),
                jump(1.25, 1.02),
                jump(2.25, 1.0),
            ],
        },
        t_end: 1.0,
        eps: 1e-3,
        wtv_budget: None,
    }
}

/// Small random datum with jumps in all three phases, sized so that the
/// interaction functional starts below `amplitude`-scale budgets.
pub fn random_small(seed: u64, kappa: f64, amplitude: f64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jumps = Vec::new();
    let mut v_liquid = 0.0;
    for (lo, hi, liquid) in [(-1.0, -0.05, false), (0.05, 0.95, true), (1.05, 2.0, false)] {
        let n = rng.gen_range(1..=3);
        let mut zs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        zs.sort_by(f64::total_cmp);
        for z in zs {
            let p = 1.0 + amplitude * rng.gen_range(-1.0..1.0);
            // liquid velocity jumps are weighted by 1/κ in WTV
            let dv = amplitude * rng.gen_range(-1.0..1.0) * if liquid { kappa } else { 1.0 };
            v_liquid += dv;
            jumps.push(Jump { z, p, v: v_liquid });
        }
    }
    let last = jumps.last().map_or(0.0, |j| j.v);
    jumps.push(Jump {
        z: 2.5,
        p: 1.0,
        v: last - 0.5 * last,
    });
    let mut s = standard(kappa);
    s.initial = InitialProfile {
        left: State::new(1.0, 0.0),
        jumps,
    };
    s.t_end = 0.5;
    s.eps = 2e-3;
    s
}

/// [`random_small`] rescaled so that `Υ(0+)` lies below half of the weights'
/// `δ̄`, with `ε` tied to the amplitude so rarefactions still split.
pub fn random_admissible(seed: u64, kappa: f64, w: &GlimmWeights) -> Result<Scenario> {
    let mut amplitude = 1e-3;
    for _ in 0..60 {
        let mut s = random_small(seed, kappa, amplitude);
        s.eps = 0.5 * amplitude;
        let tr = Tracker::new(&s, &RunOptions { ledger: false, ..RunOptions::default() })?;
        let ups = tr.glimm_report(w).upsilon;
        if ups < 0.5 * w.delta_bar {
            return Ok(s);
        }
        amplitude *= (0.4 * w.delta_bar / ups).min(0.5);
    }
    Err(Error::InadmissibleScenario(format!("no admissible amplitude for seed {seed}")))
}
