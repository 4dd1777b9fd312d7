//! Problem description: slab geometry, pressure laws and initial datum.

use serde::{Deserialize, Serialize};

use crate::eos::{GammaLaw, LiquidEos, Medium};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laxwaves::{State, WaveFamily};

/// The three phases in mass coordinates: gas on `]−∞, 0[`, liquid on
/// `]0, m[`, gas on `]m, ∞[`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    GasLeft,
    Liquid,
    GasRight,
}

impl Region {
    pub fn is_gas(self) -> bool {
        self != Region::Liquid
    }
}

/// A jump in the initial datum: the state to the right of `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub z: f64,
    pub p: f64,
    pub v: f64,
}

impl Jump {
    pub fn state(&self) -> State {
        State::new(self.p, self.v)
    }
}

/// Piecewise-constant initial datum: `left` up to the first jump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialProfile {
    pub left: State,
    #[serde(default)]
    pub jumps: Vec<Jump>,
}

impl InitialProfile {
    pub fn constant(s: State) -> Self {
        InitialProfile {
            left: s,
            jumps: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        let mut states = vec![self.left];
        states.extend(self.jumps.iter().map(Jump::state));
        Field::new(self.jumps.iter().map(|j| j.z).collect(), states)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Liquid mass, the width of the slab in mass coordinates.
    pub m: f64,
    /// Reference (background) pressure.
    pub p_o: f64,
    pub gas: GammaLaw,
    pub liquid_base: GammaLaw,
    pub p_bar: f64,
    pub kappa: f64,
    pub initial: InitialProfile,
    pub t_end: f64,
    pub eps: f64,
    /// Upper bound on the weighted total variation of the initial datum.
    #[serde(default)]
    pub wtv_budget: Option<f64>,
}

impl Scenario {
    pub fn liquid(&self) -> Result<LiquidEos> {
        LiquidEos::new(self.liquid_base, self.p_bar, self.kappa)
    }

    pub fn medium(&self, r: Region) -> Result<Medium> {
        Ok(match r {
            Region::Liquid => Medium::Liquid(self.liquid()?),
            _ => Medium::Gas(self.gas),
        })
    }

    pub fn with_kappa(&self, kappa: f64) -> Scenario {
        Scenario {
            kappa,
            ..self.clone()
        }
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.m, self.eps)
    }

    /// Checks the datum against the model assumptions and returns its
    /// weighted total variation.
    pub fn validate(&self) -> Result<f64> {
        let bad = |msg: String| Err(Error::InadmissibleScenario(msg));
        if !(self.m > 0.0 && self.m.is_finite()) {
            return bad(format!("m = {} must be positive", self.m));
        }
        if !(self.eps > 0.0 && 4.0 * self.eps * self.eps < self.m) {
            return bad(format!("eps = {} must be positive with 4 eps² < m", self.eps));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be finite and non-negative", self.t_end));
        }
        if !(self.p_o > 0.0) {
            return bad(format!("p_o = {} must be positive", self.p_o));
        }
        let liq = self.liquid()?;
        let geo = self.geometry();
        let flat = 2.0 * geo.strip;
        let mut prev = f64::NEG_INFINITY;
        for (i, j) in self.initial.jumps.iter().enumerate() {
            if !j.z.is_finite() || j.z <= prev {
                return bad(format!("initial.jumps[{i}].z = {} is not strictly increasing", j.z));
            }
            if j.z.abs() <= flat || (j.z - self.m).abs() <= flat {
                return bad(format!(
                    "initial.jumps[{i}].z = {} lies within 2 eps² of an interface",
                    j.z
                ));
            }
            prev = j.z;
        }
        let field = self.initial.field();
        for (i, s) in field.states.iter().enumerate() {
            if !s.is_admissible() {
                return bad(format!("initial state {i} is not admissible: {s:?}"));
            }
            let (a, b) = (
                if i == 0 { f64::NEG_INFINITY } else { field.breaks[i - 1] },
                field.breaks.get(i).copied().unwrap_or(f64::INFINITY),
            );
            if a < self.m && b > 0.0 {
                liq.check_box(s.p, s.p)?;
            }
            if a < 0.0 || b > self.m {
                Medium::Gas(self.gas).tau_of_p(s.p)?;
            }
        }
        let w = crate::glimm::wtv(&field, self.kappa, self.m);
        if let Some(budget) = self.wtv_budget {
            if w > budget {
                return bad(format!("WTV = {w} exceeds the budget {budget}"));
            }
        }
        Ok(w)
    }
}

/// Interface positions and the strips of half-width `ε²` around them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub m: f64,
    pub strip: f64,
    /// `−ε², 0, ε², m−ε², m, m+ε²`.
    pub marks: [f64; 6],
}

impl Geometry {
    pub fn new(m: f64, eps: f64) -> Self {
        let s = eps * eps;
        Geometry {
            m,
            strip: s,
            marks: [-s, 0.0, s, m - s, m, m + s],
        }
    }

    pub fn is_interface(&self, z: f64) -> bool {
        z == 0.0 || z == self.m
    }

    /// Phase a front of family `fam` sitting at `z` is about to travel in.
    pub fn region(&self, fam: WaveFamily, z: f64) -> Region {
        let left_of = |x: f64| z < x || (z == x && fam == WaveFamily::One);
        if left_of(0.0) {
            Region::GasLeft
        } else if left_of(self.m) {
            Region::Liquid
        } else {
            Region::GasRight
        }
    }

    /// Whether a front of family `fam` at `z` moves inside a strip. On a strip
    /// edge the family decides: the fixed strip speed must point inward.
    pub fn in_strip(&self, fam: WaveFamily, z: f64) -> bool {
        let [a, _, b, c, _, d] = self.marks;
        if (z > a && z < b) || (z > c && z < d) {
            return true;
        }
        match fam {
            WaveFamily::One => z == b || z == d,
            WaveFamily::Two => z == a || z == c,
        }
    }

    /// First mark strictly ahead of `z` in the direction of `speed`.
    pub fn next_mark(&self, z: f64, speed: f64) -> Option<f64> {
        if speed > 0.0 {
            self.marks.iter().copied().find(|&b| b > z)
        } else if speed < 0.0 {
            self.marks.iter().rev().copied().find(|&b| b < z)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> Scenario {
        Scenario {
            m: 1.0,
            p_o: 1.0,
            gas: GammaLaw::new(1.0, 1.4).unwrap(),
            liquid_base: GammaLaw::new(1.0, 1.0).unwrap(),
            p_bar: 1.0,
            kappa: 0.1,
            initial: InitialProfile::constant(State::new(1.0, 0.0)),
            t_end: 1.0,
            eps: 1e-3,
            wtv_budget: None,
        }
    }

    #[test]
    fn constant_datum_is_valid() {
        assert_eq!(scenario().validate().unwrap(), 0.0);
    }

    #[test]
    fn rejects_jump_at_interface() {
        let mut s = scenario();
        s.initial.jumps.push(Jump { z: 0.0, p: 1.0, v: 0.1 });
        assert!(matches!(s.validate(), Err(Error::InadmissibleScenario(_))));
        s.initial.jumps[0].z = 1.5 * s.eps * s.eps;
        assert!(s.validate().is_err());
        s.initial.jumps[0].z = 3.0 * s.eps * s.eps;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn rejects_budget_overflow() {
        let mut s = scenario();
        s.initial.jumps.push(Jump { z: -1.0, p: 1.1, v: 0.05 });
        s.wtv_budget = Some(0.1);
        assert!(s.validate().is_err());
        s.wtv_budget = Some(0.2);
        assert!((s.validate().unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn placement_on_marks() {
        let g = Geometry::new(1.0, 1e-3);
        assert_eq!(g.region(WaveFamily::One, 0.0), Region::GasLeft);
        assert_eq!(g.region(WaveFamily::Two, 0.0), Region::Liquid);
        assert_eq!(g.region(WaveFamily::One, 1.0), Region::Liquid);
        assert_eq!(g.region(WaveFamily::Two, 1.0), Region::GasRight);
        let s = g.strip;
        assert!(g.in_strip(WaveFamily::Two, -s));
        assert!(!g.in_strip(WaveFamily::One, -s));
        assert!(g.in_strip(WaveFamily::One, s));
        assert!(!g.in_strip(WaveFamily::Two, 1.0 + s));
        assert!(g.in_strip(WaveFamily::One, 0.0) && g.in_strip(WaveFamily::Two, 1.0));
        assert!(!g.in_strip(WaveFamily::Two, 0.5));
        assert_eq!(g.next_mark(-0.5, 1.0), Some(-s));
        assert_eq!(g.next_mark(-s, 1.0), Some(0.0));
        assert_eq!(g.next_mark(0.0, -1.0), Some(-s));
        assert_eq!(g.next_mark(2.0, 1.0), None);
    }
}
