//! Reference solvers used to check the front tracker: a derivative-free
//! Riemann solver and a first-order Godunov scheme in mass coordinates.

use serde::{Deserialize, Serialize};

use crate::eos::{Medium, P_MIN};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laxwaves::State;
use crate::riemann::{
    solve_between, solve_interior, solve_piston_boundary, WallSide, DEFAULT_TOL,
};
use crate::scenario::{Region, Scenario};

// 8-point Gauss-Legendre rule on [-1, 1]
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `∫_a^b √(−T'(ξ)) dξ` by composite Gauss-Legendre.
fn rarefaction_integral(m: &Medium, a: f64, b: f64) -> Result<f64> {
    let panels = ((b / a).ln().abs() / 0.1).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let mut s = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for xi in [mid - 0.5 * h * x, mid + 0.5 * h * x] {
                s += w * (-m.dtau_dp(xi)?).sqrt();
            }
        }
        total += 0.5 * h * s;
    }
    Ok(total)
}

/// Velocity lost along a Lax curve going from pressure `q` to `p`: the
/// Hugoniot branch for compression, the integral branch for expansion.
fn velocity_drop(m: &Medium, p: f64, q: f64) -> Result<f64> {
    if p >= q {
        let dtau = m.tau_of_p(q)? - m.tau_of_p(p)?;
        Ok(((p - q) * dtau).sqrt())
    } else {
        Ok(-rarefaction_integral(m, p, q)?)
    }
}

/// Middle pressure of the Riemann problem with the 1-wave in `lm` and the
/// 2-wave in `rm`, by bisection to an interval of width `tol`.
pub fn riemann_bisect(lm: &Medium, rm: &Medium, left: State, right: State, tol: f64) -> Result<f64> {
    if left == right {
        return Ok(left.p);
    }
    let g = |p: f64| -> Result<f64> {
        Ok(right.v - left.v + velocity_drop(lm, p, left.p)? + velocity_drop(rm, p, right.p)?)
    };
    let (mut lo, mut hi) = (left.p.min(right.p), left.p.max(right.p));
    while g(lo)? > 0.0 {
        lo *= 0.5;
        if lo < 2.0 * P_MIN {
            return Err(Error::NoBracket { lo, hi });
        }
    }
    while g(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoBracket { lo, hi });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniform mesh of equal-mass cells on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl Mesh {
    pub fn new(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo < hi) || cells == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidMesh(format!("[{lo}, {hi}] with {cells} cells")));
        }
        Ok(Mesh { lo, hi, cells })
    }

    pub fn dz(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn face(&self, f: usize) -> f64 {
        self.lo + f as f64 * self.dz()
    }

    /// Index of the face at `z`, which must be a face of the mesh.
    fn face_at(&self, z: f64) -> Result<usize> {
        let x = (z - self.lo) / self.dz();
        let f = x.round();
        if (x - f).abs() > 1e-9 || f < 1.0 || f >= self.cells as f64 {
            return Err(Error::InvalidMesh(format!(
                "z = {z} is not an interior face of [{}, {}] with {} cells",
                self.lo, self.hi, self.cells
            )));
        }
        Ok(f as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GodunovRun {
    pub mesh: Mesh,
    pub t: f64,
    pub steps: usize,
    pub tau: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
    /// `(∫τ, ∫v)` over the mesh at `t = 0`.
    pub initial_sums: (f64, f64),
    /// Net inflow of `(τ, v)` through the two outer faces.
    pub outer_flux: (f64, f64),
    /// `(t, v_l)` nodes of the rigid slab velocity, piston runs only.
    pub piston: Vec<(f64, f64)>,
}

impl GodunovRun {
    pub fn sums(&self) -> (f64, f64) {
        let dz = self.mesh.dz();
        (self.tau.iter().sum::<f64>() * dz, self.v.iter().sum::<f64>() * dz)
    }

    /// Cell values as a piecewise-constant field.
    pub fn field(&self) -> Field {
        let breaks = (1..self.mesh.cells).map(|f| self.mesh.face(f)).collect();
        let states = self.p.iter().zip(&self.v).map(|(&p, &v)| State::new(p, v)).collect();
        Field::new(breaks, states)
    }
}

/// Exact `∫_a^b |p₁ − p₂| + |v₁ − v₂| dz`.
pub fn l1_distance(f1: &Field, f2: &Field, a: f64, b: f64) -> f64 {
    f1.l1_distance(f2, |u| u.p, a, b) + f1.l1_distance(f2, |u| u.v, a, b)
}

/// First-order Godunov scheme for the three-phase problem up to `t_end`.
pub fn godunov(s: &Scenario, mesh: Mesh, cfl: f64, t_end: f64) -> Result<GodunovRun> {
    Scheme::new(s, mesh, cfl, false)?.run(t_end)
}

/// Godunov scheme for the limit model: the two gas half-lines bounded by a
/// rigid slab whose velocity obeys `m v̇ = p(0−) − p(m+)`.
pub fn godunov_piston(s: &Scenario, mesh: Mesh, cfl: f64, t_end: f64) -> Result<GodunovRun> {
    Scheme::new(s, mesh, cfl, true)?.run(t_end)
}

struct Scheme {
    media: Vec<Medium>,
    run: GodunovRun,
    i0: usize,
    im: usize,
    cfl: f64,
    s: Scenario,
    piston: bool,
    v_l: f64,
}

impl Scheme {
    fn new(s: &Scenario, mesh: Mesh, cfl: f64, piston: bool) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 0.5) {
            return Err(Error::CflViolation(cfl));
        }
        s.validate()?;
        let i0 = mesh.face_at(0.0)?;
        let im = mesh.face_at(s.m)?;
        let dz = mesh.dz();
        let init = s.initial.field();
        let (mut media, mut tau, mut v, mut p) = (vec![], vec![], vec![], vec![]);
        for j in 0..mesh.cells {
            let region = if j < i0 {
                Region::GasLeft
            } else if j < im {
                Region::Liquid
            } else {
                Region::GasRight
            };
            let m = s.medium(region)?;
            let (a, b) = (mesh.face(j), mesh.face(j + 1));
            let t_avg = init.integral(|u| m.tau_of_p(u.p).unwrap_or(f64::NAN), a, b) / dz;
            if !t_avg.is_finite() {
                return Err(Error::Domain { p: init.value_at(0.5 * (a + b)).p });
            }
            tau.push(t_avg);
            v.push(init.integral(|u| u.v, a, b) / dz);
            p.push(m.p_of_tau(t_avg)?);
            media.push(m);
        }
        let v_l = if piston {
            init.integral(|u| u.v, 0.0, s.m) / s.m
        } else {
            0.0
        };
        let run = GodunovRun {
            mesh,
            t: 0.0,
            steps: 0,
            initial_sums: (tau.iter().sum::<f64>() * dz, v.iter().sum::<f64>() * dz),
            tau,
            v,
            p,
            outer_flux: (0.0, 0.0),
            piston: if piston { vec![(0.0, v_l)] } else { Vec::new() },
        };
        Ok(Scheme {
            media,
            run,
            i0,
            im,
            cfl,
            s: s.clone(),
            piston,
            v_l,
        })
    }

    fn active(&self, j: usize) -> bool {
        !self.piston || j < self.i0 || j >= self.im
    }

    fn max_speed(&self) -> Result<f64> {
        let mut c: f64 = 0.0;
        for j in 0..self.run.mesh.cells {
            if self.active(j) {
                c = c.max(1.0 / (-self.media[j].dtau_dp(self.run.p[j])?).sqrt());
            }
        }
        Ok(c)
    }

    /// `(v*, p*)` at face `f`, or `None` for faces inside the rigid slab.
    fn face_state(&self, f: usize) -> Result<Option<(f64, f64)>> {
        let n = self.run.mesh.cells;
        let r = &self.run;
        let cell = |j: usize| State::new(r.p[j], r.v[j]);
        if f == 0 || f == n {
            let j = if f == 0 { 0 } else { n - 1 };
            return Ok(Some((r.v[j], r.p[j])));
        }
        if self.piston {
            if f == self.i0 {
                let w = solve_piston_boundary(WallSide::LeftGas, &self.s.gas, cell(f - 1), self.v_l, DEFAULT_TOL)?;
                return Ok(Some((self.v_l, w.wall.p)));
            }
            if f == self.im {
                let w = solve_piston_boundary(WallSide::RightGas, &self.s.gas, cell(f), self.v_l, DEFAULT_TOL)?;
                return Ok(Some((self.v_l, w.wall.p)));
            }
            if f > self.i0 && f < self.im {
                return Ok(None);
            }
        }
        let (ml, mr) = (&self.media[f - 1], &self.media[f]);
        let sol = if f == self.i0 || f == self.im {
            solve_between(ml, mr, cell(f - 1), cell(f), DEFAULT_TOL)?
        } else {
            solve_interior(ml, cell(f - 1), cell(f), DEFAULT_TOL)?
        };
        Ok(Some((sol.middle.v, sol.middle.p)))
    }

    fn run(mut self, t_end: f64) -> Result<GodunovRun> {
        let n = self.run.mesh.cells;
        let dz = self.run.mesh.dz();
        let mut faces = vec![None; n + 1];
        while self.run.t < t_end {
            let dt = (self.cfl * dz / self.max_speed()?).min(t_end - self.run.t);
            for (f, slot) in faces.iter_mut().enumerate() {
                *slot = self.face_state(f)?;
            }
            let r = &mut self.run;
            for j in 0..n {
                if let (Some((vl, pl)), Some((vr, pr))) = (faces[j], faces[j + 1]) {
                    r.tau[j] += dt / dz * (vr - vl);
                    r.v[j] -= dt / dz * (pr - pl);
                    r.p[j] = self.media[j].p_of_tau(r.tau[j])?;
                }
            }
            let ((v0, p0), (vn, pn)) = (faces[0].expect("outer face"), faces[n].expect("outer face"));
            r.outer_flux.0 += dt * (vn - v0);
            r.outer_flux.1 -= dt * (pn - p0);
            if self.piston {
                let (p_left, p_right) = (faces[self.i0].expect("wall").1, faces[self.im].expect("wall").1);
                self.v_l += dt / self.s.m * (p_left - p_right);
                r.piston.push((r.t + dt, self.v_l));
            }
            r.t += dt;
            r.steps += 1;
        }
        if self.piston {
            // the slab carries v_l and the linear interpolation of the wall pressures
            let (p0, pm) = (
                self.face_state(self.i0)?.expect("wall").1,
                self.face_state(self.im)?.expect("wall").1,
            );
            for j in self.i0..self.im {
                let z = self.run.mesh.face(j) + 0.5 * dz;
                self.run.v[j] = self.v_l;
                self.run.p[j] = p0 + (pm - p0) * z / self.s.m;
            }
        }
        Ok(self.run)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::GammaLaw;
    use crate::fixtures;

    #[test]
    fn symmetric_gas_case() {
        let m = Medium::Gas(GammaLaw::new(1.0, 1.0).unwrap());
        let p = riemann_bisect(&m, &m, State::new(1.0, 0.1), State::new(1.0, -0.1), 1e-14).unwrap();
        assert!((p - 1.105_125_0).abs() < 1e-7, "{p}");
        let eq = State::new(1.3, 0.2);
        assert_eq!(riemann_bisect(&m, &m, eq, eq, 1e-14).unwrap(), 1.3);
    }

    #[test]
    fn rarefaction_branch_integral() {
        // γ = 1, k = 1: ∫ √(1/ξ²) = ln(b/a)
        let m = Medium::Gas(GammaLaw::new(1.0, 1.0).unwrap());
        let x = rarefaction_integral(&m, 0.7, 1.3).unwrap();
        assert!((x - (1.3f64 / 0.7).ln()).abs() < 1e-14);
    }

    #[test]
    fn vacuum_has_no_bracket() {
        let m = Medium::Gas(GammaLaw::new(1.0, 1.4).unwrap());
        let r = riemann_bisect(&m, &m, State::new(1.0, -50.0), State::new(1.0, 50.0), 1e-12);
        assert!(matches!(r, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn mesh_must_align() {
        let s = fixtures::standard(0.2);
        assert!(matches!(godunov(&s, Mesh::new(-3.3, 4.5, 70).unwrap(), 0.45, 0.1), Err(Error::InvalidMesh(_))));
        assert!(matches!(godunov(&s, Mesh::new(-3.5, 4.5, 80).unwrap(), 0.6, 0.1), Err(Error::CflViolation(_))));
    }

    #[test]
    fn constant_datum_stays_constant() {
        let mut s = fixtures::standard(0.2);
        s.initial.jumps.clear();
        let run = godunov(&s, Mesh::new(-2.0, 3.0, 50).unwrap(), 0.45, 0.5).unwrap();
        assert!(run.steps > 0);
        assert!(run.p.iter().all(|&p| (p - 1.0).abs() < 1e-13));
        assert!(run.v.iter().all(|&v| v.abs() < 1e-13));
    }
}
