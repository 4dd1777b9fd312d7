//! Lax curves, wave speeds and the pressure-difference wave parametrization.
//!
//! Along a curve the wave size is `σ = p_right − p_left`. With the kernel
//! `F` of [`crate::eos`] the curves read
//!
//! ```text
//! V₁(p; p₀, v₀) = v₀ − κ (p − p₀) F(Π(p), Π(p₀))
//! V₂(p; p₀, v₀) = v₀ + κ (p − p₀) F(Π(p₀), Π(p))
//! ```
//!
//! Both are written through the single increasing map [`lax_drop`],
//! `V₁(p; a) = a.v − drop(p, a.p)` and `V₂(p; a) = a.v − drop(a.p, p)`.

use serde::{Deserialize, Serialize};

use crate::eos::{Medium, P_MIN};
use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub p: f64,
    pub v: f64,
}

impl State {
    pub const fn new(p: f64, v: f64) -> Self {
        Self { p, v }
    }

    pub fn is_admissible(&self) -> bool {
        self.p > P_MIN && self.p.is_finite() && self.v.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WaveFamily {
    One,
    Two,
}

impl WaveFamily {
    pub fn index(self) -> u8 {
        match self {
            WaveFamily::One => 1,
            WaveFamily::Two => 2,
        }
    }

    /// Sign of the characteristic speeds of the family.
    pub fn direction(self) -> f64 {
        match self {
            WaveFamily::One => -1.0,
            WaveFamily::Two => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// Shock or rarefaction from the sign of `σ`.
pub fn classify(fam: WaveFamily, sigma: f64) -> Result<WaveKind> {
    if sigma == 0.0 || sigma.is_nan() {
        return Err(Error::ZeroSizeWave);
    }
    Ok(match (fam, sigma > 0.0) {
        (WaveFamily::One, true) | (WaveFamily::Two, false) => WaveKind::Shock,
        _ => WaveKind::Rarefaction,
    })
}

/// `κ (p − q) F(Π(p), Π(q))`; strictly increasing in `p`, zero at `p = q`.
pub fn lax_drop(m: &Medium, p: f64, q: f64) -> Result<f64> {
    let k = m.kappa();
    let x = m.transform(p);
    m.tau_of_p(p)?;
    m.tau_of_p(q)?;
    Ok(k * (p - q) * m.base().f_kernel_delta(x, k * k * (q - p))?)
}

/// Derivative of [`lax_drop`] with respect to its first argument.
pub fn lax_drop_dp(m: &Medium, p: f64, q: f64) -> Result<f64> {
    if p <= q {
        return m.root_slope(p);
    }
    let jump = m.tau_increment(q, p - q)?;
    let drop = (-jump * (p - q)).sqrt();
    if drop == 0.0 {
        return m.root_slope(p);
    }
    Ok((-m.dtau_dp(p)? * (p - q) - jump) / (2.0 * drop))
}

/// Velocity on the `fam` Lax curve through `anchor` at pressure `p`.
pub fn lax_velocity(m: &Medium, fam: WaveFamily, p: f64, anchor: State) -> Result<f64> {
    Ok(match fam {
        WaveFamily::One => anchor.v - lax_drop(m, p, anchor.p)?,
        WaveFamily::Two => anchor.v - lax_drop(m, anchor.p, p)?,
    })
}

/// How the rarefaction branch integral is evaluated by [`lax_velocity_piecewise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchIntegral {
    ClosedForm,
    Quadrature,
}

/// Direct branchwise evaluation of the Lax curves: integral of `√(−T')`
/// on the rarefaction side and `√(−ΔT Δp)` on the shock side.
pub fn lax_velocity_piecewise(
    m: &Medium,
    fam: WaveFamily,
    p: f64,
    anchor: State,
    rule: BranchIntegral,
) -> Result<f64> {
    let p0 = anchor.p;
    let integral = |a: f64, b: f64| -> Result<f64> {
        match rule {
            BranchIntegral::ClosedForm => m.root_slope_integral(a, b),
            BranchIntegral::Quadrature => {
                m.tau_of_p(a)?;
                m.tau_of_p(b)?;
                Ok(quadrature::integrate(
                    |xi| (-m.dtau_dp(xi).unwrap_or(f64::NAN)).sqrt(),
                    a,
                    b,
                    1e-13,
                ))
            }
        }
    };
    let shock = || -> Result<f64> {
        let jump = m.tau_of_p(p)? - m.tau_of_p(p0)?;
        Ok((-jump * (p - p0)).max(0.0).sqrt())
    };
    Ok(match fam {
        WaveFamily::One if p < p0 => anchor.v - integral(p0, p)?,
        WaveFamily::One => anchor.v - shock()?,
        WaveFamily::Two if p < p0 => anchor.v - shock()?,
        WaveFamily::Two => anchor.v + integral(p0, p)?,
    })
}

/// `λ = ∓√(−1/T_m'(p))`.
pub fn char_speed(m: &Medium, fam: WaveFamily, p: f64) -> Result<f64> {
    Ok(fam.direction() * (-1.0 / m.dtau_dp(p)?).sqrt())
}

/// Rankine–Hugoniot speed `∓√(−Δp/Δτ)` of a shock from `p_left` to `p_right`.
pub fn shock_speed(m: &Medium, fam: WaveFamily, p_left: f64, p_right: f64) -> Result<f64> {
    let sigma = p_right - p_left;
    if classify(fam, sigma)? != WaveKind::Shock {
        return Err(Error::NotAShock {
            family: fam.index(),
            sigma,
        });
    }
    let jump = m.tau_increment(p_left, sigma)?;
    Ok(fam.direction() * (-sigma / jump).sqrt())
}

/// Lax entropy inequalities `λ(left) ≥ s ≥ λ(right)` up to a relative slack.
pub fn satisfies_lax(m: &Medium, fam: WaveFamily, left: f64, right: f64, s: f64) -> Result<bool> {
    let ll = char_speed(m, fam, left)?;
    let lr = char_speed(m, fam, right)?;
    let slack = 1e-12 * s.abs();
    Ok(ll + slack >= s && s + slack >= lr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::{GammaLaw, LiquidEos};

    fn unit() -> GammaLaw {
        GammaLaw::new(1.0, 1.0).unwrap()
    }

    fn gas() -> Medium {
        Medium::Gas(unit())
    }

    fn liquid(kappa: f64) -> Medium {
        Medium::Liquid(LiquidEos::new(unit(), 1.0, kappa).unwrap())
    }

    #[test]
    fn curve_passes_through_anchor() {
        let a = State::new(1.3, -0.2);
        for m in [gas(), liquid(0.1)] {
            for fam in [WaveFamily::One, WaveFamily::Two] {
                assert_eq!(lax_velocity(&m, fam, a.p, a).unwrap(), a.v);
            }
        }
    }

    #[test]
    fn gas_one_shock_value() {
        let v = lax_velocity(&gas(), WaveFamily::One, 4.0, State::new(1.0, 0.0)).unwrap();
        assert!((v + 1.5).abs() < 1e-14);
    }

    #[test]
    fn liquid_two_rarefaction_value() {
        let v = lax_velocity(&liquid(0.1), WaveFamily::Two, 2.0, State::new(1.0, 0.0)).unwrap();
        let expected = 0.1 * (1.01f64).ln() / 0.01;
        assert!((v - expected).abs() < 1e-14);
        assert!((v - 0.099_503_3).abs() < 1e-7);
    }

    #[test]
    fn char_speed_examples() {
        assert!((char_speed(&gas(), WaveFamily::Two, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((char_speed(&liquid(0.1), WaveFamily::Two, 1.0).unwrap() - 10.0).abs() < 1e-12);
        for p in [0.5, 1.0, 3.0] {
            let m = liquid(0.3);
            assert_eq!(
                char_speed(&m, WaveFamily::One, p).unwrap(),
                -char_speed(&m, WaveFamily::Two, p).unwrap()
            );
        }
    }

    #[test]
    fn shock_speed_examples() {
        let s = shock_speed(&gas(), WaveFamily::One, 1.0, 4.0).unwrap();
        assert!((s + 2.0).abs() < 1e-14);
        let s = shock_speed(&liquid(0.1), WaveFamily::Two, 2.0, 1.0).unwrap();
        let expected = (1.0f64 / (1.0 - 1.0 / 1.01)).sqrt();
        assert!((s - expected).abs() < 1e-10);
        assert!((s - 10.0499).abs() < 1e-4);
    }

    #[test]
    fn shock_speed_rejects_rarefaction() {
        assert!(matches!(
            shock_speed(&gas(), WaveFamily::One, 2.0, 1.0),
            Err(Error::NotAShock { .. })
        ));
        assert!(matches!(
            shock_speed(&gas(), WaveFamily::One, 1.0, 1.0),
            Err(Error::ZeroSizeWave)
        ));
    }

    #[test]
    fn shock_speed_satisfies_jump_relations() {
        for m in [gas(), liquid(0.2), Medium::Gas(GammaLaw::new(1.0, 1.4).unwrap())] {
            for (fam, pl, pr) in [(WaveFamily::One, 1.0, 1.3), (WaveFamily::Two, 1.2, 0.95)] {
                let s = shock_speed(&m, fam, pl, pr).unwrap();
                let left = State::new(pl, 0.1);
                let vr = lax_velocity(&m, fam, pr, left).unwrap();
                let dtau = m.tau_of_p(pr).unwrap() - m.tau_of_p(pl).unwrap();
                let dv = vr - left.v;
                assert!((s * dtau + dv).abs() <= 1e-10);
                assert!((s * dv - (pr - pl)).abs() <= 1e-10);
                assert!(satisfies_lax(&m, fam, pl, pr, s).unwrap());
                assert!(s * fam.direction() > 0.0);
                // strictly between the characteristic speeds
                let ll = char_speed(&m, fam, pl).unwrap();
                let lr = char_speed(&m, fam, pr).unwrap();
                assert!(ll > s && s > lr);
            }
        }
    }

    #[test]
    fn classify_table() {
        assert_eq!(classify(WaveFamily::One, 0.1).unwrap(), WaveKind::Shock);
        assert_eq!(classify(WaveFamily::One, -0.1).unwrap(), WaveKind::Rarefaction);
        assert_eq!(classify(WaveFamily::Two, 0.1).unwrap(), WaveKind::Rarefaction);
        assert_eq!(classify(WaveFamily::Two, -0.1).unwrap(), WaveKind::Shock);
        assert_eq!(classify(WaveFamily::Two, 0.0), Err(Error::ZeroSizeWave));
    }

    #[test]
    fn drop_derivative_matches_finite_difference() {
        for m in [gas(), liquid(0.1), Medium::Gas(GammaLaw::new(1.0, 1.4).unwrap())] {
            for (p, q) in [(1.1, 1.0), (0.9, 1.0), (1.0, 1.0)] {
                let h = 1e-6;
                let fd = (lax_drop(&m, p + h, q).unwrap() - lax_drop(&m, p - h, q).unwrap()) / (2.0 * h);
                let an = lax_drop_dp(&m, p, q).unwrap();
                assert!((fd - an).abs() <= 1e-7 * an.abs().max(1.0), "{m:?} {p} {q}: {fd} {an}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn representation_matches_branches(
                p in 0.5f64..2.0, p0 in 0.5f64..2.0, v0 in -1.0f64..1.0,
                ki in 0usize..4, two in any::<bool>(),
            ) {
                let kappa = [1.0, 0.5, 0.1, 0.01][ki];
                let fam = if two { WaveFamily::Two } else { WaveFamily::One };
                for m in [Medium::Gas(GammaLaw::new(1.0, 1.4).unwrap()), liquid(kappa)] {
                    let a = lax_velocity(&m, fam, p, State::new(p0, v0)).unwrap();
                    let b = lax_velocity_piecewise(&m, fam, p, State::new(p0, v0), BranchIntegral::Quadrature).unwrap();
                    prop_assert!((a - b).abs() <= 1e-10);
                }
            }

            #[test]
            fn curves_are_monotone(p in 0.5f64..2.0, dp in 1e-4f64..0.5, kappa in 0.01f64..1.0) {
                let a = State::new(1.0, 0.0);
                let m = liquid(kappa);
                let one = |p| lax_velocity(&m, WaveFamily::One, p, a).unwrap();
                let two = |p| lax_velocity(&m, WaveFamily::Two, p, a).unwrap();
                prop_assert!(one(p + dp) < one(p));
                prop_assert!(two(p + dp) > two(p));
            }

            #[test]
            fn liquid_slope_scales_with_kappa(p in 0.5f64..2.0, kappa in 0.01f64..1.0) {
                let a = State::new(1.2, 0.3);
                let m = liquid(kappa);
                let lo = m.transform(p.min(a.p)).min(m.transform(a.p));
                let bound = kappa * (p - a.p).abs() * unit().root_slope(lo).unwrap();
                for fam in [WaveFamily::One, WaveFamily::Two] {
                    let dv = (lax_velocity(&m, fam, p, a).unwrap() - a.v).abs();
                    prop_assert!(dv <= bound * (1.0 + 1e-12));
                }
            }
        }
    }
}
