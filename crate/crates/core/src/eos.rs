//! Pressure laws in the `(p, v)` formulation.
//!
//! Both phases are described through the inverse pressure law `T(p)`, the
//! specific volume at pressure `p`. The gas uses a gamma law directly. The
//! liquid uses the one-parameter family `T_κ(p) = T(Π_κ(p))` with
//! `Π_κ(p) = p̄ + κ²(p − p̄)`, so that `T_κ(p̄) = τ̄` for every κ and the
//! compressibility `T_κ'` vanishes as κ → 0.
//!
//! Differences of specific volumes are evaluated through `ln_1p`/`exp_m1`
//! so that increments of size κ²·Δp keep full relative precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Pressures at or below this value are treated as vacuum.
pub const P_MIN: f64 = 1e-9;

/// `P(τ) = k τ^(−γ)`, with inverse `T(p) = (k/p)^(1/γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLaw {
    pub k: f64,
    pub gamma: f64,
}

impl GammaLaw {
    pub fn new(k: f64, gamma: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) || !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InadmissibleScenario(format!(
                "gamma law needs k > 0 and gamma >= 1 (got k = {k}, gamma = {gamma})"
            )));
        }
        Ok(Self { k, gamma })
    }

    fn check(&self, p: f64) -> Result<()> {
        if p > P_MIN && p.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain { p })
        }
    }

    pub fn pressure(&self, tau: f64) -> f64 {
        self.k * tau.powf(-self.gamma)
    }

    pub fn tau(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        Ok(self.tau_unchecked(p))
    }

    fn tau_unchecked(&self, p: f64) -> f64 {
        (self.k / p).powf(1.0 / self.gamma)
    }

    /// `T'(p) = −T(p) / (γ p)`.
    pub fn dtau(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        Ok(-self.tau_unchecked(p) / (self.gamma * p))
    }

    /// `T(q + d) − T(q)` without cancellation.
    pub fn tau_increment(&self, q: f64, d: f64) -> Result<f64> {
        self.check(q)?;
        self.check(q + d)?;
        let tq = self.tau_unchecked(q);
        Ok(tq * (-(d / q).ln_1p() / self.gamma).exp_m1())
    }

    /// `√(−T'(p))`.
    pub fn root_slope(&self, p: f64) -> Result<f64> {
        Ok((-self.dtau(p)?).sqrt())
    }

    /// `∫_x^{x+d} √(−T'(s)) ds`, in closed form.
    pub fn root_slope_integral(&self, x: f64, d: f64) -> Result<f64> {
        self.check(x)?;
        self.check(x + d)?;
        let scale = (self.k.powf(1.0 / self.gamma) / self.gamma).sqrt();
        let log_ratio = (d / x).ln_1p();
        if self.gamma == 1.0 {
            return Ok(scale * log_ratio);
        }
        // antiderivative s^a / a with a = (γ − 1) / (2γ)
        let a = (self.gamma - 1.0) / (2.0 * self.gamma);
        Ok(scale / a * x.powf(a) * (a * log_ratio).exp_m1())
    }

    /// The kernel `F(x, y)`: mean of `√(−T')` on `[x, y]` when `x < y`,
    /// `√(−T'(x))` on the diagonal, root of the mean of `−T'` when `x > y`.
    pub fn f_kernel(&self, x: f64, y: f64) -> Result<f64> {
        self.f_kernel_delta(x, y - x)
    }

    /// `F(x, x + d)`, with the offset passed exactly.
    pub fn f_kernel_delta(&self, x: f64, d: f64) -> Result<f64> {
        if d == 0.0 {
            self.root_slope(x)
        } else if d > 0.0 {
            Ok(self.root_slope_integral(x, d)? / d)
        } else {
            Ok((-self.tau_increment(x, d)? / d).sqrt())
        }
    }

    /// Same kernel with the `x < y` branch integrated numerically.
    pub fn f_kernel_quadrature(&self, x: f64, y: f64) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        if x < y {
            let root = |theta: f64| {
                let s = theta * x + (1.0 - theta) * y;
                (self.tau_unchecked(s) / (self.gamma * s)).sqrt()
            };
            Ok(quadrature::integrate(root, 0.0, 1.0, 1e-13))
        } else {
            self.f_kernel(x, y)
        }
    }
}

/// The κ-family of liquid laws built on a fixed base law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiquidEos {
    pub base: GammaLaw,
    pub p_bar: f64,
    pub kappa: f64,
    pub tau_bar: f64,
}

impl LiquidEos {
    pub fn new(base: GammaLaw, p_bar: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::InadmissibleScenario(format!(
                "kappa must lie in ]0, 1], got {kappa}"
            )));
        }
        let tau_bar = base.tau(p_bar)?;
        Ok(Self {
            base,
            p_bar,
            kappa,
            tau_bar,
        })
    }

    /// `Π_κ(p) = p̄ + κ²(p − p̄)`.
    pub fn transform(&self, p: f64) -> f64 {
        self.p_bar + self.kappa * self.kappa * (p - self.p_bar)
    }

    /// Checks that every pressure in `[lo, hi]` maps into the base domain.
    pub fn check_box(&self, lo: f64, hi: f64) -> Result<()> {
        for p in [lo, hi] {
            if !(p > P_MIN) || !(self.transform(p) > P_MIN) {
                return Err(Error::Domain { p });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Medium {
    Gas(GammaLaw),
    Liquid(LiquidEos),
}

impl Medium {
    pub fn kappa(&self) -> f64 {
        match self {
            Medium::Gas(_) => 1.0,
            Medium::Liquid(l) => l.kappa,
        }
    }

    pub fn base(&self) -> &GammaLaw {
        match self {
            Medium::Gas(g) => g,
            Medium::Liquid(l) => &l.base,
        }
    }

    pub fn transform(&self, p: f64) -> f64 {
        match self {
            Medium::Gas(_) => p,
            Medium::Liquid(l) => l.transform(p),
        }
    }

    fn check(&self, p: f64) -> Result<()> {
        if p > P_MIN && p.is_finite() && self.transform(p) > P_MIN {
            Ok(())
        } else {
            Err(Error::Domain { p })
        }
    }

    pub fn tau_of_p(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        self.base().tau(self.transform(p))
    }

    /// Inverse of [`Medium::tau_of_p`].
    pub fn p_of_tau(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain { p: f64::NAN });
        }
        let x = self.base().pressure(tau);
        let p = match self {
            Medium::Gas(_) => x,
            Medium::Liquid(l) => l.p_bar + (x - l.p_bar) / (l.kappa * l.kappa),
        };
        self.check(p)?;
        Ok(p)
    }

    pub fn dtau_dp(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        let k = self.kappa();
        Ok(k * k * self.base().dtau(self.transform(p))?)
    }

    /// `T_m(q + d) − T_m(q)` without cancellation.
    pub fn tau_increment(&self, q: f64, d: f64) -> Result<f64> {
        self.check(q)?;
        self.check(q + d)?;
        let k = self.kappa();
        self.base().tau_increment(self.transform(q), k * k * d)
    }

    /// Specific volume minus its value at `p_ref`, i.e. `T(p) − T(p_ref)`.
    pub fn tau_deviation(&self, p: f64, p_ref: f64) -> Result<f64> {
        self.tau_increment(p_ref, p - p_ref)
    }

    /// The kernel `F` of the underlying base law; arguments are already
    /// transformed for the liquid, so the value does not depend on κ.
    pub fn f_kernel(&self, x: f64, y: f64) -> Result<f64> {
        self.base().f_kernel(x, y)
    }

    /// `√(−T_m'(p))`.
    pub fn root_slope(&self, p: f64) -> Result<f64> {
        Ok((-self.dtau_dp(p)?).sqrt())
    }

    /// `∫_q^p √(−T_m'(ξ)) dξ` in closed form.
    pub fn root_slope_integral(&self, q: f64, p: f64) -> Result<f64> {
        self.check(q)?;
        self.check(p)?;
        let k = self.kappa();
        Ok(self.base().root_slope_integral(self.transform(q), k * k * (p - q))? / k)
    }
}
