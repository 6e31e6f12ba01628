//! The universal blow-up profile.
//!
//! For t ≤ 0 the profile w(t, x) is the unique real root of the depressed cubic
//!
//! ```text
//! x = w t − c w³,   c > 0.
//! ```
//!
//! Because w ↦ w t − c w³ is strictly decreasing for t ≤ 0 the root is unique
//! and the profile is defined for every real x. At t = 0 it reduces to the cusp
//! w = −sign(x) (|x|/c)^{1/3}.

use crate::error::{Error, Result};
use crate::solution::{Differentiable, Solution};

/// Relative residual accepted after the Newton polish.
pub const TOL_RESIDUAL: f64 = 1e-12;
/// Iteration cap for the Newton polish.
pub const MAX_POLISH: usize = 50;

/// The self-similar profile with cusp coefficient `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalProfile {
    c: f64,
}

impl UniversalProfile {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("cusp coefficient must be positive, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Residual x − (w t − c w³) of a candidate root.
    pub fn residual(&self, t: f64, x: f64, w: f64) -> f64 {
        x - (w * t - self.c * w * w * w)
    }

    /// Evaluate w(t, x).
    pub fn eval_w(&self, t: f64, x: f64) -> Result<f64> {
        if t > 0.0 {
            return Err(Error::Domain(format!(
                "profile is defined for t <= 0 only, got t = {t}"
            )));
        }
        if !t.is_finite() || !x.is_finite() {
            return Err(Error::Domain(format!("non-finite argument (t = {t}, x = {x})")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let c = self.c;
        // The root of w³ + p w + q = 0 with p = -t/c >= 0 and q = x/c.
        let w0 = if t.abs().powi(3) < 1e-30 * c * c * x * x {
            -(x / c).cbrt()
        } else {
            let p = -t / c;
            let q = x / c;
            let s = (p / 3.0).sqrt();
            let z = 1.5 * q / (p * s);
            -2.0 * s * (z.asinh() / 3.0).sinh()
        };
        self.polish(t, x, w0)
    }

    fn polish(&self, t: f64, x: f64, mut w: f64) -> Result<f64> {
        let tol = TOL_RESIDUAL * x.abs().max(1.0);
        for _ in 0..MAX_POLISH {
            let r = self.residual(t, x, w);
            if r.abs() <= tol {
                return Ok(w);
            }
            // d/dw of the residual is 3 c w² − t, strictly positive away from the cusp point.
            let slope = 3.0 * self.c * w * w - t;
            if slope <= 0.0 || !slope.is_finite() {
                break;
            }
            let next = w - r / slope;
            if next == w {
                break;
            }
            w = next;
        }
        let r = self.residual(t, x, w);
        if r.abs() <= tol {
            Ok(w)
        } else {
            Err(Error::Convergence(format!(
                "cubic root at (t = {t}, x = {x}) left residual {r:e}"
            )))
        }
    }

    /// The same profile family member with coefficient `c_new`.
    ///
    /// With κ = c / c_new the two are related by
    /// `√κ · w_c(t, x/√κ) = w_{c_new}(t, x)`.
    pub fn rescale_profile(&self, c_new: f64) -> Result<Self> {
        Self::new(c_new)
    }

    /// ∂w/∂x at x = 0, which is 1/t.
    pub fn w_slope_at_origin(&self, t: f64) -> Result<f64> {
        if !(t < 0.0) {
            return Err(Error::Domain(format!(
                "slope at the origin diverges at t = 0 (requires t < 0, got {t})"
            )));
        }
        Ok(1.0 / t)
    }

    /// ∂w/∂x = 1 / (t − 3 c w²).
    pub fn w_x(&self, t: f64, x: f64) -> Result<f64> {
        let w = self.eval_w(t, x)?;
        self.slope_from_root(t, w)
    }

    /// ∂²w/∂x² = 6 c w (∂w/∂x)³.
    pub fn w_xx(&self, t: f64, x: f64) -> Result<f64> {
        let w = self.eval_w(t, x)?;
        let wx = self.slope_from_root(t, w)?;
        Ok(6.0 * self.c * w * wx * wx * wx)
    }

    fn slope_from_root(&self, t: f64, w: f64) -> Result<f64> {
        let d = t - 3.0 * self.c * w * w;
        if d == 0.0 {
            return Err(Error::Domain("profile slope is infinite at the cusp".into()));
        }
        Ok(1.0 / d)
    }
}

impl Solution for UniversalProfile {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        self.eval_w(t, x)
    }
}

impl Differentiable for UniversalProfile {
    fn derivative(&self, t: f64, x: f64, order: u32) -> Result<f64> {
        match order {
            0 => self.eval_w(t, x),
            1 => self.w_x(t, x),
            2 => self.w_xx(t, x),
            _ => Err(Error::Domain(format!(
                "exact derivative of order {order} not available"
            ))),
        }
    }
}
