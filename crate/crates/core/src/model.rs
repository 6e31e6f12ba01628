//! Initial data and flux functions.
//!
//! [`InitialData`] is a smooth profile with derivatives up to third order;
//! [`FluxModel`] is a flux f with derivatives and a local inverse of f′.
//! Analytic derivatives are used where available, otherwise fourth-order
//! central differences.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Finite-difference steps for derivative orders 1, 2 and 3.
pub const FD_STEPS: [f64; 3] = [1e-5, 1e-4, 1e-3];

/// Fourth-order central difference for the first derivative.
pub fn central_d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central difference for the second derivative.
pub fn central_d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Fourth-order central difference for the third derivative.
pub fn central_d3(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h) - 8.0 * f(x - 2.0 * h) + f(x - 3.0 * h))
        / (8.0 * h * h * h)
}

/// A smooth initial profile u₀ and its first three derivatives.
pub trait InitialData: Send + Sync {
    fn value(&self, x: f64) -> f64;

    fn d1(&self, x: f64) -> f64 {
        central_d1(|y| self.value(y), x, FD_STEPS[0])
    }

    fn d2(&self, x: f64) -> f64 {
        central_d2(|y| self.value(y), x, FD_STEPS[1])
    }

    fn d3(&self, x: f64) -> f64 {
        central_d3(|y| self.value(y), x, FD_STEPS[2])
    }
}

/// A flux function f(U) with derivatives and a local inverse of f′.
pub trait FluxModel: Send + Sync {
    fn f(&self, u: f64) -> f64;

    /// Characteristic speed f′(U).
    fn df(&self, u: f64) -> f64;

    fn d2f(&self, u: f64) -> f64;

    fn d3f(&self, u: f64) -> f64;

    /// f⁗, needed for the third derivative of f′∘U₀.
    fn d4f(&self, u: f64) -> f64 {
        central_d1(|v| self.d3f(v), u, FD_STEPS[0])
    }

    /// The state U with f′(U) = `speed` on the branch through the origin.
    fn invert_df(&self, speed: f64) -> Result<f64>;
}

macro_rules! forward_initial_data {
    ($($ptr:ty),*) => {$(
        impl<D: InitialData + ?Sized> InitialData for $ptr {
            fn value(&self, x: f64) -> f64 { (**self).value(x) }
            fn d1(&self, x: f64) -> f64 { (**self).d1(x) }
            fn d2(&self, x: f64) -> f64 { (**self).d2(x) }
            fn d3(&self, x: f64) -> f64 { (**self).d3(x) }
        }
    )*};
}

macro_rules! forward_flux {
    ($($ptr:ty),*) => {$(
        impl<F: FluxModel + ?Sized> FluxModel for $ptr {
            fn f(&self, u: f64) -> f64 { (**self).f(u) }
            fn df(&self, u: f64) -> f64 { (**self).df(u) }
            fn d2f(&self, u: f64) -> f64 { (**self).d2f(u) }
            fn d3f(&self, u: f64) -> f64 { (**self).d3f(u) }
            fn d4f(&self, u: f64) -> f64 { (**self).d4f(u) }
            fn invert_df(&self, speed: f64) -> Result<f64> { (**self).invert_df(speed) }
        }
    )*};
}

forward_initial_data!(&D, Box<D>, Arc<D>);
forward_flux!(&F, Box<F>, Arc<F>);

/// u₀(x) = −amplitude · erf(x). With amplitude √π/2 the slope at the origin is −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfData {
    pub amplitude: f64,
}

impl ErfData {
    pub fn new(amplitude: f64) -> Self {
        Self { amplitude }
    }
}

impl Default for ErfData {
    fn default() -> Self {
        Self {
            amplitude: PI.sqrt() / 2.0,
        }
    }
}

impl InitialData for ErfData {
    fn value(&self, x: f64) -> f64 {
        -self.amplitude * libm::erf(x)
    }
    fn d1(&self, x: f64) -> f64 {
        -self.amplitude * 2.0 / PI.sqrt() * (-x * x).exp()
    }
    fn d2(&self, x: f64) -> f64 {
        self.amplitude * 4.0 / PI.sqrt() * x * (-x * x).exp()
    }
    fn d3(&self, x: f64) -> f64 {
        self.amplitude * 2.0 / PI.sqrt() * (2.0 - 4.0 * x * x) * (-x * x).exp()
    }
}

/// Polynomial data Σ aᵢ xⁱ, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialData {
    coeffs: Vec<f64>,
}

impl PolynomialData {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn derivative_value(&self, order: usize, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate().skip(order).rev() {
            let falling: f64 = (0..order).map(|j| (i - j) as f64).product();
            acc = acc * x + a * falling;
        }
        acc
    }
}

impl InitialData for PolynomialData {
    fn value(&self, x: f64) -> f64 {
        self.derivative_value(0, x)
    }
    fn d1(&self, x: f64) -> f64 {
        self.derivative_value(1, x)
    }
    fn d2(&self, x: f64) -> f64 {
        self.derivative_value(2, x)
    }
    fn d3(&self, x: f64) -> f64 {
        self.derivative_value(3, x)
    }
}

/// Arbitrary data from a closure; derivatives by finite differences.
#[derive(Clone, Copy)]
pub struct FnData<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> InitialData for FnData<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// U₀(x + x_shift) − u_shift.
#[derive(Debug, Clone)]
pub struct ShiftedData<D> {
    pub inner: D,
    pub x_shift: f64,
    pub u_shift: f64,
}

impl<D: InitialData> InitialData for ShiftedData<D> {
    fn value(&self, x: f64) -> f64 {
        self.inner.value(x + self.x_shift) - self.u_shift
    }
    fn d1(&self, x: f64) -> f64 {
        self.inner.d1(x + self.x_shift)
    }
    fn d2(&self, x: f64) -> f64 {
        self.inner.d2(x + self.x_shift)
    }
    fn d3(&self, x: f64) -> f64 {
        self.inner.d3(x + self.x_shift)
    }
}

/// The characteristic speed profile u₀ = f′∘U₀, with chain-rule derivatives.
#[derive(Debug, Clone)]
pub struct SpeedData<F, D> {
    pub flux: F,
    pub data: D,
}

impl<F: FluxModel, D: InitialData> InitialData for SpeedData<F, D> {
    fn value(&self, x: f64) -> f64 {
        self.flux.df(self.data.value(x))
    }
    fn d1(&self, x: f64) -> f64 {
        self.flux.d2f(self.data.value(x)) * self.data.d1(x)
    }
    fn d2(&self, x: f64) -> f64 {
        let u = self.data.value(x);
        let a = self.data.d1(x);
        self.flux.d3f(u) * a * a + self.flux.d2f(u) * self.data.d2(x)
    }
    fn d3(&self, x: f64) -> f64 {
        let u = self.data.value(x);
        let a = self.data.d1(x);
        let b = self.data.d2(x);
        self.flux.d4f(u) * a * a * a + 3.0 * self.flux.d3f(u) * a * b + self.flux.d2f(u) * self.data.d3(x)
    }
}

/// The Burgers flux U²/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BurgersFlux;

impl FluxModel for BurgersFlux {
    fn f(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn df(&self, u: f64) -> f64 {
        u
    }
    fn d2f(&self, _u: f64) -> f64 {
        1.0
    }
    fn d3f(&self, _u: f64) -> f64 {
        0.0
    }
    fn d4f(&self, _u: f64) -> f64 {
        0.0
    }
    fn invert_df(&self, speed: f64) -> Result<f64> {
        Ok(speed)
    }
}

/// Polynomial flux Σ bᵢ Uⁱ, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFlux {
    poly: PolynomialData,
}

impl PolynomialFlux {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self {
            poly: PolynomialData::new(coeffs),
        }
    }
}

impl FluxModel for PolynomialFlux {
    fn f(&self, u: f64) -> f64 {
        self.poly.value(u)
    }
    fn df(&self, u: f64) -> f64 {
        self.poly.d1(u)
    }
    fn d2f(&self, u: f64) -> f64 {
        self.poly.d2(u)
    }
    fn d3f(&self, u: f64) -> f64 {
        self.poly.d3(u)
    }
    fn d4f(&self, u: f64) -> f64 {
        self.poly.derivative_value(4, u)
    }
    fn invert_df(&self, speed: f64) -> Result<f64> {
        invert_by_newton(self, speed)
    }
}

/// Newton iteration for f′(U) = speed starting from U = 0.
pub fn invert_by_newton<F: FluxModel + ?Sized>(flux: &F, speed: f64) -> Result<f64> {
    let mut u = 0.0;
    for _ in 0..100 {
        let r = flux.df(u) - speed;
        if r.abs() <= 1e-14 * speed.abs().max(1.0) {
            return Ok(u);
        }
        let s = flux.d2f(u);
        if s == 0.0 || !s.is_finite() {
            break;
        }
        u -= r / s;
    }
    Err(Error::Convergence(format!("no local inverse of f' for speed {speed}")))
}

/// State and Galilean shift of a flux: f̃′(U) = f′(U + u_shift) − v_shift.
///
/// f̃(U) = f(U + u_shift) − f(u_shift) − v_shift U.
#[derive(Debug, Clone)]
pub struct ShiftedFlux<F> {
    pub inner: F,
    pub u_shift: f64,
    pub v_shift: f64,
}

impl<F: FluxModel> FluxModel for ShiftedFlux<F> {
    fn f(&self, u: f64) -> f64 {
        self.inner.f(u + self.u_shift) - self.inner.f(self.u_shift) - self.v_shift * u
    }
    fn df(&self, u: f64) -> f64 {
        self.inner.df(u + self.u_shift) - self.v_shift
    }
    fn d2f(&self, u: f64) -> f64 {
        self.inner.d2f(u + self.u_shift)
    }
    fn d3f(&self, u: f64) -> f64 {
        self.inner.d3f(u + self.u_shift)
    }
    fn d4f(&self, u: f64) -> f64 {
        self.inner.d4f(u + self.u_shift)
    }
    fn invert_df(&self, speed: f64) -> Result<f64> {
        invert_by_newton(self, speed)
    }
}
