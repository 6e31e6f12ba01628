//! Evaluable wave profiles u(t, x).

use rayon::prelude::*;

use crate::error::Result;

/// A scalar field u(t, x) that can be evaluated pointwise.
///
/// Implementors must be callable from several threads at once.
pub trait Solution: Send + Sync {
    fn eval(&self, t: f64, x: f64) -> Result<f64>;

    /// Sample at fixed time on a set of points.
    fn sample(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        xs.par_iter().map(|&x| self.eval(t, x)).collect()
    }
}

/// A solution whose low-order spatial derivatives are available exactly.
pub trait Differentiable: Solution {
    /// ∂ⁿu/∂xⁿ for `order` in 0..=2.
    fn derivative(&self, t: f64, x: f64, order: u32) -> Result<f64>;

    fn sample_derivative(&self, t: f64, xs: &[f64], order: u32) -> Result<Vec<f64>> {
        xs.par_iter().map(|&x| self.derivative(t, x, order)).collect()
    }
}

impl<S: Solution + ?Sized> Solution for &S {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        (**self).eval(t, x)
    }
    fn sample(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        (**self).sample(t, xs)
    }
}

impl<S: Differentiable + ?Sized> Differentiable for &S {
    fn derivative(&self, t: f64, x: f64, order: u32) -> Result<f64> {
        (**self).derivative(t, x, order)
    }
    fn sample_derivative(&self, t: f64, xs: &[f64], order: u32) -> Result<Vec<f64>> {
        (**self).sample_derivative(t, xs, order)
    }
}

/// Adapts a closure `(t, x) -> Result<f64>` into a [`Solution`].
pub struct FnSolution<F>(pub F);

impl<F> Solution for FnSolution<F>
where
    F: Fn(f64, f64) -> Result<f64> + Send + Sync,
{
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        (self.0)(t, x)
    }
}
