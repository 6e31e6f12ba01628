//! Bracketed one-dimensional root finding for monotone functions.

use crate::error::{Error, Result};

/// Outcome of [`safeguarded_newton`].
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Find a sign change of `f` starting at `start`, assuming `f` is increasing.
///
/// The search moves downhill from `start` with doubling steps and never leaves
/// `[lo, hi]`. Returns `(a, b)` with `f(a) <= 0 <= f(b)`.
pub fn bracket_increasing(f: impl Fn(f64) -> f64, start: f64, first_step: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let start = start.clamp(lo, hi);
    let f0 = f(start);
    if f0 == 0.0 {
        return Some((start, start));
    }
    let mut step = first_step.abs().max(1e-12);
    let mut near = start;
    loop {
        let far = if f0 > 0.0 {
            (near - step).max(lo)
        } else {
            (near + step).min(hi)
        };
        let ff = f(far);
        if f0 > 0.0 && ff <= 0.0 {
            return Some((far, near));
        }
        if f0 < 0.0 && ff >= 0.0 {
            return Some((near, far));
        }
        if far == lo || far == hi {
            return None;
        }
        near = far;
        step *= 2.0;
    }
}

/// Root of an increasing function inside `[a, b]` with `f(a) <= 0 <= f(b)`.
///
/// Newton steps are taken while they stay inside the bracket and shrink it fast
/// enough; otherwise the step is a bisection. Stops once the bracket is narrower
/// than `width_tol` or the residual drops to `residual_tol`.
pub fn safeguarded_newton(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    width_tol: f64,
    residual_tol: f64,
) -> Result<Root> {
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    let mut last_step = b - a;
    for it in 0..200 {
        if fx.abs() <= residual_tol || b - a <= width_tol {
            return Ok(Root {
                x,
                residual: fx,
                iterations: it,
            });
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let (next, step) = if d > 0.0 && newton > a && newton < b && (fx / d).abs() < 0.5 * last_step {
            (newton, (fx / d).abs())
        } else {
            (0.5 * (a + b), 0.5 * (b - a))
        };
        if next == x {
            return Ok(Root {
                x,
                residual: fx,
                iterations: it,
            });
        }
        x = next;
        last_step = step;
        fx = f(x);
    }
    if fx.abs() <= residual_tol {
        Ok(Root {
            x,
            residual: fx,
            iterations: 200,
        })
    } else {
        Err(Error::Convergence(format!(
            "bracketed Newton stalled at x = {x} with residual {fx:e}"
        )))
    }
}
