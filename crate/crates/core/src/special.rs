//! Airy function Ai on the non-negative axis.

use std::f64::consts::PI;

/// Ai(0)
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// −Ai′(0)
pub const AIP0: f64 = 0.258_819_403_792_806_8;

/// Below this argument the Maclaurin series is used.
const SERIES_LIMIT: f64 = 1.5;

/// Ai(z) for z ≥ 0. Returns NaN for negative or NaN input.
pub fn airy_ai(z: f64) -> f64 {
    if !(z >= 0.0) {
        return f64::NAN;
    }
    if z <= SERIES_LIMIT {
        airy_ai_series(z)
    } else {
        airy_ai_bessel(z)
    }
}

/// Maclaurin series Ai(z) = Ai(0) f(z) + Ai′(0) g(z).
pub fn airy_ai_series(z: f64) -> f64 {
    let z3 = z * z * z;
    let mut f_term = 1.0;
    let mut g_term = z;
    let mut f = f_term;
    let mut g = g_term;
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        f_term *= z3 / ((k3 + 2.0) * (k3 + 3.0));
        g_term *= z3 / ((k3 + 3.0) * (k3 + 4.0));
        f += f_term;
        g += g_term;
        if f_term.abs() < 1e-18 * f.abs() && g_term.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    AI0 * f - AIP0 * g
}

/// Ai(z) = (1/π) √(z/3) K_{1/3}(ζ), ζ = (2/3) z^{3/2}, with
/// K_{1/3}(ζ) = ∫₀^∞ exp(−ζ cosh s) cosh(s/3) ds by the trapezoid rule.
pub fn airy_ai_bessel(z: f64) -> f64 {
    if z == 0.0 {
        return AI0;
    }
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // Work with exp(-zeta (cosh s - 1)) to keep the integrand O(1).
    let h: f64 = 0.05;
    let mut sum = 0.5;
    let mut s = h;
    loop {
        let term = (-zeta * (s.cosh() - 1.0)).exp() * (s / 3.0).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        s += h;
    }
    (z / 3.0).sqrt() / PI * (-zeta).exp() * sum * h
}
