//! Log-Fourier view of the blow-up.
//!
//! A field at time t = t₀e^{−τ} is sampled on a periodic window [−L, L), tapered,
//! transformed, and its k > 0 amplitudes are kept on ξ = log k. Near blow-up
//! the n-th derivative spectrum travels to the right in ξ with speed 3/2 and
//! grows like e^{(3n/2 − 2)τ}.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fit::{line_fit, LineFit};
use crate::output::{csv, format_number, key_values};
use crate::profile::UniversalProfile;
use crate::solution::Differentiable;
use crate::special::airy_ai;

/// Fraction of the half-width on which the taper is identically one.
pub const TAPER_FLAT: f64 = 0.8;
pub const DEFAULT_HALF_WIDTH: f64 = 50.0;
pub const DEFAULT_POINTS: usize = 1 << 20;
/// Default bound on |field| in the taper zone relative to its maximum.
pub const DEFAULT_EDGE_TOLERANCE: f64 = 1e-6;
/// Regularization of the cusp transform relative to the smallest wavenumber.
pub const EPS_FACTOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
    /// `None` disables the window check.
    pub edge_tolerance: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            points: DEFAULT_POINTS,
            edge_tolerance: Some(DEFAULT_EDGE_TOLERANCE),
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        let g = Self {
            half_width,
            points,
            ..Self::default()
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_edge_tolerance(mut self, tol: Option<f64>) -> Self {
        self.edge_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::Domain(format!(
                "window half-width must be positive, got {}",
                self.half_width
            )));
        }
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(Error::Domain(format!(
                "grid size must be a power of two >= 8, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// x_j = −L + j·dx, j = 0..N.
    pub fn xs(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.points).map(|j| -self.half_width + j as f64 * dx).collect()
    }

    /// Spacing of the wavenumber grid, π/L.
    pub fn dk(&self) -> f64 {
        PI / self.half_width
    }

    /// Positive wavenumbers m·dk for m = 1..N/2 (Nyquist excluded).
    pub fn positive_ks(&self) -> Vec<f64> {
        let dk = self.dk();
        (1..self.points / 2).map(|m| m as f64 * dk).collect()
    }

    /// Smooth window: 1 on |x| ≤ 0.8L, 0 at |x| = L, C^∞ in between.
    pub fn taper(&self, x: f64) -> f64 {
        let flat = TAPER_FLAT * self.half_width;
        let s = (x.abs() - flat) / (self.half_width - flat);
        1.0 - smooth_step(s)
    }
}

/// 0 for s ≤ 0, 1 for s ≥ 1, C^∞ in between.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

fn check_window(grid: &GridSpec, xs: &[f64], values: &[f64]) -> Result<()> {
    let Some(tol) = grid.edge_tolerance else { return Ok(()) };
    let flat = TAPER_FLAT * grid.half_width;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = xs
        .iter()
        .zip(values)
        .filter(|(x, _)| x.abs() > flat)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    if !(edge <= tol * peak) {
        return Err(Error::Window(format!(
            "field reaches {edge:e} in the taper zone (peak {peak:e}); enlarge the window"
        )));
    }
    Ok(())
}

/// Tapered discrete transform Σ f(x_j) taper(x_j) e^{−ik x_j} dx, in FFT bin order
/// (bin m ↔ k = m·dk for m < N/2, (m − N)·dk above).
pub fn windowed_transform(grid: &GridSpec, values: &[f64]) -> Result<Vec<Complex64>> {
    grid.validate()?;
    if values.len() != grid.points {
        return Err(Error::Domain(format!(
            "expected {} samples, got {}",
            grid.points,
            values.len()
        )));
    }
    let xs = grid.xs();
    check_window(grid, &xs, values)?;
    let dx = grid.dx();
    let mut buf: Vec<Complex64> = xs
        .par_iter()
        .zip(values.par_iter())
        .map(|(&x, &v)| Complex64::new(v * grid.taper(x) * dx, 0.0))
        .collect();
    if buf.iter().any(|z| !z.re.is_finite()) {
        return Err(Error::Domain("non-finite sample in the window".into()));
    }
    FftPlanner::new().plan_fft_forward(grid.points).process(&mut buf);
    // x₀ = −L shifts every bin by e^{ikL}
    let dk = grid.dk();
    let n = grid.points as i64;
    buf.par_iter_mut().enumerate().for_each(|(m, z)| {
        let m = m as i64;
        let signed = if m < n / 2 { m } else { m - n };
        *z *= Complex64::from_polar(1.0, signed as f64 * dk * grid.half_width);
    });
    Ok(buf)
}

/// ∫ |taper·f|² dx on the grid.
pub fn windowed_l2(grid: &GridSpec, values: &[f64]) -> f64 {
    grid.xs()
        .iter()
        .zip(values)
        .map(|(&x, v)| (v * grid.taper(x)).powi(2))
        .sum::<f64>()
        * grid.dx()
}

/// (1/2π) Σ |F(k)|² dk over all bins.
pub fn spectral_l2(grid: &GridSpec, spectrum: &[Complex64]) -> f64 {
    spectrum.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dk() / (2.0 * PI)
}

/// |transform of ∂ⁿu/∂xⁿ| on ξ = log k at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFourierField {
    pub tau: f64,
    pub xis: Vec<f64>,
    pub amps: Vec<f64>,
    pub n: u32,
}

impl LogFourierField {
    pub fn new(tau: f64, xis: Vec<f64>, amps: Vec<f64>, n: u32) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be finite, got {tau}")));
        }
        if xis.len() != amps.len() || xis.is_empty() {
            return Err(Error::Domain(
                "xi and amplitude grids must be non-empty and of equal length".into(),
            ));
        }
        if xis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("xi grid must be strictly increasing".into()));
        }
        if amps.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::Domain("amplitudes must be finite and non-negative".into()));
        }
        Ok(Self { tau, xis, amps, n })
    }

    /// e^{mξ}·amps, i.e. the field of order n + m.
    pub fn raised(&self, m: i32) -> LogFourierField {
        let amps = self
            .xis
            .iter()
            .zip(&self.amps)
            .map(|(xi, a)| a * (m as f64 * xi).exp())
            .collect();
        LogFourierField {
            tau: self.tau,
            xis: self.xis.clone(),
            amps,
            n: (self.n as i32 + m).max(0) as u32,
        }
    }

    /// Linear interpolation of the amplitude at ξ (clamped to the grid).
    pub fn amp_at(&self, xi: f64) -> f64 {
        let i = self.xis.partition_point(|&v| v < xi);
        if i == 0 {
            return self.amps[0];
        }
        if i >= self.xis.len() {
            return self.amps[self.amps.len() - 1];
        }
        let (x0, x1) = (self.xis[i - 1], self.xis[i]);
        let w = (xi - x0) / (x1 - x0);
        self.amps[i - 1] * (1.0 - w) + self.amps[i] * w
    }
}

/// τ = −log(t/t₀).
pub fn tau_of(t0: f64, t: f64) -> f64 {
    -(t / t0).ln()
}

/// t = t₀e^{−τ}.
pub fn time_of(t0: f64, tau: f64) -> f64 {
    t0 * (-tau).exp()
}

/// Transform of ∂ⁿu/∂xⁿ at time `t`, with τ measured from `t0`.
///
/// Orders 1 and 2 are sampled exactly; order 0 divides the order-1 spectrum
/// by k (u itself need not decay); orders above 2 multiply the order-2
/// spectrum by k^{n−2}.
pub fn sample_and_transform<S: Differentiable + ?Sized>(
    solution: &S,
    t0: f64,
    t: f64,
    n: u32,
    grid: &GridSpec,
) -> Result<LogFourierField> {
    if !(t0 < 0.0 && t >= t0 && t < 0.0) {
        return Err(Error::Domain(format!(
            "need t0 <= t < 0 with t0 < 0, got t0 = {t0}, t = {t}"
        )));
    }
    grid.validate()?;
    let sampled_order = n.clamp(1, 2);
    let xs = grid.xs();
    let values = solution.sample_derivative(t, &xs, sampled_order)?;
    let spectrum = windowed_transform(grid, &values)?;
    let ks = grid.positive_ks();
    let shift = n as i32 - sampled_order as i32;
    let amps: Vec<f64> = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| spectrum[i + 1].norm() * k.powi(shift))
        .collect();
    let xis = ks.iter().map(|k| k.ln()).collect();
    LogFourierField::new(tau_of(t0, t), xis, amps, n)
}

/// Fields at several τ, computed in parallel.
pub fn transform_series<S: Differentiable + ?Sized>(
    solution: &S,
    t0: f64,
    taus: &[f64],
    n: u32,
    grid: &GridSpec,
) -> Result<Vec<LogFourierField>> {
    taus.par_iter()
        .map(|&tau| sample_and_transform(solution, t0, time_of(t0, tau), n, grid))
        .collect()
}

/// e^{nξ}|w(0, e^ξ)| for the cusp w(0, x) = −sign(x)(|x|/c)^{1/3}, damped by
/// e^{−ε|x|} with ε = 1e−4·e^{ξ_min}.
pub fn universal_spectrum(profile: &UniversalProfile, n: u32, xis: &[f64]) -> Result<Vec<f64>> {
    let xi_min = xis.iter().cloned().fold(f64::INFINITY, f64::min);
    if !xi_min.is_finite() {
        return Err(Error::Domain("empty or non-finite xi grid".into()));
    }
    universal_spectrum_eps(profile, n, xis, EPS_FACTOR * xi_min.exp())
}

/// As [`universal_spectrum`] with an explicit damping rate ε > 0.
///
/// ∫ −sign(x)(|x|/c)^{1/3} e^{−ε|x| − ikx} dx
///   = 2i c^{−1/3} Γ(4/3) sin((4/3) atan(k/ε)) / (ε² + k²)^{2/3}.
pub fn universal_spectrum_eps(profile: &UniversalProfile, n: u32, xis: &[f64], eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("damping must be positive, got {eps}")));
    }
    let pre = 2.0 * profile.c().powf(-1.0 / 3.0) * libm::tgamma(4.0 / 3.0);
    Ok(xis
        .iter()
        .map(|&xi| {
            let k = xi.exp();
            let body = (4.0 / 3.0 * (k / eps).atan()).sin().abs() / (eps * eps + k * k).powf(2.0 / 3.0);
            (n as f64 * xi).exp() * pre * body
        })
        .collect())
}

/// e^{nξ}|w(t, e^ξ)| at t < 0:
/// |transform of w_x|(k) = 2π Ai(|t| k^{2/3} / (3c)^{1/3}) / (3ck)^{1/3}.
pub fn limit_wave_shape(profile: &UniversalProfile, t: f64, n: u32, xis: &[f64]) -> Result<Vec<f64>> {
    if !(t < 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("limit shape needs t < 0, got {t}")));
    }
    let c = profile.c();
    let s = (3.0 * c).cbrt();
    Ok(xis
        .iter()
        .map(|&xi| {
            let k = xi.exp();
            let wx = 2.0 * PI * airy_ai(-t * k.powf(2.0 / 3.0) / s) / (s * k.cbrt());
            wx * ((n as f64 - 1.0) * xi).exp()
        })
        .collect())
}

/// Least-squares slope of log(amps) against ξ.
pub fn log_slope(xis: &[f64], amps: &[f64]) -> Result<f64> {
    let logs: Vec<f64> = amps.iter().map(|a| a.ln()).collect();
    Ok(line_fit(xis, &logs)?.slope)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub xi_peak: f64,
    /// Peak of e^{−decay_comp·τ}·amps.
    pub amp_peak: f64,
    pub decay_comp: f64,
}

impl TrajectoryPoint {
    /// Peak amplitude before compensation.
    pub fn uncompensated(&self) -> f64 {
        self.amp_peak * (self.decay_comp * self.tau).exp()
    }
}

/// Vertex of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d01 = (y[1] - y[0]) / (x[1] - x[0]);
    let d12 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d12 - d01) / (x[2] - x[0]);
    if !(a < 0.0) {
        return (x[1], y[1]);
    }
    let b = d01 - a * (x[0] + x[1]);
    let xv = (-b / (2.0 * a)).clamp(x[0], x[2]);
    let yv = y[0] + d01 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
    (xv, yv)
}

fn locate_peak(field: &LogFourierField, weight: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let w: Vec<f64> = field
        .xis
        .iter()
        .zip(&field.amps)
        .map(|(&xi, a)| a * weight(xi))
        .collect();
    let (imax, _) = w.iter().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
    );
    if imax == 0 || imax + 1 >= w.len() {
        return Err(Error::FlatField(format!(
            "maximum at the grid boundary (xi = {}) for tau = {}; enlarge the window or grid",
            field.xis[imax], field.tau
        )));
    }
    let i = imax;
    Ok(parabola_vertex(
        [field.xis[i - 1], field.xis[i], field.xis[i + 1]],
        [w[i - 1], w[i], w[i + 1]],
    ))
}

fn check_series(fields: &[LogFourierField]) -> Result<()> {
    if fields.len() < 3 {
        return Err(Error::Rank(format!("need at least 3 fields, got {}", fields.len())));
    }
    if fields.iter().any(|f| f.n != fields[0].n) {
        return Err(Error::Domain("fields carry different derivative orders".into()));
    }
    Ok(())
}

/// Peak of e^{−decay_comp·τ}·amps for each field.
pub fn track_wave(fields: &[LogFourierField], decay_comp: f64) -> Result<Vec<TrajectoryPoint>> {
    check_series(fields)?;
    fields
        .iter()
        .map(|f| {
            let comp = (-decay_comp * f.tau).exp();
            let (xi, amp) = locate_peak(f, |_| comp)?;
            Ok(TrajectoryPoint {
                tau: f.tau,
                xi_peak: xi,
                amp_peak: amp,
                decay_comp,
            })
        })
        .collect()
}

/// As [`track_wave`], but the peak is located on e^{locator·ξ}·amps and the
/// amplitude is read from the field itself there. Order-0 fields have no
/// localized maximum and are located through a higher order.
pub fn track_wave_located(fields: &[LogFourierField], decay_comp: f64, locator: u32) -> Result<Vec<TrajectoryPoint>> {
    check_series(fields)?;
    fields
        .iter()
        .map(|f| {
            let (xi, _) = locate_peak(f, |xi| (locator as f64 * xi).exp())?;
            let amp = f.amp_at(xi) * (-decay_comp * f.tau).exp();
            Ok(TrajectoryPoint {
                tau: f.tau,
                xi_peak: xi,
                amp_peak: amp,
                decay_comp,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedGrowthFit {
    pub speed: f64,
    pub growth: f64,
    pub xi_fit: LineFit,
    pub log_amp_fit: LineFit,
}

/// Speed from ξ_peak(τ) and growth exponent of the uncompensated peak amplitude.
pub fn fit_speed_and_growth(trajectory: &[TrajectoryPoint]) -> Result<SpeedGrowthFit> {
    if trajectory.len() < 3 {
        return Err(Error::Rank(format!(
            "need at least 3 trajectory points, got {}",
            trajectory.len()
        )));
    }
    if trajectory.iter().any(|p| !(p.uncompensated() > 0.0)) {
        return Err(Error::Domain("peak amplitudes must be positive".into()));
    }
    let taus: Vec<f64> = trajectory.iter().map(|p| p.tau).collect();
    let xis: Vec<f64> = trajectory.iter().map(|p| p.xi_peak).collect();
    let logs: Vec<f64> = trajectory.iter().map(|p| p.uncompensated().ln()).collect();
    let xi_fit = line_fit(&taus, &xis)?;
    let log_amp_fit = line_fit(&taus, &logs)?;
    Ok(SpeedGrowthFit {
        speed: xi_fit.slope,
        growth: log_amp_fit.slope,
        xi_fit,
        log_amp_fit,
    })
}

/// Long format "tau,xi,amp" with amplitudes compensated by e^{−decay_comp·τ};
/// every `step`-th bin is kept.
pub fn fields_csv(fields: &[LogFourierField], decay_comp: f64, step: usize, digits: usize) -> String {
    let step = step.max(1);
    let rows = fields.iter().flat_map(|f| {
        let comp = (-decay_comp * f.tau).exp();
        f.xis
            .iter()
            .zip(&f.amps)
            .step_by(step)
            .map(move |(&xi, &a)| [f.tau, xi, a * comp])
    });
    csv(&["tau", "xi", "amp"], rows, digits)
}

pub fn trajectory_csv(trajectory: &[TrajectoryPoint], digits: usize) -> String {
    csv(
        &["tau", "xi_peak", "amp_peak"],
        trajectory.iter().map(|p| [p.tau, p.xi_peak, p.amp_peak]),
        digits,
    )
}

pub fn fit_report(fit: &SpeedGrowthFit, n: u32, digits: usize) -> String {
    let f = |v: f64| format_number(v, digits);
    let join = |r: &[f64]| r.iter().map(|&v| f(v)).collect::<Vec<_>>().join(",");
    key_values([
        ("n", n.to_string()),
        ("speed", f(fit.speed)),
        ("growth_exponent", f(fit.growth)),
        ("expected_growth_exponent", f(1.5 * n as f64 - 2.0)),
        ("xi_intercept", f(fit.xi_fit.intercept)),
        ("log_amp_intercept", f(fit.log_amp_fit.intercept)),
        ("xi_residuals", join(&fit.xi_fit.residuals)),
        ("log_amp_residuals", join(&fit.log_amp_fit.residuals)),
    ])
}
