//! Classical solutions by characteristics and the blow-up frame.
//!
//! A scalar law ∂U/∂t + ∂f(U)/∂x = 0 with data U₀ at t = t₀ is solved by
//!
//! ```text
//! x = x₀ + f′(U₀(x₀)) (t − t₀),   U = U₀(x₀).
//! ```
//!
//! Burgers is the case f = U²/2. The substitution u = f′(U) maps every law onto
//! Burgers with data u₀ = f′∘U₀, so blow-up time and frame normalization are
//! computed from the speed profile u₀.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{BurgersFlux, FluxModel, InitialData, ShiftedData, ShiftedFlux, SpeedData};
use crate::profile::UniversalProfile;
use crate::root::{bracket_increasing, safeguarded_newton};
use crate::solution::{Differentiable, Solution};

/// Default interval of characteristic feet.
pub const DEFAULT_INTERVAL: (f64, f64) = (-50.0, 50.0);
/// Points in the coarse scan for the steepest characteristic.
pub const SCAN_POINTS: usize = 4096;
/// Tolerance on each blow-up frame condition.
pub const TOL_FRAME: f64 = 1e-9;
/// Relative residual required of every characteristic inversion.
pub const TOL_CHARACTERISTIC: f64 = 1e-12;
/// Evaluations closer than this to the blow-up time are refused.
pub const BLOWUP_GUARD: f64 = 1e-14;
/// Bracket width at which the hybrid inversion stops.
const BRACKET_WIDTH: f64 = 1e-13;

/// Location and value of the most negative slope of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteepestPoint {
    pub x: f64,
    pub slope: f64,
    /// False when the minimum sits on an end of the scanned interval.
    pub interior: bool,
}

/// Minimize `data.d1` over `[lo, hi]`: coarse scan, then Newton on d2 = 0.
pub fn steepest_point<D: InitialData + ?Sized>(data: &D, lo: f64, hi: f64) -> Result<SteepestPoint> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty working interval [{lo}, {hi}]")));
    }
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let (imin, smin) = (0..SCAN_POINTS)
        .map(|i| (i, data.d1(lo + i as f64 * step)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    if !smin.is_finite() {
        return Err(Error::Domain(
            "initial data slope is not finite on the working interval".into(),
        ));
    }
    let xi = lo + imin as f64 * step;
    if imin == 0 || imin == SCAN_POINTS - 1 {
        return Ok(SteepestPoint {
            x: xi,
            slope: smin,
            interior: false,
        });
    }
    let a = xi - step;
    let b = xi + step;
    if data.d2(a) > 0.0 || data.d2(b) < 0.0 {
        // Not a sign change of the curvature; keep the scan point.
        return Ok(SteepestPoint {
            x: xi,
            slope: smin,
            interior: true,
        });
    }
    let root = safeguarded_newton(|x| data.d2(x), |x| data.d3(x), a, b, 1e-13, 0.0)?;
    let slope = data.d1(root.x);
    if slope <= smin {
        Ok(SteepestPoint {
            x: root.x,
            slope,
            interior: true,
        })
    } else {
        Ok(SteepestPoint {
            x: xi,
            slope: smin,
            interior: true,
        })
    }
}

/// Blow-up time t₀ − 1/min u₀′ over the default working interval.
pub fn blowup_time<D: InitialData + ?Sized>(ic: &D, t0: f64) -> Result<f64> {
    blowup_time_on(ic, t0, DEFAULT_INTERVAL.0, DEFAULT_INTERVAL.1)
}

pub fn blowup_time_on<D: InitialData + ?Sized>(ic: &D, t0: f64, lo: f64, hi: f64) -> Result<f64> {
    let p = steepest_point(ic, lo, hi)?;
    if p.slope >= 0.0 {
        return Err(Error::NoBlowup { min_slope: p.slope });
    }
    Ok(t0 - 1.0 / p.slope)
}

/// The solution of a scalar law from data at `t0`, evaluated by inverting characteristics.
#[derive(Debug, Clone)]
pub struct Characteristics<F, D> {
    flux: F,
    data: D,
    t0: f64,
    lo: f64,
    hi: f64,
    t_blowup: f64,
}

impl<D: InitialData> Characteristics<BurgersFlux, D> {
    pub fn burgers(data: D, t0: f64) -> Result<Self> {
        Self::new(BurgersFlux, data, t0)
    }
}

impl<F: FluxModel, D: InitialData> Characteristics<F, D> {
    pub fn new(flux: F, data: D, t0: f64) -> Result<Self> {
        Self::with_interval(flux, data, t0, DEFAULT_INTERVAL.0, DEFAULT_INTERVAL.1)
    }

    pub fn with_interval(flux: F, data: D, t0: f64, lo: f64, hi: f64) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::Domain(format!("initial time must be finite, got {t0}")));
        }
        let steep = steepest_point(
            &SpeedData {
                flux: &flux,
                data: &data,
            },
            lo,
            hi,
        )?;
        let t_blowup = if steep.slope < 0.0 {
            t0 - 1.0 / steep.slope
        } else {
            f64::INFINITY
        };
        Ok(Self {
            flux,
            data,
            t0,
            lo,
            hi,
            t_blowup,
        })
    }

    pub fn flux(&self) -> &F {
        &self.flux
    }

    pub fn data(&self) -> &D {
        &self.data
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_blowup(&self) -> f64 {
        self.t_blowup
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// The speed profile u₀ = f′∘U₀.
    pub fn speed_data(&self) -> SpeedData<&F, &D> {
        SpeedData {
            flux: &self.flux,
            data: &self.data,
        }
    }

    fn elapsed(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < self.t0 {
            return Err(Error::Domain(format!("t = {t} precedes the initial time {}", self.t0)));
        }
        if t >= self.t_blowup - BLOWUP_GUARD {
            return Err(Error::PostBlowup {
                t,
                t_blowup: self.t_blowup,
            });
        }
        Ok(t - self.t0)
    }

    /// Foot x₀ of the characteristic through (t, x).
    pub fn foot(&self, t: f64, x: f64) -> Result<f64> {
        let s = self.elapsed(t)?;
        self.foot_from(s, x, x)
    }

    fn foot_from(&self, s: f64, x: f64, guess: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite position {x}")));
        }
        let speed = self.speed_data();
        let map = |x0: f64| x0 + speed.value(x0) * s - x;
        let slope = |x0: f64| 1.0 + speed.d1(x0) * s;
        let scale = x.abs().max(1.0);
        let bracket_err = || Error::Bracket {
            x,
            lo: self.lo,
            hi: self.hi,
        };

        let guess = guess.clamp(self.lo, self.hi);
        let g = map(guess);
        let first_step = (g / slope(guess).max(1e-3)).abs();
        let (a, b) = bracket_increasing(map, guess, first_step, self.lo, self.hi).ok_or_else(bracket_err)?;
        let root = safeguarded_newton(
            map,
            slope,
            a,
            b,
            BRACKET_WIDTH * a.abs().max(b.abs()).max(1.0),
            0.25 * TOL_CHARACTERISTIC * scale,
        )?;
        let mut x0 = root.x;
        let mut r = map(x0);
        let jac = slope(x0);
        if jac <= 0.0 {
            return Err(Error::PostBlowup {
                t: self.t0 + s,
                t_blowup: self.t_blowup,
            });
        }
        // Newton polish
        let polished = x0 - r / jac;
        let rp = map(polished);
        if rp.abs() < r.abs() {
            x0 = polished;
            r = rp;
        }
        if r.abs() > TOL_CHARACTERISTIC * scale {
            return Err(Error::Convergence(format!(
                "characteristic through x = {x} left residual {r:e}"
            )));
        }
        Ok(x0)
    }

    /// U(t, x).
    pub fn value(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.data.value(self.foot(t, x)?))
    }

    /// u = f′(U(t, x)), the Burgers-equivalent field.
    pub fn speed_value(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.flux.df(self.value(t, x)?))
    }

    fn derivative_at_foot(&self, s: f64, x0: f64, order: u32) -> Result<f64> {
        match order {
            0 => Ok(self.data.value(x0)),
            1 | 2 => {
                let speed = self.speed_data();
                let jac = 1.0 + speed.d1(x0) * s;
                if jac <= 0.0 {
                    return Err(Error::PostBlowup {
                        t: self.t0 + s,
                        t_blowup: self.t_blowup,
                    });
                }
                let d1 = self.data.d1(x0);
                if order == 1 {
                    Ok(d1 / jac)
                } else {
                    Ok((self.data.d2(x0) * jac - d1 * speed.d2(x0) * s) / (jac * jac * jac))
                }
            }
            _ => Err(Error::Domain(format!(
                "exact derivative of order {order} not available"
            ))),
        }
    }

    /// ∂U/∂x = U₀′(x₀) / (1 + u₀′(x₀)(t − t₀)).
    pub fn spatial_derivative(&self, t: f64, x: f64) -> Result<f64> {
        let s = self.elapsed(t)?;
        let x0 = self.foot_from(s, x, x)?;
        self.derivative_at_foot(s, x0, 1)
    }

    /// Feet for a whole grid. Sorted grids reuse the previous foot as a starting point.
    pub fn feet(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let s = self.elapsed(t)?;
        let chunks: Vec<Result<Vec<f64>>> = xs
            .par_chunks(4096)
            .map(|chunk| {
                let mut out = Vec::with_capacity(chunk.len());
                let mut prev: Option<f64> = None;
                for &x in chunk {
                    let guess = prev.unwrap_or(x);
                    let x0 = self.foot_from(s, x, guess)?;
                    prev = Some(x0);
                    out.push(x0);
                }
                Ok(out)
            })
            .collect();
        let mut feet = Vec::with_capacity(xs.len());
        for c in chunks {
            feet.extend(c?);
        }
        Ok(feet)
    }
}

impl<F: FluxModel, D: InitialData> Solution for Characteristics<F, D> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        self.value(t, x)
    }

    fn sample(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        Ok(self.feet(t, xs)?.into_iter().map(|x0| self.data.value(x0)).collect())
    }
}

impl<F: FluxModel, D: InitialData> Differentiable for Characteristics<F, D> {
    fn derivative(&self, t: f64, x: f64, order: u32) -> Result<f64> {
        let s = self.elapsed(t)?;
        let x0 = self.foot_from(s, x, x)?;
        self.derivative_at_foot(s, x0, order)
    }

    fn sample_derivative(&self, t: f64, xs: &[f64], order: u32) -> Result<Vec<f64>> {
        let s = self.elapsed(t)?;
        self.feet(t, xs)?
            .into_par_iter()
            .map(|x0| self.derivative_at_foot(s, x0, order))
            .collect()
    }
}

/// u(t, x) for Burgers with data `ic` given at `t0`.
pub fn solve_burgers<D: InitialData>(ic: D, t0: f64, t: f64, x: f64) -> Result<f64> {
    Characteristics::burgers(ic, t0)?.value(t, x)
}

/// U(t, x) for the law with flux `flux` and data `ic` given at `t0`.
pub fn solve_general<F: FluxModel, D: InitialData>(flux: F, ic: D, t0: f64, t: f64, x: f64) -> Result<f64> {
    Characteristics::new(flux, ic, t0)?.value(t, x)
}

/// ∂u/∂x for Burgers.
pub fn spatial_derivative<D: InitialData>(ic: D, t0: f64, t: f64, x: f64) -> Result<f64> {
    Characteristics::burgers(ic, t0)?.spatial_derivative(t, x)
}

/// Shifts that move a generic blow-up to t = x = U = 0.
///
/// New coordinates relate to the raw ones by
/// `x = x_raw − x_shift − v_shift (t − t0)`, `U = U_raw − u_shift`,
/// `t = t_raw − t_shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupFrame {
    /// Initial time in the new clock, 1/u₀′(0) < 0.
    pub t0: f64,
    pub x_shift: f64,
    pub u_shift: f64,
    /// Galilean speed f′(u_shift).
    pub v_shift: f64,
    /// Raw blow-up time.
    pub t_shift: f64,
    /// Cusp coefficient u₀‴(0) / (6 u₀′(0)⁴).
    pub c: f64,
}

/// Residuals of the four frame conditions for normalized speed data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameResiduals {
    /// u₀(0)
    pub value: f64,
    /// u₀″(0)
    pub curvature: f64,
    /// t₀ − 1/u₀′(0)
    pub time: f64,
    /// u₀‴(0), required positive
    pub third: f64,
}

impl FrameResiduals {
    pub fn max_abs(&self) -> f64 {
        self.value.abs().max(self.curvature.abs()).max(self.time.abs())
    }
}

impl BlowupFrame {
    pub fn flux<F: FluxModel>(&self, raw: F) -> ShiftedFlux<F> {
        ShiftedFlux {
            inner: raw,
            u_shift: self.u_shift,
            v_shift: self.v_shift,
        }
    }

    pub fn data<D: InitialData>(&self, raw: D) -> ShiftedData<D> {
        ShiftedData {
            inner: raw,
            x_shift: self.x_shift,
            u_shift: self.u_shift,
        }
    }

    pub fn profile(&self) -> Result<UniversalProfile> {
        UniversalProfile::new(self.c)
    }

    /// The normalized problem on the raw interval `[lo, hi]` translated into the frame.
    pub fn problem<F: FluxModel, D: InitialData>(
        &self,
        raw_flux: F,
        raw_data: D,
        lo: f64,
        hi: f64,
    ) -> Result<Characteristics<ShiftedFlux<F>, ShiftedData<D>>> {
        Characteristics::with_interval(
            self.flux(raw_flux),
            self.data(raw_data),
            self.t0,
            lo - self.x_shift,
            hi - self.x_shift,
        )
    }

    /// Evaluate the frame conditions on already-normalized flux and data.
    pub fn residuals<F: FluxModel, D: InitialData>(&self, flux: &F, data: &D) -> FrameResiduals {
        let u0 = SpeedData { flux, data };
        FrameResiduals {
            value: u0.value(0.0),
            curvature: u0.d2(0.0),
            time: self.t0 - 1.0 / u0.d1(0.0),
            third: u0.d3(0.0),
        }
    }
}

/// Normalize a problem into its blow-up frame over the default interval.
pub fn normalize_frame<F: FluxModel, D: InitialData>(flux: &F, ic_raw: &D, t0_raw: f64) -> Result<BlowupFrame> {
    normalize_frame_on(flux, ic_raw, t0_raw, DEFAULT_INTERVAL.0, DEFAULT_INTERVAL.1)
}

/// Normalize a problem into its blow-up frame.
///
/// The shifts are applied in a fixed order: locate the steepest characteristic
/// x*, shift the state by U₀(x*), remove the Galilean speed f′(U₀(x*)), and
/// finally move the clock so that blow-up happens at t = 0.
pub fn normalize_frame_on<F: FluxModel, D: InitialData>(
    flux: &F,
    ic_raw: &D,
    t0_raw: f64,
    lo: f64,
    hi: f64,
) -> Result<BlowupFrame> {
    let speed = SpeedData { flux, data: ic_raw };
    let steep = steepest_point(&speed, lo, hi)?;
    if steep.slope >= 0.0 {
        return Err(Error::NoBlowup { min_slope: steep.slope });
    }
    if !steep.interior {
        return Err(Error::Degenerate(format!(
            "steepest characteristic at the edge of [{lo}, {hi}] (x = {})",
            steep.x
        )));
    }
    let x_shift = steep.x;
    let u_shift = ic_raw.value(x_shift);
    let v_shift = flux.df(u_shift);
    let slope = speed.d1(x_shift);
    let third = speed.d3(x_shift);
    if !(third > TOL_FRAME * slope.abs()) {
        return Err(Error::Degenerate(format!(
            "u0''' = {third:e} is not positive at the steepest characteristic"
        )));
    }
    let t0 = 1.0 / slope;
    let frame = BlowupFrame {
        t0,
        x_shift,
        u_shift,
        v_shift,
        t_shift: t0_raw - t0,
        c: third / (6.0 * slope.powi(4)),
    };
    let res = frame.residuals(&frame.flux(flux), &frame.data(ic_raw));
    if res.max_abs() > TOL_FRAME {
        return Err(Error::Convergence(format!("blow-up frame conditions not met: {res:?}")));
    }
    Ok(frame)
}

/// x₀ − u t₀ + c u³ at the point where the normalized speed data equals `u`.
///
/// This is x − u t + c u³ along the characteristic carrying u, which vanishes
/// to third order at the blow-up point.
pub fn local_cubic_defect<D: InitialData + ?Sized>(speed: &D, t0: f64, c: f64, u: f64) -> Result<f64> {
    // u0 decreases through the origin, so -(u0 - u) increases.
    let g = |x: f64| u - speed.value(x);
    let dg = |x: f64| -speed.d1(x);
    let start = u * t0;
    let (a, b) =
        bracket_increasing(g, start, u.abs() * t0.abs() * 0.1 + 1e-300, -1.0, 1.0).ok_or_else(|| Error::Bracket {
            x: start,
            lo: -1.0,
            hi: 1.0,
        })?;
    let root = safeguarded_newton(g, dg, a, b, 0.0, 0.0)?;
    Ok(root.x - u * t0 + c * u * u * u)
}
