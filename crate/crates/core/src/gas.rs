//! Simple wave of an ideal polytropic gas.
//!
//! With pressure p = Aρ^γ the Riemann invariant carried by a simple wave
//! reduces the Euler system to a scalar law for the density,
//!
//! ```text
//! ρ(t, x) = ρ₀(x₀),   x = x₀ + K ρ₀(x₀)^m t,
//! K = (γ+1)/(γ−1) · √(Aγ),   m = (γ−1)/2.
//! ```

use crate::characteristics::{normalize_frame_on, BlowupFrame, Characteristics};
use crate::error::{Error, Result};
use crate::model::{FluxModel, InitialData, ShiftedData, ShiftedFlux};
use crate::renorm::{convergence_sweep_solution, ConvergenceTarget, SweepPoint};

/// Working interval of the gas problem in raw coordinates.
pub const GAS_INTERVAL: (f64, f64) = (-20.0, 20.0);

/// ρ₀(x) = 2 − arctan x.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArctanProfile;

impl InitialData for ArctanProfile {
    fn value(&self, x: f64) -> f64 {
        2.0 - x.atan()
    }
    fn d1(&self, x: f64) -> f64 {
        -1.0 / (1.0 + x * x)
    }
    fn d2(&self, x: f64) -> f64 {
        2.0 * x / (1.0 + x * x).powi(2)
    }
    fn d3(&self, x: f64) -> f64 {
        (2.0 - 6.0 * x * x) / (1.0 + x * x).powi(3)
    }
}

/// Flux with f′(ρ) = K ρ^m, defined for ρ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytropicFlux {
    pub coef: f64,
    pub exponent: f64,
}

impl FluxModel for PolytropicFlux {
    fn f(&self, rho: f64) -> f64 {
        self.coef * rho.powf(self.exponent + 1.0) / (self.exponent + 1.0)
    }
    fn df(&self, rho: f64) -> f64 {
        self.coef * rho.powf(self.exponent)
    }
    fn d2f(&self, rho: f64) -> f64 {
        let m = self.exponent;
        self.coef * m * rho.powf(m - 1.0)
    }
    fn d3f(&self, rho: f64) -> f64 {
        let m = self.exponent;
        self.coef * m * (m - 1.0) * rho.powf(m - 2.0)
    }
    fn d4f(&self, rho: f64) -> f64 {
        let m = self.exponent;
        self.coef * m * (m - 1.0) * (m - 2.0) * rho.powf(m - 3.0)
    }
    fn invert_df(&self, speed: f64) -> Result<f64> {
        if !(speed > 0.0) {
            return Err(Error::Domain(format!("gas speeds are positive, got {speed}")));
        }
        Ok((speed / self.coef).powf(1.0 / self.exponent))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GasParams<D = ArctanProfile> {
    pub gamma: f64,
    /// Entropy constant A in p = Aρ^γ.
    pub entropy: f64,
    pub rho0: D,
}

impl Default for GasParams {
    fn default() -> Self {
        Self {
            gamma: 5.0 / 3.0,
            entropy: 3.0 / 5.0,
            rho0: ArctanProfile,
        }
    }
}

impl<D: InitialData> GasParams<D> {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.entropy > 0.0 && self.entropy.is_finite()) {
            return Err(Error::Domain(format!(
                "entropy constant must be positive, got {}",
                self.entropy
            )));
        }
        Ok(())
    }

    pub fn flux(&self) -> PolytropicFlux {
        let g = self.gamma;
        PolytropicFlux {
            coef: (g + 1.0) / (g - 1.0) * (self.entropy * g).sqrt(),
            exponent: (g - 1.0) / 2.0,
        }
    }
}

/// Characteristic speed of density `rho`.
pub fn gas_characteristic_speed<D: InitialData>(p: &GasParams<D>, rho: f64) -> Result<f64> {
    p.validate()?;
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("density must be positive, got {rho}")));
    }
    Ok(p.flux().df(rho))
}

/// The gas problem moved into its blow-up frame.
#[derive(Debug, Clone)]
pub struct GasProblem<D> {
    pub params: GasParams<D>,
    pub frame: BlowupFrame,
}

impl<D: InitialData + Clone> GasProblem<D> {
    /// x₁ of the steepest characteristic.
    pub fn x1(&self) -> f64 {
        self.frame.x_shift
    }

    /// ρ₁ = ρ₀(x₁).
    pub fn rho1(&self) -> f64 {
        self.frame.u_shift
    }

    /// v₁ = f′(ρ₁).
    pub fn v1(&self) -> f64 {
        self.frame.v_shift
    }

    pub fn t0(&self) -> f64 {
        self.frame.t0
    }

    /// f′(U) = K(U + ρ₁)^m − v₁.
    pub fn flux(&self) -> ShiftedFlux<PolytropicFlux> {
        self.frame.flux(self.params.flux())
    }

    /// U₀(x) = ρ₀(x + x₁) − ρ₁.
    pub fn data(&self) -> ShiftedData<D> {
        self.frame.data(self.params.rho0.clone())
    }

    /// f″(0) of the normalized flux.
    pub fn d2f0(&self) -> f64 {
        self.flux().d2f(0.0)
    }

    pub fn solution(&self) -> Result<Characteristics<ShiftedFlux<PolytropicFlux>, ShiftedData<D>>> {
        self.frame.problem(
            self.params.flux(),
            self.params.rho0.clone(),
            GAS_INTERVAL.0,
            GAS_INTERVAL.1,
        )
    }

    /// Density in raw coordinates (data at t = 0) by bisection on
    /// x = x₀ + K ρ₀(x₀)^m t, independent of the frame machinery.
    pub fn density_direct(&self, t: f64, x: f64) -> Result<f64> {
        let flux = self.params.flux();
        let rho0 = &self.params.rho0;
        let g = |x0: f64| x0 + flux.df(rho0.value(x0)) * t - x;
        let (mut a, mut b) = GAS_INTERVAL;
        if !(g(a) < 0.0 && g(b) > 0.0) {
            return Err(Error::Bracket { x, lo: a, hi: b });
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if g(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(rho0.value(0.5 * (a + b)))
    }

    /// Density at frame coordinates (t, x).
    pub fn density_in_frame(&self, t: f64, x: f64) -> Result<f64> {
        let t_raw = t + self.frame.t_shift;
        let x_raw = x + self.x1() + self.v1() * (t - self.frame.t0);
        self.density_direct(t_raw, x_raw)
    }
}

/// Recover the blow-up frame of the gas problem; data are given at raw time 0.
pub fn build_gas_problem<D: InitialData + Clone>(p: GasParams<D>) -> Result<GasProblem<D>> {
    p.validate()?;
    let (lo, hi) = GAS_INTERVAL;
    let frame = normalize_frame_on(&p.flux(), &p.rho0, 0.0, lo, hi)?;
    if !(frame.u_shift > 0.0) {
        return Err(Error::Domain(format!(
            "density {} at the steepest point is not positive",
            frame.u_shift
        )));
    }
    Ok(GasProblem { params: p, frame })
}

/// Convergence of 𝒢_λU to w/f″(0) for the gas problem.
pub fn gas_convergence<D: InitialData + Clone>(
    p: GasParams<D>,
    lambdas: &[f64],
    t_eval: f64,
    xs: &[f64],
) -> Result<Vec<SweepPoint>> {
    let problem = build_gas_problem(p)?;
    let target = ConvergenceTarget::new(problem.frame.profile()?, problem.d2f0())?;
    convergence_sweep_solution(&problem.solution()?, &target, lambdas, t_eval, xs)
}
