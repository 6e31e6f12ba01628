//! Built-in problems addressable by string id.
//!
//! Problem ids: `burgers-erf` (alias `erf`), `gas`. Initial data ids: `erf`,
//! `arctan`, `poly:a0,a1,...`. Flux ids: `burgers`, `gas`, `poly:b0,b1,...`.
//! Polynomial coefficients are ascending powers starting at x⁰.

use std::fmt;
use std::sync::Arc;

use crate::characteristics::{normalize_frame_on, BlowupFrame, Characteristics, DEFAULT_INTERVAL};
use crate::error::{Error, Result};
use crate::gas::{ArctanProfile, GasParams, GAS_INTERVAL};
use crate::model::{
    BurgersFlux, ErfData, FluxModel, InitialData, PolynomialData, PolynomialFlux, ShiftedData, ShiftedFlux,
};
use crate::renorm::ConvergenceTarget;

#[derive(Debug, Clone, PartialEq)]
pub enum IcSpec {
    Erf,
    Arctan,
    Poly(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FluxSpec {
    Burgers,
    Gas { gamma: f64, entropy: f64 },
    Poly(Vec<f64>),
}

fn parse_coeffs(list: &str) -> Result<Vec<f64>> {
    let coeffs = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad coefficient '{s}'")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain(format!("bad coefficient list '{list}'")));
    }
    Ok(coeffs)
}

fn join(coeffs: &[f64]) -> String {
    coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl IcSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "erf" => Ok(Self::Erf),
            "arctan" => Ok(Self::Arctan),
            other => match other.strip_prefix("poly:") {
                Some(list) => Ok(Self::Poly(parse_coeffs(list)?)),
                None => Err(Error::Domain(format!(
                    "unknown initial data '{other}' (erf, arctan, poly:a0,a1,...)"
                ))),
            },
        }
    }

    pub fn build(&self) -> Arc<dyn InitialData> {
        match self {
            Self::Erf => Arc::new(ErfData::default()),
            Self::Arctan => Arc::new(ArctanProfile),
            Self::Poly(c) => Arc::new(PolynomialData::new(c.clone())),
        }
    }
}

impl fmt::Display for IcSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Erf => write!(f, "erf"),
            Self::Arctan => write!(f, "arctan"),
            Self::Poly(c) => write!(f, "poly:{}", join(c)),
        }
    }
}

impl FluxSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "burgers" => Ok(Self::Burgers),
            "gas" => {
                let d = GasParams::default();
                Ok(Self::Gas {
                    gamma: d.gamma,
                    entropy: d.entropy,
                })
            }
            other => match other.strip_prefix("poly:") {
                Some(list) => Ok(Self::Poly(parse_coeffs(list)?)),
                None => Err(Error::Domain(format!(
                    "unknown flux '{other}' (burgers, gas, poly:b0,b1,...)"
                ))),
            },
        }
    }

    pub fn build(&self) -> Result<Arc<dyn FluxModel>> {
        Ok(match self {
            Self::Burgers => Arc::new(BurgersFlux),
            Self::Gas { gamma, entropy } => {
                let p = GasParams {
                    gamma: *gamma,
                    entropy: *entropy,
                    rho0: ArctanProfile,
                };
                p.validate()?;
                Arc::new(p.flux())
            }
            Self::Poly(c) => Arc::new(PolynomialFlux::new(c.clone())),
        })
    }
}

impl fmt::Display for FluxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Burgers => write!(f, "burgers"),
            Self::Gas { .. } => write!(f, "gas"),
            Self::Poly(c) => write!(f, "poly:{}", join(c)),
        }
    }
}

/// Data, flux, raw initial time and working interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub ic: IcSpec,
    pub flux: FluxSpec,
    pub t0_raw: f64,
    pub interval: (f64, f64),
}

impl ProblemSpec {
    /// Resolve a named problem.
    pub fn named(id: &str) -> Result<Self> {
        match id.trim() {
            "burgers-erf" | "erf" => Ok(Self {
                ic: IcSpec::Erf,
                flux: FluxSpec::Burgers,
                t0_raw: -1.0,
                interval: DEFAULT_INTERVAL,
            }),
            "gas" => Ok(Self {
                ic: IcSpec::Arctan,
                flux: FluxSpec::parse("gas")?,
                t0_raw: 0.0,
                interval: GAS_INTERVAL,
            }),
            other => Err(Error::Domain(format!("unknown problem '{other}' (burgers-erf, gas)"))),
        }
    }

    /// A problem from separate data and flux ids.
    pub fn custom(ic: IcSpec, flux: FluxSpec) -> Self {
        let interval = if matches!(flux, FluxSpec::Gas { .. }) {
            GAS_INTERVAL
        } else {
            DEFAULT_INTERVAL
        };
        Self {
            ic,
            flux,
            t0_raw: 0.0,
            interval,
        }
    }

    pub fn normalize(&self) -> Result<NormalizedProblem> {
        let flux = self.flux.build()?;
        let data = self.ic.build();
        let frame = normalize_frame_on(&flux, &data, self.t0_raw, self.interval.0, self.interval.1)?;
        Ok(NormalizedProblem {
            flux,
            data,
            frame,
            interval: self.interval,
        })
    }
}

pub type DynFlux = ShiftedFlux<Arc<dyn FluxModel>>;
pub type DynData = ShiftedData<Arc<dyn InitialData>>;

/// A problem moved into its blow-up frame.
#[derive(Clone)]
pub struct NormalizedProblem {
    flux: Arc<dyn FluxModel>,
    data: Arc<dyn InitialData>,
    pub frame: BlowupFrame,
    /// Raw working interval.
    pub interval: (f64, f64),
}

impl NormalizedProblem {
    pub fn flux(&self) -> DynFlux {
        self.frame.flux(self.flux.clone())
    }

    pub fn data(&self) -> DynData {
        self.frame.data(self.data.clone())
    }

    pub fn target(&self) -> Result<ConvergenceTarget> {
        ConvergenceTarget::new(self.frame.profile()?, self.flux().d2f(0.0))
    }

    /// Solution over the working interval.
    pub fn solution(&self) -> Result<Characteristics<DynFlux, DynData>> {
        self.frame
            .problem(self.flux.clone(), self.data.clone(), self.interval.0, self.interval.1)
    }

    /// Solution whose feet may range over [−2L, 2L] in frame coordinates, wide
    /// enough to sample a spectral window of half-width L.
    pub fn solution_for_window(&self, half_width: f64) -> Result<Characteristics<DynFlux, DynData>> {
        let (lo, hi) = (
            self.interval.0 - self.frame.x_shift,
            self.interval.1 - self.frame.x_shift,
        );
        Characteristics::with_interval(
            self.flux(),
            self.data(),
            self.frame.t0,
            lo.min(-2.0 * half_width),
            hi.max(2.0 * half_width),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::Solution;

    #[test]
    fn parses_ids() {
        assert_eq!(
            IcSpec::parse("poly:0, -1,0,1").unwrap(),
            IcSpec::Poly(vec![0.0, -1.0, 0.0, 1.0])
        );
        assert!(IcSpec::parse("poly:").is_err());
        assert!(IcSpec::parse("sine").is_err());
        assert!(FluxSpec::parse("poly:0,0,0.5").is_ok());
        assert!(ProblemSpec::named("nope").is_err());
        assert_eq!(IcSpec::parse("poly:0,-1,0,1").unwrap().to_string(), "poly:0,-1,0,1");
    }

    #[test]
    fn erf_problem_is_already_normalized() {
        let p = ProblemSpec::named("burgers-erf").unwrap().normalize().unwrap();
        assert!((p.frame.t0 + 1.0).abs() < 1e-12);
        assert!(p.frame.x_shift.abs() < 1e-12 && p.frame.t_shift.abs() < 1e-12);
        assert!((p.frame.c - 1.0 / 3.0).abs() < 1e-9);
        assert!((p.target().unwrap().d2f0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gas_problem_matches_gas_module() {
        let p = ProblemSpec::named("gas").unwrap().normalize().unwrap();
        let g = crate::gas::build_gas_problem(GasParams::default()).unwrap();
        assert_eq!(p.frame, g.frame);
        let a = p.solution().unwrap().eval(0.5 * g.t0(), 0.3).unwrap();
        let b = g.solution().unwrap().eval(0.5 * g.t0(), 0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cubic_polynomial_data() {
        // u0 = −x + x³: steepest at 0 with slope −1
        let spec = ProblemSpec {
            interval: (-0.5, 0.5),
            ..ProblemSpec::custom(IcSpec::parse("poly:0,-1,0,1").unwrap(), FluxSpec::Burgers)
        };
        let p = spec.normalize().unwrap();
        assert!((p.frame.t0 + 1.0).abs() < 1e-12);
        assert!((p.frame.c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn increasing_data_does_not_blow_up() {
        let spec = ProblemSpec::custom(IcSpec::parse("poly:0,1").unwrap(), FluxSpec::Burgers);
        assert!(matches!(spec.normalize(), Err(Error::NoBlowup { .. })));
    }
}
