use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

/// A finite real number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl FromStr for Num {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
        if !v.is_finite() {
            return Err(format!("'{s}' is not finite"));
        }
        Ok(Num(v))
    }
}

/// A comma-separated list of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl FromStr for NumList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(',')
            .map(|p| p.parse::<Num>().map(|n| n.0))
            .collect::<Result<Vec<f64>, String>>()?;
        Ok(NumList(v))
    }
}

/// `XMIN:XMAX:N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' must be XMIN:XMAX:N"));
        }
        let xmin = parts[0].parse::<Num>()?.0;
        let xmax = parts[1].parse::<Num>()?.0;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("'{}' is not a point count", parts[2]))?;
        if n < 2 {
            return Err(format!("grid needs at least 2 points, got {n}"));
        }
        if xmax <= xmin {
            return Err(format!("grid needs XMIN < XMAX, got {xmin}:{xmax}"));
        }
        Ok(Grid { xmin, xmax, n })
    }
}

/// A non-negative integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Count(pub usize);

impl FromStr for Count {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .parse()
            .map(Count)
            .map_err(|_| format!("'{s}' is not a non-negative integer"))
    }
}

/// Free text (problem ids, paths from a config file).
#[derive(Debug, Clone, PartialEq)]
pub struct Text(pub String);

impl FromStr for Text {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(Text(s.trim().to_string()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "blowup",
    version,
    about = "Universal blow-up of 1-D scalar conservation laws"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the universal profile w(t, x) as "x,w".
    Profile(ProfileArgs),
    /// Convergence of renormalized solutions to the universal profile.
    Converge(ConvergeArgs),
    /// Solitary wave in log-Fourier space, with speed and growth fits.
    Soliton(SolitonArgs),
    /// Blow-up frame constants of the polytropic gas problem.
    GasFrame(GasFrameArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<Text>,
    /// key = value file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Significant digits in numeric output (1-17)
    #[arg(long)]
    pub precision: Option<Count>,
    /// Also write a gnuplot script next to the output
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Args, Clone)]
pub struct ProblemArgs {
    /// Named problem: burgers-erf or gas
    #[arg(long)]
    pub problem: Option<Text>,
    /// Initial data: erf, arctan or poly:a0,a1,...
    #[arg(long)]
    pub ic: Option<Text>,
    /// Flux: burgers, gas or poly:b0,b1,...
    #[arg(long)]
    pub flux: Option<Text>,
    /// Adiabatic exponent of the gas flux
    #[arg(long)]
    pub gamma: Option<Num>,
    /// Entropy constant of the gas flux
    #[arg(long = "A")]
    pub entropy: Option<Num>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    /// Cusp coefficient c > 0
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<Num>,
    /// Time t <= 0
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<Num>,
    /// XMIN:XMAX:N
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Scale factors, e.g. 1,10,100,1000
    #[arg(long)]
    pub lambdas: Option<NumList>,
    /// Evaluation time in the blow-up frame (defaults to t0)
    #[arg(long, allow_hyphen_values = true)]
    pub t_eval: Option<Num>,
    /// XMIN:XMAX:N
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Write "lambda,x,u_scaled,w_target" to <out stem>_profiles.csv
    #[arg(long)]
    pub dump_profiles: bool,
}

#[derive(Debug, Args)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Log-times, e.g. 2,3,4,5,6
    #[arg(long)]
    pub taus: Option<NumList>,
    /// Derivative order n
    #[arg(long)]
    pub order: Option<Count>,
    /// Window half-width L
    #[arg(long)]
    pub half_width: Option<Num>,
    /// Window points (power of two)
    #[arg(long)]
    pub points: Option<Count>,
    /// Keep every k-th wavenumber in the field dump
    #[arg(long)]
    pub xi_step: Option<Count>,
    /// Order used to locate the wave when n < 2
    #[arg(long)]
    pub locator: Option<Count>,
    /// Read fields ("tau,xi,amp") or a trajectory ("tau,xi_peak,amp_peak") instead of computing
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GasFrameArgs {
    #[command(flatten)]
    pub common: Common,
    /// Adiabatic exponent
    #[arg(long)]
    pub gamma: Option<Num>,
    /// Entropy constant
    #[arg(long = "A")]
    pub entropy: Option<Num>,
}
