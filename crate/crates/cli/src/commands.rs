use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use blowup::gas::{build_gas_problem, GasParams};
use blowup::output::{csv, format_number, key_values, DEFAULT_PRECISION};
use blowup::problems::{FluxSpec, IcSpec, NormalizedProblem, ProblemSpec};
use blowup::profile::UniversalProfile;
use blowup::renorm::{convergence_sweep_solution, profiles_csv, scaled_profiles, sweep_csv, uniform_grid};
use blowup::spectral::{
    fields_csv, fit_report, fit_speed_and_growth, track_wave, track_wave_located, trajectory_csv, transform_series,
    GridSpec, LogFourierField, TrajectoryPoint, DEFAULT_HALF_WIDTH, DEFAULT_POINTS,
};

use crate::args::{
    Common, ConvergeArgs, Count, GasFrameArgs, Grid, Num, NumList, ProblemArgs, ProfileArgs, SolitonArgs, Text,
};
use crate::config::Config;
use crate::error::{CliError, CliResult};

const DEFAULT_TAUS: [f64; 5] = [2.0, 3.0, 4.0, 5.0, 6.0];
const DEFAULT_XI_STEP: usize = 16;

/// Settings shared by every subcommand after merging flags and config file.
struct Output {
    out: Option<PathBuf>,
    precision: usize,
    gnuplot: bool,
}

impl Output {
    fn resolve(common: &Common, cfg: &Config) -> CliResult<Self> {
        let precision = cfg.pick_or(common.precision, "precision", Count(DEFAULT_PRECISION))?.0;
        if !(1..=17).contains(&precision) {
            return Err(CliError::Config(format!("precision must be 1..=17, got {precision}")));
        }
        let out = cfg.pick(common.out.clone(), "out")?.map(|t: Text| PathBuf::from(t.0));
        let gnuplot = cfg.switch(common.gnuplot, "gnuplot")?;
        if gnuplot && out.is_none() {
            return Err(CliError::Config("--gnuplot needs --out".into()));
        }
        if let Some(p) = &out {
            // fail early on unwritable paths
            fs::File::create(p).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))?;
        }
        Ok(Self {
            out,
            precision,
            gnuplot,
        })
    }

    /// `<stem><suffix>` next to the main output.
    fn sibling(&self, suffix: &str) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        let stem = out.file_stem()?.to_string_lossy().into_owned();
        Some(out.with_file_name(format!("{stem}{suffix}")))
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(p) => write_file(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn num(&self, v: f64) -> String {
        format_number(v, self.precision)
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_config(common: &Common) -> CliResult<Config> {
    match &common.config {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn grid_points(g: Grid) -> CliResult<Vec<f64>> {
    Ok(uniform_grid(g.xmin, g.xmax, g.n)?)
}

fn resolve_problem(args: &ProblemArgs, cfg: &Config) -> CliResult<ProblemSpec> {
    let problem = cfg.pick(args.problem.clone(), "problem")?.map(|t: Text| t.0);
    let ic = cfg.pick(args.ic.clone(), "ic")?.map(|t: Text| t.0);
    let flux = cfg.pick(args.flux.clone(), "flux")?.map(|t: Text| t.0);
    let gamma = cfg.pick::<Num>(args.gamma, "gamma")?.map(|n| n.0);
    let entropy = cfg.pick::<Num>(args.entropy, "A")?.map(|n| n.0);

    let mut spec = if ic.is_some() || flux.is_some() {
        if problem.is_some() {
            return Err(CliError::Config(
                "give either --problem or --ic/--flux, not both".into(),
            ));
        }
        let ic = IcSpec::parse(ic.as_deref().unwrap_or("erf"))?;
        let flux = FluxSpec::parse(flux.as_deref().unwrap_or("burgers"))?;
        ProblemSpec::custom(ic, flux)
    } else {
        ProblemSpec::named(problem.as_deref().unwrap_or("burgers-erf"))?
    };
    if gamma.is_some() || entropy.is_some() {
        match &mut spec.flux {
            FluxSpec::Gas { gamma: g, entropy: a } => {
                *g = gamma.unwrap_or(*g);
                *a = entropy.unwrap_or(*a);
            }
            _ => return Err(CliError::Config("--gamma and --A apply to the gas flux only".into())),
        }
    }
    Ok(spec)
}

fn problem_summary(spec: &ProblemSpec, p: &NormalizedProblem) -> String {
    let mut s = format!("# ic={} flux={}", spec.ic, spec.flux);
    if let FluxSpec::Gas { gamma, entropy } = spec.flux {
        let _ = write!(s, " gamma={gamma} A={entropy}");
    }
    let _ = write!(s, " t0={} c={}", p.frame.t0, p.frame.c);
    s
}

pub fn cmd_profile(args: &ProfileArgs) -> CliResult<()> {
    let cfg = load_config(&args.common)?;
    let c = cfg.pick_or(args.c, "c", Num(1.0))?.0;
    let t = cfg.pick_or(args.t, "t", Num(-1.0))?.0;
    let grid = cfg.pick_or(
        args.grid,
        "grid",
        Grid {
            xmin: -2.0,
            xmax: 2.0,
            n: 101,
        },
    )?;
    let output = Output::resolve(&args.common, &cfg)?;

    let profile = UniversalProfile::new(c)?;
    let xs = grid_points(grid)?;
    let rows = xs
        .iter()
        .map(|&x| Ok([x, profile.eval_w(t, x)?]))
        .collect::<blowup::Result<Vec<_>>>()?;
    output.emit(&csv(&["x", "w"], rows, output.precision))?;

    if output.gnuplot {
        let data = file_name(output.out.as_deref().unwrap_or(Path::new("")));
        let script = format!(
            "set datafile separator ','\nset key top right\nset xlabel 'x'\nset ylabel 'w'\n\
             plot '{data}' using 1:2 skip 1 with lines title 'w(t={t}, x), c={c}'\n"
        );
        write_file(&output.sibling(".gp").unwrap_or_default(), &script)?;
    }
    Ok(())
}

pub fn cmd_converge(args: &ConvergeArgs) -> CliResult<()> {
    let cfg = load_config(&args.common)?;
    let spec = resolve_problem(&args.problem, &cfg)?;
    let lambdas = cfg
        .pick_or(args.lambdas.clone(), "lambdas", NumList(vec![1.0, 10.0, 100.0, 1000.0]))?
        .0;
    if lambdas.is_empty() || lambdas.iter().any(|&l| l < 1.0) {
        return Err(CliError::Config("lambda values must be >= 1".into()));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config("lambda values must be strictly increasing".into()));
    }
    let grid = cfg.pick_or(
        args.grid,
        "grid",
        Grid {
            xmin: -1.0,
            xmax: 1.0,
            n: 201,
        },
    )?;
    let t_eval = cfg.pick::<Num>(args.t_eval, "t-eval")?.map(|n| n.0);
    let dump = cfg.switch(args.dump_profiles, "dump-profiles")?;
    let output = Output::resolve(&args.common, &cfg)?;
    if dump && output.out.is_none() {
        return Err(CliError::Config("--dump-profiles needs --out".into()));
    }

    let problem = spec.normalize()?;
    let t_eval = t_eval.unwrap_or(problem.frame.t0);
    let xs = grid_points(grid)?;
    let solution = problem.solution()?;
    let target = problem.target()?;
    let sweep = convergence_sweep_solution(&solution, &target, &lambdas, t_eval, &xs)?;
    output.emit(&sweep_csv(&sweep, output.precision))?;
    eprintln!("{}", problem_summary(&spec, &problem));

    let profiles_path = output.sibling("_profiles.csv");
    if dump {
        let points = scaled_profiles(&solution, &target, &lambdas, t_eval, &xs)?;
        write_file(
            profiles_path.as_deref().unwrap_or(Path::new("")),
            &profiles_csv(&points, output.precision),
        )?;
    }
    if output.gnuplot {
        let sweep_name = file_name(output.out.as_deref().unwrap_or(Path::new("")));
        let mut script =
            String::from("set datafile separator ','\nset logscale xy\nset xlabel 'lambda'\nset ylabel 'sup error'\n");
        let _ = writeln!(
            script,
            "plot '{sweep_name}' using 1:2 skip 1 with linespoints title 'sup error'"
        );
        if dump {
            let prof = file_name(profiles_path.as_deref().unwrap_or(Path::new("")));
            script.push_str("pause -1\nunset logscale\nset xlabel 'x'\nset ylabel 'u'\nplot \\\n");
            for l in &lambdas {
                let lv = output.num(*l);
                let _ = writeln!(
                    script,
                    "  '{prof}' using 2:($1=={lv} ? $3 : 1/0) skip 1 with lines title 'lambda={lv}', \\"
                );
            }
            let first = output.num(lambdas[0]);
            let _ = writeln!(
                script,
                "  '{prof}' using 2:($1=={first} ? $4 : 1/0) skip 1 with lines dt 2 title 'limit'"
            );
        }
        write_file(&output.sibling(".gp").unwrap_or_default(), &script)?;
    }
    Ok(())
}

/// Fields or a trajectory read back from CSV.
enum SolitonInput {
    Fields(Vec<LogFourierField>),
    Trajectory(Vec<TrajectoryPoint>),
}

fn parse_rows(text: &str) -> CliResult<(String, Vec<[f64; 3]>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("input file is empty".into()))?
        .trim()
        .to_string();
    let rows = lines
        .enumerate()
        .map(|(i, l)| {
            let v: Vec<f64> = l
                .split(',')
                .map(|c| c.trim().parse::<Num>().map(|n| n.0))
                .collect::<Result<_, String>>()
                .map_err(|e| CliError::Config(format!("input row {}: {e}", i + 2)))?;
            <[f64; 3]>::try_from(v).map_err(|_| CliError::Config(format!("input row {}: expected 3 columns", i + 2)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((header, rows))
}

fn read_soliton_input(path: &Path, n: u32, decay: f64) -> CliResult<SolitonInput> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let (header, rows) = parse_rows(&text)?;
    match header.as_str() {
        "tau,xi,amp" => {
            let mut fields: Vec<LogFourierField> = Vec::new();
            for [tau, xi, amp] in rows {
                // stored amplitudes are compensated
                let a = amp * (decay * tau).exp();
                match fields.last_mut() {
                    Some(f) if f.tau == tau => {
                        f.xis.push(xi);
                        f.amps.push(a);
                    }
                    _ => fields.push(LogFourierField {
                        tau,
                        xis: vec![xi],
                        amps: vec![a],
                        n,
                    }),
                }
            }
            let fields = fields
                .into_iter()
                .map(|f| LogFourierField::new(f.tau, f.xis, f.amps, n))
                .collect::<blowup::Result<Vec<_>>>()?;
            Ok(SolitonInput::Fields(fields))
        }
        "tau,xi_peak,amp_peak" => Ok(SolitonInput::Trajectory(
            rows.into_iter()
                .map(|[tau, xi_peak, amp_peak]| TrajectoryPoint {
                    tau,
                    xi_peak,
                    amp_peak,
                    decay_comp: decay,
                })
                .collect(),
        )),
        other => Err(CliError::Config(format!(
            "unrecognized input header '{other}' (expected tau,xi,amp or tau,xi_peak,amp_peak)"
        ))),
    }
}

pub fn cmd_soliton(args: &SolitonArgs) -> CliResult<()> {
    let cfg = load_config(&args.common)?;
    let n = cfg.pick_or(args.order, "order", Count(2))?.0;
    let n = u32::try_from(n).map_err(|_| CliError::Config(format!("order {n} is too large")))?;
    let decay = 1.5 * n as f64 - 2.0;
    let locator = cfg.pick_or(args.locator, "locator", Count(2))?.0 as u32;
    let xi_step = cfg.pick_or(args.xi_step, "xi-step", Count(DEFAULT_XI_STEP))?.0;
    let input = cfg.pick(
        args.input.clone().map(|p| Text(p.to_string_lossy().into_owned())),
        "input",
    )?;
    let output = Output::resolve(&args.common, &cfg)?;

    let track = |fields: &[LogFourierField]| {
        if n < 2 {
            track_wave_located(fields, decay, locator)
        } else {
            track_wave(fields, decay)
        }
    };

    let (fields, trajectory) = match input {
        Some(Text(path)) => match read_soliton_input(Path::new(&path), n, decay)? {
            SolitonInput::Fields(f) => {
                let tr = track(&f)?;
                (Some(f), tr)
            }
            SolitonInput::Trajectory(tr) => (None, tr),
        },
        None => {
            let spec = resolve_problem(&args.problem, &cfg)?;
            let taus = cfg
                .pick_or(args.taus.clone(), "taus", NumList(DEFAULT_TAUS.to_vec()))?
                .0;
            if taus.iter().any(|&t| t < 0.0) {
                return Err(CliError::Config("tau values must be >= 0".into()));
            }
            let half_width = cfg.pick_or(args.half_width, "half-width", Num(DEFAULT_HALF_WIDTH))?.0;
            let points = cfg.pick_or(args.points, "points", Count(DEFAULT_POINTS))?.0;
            let grid = GridSpec::new(half_width, points).map_err(|e| CliError::Config(e.to_string()))?;
            let problem = spec.normalize()?;
            eprintln!("{}", problem_summary(&spec, &problem));
            let solution = problem.solution_for_window(half_width)?;
            let fields = transform_series(&solution, problem.frame.t0, &taus, n, &grid)?;
            let tr = track(&fields)?;
            (Some(fields), tr)
        }
    };

    let fit = fit_speed_and_growth(&trajectory)?;
    let report = fit_report(&fit, n, output.precision);
    print!("{report}");
    if let (Some(fields), Some(_)) = (&fields, &output.out) {
        output.emit(&fields_csv(fields, decay, xi_step, output.precision))?;
    }
    if let Some(p) = output.sibling("_trajectory.csv") {
        write_file(&p, &trajectory_csv(&trajectory, output.precision))?;
    }
    if let Some(p) = output.sibling("_fit.txt") {
        write_file(&p, &report)?;
    }
    if output.gnuplot {
        let traj = file_name(&output.sibling("_trajectory.csv").unwrap_or_default());
        let mut script =
            String::from("set datafile separator ','\nset xlabel 'xi = log k'\nset ylabel 'compensated amplitude'\n");
        if fields.is_some() {
            let data = file_name(output.out.as_deref().unwrap_or(Path::new("")));
            script.push_str("plot \\\n");
            let taus: Vec<String> = trajectory.iter().map(|p| output.num(p.tau)).collect();
            for (i, tau) in taus.iter().enumerate() {
                let sep = if i + 1 < taus.len() { ", \\" } else { "" };
                let _ = writeln!(
                    script,
                    "  '{data}' using 2:($1=={tau} ? $3 : 1/0) skip 1 with lines title 'tau={tau}'{sep}"
                );
            }
            script.push_str("pause -1\n");
        }
        let _ = writeln!(
            script,
            "set xlabel 'tau'\nset ylabel 'xi_peak'\nplot '{traj}' using 1:2 skip 1 with linespoints title 'peak', {} + {}*x title 'fit'",
            output.num(fit.xi_fit.intercept),
            output.num(fit.speed)
        );
        write_file(&output.sibling(".gp").unwrap_or_default(), &script)?;
    }
    Ok(())
}

pub fn cmd_gas_frame(args: &GasFrameArgs) -> CliResult<()> {
    let cfg = load_config(&args.common)?;
    let d = GasParams::default();
    let gamma = cfg.pick_or(args.gamma, "gamma", Num(d.gamma))?.0;
    let entropy = cfg.pick_or(args.entropy, "A", Num(d.entropy))?.0;
    let output = Output::resolve(&args.common, &cfg)?;
    let params = GasParams { gamma, entropy, ..d };
    params.validate()?;
    let g = build_gas_problem(params)?;
    let six = |v: f64| {
        let s = format!("{v:.6}");
        if s == "-0.000000" {
            "0.000000".to_string()
        } else {
            s
        }
    };
    let report = key_values([
        ("gamma", output.num(gamma)),
        ("A", output.num(entropy)),
        ("t0", six(g.t0())),
        ("x1", six(g.x1())),
        ("rho1", six(g.rho1())),
        ("v1", six(g.v1())),
        ("c", six(g.frame.c)),
        ("d2f0", six(g.d2f0())),
    ]);
    output.emit(&report)?;
    Ok(())
}
