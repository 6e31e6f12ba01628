//! The renormalization operator and convergence to the universal profile.
//!
//! In x-space 𝒢_λ u(t, x) = λ^{1/3} u(λ^{-2/3} t, λ^{-1} x); in k-space
//! 𝒢_λ u(t, k) = λ^{4/3} u(λ^{-2/3} t, λ k). For a general flux the operator
//! also rescales the flux, f_λ(U) = λ^{2/3} f(λ^{-1/3} U), and U²/2 is fixed.
//!
//! The operator composes multiplicatively, 𝒢_{λ₁}𝒢_{λ₂} = 𝒢_{λ₁λ₂}, i.e.
//! additively in a = log λ.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::characteristics::{BlowupFrame, Characteristics};
use crate::error::{Error, Result};
use crate::model::{FluxModel, InitialData};
use crate::profile::UniversalProfile;
use crate::solution::{Differentiable, Solution};

/// A solution sampled at one time on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub t: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

/// `n` equally spaced points from `xmin` to `xmax` inclusive.
pub fn uniform_grid(xmin: f64, xmax: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(xmin < xmax) || !xmin.is_finite() || !xmax.is_finite() {
        return Err(Error::Domain(format!("invalid grid {xmin}:{xmax}:{n}")));
    }
    let dx = (xmax - xmin) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { xmax } else { xmin + i as f64 * dx })
        .collect())
}

impl SampledField {
    pub fn new(t: f64, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(Error::Domain(format!(
                "sampled field needs >= 2 points and matching lengths ({} vs {})",
                xs.len(),
                values.len()
            )));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !(dx > 0.0) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        let scale = xs[0].abs().max(xs[xs.len() - 1].abs()).max(dx);
        for (i, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * dx)).abs() > 1e-12 * scale {
                return Err(Error::Domain(format!("grid is not uniform at index {i}")));
            }
        }
        Ok(Self { t, xs, values })
    }

    pub fn sample<S: Solution + ?Sized>(solution: &S, t: f64, xs: Vec<f64>) -> Result<Self> {
        let values = solution.sample(t, &xs)?;
        Self::new(t, xs, values)
    }

    pub fn dx(&self) -> f64 {
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }

    /// max |self − other| over a shared grid.
    pub fn sup_distance(&self, other: &SampledField) -> Result<f64> {
        if self.xs != other.xs {
            return Err(Error::Domain("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Riemann-sum approximation of ∫ u(x) e^{−ikx} dx.
    pub fn fourier_at(&self, k: f64) -> Complex64 {
        let dx = self.dx();
        self.xs
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| Complex64::from_polar(v, -k * x))
            .sum::<Complex64>()
            * dx
    }
}

/// 𝒢_λ applied to a solution.
#[derive(Debug, Clone)]
pub struct Renormalized<S> {
    inner: S,
    lambda: f64,
}

impl<S> Renormalized<S> {
    /// Any λ > 0 is a group element; sweeps further require λ ≥ 1.
    pub fn new(inner: S, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {lambda}")));
        }
        Ok(Self { inner, lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn time(&self, t: f64) -> f64 {
        self.lambda.powf(-2.0 / 3.0) * t
    }
}

impl<S: Solution> Solution for Renormalized<S> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.lambda.cbrt() * self.inner.eval(self.time(t), x / self.lambda)?)
    }

    fn sample(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let inner_xs: Vec<f64> = xs.iter().map(|x| x / self.lambda).collect();
        let scale = self.lambda.cbrt();
        Ok(self
            .inner
            .sample(self.time(t), &inner_xs)?
            .into_iter()
            .map(|v| scale * v)
            .collect())
    }
}

impl<S: Differentiable> Differentiable for Renormalized<S> {
    fn derivative(&self, t: f64, x: f64, order: u32) -> Result<f64> {
        let scale = self.lambda.cbrt() * self.lambda.powi(-(order as i32));
        Ok(scale * self.inner.derivative(self.time(t), x / self.lambda, order)?)
    }
}

/// λ^{1/3} u(λ^{−2/3} t, λ^{−1} x) for λ ≥ 1.
pub fn renorm_x<S: Solution + ?Sized>(u: &S, lambda: f64, t: f64, x: f64) -> Result<f64> {
    check_sweep_lambda(lambda)?;
    Ok(lambda.cbrt() * u.eval(lambda.powf(-2.0 / 3.0) * t, x / lambda)?)
}

/// λ^{4/3} û(λ^{−2/3} t, λ k) for λ ≥ 1 and k ≥ 0.
pub fn renorm_k<K>(uk: K, lambda: f64, t: f64, k: f64) -> Result<Complex64>
where
    K: Fn(f64, f64) -> Result<Complex64>,
{
    check_sweep_lambda(lambda)?;
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("wavenumber must be non-negative, got {k}")));
    }
    Ok(uk(lambda.powf(-2.0 / 3.0) * t, lambda * k)? * lambda.powf(4.0 / 3.0))
}

fn check_sweep_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "renormalization requires lambda >= 1, got {lambda}"
        )));
    }
    Ok(())
}

/// The pointwise power uⁿ of a solution.
#[derive(Debug, Clone)]
pub struct Power<S> {
    pub inner: S,
    pub n: i32,
}

impl<S: Solution> Solution for Power<S> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.inner.eval(t, x)?.powi(self.n))
    }
}

/// f_λ(U) = λ^{2/3} f(λ^{−1/3} U).
#[derive(Debug, Clone)]
pub struct RenormalizedFlux<F> {
    inner: F,
    lambda: f64,
}

pub fn renorm_flux<F: FluxModel>(flux: F, lambda: f64) -> Result<RenormalizedFlux<F>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("scale factor must be positive, got {lambda}")));
    }
    Ok(RenormalizedFlux { inner: flux, lambda })
}

impl<F> RenormalizedFlux<F> {
    fn state(&self, u: f64) -> f64 {
        u / self.lambda.cbrt()
    }
}

impl<F: FluxModel> FluxModel for RenormalizedFlux<F> {
    fn f(&self, u: f64) -> f64 {
        self.lambda.powf(2.0 / 3.0) * self.inner.f(self.state(u))
    }
    fn df(&self, u: f64) -> f64 {
        self.lambda.cbrt() * self.inner.df(self.state(u))
    }
    fn d2f(&self, u: f64) -> f64 {
        self.inner.d2f(self.state(u))
    }
    fn d3f(&self, u: f64) -> f64 {
        self.inner.d3f(self.state(u)) / self.lambda.cbrt()
    }
    fn d4f(&self, u: f64) -> f64 {
        self.inner.d4f(self.state(u)) * self.lambda.powf(-2.0 / 3.0)
    }
    fn invert_df(&self, speed: f64) -> Result<f64> {
        Ok(self.lambda.cbrt() * self.inner.invert_df(speed / self.lambda.cbrt())?)
    }
}

/// The limit of 𝒢_λU: the universal profile divided by f″(0).
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceTarget {
    pub profile: UniversalProfile,
    pub d2f0: f64,
}

impl ConvergenceTarget {
    pub fn new(profile: UniversalProfile, d2f0: f64) -> Result<Self> {
        if !(d2f0.abs() >= 1e-12) {
            return Err(Error::Degenerate(format!("f''(0) = {d2f0:e} vanishes")));
        }
        Ok(Self { profile, d2f0 })
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.profile.eval_w(t, x)? / self.d2f0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub sup_error: f64,
}

/// One row of a scaled-profile dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub lambda: f64,
    pub x: f64,
    pub u_scaled: f64,
    pub w_target: f64,
}

/// 𝒢_λU and its target on a grid, for every λ.
pub fn scaled_profiles<S: Solution + ?Sized>(
    solution: &S,
    target: &ConvergenceTarget,
    lambdas: &[f64],
    t_eval: f64,
    xs: &[f64],
) -> Result<Vec<ProfilePoint>> {
    if !(t_eval < 0.0) {
        return Err(Error::Domain(format!("evaluation time must be negative, got {t_eval}")));
    }
    for &l in lambdas {
        check_sweep_lambda(l)?;
    }
    let pairs: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| xs.iter().map(move |&x| (l, x))).collect();
    pairs
        .into_par_iter()
        .map(|(lambda, x)| {
            let u_scaled = renorm_x(solution, lambda, t_eval, x)?;
            let w_target = target.eval(t_eval, x)?;
            Ok(ProfilePoint {
                lambda,
                x,
                u_scaled,
                w_target,
            })
        })
        .collect()
}

/// sup over `xs` of |𝒢_λU(t_eval, x) − w(t_eval, x)/f″(0)| for each λ.
pub fn convergence_sweep_solution<S: Solution + ?Sized>(
    solution: &S,
    target: &ConvergenceTarget,
    lambdas: &[f64],
    t_eval: f64,
    xs: &[f64],
) -> Result<Vec<SweepPoint>> {
    let points = scaled_profiles(solution, target, lambdas, t_eval, xs)?;
    let mut out: Vec<SweepPoint> = lambdas
        .iter()
        .map(|&lambda| SweepPoint { lambda, sup_error: 0.0 })
        .collect();
    for (i, p) in points.iter().enumerate() {
        let e = &mut out[i / xs.len()];
        e.sup_error = e.sup_error.max((p.u_scaled - p.w_target).abs());
    }
    if let Some(bad) = out.iter().find(|p| !p.sup_error.is_finite()) {
        return Err(Error::Convergence(format!(
            "non-finite sup error at lambda = {}",
            bad.lambda
        )));
    }
    Ok(out)
}

/// Convergence sweep for a problem already in its blow-up frame.
pub fn convergence_sweep<F: FluxModel, D: InitialData>(
    flux: F,
    ic: D,
    frame: &BlowupFrame,
    lambdas: &[f64],
    t_eval: f64,
    xs: &[f64],
) -> Result<Vec<SweepPoint>> {
    let target = ConvergenceTarget::new(frame.profile()?, flux.d2f(0.0))?;
    let problem = Characteristics::new(flux, ic, frame.t0)?;
    convergence_sweep_solution(&problem, &target, lambdas, t_eval, xs)
}

/// CSV with header `lambda,sup_error`.
pub fn sweep_csv(points: &[SweepPoint], digits: usize) -> String {
    crate::output::csv(
        &["lambda", "sup_error"],
        points.iter().map(|p| [p.lambda, p.sup_error]),
        digits,
    )
}

/// CSV with header `lambda,x,u_scaled,w_target`.
pub fn profiles_csv(points: &[ProfilePoint], digits: usize) -> String {
    crate::output::csv(
        &["lambda", "x", "u_scaled", "w_target"],
        points.iter().map(|p| [p.lambda, p.x, p.u_scaled, p.w_target]),
        digits,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::normalize_frame;
    use crate::model::{BurgersFlux, ErfData, PolynomialFlux};
    use crate::solution::FnSolution;

    fn erf() -> Characteristics<BurgersFlux, ErfData> {
        Characteristics::burgers(ErfData::default(), -1.0).unwrap()
    }

    #[test]
    fn identity_at_unit_scale() {
        let u = erf();
        for &x in &[-0.5, 0.1, 0.9] {
            assert_eq!(renorm_x(&u, 1.0, -0.7, x).unwrap(), u.value(-0.7, x).unwrap());
        }
        assert!(renorm_x(&u, 0.5, -0.7, 0.1).is_err());
    }

    #[test]
    fn universal_profile_is_fixed() {
        let w = UniversalProfile::new(1.0 / 3.0).unwrap();
        for &l in &[2.0, 10.0, 100.0, 1e4] {
            for &x in &[-1.0, -0.3, 0.0, 0.5, 1.0] {
                assert!((renorm_x(&w, l, -1.0, x).unwrap() - w.eval_w(-1.0, x).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn composition_multiplies_scales() {
        let u = erf();
        let xs = uniform_grid(-1.0, 1.0, 41).unwrap();
        for &(l1, l2) in &[(3.0, 7.0), (10.0, 0.5), (0.2, 0.9)] {
            let twice = Renormalized::new(Renormalized::new(&u, l1).unwrap(), l2).unwrap();
            let once = Renormalized::new(&u, l1 * l2).unwrap();
            let a = SampledField::sample(&twice, -0.25, xs.clone()).unwrap();
            let b = SampledField::sample(&once, -0.25, xs.clone()).unwrap();
            assert!(a.sup_distance(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn flux_rescaling() {
        let f = renorm_flux(BurgersFlux, 37.0).unwrap();
        for &u in &[-2.0, 0.3, 5.0] {
            assert!((f.f(u) - 0.5 * u * u).abs() < 1e-12 * u * u);
            assert!((f.df(u) - u).abs() < 1e-12 * u.abs());
        }
        let cube = PolynomialFlux::new(vec![0.0, 0.0, 0.0, 1.0]);
        let f8 = renorm_flux(&cube, 8.0).unwrap();
        assert!((f8.f(2.0) - 4.0).abs() < 1e-12);
        let f1 = renorm_flux(&cube, 1.0).unwrap();
        assert_eq!(f1.f(1.7), cube.f(1.7));
        assert!(renorm_flux(BurgersFlux, 0.0).is_err());
    }

    #[test]
    fn renormalized_flux_derivatives() {
        let base = PolynomialFlux::new(vec![0.0, 0.0, 0.5, 0.3, -0.1]);
        let f = renorm_flux(&base, 5.0).unwrap();
        let h = 1e-4;
        for &u in &[-0.4, 0.2, 0.9] {
            let fd = |g: &dyn Fn(f64) -> f64| (g(u + h) - g(u - h)) / (2.0 * h);
            assert!((fd(&|v| f.f(v)) - f.df(u)).abs() < 1e-6);
            assert!((fd(&|v| f.df(v)) - f.d2f(u)).abs() < 1e-6);
            assert!((fd(&|v| f.d2f(v)) - f.d3f(u)).abs() < 1e-6);
            assert!((fd(&|v| f.d3f(v)) - f.d4f(u)).abs() < 1e-6);
        }
        assert!((f.df(f.invert_df(0.3).unwrap()) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn scaled_power_identity() {
        let u = erf();
        let xs = uniform_grid(-1.0, 1.0, 21).unwrap();
        for n in [2, 3] {
            let l: f64 = 50.0;
            let lhs = Renormalized::new(Power { inner: &u, n }, l).unwrap();
            let rhs_base = Renormalized::new(&u, l).unwrap();
            for &x in &xs {
                let a = lhs.eval(-1.0, x).unwrap();
                let b = l.powf((1.0 - n as f64) / 3.0) * rhs_base.eval(-1.0, x).unwrap().powi(n);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300) + 1e-15);
            }
        }
    }

    #[test]
    fn fourier_routes_agree() {
        // smooth, rapidly decaying family defined for t <= 0
        let u = FnSolution(|t: f64, x: f64| Ok((1.0 + 0.3 * x) * (-x * x * (1.0 - t)).exp()));
        let t = -0.4;
        let lambda = 2.5;
        let xs = uniform_grid(-40.0, 40.0, 8001).unwrap();
        let scaled = SampledField::sample(&Renormalized::new(&u, lambda).unwrap(), t, xs.clone()).unwrap();
        let uk = |tt: f64, k: f64| Ok(SampledField::sample(&u, tt, xs.clone())?.fourier_at(k));
        for &k in &[0.5, 1.0, 2.0, 3.0] {
            let direct = scaled.fourier_at(k);
            let via_k = renorm_k(uk, lambda, t, k).unwrap();
            assert!(
                (direct - via_k).norm() < 1e-6 * direct.norm(),
                "k {k}: {direct} vs {via_k}"
            );
            // reality: u(-k) = conj u(k)
            let neg = scaled.fourier_at(-k);
            assert!((neg - direct.conj()).norm() < 1e-12 * direct.norm());
        }
        assert_eq!(renorm_k(uk, 1.0, t, 1.5).unwrap(), uk(t, 1.5).unwrap());
    }

    #[test]
    fn sweep_of_fixed_point_is_zero() {
        let w = UniversalProfile::new(0.5).unwrap();
        let target = ConvergenceTarget::new(w, 1.0).unwrap();
        let xs = uniform_grid(-1.0, 1.0, 201).unwrap();
        let pts = convergence_sweep_solution(&w, &target, &[1.0, 10.0, 100.0, 1000.0], -1.0, &xs).unwrap();
        assert!(pts.iter().all(|p| p.sup_error < 1e-9));
    }

    #[test]
    fn erf_sweep_decreases() {
        let frame = normalize_frame(&BurgersFlux, &ErfData::default(), -1.0).unwrap();
        let xs = uniform_grid(-1.0, 1.0, 2001).unwrap();
        let pts = convergence_sweep(
            frame.flux(BurgersFlux),
            frame.data(ErfData::default()),
            &frame,
            &[1.0, 10.0, 100.0, 1000.0],
            -1.0,
            &xs,
        )
        .unwrap();
        for w in pts.windows(2) {
            assert!(w[1].sup_error < w[0].sup_error);
            let ratio = w[1].sup_error / w[0].sup_error;
            let asymptotic = 10f64.powf(-2.0 / 3.0);
            assert!(ratio > asymptotic / 2.0 && ratio < asymptotic * 2.0, "ratio {ratio}");
        }
        // lambda = 1 is the raw deviation from the target
        let raw = xs
            .iter()
            .map(|&x| (ErfData::default().value(x) - frame.profile().unwrap().eval_w(-1.0, x).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!((pts[0].sup_error - raw).abs() < 1e-12);
    }

    #[test]
    fn vanishing_curvature_is_degenerate() {
        let w = UniversalProfile::new(1.0).unwrap();
        assert!(matches!(ConvergenceTarget::new(w, 1e-13), Err(Error::Degenerate(_))));
    }

    #[test]
    fn csv_layout() {
        let s = sweep_csv(
            &[SweepPoint {
                lambda: 1.0,
                sup_error: 0.5,
            }],
            17,
        );
        assert_eq!(s, "lambda,sup_error\n1,0.5\n");
    }
}
