//! Ordinary least-squares straight lines.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// y − (slope·x + intercept) per point.
    pub residuals: Vec<f64>,
}

/// Fit y ≈ slope·x + intercept.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Rank(format!(
            "need >= 2 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-14 * xs.iter().map(|x| x * x).sum::<f64>().max(1e-300)) {
        return Err(Error::Rank("abscissae are (numerically) all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs.iter().zip(ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(LineFit {
        slope,
        intercept,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 * x - 0.25).collect();
        let fit = line_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-14);
        assert!((fit.intercept + 0.25).abs() < 1e-14);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn degenerate_abscissae() {
        assert!(matches!(
            line_fit(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::Rank(_))
        ));
        assert!(matches!(line_fit(&[1.0], &[1.0]), Err(Error::Rank(_))));
    }
}
