//! Least-squares line fits used for decay and growth exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// y ≈ intercept + slope·x with the standard error of the slope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points: usize,
}

impl LineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("{n} points, need at least 3 for a fit")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(LineFit { slope, intercept, stderr, points: n })
}

/// Fits log y against log x, skipping non-positive values.
pub fn fit_log_log(points: impl IntoIterator<Item = (f64, f64)>) -> Result<LineFit> {
    let logged: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    fit_line(&logged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let fit = fit_log_log((1..=20).map(|k| (k as f64, 3.0 * (k as f64).powf(-1.5)))).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!(fit.stderr < 1e-10);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_log_log([(1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(fit_log_log([(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 1.0)]).is_err());
    }
}
