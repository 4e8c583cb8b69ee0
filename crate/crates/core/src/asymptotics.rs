//! Two-term expansions of the first quarter-disk eigenvalues as the crack
//! closes (`delta = pi/2 - epsilon -> 0`), and least-squares fits of computed
//! curves against them.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::domain::QuarterCase;
use crate::error::{Error, Result};
use crate::specfun::{bessel_j, bessel_j_prime, bessel_zero};

/// Shape of the correction term `g(delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `g = 1 / |log delta|`.
    InverseLog,
    /// `g = delta^2`.
    Quadratic,
}

impl Law {
    pub fn g(self, delta: f64) -> f64 {
        match self {
            Law::InverseLog => 1.0 / delta.ln().abs(),
            Law::Quadratic => delta * delta,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Law::InverseLog => "inverse_log",
            Law::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Proven,
    /// Derived from an unproven hypothesis on the limiting eigenfunction.
    Conjectural,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Proven => "proven",
            Status::Conjectural => "conjectural",
        }
    }
}

/// `lambda(epsilon) ~ lambda_limit + coefficient * g(pi/2 - epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticModel {
    pub case: QuarterCase,
    pub lambda_limit: f64,
    pub coefficient: f64,
    pub law: Law,
    pub status: Status,
}

/// Expansion for `case` with inner radius `r1` and outer radius `r2`.
pub fn model(case: QuarterCase, r1: f64, r2: f64) -> Result<AsymptoticModel> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::validation(format!("need 0 < R1 < R2, got R1={r1}, R2={r2}")));
    }
    let (ell, prefactor, law, status) = match case {
        QuarterCase::Nnd => (0, 4.0, Law::InverseLog, Status::Proven),
        QuarterCase::Dnd => (1, 8.0, Law::InverseLog, Status::Proven),
        QuarterCase::Ddd => (2, 16.0, Law::Quadratic, Status::Conjectural),
        QuarterCase::Ndd => (1, 4.0, Law::Quadratic, Status::Conjectural),
    };
    let j = bessel_zero(ell, 1)?.value;
    let ratio = bessel_j(ell, j * r1 / r2)? / bessel_j_prime(ell, j)?;
    Ok(AsymptoticModel {
        case,
        lambda_limit: (j / r2).powi(2),
        coefficient: prefactor / (r2 * r2) * ratio * ratio,
        law,
        status,
    })
}

fn delta_of(epsilon: f64) -> Result<f64> {
    let delta = FRAC_PI_2 - epsilon;
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "opening {epsilon} is outside the expansion window 0 <= pi/2 - epsilon < 1"
        )));
    }
    Ok(delta)
}

impl AsymptoticModel {
    pub fn predict(&self, epsilon: f64) -> Result<f64> {
        let delta = delta_of(epsilon)?;
        Ok(self.lambda_limit + self.coefficient * self.law.g(delta))
    }
}

pub fn predict(model: &AsymptoticModel, epsilon: f64) -> Result<f64> {
    model.predict(epsilon)
}

/// Half-widths `pi/2 - epsilon` of the nested fitting windows.
pub const WINDOWS: [f64; 3] = [0.3, 0.15, 0.075];

/// Minimum number of points in the widest window.
pub const MIN_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFit {
    pub delta_max: f64,
    pub points: usize,
    pub c_hat: f64,
    /// `c_hat / reference`, NaN without a reference.
    pub ratio: f64,
    pub rms_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub law: Law,
    pub lambda_limit: f64,
    /// Slope from the widest window.
    pub c_hat: f64,
    pub windows: Vec<WindowFit>,
    /// `|ratio - 1|` does not grow (beyond 1e-9) as the window shrinks.
    pub approaching: bool,
}

impl FitReport {
    pub fn trend(&self) -> String {
        let ratios: Vec<String> = self
            .windows
            .iter()
            .map(|w| format!("delta<={}: {:.4}", w.delta_max, w.ratio))
            .collect();
        format!(
            "C_hat/C {} ({})",
            if self.approaching { "approaches 1" } else { "does not approach 1" },
            ratios.join(", ")
        )
    }
}

fn fit_window(points: &[(f64, f64)], law: Law, lambda_limit: f64) -> (f64, f64) {
    let (mut gy, mut gg) = (0.0, 0.0);
    for &(d, l) in points {
        let g = law.g(d);
        gy += g * (l - lambda_limit);
        gg += g * g;
    }
    let c = gy / gg;
    let ss: f64 = points.iter().map(|&(d, l)| (l - lambda_limit - c * law.g(d)).powi(2)).sum();
    (c, (ss / points.len() as f64).sqrt())
}

/// Least-squares slope of `lambda - lambda_limit` against `g(pi/2 - epsilon)`
/// on the windows of [`WINDOWS`]; `reference` is the predicted coefficient.
pub fn fit_coefficient(
    epsilon: &[f64],
    lambda: &[f64],
    law: Law,
    lambda_limit: f64,
    reference: Option<f64>,
) -> Result<FitReport> {
    if epsilon.len() != lambda.len() {
        return Err(Error::Dimension { expected: epsilon.len(), got: lambda.len() });
    }
    let tail: Vec<(f64, f64)> = epsilon
        .iter()
        .zip(lambda)
        .map(|(&e, &l)| (FRAC_PI_2 - e, l))
        .filter(|&(d, _)| d > 0.0 && d <= WINDOWS[0] + 1e-12)
        .collect();
    if tail.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_POINTS} points with pi/2 - epsilon <= {}, got {}",
            WINDOWS[0],
            tail.len()
        )));
    }
    let mut windows = Vec::new();
    for &w in &WINDOWS {
        let pts: Vec<(f64, f64)> = tail.iter().copied().filter(|&(d, _)| d <= w + 1e-12).collect();
        if pts.len() < 2 {
            break;
        }
        let (c_hat, rms_residual) = fit_window(&pts, law, lambda_limit);
        windows.push(WindowFit {
            delta_max: w,
            points: pts.len(),
            c_hat,
            ratio: reference.map_or(f64::NAN, |c| c_hat / c),
            rms_residual,
        });
    }
    let approaching = reference.is_some()
        && windows.len() >= 2
        && windows.windows(2).all(|p| (p[1].ratio - 1.0).abs() <= (p[0].ratio - 1.0).abs() + 1e-9);
    Ok(FitReport { law, lambda_limit, c_hat: windows[0].c_hat, windows, approaching })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSelection {
    pub inverse_log: FitReport,
    pub quadratic: FitReport,
    /// Law with the smaller residual on the widest window.
    pub preferred: Law,
}

/// Fits both laws and prefers the one with the smaller residual.
pub fn select_law(epsilon: &[f64], lambda: &[f64], lambda_limit: f64) -> Result<ModelSelection> {
    let inverse_log = fit_coefficient(epsilon, lambda, Law::InverseLog, lambda_limit, None)?;
    let quadratic = fit_coefficient(epsilon, lambda, Law::Quadratic, lambda_limit, None)?;
    let preferred = if quadratic.windows[0].rms_residual < inverse_log.windows[0].rms_residual {
        Law::Quadratic
    } else {
        Law::InverseLog
    };
    Ok(ModelSelection { inverse_log, quadratic, preferred })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_and_laws() {
        let nnd = model(QuarterCase::Nnd, 0.4356, 1.0).unwrap();
        assert!((nnd.lambda_limit - 5.783).abs() < 1e-3);
        assert_eq!(nnd.law, Law::InverseLog);
        let dnd = model(QuarterCase::Dnd, 0.4356, 1.0).unwrap();
        assert!((dnd.lambda_limit - 14.68).abs() < 1e-2);
        let ndd = model(QuarterCase::Ndd, 0.4356, 1.0).unwrap();
        assert!((dnd.coefficient / ndd.coefficient - 2.0).abs() < 1e-14);
        assert_eq!(model(QuarterCase::Ddd, 0.4, 1.0).unwrap().status, Status::Conjectural);
        assert!(model(QuarterCase::Ddd, 1.0, 1.0).is_err());
    }

    #[test]
    fn predict_window() {
        let m = model(QuarterCase::Nnd, 0.4356, 1.0).unwrap();
        let e = FRAC_PI_2 - (-10.0f64).exp();
        assert!((m.predict(e).unwrap() - (m.lambda_limit + m.coefficient / 10.0)).abs() < 1e-9);
        assert_eq!(m.predict(FRAC_PI_2).unwrap(), m.lambda_limit);
        assert!(matches!(m.predict(0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn synthetic_fit() {
        let m = model(QuarterCase::Ddd, 0.4356, 1.0).unwrap();
        let eps: Vec<f64> = (1..=10).map(|i| FRAC_PI_2 - 0.03 * i as f64).collect();
        let lam: Vec<f64> = eps.iter().map(|&e| m.predict(e).unwrap()).collect();
        let r = fit_coefficient(&eps, &lam, m.law, m.lambda_limit, Some(m.coefficient)).unwrap();
        assert!((r.c_hat - m.coefficient).abs() < 1e-6 * m.coefficient);
        let sel = select_law(&eps, &lam, m.lambda_limit).unwrap();
        assert_eq!(sel.preferred, Law::Quadratic);
        assert!(matches!(
            fit_coefficient(&eps[..2], &lam[..2], m.law, m.lambda_limit, None),
            Err(Error::InsufficientData(_))
        ));
    }
}
