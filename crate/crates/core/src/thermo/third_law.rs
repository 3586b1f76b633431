//! Numerical check that S(θ) → 0 with the predicted power of θ.

use serde::Serialize;

use super::asymptotics::{asymptotic_law, fit_power_law};
use super::{entropy_sweep, ThermoOptions};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::models::{BathModel, OscillatorParams};

/// Below this the quadrature error dominates the entropy.
pub const MIN_THETA: f64 = 1e-4;
pub const MIN_POINTS_PER_DECADE: f64 = 5.0;
/// Allowed |fitted - predicted| entropy exponent.
pub const EXPONENT_TOLERANCE: f64 = 0.05;
/// Monotonicity is checked for θ at or below this value.
pub const TAIL_THETA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThirdLawReport {
    pub bath: BathModel,
    /// (θ, S) in grid order (decreasing θ).
    pub samples: Vec<(f64, f64)>,
    /// Log-log slope of S over the lowest decade of the grid.
    pub fitted_exponent: Option<f64>,
    /// `None` for exponential laws.
    pub predicted_exponent: Option<f64>,
    pub all_positive: bool,
    pub decreasing: bool,
    pub pass: bool,
}

/// Evaluate S on a strictly decreasing grid and compare its low-θ slope to
/// the asymptotic law.
///
/// Power laws pass when every sample is positive, S decreases along the
/// grid for θ ≤ 0.1 (and over the lowest decade), and the fitted exponent
/// is within 0.05 of the prediction. Exponential laws (dissipationless
/// baths) pass when S is non-negative and non-increasing there; samples may
/// underflow to zero.
pub fn check_third_law(
    bath: &BathModel,
    params: &OscillatorParams,
    theta_grid: &[f64],
    options: &ThermoOptions,
    exec: Execution,
) -> Result<ThirdLawReport> {
    validate_grid(theta_grid)?;
    let law = asymptotic_law(bath, params)?.entropy;

    let entropies = entropy_sweep(bath, params, theta_grid, options, exec)
        .into_iter()
        .map(|r| r.map(|e| e.value))
        .collect::<Result<Vec<f64>>>()?;
    let samples: Vec<(f64, f64)> = theta_grid.iter().copied().zip(entropies.iter().copied()).collect();

    let theta_min = *theta_grid.last().unwrap_or(&MIN_THETA);
    let window: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(t, _)| *t <= 10.0 * theta_min * (1.0 + 1e-12))
        .collect();
    let (wt, ws): (Vec<f64>, Vec<f64>) = window.iter().copied().unzip();
    let fitted_exponent = fit_power_law(&wt, &ws).map(|(p, _)| p);

    let tail: Vec<f64> = samples
        .iter()
        .filter(|(t, _)| *t <= TAIL_THETA || *t <= 10.0 * theta_min * (1.0 + 1e-12))
        .map(|(_, s)| *s)
        .collect();

    let power = law.is_power_law();
    let all_positive = entropies.iter().all(|s| *s > 0.0);
    let (decreasing, pass) = if power {
        let dec = tail.windows(2).all(|w| w[1] < w[0]);
        let exponent_ok = fitted_exponent.is_some_and(|p| (p - law.exponent).abs() < EXPONENT_TOLERANCE);
        (dec, all_positive && dec && exponent_ok)
    } else {
        let dec = tail.windows(2).all(|w| w[1] <= w[0]);
        let nonneg = entropies.iter().all(|s| *s >= 0.0);
        (dec, nonneg && dec)
    };

    Ok(ThirdLawReport {
        bath: *bath,
        samples,
        fitted_exponent,
        predicted_exponent: power.then_some(law.exponent),
        all_positive,
        decreasing,
        pass,
    })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Config("third-law grid needs at least two temperatures".into()));
    }
    if !grid.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::Config("third-law grid must be strictly decreasing".into()));
    }
    let (hi, lo) = (grid[0], grid[grid.len() - 1]);
    if lo.is_nan() || lo < MIN_THETA || !hi.is_finite() {
        return Err(Error::Config(format!(
            "third-law grid must lie in [{MIN_THETA:e}, inf), lowest value is {lo}"
        )));
    }
    let decades = (hi / lo).log10().max(1.0);
    let density = grid.len() as f64 / decades;
    if density < MIN_POINTS_PER_DECADE {
        return Err(Error::Config(format!(
            "third-law grid too short: {density:.2} points per decade, need {MIN_POINTS_PER_DECADE}"
        )));
    }
    let in_window = grid.iter().filter(|t| **t <= 10.0 * lo * (1.0 + 1e-12)).count();
    if in_window < 3 {
        return Err(Error::Config(format!(
            "only {in_window} points in the lowest decade, need at least 3"
        )));
    }
    Ok(())
}
