//! Single-mode thermodynamics of an oscillator of frequency ω at reduced
//! temperature θ, zero-point energy omitted.

use crate::error::Result;
use crate::models::check_omega;

use super::check_theta;

/// Above this ω/θ the log is replaced by its leading term -e^(-ω/θ).
pub const LARGE_RATIO: f64 = 700.0;

/// f(ω, θ) = θ log(1 - e^(-ω/θ)).
pub fn bose_free_energy(omega: f64, theta: f64) -> Result<f64> {
    check_omega(omega)?;
    check_theta(theta)?;
    Ok(free_energy_kernel(omega, theta))
}

/// s(ω, θ) = -∂f/∂θ = -log(1 - e^(-x)) + x/(e^x - 1), x = ω/θ.
pub fn bose_entropy_density(omega: f64, theta: f64) -> Result<f64> {
    check_omega(omega)?;
    check_theta(theta)?;
    Ok(entropy_kernel(omega, theta))
}

/// u(ω, θ) = ω/(e^(ω/θ) - 1), the Planck energy without zero point.
pub fn bose_energy_density(omega: f64, theta: f64) -> Result<f64> {
    check_omega(omega)?;
    check_theta(theta)?;
    Ok(energy_kernel(omega, theta))
}

/// log(1 - e^(-x)) for x > 0, accurate at both ends.
fn log_one_minus_exp(x: f64) -> f64 {
    if x > LARGE_RATIO {
        -(-x).exp()
    } else if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

pub(crate) fn free_energy_kernel(omega: f64, theta: f64) -> f64 {
    theta * log_one_minus_exp(omega / theta)
}

pub(crate) fn entropy_kernel(omega: f64, theta: f64) -> f64 {
    let x = omega / theta;
    -log_one_minus_exp(x) + x / x.exp_m1()
}

pub(crate) fn energy_kernel(omega: f64, theta: f64) -> f64 {
    omega / (omega / theta).exp_m1()
}
