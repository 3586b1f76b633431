//! Free energy, entropy and internal energy of the damped oscillator from
//! the remarkable formula
//!
//! F(θ) = (1/π) ∫₀^∞ f(ω, θ) · Im{d log α(ω + i0⁺)/dω} dω,
//!
//! with f the single-mode free energy. Because the spectral weight does not
//! depend on θ, S and U follow by swapping f for the single-mode entropy or
//! Planck energy under the integral.
//!
//! Temperatures are reduced: θ = k_B T/ħ in the frequency unit of the
//! oscillator parameters (θ = kT/ħω₀ for the default ω₀ = 1).

mod asymptotics;
mod bose;
mod special;
mod third_law;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use asymptotics::{asymptotic_law, fit_power_law, fit_prefactor, AsymptoticLaw, AsymptoticLaws, LawForm};
pub use bose::{bose_energy_density, bose_entropy_density, bose_free_energy, LARGE_RATIO};
pub use special::{bose_log_moment, gamma_fn, zeta_fn};
pub use third_law::{check_third_law, ThirdLawReport, EXPONENT_TOLERANCE, MIN_THETA, MIN_POINTS_PER_DECADE};

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::models::{BathModel, OscillatorParams};
use crate::quadrature::{default_breakpoints, integrate_with, QuadConfig};
use crate::spectral::{SpectralWeight, WeightPath};

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "temperature must be positive and finite, got {theta}"
        )))
    }
}

/// Relative step of the finite-difference entropy.
pub const FD_REL_STEP: f64 = 1e-3;

/// Options shared by every thermodynamic evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoOptions {
    pub quad: QuadConfig,
    pub path: WeightPath,
    /// Also compute the finite-difference entropy and flag disagreement.
    pub cross_check: bool,
}

impl Default for ThermoOptions {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
            path: WeightPath::Analytic,
            cross_check: true,
        }
    }
}

/// A value with its propagated absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Entropy from the analytic integrand, optionally paired with the
/// finite-difference cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub analytic: Estimate,
    pub finite_difference: Option<Estimate>,
    pub warning: Option<String>,
}

/// Tolerance for agreement of the two entropy paths.
pub fn entropy_path_tolerance(s: f64) -> f64 {
    (1e-3 * s.abs()).max(1e-6)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub theta: f64,
    pub free_energy: f64,
    pub entropy: f64,
    pub internal_energy: f64,
    pub f_error: f64,
    pub s_error: f64,
    pub u_error: f64,
    /// Finite-difference entropy when the cross-check ran.
    pub entropy_fd: Option<f64>,
    pub warnings: Vec<String>,
}

impl ThermoPoint {
    /// Error budget for U = F + θS, with a few ulps of slack for the exact
    /// (delta-function) paths whose quadrature error is zero.
    pub fn identity_budget(&self) -> f64 {
        let ulps = 8.0 * f64::EPSILON
            * (self.free_energy.abs() + self.theta * self.entropy.abs() + self.internal_energy.abs());
        self.f_error + self.theta * self.s_error + self.u_error + ulps
    }

    pub fn identity_residual(&self) -> f64 {
        (self.internal_energy - (self.free_energy + self.theta * self.entropy)).abs()
    }
}

#[derive(Clone, Copy)]
enum Kernel {
    FreeEnergy,
    Entropy,
    Energy,
}

impl Kernel {
    fn eval(self, omega: f64, theta: f64) -> f64 {
        match self {
            Self::FreeEnergy => bose::free_energy_kernel(omega, theta),
            Self::Entropy => bose::entropy_kernel(omega, theta),
            Self::Energy => bose::energy_kernel(omega, theta),
        }
    }
}

/// (1/π)∫ kernel(ω, θ)·weight(ω) dω, or kernel(ω̂, θ) for a delta weight.
fn weighted_integral(
    bath: &BathModel,
    params: &OscillatorParams,
    theta: f64,
    kernel: Kernel,
    breakpoints: &[f64],
    path: WeightPath,
    quad: &QuadConfig,
) -> Result<Estimate> {
    let weight = SpectralWeight::new(*bath, *params, path);
    if let Some(delta) = weight.delta() {
        let value = kernel.eval(delta.pole_frequency, theta) * delta.weight / PI;
        return Ok(Estimate {
            value,
            error: 4.0 * f64::EPSILON * value.abs(),
        });
    }
    let integrand = |omega: f64| {
        let k = kernel.eval(omega, theta);
        if k == 0.0 {
            0.0
        } else {
            k * weight.eval_or_nan(omega)
        }
    };
    let r = integrate_with(integrand, breakpoints, quad)?;
    Ok(Estimate {
        value: r.value / PI,
        error: r.abs_error_estimate / PI,
    })
}

fn prepare(bath: &BathModel, params: &OscillatorParams, theta: f64) -> Result<Vec<f64>> {
    check_theta(theta)?;
    default_breakpoints(bath, params, theta)
}

/// F(θ) by quadrature of the remarkable formula.
pub fn free_energy(
    bath: &BathModel,
    params: &OscillatorParams,
    theta: f64,
    options: &ThermoOptions,
) -> Result<Estimate> {
    let bp = prepare(bath, params, theta)?;
    weighted_integral(bath, params, theta, Kernel::FreeEnergy, &bp, options.path, &options.quad)
}

/// S(θ) from the entropy integrand, plus (when enabled) the Richardson
/// finite-difference -∂F/∂θ with step 1e-3·θ.
pub fn entropy(
    bath: &BathModel,
    params: &OscillatorParams,
    theta: f64,
    options: &ThermoOptions,
) -> Result<EntropyEstimate> {
    let bp = prepare(bath, params, theta)?;
    let analytic = weighted_integral(bath, params, theta, Kernel::Entropy, &bp, options.path, &options.quad)?;
    let mut out = EntropyEstimate {
        analytic,
        finite_difference: None,
        warning: None,
    };
    if options.cross_check {
        let fd = entropy_finite_difference(bath, params, theta, options)?;
        let tol = entropy_path_tolerance(analytic.value);
        if (fd.value - analytic.value).abs() > tol {
            out.warning = Some(format!(
                "entropy paths disagree at theta = {theta}: analytic {} vs finite difference {} (tolerance {tol:e})",
                analytic.value, fd.value
            ));
        }
        out.finite_difference = Some(fd);
    }
    Ok(out)
}

/// -[F(θ+h) - F(θ-h)]/2h with h = 1e-3·θ, Richardson-combined with h/2.
///
/// The four free energies share the breakpoints of the central θ and are
/// integrated to a relative tolerance of 1e-12 so the difference is not
/// swamped by quadrature noise.
pub fn entropy_finite_difference(
    bath: &BathModel,
    params: &OscillatorParams,
    theta: f64,
    options: &ThermoOptions,
) -> Result<Estimate> {
    let bp = prepare(bath, params, theta)?;
    let quad = QuadConfig {
        rel_tol: crate::quadrature::MIN_REL_TOL,
        abs_tol: 1e-30,
        ..options.quad
    };
    let f = |t: f64| weighted_integral(bath, params, t, Kernel::FreeEnergy, &bp, options.path, &quad);
    let h = FD_REL_STEP * theta;
    let central = |step: f64| -> Result<(f64, f64)> {
        let hi = f(theta + step)?;
        let lo = f(theta - step)?;
        Ok((-(hi.value - lo.value) / (2.0 * step), (hi.error + lo.error) / (2.0 * step)))
    };
    let (coarse, e1) = central(h)?;
    let (fine, e2) = central(0.5 * h)?;
    Ok(Estimate {
        value: (4.0 * fine - coarse) / 3.0,
        error: (4.0 * e2 + e1) / 3.0,
    })
}

/// F, S and U at one temperature. U is the Planck-energy integral; it is
/// checked against F + θS and any mismatch beyond the combined error is
/// reported as a warning, as are negative entropy and entropy-path
/// disagreement.
pub fn internal_energy(
    bath: &BathModel,
    params: &OscillatorParams,
    theta: f64,
    options: &ThermoOptions,
) -> Result<ThermoPoint> {
    let bp = prepare(bath, params, theta)?;
    let f = weighted_integral(bath, params, theta, Kernel::FreeEnergy, &bp, options.path, &options.quad)?;
    let s = entropy(bath, params, theta, options)?;
    let u = weighted_integral(bath, params, theta, Kernel::Energy, &bp, options.path, &options.quad)?;

    let mut point = ThermoPoint {
        theta,
        free_energy: f.value,
        entropy: s.analytic.value,
        internal_energy: u.value,
        f_error: f.error,
        s_error: s.analytic.error,
        u_error: u.error,
        entropy_fd: s.finite_difference.map(|e| e.value),
        warnings: Vec::new(),
    };
    point.warnings.extend(s.warning);
    if point.entropy < -point.s_error {
        point
            .warnings
            .push(format!("negative entropy {} at theta = {theta}", point.entropy));
    }
    if point.identity_residual() > point.identity_budget() {
        point.warnings.push(format!(
            "U = F + theta*S violated at theta = {theta}: residual {:e} exceeds {:e}",
            point.identity_residual(),
            point.identity_budget()
        ));
    }
    Ok(point)
}

/// [`internal_energy`] over many temperatures. Results come back in input
/// order whatever the execution mode.
pub fn sweep(
    bath: &BathModel,
    params: &OscillatorParams,
    thetas: &[f64],
    options: &ThermoOptions,
    exec: Execution,
) -> Vec<Result<ThermoPoint>> {
    map_ordered(thetas, exec, |&t| internal_energy(bath, params, t, options))
}

/// Entropy only (analytic path, no cross-check) over many temperatures.
pub fn entropy_sweep(
    bath: &BathModel,
    params: &OscillatorParams,
    thetas: &[f64],
    options: &ThermoOptions,
    exec: Execution,
) -> Vec<Result<Estimate>> {
    let opts = ThermoOptions {
        cross_check: false,
        ..*options
    };
    map_ordered(thetas, exec, |&t| entropy(bath, params, t, &opts).map(|e| e.analytic))
}
