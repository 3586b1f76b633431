//! Heat-bath memory functions.
//!
//! Every bath is described by the boundary value of its memory function
//! μ̃(ω + i0⁺) on the positive frequency axis. Quantities are in reduced
//! units: ħ = k_B = 1, frequencies in units of a reference frequency (the
//! bare oscillator frequency by default).
//!
//! Note on naming: the power-law exponent is always called `alpha` here. The
//! response function (generalized susceptibility) lives in
//! [`crate::spectral::response_at`].

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bare oscillator: frequency ω₀ and mass m. The spring constant K = mω₀² is
/// always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    omega0: f64,
    mass: f64,
}

impl OscillatorParams {
    pub fn new(omega0: f64, mass: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be positive and finite, got {omega0}"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        Ok(Self { omega0, mass })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spring_constant(&self) -> f64 {
        self.mass * self.omega0 * self.omega0
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            mass: 1.0,
        }
    }
}

/// Heat-bath families.
///
/// Prefer the checked constructors ([`BathModel::ohmic`] etc.). The variants
/// are public so that callers can build deliberately invalid models, which
/// [`validate_positive_real`] will then flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bath", rename_all = "snake_case")]
pub enum BathModel {
    /// Frequency-independent friction μ̃ = mγ.
    Ohmic { gamma: f64 },
    /// Blackbody radiation reaction. γ_e = ω₀²τ_e is derived from the
    /// oscillator.
    Radiation { tau_e: f64 },
    /// μ̃(z) = m b^(1-α) (-iz)^α with α in [-1, 1].
    PowerLaw { b: f64, alpha: f64 },
    /// μ̃(z) = i m b²/z: a pure shift of the force constant, no dissipation.
    FrequencyShift { b: f64 },
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl BathModel {
    pub fn ohmic(gamma: f64) -> Result<Self> {
        Ok(Self::Ohmic {
            gamma: positive("gamma", gamma)?,
        })
    }

    pub fn radiation(tau_e: f64) -> Result<Self> {
        Ok(Self::Radiation {
            tau_e: positive("tau_e", tau_e)?,
        })
    }

    /// Power-law bath. `alpha` outside [-1, 1] breaks the positive-real
    /// condition and is rejected; `alpha == -1` becomes [`BathModel::FrequencyShift`].
    pub fn power_law(b: f64, alpha: f64) -> Result<Self> {
        let b = positive("b", b)?;
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} is outside [-1, 1]; the memory function would not be positive real"
            )));
        }
        if alpha == -1.0 {
            return Ok(Self::FrequencyShift { b });
        }
        Ok(Self::PowerLaw { b, alpha })
    }

    pub fn frequency_shift(b: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "b must be non-negative and finite, got {b}"
            )));
        }
        Ok(Self::FrequencyShift { b })
    }

    /// Re-run the constructor checks on an existing value.
    pub fn validate(&self) -> Result<Self> {
        match *self {
            Self::Ohmic { gamma } => Self::ohmic(gamma),
            Self::Radiation { tau_e } => Self::radiation(tau_e),
            Self::PowerLaw { b, alpha } => Self::power_law(b, alpha),
            Self::FrequencyShift { b } => Self::frequency_shift(b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ohmic { .. } => "ohmic",
            Self::Radiation { .. } => "radiation",
            Self::PowerLaw { .. } => "powerlaw",
            Self::FrequencyShift { .. } => "shift",
        }
    }

    /// Radiation coupling γ_e = ω₀²τ_e, `None` for other baths.
    pub fn gamma_e(&self, params: &OscillatorParams) -> Option<f64> {
        match *self {
            Self::Radiation { tau_e } => Some(params.omega0() * params.omega0() * tau_e),
            _ => None,
        }
    }

    /// True when Re μ̃ vanishes identically, so the spectral weight collapses
    /// to a delta function. This covers the frequency shift and the α = 1
    /// end of the power-law family, where μ̃ = -imz only renormalizes the mass.
    pub fn is_dissipationless(&self) -> bool {
        match *self {
            Self::FrequencyShift { .. } => true,
            Self::PowerLaw { alpha, .. } => alpha == 1.0,
            _ => false,
        }
    }

    /// Characteristic damping rate, used to place quadrature breakpoints
    /// around the resonance.
    pub fn effective_coupling(&self, params: &OscillatorParams) -> f64 {
        match *self {
            Self::Ohmic { gamma } => gamma,
            Self::Radiation { .. } => self.gamma_e(params).unwrap_or(0.0),
            Self::PowerLaw { b, alpha } => b.powf(1.0 - alpha) * params.omega0().powf(alpha),
            Self::FrequencyShift { .. } => 0.0,
        }
    }
}

impl fmt::Display for BathModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ohmic { gamma } => write!(f, "bath=ohmic gamma={gamma}"),
            Self::Radiation { tau_e } => write!(f, "bath=radiation tau_e={tau_e}"),
            Self::PowerLaw { b, alpha } => write!(f, "bath=powerlaw b={b} alpha={alpha}"),
            Self::FrequencyShift { b } => write!(f, "bath=shift b={b}"),
        }
    }
}

/// Boundary value μ̃(ω + i0⁺).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemoryValue {
    pub re: f64,
    pub im: f64,
}

impl MemoryValue {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )))
    }
}

/// μ̃(ω + i0⁺) for the bath.
///
/// For [`BathModel::Radiation`] this is only the Drude part (mγ_e, 0). The
/// radiation response also carries a (1 - iωτ_e) prefactor which
/// [`crate::spectral::response_at`] applies; the memory value alone does not
/// determine it.
pub fn memory_at(model: &BathModel, params: &OscillatorParams, omega: f64) -> Result<MemoryValue> {
    check_omega(omega)?;
    let m = params.mass();
    Ok(match *model {
        BathModel::Ohmic { gamma } => MemoryValue {
            re: m * gamma,
            im: 0.0,
        },
        BathModel::Radiation { .. } => MemoryValue {
            re: m * model.gamma_e(params).unwrap_or(0.0),
            im: 0.0,
        },
        BathModel::PowerLaw { b, alpha } => {
            // arg(-iω) = -π/2 on the principal branch
            let mag = m * b.powf(1.0 - alpha) * omega.powf(alpha);
            let (sin, cos) = branch_phase(alpha);
            MemoryValue {
                re: mag * cos,
                im: -mag * sin,
            }
        }
        BathModel::FrequencyShift { b } => MemoryValue {
            re: 0.0,
            im: m * b * b / omega,
        },
    })
}

/// (sin, cos) of απ/2, exact at the ends of the admissible range so that
/// α = 1 carries no spurious dissipation.
fn branch_phase(alpha: f64) -> (f64, f64) {
    if alpha == 1.0 {
        (1.0, 0.0)
    } else if alpha == -1.0 {
        (-1.0, 0.0)
    } else if alpha == 0.0 {
        (0.0, 1.0)
    } else {
        (alpha * FRAC_PI_2).sin_cos()
    }
}

/// dμ̃/dω along the real axis, analytic for every family.
pub fn memory_derivative_at(
    model: &BathModel,
    params: &OscillatorParams,
    omega: f64,
) -> Result<MemoryValue> {
    check_omega(omega)?;
    Ok(match *model {
        BathModel::Ohmic { .. } | BathModel::Radiation { .. } => MemoryValue::ZERO,
        BathModel::PowerLaw { alpha, .. } => {
            let mu = memory_at(model, params, omega)?;
            let k = alpha / omega;
            MemoryValue {
                re: k * mu.re,
                im: k * mu.im,
            }
        }
        BathModel::FrequencyShift { b } => MemoryValue {
            re: 0.0,
            im: -params.mass() * b * b / (omega * omega),
        },
    })
}

/// A grid point where Re μ̃ dropped below the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositiveRealViolation {
    pub omega: f64,
    pub re: f64,
}

pub const POSITIVE_REAL_POINTS: usize = 128;
pub const POSITIVE_REAL_REL_EPS: f64 = 1e-12;

/// Sample Re μ̃ on 128 log-spaced frequencies in [1e-6, 1e6]·ω₀ and report
/// every point where it is below -1e-12·mω₀. An empty list is a pass.
pub fn validate_positive_real(
    model: &BathModel,
    params: &OscillatorParams,
) -> Vec<PositiveRealViolation> {
    let eps = POSITIVE_REAL_REL_EPS * params.mass() * params.omega0();
    log_grid(1e-6 * params.omega0(), 1e6 * params.omega0(), POSITIVE_REAL_POINTS)
        .into_iter()
        .filter_map(|omega| {
            let mu = memory_at(model, params, omega).ok()?;
            (mu.re < -eps || mu.re.is_nan()).then_some(PositiveRealViolation { omega, re: mu.re })
        })
        .collect()
}

/// `n` points log-spaced over [lo, hi], endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}
