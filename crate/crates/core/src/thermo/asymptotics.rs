//! Closed-form low-temperature laws.
//!
//! As θ → 0 only ω ≲ θ contributes, so the weight may be replaced by its
//! small-ω form c·ω^p and the integral becomes a Bose log-moment:
//!
//! F ≈ (c/π) θ^(p+2) · (-Γ(p+1) ζ(p+2)),  S ≈ (p+2)/θ · |F|.
//!
//! | bath      | small-ω weight                         | F exponent |
//! |-----------|----------------------------------------|------------|
//! | Ohmic     | γ/ω₀²                                  | 2          |
//! | Radiation | 3γ_e ω²/ω₀⁴                            | 4          |
//! | PowerLaw  | (1+α) b^(1-α) cos(απ/2) ω^α / ω₀²      | α+2        |
//!
//! Dissipationless baths have a single mode at ω̂ and an exponential law
//! F ≈ -θ e^(-ω̂/θ).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::special::{gamma_fn, zeta_fn};
use crate::error::Result;
use crate::models::{BathModel, OscillatorParams};
use crate::spectral::delta_weight;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum LawForm {
    /// prefactor · θ^exponent
    Power,
    /// prefactor · θ^exponent · e^(-rate/θ)
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticLaw {
    pub bath: BathModel,
    pub prefactor: f64,
    pub exponent: f64,
    pub form: LawForm,
}

impl AsymptoticLaw {
    pub fn eval(&self, theta: f64) -> f64 {
        let power = self.prefactor * theta.powf(self.exponent);
        match self.form {
            LawForm::Power => power,
            LawForm::Exponential { rate } => power * (-rate / theta).exp(),
        }
    }

    pub fn is_power_law(&self) -> bool {
        matches!(self.form, LawForm::Power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticLaws {
    pub free_energy: AsymptoticLaw,
    pub entropy: AsymptoticLaw,
}

/// Leading low-temperature laws for F and S.
pub fn asymptotic_law(bath: &BathModel, params: &OscillatorParams) -> Result<AsymptoticLaws> {
    if let Some(delta) = delta_weight(bath, params) {
        let rate = delta.pole_frequency;
        return Ok(AsymptoticLaws {
            free_energy: AsymptoticLaw {
                bath: *bath,
                prefactor: -1.0,
                exponent: 1.0,
                form: LawForm::Exponential { rate },
            },
            entropy: AsymptoticLaw {
                bath: *bath,
                prefactor: rate,
                exponent: -1.0,
                form: LawForm::Exponential { rate },
            },
        });
    }

    let w0sq = params.omega0() * params.omega0();
    // small-ω weight c·ω^p
    let (c, p) = match *bath {
        BathModel::Ohmic { gamma } => (gamma / w0sq, 0.0),
        BathModel::Radiation { .. } => {
            let ge = bath.gamma_e(params).unwrap_or(0.0);
            (3.0 * ge / (w0sq * w0sq), 2.0)
        }
        BathModel::PowerLaw { b, alpha } => {
            let c = (1.0 + alpha) * b.powf(1.0 - alpha) * (alpha * FRAC_PI_2).cos() / w0sq;
            (c, alpha)
        }
        BathModel::FrequencyShift { .. } => unreachable!("handled by the delta branch"),
    };
    let moment = -gamma_fn(p + 1.0)? * zeta_fn(p + 2.0)?;
    let f_pref = c / PI * moment;
    Ok(AsymptoticLaws {
        free_energy: AsymptoticLaw {
            bath: *bath,
            prefactor: f_pref,
            exponent: p + 2.0,
            form: LawForm::Power,
        },
        entropy: AsymptoticLaw {
            bath: *bath,
            prefactor: -(p + 2.0) * f_pref,
            exponent: p + 1.0,
            form: LawForm::Power,
        },
    })
}

/// Least-squares fit of log y = log A + p log θ. Returns (p, A), or `None`
/// with fewer than two points or any non-positive value.
pub fn fit_power_law(thetas: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    if thetas.len() != values.len() || thetas.len() < 2 || values.iter().any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let n = thetas.len() as f64;
    let xs: Vec<f64> = thetas.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, (my - slope * mx).exp()))
}

/// Least-squares prefactor A of y = A θ^p with the exponent held fixed
/// (geometric mean of y/θ^p).
pub fn fit_prefactor(thetas: &[f64], values: &[f64], exponent: f64) -> Option<f64> {
    if thetas.len() != values.len() || thetas.is_empty() || values.iter().any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let mean = thetas
        .iter()
        .zip(values)
        .map(|(t, v)| v.ln() - exponent * t.ln())
        .sum::<f64>()
        / thetas.len() as f64;
    Some(mean.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> OscillatorParams {
        OscillatorParams::default()
    }

    #[test]
    fn ohmic_law() {
        let laws = asymptotic_law(&BathModel::ohmic(0.1).unwrap(), &unit()).unwrap();
        assert_eq!((laws.free_energy.exponent, laws.entropy.exponent), (2.0, 1.0));
        assert_relative_eq!(laws.free_energy.prefactor, -PI / 6.0 * 0.1, max_relative = 1e-13);
        assert_relative_eq!(laws.entropy.prefactor, PI / 3.0 * 0.1, max_relative = 1e-13);
    }

    #[test]
    fn radiation_law() {
        let laws = asymptotic_law(&BathModel::radiation(0.1).unwrap(), &unit()).unwrap();
        assert_eq!((laws.free_energy.exponent, laws.entropy.exponent), (4.0, 3.0));
        assert_relative_eq!(laws.free_energy.prefactor, -PI.powi(3) / 15.0 * 0.1, max_relative = 1e-13);
        // S = -dF/dθ
        assert_relative_eq!(laws.entropy.prefactor, 4.0 * PI.powi(3) / 15.0 * 0.1, max_relative = 1e-13);
    }

    #[test]
    fn power_law_zero_reduces_to_ohmic() {
        let p = unit();
        let pl = asymptotic_law(&BathModel::power_law(0.1, 0.0).unwrap(), &p).unwrap();
        let oh = asymptotic_law(&BathModel::ohmic(0.1).unwrap(), &p).unwrap();
        assert_relative_eq!(pl.free_energy.prefactor, oh.free_energy.prefactor, max_relative = 1e-14);
        assert_relative_eq!(pl.entropy.prefactor, oh.entropy.prefactor, max_relative = 1e-14);
        assert_eq!(pl.entropy.exponent, oh.entropy.exponent);
    }

    #[test]
    fn power_law_entropy_coefficient() {
        let (b, alpha): (f64, f64) = (0.5, 0.5);
        let laws = asymptotic_law(&BathModel::power_law(b, alpha).unwrap(), &unit()).unwrap();
        let expect = b.powf(1.0 - alpha) * (alpha + 1.0) * (alpha + 2.0)
            * gamma_fn(alpha + 1.0).unwrap()
            * zeta_fn(alpha + 2.0).unwrap()
            * (alpha * FRAC_PI_2).cos()
            / PI;
        assert_relative_eq!(laws.entropy.prefactor, expect, max_relative = 1e-14);
        assert_eq!(laws.entropy.exponent, 1.5);
    }

    #[test]
    fn exponential_law_for_shift() {
        let laws = asymptotic_law(&BathModel::frequency_shift(1.0).unwrap(), &unit()).unwrap();
        assert!(!laws.free_energy.is_power_law());
        let t = 0.05;
        let w = 2f64.sqrt();
        assert_relative_eq!(laws.free_energy.eval(t), -t * (-w / t).exp(), max_relative = 1e-14);
    }

    #[test]
    fn fits_recover_synthetic_law() {
        let thetas: Vec<f64> = (0..10).map(|i| 0.001 * 1.3f64.powi(i)).collect();
        let values: Vec<f64> = thetas.iter().map(|t| 2.5 * t.powf(1.7)).collect();
        let (p, a) = fit_power_law(&thetas, &values).unwrap();
        assert_relative_eq!(p, 1.7, max_relative = 1e-12);
        assert_relative_eq!(a, 2.5, max_relative = 1e-10);
        assert_relative_eq!(fit_prefactor(&thetas, &values, 1.7).unwrap(), 2.5, max_relative = 1e-12);
        assert!(fit_power_law(&thetas[..1], &values[..1]).is_none());
        assert!(fit_power_law(&[0.1, 0.2], &[1.0, 0.0]).is_none());
    }
}
