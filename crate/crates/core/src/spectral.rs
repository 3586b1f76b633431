//! Response function α(ω + i0⁺) and the spectral weight
//! Im{d log α(ω + i0⁺)/dω} that multiplies the single-mode free energy in
//! the remarkable formula.
//!
//! Three independent routes to the weight are provided:
//!
//! * [`weight_analytic`]: closed forms for the Ohmic and radiation baths.
//! * [`weight_general`]: assembled from Re/Im μ̃ and their derivatives; valid
//!   for every bath.
//! * [`weight_numeric`]: Richardson-extrapolated central difference of
//!   arg α, used as an oracle for the other two.
//!
//! Dissipationless baths have a weight concentrated in a delta function at
//! the shifted resonance; see [`delta_weight`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{check_omega, memory_at, memory_derivative_at, BathModel, MemoryValue, OscillatorParams};

/// α(ω + i0⁺).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ResponseValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ResponseValue> for Complex64 {
    fn from(r: ResponseValue) -> Self {
        Complex64::new(r.re, r.im)
    }
}

/// Relative window (in units of ω₀) around a real pole inside which
/// [`response_at`] refuses to evaluate.
pub const POLE_WINDOW: f64 = 1e-9;

/// Pole of a dissipationless response: π·δ(ω - pole_frequency) on ω > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaWeight {
    pub pole_frequency: f64,
    pub weight: f64,
}

/// Delta descriptor for μ̃ = imb²/z. The force constant becomes m(ω₀² + b²).
pub fn weight_frequency_shift(params: &OscillatorParams, b: f64) -> DeltaWeight {
    let w0 = params.omega0();
    DeltaWeight {
        pole_frequency: (w0 * w0 + b * b).sqrt(),
        weight: PI,
    }
}

/// Delta descriptor for any dissipationless bath, `None` otherwise.
///
/// Besides the frequency shift this covers α = 1 of the power-law family,
/// where μ̃ = -imz doubles the effective mass and the pole moves to ω₀/√2.
pub fn delta_weight(bath: &BathModel, params: &OscillatorParams) -> Option<DeltaWeight> {
    match *bath {
        BathModel::FrequencyShift { b } => Some(weight_frequency_shift(params, b)),
        BathModel::PowerLaw { alpha: 1.0, .. } => Some(DeltaWeight {
            pole_frequency: params.omega0() / 2f64.sqrt(),
            weight: PI,
        }),
        _ => None,
    }
}

fn check_pole(bath: &BathModel, params: &OscillatorParams, omega: f64, window: f64) -> Result<()> {
    if let Some(d) = delta_weight(bath, params) {
        if (omega - d.pole_frequency).abs() < window {
            return Err(Error::PoleProximity {
                omega,
                pole: d.pole_frequency,
                window,
            });
        }
    }
    Ok(())
}

/// α(ω + i0⁺) = 1/(-mω² - iωμ̃ + K); the radiation bath multiplies the Drude
/// form (with γ_e) by (1 - iωτ_e).
pub fn response_at(bath: &BathModel, params: &OscillatorParams, omega: f64) -> Result<ResponseValue> {
    check_omega(omega)?;
    check_pole(bath, params, omega, POLE_WINDOW * params.omega0())?;
    Ok(response_unchecked(bath, params, omega)?.into())
}

fn response_unchecked(bath: &BathModel, params: &OscillatorParams, omega: f64) -> Result<Complex64> {
    let m = params.mass();
    let k = params.spring_constant();
    let mu = memory_at(bath, params, omega)?;
    let mu = Complex64::new(mu.re, mu.im);
    let drude = Complex64::new(k - m * omega * omega, 0.0) - Complex64::i() * omega * mu;
    Ok(match *bath {
        BathModel::Radiation { tau_e } => Complex64::new(1.0, -omega * tau_e) / drude,
        _ => drude.inv(),
    })
}

/// Closed-form weight.
///
/// Ohmic: γ(ω² + ω₀²)/[(ω₀² - ω²)² + γ²ω²].
///
/// Radiation: the Drude term with γ_e minus the phase slope of (1 - iωτ_e).
/// The two are combined over a common denominator,
/// τ_eω²[3ω₀² - (1 - ω₀²τ_e²)ω²] / {[(ω₀² - ω²)² + γ_e²ω²](1 + ω²τ_e²)},
/// which removes the cancellation at small ω. The weight turns negative for
/// ω² > 3ω₀²/(1 - ω₀²τ_e²); radiation reaction is not a positive-real bath.
pub fn weight_analytic(bath: &BathModel, params: &OscillatorParams, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let w0sq = params.omega0() * params.omega0();
    let wsq = omega * omega;
    let detune = w0sq - wsq;
    match *bath {
        BathModel::Ohmic { gamma } => {
            Ok(gamma * (wsq + w0sq) / (detune * detune + gamma * gamma * wsq))
        }
        BathModel::Radiation { tau_e } => {
            let ge = w0sq * tau_e;
            let drude = detune * detune + ge * ge * wsq;
            let num = tau_e * wsq * (3.0 * w0sq - (1.0 - w0sq * tau_e * tau_e) * wsq);
            Ok(num / (drude * (1.0 + wsq * tau_e * tau_e)))
        }
        _ => Err(Error::NotApplicable {
            what: "closed-form spectral weight",
            bath: bath.name(),
        }),
    }
}

/// μ̃ and dμ̃/dω as seen by the response function.
///
/// For the radiation bath the factorized response is rewritten as
/// 1/(K - mω² - iωμ̃_eff) with μ̃_eff = mτ_eω²/(1 - iωτ_e).
fn effective_memory(
    bath: &BathModel,
    params: &OscillatorParams,
    omega: f64,
) -> Result<(MemoryValue, MemoryValue)> {
    match *bath {
        BathModel::Radiation { tau_e } => {
            let m = params.mass();
            let wt = omega * tau_e;
            let den = 1.0 + wt * wt;
            let mu = MemoryValue {
                re: m * tau_e * omega * omega / den,
                im: m * tau_e * tau_e * omega.powi(3) / den,
            };
            let dmu = MemoryValue {
                re: 2.0 * m * tau_e * omega / (den * den),
                im: m * tau_e * tau_e * omega * omega * (3.0 + wt * wt) / (den * den),
            };
            Ok((mu, dmu))
        }
        _ => Ok((
            memory_at(bath, params, omega)?,
            memory_derivative_at(bath, params, omega)?,
        )),
    }
}

/// Weight assembled from the memory function:
///
/// |α|²·{ m(ω² + ω₀²)Re μ̃ - ω²Re μ̃·(d Im μ̃/dω)
///        + ω(-mω² + mω₀² + ω Im μ̃)·(d Re μ̃/dω) }
///
/// Dissipationless baths return 0: their weight lives entirely in
/// [`delta_weight`].
pub fn weight_general(bath: &BathModel, params: &OscillatorParams, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    if bath.is_dissipationless() {
        return Ok(0.0);
    }
    let (mu, dmu) = effective_memory(bath, params, omega)?;
    let m = params.mass();
    let w0sq = params.omega0() * params.omega0();
    let wsq = omega * omega;

    let re_d = m * (w0sq - wsq) + omega * mu.im;
    let im_d = omega * mu.re;
    let abs_alpha_sq = 1.0 / (re_d * re_d + im_d * im_d);

    let braces = m * (wsq + w0sq) * mu.re - wsq * mu.re * dmu.im + omega * re_d * dmu.re;
    Ok(abs_alpha_sq * braces)
}

/// Finite-difference step used by [`weight_numeric`]: max(1e-6·ω₀, 1e-6·ω),
/// capped at 1e-3·ω so the stencil stays on ω > 0 for very small ω.
pub fn numeric_step(params: &OscillatorParams, omega: f64) -> f64 {
    (1e-6 * params.omega0()).max(1e-6 * omega).min(1e-3 * omega)
}

/// Oracle weight: central difference of arg α with steps h and h/2,
/// Richardson-combined. The phase difference is taken as
/// arg(α(ω+h)·conj α(ω-h)) so no branch cut is crossed.
pub fn weight_numeric(bath: &BathModel, params: &OscillatorParams, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let h = numeric_step(params, omega);
    check_pole(bath, params, omega, 10.0 * h)?;
    if omega - h <= 0.0 {
        return Err(Error::Domain(format!(
            "omega = {omega} is too close to zero for a central difference with step {h}"
        )));
    }
    let slope = |step: f64| -> Result<f64> {
        let hi = response_unchecked(bath, params, omega + step)?;
        let lo = response_unchecked(bath, params, omega - step)?;
        Ok((hi * lo.conj()).arg() / (2.0 * step))
    };
    let coarse = slope(h)?;
    let fine = slope(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Which route [`SpectralWeight::eval`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPath {
    /// Closed form where one exists, otherwise the memory-function assembly.
    #[default]
    Analytic,
    GeneralMu,
    NumericDerivative,
}

/// The function ω ↦ Im{d log α(ω + i0⁺)/dω} for one bath and oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWeight {
    pub bath: BathModel,
    pub params: OscillatorParams,
    pub path: WeightPath,
}

impl SpectralWeight {
    pub fn new(bath: BathModel, params: OscillatorParams, path: WeightPath) -> Self {
        Self { bath, params, path }
    }

    pub fn eval(&self, omega: f64) -> Result<f64> {
        match self.path {
            WeightPath::Analytic => match weight_analytic(&self.bath, &self.params, omega) {
                Err(Error::NotApplicable { .. }) => weight_general(&self.bath, &self.params, omega),
                other => other,
            },
            WeightPath::GeneralMu => weight_general(&self.bath, &self.params, omega),
            WeightPath::NumericDerivative => weight_numeric(&self.bath, &self.params, omega),
        }
    }

    /// Like [`Self::eval`] but maps any failure to NaN, for use inside an
    /// integrand where the quadrature reports non-finite values.
    pub fn eval_or_nan(&self, omega: f64) -> f64 {
        self.eval(omega).unwrap_or(f64::NAN)
    }

    pub fn delta(&self) -> Option<DeltaWeight> {
        delta_weight(&self.bath, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit() -> OscillatorParams {
        OscillatorParams::default()
    }

    #[test]
    fn static_limit_is_inverse_spring_constant() {
        let p = unit();
        for bath in [BathModel::ohmic(0.1).unwrap(), BathModel::radiation(1e-3).unwrap()] {
            let a = response_at(&bath, &p, 1e-9).unwrap();
            assert_relative_eq!(a.re, 1.0, max_relative = 1e-8);
            assert!(a.im.abs() < 1e-8);
        }
    }

    #[test]
    fn ohmic_resonance_is_imaginary() {
        let a = response_at(&BathModel::ohmic(0.1).unwrap(), &unit(), 1.0).unwrap();
        assert!(a.re.abs() < 1e-14);
        assert_relative_eq!(a.im, 10.0, max_relative = 1e-14);
    }

    #[test]
    fn frequency_shift_response_and_pole() {
        let p = unit();
        let bath = BathModel::frequency_shift(1.0).unwrap();
        let a = response_at(&bath, &p, 0.5).unwrap();
        assert_relative_eq!(a.re, 1.0 / (2.0 - 0.25), max_relative = 1e-15);
        assert_eq!(a.im, 0.0);
        let pole = 2f64.sqrt();
        assert!(matches!(
            response_at(&bath, &p, pole + 1e-11),
            Err(Error::PoleProximity { .. })
        ));
        assert!(response_at(&bath, &p, pole + 1e-6).is_ok());
    }

    #[test]
    fn delta_descriptors() {
        let p = unit();
        let d = weight_frequency_shift(&p, 0.0);
        assert_eq!(d.pole_frequency, 1.0);
        assert_eq!(d.weight, PI);
        let d = weight_frequency_shift(&p, 1.0);
        assert_relative_eq!(d.pole_frequency, 2f64.sqrt(), max_relative = 1e-15);
        let d = delta_weight(&BathModel::power_law(3.0, 1.0).unwrap(), &p).unwrap();
        assert_relative_eq!(d.pole_frequency, 0.5f64.sqrt(), max_relative = 1e-15);
        assert!(delta_weight(&BathModel::ohmic(0.1).unwrap(), &p).is_none());
    }

    #[test]
    fn ohmic_weight_values() {
        let p = unit();
        let bath = BathModel::ohmic(0.1).unwrap();
        assert_relative_eq!(weight_analytic(&bath, &p, 1.0).unwrap(), 20.0, max_relative = 1e-14);
        assert_relative_eq!(weight_analytic(&bath, &p, 1e-8).unwrap(), 0.1, max_relative = 1e-12);
    }

    #[test]
    fn radiation_small_omega_limit() {
        let p = unit();
        let bath = BathModel::radiation(1e-3).unwrap();
        let w = 1e-2;
        let limit = 3.0 * 1e-3 * w * w;
        let got = weight_analytic(&bath, &p, w).unwrap();
        assert_relative_eq!(got, limit, max_relative = 1e-3);
        // O(ω⁴) agreement: relative deviation scales like ω²
        assert!((got / limit - 1.0).abs() < 2.0 * w * w);
    }

    #[test]
    fn radiation_two_term_form_agrees_with_combined_form() {
        let p = OscillatorParams::new(1.3, 1.0).unwrap();
        let tau = 0.07;
        let bath = BathModel::radiation(tau).unwrap();
        let w0sq = 1.69;
        let ge = w0sq * tau;
        for w in [0.3, 1.0, 1.7, 5.0, 40.0] {
            let wsq: f64 = w * w;
            let two_term = ge * (wsq + w0sq) / ((w0sq - wsq).powi(2) + ge * ge * wsq)
                - tau / (1.0 + wsq * tau * tau);
            assert_relative_eq!(weight_analytic(&bath, &p, w).unwrap(), two_term, max_relative = 1e-10);
        }
    }

    #[test]
    fn radiation_weight_changes_sign() {
        let p = unit();
        let tau: f64 = 0.1;
        let bath = BathModel::radiation(tau).unwrap();
        let root = (3.0 / (1.0 - tau * tau)).sqrt();
        assert!(weight_analytic(&bath, &p, 0.99 * root).unwrap() > 0.0);
        assert!(weight_analytic(&bath, &p, 1.01 * root).unwrap() < 0.0);
    }

    #[test]
    fn analytic_not_applicable_for_power_law() {
        let r = weight_analytic(&BathModel::power_law(1.0, 0.5).unwrap(), &unit(), 1.0);
        assert!(matches!(r, Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn general_equals_analytic_for_ohmic() {
        let p = unit();
        let bath = BathModel::ohmic(0.1).unwrap();
        for w in crate::models::log_grid(1e-3, 1e3, 41) {
            let a = weight_analytic(&bath, &p, w).unwrap();
            let g = weight_general(&bath, &p, w).unwrap();
            assert_relative_eq!(a, g, max_relative = 1e-12);
        }
    }

    #[test]
    fn general_equals_analytic_for_radiation() {
        let p = OscillatorParams::new(1.2, 0.8).unwrap();
        let bath = BathModel::radiation(0.05).unwrap();
        for w in crate::models::log_grid(1e-3, 1e3, 41) {
            let a = weight_analytic(&bath, &p, w).unwrap();
            let g = weight_general(&bath, &p, w).unwrap();
            assert_relative_eq!(a, g, max_relative = 1e-9);
        }
    }

    #[test]
    fn power_law_alpha_zero_equals_ohmic() {
        let p = unit();
        let pl = BathModel::power_law(1.0, 0.0).unwrap();
        let ohm = BathModel::ohmic(1.0).unwrap();
        for w in [0.01, 0.3, 1.0, 7.0] {
            assert_relative_eq!(
                weight_general(&pl, &p, w).unwrap(),
                weight_analytic(&ohm, &p, w).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn power_law_small_omega_limit() {
        let p = unit();
        let alpha = 0.5;
        let bath = BathModel::power_law(1.0, alpha).unwrap();
        let w: f64 = 1e-3;
        let expect = (1.0 + alpha) * w.sqrt() * (std::f64::consts::FRAC_PI_4).cos();
        assert_relative_eq!(weight_general(&bath, &p, w).unwrap(), expect, max_relative = 1e-3);
    }

    #[test]
    fn numeric_oracle_spot_checks() {
        let p = unit();
        let ohm = BathModel::ohmic(0.1).unwrap();
        assert_relative_eq!(
            weight_numeric(&ohm, &p, 0.5).unwrap(),
            weight_analytic(&ohm, &p, 0.5).unwrap(),
            max_relative = 1e-8
        );
        let rad = BathModel::radiation(1e-3).unwrap();
        assert_relative_eq!(
            weight_numeric(&rad, &p, 2.0).unwrap(),
            weight_analytic(&rad, &p, 2.0).unwrap(),
            max_relative = 1e-8
        );
        let pl = BathModel::power_law(1.0, 0.5).unwrap();
        assert_relative_eq!(
            weight_numeric(&pl, &p, 0.3).unwrap(),
            weight_general(&pl, &p, 0.3).unwrap(),
            max_relative = 1e-6
        );
    }

    #[test]
    fn numeric_refuses_near_pole() {
        let p = unit();
        let bath = BathModel::frequency_shift(1.0).unwrap();
        let pole = 2f64.sqrt();
        assert!(matches!(
            weight_numeric(&bath, &p, pole + 1e-6),
            Err(Error::PoleProximity { .. })
        ));
        assert_eq!(weight_numeric(&bath, &p, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn dissipationless_general_weight_is_zero() {
        let p = unit();
        assert_eq!(weight_general(&BathModel::frequency_shift(1.0).unwrap(), &p, 0.3).unwrap(), 0.0);
        assert_eq!(weight_general(&BathModel::power_law(1.0, 1.0).unwrap(), &p, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn spectral_weight_analytic_falls_back() {
        let p = unit();
        let bath = BathModel::power_law(0.4, -0.3).unwrap();
        let sw = SpectralWeight::new(bath, p, WeightPath::Analytic);
        assert_eq!(sw.eval(0.7).unwrap(), weight_general(&bath, &p, 0.7).unwrap());
        assert!(sw.eval_or_nan(-1.0).is_nan());
    }

    proptest! {
        #[test]
        fn eq29_identity(
            gamma in 1e-3f64..2.0,
            b in 1e-2f64..3.0,
            alpha in -0.99f64..0.99,
            w_exp in -3.0f64..3.0,
        ) {
            let p = unit();
            let w = 10f64.powf(w_exp);
            for bath in [BathModel::ohmic(gamma).unwrap(), BathModel::power_law(b, alpha).unwrap()] {
                let a = response_at(&bath, &p, w).unwrap();
                let mu = memory_at(&bath, &p, w).unwrap();
                let rhs = w * (a.re * a.re + a.im * a.im) * mu.re;
                prop_assert!((a.im - rhs).abs() <= 1e-12 * rhs.abs().max(f64::MIN_POSITIVE));
            }
        }

        #[test]
        fn dissipative_weight_nonnegative(
            gamma in 1e-3f64..2.0,
            b in 1e-2f64..3.0,
            alpha in -0.99f64..=1.0,
            w_exp in -4.0f64..4.0,
        ) {
            let p = unit();
            let w = 10f64.powf(w_exp);
            let ohm = weight_analytic(&BathModel::ohmic(gamma).unwrap(), &p, w).unwrap();
            prop_assert!(ohm.is_finite() && ohm >= 0.0);
            let pl = weight_general(&BathModel::power_law(b, alpha).unwrap(), &p, w).unwrap();
            prop_assert!(pl.is_finite() && pl >= 0.0, "alpha {} w {} -> {}", alpha, w, pl);
            // radiation is non-negative below its sign change
            let tau = gamma.min(0.5);
            let root = (3.0 / (1.0 - tau * tau)).sqrt();
            if w < root {
                let rad = weight_analytic(&BathModel::radiation(tau).unwrap(), &p, w).unwrap();
                prop_assert!(rad.is_finite() && rad >= 0.0);
            }
        }
    }
}
