//! Adaptive Gauss–Kronrod integration over (0, ∞).
//!
//! The range is cut at caller-supplied breakpoints. Every finite panel is
//! integrated with the 15-point Kronrod rule (embedded 7-point Gauss rule for
//! the error estimate); the tail [L, ∞) is mapped onto t ∈ [0, 1) with
//! ω = L/(1 - t). Nodes are strictly interior, so neither ω = 0 nor t = 1 is
//! ever evaluated and integrable endpoint singularities such as
//! log(1 - e^(-ω/θ)) are handled by plain adaptive bisection.
//!
//! Refinement bisects, each round, every panel whose error is within a factor
//! of four of the worst one (at most [`MAX_BATCH`] panels). Selection depends
//! only on the panel errors, and panel sums are taken left to right, so the
//! result is bit-identical between sequential and parallel execution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Result as CrateResult;
use crate::exec::{map_ordered, Execution};
use crate::models::{BathModel, OscillatorParams};

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;
pub const MIN_REL_TOL: f64 = 1e-12;
pub const MAX_SUBDIVISIONS: usize = 10_000;
pub const MAX_BATCH: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid tolerance: rel_tol = {rel_tol:e}, abs_tol = {abs_tol:e} (need rel_tol >= 1e-12, abs_tol > 0)")]
    InvalidTolerance { rel_tol: f64, abs_tol: f64 },

    #[error("breakpoints must be finite, positive and strictly increasing: {0:?}")]
    InvalidBreakpoints(Vec<f64>),

    #[error("integrand is not finite at omega = {omega}")]
    NonFinite { omega: f64 },

    #[error(
        "no convergence after {} subdivisions: value = {}, error estimate = {:e}",
        partial.subdivisions, partial.value, partial.abs_error_estimate
    )]
    NonConvergence { partial: QuadResult },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub exec: Execution,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_subdivisions: MAX_SUBDIVISIONS,
            exec: Execution::Sequential,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol.is_finite() && self.rel_tol >= MIN_REL_TOL)
            || !(self.abs_tol.is_finite() && self.abs_tol > 0.0)
        {
            return Err(QuadError::InvalidTolerance {
                rel_tol: self.rel_tol,
                abs_tol: self.abs_tol,
            });
        }
        Ok(())
    }
}

/// Integrate `f` over (0, ∞) with the default subdivision cap, sequentially.
pub fn integrate_semi_infinite<F>(
    f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_with(f, breakpoints, &QuadConfig::with_tolerances(rel_tol, abs_tol))
}

/// Integrate `f` over (0, ∞). An empty breakpoint list behaves like `[1.0]`.
pub fn integrate_with<F>(f: F, breakpoints: &[f64], config: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    config.validate()?;
    let valid = breakpoints.iter().all(|b| b.is_finite() && *b > 0.0)
        && breakpoints.windows(2).all(|w| w[0] < w[1]);
    if !valid {
        return Err(QuadError::InvalidBreakpoints(breakpoints.to_vec()));
    }
    let tail_start = breakpoints.last().copied().unwrap_or(1.0);

    let mut initial = Vec::with_capacity(breakpoints.len() + 1);
    let mut left = 0.0;
    for &b in breakpoints.iter().chain(breakpoints.is_empty().then_some(&1.0)) {
        initial.push(Span { a: left, b, tail: false });
        left = b;
    }
    initial.push(Span { a: 0.0, b: 1.0, tail: true });

    let integrand = Mapped { f: &f, tail_start };
    let evaluated = map_ordered(&initial, config.exec, |s| integrand.panel(*s));
    let mut panels = evaluated.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut evaluations = panels.len() * 15;
    let mut subdivisions = 0;

    loop {
        let (value, error) = totals(&panels);
        let target = config.abs_tol.max(config.rel_tol * value.abs());
        let result = QuadResult {
            value,
            abs_error_estimate: error,
            evaluations,
            subdivisions,
        };
        if error <= target {
            return Ok(result);
        }
        let budget = config.max_subdivisions.saturating_sub(subdivisions);
        let chosen = select(&panels, budget.min(MAX_BATCH));
        if chosen.is_empty() {
            return Err(QuadError::NonConvergence { partial: result });
        }

        let spans: Vec<Span> = chosen.iter().map(|&i| panels[i].span).collect();
        let halves = map_ordered(&spans, config.exec, |s| {
            let (l, r) = s.halves();
            Ok::<_, QuadError>((integrand.panel(l)?, integrand.panel(r)?))
        });
        let halves = halves.into_iter().collect::<Result<Vec<_>, _>>()?;

        // chosen is ascending; replace from the back so indices stay valid
        for (&i, (l, r)) in chosen.iter().zip(halves).rev() {
            panels[i] = l;
            panels.insert(i + 1, r);
        }
        subdivisions += chosen.len();
        evaluations += 30 * chosen.len();
    }
}

fn totals(panels: &[Panel]) -> (f64, f64) {
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Indices (ascending) of panels to bisect this round.
fn select(panels: &[Panel], limit: usize) -> Vec<usize> {
    if limit == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..panels.len()).filter(|&i| panels[i].span.splittable()).collect();
    order.sort_by(|&i, &j| panels[j].error.total_cmp(&panels[i].error).then(i.cmp(&j)));
    let Some(&worst) = order.first() else {
        return Vec::new();
    };
    let cutoff = 0.25 * panels[worst].error;
    let mut chosen: Vec<usize> = order
        .into_iter()
        .take_while(|&i| panels[i].error >= cutoff && panels[i].error > 0.0)
        .take(limit)
        .collect();
    chosen.sort_unstable();
    chosen
}

#[derive(Debug, Clone, Copy)]
struct Span {
    a: f64,
    b: f64,
    /// `a`, `b` are in the mapped variable t rather than in ω.
    tail: bool,
}

impl Span {
    fn halves(&self) -> (Span, Span) {
        let mid = 0.5 * (self.a + self.b);
        (Span { b: mid, ..*self }, Span { a: mid, ..*self })
    }

    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b && (self.b - self.a) > 4.0 * f64::EPSILON * self.b.abs()
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    span: Span,
    value: f64,
    error: f64,
}

struct Mapped<'a, F> {
    f: &'a F,
    tail_start: f64,
}

impl<F: Fn(f64) -> f64 + Sync> Mapped<'_, F> {
    fn eval(&self, x: f64, tail: bool) -> Result<f64, QuadError> {
        let (omega, jac) = if tail {
            let s = 1.0 - x;
            (self.tail_start / s, self.tail_start / (s * s))
        } else {
            (x, 1.0)
        };
        if omega.is_infinite() {
            return Ok(0.0);
        }
        let y = (self.f)(omega);
        if !y.is_finite() {
            return Err(QuadError::NonFinite { omega });
        }
        // far tail: f has underflowed while the Jacobian overflows
        if y == 0.0 {
            return Ok(0.0);
        }
        let v = y * jac;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { omega })
        }
    }

    fn panel(&self, span: Span) -> Result<Panel, QuadError> {
        let (value, error) = gk15(|x| self.eval(x, span.tail), span.a, span.b)?;
        Ok(Panel { span, value, error })
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<G>(g: G, a: f64, b: f64) -> Result<(f64, f64), QuadError>
where
    G: Fn(f64) -> Result<f64, QuadError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut left = [0.0; 7];
    let mut right = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(center - dx)?;
        let f2 = g(center + dx)?;
        left[j] = f1;
        right[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }
    let scale = half.abs();
    let value = kronrod * half;
    let error = rescale_error((kronrod - gauss) * half, res_abs * scale, res_asc * scale);
    Ok((value, error))
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let s = (200.0 * e / res_asc).powf(1.5);
        e = if s < 1.0 { res_asc * s } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// Panel boundaries for the remarkable-formula integrand: the thermal knee
/// at ω = θ, the resonance ω₀ ± γ_eff, and 10ω₀ where the tail map starts.
/// Non-positive entries are dropped; the result is sorted and deduplicated.
pub fn default_breakpoints(bath: &BathModel, params: &OscillatorParams, theta: f64) -> CrateResult<Vec<f64>> {
    crate::thermo::check_theta(theta)?;
    let w0 = params.omega0();
    let g = bath.effective_coupling(params);
    let mut points: Vec<f64> = [theta, w0 - g, w0, w0 + g, 10.0 * w0]
        .into_iter()
        .filter(|x| *x > 0.0 && x.is_finite())
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    Ok(points)
}
