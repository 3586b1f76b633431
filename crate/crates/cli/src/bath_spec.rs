//! `bath=<kind> key=value ...` strings.

use std::collections::BTreeMap;
use std::fmt;

use oscbath::{BathModel, OscillatorParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub token: String,
    pub reason: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token.is_empty() {
            write!(f, "bath spec: {}", self.reason)
        } else {
            write!(f, "bath spec token `{}`: {}", self.token, self.reason)
        }
    }
}

impl std::error::Error for SpecError {}

fn err(token: &str, reason: impl Into<String>) -> SpecError {
    SpecError {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn model_keys(kind: &str) -> Option<&'static [&'static str]> {
    match kind {
        "ohmic" => Some(&["gamma"]),
        "radiation" => Some(&["tau_e"]),
        "powerlaw" => Some(&["b", "alpha"]),
        "shift" => Some(&["b"]),
        _ => None,
    }
}

/// Parse a whitespace-separated bath specification.
///
/// ```
/// let (bath, params) = oscbath_cli::parse_bath_spec("bath=ohmic gamma=0.1").unwrap();
/// assert_eq!(bath, oscbath::BathModel::Ohmic { gamma: 0.1 });
/// assert_eq!(params.omega0(), 1.0);
/// ```
pub fn parse_bath_spec(text: &str) -> Result<(BathModel, OscillatorParams), SpecError> {
    if text.trim().is_empty() {
        return Err(err("", "empty specification"));
    }
    let mut raw: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err(token, "expected key=value"))?;
        if key.is_empty() || value.is_empty() {
            return Err(err(token, "expected key=value"));
        }
        if raw.insert(key, (token, value)).is_some() {
            return Err(err(token, format!("duplicate key `{key}`")));
        }
    }

    let (kind_token, kind) = raw.remove("bath").ok_or_else(|| err("", "missing required key `bath`"))?;
    let keys = model_keys(kind)
        .ok_or_else(|| err(kind_token, "bath must be one of ohmic, radiation, powerlaw, shift"))?;

    let mut number = |key: &str| -> Result<Option<(f64, &str)>, SpecError> {
        match raw.remove(key) {
            None => Ok(None),
            Some((token, value)) => value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(|v| Some((v, token)))
                .ok_or_else(|| err(token, "not a finite number")),
        }
    };

    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let v = number(key)?.ok_or_else(|| err("", format!("bath={kind} needs `{key}`")))?;
        values.push(v);
    }
    let omega0 = number("omega0")?;
    let mass = number("mass")?;
    if let Some((_, (token, _))) = raw.into_iter().next() {
        return Err(err(token, format!("unknown key for bath={kind}")));
    }

    let model = match kind {
        "ohmic" => BathModel::ohmic(values[0].0),
        "radiation" => BathModel::radiation(values[0].0),
        "powerlaw" => BathModel::power_law(values[0].0, values[1].0),
        _ => BathModel::frequency_shift(values[0].0),
    };
    let bath = model.map_err(|e| {
        // alpha has the tighter constraint, blame it when present
        let token = values.last().map(|v| v.1).unwrap_or(kind_token);
        err(token, e.to_string())
    })?;

    let w0 = omega0.map_or(1.0, |v| v.0);
    OscillatorParams::new(w0, 1.0).map_err(|e| err(omega0.map_or("", |v| v.1), e.to_string()))?;
    let params = OscillatorParams::new(w0, mass.map_or(1.0, |v| v.0))
        .map_err(|e| err(mass.map_or("", |v| v.1), e.to_string()))?;
    Ok((bath, params))
}
