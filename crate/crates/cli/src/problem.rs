//! Problem files.
//!
//! A problem is a JSON document:
//!
//! ```json
//! {
//!   "radius": "1/2",
//!   "epsilon0": "1",
//!   "potential": { "coeffs_b": [0, "3/2", "0.25"] },
//!   "moments": [0, 1, 2, 3],
//!   "profile": { "samples": 101, "span": 3 }
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings; both are converted to exact
//! rationals from their decimal text. `coeffs_b` are the coefficients of
//! `−φ₀(s)`; `phi0_coeffs` (alias `potential_phi0`) gives `φ₀` itself and
//! is negated. The coefficient list may also sit at the top level instead of
//! inside `potential`, and `r` is accepted for `radius`.

use std::fmt;

use axoball_core::{PotentialSpec, Rational, VACUUM_PERMITTIVITY};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

/// Environment variable overriding the default permittivity.
pub const EPS0_ENV: &str = "AXOBALL_EPS0";

pub const DEFAULT_MOMENTS: [usize; 4] = [0, 1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialSource {
    CoeffsB,
    Phi0Coeffs,
}

impl fmt::Display for PotentialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialSource::CoeffsB => "coeffs_b",
            PotentialSource::Phi0Coeffs => "phi0_coeffs",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRequest {
    pub samples: usize,
    /// Half-width of the axis window, in units of the radius.
    pub span: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub spec: PotentialSpec,
    pub source: PotentialSource,
    /// Coefficients exactly as given, before any negation or trimming.
    pub given_coeffs: Vec<Rational>,
    pub moments: Vec<usize>,
    pub profile: Option<ProfileRequest>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    coeffs_b: Option<Vec<Value>>,
    #[serde(alias = "potential_phi0")]
    phi0_coeffs: Option<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    samples: Value,
    span: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(alias = "r")]
    radius: Value,
    epsilon0: Option<Value>,
    potential: Option<RawPotential>,
    coeffs_b: Option<Vec<Value>>,
    #[serde(alias = "potential_phi0")]
    phi0_coeffs: Option<Vec<Value>>,
    moments: Option<Vec<Value>>,
    profile: Option<RawProfile>,
}

fn field_error(field: &str, message: impl fmt::Display) -> CliError {
    CliError::Input(format!("field `{field}`: {message}"))
}

fn rational_field(field: &str, value: &Value) -> Result<Rational, CliError> {
    let text = match value {
        Value::String(s) => s.clone(),
        // arbitrary_precision keeps the literal text of JSON numbers
        Value::Number(n) => n.to_string(),
        other => return Err(field_error(field, format!("expected a number or rational string, got {other}"))),
    };
    text.parse()
        .map_err(|e| field_error(field, format!("invalid rational {text:?}: {e}")))
}

fn count_field(field: &str, value: &Value) -> Result<usize, CliError> {
    value
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| field_error(field, format!("expected a non-negative integer, got {value}")))
}

fn coefficient_list(field: &str, values: &[Value]) -> Result<Vec<Rational>, CliError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| rational_field(&format!("{field}[{i}]"), v))
        .collect()
}

/// Permittivity used for float rendering when the problem does not set one.
pub fn default_epsilon0() -> Result<f64, CliError> {
    match std::env::var(EPS0_ENV) {
        Ok(text) => {
            let value: Rational = text
                .parse()
                .map_err(|e| CliError::Input(format!("{EPS0_ENV}={text:?}: {e}")))?;
            Ok(value.to_f64())
        }
        Err(_) => Ok(VACUUM_PERMITTIVITY),
    }
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("problem file, line {} column {}: {e}", e.line(), e.column()))
        })?;

        let radius = rational_field("radius", &raw.radius)?;

        let (nested_b, nested_phi) = match raw.potential {
            Some(p) => (p.coeffs_b, p.phi0_coeffs),
            None => (None, None),
        };
        let candidates = [
            ("potential.coeffs_b", nested_b, PotentialSource::CoeffsB),
            ("potential.phi0_coeffs", nested_phi, PotentialSource::Phi0Coeffs),
            ("coeffs_b", raw.coeffs_b, PotentialSource::CoeffsB),
            ("phi0_coeffs", raw.phi0_coeffs, PotentialSource::Phi0Coeffs),
        ];
        let mut present = candidates.into_iter().filter_map(|(f, v, s)| v.map(|v| (f, v, s)));
        let (field, values, source) = present.next().ok_or_else(|| {
            field_error("potential", "one of `coeffs_b` or `phi0_coeffs` is required")
        })?;
        if let Some((other, _, _)) = present.next() {
            return Err(field_error(
                "potential",
                format!("`{field}` and `{other}` are mutually exclusive"),
            ));
        }
        if values.is_empty() {
            return Err(field_error(field, "at least one coefficient is required"));
        }
        let given_coeffs = coefficient_list(field, &values)?;

        let spec = match source {
            PotentialSource::CoeffsB => PotentialSpec::new(radius, given_coeffs.clone()),
            PotentialSource::Phi0Coeffs => PotentialSpec::from_phi0(radius, given_coeffs.clone()),
        }
        .map_err(|e| field_error("radius", e))?;

        let epsilon0 = match &raw.epsilon0 {
            Some(v) => {
                let eps = rational_field("epsilon0", v)?;
                if !eps.is_positive() {
                    return Err(field_error("epsilon0", "must be positive"));
                }
                eps.to_f64()
            }
            None => default_epsilon0()?,
        };
        let spec = spec.with_epsilon0(epsilon0).map_err(|e| field_error("epsilon0", e))?;

        let moments = match raw.moments {
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, v)| count_field(&format!("moments[{i}]"), v))
                .collect::<Result<Vec<_>, _>>()?,
            None => DEFAULT_MOMENTS.to_vec(),
        };

        let profile = match raw.profile {
            Some(p) => {
                let samples = count_field("profile.samples", &p.samples)?;
                if samples < 2 {
                    return Err(field_error("profile.samples", format!("need at least 2, got {samples}")));
                }
                let span = rational_field("profile.span", &p.span)?;
                if !span.is_positive() {
                    return Err(field_error("profile.span", format!("must be positive, got {span}")));
                }
                Some(ProfileRequest { samples, span })
            }
            None => None,
        };

        Ok(Problem {
            spec,
            source,
            given_coeffs,
            moments,
            profile,
        })
    }
}
