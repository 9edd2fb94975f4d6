//! Versioned JSON report.
//!
//! Exact quantities are rendered as `"p/q"` strings next to a float value
//! for convenience; only the strings are authoritative. The parser ignores
//! fields it does not know so that older readers accept newer reports.

use axoball_core::rational::ParseRationalError;
use axoball_core::{BallReport, ChargeDensity, ExactPhysical, Rational};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::problem::Problem;

pub const SCHEMA_VERSION: u32 = 1;

/// Floats that overflow are written as `null` and read back as NaN.
mod lenient_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

mod lenient_floats {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Some(*x).filter(|x| x.is_finite()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Option<f64>>::deserialize(d)?;
        Ok(raw.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())
    }
}

/// Prefactor of the density polynomial: `σ(z) = (2ε₀/r) Σ c_j z^{j−1}`.
pub const DENSITY_PREFACTOR: &str = "2*eps0/r";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalValue {
    pub coeff: String,
    pub unit_factor: String,
    #[serde(with = "lenient_float")]
    pub float: f64,
}

impl PhysicalValue {
    pub fn render(value: &ExactPhysical, epsilon0: f64) -> Self {
        PhysicalValue {
            coeff: value.coeff.to_string(),
            unit_factor: ExactPhysical::UNIT_FACTOR.to_string(),
            float: value.value(epsilon0),
        }
    }

    pub fn exact(&self) -> Result<Rational, ParseRationalError> {
        self.coeff.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipoleValue {
    pub order: usize,
    pub coeff: String,
    pub unit_factor: String,
    #[serde(with = "lenient_float")]
    pub float: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub radius: String,
    pub epsilon0: f64,
    /// `"coeffs_b"` or `"phi0_coeffs"`.
    pub potential_source: String,
    pub given_coeffs: Vec<String>,
    /// Normalized coefficients of `−φ₀`, trailing zeros removed.
    pub coeffs_b: Vec<String>,
    pub moments: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityBlock {
    pub prefactor: String,
    pub coeffs_c: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Relative deviation; absent when the check could not be evaluated.
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    #[serde(with = "lenient_float")]
    pub max_relative_deviation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collocation_residual: Option<f64>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBlock {
    pub samples: usize,
    pub span: String,
    #[serde(with = "lenient_floats")]
    pub z: Vec<f64>,
    #[serde(with = "lenient_floats")]
    pub sigma: Vec<f64>,
    #[serde(with = "lenient_floats")]
    pub s: Vec<f64>,
    #[serde(with = "lenient_floats")]
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub input: InputEcho,
    pub density: DensityBlock,
    pub charge: PhysicalValue,
    pub dipole: PhysicalValue,
    pub multipoles: Vec<MultipoleValue>,
    pub force: PhysicalValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileBlock>,
}

/// Every exact value of a report, parsed back from its strings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFields {
    pub radius: Rational,
    pub given_coeffs: Vec<Rational>,
    pub coeffs_b: Vec<Rational>,
    pub coeffs_c: Vec<Rational>,
    pub charge: Rational,
    pub dipole: Rational,
    pub multipoles: Vec<(usize, Rational)>,
    pub force: Rational,
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(Rational::to_string).collect()
}

fn parse_field(field: &str, text: &str) -> Result<Rational, CliError> {
    text.parse()
        .map_err(|e| CliError::Input(format!("report field `{field}`: {e}")))
}

fn parse_list(field: &str, texts: &[String]) -> Result<Vec<Rational>, CliError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_field(&format!("{field}[{i}]"), t))
        .collect()
}

impl Report {
    pub fn new(problem: &Problem, density: &ChargeDensity, results: &BallReport) -> Self {
        let eps0 = problem.spec.epsilon0();
        Report {
            schema_version: SCHEMA_VERSION,
            input: InputEcho {
                radius: problem.spec.radius().to_string(),
                epsilon0: eps0,
                potential_source: problem.source.to_string(),
                given_coeffs: strings(&problem.given_coeffs),
                coeffs_b: strings(problem.spec.coeffs_b()),
                moments: problem.moments.clone(),
            },
            density: DensityBlock {
                prefactor: DENSITY_PREFACTOR.to_string(),
                coeffs_c: strings(density.coeffs_c()),
            },
            charge: PhysicalValue::render(&results.charge, eps0),
            dipole: PhysicalValue::render(&results.dipole, eps0),
            multipoles: results
                .multipoles
                .iter()
                .map(|(&order, value)| {
                    let v = PhysicalValue::render(value, eps0);
                    MultipoleValue {
                        order,
                        coeff: v.coeff,
                        unit_factor: v.unit_factor,
                        float: v.float,
                    }
                })
                .collect(),
            force: PhysicalValue::render(&results.force, eps0),
            verification: None,
            profile: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("report, line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn exact_fields(&self) -> Result<ExactFields, CliError> {
        Ok(ExactFields {
            radius: parse_field("input.radius", &self.input.radius)?,
            given_coeffs: parse_list("input.given_coeffs", &self.input.given_coeffs)?,
            coeffs_b: parse_list("input.coeffs_b", &self.input.coeffs_b)?,
            coeffs_c: parse_list("density.coeffs_c", &self.density.coeffs_c)?,
            charge: parse_field("charge.coeff", &self.charge.coeff)?,
            dipole: parse_field("dipole.coeff", &self.dipole.coeff)?,
            multipoles: self
                .multipoles
                .iter()
                .map(|m| Ok((m.order, parse_field(&format!("multipoles[{}].coeff", m.order), &m.coeff)?)))
                .collect::<Result<_, CliError>>()?,
            force: parse_field("force.coeff", &self.force.coeff)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use axoball_core::{analyze, solve_charge_density, Strategy};

    fn report(text: &str) -> Report {
        let problem = Problem::from_json(text).unwrap();
        let density = solve_charge_density(&problem.spec);
        let results = analyze(&problem.spec, &problem.moments, Strategy::Sequential);
        Report::new(&problem, &density, &results)
    }

    #[test]
    fn constant_potential_report() {
        let r = report(r#"{"r": 1, "coeffs_b": [1], "epsilon0": "1"}"#);
        assert_eq!(r.charge.coeff, "4");
        assert_eq!(r.charge.unit_factor, "pi*eps0");
        assert_eq!(r.force.coeff, "0");
        assert_eq!(r.density.coeffs_c, vec!["1/2"]);
        assert!((r.charge.float - 4.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn uniform_field_dipole() {
        let r = report(r#"{"r": 1, "coeffs_b": [0, "1"]}"#);
        assert_eq!(r.dipole.coeff, "4");
        assert_eq!(r.density.coeffs_c, vec!["0", "3/2"]);
        let expected = 4.0 * std::f64::consts::PI * axoball_core::VACUUM_PERMITTIVITY;
        assert!((r.dipole.float - expected).abs() < 1e-24);
        assert_eq!(r.multipoles.iter().map(|m| m.order).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn round_trip_and_unknown_fields() {
        let r = report(r#"{"r": "7/3", "phi0_coeffs": ["-1/3", "2.5", "0", "11/7"], "moments": [0, 4, 9]}"#);
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.exact_fields().unwrap(), r.exact_fields().unwrap());

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["added_later"] = serde_json::json!({"anything": [1, 2]});
        value["charge"]["uncertainty"] = serde_json::json!("none");
        let tolerant = Report::from_json(&value.to_string()).unwrap();
        assert_eq!(tolerant, r);
    }
}
