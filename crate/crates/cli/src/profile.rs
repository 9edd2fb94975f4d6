//! Sampled density and axis-potential profiles.

use axoball_core::ChargeDensity;

use crate::error::CliError;
use crate::problem::ProfileRequest;
use crate::report::ProfileBlock;

/// `n` evenly spaced points from `a` to `b`, both endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn sample(density: &ChargeDensity, request: &ProfileRequest) -> Result<ProfileBlock, CliError> {
    let r = density.radius().to_f64();
    let half = (request.span.clone() * density.radius()).to_f64();
    let z = linspace(-r, r, request.samples);
    let s = linspace(-half, half, request.samples);
    let sigma = z.iter().map(|&z| density.sigma(z)).collect();
    let axis = density.axis_potential();
    let u = s
        .iter()
        .map(|&s| axis.eval(s).map_err(|e| CliError::Input(format!("field `profile.span`: {e}"))))
        .collect::<Result<_, _>>()?;
    Ok(ProfileBlock {
        samples: request.samples,
        span: request.span.to_string(),
        z,
        sigma,
        s,
        u,
    })
}

/// Four-column CSV `z,sigma,s,u` with 17 significant digits.
pub fn to_csv(block: &ProfileBlock) -> String {
    let mut out = String::from("z,sigma,s,u\n");
    for k in 0..block.samples {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            block.z[k], block.sigma[k], block.s[k], block.u[k]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use axoball_core::{solve_charge_density, PotentialSpec, Rational};

    fn uniform_density() -> ChargeDensity {
        let spec = PotentialSpec::new(Rational::from(1), vec![Rational::from(0), Rational::from(1)])
            .unwrap()
            .with_epsilon0(1.0)
            .unwrap();
        solve_charge_density(&spec)
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-1.0, 1.0, 2), vec![-1.0, 1.0]);
        assert_eq!(linspace(-2.0, 2.0, 5), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn uniform_field_profile_is_linear() {
        let request = ProfileRequest { samples: 5, span: Rational::from(3) };
        let block = sample(&uniform_density(), &request).unwrap();
        assert_eq!(block.z, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        for (z, sigma) in block.z.iter().zip(&block.sigma) {
            assert!((sigma - 3.0 * z).abs() < 1e-15);
        }
        assert_eq!(block.sigma[2], 0.0);
        assert_eq!(block.s, vec![-3.0, -1.5, 0.0, 1.5, 3.0]);
    }

    #[test]
    fn csv_has_seventeen_significant_digits() {
        let request = ProfileRequest { samples: 2, span: Rational::new(1, 3) };
        let csv = to_csv(&sample(&uniform_density(), &request).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "z,sigma,s,u");
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0], "-1.0000000000000000e0");
        assert_eq!(first[2], "-3.3333333333333331e-1");
        let parsed: f64 = first[2].parse().unwrap();
        assert_eq!(parsed, -1.0 / 3.0);
    }
}
