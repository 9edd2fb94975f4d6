//! Oracle cross-checks behind `solve --verify`.

use axoball_core::exec::{map_slice, Strategy};
use axoball_core::oracle::{
    brute_force_force, brute_force_moment, collocation_solve_with, equation_residual, force_scale,
    moment_scale,
};
use axoball_core::{axial_force, multipole_moment, ChargeDensity};

use crate::report::{CheckResult, Verification};

pub const COLLOCATION_POINTS: usize = 32;
/// Highest density degree sent through the collocation solver.
pub const COLLOCATION_MAX_DEGREE: usize = 10;
pub const COLLOCATION_DEVIATION_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-9;
pub const QUADRATURE_TOL: f64 = 1e-10;
pub const CONTINUITY_TOL: f64 = 1e-6;
pub const CONTINUITY_OFFSET: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
enum Check {
    Collocation,
    Residual,
    Moment(usize),
    Force,
    Continuity,
}

fn judged(name: String, deviation: f64, tolerance: f64) -> CheckResult {
    if !deviation.is_finite() {
        return failed(name, tolerance, "non-finite floating-point result".to_string());
    }
    CheckResult {
        name,
        deviation: Some(deviation),
        tolerance,
        passed: deviation <= tolerance,
        note: None,
    }
}

fn failed(name: String, tolerance: f64, note: String) -> CheckResult {
    CheckResult {
        name,
        deviation: None,
        tolerance,
        passed: false,
        note: Some(note),
    }
}

fn collocation(density: &ChargeDensity) -> (CheckResult, Option<f64>) {
    let name = "collocation_density".to_string();
    let degree = density.coeffs_c().len() - 1;
    if degree > COLLOCATION_MAX_DEGREE {
        let note = format!("skipped: degree {degree} exceeds {COLLOCATION_MAX_DEGREE}");
        let result = CheckResult {
            name,
            deviation: None,
            tolerance: COLLOCATION_DEVIATION_TOL,
            passed: true,
            note: Some(note),
        };
        return (result, None);
    }
    let solution = match collocation_solve_with(density.spec(), COLLOCATION_POINTS, Strategy::Sequential) {
        Ok(s) => s,
        Err(e) => return (failed(name, COLLOCATION_DEVIATION_TOL, e.to_string()), None),
    };
    // compare in units of the radius so every coefficient carries equal weight
    let r = density.radius().to_f64();
    let scaled = |c: f64, j: usize| c * r.powi(j as i32);
    let exact: Vec<f64> = density
        .coeffs_c()
        .iter()
        .enumerate()
        .map(|(j, c)| scaled(c.to_f64(), j))
        .collect();
    let scale = exact.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let deviation = exact
        .iter()
        .zip(&solution.coeffs)
        .enumerate()
        .map(|(j, (e, g))| (e - scaled(*g, j)).abs() / scale)
        .fold(0.0, f64::max);
    (
        judged(name, deviation, COLLOCATION_DEVIATION_TOL),
        Some(solution.residual_norm),
    )
}

fn run(check: Check, density: &ChargeDensity) -> (CheckResult, Option<f64>) {
    let eps0 = density.epsilon0();
    match check {
        Check::Collocation => collocation(density),
        Check::Residual => {
            let name = "integral_equation_residual".to_string();
            let result = match equation_residual(density, COLLOCATION_POINTS) {
                Ok(res) => judged(name, res, RESIDUAL_TOL),
                Err(e) => failed(name, RESIDUAL_TOL, e.to_string()),
            };
            (result, None)
        }
        Check::Moment(m) => {
            let exact = multipole_moment(density, m).value(eps0);
            let quad = brute_force_moment(density, m);
            let scale = exact.abs().max(moment_scale(density, m)).max(f64::MIN_POSITIVE);
            (judged(format!("multipole_{m}"), (exact - quad).abs() / scale, QUADRATURE_TOL), None)
        }
        Check::Force => {
            let exact = axial_force(density.spec()).value(eps0);
            let quad = brute_force_force(density);
            let scale = exact.abs().max(force_scale(density)).max(f64::MIN_POSITIVE);
            (judged("force".to_string(), (exact - quad).abs() / scale, QUADRATURE_TOL), None)
        }
        Check::Continuity => {
            let name = "axis_continuity".to_string();
            let r = density.radius().to_f64();
            let magnitude: f64 = density
                .spec()
                .coeffs_b()
                .iter()
                .enumerate()
                .map(|(i, b)| b.to_f64().abs() * r.powi(i as i32))
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            let axis = density.axis_potential();
            let mut worst = 0.0f64;
            for side in [1.0, -1.0] {
                let inside = axis.eval(side * r * (1.0 - CONTINUITY_OFFSET));
                let outside = axis.eval(side * r * (1.0 + CONTINUITY_OFFSET));
                match (inside, outside) {
                    (Ok(a), Ok(b)) => worst = worst.max((a - b).abs() / magnitude),
                    (Err(e), _) | (_, Err(e)) => return (failed(name, CONTINUITY_TOL, e.to_string()), None),
                }
            }
            (judged(name, worst, CONTINUITY_TOL), None)
        }
    }
}

/// Runs every cross-check, concurrently when `strategy` allows it.
pub fn verify(density: &ChargeDensity, moments: &[usize], strategy: Strategy) -> Verification {
    let mut checks = vec![Check::Collocation, Check::Residual, Check::Force, Check::Continuity];
    let mut orders: Vec<usize> = moments.to_vec();
    orders.sort_unstable();
    orders.dedup();
    checks.extend(orders.into_iter().map(Check::Moment));

    let outcomes = map_slice(strategy, &checks, |&c| run(c, density));
    let collocation_residual = outcomes.iter().find_map(|(_, res)| *res);
    let checks: Vec<CheckResult> = outcomes.into_iter().map(|(c, _)| c).collect();
    let max_relative_deviation = checks
        .iter()
        .filter_map(|c| c.deviation)
        .fold(0.0, f64::max);
    Verification {
        passed: checks.iter().all(|c| c.passed),
        max_relative_deviation,
        collocation_residual,
        checks,
    }
}

/// Names and deviations of failed checks, for diagnostics.
pub fn failures(verification: &Verification) -> Vec<String> {
    verification
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match (&c.deviation, &c.note) {
            (Some(d), _) => format!("{} deviation {d:e} > {:e}", c.name, c.tolerance),
            (None, Some(note)) => format!("{}: {note}", c.name),
            (None, None) => c.name.clone(),
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use axoball_core::{solve_charge_density, PotentialSpec};

    fn density(r: &str, b: &[&str]) -> ChargeDensity {
        let spec = PotentialSpec::new(r.parse().unwrap(), b.iter().map(|x| x.parse().unwrap()).collect()).unwrap();
        solve_charge_density(&spec)
    }

    #[test]
    fn consistent_density_passes_everything() {
        let d = density("3/2", &["1", "-2", "1/3", "0", "5/7"]);
        let v = verify(&d, &[0, 1, 2, 3, 7], Strategy::Parallel);
        assert!(v.passed, "{:?}", failures(&v));
        assert_eq!(v.checks.len(), 4 + 5);
        assert!(v.collocation_residual.unwrap() < 1e-9);
        assert!(v.max_relative_deviation < 1e-8);
    }

    #[test]
    fn strategies_agree() {
        let d = density("1/2", &["0", "1", "2"]);
        let a = verify(&d, &[0, 1], Strategy::Sequential);
        let b = verify(&d, &[1, 0, 1], Strategy::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn float_overflow_fails_checks() {
        let v = verify(&density("1e200", &["1", "1", "1"]), &[0], Strategy::Sequential);
        assert!(!v.passed);
        let force = v.checks.iter().find(|c| c.name == "force").unwrap();
        assert!(!force.passed && force.deviation.is_none());
        assert!(v.max_relative_deviation.is_finite());
    }

    #[test]
    fn high_degree_skips_collocation() {
        let b: Vec<String> = (0..=14).map(|k| format!("{}/{}", k % 5 + 1, k + 2)).collect();
        let refs: Vec<&str> = b.iter().map(String::as_str).collect();
        let v = verify(&density("1", &refs), &[0], Strategy::Sequential);
        let col = v.checks.iter().find(|c| c.name == "collocation_density").unwrap();
        assert!(col.passed && col.deviation.is_none());
        assert!(col.note.as_deref().unwrap().starts_with("skipped"));
    }
}
