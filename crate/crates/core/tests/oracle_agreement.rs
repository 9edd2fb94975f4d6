//! Exact results against the floating-point oracle.

use axoball_core::oracle::{
    brute_force_force, brute_force_moment, collocation_solve, equation_residual, force_scale,
    moment_scale,
};
use axoball_core::{
    axial_force, induced_axis_potential, multipole_moment, solve_charge_density, total_charge,
    PotentialSpec, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng, max_degree: usize, radius: Rational) -> PotentialSpec {
    let degree = rng.gen_range(0..=max_degree);
    let b = (0..=degree)
        .map(|_| Rational::new(rng.gen_range(-100i64..=100), rng.gen_range(1i64..=12)))
        .collect();
    PotentialSpec::new(radius, b).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[test]
fn collocation_matches_exact_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC011);
    for trial in 0..24 {
        let r: Rational = ["1/2", "1", "2"][trial % 3].parse().unwrap();
        let spec = random_spec(&mut rng, 10, r);
        let exact: Vec<f64> = solve_charge_density(&spec).coeffs_c().iter().map(Rational::to_f64).collect();
        let sol = collocation_solve(&spec, 32).unwrap();
        let scale = max_abs(&exact).max(f64::MIN_POSITIVE);
        for (e, g) in exact.iter().zip(&sol.coeffs) {
            assert!((e - g).abs() / scale < 1e-8, "trial {trial}: {e} vs {g}");
        }
    }
}

#[test]
fn exact_density_satisfies_integral_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE0);
    for _ in 0..16 {
        let radius = Rational::new(rng.gen_range(1i64..=30), 4);
        let spec = random_spec(&mut rng, 10, radius);
        let residual = equation_residual(&solve_charge_density(&spec), 32).unwrap();
        assert!(residual < 1e-9, "residual {residual}");
    }
}

#[test]
fn brute_force_moments_and_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0);
    for _ in 0..20 {
        let radius = Rational::new(rng.gen_range(1i64..=20), 5);
        let spec = random_spec(&mut rng, 8, radius);
        let d = solve_charge_density(&spec);
        let eps0 = d.epsilon0();
        for m in 0..=10 {
            let exact = multipole_moment(&d, m).value(eps0);
            let quad = brute_force_moment(&d, m);
            let scale = exact.abs().max(moment_scale(&d, m));
            assert!((exact - quad).abs() <= 1e-10 * scale, "m={m}: {exact} vs {quad}");
        }
        let exact = axial_force(&spec).value(eps0);
        let quad = brute_force_force(&d);
        assert!((exact - quad).abs() <= 1e-10 * exact.abs().max(force_scale(&d)));
    }
}

#[test]
fn uniform_field_values_through_oracle() {
    let spec = PotentialSpec::new(Rational::from(1), vec![Rational::from(3), Rational::from(2)]).unwrap();
    let d = solve_charge_density(&spec);
    let eps0 = d.epsilon0();
    let q = total_charge(&d).value(eps0);
    assert!((brute_force_moment(&d, 0) - q).abs() < 1e-13 * q.abs());
    let f = axial_force(&spec).value(eps0);
    assert!((brute_force_force(&d) - f).abs() < 1e-13 * f.abs());
}

#[test]
fn axis_potential_is_continuous_at_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    for _ in 0..20 {
        let radius = Rational::new(rng.gen_range(1i64..=40), 4);
        let spec = random_spec(&mut rng, 12, radius);
        let d = solve_charge_density(&spec);
        let r = spec.radius().to_f64();
        let magnitude: f64 = spec
            .coeffs_b()
            .iter()
            .enumerate()
            .map(|(i, b)| b.to_f64().abs() * r.powi(i as i32))
            .sum::<f64>()
            .max(1.0);
        for side in [1.0, -1.0] {
            let inside = induced_axis_potential(&d, side * r * (1.0 - 1e-8)).unwrap();
            let outside = induced_axis_potential(&d, side * r * (1.0 + 1e-8)).unwrap();
            assert!((inside - outside).abs() < 1e-6 * magnitude, "{inside} vs {outside}");
        }
    }
}
