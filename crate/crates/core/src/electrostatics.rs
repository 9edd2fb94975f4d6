//! Induced charge on a grounded conducting ball in an axial field.
//!
//! The ball of radius `r` is centred at the origin of the field axis. The
//! external potential along the axis is a polynomial, given through the
//! coefficients `b` of its negation, `−φ₀(s) = Σ b_i s^{i−1}`. The induced
//! surface density is then a polynomial of the same degree,
//! `σ(z) = (2ε₀/r) Σ c_j z^{j−1}`, with `c = R⁻¹ G R b` where
//! `R = diag(1, r, …, r^n)` and `G` is the inverse Legendre moment matrix.
//!
//! Charge, multipole moments and force are exact rational multiples of
//! `π·ε₀`, represented by [`ExactPhysical`]. Each is computed along two
//! independent routes (exact polynomial integration and the closed-form
//! sum) and the routes are asserted equal.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::exec::{self, Strategy};
use crate::moment_matrix::{self, Factorials};
use crate::poly::Polynomial;
use crate::rational::Rational;

/// Vacuum permittivity in F/m, used only when rendering floats.
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("potential needs at least one coefficient")]
    EmptyCoefficients,
    #[error("permittivity must be finite and positive, got {0}")]
    InvalidPermittivity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AxisError {
    #[error("axial coordinate must be finite, got {0}")]
    NonFinite(f64),
}

/// Ball radius, permittivity and the polynomial `−φ₀` along the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    radius: Rational,
    epsilon0: f64,
    coeffs_b: Vec<Rational>,
}

impl PotentialSpec {
    /// `coeffs_b[i-1]` multiplies `s^{i-1}` in `−φ₀(s)`. Trailing zeros are
    /// dropped, keeping at least the constant term.
    pub fn new(radius: Rational, coeffs_b: Vec<Rational>) -> Result<Self, SpecError> {
        if !radius.is_positive() {
            return Err(SpecError::NonPositiveRadius(radius));
        }
        if coeffs_b.is_empty() {
            return Err(SpecError::EmptyCoefficients);
        }
        let mut coeffs_b = coeffs_b;
        while coeffs_b.len() > 1 && coeffs_b.last().is_some_and(Rational::is_zero) {
            coeffs_b.pop();
        }
        Ok(PotentialSpec {
            radius,
            epsilon0: VACUUM_PERMITTIVITY,
            coeffs_b,
        })
    }

    /// Same as [`PotentialSpec::new`] but from the coefficients of `φ₀` itself.
    pub fn from_phi0(radius: Rational, phi0_coeffs: Vec<Rational>) -> Result<Self, SpecError> {
        Self::new(radius, phi0_coeffs.into_iter().map(|c| -c).collect())
    }

    pub fn with_epsilon0(mut self, epsilon0: f64) -> Result<Self, SpecError> {
        if !(epsilon0.is_finite() && epsilon0 > 0.0) {
            return Err(SpecError::InvalidPermittivity(epsilon0));
        }
        self.epsilon0 = epsilon0;
        Ok(self)
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn coeffs_b(&self) -> &[Rational] {
        &self.coeffs_b
    }

    /// `b_i` (1-based), zero past the end.
    pub fn b(&self, i: usize) -> Rational {
        self.coeffs_b.get(i - 1).cloned().unwrap_or_else(Rational::zero)
    }

    /// Polynomial degree `n`.
    pub fn degree(&self) -> usize {
        self.coeffs_b.len() - 1
    }

    /// `−φ₀(s)` in floating point.
    pub fn neg_phi0(&self, s: f64) -> f64 {
        Polynomial::new(self.coeffs_b.clone()).eval_f64(s)
    }
}

/// `σ(z) = (2ε₀/r) Σ c_j z^{j−1}` together with the potential that induced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensity {
    spec: PotentialSpec,
    coeffs_c: Vec<Rational>,
}

impl ChargeDensity {
    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn radius(&self) -> &Rational {
        &self.spec.radius
    }

    pub fn epsilon0(&self) -> f64 {
        self.spec.epsilon0
    }

    pub fn coeffs_c(&self) -> &[Rational] {
        &self.coeffs_c
    }

    /// `Σ c_j z^{j−1}`, i.e. σ without the `2ε₀/r` prefactor.
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs_c.clone())
    }

    /// σ(z) in C/m².
    pub fn sigma(&self, z: f64) -> f64 {
        2.0 * self.epsilon0() / self.radius().to_f64() * self.polynomial().eval_f64(z)
    }

    /// Dimensionless coefficients `c'_j = c_j r^{j−1}` of σ in `η = z/r`.
    pub fn scaled_coeffs(&self) -> Vec<Rational> {
        let r = self.radius();
        let mut power = Rational::one();
        self.coeffs_c
            .iter()
            .map(|c| {
                let v = c * &power;
                power *= r;
                v
            })
            .collect()
    }

    /// Precomputes the induced axis potential for repeated evaluation.
    pub fn axis_potential(&self) -> AxisPotential {
        let f = moment_matrix::build_f_with(self.coeffs_c.len(), Strategy::Sequential);
        let moments = f.mul_vec(&self.scaled_coeffs());
        AxisPotential {
            radius: self.radius().to_f64(),
            moments: moments.iter().map(Rational::to_f64).collect(),
        }
    }
}

/// Exact rational multiple of `π·ε₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPhysical {
    pub coeff: Rational,
}

impl ExactPhysical {
    pub const UNIT_FACTOR: &'static str = "pi*eps0";

    pub fn new(coeff: Rational) -> Self {
        ExactPhysical { coeff }
    }

    /// `coeff · π · ε₀`.
    pub fn value(&self, epsilon0: f64) -> f64 {
        self.coeff.to_f64() * PI * epsilon0
    }
}

/// Charge, dipole, requested multipoles and force for one ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallReport {
    pub charge: ExactPhysical,
    pub dipole: ExactPhysical,
    pub multipoles: BTreeMap<usize, ExactPhysical>,
    pub force: ExactPhysical,
}

/// Solves `F R c = R b` through the explicit inverse: `c_i = Σ_j r^{j−i} G_ij b_j`.
pub fn solve_charge_density(spec: &PotentialSpec) -> ChargeDensity {
    let size = spec.coeffs_b.len();
    let fact = Factorials::up_to(2 * size);
    let r2 = &spec.radius * &spec.radius;
    let coeffs_c = (1..=size)
        .map(|i| {
            // G_ij vanishes unless j - i is even, so r^{j-i} steps by r²
            let mut power = Rational::one();
            let mut total = Rational::zero();
            for j in (i..=size).step_by(2) {
                total += moment_matrix::g_with(&fact, i, j) * &power * &spec.coeffs_b[j - 1];
                power *= &r2;
            }
            total
        })
        .collect();
    ChargeDensity {
        spec: spec.clone(),
        coeffs_c,
    }
}

/// `Q / (π ε₀)` from `Q = 2πr ∫ σ dz`.
pub fn total_charge_direct(density: &ChargeDensity) -> ExactPhysical {
    multipole_moment_direct(density, 0)
}

/// `Q / (π ε₀) = 4 r b₁`.
pub fn total_charge_closed_form(spec: &PotentialSpec) -> ExactPhysical {
    ExactPhysical::new(Rational::from(4) * &spec.radius * spec.b(1))
}

/// Total induced charge; both routes are evaluated and must agree.
pub fn total_charge(density: &ChargeDensity) -> ExactPhysical {
    let direct = total_charge_direct(density);
    let closed = total_charge_closed_form(density.spec());
    assert_eq!(direct, closed, "charge: integration and closed form disagree");
    direct
}

/// `𝒟 / (π ε₀)` from `𝒟 = 2πr ∫ z σ dz`.
pub fn dipole_moment_direct(density: &ChargeDensity) -> ExactPhysical {
    multipole_moment_direct(density, 1)
}

/// `𝒟 / (π ε₀) = 4 r³ b₂`.
pub fn dipole_moment_closed_form(spec: &PotentialSpec) -> ExactPhysical {
    ExactPhysical::new(Rational::from(4) * spec.radius.pow(3) * spec.b(2))
}

pub fn dipole_moment(density: &ChargeDensity) -> ExactPhysical {
    let direct = dipole_moment_direct(density);
    let closed = dipole_moment_closed_form(density.spec());
    assert_eq!(direct, closed, "dipole: integration and closed form disagree");
    direct
}

/// `𝒟_m / (π ε₀)` by exact integration of `2πr ∫ z^m σ(z) dz`.
pub fn multipole_moment_direct(density: &ChargeDensity, m: usize) -> ExactPhysical {
    // 2πr · (2ε₀/r) ∫ z^m p(z) dz = 4πε₀ ∫ z^m p(z) dz
    let integral = density.polynomial().shift(m).integrate_symmetric(density.radius());
    ExactPhysical::new(Rational::from(4) * integral)
}

/// `𝒟_m / (π ε₀) = 2 r^{m+1} Σ_{i=δ,δ+2,…,m+1} (2i−1) r^{i−1} F_{i,m+1} b_i`,
/// with `δ = 1` for even `m` and `δ = 2` for odd `m`. Coefficients beyond the
/// degree of the potential count as zero.
pub fn multipole_moment_closed_form(spec: &PotentialSpec, m: usize) -> ExactPhysical {
    let r = &spec.radius;
    let delta = if m.is_multiple_of(2) { 1 } else { 2 };
    let fact = Factorials::up_to(2 * (m + 1));
    let sum: Rational = (delta..=m + 1)
        .step_by(2)
        .filter(|&i| i <= spec.coeffs_b.len())
        .map(|i| {
            Rational::from(2 * i as i64 - 1)
                * r.pow(i as i32 - 1)
                * moment_matrix::f_entry_with(&fact, i, m + 1)
                * &spec.coeffs_b[i - 1]
        })
        .sum();
    ExactPhysical::new(Rational::from(2) * r.pow(m as i32 + 1) * sum)
}

pub fn multipole_moment(density: &ChargeDensity, m: usize) -> ExactPhysical {
    let direct = multipole_moment_direct(density, m);
    let closed = multipole_moment_closed_form(density.spec(), m);
    assert_eq!(direct, closed, "multipole m={m}: integration and closed form disagree");
    direct
}

/// `ℱ / (π ε₀)` by exact integration of `(π/ε₀) ∫ z σ²(z) dz`.
pub fn axial_force_direct(density: &ChargeDensity) -> ExactPhysical {
    // (π/ε₀)(2ε₀/r)² ∫ z p² dz = 4πε₀/r² ∫ z p² dz
    let p = density.polynomial();
    let integral = (&p * &p).shift(1).integrate_symmetric(density.radius());
    ExactPhysical::new(Rational::from(4) * integral / density.radius().pow(2))
}

/// `ℱ / (π ε₀) = 4 Σ_{i=1}^{n} i r^{2i−1} b_i b_{i+1}`.
pub fn axial_force_closed_form(spec: &PotentialSpec) -> ExactPhysical {
    let r = &spec.radius;
    let b = &spec.coeffs_b;
    let sum: Rational = (1..b.len())
        .map(|i| Rational::from(i as i64) * r.pow(2 * i as i32 - 1) * &b[i - 1] * &b[i])
        .sum();
    ExactPhysical::new(Rational::from(4) * sum)
}

/// Net axial force on the ball. Positive values point toward increasing `s`.
pub fn axial_force(spec: &PotentialSpec) -> ExactPhysical {
    let density = solve_charge_density(spec);
    let direct = axial_force_direct(&density);
    let closed = axial_force_closed_form(spec);
    assert_eq!(direct, closed, "force: integration and closed form disagree");
    direct
}

/// Full analysis for one ball. Multipole orders are evaluated as a batch
/// under `strategy`.
pub fn analyze(spec: &PotentialSpec, moments: &[usize], strategy: Strategy) -> BallReport {
    let density = solve_charge_density(spec);
    let values = exec::map_slice(strategy, moments, |&m| (m, multipole_moment(&density, m)));
    BallReport {
        charge: total_charge(&density),
        dipole: dipole_moment(&density),
        multipoles: values.into_iter().collect(),
        force: axial_force(spec),
    }
}

/// Potential of the induced charges along the axis.
///
/// With `ξ = s/r` and `w = F c'` (which reproduces `b'_k = b_k r^{k−1}`),
/// the interior branch is `Σ w_k ξ^{k−1}` and the exterior branch is the
/// finite series `(1/|ξ|) Σ w_k ξ^{−(k−1)}`, obtained by expanding the kernel
/// in the Legendre generating function with `1/ξ` as the small parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisPotential {
    radius: f64,
    moments: Vec<f64>,
}

impl AxisPotential {
    pub fn eval(&self, s: f64) -> Result<f64, AxisError> {
        if !s.is_finite() {
            return Err(AxisError::NonFinite(s));
        }
        let xi = s / self.radius;
        if xi.abs() <= 1.0 {
            Ok(self.interior(xi))
        } else {
            Ok(self.exterior(xi))
        }
    }

    fn interior(&self, xi: f64) -> f64 {
        self.moments.iter().rev().fold(0.0, |acc, w| acc * xi + w)
    }

    fn exterior(&self, xi: f64) -> f64 {
        let t = xi.recip();
        self.moments.iter().rev().fold(0.0, |acc, w| acc * t + w) / xi.abs()
    }
}

/// Induced axis potential `u(s)`; see [`AxisPotential`].
pub fn induced_axis_potential(density: &ChargeDensity, s: f64) -> Result<f64, AxisError> {
    density.axis_potential().eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn spec(r: &str, b: &[&str]) -> PotentialSpec {
        PotentialSpec::new(q(r), b.iter().map(|s| q(s)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            PotentialSpec::new(q("0"), vec![q("1")]),
            Err(SpecError::NonPositiveRadius(_))
        ));
        assert_eq!(PotentialSpec::new(q("1"), vec![]), Err(SpecError::EmptyCoefficients));
        assert!(spec("1", &["1"]).with_epsilon0(-1.0).is_err());
        assert!(spec("1", &["1"]).with_epsilon0(f64::NAN).is_err());
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let s = spec("1", &["1", "2", "0", "0"]);
        assert_eq!(s.degree(), 1);
        let z = spec("1", &["0", "0"]);
        assert_eq!(z.coeffs_b(), &[q("0")]);
    }

    #[test]
    fn phi0_input_is_negated() {
        let s = PotentialSpec::from_phi0(q("1"), vec![q("1"), q("-2")]).unwrap();
        assert_eq!(s.coeffs_b(), &[q("-1"), q("2")]);
    }

    #[test]
    fn linear_potential_density() {
        let s = spec("7/3", &["5", "-11/2"]);
        let d = solve_charge_density(&s);
        assert_eq!(d.coeffs_c(), &[q("5/2"), q("-33/4")]);
    }

    #[test]
    fn quadratic_term_density() {
        let s = spec("2", &["0", "0", "3"]);
        let d = solve_charge_density(&s);
        // c = (−(5/4) r² b₃, 0, (15/4) b₃)
        assert_eq!(d.coeffs_c(), &[q("-15"), q("0"), q("45/4")]);
        assert!(total_charge(&d).coeff.is_zero());
        assert!(dipole_moment(&d).coeff.is_zero());
    }

    #[test]
    fn uniform_field_textbook_law() {
        let s = spec("1", &["0", "7"]);
        let d = solve_charge_density(&s);
        // σ = 3 ε₀ E z / r
        let z = 0.4;
        let expected = 3.0 * VACUUM_PERMITTIVITY * 7.0 * z;
        assert!((d.sigma(z) - expected).abs() <= 1e-15 * expected.abs());
        assert_eq!(dipole_moment(&d).coeff, q("28"));
    }

    #[test]
    fn second_order_moment_spot_value() {
        let s = spec("3/2", &["2", "0", "5"]);
        let d = solve_charge_density(&s);
        let r = q("3/2");
        // (4 r³ / 3)(b₁ + 2 r² b₃)
        let expected = Rational::new(4, 3) * r.pow(3) * (q("2") + q("2") * r.pow(2) * q("5"));
        assert_eq!(multipole_moment(&d, 2).coeff, expected);
    }

    #[test]
    fn charge_and_dipole_closed_forms() {
        let s = spec("5/7", &["3", "-1", "2", "1/9"]);
        let d = solve_charge_density(&s);
        assert_eq!(multipole_moment(&d, 0), total_charge(&d));
        assert_eq!(multipole_moment(&d, 1), dipole_moment(&d));
    }

    #[test]
    fn force_spot_values() {
        let r = q("3");
        assert_eq!(axial_force(&spec("3", &["2", "5"])).coeff, q("4") * &r * q("10"));
        assert!(axial_force(&spec("3", &["2"])).coeff.is_zero());
        let s = spec("1/2", &["1", "2", "3"]);
        let h = q("1/2");
        let expected = q("4") * (&h * q("2") + q("2") * h.pow(3) * q("6"));
        assert_eq!(axial_force(&s).coeff, expected);
    }

    #[test]
    fn zero_potential_gives_zero_everything() {
        let s = spec("2", &["0", "0", "0"]);
        let report = analyze(&s, &[0, 1, 2, 3], Strategy::Sequential);
        assert!(report.charge.coeff.is_zero());
        assert!(report.force.coeff.is_zero());
        assert!(report.multipoles.values().all(|v| v.coeff.is_zero()));
    }

    #[test]
    fn axis_potential_branches() {
        let s = spec("2", &["3"]);
        let d = solve_charge_density(&s);
        assert_eq!(induced_axis_potential(&d, 0.0).unwrap(), 3.0);
        // far field ~ r b₁ / s
        let u = induced_axis_potential(&d, 2.0e4).unwrap();
        assert!((u * 2.0e4 - 6.0).abs() < 1e-12);
        assert_eq!(
            induced_axis_potential(&d, f64::INFINITY),
            Err(AxisError::NonFinite(f64::INFINITY))
        );
    }

    #[test]
    fn interior_branch_cancels_external_potential() {
        let s = spec("3/2", &["1", "-2", "1/3", "4"]);
        let ax = solve_charge_density(&s).axis_potential();
        for k in -10..=10 {
            let x = 1.5 * k as f64 / 10.5;
            let u = ax.eval(x).unwrap();
            assert!((u - s.neg_phi0(x)).abs() < 1e-12, "s={x}");
        }
    }

    #[test]
    fn exterior_branch_negative_side_is_mirror_consistent() {
        // even potential gives an even axis potential outside as well
        let s = spec("1", &["1", "0", "2"]);
        let ax = solve_charge_density(&s).axis_potential();
        for x in [1.5, 3.0, 10.0] {
            assert!((ax.eval(x).unwrap() - ax.eval(-x).unwrap()).abs() < 1e-14);
        }
    }
}
