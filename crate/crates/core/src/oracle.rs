//! Floating-point verification engine.
//!
//! Nothing here uses the exact moment-matrix machinery. Legendre values come
//! from the three-term recurrence, Gauss–Legendre nodes from Newton
//! iteration, and the boundary integral equation of the ball is solved
//! directly by least-squares collocation:
//!
//! ```text
//! Σ_j c'_j ∫₋₁¹ η^{j−1} / √(ξ² + 1 − 2ξη) dη = Σ_i b_i r^{i−1} ξ^{i−1},   −1 < ξ < 1
//! ```
//!
//! with the density written as `σ(rη) = (2ε₀/r) Σ c'_j η^{j−1}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, LazyLock, RwLock};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::electrostatics::{ChargeDensity, PotentialSpec};
use crate::exec::{self, Strategy};

/// Relative residual accepted by [`collocation_solve`].
pub const COLLOCATION_TOLERANCE: f64 = 1e-9;

const NEWTON_TOLERANCE: f64 = 1e-15;
const ADAPTIVE_ORDER: usize = 16;
const ADAPTIVE_MAX_DEPTH: usize = 80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Legendre argument {0} lies outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("generating function needs |xi| < 1, got {0}")]
    Divergent(f64),
    #[error("collocation needs at least {needed} points, got {given}")]
    TooFewPoints { needed: usize, given: usize },
    #[error("collocation residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("adaptive quadrature did not converge on [{0}, {1}]")]
    NoConvergence(f64, f64),
}

/// `(P_n(x), P_{n−1}(x))` by the upward recurrence. `P_{−1}` is taken as 0.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `P_n(x)` from `P_{k+1} = ((2k+1) x P_k − k P_{k−1}) / (k+1)`.
pub fn legendre_eval(n: usize, x: f64) -> Result<f64, OracleError> {
    if x.is_nan() || x.abs() > 1.0 + 1e-12 {
        return Err(OracleError::OutOfDomain(x));
    }
    Ok(legendre_pair(n, x).0)
}

/// Returns `(Σ_{k<terms} P_k(η) ξ^k, 1/√(1 − 2ξη + ξ²))`.
pub fn generating_function_check(xi: f64, eta: f64, terms: usize) -> Result<(f64, f64), OracleError> {
    if xi.is_nan() || xi.abs() >= 1.0 {
        return Err(OracleError::Divergent(xi));
    }
    if eta.is_nan() || eta.abs() > 1.0 + 1e-12 {
        return Err(OracleError::OutOfDomain(eta));
    }
    let mut series = 0.0;
    let mut power = 1.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..terms {
        series += cur * power;
        power *= xi;
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * eta * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok((series, 1.0 / (1.0 - 2.0 * xi * eta + xi * xi).sqrt()))
}

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Computes the `order`-point rule by Newton iteration on `P_order`.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order as f64;
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        for k in 0..order.div_ceil(2) {
            let mut x = (PI * (k as f64 + 0.75) / (n + 0.5)).cos();
            let mut derivative = 1.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(order, x);
                derivative = n * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / derivative;
                x -= dx;
                if dx.abs() < NEWTON_TOLERANCE {
                    let (p, p_prev) = legendre_pair(order, x);
                    derivative = n * (x * p - p_prev) / (x * x - 1.0);
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
            nodes[k] = -x;
            nodes[order - 1 - k] = x;
            weights[k] = w;
            weights[order - 1 - k] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        QuadratureRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ₐᵇ f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

static RULES: LazyLock<RwLock<HashMap<usize, Arc<QuadratureRule>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Shared Gauss–Legendre rule of the given order. Rules are computed once
/// and then served to any number of concurrent readers.
pub fn rule(order: usize) -> Arc<QuadratureRule> {
    if let Some(r) = RULES.read().expect("rule cache poisoned").get(&order) {
        return Arc::clone(r);
    }
    let computed = Arc::new(QuadratureRule::gauss_legendre(order));
    let mut cache = RULES.write().expect("rule cache poisoned");
    Arc::clone(cache.entry(order).or_insert(computed))
}

/// `∫₋₁¹ P_{i−1}(η) η^{j−1} dη` with a rule exact for the integrand.
pub fn moment_quadrature(i: usize, j: usize) -> f64 {
    assert!(i >= 1 && j >= 1, "indices are 1-based");
    let rule = rule((i + j) / 2 + 1);
    rule.integrate(-1.0, 1.0, |x| legendre_pair(i - 1, x).0 * x.powi(j as i32 - 1))
}

/// Adaptive bisection for a vector-valued integrand on `[a, b]`, comparing
/// one `ADAPTIVE_ORDER`-point panel against its two halves.
fn adaptive_vec<F>(f: &F, a: f64, b: f64, dim: usize, tol: f64) -> Result<Vec<f64>, OracleError>
where
    F: Fn(f64, &mut [f64]),
{
    let rule = rule(ADAPTIVE_ORDER);
    let panel = |lo: f64, hi: f64| {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = vec![0.0; dim];
        let mut buf = vec![0.0; dim];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            f(mid + half * x, &mut buf);
            for (s, v) in acc.iter_mut().zip(&buf) {
                *s += w * half * v;
            }
        }
        acc
    };
    let mut total = vec![0.0; dim];
    let mut stack = vec![(a, b, panel(a, b), 0usize)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        let err = whole
            .iter()
            .zip(left.iter().zip(&right))
            .map(|(w, (l, r))| (w - l - r).abs())
            .fold(0.0, f64::max);
        let scale = left
            .iter()
            .zip(&right)
            .map(|(l, r)| (l + r).abs())
            .fold(1.0, f64::max);
        if err <= tol * scale * (hi - lo) / (b - a) || err <= 1e-17 * scale {
            for (t, (l, r)) in total.iter_mut().zip(left.iter().zip(&right)) {
                *t += l + r;
            }
        } else if depth >= ADAPTIVE_MAX_DEPTH {
            return Err(OracleError::NoConvergence(lo, hi));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// `K_j(ξ) = ∫₋₁¹ η^{j−1} / √(ξ² + 1 − 2ξη) dη` for `j = 1..=count`.
pub fn kernel_moments(xi: f64, count: usize) -> Result<Vec<f64>, OracleError> {
    assert!(xi.abs() < 1.0, "collocation point must be interior, got {xi}");
    let integrand = |eta: f64, out: &mut [f64]| {
        // ξ² + 1 − 2ξη without cancellation near ξ, η → ±1
        let q = (xi - eta).powi(2) + (1.0 - eta) * (1.0 + eta);
        assert!(q > 0.0, "kernel must stay positive: xi={xi} eta={eta}");
        let mut v = q.sqrt().recip();
        for o in out.iter_mut() {
            *o = v;
            v *= eta;
        }
    };
    adaptive_vec(&integrand, -1.0, 1.0, count, 1e-15)
}

/// `n` Chebyshev points `cos((2k−1)π/(2n))` in `(−1, 1)`.
pub fn chebyshev_points(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// Least-squares collocation result.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSolution {
    /// Approximation of the density coefficients `c` (in powers of `z`).
    pub coeffs: Vec<f64>,
    /// `‖A c' − rhs‖₂ / ‖rhs‖₂` over the collocation points.
    pub residual_norm: f64,
    /// Ratio of extreme singular values of the column-scaled system.
    pub condition_estimate: f64,
}

/// Scaled right-hand side `Σ_i b_i r^{i−1} ξ^{i−1}` and the float `b'`.
fn scaled_rhs(spec: &PotentialSpec) -> Vec<f64> {
    let r = spec.radius().to_f64();
    let mut power = 1.0;
    spec.coeffs_b()
        .iter()
        .map(|b| {
            let v = b.to_f64() * power;
            power *= r;
            v
        })
        .collect()
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn kernel_matrix(points: &[f64], count: usize, strategy: Strategy) -> Result<DMatrix<f64>, OracleError> {
    let rows = exec::map_slice(strategy, points, |&xi| kernel_moments(xi, count));
    let mut a = DMatrix::zeros(points.len(), count);
    for (k, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            a[(k, j)] = v;
        }
    }
    Ok(a)
}

pub fn collocation_solve(spec: &PotentialSpec, n_points: usize) -> Result<CollocationSolution, OracleError> {
    collocation_solve_with(spec, n_points, Strategy::default())
}

/// Solves the discretized integral equation for the density coefficients.
/// Fails when the least-squares residual exceeds [`COLLOCATION_TOLERANCE`].
pub fn collocation_solve_with(
    spec: &PotentialSpec,
    n_points: usize,
    strategy: Strategy,
) -> Result<CollocationSolution, OracleError> {
    let count = spec.coeffs_b().len();
    if n_points < count {
        return Err(OracleError::TooFewPoints {
            needed: count,
            given: n_points,
        });
    }
    let points = chebyshev_points(n_points);
    let a = kernel_matrix(&points, count, strategy)?;
    let b_scaled = scaled_rhs(spec);
    let rhs = DVector::from_iterator(n_points, points.iter().map(|&xi| poly_eval(&b_scaled, xi)));

    let norms: Vec<f64> = (0..count).map(|j| a.column(j).norm()).collect();
    let mut scaled = a.clone();
    for (j, n) in norms.iter().enumerate() {
        scaled.column_mut(j).scale_mut(n.recip());
    }
    let svd = scaled.svd(true, true);
    let sv = &svd.singular_values;
    let condition_estimate = sv.max() / sv.min();
    let y = svd
        .solve(&rhs, 0.0)
        .expect("SVD was computed with both U and V");
    let c_scaled: DVector<f64> = DVector::from_iterator(count, y.iter().zip(&norms).map(|(v, n)| v / n));

    let rhs_norm = rhs.norm();
    let diff = (&a * &c_scaled - &rhs).norm();
    let residual_norm = if rhs_norm > 0.0 { diff / rhs_norm } else { diff };

    let r = spec.radius().to_f64();
    let mut power = 1.0;
    let coeffs = c_scaled
        .iter()
        .map(|c| {
            let v = c / power;
            power *= r;
            v
        })
        .collect();
    let solution = CollocationSolution {
        coeffs,
        residual_norm,
        condition_estimate,
    };
    if residual_norm > COLLOCATION_TOLERANCE {
        return Err(OracleError::ResidualTooLarge {
            residual: residual_norm,
            tolerance: COLLOCATION_TOLERANCE,
        });
    }
    Ok(solution)
}

/// Substitutes a density into the left side of the integral equation at
/// `n_points` Chebyshev points and returns the relative 2-norm residual
/// against `−2ε₀φ₀(rξ)` (both sides divided by `2ε₀`).
pub fn equation_residual(density: &ChargeDensity, n_points: usize) -> Result<f64, OracleError> {
    let points = chebyshev_points(n_points);
    let c_scaled: Vec<f64> = density.scaled_coeffs().iter().map(|c| c.to_f64()).collect();
    let a = kernel_matrix(&points, c_scaled.len(), Strategy::default())?;
    let b_scaled = scaled_rhs(density.spec());
    let (mut diff, mut norm) = (0.0, 0.0);
    for (k, &xi) in points.iter().enumerate() {
        let lhs: f64 = (0..c_scaled.len()).map(|j| a[(k, j)] * c_scaled[j]).sum();
        let rhs = poly_eval(&b_scaled, xi);
        diff += (lhs - rhs).powi(2);
        norm += rhs * rhs;
    }
    Ok(if norm > 0.0 { (diff / norm).sqrt() } else { diff.sqrt() })
}

/// `2πr ∫₋ᵣʳ z^m σ(z) dz` by Gauss–Legendre quadrature, in SI units.
pub fn brute_force_moment(density: &ChargeDensity, m: usize) -> f64 {
    let r = density.radius().to_f64();
    let degree = m + density.coeffs_c().len();
    let rule = rule(degree / 2 + 2);
    2.0 * PI * r * rule.integrate(-r, r, |z| z.powi(m as i32) * density.sigma(z))
}

/// `(π/ε₀) ∫₋ᵣʳ z σ²(z) dz` by Gauss–Legendre quadrature, in SI units.
pub fn brute_force_force(density: &ChargeDensity) -> f64 {
    let r = density.radius().to_f64();
    let degree = 1 + 2 * density.coeffs_c().len();
    let rule = rule(degree / 2 + 2);
    PI / density.epsilon0() * rule.integrate(-r, r, |z| z * density.sigma(z).powi(2))
}

/// `Σ_j |c_j| r^{m+j}`-style magnitude used to normalize moment comparisons
/// when the moment itself cancels to (near) zero. Same units as
/// [`brute_force_moment`].
pub fn moment_scale(density: &ChargeDensity, m: usize) -> f64 {
    let r = density.radius().to_f64();
    let eps0 = density.epsilon0();
    4.0 * PI
        * eps0
        * density
            .coeffs_c()
            .iter()
            .enumerate()
            .map(|(j, c)| c.to_f64().abs() * r.powi((m + j + 1) as i32))
            .sum::<f64>()
}

/// Magnitude scale for force comparisons, `4π ε₀ r (Σ |c_j| r^{j−1})²`.
pub fn force_scale(density: &ChargeDensity) -> f64 {
    let r = density.radius().to_f64();
    let s: f64 = density
        .coeffs_c()
        .iter()
        .enumerate()
        .map(|(j, c)| c.to_f64().abs() * r.powi(j as i32))
        .sum();
    4.0 * PI * density.epsilon0() * r * s * s
}
