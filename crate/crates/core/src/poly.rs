//! Dense univariate polynomials with exact rational coefficients.

use std::ops::Mul;

use crate::rational::Rational;

/// `Σ coeffs[k] · z^k`, lowest degree first. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::default();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64())
    }

    /// `∫₋ₐᵃ p(z) dz`; only even powers contribute.
    pub fn integrate_symmetric(&self, a: &Rational) -> Rational {
        let a2 = a * a;
        let mut power = a.clone(); // a^{k+1} for k = 0, 2, 4, ...
        let mut total = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate().step_by(2) {
            total += Rational::new(2, k as i64 + 1) * c * &power;
            power *= &a2;
        }
        total
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn trims_and_reports_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), 1);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), 0);
    }

    #[test]
    fn product_and_shift() {
        // (1 + z)(1 - z) = 1 - z^2
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        assert_eq!(p(&[3]).shift(2), p(&[0, 0, 3]));
    }

    #[test]
    fn symmetric_integral() {
        // ∫_{-2}^{2} (1 + z + 3z^2) dz = 4 + 16
        assert_eq!(p(&[1, 1, 3]).integrate_symmetric(&Rational::from(2)), Rational::from(20));
        let half = Rational::new(1, 2);
        // ∫_{-1/2}^{1/2} z^4 dz = 2·(1/2)^5/5
        assert_eq!(p(&[0, 0, 0, 0, 1]).integrate_symmetric(&half), Rational::new(1, 80));
    }

    #[test]
    fn evaluation() {
        let poly = p(&[1, -2, 1]);
        assert_eq!(poly.eval(&Rational::from(3)), Rational::from(4));
        assert_eq!(poly.eval_f64(3.0), 4.0);
    }
}
