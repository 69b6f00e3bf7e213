use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Real polynomial in `s`, coefficients in descending powers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Leading zeros are stripped; an empty or all-zero list is the zero polynomial.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let first = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        Self {
            coeffs: coeffs[first..].to_vec(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        (!self.is_zero()).then(|| self.coeffs.len() - 1)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Roots via eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[0];
        let companion = DMatrix::from_fn(deg, deg, |i, j| {
            if i == 0 {
                -self.coeffs[j + 1] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion.complex_eigenvalues().iter().copied().collect()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let pad = |p: &Poly| {
            let mut v = vec![0.0; n - p.coeffs.len()];
            v.extend_from_slice(&p.coeffs);
            v
        };
        let (a, b) = (pad(self), pad(other));
        Poly::new(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_leading_zeros() {
        let p = Poly::new(vec![0.0, 0.0, 1.0, 2.0]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::new(vec![0.0]).degree(), None);
    }

    #[test]
    fn horner_evaluation() {
        // s² + 3s + 2 at s = j: -1 + 3j + 2 = 1 + 3j.
        let p = Poly::new(vec![1.0, 3.0, 2.0]);
        let v = p.eval(Complex64::new(0.0, 1.0));
        assert!((v - Complex64::new(1.0, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn roots_of_factored_quadratic() {
        let mut r: Vec<f64> = Poly::new(vec![1.0, 3.0, 2.0]).roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 2.0).abs() < 1e-12 && (r[1] + 1.0).abs() < 1e-12);
        assert!(Poly::constant(4.0).roots().is_empty());
    }

    #[test]
    fn product_and_sum() {
        let a = Poly::new(vec![1.0, 1.0]);
        let b = Poly::new(vec![1.0, -1.0]);
        assert_eq!(a.mul(&b).coeffs(), &[1.0, 0.0, -1.0]);
        assert_eq!(a.add(&Poly::constant(2.0)).coeffs(), &[1.0, 3.0]);
        assert!(a.add(&Poly::new(vec![-1.0, -1.0])).is_zero());
    }
}
