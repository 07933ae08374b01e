//! Minimal polynomial arithmetic over complex coefficients (ascending
//! degree), used by the scalar transfer-function machinery.

use num_complex::Complex64;

use crate::linalg::{spectrum, ComplexMatrix};

/// Polynomial with coefficients in ascending degree order.
#[derive(Clone, Debug)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_real(&[1.0])
    }

    /// Degree after trimming trailing coefficients below `tol`; zero
    /// polynomial reports degree 0.
    pub fn degree(&self, tol: f64) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > tol)
            .unwrap_or(0)
    }

    pub fn trimmed(&self, tol: f64) -> Poly {
        let d = self.degree(tol);
        if self.coeffs.is_empty() || self.coeffs.iter().all(|c| c.norm() <= tol) {
            return Poly::zero();
        }
        Poly::new(self.coeffs[..=d].to_vec())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Poly {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    /// Roots via the companion matrix of the trimmed polynomial.
    pub fn roots(&self, tol: f64) -> Vec<Complex64> {
        let p = self.trimmed(tol);
        let d = p.degree(0.0);
        if d == 0 {
            return vec![];
        }
        let lead = p.coeffs[d];
        let mut comp = ComplexMatrix::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -p.coeffs[i] / lead;
        }
        spectrum(&comp).unwrap_or_default()
    }
}
