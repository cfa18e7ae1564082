use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CrbError, Result};

/// Polynomial in the delay operator q^-1: `coeffs[i]` multiplies q^-i.
///
/// AR and MA polynomials are monic (`coeffs[0] == 1`); the X polynomial is not.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(CrbError::EmptyPolynomial);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CrbError::InvalidArgument(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// Monic polynomial whose z-domain image has the given roots.
    ///
    /// Complex roots must come in conjugate pairs; imaginary residue is dropped.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            acc = next;
        }
        Self {
            coeffs: acc.into_iter().map(|c| c.re).collect(),
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0] == 1.0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Frequency response sum_i c_i e^{-j i w}, `omega` in radians/sample.
    pub fn eval_at_frequency(&self, omega: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * Complex64::from_polar(1.0, -(i as f64) * omega))
            .sum()
    }

    /// Derivative of the frequency response with respect to `omega`:
    /// -j sum_i i c_i e^{-j i w}.
    pub fn d_eval_at_frequency(&self, omega: f64) -> Complex64 {
        let s: Complex64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64) * c * Complex64::from_polar(1.0, -(i as f64) * omega))
            .sum();
        -Complex64::i() * s
    }

    /// z-domain image c_0 z^n + c_1 z^{n-1} + ... + c_n evaluated at `z` (Horner).
    pub fn eval_z(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Derivative of the z-domain image with respect to z.
    pub fn eval_z_derivative(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        self.coeffs[..n]
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| {
                acc * z + c * (n - i) as f64
            })
    }

    /// Roots of the z-domain image, via companion-matrix eigenvalues followed by
    /// Newton polishing.
    ///
    /// Ordering is deterministic: by descending |Im|, then descending Re, then
    /// descending Im. Conjugate pairs are therefore adjacent, upper half first.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Err(CrbError::DegreeZero);
        }
        let lead = self.coeffs[0];
        if lead == 0.0 {
            return Err(CrbError::ZeroLeadingCoefficient);
        }
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            comp[(0, j)] = -self.coeffs[j + 1] / lead;
        }
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        let eig = comp.complex_eigenvalues();

        let mut roots: Vec<Complex64> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            let z = Complex64::new(eig[i].re, eig[i].im);
            if z.im == 0.0 {
                roots.push(self.polish(z));
                continue;
            }
            // The real Schur form yields exact conjugates; keep them exact.
            let partner = (i + 1..n).find(|&j| {
                !used[j] && eig[j].re == eig[i].re && eig[j].im == -eig[i].im
            });
            if let Some(j) = partner {
                used[j] = true;
                let p = self.polish(Complex64::new(z.re, z.im.abs()));
                roots.push(p);
                roots.push(p.conj());
            } else {
                roots.push(self.polish(z));
            }
        }
        roots.sort_by(root_order);
        Ok(roots)
    }

    fn polish(&self, z0: Complex64) -> Complex64 {
        let mut z = z0;
        let mut res = self.eval_z(z).norm();
        for _ in 0..50 {
            let d = self.eval_z_derivative(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = self.eval_z(z) / d;
            let cand = z - step;
            let cand_res = self.eval_z(cand).norm();
            if !(cand_res < res) {
                break;
            }
            z = cand;
            res = cand_res;
            if step.norm() <= 1e-16 * z.norm().max(1e-300) {
                break;
            }
        }
        z
    }
}

fn root_order(x: &Complex64, y: &Complex64) -> Ordering {
    y.im.abs()
        .total_cmp(&x.im.abs())
        .then(y.re.total_cmp(&x.re))
        .then(y.im.total_cmp(&x.im))
}

/// Largest root modulus of the z-domain image (0 for a constant polynomial).
pub fn max_root_radius(poly: &Polynomial) -> Result<f64> {
    if poly.degree() == 0 {
        return Ok(0.0);
    }
    Ok(poly
        .roots()?
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn eval_constant_and_dc_zero() {
        let p = Polynomial::new(vec![1.0]).unwrap();
        assert_eq!(p.eval_at_frequency(1.234), Complex64::new(1.0, 0.0));
        let d = Polynomial::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(d.eval_at_frequency(0.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn eval_at_nyquist() {
        let p = Polynomial::new(vec![1.0, 0.5]).unwrap();
        let v = p.eval_at_frequency(PI);
        assert_relative_eq!(v.re, 0.5, epsilon = 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(Polynomial::new(vec![]), Err(CrbError::EmptyPolynomial));
    }

    #[test]
    fn roots_linear_and_square() {
        let r = Polynomial::new(vec![1.0, -0.5]).unwrap().roots().unwrap();
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0].re, 0.5, epsilon = 1e-14);
        let r = Polynomial::new(vec![1.0, -1.0, 0.25]).unwrap().roots().unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-7, "{z}");
        }
    }

    #[test]
    fn roots_degree_zero_rejected() {
        assert_eq!(Polynomial::one().roots(), Err(CrbError::DegreeZero));
    }

    #[test]
    fn roots_ordering_pairs_adjacent() {
        let poles = [
            Complex64::from_polar(0.9, 0.5),
            Complex64::from_polar(0.9, -0.5),
            Complex64::new(0.3, 0.0),
            Complex64::from_polar(0.8, 1.5),
            Complex64::from_polar(0.8, -1.5),
        ];
        let r = Polynomial::from_roots(&poles).roots().unwrap();
        assert!(r[0].im > 0.0 && r[1] == r[0].conj());
        assert!(r[2].im > 0.0 && r[3] == r[2].conj());
        assert!(r[0].im >= r[2].im);
        assert_eq!(r[4].im, 0.0);
    }

    #[test]
    fn z_derivative_matches_difference() {
        let p = Polynomial::new(vec![1.0, -0.3, 0.2, 0.7]).unwrap();
        let z = Complex64::new(0.4, 0.6);
        let h = 1e-6;
        let fd = (p.eval_z(z + h) - p.eval_z(z - h)) / (2.0 * h);
        assert!((fd - p.eval_z_derivative(z)).norm() < 1e-8);
    }

    #[test]
    fn frequency_derivative_matches_difference() {
        let p = Polynomial::new(vec![0.7, -0.3, 0.2]).unwrap();
        let w = 0.9;
        let h = 1e-6;
        let fd = (p.eval_at_frequency(w + h) - p.eval_at_frequency(w - h)) / (2.0 * h);
        assert!((fd - p.d_eval_at_frequency(w)).norm() < 1e-8);
    }
}
