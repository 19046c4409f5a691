//! Univariate polynomials over ℚ(i), coefficients lowest degree first.

use num_traits::{One, Zero};

use crate::exact_linalg::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<GaussianRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &GaussianRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        Poly(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv().expect("nonzero lead");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let c = r.last().unwrap() * &inv;
            for (k, dc) in d.0.iter().enumerate() {
                r[shift + k] -= &(&c * dc);
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    #[cfg(test)]
    pub fn eval(&self, t: &GaussianRational) -> GaussianRational {
        self.0.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * t) + c)
    }
}

/// Monic greatest common divisor; the zero polynomial only if both are zero.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Roots of a polynomial of degree 1 or 2 that lie in ℚ(i).
pub fn gaussian_rational_roots(p: &Poly) -> Vec<GaussianRational> {
    match p.degree() {
        Some(1) => vec![-(&p.0[0] / &p.0[1])],
        Some(2) => {
            let (c, b, a) = (&p.0[0], &p.0[1], &p.0[2]);
            let four = GaussianRational::from_int(4);
            let disc = &(b * b) - &(&(&four * a) * c);
            let Some(s) = disc.sqrt() else {
                return Vec::new();
            };
            let two_a = a * &GaussianRational::from_int(2);
            vec![&(&-b.clone() + &s) / &two_a, &(&-b.clone() - &s) / &two_a]
        }
        _ => Vec::new(),
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly(vec![GaussianRational::one()])
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![GaussianRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| GaussianRational::from_int(v)).collect())
    }

    #[test]
    fn gcd_of_products() {
        // (t − 1)(t + 2) and (t − 1)(t − 3)
        let a = p(&[-1, 1]) * p(&[2, 1]);
        let b = p(&[-1, 1]) * p(&[-3, 1]);
        assert_eq!(gcd(&a, &b), p(&[-1, 1]));
        assert_eq!(gcd(&p(&[2, 1]), &p(&[3, 1])).degree(), Some(0));
    }

    #[test]
    fn quadratic_roots() {
        // t² + 1 has roots ±i
        let roots = gaussian_rational_roots(&p(&[1, 0, 1]));
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(p(&[1, 0, 1]).eval(r).is_zero());
        }
        // t² − 2 has no rational roots
        assert!(gaussian_rational_roots(&p(&[-2, 0, 1])).is_empty());
    }
}
