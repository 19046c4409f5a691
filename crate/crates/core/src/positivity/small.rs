//! Complete exact decision for `n ≤ 2`.
//!
//! With `K(y) = [V_1 y | … | V_m y]`, `Ψ(yy*) = Σ w_i (V_i y)(V_i y)*` is
//! singular iff `K(y)` has rank below `n`. For `n = 2` that means every
//! 2×2 minor `det[V_i y | V_j y]` vanishes, and each minor is a binary
//! quadratic form in `y`. A common projective root exists iff either all
//! forms vanish at `(1 : 0)` or the dehomogenized forms share a nonconstant
//! GCD; GCD degree does not depend on the field, so the test is exact.

use num_traits::{One, Zero};

use super::poly::{gaussian_rational_roots, gcd, Poly};
use super::{ensure_verified, left_annihilator, BilinearWitness, Method, PositivityVerdict};
use crate::cp_map::KrausFamily;
use crate::error::{Error, Result};
use crate::exact_linalg::GaussianRational;

/// Coefficients `[y₂², y₁y₂, y₁²]` of `det[A y | B y]`.
fn minor_form(a: &crate::exact_linalg::Mat, b: &crate::exact_linalg::Mat) -> [GaussianRational; 3] {
    let (a11, a12, a21, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let (b11, b12, b21, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1));
    let y1y1 = &(a11 * b21) - &(a21 * b11);
    let y1y2 = &(&(&(a11 * b22) + &(a12 * b21)) - &(a21 * b12)) - &(a22 * b11);
    let y2y2 = &(a12 * b22) - &(a22 * b12);
    [y2y2, y1y2, y1y1]
}

fn refute(psi: &KrausFamily, y: Vec<GaussianRational>, method: Method) -> Result<PositivityVerdict> {
    let x = left_annihilator(psi, &y)
        .ok_or_else(|| Error::Construction("common root without a left annihilator".into()))?;
    let w = BilinearWitness::new(x, y)?;
    ensure_verified(psi, &w)?;
    Ok(PositivityVerdict::refuted(method, w))
}

pub fn check_exact_small(psi: &KrausFamily) -> Result<PositivityVerdict> {
    match psi.n() {
        1 => {
            if psi.matrices().any(|m| !m.is_zero()) {
                Ok(PositivityVerdict::positive(Method::ExactN1))
            } else {
                let one = vec![GaussianRational::one()];
                refute(psi, one, Method::ExactN1)
            }
        }
        2 => check_n2(psi),
        n => Err(Error::Precondition(format!("exact small-case check needs n ≤ 2, got n = {n}"))),
    }
}

fn check_n2(psi: &KrausFamily) -> Result<PositivityVerdict> {
    let mats: Vec<_> = psi.matrices().collect();
    let mut forms = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let f = minor_form(mats[i], mats[j]);
            if f.iter().any(|c| !c.is_zero()) {
                forms.push(f);
            }
        }
    }
    let e1 = vec![GaussianRational::one(), GaussianRational::zero()];

    // Covers m = 1, zero operators and all-proportional families.
    if forms.is_empty() {
        return refute(psi, e1, Method::ExactN2);
    }
    // Common root at (1 : 0).
    if forms.iter().all(|f| f[2].is_zero()) {
        return refute(psi, e1, Method::ExactN2);
    }
    let g = forms
        .iter()
        .map(|f| Poly::new(f.to_vec()))
        .reduce(|acc, p| gcd(&acc, &p))
        .expect("nonempty");
    if g.degree().unwrap_or(0) == 0 {
        return Ok(PositivityVerdict::positive(Method::ExactN2));
    }
    // Nonconstant GCD: some (t : 1) is a common root.
    if let Some(t) = gaussian_rational_roots(&g).into_iter().next() {
        return refute(psi, vec![t, GaussianRational::one()], Method::ExactN2);
    }
    Ok(PositivityVerdict {
        status: super::Status::NotStrictlyPositive,
        witness: None,
        numeric_margin: None,
        method: Method::ExactN2,
        irrational_witness: true,
        assignment: None,
    })
}
