//! Families made of scaled matrix units `c·E_ij`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ensure_verified, BilinearWitness, Method, PositivityVerdict};
use crate::cp_map::KrausFamily;
use crate::error::{Error, Result};
use crate::exact_linalg::GaussianRational;

/// Every operator has at most one nonzero entry.
pub fn is_classical(psi: &KrausFamily) -> bool {
    psi.matrices().all(|m| m.nonzero_count() <= 1)
}

/// Induced nonnegative matrix `P_ij = Σ w |c|²` over operators `c·E_ij`,
/// so that `Ψ(diag(v)) = diag(P v)`.
pub fn classical_matrix(psi: &KrausFamily) -> Result<Vec<Vec<BigRational>>> {
    if !is_classical(psi) {
        return Err(Error::Precondition("family is not made of scaled matrix units".into()));
    }
    let n = psi.n();
    let mut p = vec![vec![BigRational::zero(); n]; n];
    for op in psi.ops() {
        for (i, row) in p.iter_mut().enumerate() {
            for (j, pij) in row.iter_mut().enumerate() {
                let c = op.matrix.get(i, j);
                if !c.is_zero() {
                    *pij += &op.weight * c.norm_sqr();
                }
            }
        }
    }
    Ok(p)
}

/// Strictly positive iff every `(i, j)` is hit by some nonzero operator.
/// A missing pair gives the witness `x = e_i`, `y = e_j`.
pub fn check_classical(psi: &KrausFamily) -> Result<PositivityVerdict> {
    let p = classical_matrix(psi)?;
    let n = psi.n();
    for (i, row) in p.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                let mut x = vec![GaussianRational::zero(); n];
                let mut y = vec![GaussianRational::zero(); n];
                x[i] = GaussianRational::one();
                y[j] = GaussianRational::one();
                let w = BilinearWitness::new(x, y)?;
                ensure_verified(psi, &w)?;
                return Ok(PositivityVerdict::refuted(Method::ExactClassical, w));
            }
        }
    }
    Ok(PositivityVerdict::positive(Method::ExactClassical))
}
