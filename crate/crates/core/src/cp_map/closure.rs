//! Span recurrences: the generated algebra `D_p` and the product spaces `S_k`.

use std::collections::HashMap;

use super::KrausFamily;
use crate::error::{Error, Result};
use crate::exact_linalg::{Echelon, MatrixSubspace};

/// The algebra generated by a family together with how it was reached.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub algebra: MatrixSubspace,
    /// First `p` with `D_{p+1} = D_p`.
    pub depth: usize,
    /// `dim D_k` for `k = 1..=depth`.
    pub dims: Vec<usize>,
}

fn span_of_ops(psi: &KrausFamily) -> MatrixSubspace {
    let mut s = MatrixSubspace::zero(psi.n());
    for m in psi.matrices() {
        s.insert(m).expect("family shape");
    }
    s
}

/// Computes `𝒜(V_1, …, V_m)` by the recurrence `D_{k+1} = D_k + Σ_i V_i D_k`.
///
/// Only the basis elements added in the previous round are multiplied, since
/// `V_i D_{k-1}` already lies in `D_k`.
pub fn algebra_closure(psi: &KrausFamily) -> ClosureResult {
    let mut space = MatrixSubspace::zero(psi.n());
    let mut frontier = Vec::new();
    for m in psi.matrices() {
        if space.insert(m).expect("family shape") {
            frontier.push(m.clone());
        }
    }
    let mut dims = vec![space.dim()];
    loop {
        let mut fresh = Vec::new();
        for x in &frontier {
            for v in psi.matrices() {
                let p = v.mul_conformable(x);
                if space.insert(&p).expect("family shape") {
                    fresh.push(p);
                }
            }
        }
        if fresh.is_empty() {
            let depth = dims.len();
            return ClosureResult {
                algebra: space,
                depth,
                dims,
            };
        }
        dims.push(space.dim());
        frontier = fresh;
    }
}

/// `D_k`, computed directly from its definition (products of at most `k`
/// operators), without the frontier shortcut used by [`algebra_closure`].
pub fn bounded_product_span(psi: &KrausFamily, k: usize) -> Result<MatrixSubspace> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be at least 1, got {k}")));
    }
    let mut space = span_of_ops(psi);
    for _ in 1..k {
        let mut next = space.clone();
        for x in space.basis() {
            for v in psi.matrices() {
                next.insert(&v.mul_conformable(x))?;
            }
        }
        space = next;
    }
    Ok(space)
}

pub fn is_irreducible(psi: &KrausFamily) -> bool {
    algebra_closure(psi).algebra.is_full()
}

fn next_product_span(psi: &KrausFamily, s: &MatrixSubspace) -> MatrixSubspace {
    let mut next = MatrixSubspace::zero(psi.n());
    for x in s.basis() {
        for v in psi.matrices() {
            next.insert(&v.mul_conformable(x)).expect("family shape");
        }
    }
    next
}

/// `S_k`, the span of all products of exactly `k` operators.
pub fn product_span(psi: &KrausFamily, k: usize) -> Result<MatrixSubspace> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be at least 1, got {k}")));
    }
    let mut s = span_of_ops(psi);
    for _ in 1..k {
        s = next_product_span(psi, &s);
    }
    Ok(s)
}

/// `(n² − m + 1)·n²`, clamped below at `n²`.
pub fn wielandt_bound(n: usize, m: usize) -> usize {
    let nn = (n * n) as i128;
    let b = (nn - m as i128 + 1) * nn;
    b.max(nn) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub irreducible: bool,
    pub primitive: bool,
    pub closure_depth: Option<usize>,
    /// First `q` with `dim S_q = n²`.
    pub wielandt_q: Option<usize>,
    pub bound: usize,
    /// Number of product spaces `S_k` that were computed.
    pub steps: usize,
}

/// Decides primitivity: irreducible and `S_q = ℂ^{n×n}` for some `q` within
/// the Wielandt bound.
///
/// `S_{k+1}` depends only on `S_k`, so once a product space repeats the
/// sequence is periodic and the search stops early.
pub fn is_primitive(psi: &KrausFamily) -> PrimitivityReport {
    let n = psi.n();
    let closure = algebra_closure(psi);
    let s1 = span_of_ops(psi);
    // Linearly dependent operators do not help reach full span; counting
    // independent ones keeps the bound large enough.
    let bound = wielandt_bound(n, s1.dim());
    let mut report = PrimitivityReport {
        irreducible: closure.algebra.is_full(),
        primitive: false,
        closure_depth: Some(closure.depth),
        wielandt_q: None,
        bound,
        steps: 0,
    };
    if !report.irreducible {
        return report;
    }
    let mut seen: HashMap<Echelon, usize> = HashMap::new();
    let mut s = s1;
    for k in 1..=bound {
        report.steps = k;
        if s.is_full() {
            report.primitive = true;
            report.wielandt_q = Some(k);
            return report;
        }
        if seen.insert(s.echelon().clone(), k).is_some() {
            return report;
        }
        s = next_product_span(psi, &s);
    }
    report
}
