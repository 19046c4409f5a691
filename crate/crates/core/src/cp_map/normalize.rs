//! Floating-point renormalization of an irreducible family to a Kraus map.
//!
//! Nothing here feeds back into the exact deciders: `A^{1/2}` is irrational
//! in general.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{is_irreducible, KrausFamily};
use crate::error::{Error, Result};
use crate::exact_linalg::rat_to_f64;

type CMat = DMatrix<Complex64>;

/// Weighted family with `f64` complex entries.
#[derive(Clone, Debug)]
pub struct FloatKrausFamily {
    pub n: usize,
    pub ops: Vec<(CMat, f64)>,
}

impl FloatKrausFamily {
    pub fn from_exact(psi: &KrausFamily) -> Self {
        Self {
            n: psi.n(),
            ops: psi
                .ops()
                .iter()
                .map(|op| (op.matrix.to_nalgebra(), rat_to_f64(&op.weight)))
                .collect(),
        }
    }

    pub fn gram_sum(&self) -> CMat {
        let mut g = CMat::zeros(self.n, self.n);
        for (w, weight) in &self.ops {
            g += w.adjoint() * w * Complex64::from(*weight);
        }
        g
    }

    /// `max_ij |(Σ w W*W − I)_ij|`.
    pub fn unital_defect(&self) -> f64 {
        let d = self.gram_sum() - CMat::identity(self.n, self.n);
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn adjoint_apply(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (v, w) in &self.ops {
            out += v.adjoint() * x * v * Complex64::from(*w);
        }
        out
    }

    pub fn matrices(&self) -> Vec<CMat> {
        self.ops.iter().map(|(m, _)| m.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
        }
    }
}

fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `f(A)` for Hermitian positive definite `A`, through its eigendecomposition.
fn hermitian_fn(a: &CMat, f: impl Fn(f64) -> f64) -> Option<CMat> {
    let h = (a + a.adjoint()) * Complex64::from(0.5);
    let eig = h.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return None;
    }
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from(f(l))));
    Some(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

/// Returns `W_i = ρ^{-1/2} A^{1/2} V_i A^{-1/2}` where `Ψ*(A) = ρA` with `A`
/// positive definite, so that `Σ w_i W_i* W_i = I`.
///
/// The Perron pair is found by power iteration on `Ψ* + s·id` started at
/// `A = I` and normalized by trace each step. The shift `s = tr Ψ*(I) / n`
/// does not move eigenvectors but makes the Perron eigenvalue strictly
/// dominant for periodic maps.
pub fn normalize_to_kraus(psi: &KrausFamily, opts: NormalizeOptions) -> Result<(FloatKrausFamily, f64)> {
    if !is_irreducible(psi) {
        return Err(Error::NotIrreducible);
    }
    let fam = FloatKrausFamily::from_exact(psi);
    let n = fam.n;
    let id = CMat::identity(n, n);
    let shift = trace(&fam.adjoint_apply(&id)).re / n as f64;

    let mut a = id.clone() * Complex64::from(1.0 / n as f64);
    let mut step_tol = opts.tolerance;
    let mut last_change = f64::INFINITY;
    for it in 0..opts.max_iterations {
        let mut next = fam.adjoint_apply(&a) + &a * Complex64::from(shift);
        next /= trace(&next);
        last_change = max_abs_diff(&next, &a);
        a = next;
        if last_change >= step_tol {
            continue;
        }
        let image = fam.adjoint_apply(&a);
        let rho = trace(&image).re / trace(&a).re;
        if let Some(out) = renormalize(&fam, &a, rho) {
            if out.unital_defect() <= opts.tolerance {
                return Ok((out, rho));
            }
        }
        // Not accurate enough yet; keep iterating with a tighter step target.
        step_tol = (step_tol * 0.1).max(f64::EPSILON);
        if it + 1 == opts.max_iterations {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        last_change,
    })
}

fn renormalize(fam: &FloatKrausFamily, a: &CMat, rho: f64) -> Option<FloatKrausFamily> {
    if rho <= 0.0 {
        return None;
    }
    let sqrt_a = hermitian_fn(a, f64::sqrt)?;
    let inv_sqrt_a = hermitian_fn(a, |l| 1.0 / l.sqrt())?;
    let scale = Complex64::from(1.0 / rho.sqrt());
    Some(FloatKrausFamily {
        n: fam.n,
        ops: fam
            .ops
            .iter()
            .map(|(v, w)| (&sqrt_a * v * &inv_sqrt_a * scale, *w))
            .collect(),
    })
}

/// Orthonormal basis (as vectorized columns) of the span of `vectors`,
/// keeping singular directions above `rank_tol · σ_max`.
fn orthonormal_span(vectors: &[CMat], rank_tol: f64) -> Vec<CMat> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let (r, c) = first.shape();
    let cols: Vec<_> = vectors.iter().map(|m| m.transpose().as_slice().to_vec()).collect();
    let stacked = CMat::from_fn(r * c, cols.len(), |i, j| cols[j][i]);
    let svd = stacked.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rank_tol * smax)
        .map(|(k, _)| {
            let col = u.column(k);
            // Undo the row-major vectorization.
            CMat::from_fn(r, c, |i, j| col[i * c + j])
        })
        .collect()
}

/// Numerical `dim S_q` for `q = 1..=q_max`.
pub fn float_product_span_dims(mats: &[CMat], q_max: usize, rank_tol: f64) -> Vec<usize> {
    let mut basis = orthonormal_span(mats, rank_tol);
    let mut dims = vec![basis.len()];
    for _ in 1..q_max {
        let products: Vec<CMat> = basis.iter().flat_map(|b| mats.iter().map(move |v| v * b)).collect();
        basis = orthonormal_span(&products, rank_tol);
        dims.push(basis.len());
    }
    dims
}
