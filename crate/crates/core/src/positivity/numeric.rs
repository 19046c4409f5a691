//! Multi-start search for `min_{‖y‖=1} λ_min(Σ w_i (V_i y)(V_i y)*)`.
//!
//! A small minimum suggests a bilinear witness; one is only reported after
//! rationalizing it and verifying it exactly. The search never certifies
//! strict positivity.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{left_annihilator, verify_witness, BilinearWitness, Method, PositivityVerdict, Status};
use crate::cp_map::{FloatKrausFamily, KrausFamily};
use crate::error::{Error, Result};
use crate::exact_linalg::GaussianRational;

type CVec = DVector<Complex64>;
type CMat = DMatrix<Complex64>;

/// Denominator caps tried in order when rationalizing a numeric minimizer.
const DENOMINATOR_CAPS: [u64; 3] = [100, 10_000, 1_000_000];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    /// Gradient steps per start.
    pub iterations: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 0,
            tol: 1e-9,
            iterations: 400,
        }
    }
}

struct Objective {
    ops: Vec<(CMat, f64)>,
    n: usize,
}

struct Sample {
    value: f64,
    y: CVec,
    x: CVec,
}

impl Objective {
    /// `(λ_min, unit eigenvector)` of `Σ w (V y)(V y)*`.
    fn eval(&self, y: &CVec) -> (f64, CVec) {
        let mut h = CMat::zeros(self.n, self.n);
        for (v, w) in &self.ops {
            let u = v * y;
            h += (&u * u.adjoint()) * Complex64::from(*w);
        }
        let eig = h.symmetric_eigen();
        let (k, &lmin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("n ≥ 1");
        (lmin, eig.eigenvectors.column(k).into_owned())
    }

    /// Wirtinger gradient `Σ w V* x (x* V y)` of `Σ w |x* V y|²`.
    fn gradient(&self, x: &CVec, y: &CVec) -> CVec {
        let mut g = CVec::zeros(self.n);
        for (v, w) in &self.ops {
            let s = x.dotc(&(v * y));
            g += v.adjoint() * x * (s * *w);
        }
        g
    }

    fn minimize(&self, start: CVec, iterations: usize, step: f64, tol: f64) -> Sample {
        let mut y = start.normalize();
        let (v0, x0) = self.eval(&y);
        let mut best = Sample {
            value: v0,
            y: y.clone(),
            x: x0.clone(),
        };
        let mut x = x0;
        for _ in 0..iterations {
            let g = self.gradient(&x, &y);
            let next = &y - g * Complex64::from(step);
            let norm = next.norm();
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            let next = next / Complex64::from(norm);
            let moved = (&next - &y).norm();
            y = next;
            let (val, vec) = self.eval(&y);
            x = vec;
            if val < best.value {
                best = Sample {
                    value: val,
                    y: y.clone(),
                    x: x.clone(),
                };
            }
            // Stalled, or far below the acceptance threshold.
            if best.value <= tol * 1e-6 || moved < 1e-14 {
                break;
            }
        }
        best
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    let v = CVec::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    if v.norm() == 0.0 {
        CVec::from_element(n, Complex64::from(1.0))
    } else {
        v.normalize()
    }
}

/// Best rational approximation of `v` with denominator at most `max_den`,
/// from the continued-fraction convergents.
pub fn rationalize(v: f64, max_den: u64) -> BigRational {
    if !v.is_finite() {
        return BigRational::zero();
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac.abs() < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1 == 0 {
        return BigRational::from_integer(BigInt::from(v.round() as i64));
    }
    BigRational::new(BigInt::from(h1), BigInt::from(k1))
}

/// Scales so the largest-modulus entry is 1, then rationalizes both parts
/// of every entry.
fn rationalize_vec(v: &CVec, max_den: u64) -> Option<Vec<GaussianRational>> {
    let (k, _) = v.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    let pivot = v[k];
    if pivot.norm() == 0.0 {
        return None;
    }
    let out: Vec<GaussianRational> = v
        .iter()
        .map(|z| {
            let q = z / pivot;
            GaussianRational::new(rationalize(q.re, max_den), rationalize(q.im, max_den))
        })
        .collect();
    out.iter().any(|z| !z.is_zero()).then_some(out)
}

fn extract_witness(psi: &KrausFamily, sample: &Sample) -> Option<BilinearWitness> {
    for &cap in &DENOMINATOR_CAPS {
        let Some(y) = rationalize_vec(&sample.y, cap) else {
            continue;
        };
        if let Some(x) = left_annihilator(psi, &y) {
            let w = BilinearWitness::new(x, y.clone()).ok()?;
            if verify_witness(psi, &w).unwrap_or(false) {
                return Some(w);
            }
        }
        if let Some(x) = rationalize_vec(&sample.x, cap) {
            let w = BilinearWitness::new(x, y).ok()?;
            if verify_witness(psi, &w).unwrap_or(false) {
                return Some(w);
            }
        }
    }
    None
}

/// Numeric search; returns `NotStrictlyPositive` only with an exactly
/// verified witness, otherwise `Unknown` with the best margin found.
///
/// Deterministic in `(starts, seed)`: start vectors are drawn sequentially
/// and results are merged by minimum, ties going to the lower start index.
pub fn check_numeric(psi: &KrausFamily, opts: &NumericOptions) -> Result<PositivityVerdict> {
    if opts.starts < 1 {
        return Err(Error::InvalidArgument("numeric search needs at least one start".into()));
    }
    let fam = FloatKrausFamily::from_exact(psi);
    let lipschitz: f64 = fam.ops.iter().map(|(v, w)| w * v.norm_squared()).sum();
    let n = psi.n();
    let obj = Objective { ops: fam.ops, n };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<CVec> = (0..opts.starts).map(|_| random_unit(&mut rng, n)).collect();

    let best = if lipschitz == 0.0 {
        // Every operator vanishes; any start is a minimizer.
        let (value, x) = obj.eval(&starts[0]);
        Sample {
            value,
            y: starts[0].clone(),
            x,
        }
    } else {
        let step = 0.5 / lipschitz;
        let results: Vec<Sample> = starts
            .into_par_iter()
            .map(|s| obj.minimize(s, opts.iterations, step, opts.tol))
            .collect();
        results
            .into_iter()
            .reduce(|a, b| if b.value < a.value { b } else { a })
            .expect("at least one start")
    };

    let margin = best.value.max(0.0);
    if margin <= opts.tol {
        if let Some(w) = extract_witness(psi, &best) {
            let mut v = PositivityVerdict::refuted(Method::Numeric, w);
            v.numeric_margin = Some(margin);
            return Ok(v);
        }
    }
    Ok(PositivityVerdict {
        status: Status::Unknown,
        witness: None,
        numeric_margin: Some(margin),
        method: Method::Numeric,
        irrational_witness: false,
        assignment: None,
    })
}
