//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use kraus_core::cp_map::KrausFamily;
use kraus_core::exact_linalg::{GaussianRational, Mat};
use kraus_core::oracles::StochasticMatrix;
use kraus_core::reduction::Cnf;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(rat(re, 1), rat(im, 1))
}

/// Column-stochastic matrix: each entry is zero with probability 1/2,
/// otherwise a weight in 1..=4, and columns are normalized.
pub fn random_stochastic(rng: &mut ChaCha8Rng, n: usize) -> StochasticMatrix {
    let mut cols = vec![vec![0i64; n]; n];
    for col in cols.iter_mut() {
        for v in col.iter_mut() {
            if rng.random_bool(0.5) {
                *v = rng.random_range(1..=4);
            }
        }
        if col.iter().all(|&v| v == 0) {
            col[rng.random_range(0..n)] = 1;
        }
    }
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: i64 = cols[j].iter().sum();
                    rat(cols[j][i], s)
                })
                .collect()
        })
        .collect();
    StochasticMatrix::new(entries).expect("normalized columns")
}

/// Entries `a + b i` with `a, b ∈ -r..=r`, each entry zero with probability `p_zero`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, r: i64, p_zero: f64) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if !rng.random_bool(p_zero) {
                m.set(i, j, g(rng.random_range(-r..=r), rng.random_range(-r..=r)));
            }
        }
    }
    m
}

pub fn random_family(rng: &mut ChaCha8Rng, n: usize, m: usize, r: i64, p_zero: f64) -> KrausFamily {
    KrausFamily::unweighted((0..m).map(|_| random_matrix(rng, n, r, p_zero)).collect()).expect("valid family")
}

/// Exact inverse of an invertible 2×2 matrix.
fn inverse2(m: &Mat) -> Mat {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let det = &(a * d) - &(b * c);
    let inv = det.inv().expect("invertible");
    Mat::from_rows(vec![vec![d * &inv, &(-b.clone()) * &inv], vec![&(-c.clone()) * &inv, a * &inv]]).expect("2x2")
}

/// Rational unitary `(I − A)(I + A)^{-1}` from a random skew-Hermitian `A`.
pub fn random_unitary2(rng: &mut ChaCha8Rng) -> Mat {
    let mut small = || rng.random_range(-3..=3);
    let (a, d, b, c) = (small(), small(), small(), small());
    let skew = Mat::from_rows(vec![vec![g(0, a), g(b, c)], vec![g(-b, c), g(0, d)]]).expect("2x2");
    let id = Mat::identity(2);
    id.sub(&skew).unwrap().matmul(&inverse2(&id.add(&skew).unwrap())).unwrap()
}

/// Random weights summing to 1 over `k` entries.
pub fn random_distribution(rng: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.random_range(1..=5)).collect();
    let s: i64 = raw.iter().sum();
    raw.iter().map(|&v| rat(v, s)).collect()
}

/// Unital 2×2 family: a convex mixture of rational unitaries, sometimes with
/// matrix units of a random stochastic matrix mixed in.
pub fn random_unital2(rng: &mut ChaCha8Rng) -> KrausFamily {
    let k = rng.random_range(1..=3);
    let weights = random_distribution(rng, k + 1);
    let mut ops: Vec<(Mat, BigRational)> = (0..k).map(|i| (random_unitary2(rng), weights[i].clone())).collect();
    let last = weights[k].clone();
    if rng.random_bool(0.5) {
        let p = random_stochastic(rng, 2);
        for i in 0..2 {
            for j in 0..2 {
                if !p.get(i, j).is_zero() {
                    ops.push((Mat::unit(2, i, j), p.get(i, j) * &last));
                }
            }
        }
    } else {
        ops.push((random_unitary2(rng), last));
    }
    let mut fam = KrausFamily::weighted(ops).expect("valid family");
    assert!(fam.verify_unital(), "mixtures of unitaries are unital");
    fam
}

/// Random 3-CNF as DIMACS integers, before normalization.
pub fn random_cnf(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> Cnf {
    let nv = rng.random_range(1..=max_vars);
    let nc = rng.random_range(1..=max_clauses);
    let clauses: Vec<[i64; 3]> = (0..nc)
        .map(|_| {
            let mut lit = || {
                let v = rng.random_range(1..=nv as i64);
                if rng.random_bool(0.5) {
                    v
                } else {
                    -v
                }
            };
            [lit(), lit(), lit()]
        })
        .collect();
    Cnf::from_ints(nv, &clauses).expect("literals in range")
}

pub fn e(n: usize, i: usize) -> Vec<GaussianRational> {
    let mut v = vec![GaussianRational::zero(); n];
    v[i] = GaussianRational::one();
    v
}
