//! Exact linear algebra over ℚ(i).

mod matrix;
mod scalar;
mod subspace;

pub use matrix::Mat;
pub use scalar::{rational_sqrt, GaussianRational};
pub use subspace::{extract_basis, hs_orthocomplement, span_contains, Echelon, MatrixSubspace};

pub(crate) use scalar::rat_to_f64;

/// Rank of a list of equal-length vectors, by elimination.
pub fn rank(vectors: &[Vec<GaussianRational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{v : r·v = 0 for every row r}` (no conjugation).
pub fn kernel(rows: &[Vec<GaussianRational>], ncols: usize) -> Vec<Vec<GaussianRational>> {
    use num_traits::{One, Zero};
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    let reduced: Vec<(usize, &[GaussianRational])> = e.pivots().zip(e.rows()).collect();
    let mut is_pivot = vec![false; ncols];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![GaussianRational::zero(); ncols];
            v[free] = GaussianRational::one();
            for (p, row) in &reduced {
                if !row[free].is_zero() {
                    v[*p] = -row[free].clone();
                }
            }
            v
        })
        .collect()
}
