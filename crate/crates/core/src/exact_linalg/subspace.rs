//! Subspaces of `ℂ^{n×n}` held as explicit bases, with an exact reduced
//! row-echelon form kept alongside for membership tests.

use num_traits::{One, Zero};

use super::matrix::Mat;
use super::scalar::GaussianRational;
use crate::error::{dim_mismatch, Error, Result};

/// Reduced row-echelon form of a set of vectors.
///
/// Rows are sorted by pivot, each pivot entry is 1 and every other row is
/// zero in that column. This form is unique per subspace, so two subspaces
/// are equal iff their echelon forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Echelon {
    len: usize,
    rows: Vec<(usize, Vec<GaussianRational>)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &mut [GaussianRational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row.iter()).skip(*p) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
    }

    pub fn contains(&self, v: &[GaussianRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: &[GaussianRational]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|z| !z.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero pivot");
        for x in w.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(w.iter()).skip(p) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, w));
        true
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }
}

/// A linear subspace of `n×n` matrices.
#[derive(Clone, Debug)]
pub struct MatrixSubspace {
    n: usize,
    basis: Vec<Mat>,
    echelon: Echelon,
}

impl PartialEq for MatrixSubspace {
    /// Equality of subspaces, not of the chosen bases.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.echelon == other.echelon
    }
}

impl Eq for MatrixSubspace {}

impl MatrixSubspace {
    /// The zero subspace of `ℂ^{n×n}`.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
            echelon: Echelon::new(n * n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                s.insert(&Mat::unit(n, i, j)).expect("unit matrix shape");
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    fn check_shape(&self, m: &Mat) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(dim_mismatch(
                format!("{0}x{0}", self.n),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        Ok(())
    }

    /// Adds `m` to the basis if it is independent of the current span.
    pub fn insert(&mut self, m: &Mat) -> Result<bool> {
        self.check_shape(m)?;
        if self.echelon.insert(m.entries()) {
            self.basis.push(m.clone());
            Ok(true)
        } else {
            Ok(false)
        }
    }

    /// Exact membership test.
    pub fn contains(&self, m: &Mat) -> Result<bool> {
        self.check_shape(m)?;
        Ok(self.echelon.contains(m.entries()))
    }

    pub fn contains_subspace(&self, other: &MatrixSubspace) -> Result<bool> {
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Basis of the span of `vectors`, chosen greedily in input order.
///
/// The returned basis consists of input matrices; an input is kept iff it
/// is independent of those kept before it.
pub fn extract_basis(vectors: &[Mat]) -> Result<MatrixSubspace> {
    let first = vectors.first().ok_or(Error::Empty("extract_basis needs at least one matrix"))?;
    if !first.is_square() {
        return Err(dim_mismatch("square matrix", format!("{}x{}", first.rows(), first.cols())));
    }
    let mut space = MatrixSubspace::zero(first.rows());
    for v in vectors {
        space.insert(v)?;
    }
    Ok(space)
}

pub fn span_contains(space: &MatrixSubspace, m: &Mat) -> Result<bool> {
    space.contains(m)
}

/// Orthogonal complement under `⟨A, B⟩ = tr(A* B)`.
pub fn hs_orthocomplement(space: &MatrixSubspace) -> MatrixSubspace {
    // M ⊥ B  ⇔  Σ conj(b_k) m_k = 0. The conjugated echelon rows are still in
    // reduced form, so the kernel is read off the free columns.
    let n = space.n;
    let len = n * n;
    let rows: Vec<(usize, &[GaussianRational])> =
        space.echelon.pivots().zip(space.echelon.rows()).collect();
    let mut is_pivot = vec![false; len];
    for (p, _) in &rows {
        is_pivot[*p] = true;
    }
    let mut out = MatrixSubspace::zero(n);
    for free in (0..len).filter(|&c| !is_pivot[c]) {
        let mut v = vec![GaussianRational::zero(); len];
        v[free] = GaussianRational::one();
        for (p, row) in &rows {
            if !row[free].is_zero() {
                v[*p] = -row[free].conj();
            }
        }
        let m = Mat::from_vec(n, n, v).expect("n*n entries");
        out.insert(&m).expect("shape");
    }
    out
}
