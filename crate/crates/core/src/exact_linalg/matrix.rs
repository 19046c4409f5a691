//! Dense row-major matrices over the Gaussian rationals.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::GaussianRational;
use crate::error::{dim_mismatch, Result};

/// Dense row-major matrix with exact entries.
///
/// Storage is shared behind an `Arc`, so cloning is cheap; weight expansion
/// repeats the same operator many times.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Arc<Vec<GaussianRational>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: Arc::new(vec![GaussianRational::zero(); rows * cols]),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    /// Matrix unit `E_ij` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, GaussianRational::one());
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dim_mismatch(rows * cols, data.len()));
        }
        Ok(Self {
            rows,
            cols,
            data: Arc::new(data),
        })
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(dim_mismatch(c, bad.len()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Real matrix from integer numerators over a shared denominator.
    pub fn from_ints(rows: &[&[i64]], den: i64) -> Self {
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| GaussianRational::ratio(v, den)))
            .collect();
        Self::from_vec(rows.len(), rows.first().map_or(0, |r| r.len()), data)
            .expect("ragged integer rows")
    }

    pub fn column(v: Vec<GaussianRational>) -> Self {
        let n = v.len();
        Self::from_vec(n, 1, v).expect("column length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        let cols = self.cols;
        Arc::make_mut(&mut self.data)[i * cols + j] = v;
    }

    /// Row-major entries; this is also the vectorization `vec(M)`.
    pub fn entries(&self) -> &[GaussianRational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|z| !z.is_zero()).count()
    }

    fn same_shape(&self, other: &Mat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dim_mismatch(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(other.data.iter()).map(|(a, b)| a + b).collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: Arc::new(data),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(other.data.iter()).map(|(a, b)| a - b).collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: Arc::new(data),
        })
    }

    /// In-place `self += c·other`; shapes must agree.
    pub fn add_scaled_assign(&mut self, c: &GaussianRational, other: &Mat) -> Result<()> {
        self.same_shape(other)?;
        if c.is_zero() {
            return Ok(());
        }
        let data = Arc::make_mut(&mut self.data);
        for (a, b) in data.iter_mut().zip(other.data.iter()) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(dim_mismatch(
                format!("{} rows on the right factor", self.cols),
                other.rows,
            ));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![GaussianRational::zero(); n * m];
        for i in 0..n {
            for l in 0..k {
                let a = &self.data[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = &other.data[l * m + j];
                    if !b.is_zero() {
                        out[i * m + j] += &(a * b);
                    }
                }
            }
        }
        Ok(Mat {
            rows: n,
            cols: m,
            data: Arc::new(out),
        })
    }

    /// Conformable product; panics on mismatch. For internal loops whose
    /// shapes are already validated.
    pub(crate) fn mul_conformable(&self, other: &Mat) -> Mat {
        self.matmul(other).expect("conformable product")
    }

    pub fn scale(&self, c: &GaussianRational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: Arc::new(self.data.iter().map(|z| z * c).collect()),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Mat {
        self.scale(&GaussianRational::real(c.clone()))
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data: Arc::new(data),
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data: Arc::new(data),
        }
    }

    pub fn conj(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: Arc::new(self.data.iter().map(GaussianRational::conj).collect()),
        }
    }

    pub fn trace(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(dim_mismatch("square matrix", format!("{}x{}", self.rows, self.cols)));
        }
        let mut t = GaussianRational::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        Ok(t)
    }

    /// Hilbert–Schmidt inner product `⟨A, B⟩ = tr(A* B) = Σ conj(a_ij) b_ij`.
    pub fn hs_inner(&self, other: &Mat) -> Result<GaussianRational> {
        self.same_shape(other)?;
        let mut acc = GaussianRational::zero();
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(&a.conj() * b);
            }
        }
        Ok(acc)
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = vec![GaussianRational::zero(); r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            data[(i * other.rows + k) * c + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        Mat {
            rows: r,
            cols: c,
            data: Arc::new(data),
        }
    }

    /// `M v` for a vector given as a slice.
    pub fn mul_vec(&self, v: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        if v.len() != self.cols {
            return Err(dim_mismatch(self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    /// Bilinear form `conj(x)ᵀ M y`.
    pub fn sesquilinear(&self, x: &[GaussianRational], y: &[GaussianRational]) -> Result<GaussianRational> {
        if x.len() != self.rows {
            return Err(dim_mismatch(self.rows, x.len()));
        }
        let my = self.mul_vec(y)?;
        let mut acc = GaussianRational::zero();
        for (a, b) in x.iter().zip(my.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(&a.conj() * b);
            }
        }
        Ok(acc)
    }

    /// Outer product `x y*`.
    pub fn outer(x: &[GaussianRational], y: &[GaussianRational]) -> Mat {
        let data = x
            .iter()
            .flat_map(|a| y.iter().map(move |b| a * &b.conj()))
            .collect();
        Mat {
            rows: x.len(),
            cols: y.len(),
            data: Arc::new(data),
        }
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<num_complex::Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex64())
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let mut a = Mat::zeros(2, 2);
        a.set(0, 0, GaussianRational::i());
        a.set(1, 1, GaussianRational::one());
        let mut expect = Mat::zeros(2, 2);
        expect.set(0, 0, -GaussianRational::i());
        expect.set(1, 1, GaussianRational::one());
        assert_eq!(a.adjoint(), expect);
    }

    #[test]
    fn trace_of_unit_product() {
        let p = Mat::unit(2, 0, 1).matmul(&Mat::unit(2, 1, 0)).unwrap();
        assert_eq!(p.trace().unwrap(), GaussianRational::one());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = Mat::zeros(2, 3);
        let b = Mat::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
        assert!(a.trace().is_err());
        assert!(a.add(&Mat::zeros(3, 2)).is_err());
        assert!(a.hs_inner(&Mat::zeros(2, 2)).is_err());
        assert!(Mat::from_vec(2, 2, vec![GaussianRational::zero(); 3]).is_err());
    }

    #[test]
    fn kron_matches_definition() {
        let a = Mat::from_ints(&[&[1, 2], &[3, 4]], 1);
        let b = Mat::unit(2, 0, 1);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), &GaussianRational::from_int(1));
        assert_eq!(k.get(2, 3), &GaussianRational::from_int(4));
        assert_eq!(k.nonzero_count(), 4);
    }

    #[test]
    fn clone_is_copy_on_write() {
        let a = Mat::identity(2);
        let mut b = a.clone();
        b.set(0, 1, GaussianRational::from_int(5));
        assert_eq!(a, Mat::identity(2));
        assert_ne!(a, b);
    }
}
