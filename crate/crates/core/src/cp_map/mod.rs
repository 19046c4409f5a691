//! Completely positive maps in Kraus form and the exact irreducibility and
//! primitivity deciders.
//!
//! A family `{(V_i, w_i)}` defines `Ψ(X) = Σ w_i V_i X V_i*`. A positive
//! integer weight `w` stands for `w` identical copies of the operator.

mod closure;
mod normalize;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_mismatch, Error, Result};
use crate::exact_linalg::{GaussianRational, Mat};
use crate::reduction::Cnf;

pub use closure::{
    algebra_closure, bounded_product_span, is_irreducible, is_primitive, product_span, wielandt_bound,
    ClosureResult, PrimitivityReport,
};
pub use normalize::{float_product_span_dims, normalize_to_kraus, FloatKrausFamily, NormalizeOptions};

/// One weighted Kraus operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrausOp {
    pub matrix: Mat,
    pub weight: BigRational,
}

/// Result of the last exact unitality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UnitalFlag {
    #[default]
    Unchecked,
    Yes,
    No,
}

/// Weighted family of `n×n` Kraus operators.
#[derive(Clone, Debug)]
pub struct KrausFamily {
    n: usize,
    ops: Vec<KrausOp>,
    unital: UnitalFlag,
    provenance: Option<Cnf>,
}

impl PartialEq for KrausFamily {
    /// Compares dimension, operators, weights and provenance; the cached
    /// unitality flag is not part of the value.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ops == other.ops && self.provenance == other.provenance
    }
}

impl Eq for KrausFamily {}

impl KrausFamily {
    pub fn new(ops: Vec<KrausOp>) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty("a Kraus family needs at least one operator"))?;
        let n = first.matrix.rows();
        for op in &ops {
            if op.matrix.rows() != n || op.matrix.cols() != n {
                return Err(dim_mismatch(
                    format!("{n}x{n}"),
                    format!("{}x{}", op.matrix.rows(), op.matrix.cols()),
                ));
            }
            if !op.weight.is_positive() {
                return Err(Error::InvalidWeight(format!("{} is not positive", op.weight)));
            }
        }
        Ok(Self {
            n,
            ops,
            unital: UnitalFlag::Unchecked,
            provenance: None,
        })
    }

    /// Family with every weight equal to 1.
    pub fn unweighted(mats: Vec<Mat>) -> Result<Self> {
        Self::new(
            mats.into_iter()
                .map(|matrix| KrausOp {
                    matrix,
                    weight: BigRational::one(),
                })
                .collect(),
        )
    }

    pub fn weighted(pairs: Vec<(Mat, BigRational)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(matrix, weight)| KrausOp { matrix, weight }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[KrausOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Mat> {
        self.ops.iter().map(|op| &op.matrix)
    }

    pub fn unital_flag(&self) -> UnitalFlag {
        self.unital
    }

    pub fn provenance(&self) -> Option<&Cnf> {
        self.provenance.as_ref()
    }

    pub fn with_provenance(mut self, cnf: Option<Cnf>) -> Self {
        self.provenance = cnf;
        self
    }

    /// Number of pairwise distinct listed operators, weights ignored.
    pub fn distinct_count(&self) -> usize {
        self.matrices().collect::<HashSet<_>>().len()
    }

    fn check_square(&self, x: &Mat) -> Result<()> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(dim_mismatch(
                format!("{0}x{0}", self.n),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(())
    }

    /// `Ψ(X) = Σ w_i V_i X V_i*`.
    pub fn apply(&self, x: &Mat) -> Result<Mat> {
        self.check_square(x)?;
        let mut out = Mat::zeros(self.n, self.n);
        for op in &self.ops {
            let term = op.matrix.mul_conformable(x).mul_conformable(&op.matrix.adjoint());
            out.add_scaled_assign(&GaussianRational::real(op.weight.clone()), &term)?;
        }
        Ok(out)
    }

    /// `Ψ*(X) = Σ w_i V_i* X V_i`, the adjoint under the Hilbert–Schmidt product.
    pub fn adjoint_apply(&self, x: &Mat) -> Result<Mat> {
        self.check_square(x)?;
        let mut out = Mat::zeros(self.n, self.n);
        for op in &self.ops {
            let term = op.matrix.adjoint().mul_conformable(x).mul_conformable(&op.matrix);
            out.add_scaled_assign(&GaussianRational::real(op.weight.clone()), &term)?;
        }
        Ok(out)
    }

    /// `Σ w_i V_i* V_i`.
    pub fn gram_sum(&self) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for op in &self.ops {
            let g = op.matrix.adjoint().mul_conformable(&op.matrix);
            out.add_scaled_assign(&GaussianRational::real(op.weight.clone()), &g)
                .expect("same shape");
        }
        out
    }

    /// Exact test of `Σ w_i V_i* V_i = I`.
    pub fn is_unital(&self) -> bool {
        self.gram_sum() == Mat::identity(self.n)
    }

    /// Exact unitality check that also records the result on the family.
    pub fn verify_unital(&mut self) -> bool {
        let ok = self.is_unital();
        self.unital = if ok { UnitalFlag::Yes } else { UnitalFlag::No };
        ok
    }

    /// Matrix `T` (n²×n²) with `vec(Ψ(X)) = T·vec(X)` for row-major `vec`.
    pub fn transfer_matrix(&self) -> Mat {
        let nn = self.n * self.n;
        let mut t = Mat::zeros(nn, nn);
        for op in &self.ops {
            let k = op.matrix.kron(&op.matrix.conj());
            t.add_scaled_assign(&GaussianRational::real(op.weight.clone()), &k)
                .expect("same shape");
        }
        t
    }

    /// Replaces each operator of integer weight `w` by `w` unit-weight copies.
    pub fn expand_weights(&self) -> Result<KrausFamily> {
        let mut ops = Vec::new();
        for op in &self.ops {
            if !op.weight.is_integer() {
                return Err(Error::InvalidWeight(format!("{} is not an integer", op.weight)));
            }
            let count: usize = usize::try_from(op.weight.to_integer())
                .map_err(|_| Error::InvalidWeight(format!("{} is too large to expand", op.weight)))?;
            ops.extend(std::iter::repeat_n(
                KrausOp {
                    matrix: op.matrix.clone(),
                    weight: BigRational::one(),
                },
                count,
            ));
        }
        KrausFamily::new(ops)
    }

    /// Sum of integer weights, i.e. the operator count after expansion.
    pub fn expanded_len(&self) -> Option<BigInt> {
        self.ops
            .iter()
            .try_fold(BigInt::zero(), |acc, op| op.weight.is_integer().then(|| acc + op.weight.to_integer()))
    }
}
