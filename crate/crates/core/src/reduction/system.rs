//! The homogeneous bilinear system encoding a normalized 3-CNF.
//!
//! Coordinates are 0-based: `0` is the homogenizing `x₀`, `1..=N` the
//! Boolean variables, `N+i` the product `x_{k¹_i} x_{k²_i}` and `N+M+i` the
//! auxiliary `1 + r_i x_{k³_i}` of clause `i` (1-based).

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_linalg::{GaussianRational, Mat};

use super::Cnf;

/// Meaning of one coordinate of the bilinear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Homogenizer,
    Variable(usize),
    Product(usize),
    ClauseAux(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Homogenizer => write!(f, "x0"),
            Role::Variable(i) => write!(f, "var {i}"),
            Role::Product(i) => write!(f, "prod {i}"),
            Role::ClauseAux(i) => write!(f, "aux {i}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub num_vars: usize,
    pub num_clauses: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.num_vars + 2 * self.num_clauses + 1
    }

    pub fn product(&self, clause: usize) -> usize {
        self.num_vars + clause
    }

    pub fn aux(&self, clause: usize) -> usize {
        self.num_vars + self.num_clauses + clause
    }

    pub fn role(&self, coord: usize) -> Role {
        let (n, m) = (self.num_vars, self.num_clauses);
        match coord {
            0 => Role::Homogenizer,
            c if c <= n => Role::Variable(c),
            c if c <= n + m => Role::Product(c - n),
            c => Role::ClauseAux(c - n - m),
        }
    }

    pub fn roles(&self) -> Vec<Role> {
        (0..self.dim()).map(|c| self.role(c)).collect()
    }

    /// `L = 2N + 7M + 4`.
    pub fn scale(&self) -> u64 {
        (2 * self.num_vars + 7 * self.num_clauses + 4) as u64
    }

    /// `m₀ = N + 3M + (N+2M+1)(4M+N)/2`.
    pub fn equation_count(&self) -> usize {
        let (n, m) = (self.num_vars, self.num_clauses);
        n + 3 * m + (n + 2 * m + 1) * (4 * m + n) / 2
    }
}

/// Which equation group a matrix encodes; clause indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquationTag {
    /// `(e₀ + p e_{k¹} + q e_{k²} + pq e_{N+i}) e_{N+M+i}ᵀ`
    Clause(usize),
    /// `e_{k¹} e_{k²}ᵀ − e₀ e_{N+i}ᵀ`
    ProductLink(usize),
    /// `(e₀ + r e_{k³} − e_{N+M+i}) e_jᵀ`
    AuxLink { clause: usize, column: usize },
    /// `e_i e_iᵀ − e₀ e₀ᵀ`
    Square(usize),
    /// `e_i e_jᵀ − e_j e_iᵀ`, `i < j`
    Antisymmetry(usize, usize),
}

#[derive(Clone, Debug)]
pub struct HomogeneousSystem {
    pub layout: Layout,
    pub mats: Vec<Mat>,
    pub tags: Vec<EquationTag>,
}

fn int_matrix(n: usize, entries: &[(usize, usize, i64)]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for &(i, j, v) in entries {
        let cur = m.get(i, j).clone();
        m.set(i, j, &cur + &GaussianRational::from_int(v));
    }
    m
}

impl HomogeneousSystem {
    pub fn n(&self) -> usize {
        self.layout.dim()
    }

    /// `Σ A_i* A_i`.
    pub fn gram_sum(&self) -> Mat {
        let n = self.n();
        let mut out = Mat::zeros(n, n);
        for a in &self.mats {
            out.add_scaled_assign(&GaussianRational::from_int(1), &a.adjoint().mul_conformable(a))
                .expect("square");
        }
        out
    }
}

/// Emits the five equation groups in order.
pub fn build_system(cnf: &Cnf) -> Result<HomogeneousSystem> {
    if !cnf.is_normalized() {
        return Err(Error::Precondition(
            "formula must be normalized: at least one clause, distinct leading variables".into(),
        ));
    }
    let layout = Layout {
        num_vars: cnf.num_vars(),
        num_clauses: cnf.num_clauses(),
    };
    let n = layout.dim();
    let mut mats = Vec::with_capacity(layout.equation_count());
    let mut tags = Vec::with_capacity(layout.equation_count());

    for (idx, c) in cnf.clauses().iter().enumerate() {
        let i = idx + 1;
        let (p, q) = (c[0].coefficient(), c[1].coefficient());
        let col = layout.aux(i);
        mats.push(int_matrix(
            n,
            &[(0, col, 1), (c[0].var, col, p), (c[1].var, col, q), (layout.product(i), col, p * q)],
        ));
        tags.push(EquationTag::Clause(i));
    }
    for (idx, c) in cnf.clauses().iter().enumerate() {
        let i = idx + 1;
        mats.push(int_matrix(n, &[(c[0].var, c[1].var, 1), (0, layout.product(i), -1)]));
        tags.push(EquationTag::ProductLink(i));
    }
    for (idx, c) in cnf.clauses().iter().enumerate() {
        let i = idx + 1;
        let r = c[2].coefficient();
        for j in 0..n {
            mats.push(int_matrix(n, &[(0, j, 1), (c[2].var, j, r), (layout.aux(i), j, -1)]));
            tags.push(EquationTag::AuxLink { clause: i, column: j });
        }
    }
    for i in 1..=layout.num_vars + layout.num_clauses {
        mats.push(int_matrix(n, &[(i, i, 1), (0, 0, -1)]));
        tags.push(EquationTag::Square(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            mats.push(int_matrix(n, &[(i, j, 1), (j, i, -1)]));
            tags.push(EquationTag::Antisymmetry(i, j));
        }
    }

    if mats.len() != layout.equation_count() {
        return Err(Error::Construction(format!(
            "emitted {} equations, expected {}",
            mats.len(),
            layout.equation_count()
        )));
    }
    let sys = HomogeneousSystem { layout, mats, tags };
    let g = sys.gram_sum();
    for i in 0..n {
        for j in 0..n {
            if i != j && !num_traits::Zero::is_zero(g.get(i, j)) {
                return Err(Error::Construction(format!("Σ A*A has off-diagonal entry at ({i}, {j})")));
            }
        }
    }
    Ok(sys)
}
