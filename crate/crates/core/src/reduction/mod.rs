//! 3SAT → homogeneous bilinear system → unital Kraus family, with
//! certificates in both directions.
//!
//! A satisfying assignment `a` maps to the real witness `x = y` with
//! `x₀ = 1`, `x_i = a_i`, `x_{N+i} = x_{k¹}x_{k²}` and
//! `x_{N+M+i} = 1 + r_i x_{k³}`. Conversely every nonzero solution of the
//! system has `y ∝ x`, `x₀ ≠ 0` and `x_i/x₀ = ±1`, so reading the signs
//! back yields a satisfying assignment.

mod cnf;
mod system;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use cnf::{
    assignment_from_index, format_assignment, parse_assignment, parse_dimacs, parse_dimacs_raw, Clause, Cnf,
    Literal,
};
pub use system::{build_system, EquationTag, HomogeneousSystem, Layout, Role};

use crate::cp_map::{KrausFamily, KrausOp};
use crate::error::{Error, Result};
use crate::exact_linalg::{GaussianRational, Mat};
use crate::positivity::{verify_witness, BilinearWitness};

/// Default cap on `N` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub cnf: Cnf,
    pub system: HomogeneousSystem,
    /// `L = 2N + 7M + 4`.
    pub scale: u64,
    /// `k_j`, the diagonal of `Σ A_i* A_i`.
    pub gram_diagonal: Vec<BigInt>,
    /// `n_j`: index of a group-(3) matrix with `A*A = 3 e_j e_jᵀ`.
    pub special_indices: Vec<usize>,
    /// `l_j = L² − k_j`.
    pub multiplicities: Vec<BigInt>,
    pub family: KrausFamily,
}

impl ReducedInstance {
    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn equation_count(&self) -> usize {
        self.system.mats.len()
    }

    pub fn roles(&self) -> Vec<Role> {
        self.system.layout.roles()
    }

    /// `m = m₀ + 3 Σ_j l_j`.
    pub fn expanded_count(&self) -> BigInt {
        let total: BigInt = self.multiplicities.iter().sum();
        BigInt::from(self.equation_count()) + total * 3
    }
}

/// Pads the system with scaled copies of group-(3) matrices so that
/// `Σ w_i V_i* V_i = I` after division by `L`.
pub fn unitalize(cnf: &Cnf, system: HomogeneousSystem) -> Result<ReducedInstance> {
    let n = system.n();
    let scale = system.layout.scale();
    let l_sq = BigInt::from(scale) * BigInt::from(scale);
    let gram = system.gram_sum();

    let mut gram_diagonal = Vec::with_capacity(n);
    for j in 0..n {
        let z = gram.get(j, j);
        if !z.is_real() || !z.re.is_integer() {
            return Err(Error::Construction(format!("Σ A*A has non-integer diagonal entry {z} at {j}")));
        }
        gram_diagonal.push(z.re.to_integer());
    }

    let mut special_indices = Vec::with_capacity(n);
    for j in 0..n {
        let target = Mat::unit(n, j, j).scale(&GaussianRational::from_int(3));
        let found = system.tags.iter().enumerate().find_map(|(idx, tag)| {
            let is_candidate = matches!(tag, EquationTag::AuxLink { column, .. } if *column == j);
            let a = &system.mats[idx];
            (is_candidate && a.adjoint().mul_conformable(a) == target).then_some(idx)
        });
        special_indices.push(found.ok_or_else(|| Error::Construction(format!("no special index for coordinate {j}")))?);
    }

    let mut multiplicities = Vec::with_capacity(n);
    for (j, k) in gram_diagonal.iter().enumerate() {
        if *k > l_sq {
            return Err(Error::Construction(format!("k_{j} = {k} exceeds L² = {l_sq}")));
        }
        multiplicities.push(&l_sq - k);
    }

    let inv_l = GaussianRational::real(BigRational::new(BigInt::one(), BigInt::from(scale)));
    let inv_3l = GaussianRational::real(BigRational::new(BigInt::one(), BigInt::from(3 * scale)));
    let mut ops: Vec<KrausOp> = system
        .mats
        .iter()
        .map(|a| KrausOp {
            matrix: a.scale(&inv_l),
            weight: BigRational::one(),
        })
        .collect();
    for (j, l) in multiplicities.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        ops.push(KrausOp {
            matrix: system.mats[special_indices[j]].scale(&inv_3l),
            weight: BigRational::from_integer(l * 3),
        });
    }
    let mut family = KrausFamily::new(ops)?.with_provenance(Some(cnf.clone()));
    if !family.verify_unital() {
        return Err(Error::Construction("reduced family is not unital".into()));
    }
    Ok(ReducedInstance {
        cnf: cnf.clone(),
        system,
        scale,
        gram_diagonal,
        special_indices,
        multiplicities,
        family,
    })
}

/// Normalizes the formula if needed, then builds and unitalizes the system.
pub fn reduce_cnf_to_kraus(cnf: &Cnf) -> Result<ReducedInstance> {
    let cnf = if cnf.is_normalized() {
        cnf.clone()
    } else {
        cnf.normalized()
    };
    let system = build_system(&cnf)?;
    unitalize(&cnf, system)
}

/// The forced solution vector for an assignment (no satisfaction check).
fn forced_vector(cnf: &Cnf, layout: &Layout, assignment: &[bool]) -> Vec<GaussianRational> {
    let sign = |b: bool| if b { 1i64 } else { -1 };
    let mut x = vec![0i64; layout.dim()];
    x[0] = 1;
    for (i, &a) in assignment.iter().enumerate() {
        x[i + 1] = sign(a);
    }
    for (idx, c) in cnf.clauses().iter().enumerate() {
        let i = idx + 1;
        x[layout.product(i)] = x[c[0].var] * x[c[1].var];
        x[layout.aux(i)] = 1 + c[2].coefficient() * x[c[2].var];
    }
    x.into_iter().map(GaussianRational::from_int).collect()
}

pub fn encode_assignment(inst: &ReducedInstance, assignment: &[bool]) -> Result<BilinearWitness> {
    if assignment.len() != inst.cnf.num_vars() {
        return Err(Error::InvalidArgument(format!(
            "assignment has {} values, formula has {} variables",
            assignment.len(),
            inst.cnf.num_vars()
        )));
    }
    if let Some(clause) = inst.cnf.first_violated(assignment) {
        // Group (1) comes first, so clause i is operator i.
        return Err(Error::UnsatisfiedClause {
            clause: clause + 1,
            operator: clause,
        });
    }
    let x = forced_vector(&inst.cnf, &inst.system.layout, assignment);
    let w = BilinearWitness::new(x.clone(), x)?;
    if !verify_witness(&inst.family, &w)? {
        return Err(Error::Construction("encoded witness failed verification".into()));
    }
    Ok(w)
}

/// Outcome of the exact decision on a reduced instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedDecision {
    pub feasible: bool,
    pub assignment: Option<Vec<bool>>,
    pub witness: Option<BilinearWitness>,
}

/// Exact decision for instances built by this module.
///
/// Enumerates `±1` assignments in [`assignment_from_index`] order, builds the
/// forced vector and checks the clause equations (the only group the forced
/// vector can violate). The first solution is returned as a verified witness.
pub fn decide_reduced_instance(inst: &ReducedInstance, cap: usize) -> Result<ReducedDecision> {
    let nv = inst.cnf.num_vars();
    if nv > cap {
        return Err(Error::OverCap {
            what: "variable count",
            value: nv,
            cap,
        });
    }
    let layout = &inst.system.layout;
    let clause_mats = &inst.system.mats[..layout.num_clauses];
    for k in 0..(1u64 << nv) {
        let a = assignment_from_index(nv, k);
        let x = forced_vector(&inst.cnf, layout, &a);
        let mut ok = true;
        for m in clause_mats {
            if !m.sesquilinear(&x, &x)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            let witness = encode_assignment(inst, &a)?;
            return Ok(ReducedDecision {
                feasible: true,
                assignment: Some(a),
                witness: Some(witness),
            });
        }
    }
    Ok(ReducedDecision {
        feasible: false,
        assignment: None,
        witness: None,
    })
}

/// Reads a satisfying assignment off a verified witness.
pub fn decode_witness(inst: &ReducedInstance, w: &BilinearWitness) -> Result<Vec<bool>> {
    if !verify_witness(&inst.family, w)? {
        return Err(Error::WitnessRejected("bilinear forms do not all vanish".into()));
    }
    let y0 = &w.y[0];
    let inv = y0
        .inv()
        .ok_or_else(|| Error::WitnessRejected("x₀ = 0 cannot occur for a valid witness".into()))?;
    let one = GaussianRational::one();
    let minus_one = -GaussianRational::one();
    let mut a = Vec::with_capacity(inst.cnf.num_vars());
    for i in 1..=inst.cnf.num_vars() {
        let r = &w.y[i] * &inv;
        if r == one {
            a.push(true);
        } else if r == minus_one {
            a.push(false);
        } else {
            return Err(Error::WitnessRejected(format!("coordinate {i} has ratio {r}, not ±1")));
        }
    }
    if !inst.cnf.is_satisfied_by(&a) {
        return Err(Error::WitnessRejected("decoded assignment does not satisfy the formula".into()));
    }
    Ok(a)
}
