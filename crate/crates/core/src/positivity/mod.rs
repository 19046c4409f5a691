//! Strict positivity through the bilinear characterization: `Ψ` fails to be
//! strictly positive iff some nonzero `x, y` satisfy `x* V_i y = 0` for all
//! `i`.
//!
//! Exact and complete for `n ≤ 2` and for families of scaled matrix units;
//! exact on reduced 3SAT instances via their provenance; otherwise a
//! multi-start numeric search that can only produce disproofs.

mod classical;
mod numeric;
mod poly;
mod small;

use std::fmt;

use crate::cp_map::KrausFamily;
use crate::error::{dim_mismatch, Error, Result};
use crate::exact_linalg::{kernel, GaussianRational, Mat};
use crate::reduction::{decide_reduced_instance, reduce_cnf_to_kraus, DEFAULT_ENUMERATION_CAP};

pub use classical::{check_classical, classical_matrix, is_classical};
pub use numeric::{check_numeric, rationalize, NumericOptions};
pub use small::check_exact_small;

/// Nonzero pair `(x, y)` with `x* V_i y = 0` for every operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearWitness {
    pub x: Vec<GaussianRational>,
    pub y: Vec<GaussianRational>,
}

impl BilinearWitness {
    pub fn new(x: Vec<GaussianRational>, y: Vec<GaussianRational>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(dim_mismatch(x.len(), y.len()));
        }
        Ok(Self { x, y })
    }

    pub fn is_nonzero(&self) -> bool {
        use num_traits::Zero;
        self.x.iter().any(|z| !z.is_zero()) && self.y.iter().any(|z| !z.is_zero())
    }

    /// `x y*`, the rank-one matrix orthogonal to every operator.
    pub fn rank_one(&self) -> Mat {
        Mat::outer(&self.x, &self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    StrictlyPositive,
    NotStrictlyPositive,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::StrictlyPositive => "STRICTLY_POSITIVE",
            Status::NotStrictlyPositive => "NOT_STRICTLY_POSITIVE",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ExactN1,
    ExactN2,
    ExactClassical,
    OracleReduced,
    Numeric,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactN1 => "exact-n1",
            Method::ExactN2 => "exact-n2",
            Method::ExactClassical => "exact-classical",
            Method::OracleReduced => "oracle-reduced",
            Method::Numeric => "numeric",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityVerdict {
    pub status: Status,
    pub witness: Option<BilinearWitness>,
    /// Smallest `λ_min(Ψ(yy*))` found over unit `y` (numeric method only).
    pub numeric_margin: Option<f64>,
    pub method: Method,
    /// Set when an exact method proved a common root exists but it has no
    /// Gaussian-rational coordinates.
    pub irrational_witness: bool,
    /// Assignment recovered on reduced instances.
    pub assignment: Option<Vec<bool>>,
}

impl PositivityVerdict {
    pub(crate) fn positive(method: Method) -> Self {
        Self {
            status: Status::StrictlyPositive,
            witness: None,
            numeric_margin: None,
            method,
            irrational_witness: false,
            assignment: None,
        }
    }

    pub(crate) fn refuted(method: Method, witness: BilinearWitness) -> Self {
        Self {
            status: Status::NotStrictlyPositive,
            witness: Some(witness),
            numeric_margin: None,
            method,
            irrational_witness: false,
            assignment: None,
        }
    }
}

/// Exact check that `(x, y)` is nonzero and annihilates every listed operator.
/// Weights play no role.
pub fn verify_witness(psi: &KrausFamily, w: &BilinearWitness) -> Result<bool> {
    if w.x.len() != psi.n() || w.y.len() != psi.n() {
        return Err(dim_mismatch(psi.n(), format!("({}, {})", w.x.len(), w.y.len())));
    }
    if !w.is_nonzero() {
        return Ok(false);
    }
    for m in psi.matrices() {
        if !num_traits::Zero::is_zero(&m.sesquilinear(&w.x, &w.y)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of operators whose form does not vanish on `w`.
pub fn witness_residuals(psi: &KrausFamily, w: &BilinearWitness) -> Result<Vec<(usize, GaussianRational)>> {
    let mut out = Vec::new();
    for (i, m) in psi.matrices().enumerate() {
        let r = m.sesquilinear(&w.x, &w.y)?;
        if !num_traits::Zero::is_zero(&r) {
            out.push((i, r));
        }
    }
    Ok(out)
}

/// Given `y`, a nonzero `x` with `x* V_i y = 0` for all `i`, if one exists.
pub(crate) fn left_annihilator(psi: &KrausFamily, y: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    // x* (V_i y) = 0  ⇔  conj(V_i y)ᵀ x = 0.
    let rows: Vec<Vec<GaussianRational>> = psi
        .matrices()
        .map(|m| m.mul_vec(y).expect("shape").iter().map(GaussianRational::conj).collect())
        .collect();
    kernel(&rows, psi.n()).into_iter().next()
}

/// Dispatches to the strongest applicable method.
///
/// `n ≤ 2` → exact; scaled matrix units → classical; reduced instance with
/// matching provenance → enumeration oracle; otherwise numeric search.
pub fn check(psi: &KrausFamily) -> PositivityVerdict {
    check_with(psi, &NumericOptions::default())
}

pub fn check_with(psi: &KrausFamily, opts: &NumericOptions) -> PositivityVerdict {
    if psi.n() <= 2 {
        return check_exact_small(psi).expect("n ≤ 2");
    }
    if is_classical(psi) {
        return check_classical(psi).expect("classical structure");
    }
    if let Some(v) = check_reduced(psi) {
        return v;
    }
    check_numeric(psi, opts).expect("valid numeric options")
}

/// Oracle path for families that carry reduction provenance. Returns `None`
/// when the provenance does not reproduce this exact family or enumeration
/// is over the cap.
fn check_reduced(psi: &KrausFamily) -> Option<PositivityVerdict> {
    let cnf = psi.provenance()?;
    let inst = reduce_cnf_to_kraus(cnf).ok()?;
    if inst.family != *psi {
        return None;
    }
    let d = decide_reduced_instance(&inst, DEFAULT_ENUMERATION_CAP).ok()?;
    Some(match d.witness {
        Some(w) => {
            let mut v = PositivityVerdict::refuted(Method::OracleReduced, w);
            v.assignment = d.assignment;
            v
        }
        None => PositivityVerdict::positive(Method::OracleReduced),
    })
}

pub(crate) fn ensure_verified(psi: &KrausFamily, w: &BilinearWitness) -> Result<()> {
    if verify_witness(psi, w)? {
        Ok(())
    } else {
        Err(Error::Construction("internally produced witness failed verification".into()))
    }
}
