//! Independent ground truth: brute-force SAT, the classical embedding of
//! column-stochastic matrices, and Perron–Frobenius graph criteria.

use std::collections::VecDeque;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cp_map::KrausFamily;
use crate::error::{dim_mismatch, Error, Result};
use crate::exact_linalg::Mat;
use crate::reduction::{assignment_from_index, Cnf, DEFAULT_ENUMERATION_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub sat: bool,
    /// First satisfying assignment in [`assignment_from_index`] order.
    pub assignment: Option<Vec<bool>>,
}

/// Exhaustive satisfiability check of the formula exactly as given.
pub fn sat_brute_force(cnf: &Cnf) -> Result<SatResult> {
    sat_brute_force_capped(cnf, DEFAULT_ENUMERATION_CAP)
}

pub fn sat_brute_force_capped(cnf: &Cnf, cap: usize) -> Result<SatResult> {
    let nv = cnf.num_vars();
    if nv > cap {
        return Err(Error::OverCap {
            what: "variable count",
            value: nv,
            cap,
        });
    }
    for k in 0..(1u64 << nv) {
        let a = assignment_from_index(nv, k);
        if cnf.is_satisfied_by(&a) {
            return Ok(SatResult {
                sat: true,
                assignment: Some(a),
            });
        }
    }
    Ok(SatResult {
        sat: false,
        assignment: None,
    })
}

/// Square matrix with nonnegative rational entries whose columns sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticMatrix {
    entries: Vec<Vec<BigRational>>,
}

impl StochasticMatrix {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Empty("stochastic matrix"));
        }
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(dim_mismatch(n, row.len()));
        }
        if entries.iter().flatten().any(Signed::is_negative) {
            return Err(Error::InvalidArgument("stochastic matrix has a negative entry".into()));
        }
        for j in 0..n {
            let s: BigRational = entries.iter().map(|r| &r[j]).sum();
            if !s.is_one() {
                return Err(Error::InvalidArgument(format!("column {j} sums to {s}, not 1")));
            }
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn digraph(&self) -> Digraph {
        Digraph::from_matrix(&self.entries)
    }

    pub fn is_entrywise_positive(&self) -> bool {
        self.entries.iter().flatten().all(Signed::is_positive)
    }
}

/// `{(E_ij, P_ij) : P_ij > 0}`; unital exactly, and `diag(v) ↦ diag(P v)`.
pub fn stochastic_embed(p: &StochasticMatrix) -> KrausFamily {
    let n = p.n();
    let mut ops = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = p.get(i, j);
            if w.is_positive() {
                ops.push((Mat::unit(n, i, j), w.clone()));
            }
        }
    }
    let mut fam = KrausFamily::weighted(ops).expect("column sums are 1, so some entry is positive");
    fam.verify_unital();
    fam
}

/// Directed graph on `0..n` as adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if !succ[u].contains(&v) {
                succ[u].push(v);
            }
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        Ok(Self { succ })
    }

    /// Edge `(i, j)` iff `m[i][j] ≠ 0`.
    pub fn from_matrix(m: &[Vec<BigRational>]) -> Self {
        let succ = m
            .iter()
            .map(|row| (0..row.len()).filter(|&j| !row[j].is_zero()).collect())
            .collect();
        Self { succ }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    fn reversed(&self) -> Digraph {
        let mut succ = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            succ[v].push(u);
        }
        Digraph { succ }
    }

    /// BFS distances from `src`; `None` for unreachable nodes.
    fn levels(&self, src: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.n()];
        level[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = level[u].expect("queued nodes are labelled");
            for &v in &self.succ[u] {
                if level[v].is_none() {
                    level[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        level
    }
}

/// Every node reaches node 0 and is reached from it.
pub fn strongly_connected(g: &Digraph) -> bool {
    if g.n() == 0 {
        return true;
    }
    g.levels(0).iter().all(Option::is_some) && g.reversed().levels(0).iter().all(Option::is_some)
}

/// Gcd of cycle lengths, as the gcd of `|level(u) + 1 − level(v)|` over edges.
pub fn period(g: &Digraph) -> Result<usize> {
    if g.n() == 0 || !strongly_connected(g) {
        return Err(Error::Precondition("period needs a strongly connected digraph".into()));
    }
    let level = g.levels(0);
    let mut d = 0usize;
    for (u, v) in g.edges() {
        let (lu, lv) = (level[u].expect("reachable"), level[v].expect("reachable"));
        d = d.gcd(&(lu + 1).abs_diff(lv));
    }
    Ok(d)
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Exact `P^e` by repeated squaring.
pub fn matrix_power(p: &[Vec<BigRational>], mut e: u64) -> Vec<Vec<BigRational>> {
    let n = p.len();
    let mut result: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut base = p.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// `P^(n²−2n+2)` is entrywise positive; equivalent to primitivity.
pub fn classical_power_positivity(p: &StochasticMatrix) -> bool {
    let n = p.n() as u64;
    let q = matrix_power(p.entries(), n * n - 2 * n + 2);
    q.iter().flatten().all(Signed::is_positive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp_map::{is_irreducible, is_primitive};
    use crate::exact_linalg::GaussianRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn stoch(rows: &[&[(i64, i64)]]) -> StochasticMatrix {
        StochasticMatrix::new(rows.iter().map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect()).collect()).unwrap()
    }

    #[test]
    fn sat_examples() {
        let empty = Cnf::new(2, vec![]).unwrap();
        assert_eq!(sat_brute_force(&empty).unwrap().assignment, Some(vec![true, true]));
        let contradiction = Cnf::from_ints(2, &[[1, 1, 1], [-1, -1, -1]]).unwrap();
        assert!(!sat_brute_force(&contradiction).unwrap().sat);
        let big = Cnf::new(25, vec![]).unwrap();
        assert!(sat_brute_force(&big).is_err());
    }

    #[test]
    fn embedding_examples() {
        let id = stoch(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let fam = stochastic_embed(&id);
        assert_eq!(fam.len(), 2);
        assert!(fam.is_unital());

        let half = stoch(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        let fam = stochastic_embed(&half);
        assert_eq!(fam.len(), 4);
        assert!(classical_power_positivity(&half));

        let p = stoch(&[&[(1, 3), (1, 1)], &[(2, 3), (0, 1)]]);
        let out = stochastic_embed(&p).apply(&Mat::unit(2, 0, 0)).unwrap();
        assert_eq!(*out.get(0, 0), GaussianRational::real(rat(1, 3)));
        assert_eq!(*out.get(1, 1), GaussianRational::real(rat(2, 3)));
        assert!(out.get(0, 1).is_zero());
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(StochasticMatrix::new(vec![vec![rat(1, 2)]]).is_err());
        assert!(StochasticMatrix::new(vec![vec![rat(2, 1), rat(1, 1)], vec![rat(-1, 1), rat(0, 1)]]).is_err());
    }

    #[test]
    fn graph_examples() {
        let cycle = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(strongly_connected(&cycle));
        assert_eq!(period(&cycle).unwrap(), 2);
        let looped = Digraph::new(2, &[(0, 1), (1, 0), (0, 0)]).unwrap();
        assert_eq!(period(&looped).unwrap(), 1);
        let one_way = Digraph::new(2, &[(0, 0), (0, 1)]).unwrap();
        assert!(!strongly_connected(&one_way));
        assert!(period(&one_way).is_err());
    }

    #[test]
    fn classical_primitivity_examples() {
        let p = stoch(&[&[(1, 2), (1, 1)], &[(1, 2), (0, 1)]]);
        assert!(is_primitive(&stochastic_embed(&p)).primitive);
        assert!(classical_power_positivity(&p));

        let swap = stoch(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        let fam = stochastic_embed(&swap);
        assert!(is_irreducible(&fam));
        assert!(!is_primitive(&fam).primitive);
        assert!(!classical_power_positivity(&swap));
        assert_eq!(period(&swap.digraph()).unwrap(), 2);
    }
}
