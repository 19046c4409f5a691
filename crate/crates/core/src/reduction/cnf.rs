//! 3-CNF formulas and DIMACS input.

use std::fmt;

use crate::error::{Error, Result};

/// A literal over variable `var` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Self { var, positive }
    }

    pub fn from_dimacs(v: i64) -> Option<Self> {
        (v != 0).then(|| Self::new(v.unsigned_abs() as usize, v > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn negated(self) -> Self {
        Self::new(self.var, !self.positive)
    }

    /// Coefficient in the clause polynomial factor `(1 + c·x_var)`.
    ///
    /// `X` is true at `x = 1`, so a positive literal contributes `(1 − x)`
    /// and a negative one `(1 + x)`.
    pub fn coefficient(self) -> i64 {
        if self.positive {
            -1
        } else {
            1
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

pub type Clause = [Literal; 3];

/// A 3-CNF formula over variables `1..=num_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (ci, c) in clauses.iter().enumerate() {
            for l in c {
                if l.var == 0 || l.var > num_vars {
                    return Err(Error::InvalidArgument(format!(
                        "clause {} uses variable {} outside 1..={num_vars}",
                        ci + 1,
                        l.var
                    )));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Builds from DIMACS-style signed integers.
    pub fn from_ints(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                let mut out = [Literal::new(1, true); 3];
                for (slot, &v) in out.iter_mut().zip(c) {
                    *slot = Literal::from_dimacs(v)
                        .ok_or_else(|| Error::InvalidArgument("literal 0 inside a clause".into()))?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Every clause has distinct variables in its first two positions and
    /// there is at least one clause.
    pub fn is_normalized(&self) -> bool {
        !self.clauses.is_empty() && self.clauses.iter().all(|c| c[0].var != c[1].var)
    }

    pub fn clause_satisfied(&self, clause: usize, assignment: &[bool]) -> bool {
        self.clauses[clause].iter().any(|l| l.eval(assignment))
    }

    /// Index of the first clause the assignment violates.
    pub fn first_violated(&self, assignment: &[bool]) -> Option<usize> {
        (0..self.clauses.len()).find(|&i| !self.clause_satisfied(i, assignment))
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars && self.first_violated(assignment).is_none()
    }

    /// Equisatisfiable rewrite in which the first two literals of every
    /// clause have distinct variables.
    ///
    /// * clauses with two distinct variables are reordered;
    /// * single-variable clauses with both polarities are tautologies and are dropped;
    /// * a uniform clause `(X ∨ X ∨ X)` becomes `(X ∨ Y ∨ X) ∧ (X ∨ ¬Y ∨ X)`
    ///   for one fresh variable `Y` shared by all such clauses;
    /// * if no clause remains, the tautology `(X_1 ∨ Y ∨ ¬X_1)` with a fresh
    ///   `Y` is added so the formula is never empty.
    ///
    /// Variables `1..=num_vars` keep their meaning; fresh ones are appended.
    pub fn normalized(&self) -> Cnf {
        let mut num_vars = self.num_vars;
        let mut fresh: Option<usize> = None;
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for &[a, b, c] in &self.clauses {
            if a.var != b.var {
                clauses.push([a, b, c]);
            } else if a.var != c.var {
                clauses.push([a, c, b]);
            } else if a.positive != b.positive || a.positive != c.positive {
                continue;
            } else {
                let y = *fresh.get_or_insert_with(|| {
                    num_vars += 1;
                    num_vars
                });
                clauses.push([a, Literal::new(y, true), a]);
                clauses.push([a, Literal::new(y, false), a]);
            }
        }
        if clauses.is_empty() {
            if num_vars == 0 {
                num_vars = 1;
            }
            num_vars += 1;
            let x = Literal::new(1, true);
            clauses.push([x, Literal::new(num_vars, true), x.negated()]);
        }
        Cnf { num_vars, clauses }
    }

    /// Renders DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()));
        }
        s
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs())
    }
}

/// Parses DIMACS CNF with exactly three literals per clause, without
/// normalization.
pub fn parse_dimacs_raw(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<(i64, usize)> = Vec::new();
    let err = |line: usize, msg: String| Error::Dimacs { line, msg };

    'lines: for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(lineno, "duplicate problem line".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(lineno, format!("expected `p cnf <vars> <clauses>`, got `{line}`")));
            }
            let nv = parts[2]
                .parse()
                .map_err(|_| err(lineno, format!("bad variable count `{}`", parts[2])))?;
            let nc = parts[3]
                .parse()
                .map_err(|_| err(lineno, format!("bad clause count `{}`", parts[3])))?;
            header = Some((nv, nc));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(lineno, "clause before problem line".into()));
        };
        for tok in line.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let v: i64 = tok.parse().map_err(|_| err(lineno, format!("bad literal `{tok}`")))?;
            if v == 0 {
                if current.len() != 3 {
                    return Err(err(
                        lineno,
                        format!("clause {} has {} literals, expected 3", clauses.len() + 1, current.len()),
                    ));
                }
                let lits: Vec<Literal> = current
                    .drain(..)
                    .map(|(v, _)| Literal::from_dimacs(v).expect("nonzero"))
                    .collect();
                clauses.push([lits[0], lits[1], lits[2]]);
            } else {
                if v.unsigned_abs() as usize > num_vars {
                    return Err(err(lineno, format!("literal {v} exceeds declared {num_vars} variables")));
                }
                current.push((v, lineno));
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(err(0, "missing problem line".into()));
    };
    if let Some(&(_, line)) = current.first() {
        return Err(err(line, "unterminated clause".into()));
    }
    if clauses.len() != num_clauses {
        return Err(err(
            0,
            format!("problem line declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Cnf::new(num_vars, clauses)
}

/// Parses DIMACS CNF and normalizes it (see [`Cnf::normalized`]).
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    Ok(parse_dimacs_raw(text)?.normalized())
}

/// Enumeration order shared by the deciders: assignment `k` sets variable
/// `i` true iff bit `N − i` of `k` is clear, so `k = 0` is all-true and the
/// order is lexicographic with true before false.
pub fn assignment_from_index(num_vars: usize, k: u64) -> Vec<bool> {
    (1..=num_vars).map(|i| (k >> (num_vars - i)) & 1 == 0).collect()
}

/// Parses `+1,-1,1,...` into booleans.
pub fn parse_assignment(text: &str) -> Result<Vec<bool>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "1" | "+1" => Ok(true),
            "-1" => Ok(false),
            other => Err(Error::InvalidArgument(format!("assignment entry `{other}` is not ±1"))),
        })
        .collect()
}

pub fn format_assignment(a: &[bool]) -> String {
    a.iter().map(|&b| if b { "+1" } else { "-1" }).collect::<Vec<_>>().join(",")
}
