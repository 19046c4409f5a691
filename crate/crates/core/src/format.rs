//! Line-oriented text formats for Kraus families and bilinear witnesses.
//!
//! ```text
//! KRAUS 1
//! n 2
//! scalar exact-rational
//! unital yes
//! m 2
//! op 1/1
//! 0/1 1/1
//! 0/1 0/1
//! op 1/1
//! 0/1 0/1
//! 1/1 0/1
//! ```
//!
//! Entries are `a/b`, `a/b+c/d i` or `a/b-c/d i` in lowest terms. The
//! parser also accepts integers, `i`-suffixed forms without the space and
//! `a + b i` split over tokens. Blank lines and lines starting with `#` are
//! ignored. Families built by the reduction carry a provenance block:
//!
//! ```text
//! provenance reduction
//! cnf <N> <M>
//! clause <l1> <l2> <l3>
//! L <L>
//! role <coord> <x0 | var i | prod i | aux i>
//! special <n_0> … <n_{n-1}>
//! multiplicities <l_0> … <l_{n-1}>
//! end
//! ```
//!
//! which is checked against a fresh reduction on parse.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cp_map::{KrausFamily, KrausOp, UnitalFlag};
use crate::error::{Error, Result};
use crate::exact_linalg::{GaussianRational, Mat};
use crate::positivity::BilinearWitness;
use crate::reduction::{reduce_cnf_to_kraus, Cnf, Literal, ReducedInstance};

pub const MAGIC: &str = "KRAUS 1";
pub const SCALAR_MODE: &str = "exact-rational";

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses `a`, `a/b` with optional sign; the denominator must be nonzero.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
        return None;
    }
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

/// Parses one Gaussian rational, ignoring internal whitespace.
pub fn parse_gaussian(s: &str) -> Option<GaussianRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return parse_rational(&s).map(GaussianRational::real);
    };
    // Split before the last sign that is not the leading character.
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { BigRational::zero() } else { parse_rational(re)? };
    let im = match im {
        "" | "+" => BigRational::from_integer(1.into()),
        "-" => BigRational::from_integer((-1).into()),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(GaussianRational::new(re, im))
}

/// Splits a row into entry strings: a lone `i` joins the previous token and
/// a lone `+` or `-` joins both neighbours.
fn entry_tokens(line: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut glue_next = false;
    for tok in line.split_whitespace() {
        if tok == "i" && !out.is_empty() && !glue_next {
            out.last_mut().expect("nonempty").push('i');
        } else if (tok == "+" || tok == "-") && !out.is_empty() {
            out.last_mut().expect("nonempty").push_str(tok);
            glue_next = true;
        } else if glue_next {
            out.last_mut().expect("nonempty").push_str(tok);
            glue_next = false;
        } else {
            out.push(tok.to_string());
        }
    }
    out
}

fn parse_entries(line: &str, lineno: usize) -> Result<Vec<GaussianRational>> {
    entry_tokens(line)
        .iter()
        .map(|t| parse_gaussian(t).ok_or_else(|| perr(lineno, format!("bad entry `{t}`"))))
        .collect()
}

pub fn format_vector(v: &[GaussianRational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn unital_word(flag: UnitalFlag) -> &'static str {
    match flag {
        UnitalFlag::Yes => "yes",
        UnitalFlag::No => "no",
        UnitalFlag::Unchecked => "unchecked",
    }
}

/// Canonical text of a family, with a provenance block when it carries one.
pub fn render_family(psi: &KrausFamily) -> Result<String> {
    let mut s = String::new();
    s.push_str(MAGIC);
    s.push('\n');
    s.push_str(&format!("n {}\nscalar {SCALAR_MODE}\nunital {}\nm {}\n", psi.n(), unital_word(psi.unital_flag()), psi.len()));
    for op in psi.ops() {
        s.push_str(&format!("op {}\n", format_rational(&op.weight)));
        for i in 0..psi.n() {
            let row: Vec<String> = (0..psi.n()).map(|j| op.matrix.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    if let Some(cnf) = psi.provenance() {
        s.push_str(&render_provenance(&reduce_cnf_to_kraus(cnf)?));
    }
    Ok(s)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn render_provenance(inst: &ReducedInstance) -> String {
    let cnf = &inst.cnf;
    let mut s = format!("provenance reduction\ncnf {} {}\n", cnf.num_vars(), cnf.num_clauses());
    for c in cnf.clauses() {
        s.push_str(&format!("clause {} {} {}\n", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()));
    }
    s.push_str(&format!("L {}\n", inst.scale));
    for (k, role) in inst.roles().iter().enumerate() {
        s.push_str(&format!("role {k} {role}\n"));
    }
    s.push_str(&format!("special {}\n", join(&inst.special_indices)));
    s.push_str(&format!("multiplicities {}\n", join(&inst.multiplicities)));
    s.push_str("end\n");
    s
}

/// Render of a reduced instance; identical to [`render_family`] on its family.
pub fn render_instance(inst: &ReducedInstance) -> String {
    let mut s = render_family(&inst.family).expect("instance families rebuild");
    if inst.family.provenance().is_none() {
        s.push_str(&render_provenance(inst));
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let (k, l) = self.inner.next().ok_or_else(|| perr(self.last + 1, format!("unexpected end of input, expected {what}")))?;
        self.last = k;
        Ok((k, l))
    }

    fn next_opt(&mut self) -> Option<(usize, &'a str)> {
        let r = self.inner.next();
        if let Some((k, _)) = r {
            self.last = k;
        }
        r
    }

    /// Next line split as `key rest`, requiring the given key.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (k, l) = self.next(key)?;
        match l.split_once(char::is_whitespace) {
            Some((head, rest)) if head == key => Ok((k, rest.trim())),
            _ => Err(perr(k, format!("expected `{key} …`, got `{l}`"))),
        }
    }
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("bad {what} `{s}`")))
}

/// Parses a Kraus file, validating the unital header and any provenance.
pub fn parse_family(text: &str) -> Result<KrausFamily> {
    let mut lines = Lines::new(text);
    let (k, magic) = lines.next("header")?;
    if magic.split_whitespace().collect::<Vec<_>>().join(" ") != MAGIC {
        return Err(perr(k, format!("expected `{MAGIC}`, got `{magic}`")));
    }
    let (mut n, mut scalar, mut unital, mut m) = (None, None, None, None);
    while n.is_none() || scalar.is_none() || unital.is_none() || m.is_none() {
        let (k, l) = lines.next("header field")?;
        let (key, val) = l.split_once(char::is_whitespace).ok_or_else(|| perr(k, format!("bad header line `{l}`")))?;
        let val = val.trim();
        let slot_taken = match key {
            "n" => n.replace(parse_usize(val, k, "dimension")?).is_some(),
            "m" => m.replace(parse_usize(val, k, "operator count")?).is_some(),
            "scalar" => {
                if val != SCALAR_MODE {
                    return Err(perr(k, format!("unsupported scalar mode `{val}`")));
                }
                scalar.replace(()).is_some()
            }
            "unital" => {
                let flag = match val {
                    "yes" => UnitalFlag::Yes,
                    "no" => UnitalFlag::No,
                    "unchecked" => UnitalFlag::Unchecked,
                    other => return Err(perr(k, format!("bad unital flag `{other}`"))),
                };
                unital.replace((flag, k)).is_some()
            }
            other => return Err(perr(k, format!("unknown header field `{other}`"))),
        };
        if slot_taken {
            return Err(perr(k, format!("duplicate header field `{key}`")));
        }
    }
    let (n, m, (unital, unital_line)) = (n.expect("set"), m.expect("set"), unital.expect("set"));
    if n == 0 {
        return Err(perr(lines.last, "dimension must be positive"));
    }
    if m == 0 {
        return Err(perr(lines.last, "a family needs at least one operator"));
    }

    let mut ops = Vec::with_capacity(m);
    for _ in 0..m {
        let (k, w) = lines.keyed("op")?;
        let weight = parse_rational(w).ok_or_else(|| perr(k, format!("bad weight `{w}`")))?;
        if !weight.is_positive() {
            return Err(perr(k, format!("weight {w} is not positive")));
        }
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (k, row) = lines.next("matrix row")?;
            let entries = parse_entries(row, k)?;
            if entries.len() != n {
                return Err(perr(k, format!("row has {} entries, expected {n}", entries.len())));
            }
            data.extend(entries);
        }
        ops.push(KrausOp {
            matrix: Mat::from_vec(n, n, data)?,
            weight,
        });
    }
    let mut family = KrausFamily::new(ops)?;

    if let Some((k, l)) = lines.next_opt() {
        if l != "provenance reduction" {
            return Err(perr(k, format!("unexpected trailing line `{l}`")));
        }
        let cnf = parse_provenance(&mut lines, &family)?;
        family = family.with_provenance(Some(cnf));
        if let Some((k, l)) = lines.next_opt() {
            return Err(perr(k, format!("unexpected trailing line `{l}`")));
        }
    }

    if unital != UnitalFlag::Unchecked {
        let actual = family.verify_unital();
        if actual != (unital == UnitalFlag::Yes) {
            return Err(perr(unital_line, format!("header claims unital {}, exact check says {}", unital_word(unital), actual)));
        }
    }
    Ok(family)
}

fn parse_provenance(lines: &mut Lines<'_>, family: &KrausFamily) -> Result<Cnf> {
    let (k, counts) = lines.keyed("cnf")?;
    let parts: Vec<&str> = counts.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(perr(k, "expected `cnf <N> <M>`"));
    }
    let nv = parse_usize(parts[0], k, "variable count")?;
    let nc = parse_usize(parts[1], k, "clause count")?;
    let mut clauses = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (k, c) = lines.keyed("clause")?;
        let lits: Vec<Literal> = c
            .split_whitespace()
            .map(|t| t.parse::<i64>().ok().and_then(Literal::from_dimacs).ok_or_else(|| perr(k, format!("bad literal `{t}`"))))
            .collect::<Result<_>>()?;
        if lits.len() != 3 {
            return Err(perr(k, format!("clause has {} literals, expected 3", lits.len())));
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    let cnf = Cnf::new(nv, clauses).map_err(|e| perr(k, e.to_string()))?;
    if !cnf.is_normalized() {
        return Err(perr(k, "provenance formula is not normalized"));
    }
    let inst = reduce_cnf_to_kraus(&cnf).map_err(|e| perr(k, e.to_string()))?;

    let (k, l) = lines.keyed("L")?;
    if l != inst.scale.to_string() {
        return Err(perr(k, format!("L = {l} disagrees with rebuilt L = {}", inst.scale)));
    }
    for (coord, role) in inst.roles().iter().enumerate() {
        let (k, r) = lines.keyed("role")?;
        let expected = format!("{coord} {role}");
        if r.split_whitespace().collect::<Vec<_>>().join(" ") != expected {
            return Err(perr(k, format!("role line `{r}` disagrees with rebuilt `{expected}`")));
        }
    }
    let (k, s) = lines.keyed("special")?;
    if s.split_whitespace().collect::<Vec<_>>().join(" ") != join(&inst.special_indices) {
        return Err(perr(k, "special indices disagree with rebuild"));
    }
    let (k, s) = lines.keyed("multiplicities")?;
    if s.split_whitespace().collect::<Vec<_>>().join(" ") != join(&inst.multiplicities) {
        return Err(perr(k, "multiplicities disagree with rebuild"));
    }
    let (k, end) = lines.next("end")?;
    if end != "end" {
        return Err(perr(k, format!("expected `end`, got `{end}`")));
    }
    let rebuilt = inst.family.clone().with_provenance(None);
    if rebuilt != *family {
        return Err(perr(k, "operators disagree with the reduction of the provenance formula"));
    }
    Ok(cnf)
}

/// Renders `x …` and `y …` lines.
pub fn render_witness(w: &BilinearWitness) -> String {
    format!("x {}\ny {}\n", format_vector(&w.x), format_vector(&w.y))
}

/// Parses a witness file; keys `x`/`witness_x` and `y`/`witness_y`.
pub fn parse_witness(text: &str) -> Result<BilinearWitness> {
    let (mut x, mut y) = (None, None);
    for (k, l) in text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())) {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let slot = match key {
            "x" | "witness_x" => &mut x,
            "y" | "witness_y" => &mut y,
            _ => continue,
        };
        if slot.replace(parse_entries(rest, k)?).is_some() {
            return Err(perr(k, format!("duplicate `{key}` line")));
        }
    }
    match (x, y) {
        (Some(x), Some(y)) => BilinearWitness::new(x, y),
        _ => Err(perr(0, "witness needs both `x` and `y` lines")),
    }
}
