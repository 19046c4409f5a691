//! `kraus`: batch front end for the deciders, the reduction and the oracles.
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 unknown, 3 usage, input
//! or parse error. Reports go to standard output and end with a single
//! `STATUS <property> <verdict> <method>` line; diagnostics go to standard
//! error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kraus_core::cp_map::{algebra_closure, is_primitive, KrausFamily};
use kraus_core::error::Error;
use kraus_core::format::{format_vector, parse_family, parse_witness, render_family, render_instance};
use kraus_core::oracles::{matrix_power, period, sat_brute_force, strongly_connected, Digraph};
use kraus_core::positivity::{check_with, classical_matrix, verify_witness, witness_residuals, NumericOptions, Status};
use kraus_core::reduction::{
    encode_assignment, format_assignment, parse_assignment, parse_dimacs_raw, reduce_cnf_to_kraus, Cnf,
    DEFAULT_ENUMERATION_CAP,
};
use num_traits::Signed;

use report::Report;

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "kraus", version, about = "Exact deciders for completely positive maps given by Kraus operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a property of the family in a Kraus file.
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        /// Numeric multi-start count.
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numeric acceptance threshold on the smallest eigenvalue.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Permit strict-positive checks on non-unital families.
        #[arg(long)]
        allow_nonunital: bool,
    },
    /// Reduce a DIMACS 3-CNF to a unital Kraus family.
    Reduce {
        cnf: PathBuf,
        out: PathBuf,
        /// Write every weighted operator as repeated unit-weight copies.
        #[arg(long)]
        expand_weights: bool,
    },
    /// Verify a certificate exactly.
    Certify {
        path: PathBuf,
        /// Comma-separated `±1` values, one per variable.
        #[arg(long, conflicts_with = "witness", required_unless_present = "witness", allow_hyphen_values = true)]
        assignment: Option<String>,
        /// File with `x …` and `y …` lines.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run a ground-truth oracle.
    Oracle {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleMode,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Irreducible,
    Primitive,
    StrictPositive,
}

impl Property {
    fn name(self) -> &'static str {
        match self {
            Property::Irreducible => "irreducible",
            Property::Primitive => "primitive",
            Property::StrictPositive => "strict-positive",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleMode {
    Sat,
    Classical,
}

/// Failure that maps to exit code 3.
struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<u8, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(format!("cannot read {}: {e}", path.display())))
}

fn load_family(path: &Path) -> Result<KrausFamily, Fail> {
    parse_family(&read(path)?).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_HOLDS };
            let _ = e.print();
            if code == EXIT_ERROR {
                println!("STATUS usage ERROR -");
            }
            return ExitCode::from(code);
        }
    };
    let mut r = Report::new();
    let (property, outcome) = match &cli.command {
        Command::Check {
            path,
            property,
            starts,
            seed,
            tol,
            allow_nonunital,
        } => {
            let opts = NumericOptions {
                starts: *starts,
                seed: *seed,
                tol: *tol,
                ..NumericOptions::default()
            };
            (property.name(), cmd_check(&mut r, path, *property, &opts, *allow_nonunital))
        }
        Command::Reduce { cnf, out, expand_weights } => ("reduce", cmd_reduce(&mut r, cnf, out, *expand_weights)),
        Command::Certify {
            path,
            assignment,
            witness,
        } => ("certify", cmd_certify(&mut r, path, assignment.as_deref(), witness.as_deref())),
        Command::Oracle { path, mode } => match mode {
            OracleMode::Sat => ("sat", cmd_oracle_sat(&mut r, path)),
            OracleMode::Classical => ("classical", cmd_oracle_classical(&mut r, path)),
        },
    };
    match outcome {
        Ok(code) => {
            r.finish(property);
            ExitCode::from(code)
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            r.fail(property);
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn cmd_check(r: &mut Report, path: &Path, property: Property, opts: &NumericOptions, allow_nonunital: bool) -> Outcome {
    let mut psi = load_family(path)?;
    r.kv("property", property.name());
    r.kv("file", path.display());
    r.kv("n", psi.n());
    r.kv("m", psi.len());
    let start = Instant::now();
    let code = match property {
        Property::Irreducible => {
            let c = algebra_closure(&psi);
            r.kv("algebra_dim", c.algebra.dim());
            r.kv("closure_depth", c.depth);
            r.set_status(if c.algebra.is_full() { "IRREDUCIBLE" } else { "NOT_IRREDUCIBLE" }, "exact-closure");
            if c.algebra.is_full() {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            }
        }
        Property::Primitive => {
            let p = is_primitive(&psi);
            r.kv("irreducible", p.irreducible);
            r.kv("closure_depth", opt(p.closure_depth));
            r.kv("wielandt_q", opt(p.wielandt_q));
            r.kv("wielandt_bound", p.bound);
            r.kv("span_steps", p.steps);
            r.set_status(if p.primitive { "PRIMITIVE" } else { "NOT_PRIMITIVE" }, "exact-wielandt");
            if p.primitive {
                EXIT_HOLDS
            } else {
                EXIT_FAILS
            }
        }
        Property::StrictPositive => {
            let unital = psi.verify_unital();
            r.kv("unital", unital);
            if !unital && !allow_nonunital {
                return Err(Fail("family is not unital (Σ w V*V ≠ I); pass --allow-nonunital to check it anyway".into()));
            }
            r.kv("starts", opts.starts);
            r.kv("seed", opts.seed);
            r.kv("tol", format!("{:e}", opts.tol));
            if opts.starts == 0 {
                return Err(Fail("--starts must be at least 1".into()));
            }
            let v = check_with(&psi, opts);
            if let Some(margin) = v.numeric_margin {
                r.kv("numeric_margin", format!("{margin:.6e}"));
            }
            if v.irrational_witness {
                r.kv("irrational_witness", true);
            }
            if let Some(a) = &v.assignment {
                r.kv("assignment", format_assignment(a));
            }
            if let Some(w) = &v.witness {
                r.kv("witness_x", format_vector(&w.x));
                r.kv("witness_y", format_vector(&w.y));
            }
            r.set_status(&v.status.to_string(), &v.method.to_string());
            match v.status {
                Status::StrictlyPositive => EXIT_HOLDS,
                Status::NotStrictlyPositive => EXIT_FAILS,
                Status::Unknown => EXIT_UNKNOWN,
            }
        }
    };
    r.time(start);
    Ok(code)
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn cmd_reduce(r: &mut Report, cnf_path: &Path, out: &Path, expand: bool) -> Outcome {
    let start = Instant::now();
    let raw = parse_dimacs_raw(&read(cnf_path)?).map_err(|e| Fail(format!("{}: {e}", cnf_path.display())))?;
    let inst = reduce_cnf_to_kraus(&raw)?;
    if inst.cnf.num_vars() > DEFAULT_ENUMERATION_CAP {
        eprintln!(
            "warning: N = {} exceeds the enumeration cap {DEFAULT_ENUMERATION_CAP}; strict-positive checks on the output fall back to numeric search",
            inst.cnf.num_vars()
        );
    }
    r.kv("input_vars", raw.num_vars());
    r.kv("input_clauses", raw.num_clauses());
    r.kv("N", inst.cnf.num_vars());
    r.kv("M", inst.cnf.num_clauses());
    r.kv("n", inst.n());
    r.kv("m0", inst.equation_count());
    r.kv("L", inst.scale);
    r.kv("weighted_m", inst.family.len());
    r.kv("expanded_m", inst.expanded_count());
    let text = if expand {
        let mut fam = inst.family.expand_weights()?.with_provenance(None);
        if !fam.verify_unital() {
            return Err(Fail("expanded family is not unital".into()));
        }
        render_family(&fam)?
    } else {
        render_instance(&inst)
    };
    std::fs::write(out, text).map_err(|e| Fail(format!("cannot write {}: {e}", out.display())))?;
    r.kv("output", out.display());
    r.time(start);
    r.set_status("WRITTEN", "exact");
    Ok(EXIT_HOLDS)
}

fn cmd_certify(r: &mut Report, path: &Path, assignment: Option<&str>, witness: Option<&Path>) -> Outcome {
    let psi = load_family(path)?;
    r.kv("file", path.display());
    let start = Instant::now();
    let code = if let Some(text) = assignment {
        let cnf = psi
            .provenance()
            .ok_or_else(|| Fail("assignment mode needs a file with reduction provenance".into()))?;
        let mut a = parse_assignment(text)?;
        let nv = cnf.num_vars();
        if a.len() > nv {
            return Err(Fail(format!("assignment has {} values, formula has {nv} variables", a.len())));
        }
        if a.len() < nv {
            r.kv("padded_fresh_variables", nv - a.len());
            a.resize(nv, true);
        }
        r.kv("assignment", format_assignment(&a));
        let inst = reduce_cnf_to_kraus(cnf)?;
        match encode_assignment(&inst, &a) {
            Ok(w) => {
                let ok = verify_witness(&psi, &w)?;
                r.kv("witness_x", format_vector(&w.x));
                r.kv("witness_y", format_vector(&w.y));
                r.set_status(if ok { "VALID" } else { "INVALID" }, "exact-assignment");
                if ok {
                    EXIT_HOLDS
                } else {
                    EXIT_FAILS
                }
            }
            Err(Error::UnsatisfiedClause { clause, operator }) => {
                r.kv("violated_clause", clause);
                r.kv("residual_operator", operator);
                r.set_status("INVALID", "exact-assignment");
                EXIT_FAILS
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let wpath = witness.expect("clap requires one certificate");
        let w = parse_witness(&read(wpath)?).map_err(|e| Fail(format!("{}: {e}", wpath.display())))?;
        if w.x.len() != psi.n() {
            return Err(Fail(format!("witness has length {}, family has n = {}", w.x.len(), psi.n())));
        }
        let ok = verify_witness(&psi, &w)?;
        if !ok {
            if !w.is_nonzero() {
                r.kv("zero_vector", true);
            }
            for (i, v) in witness_residuals(&psi, &w)? {
                r.line(format!("residual {i} {v}"));
            }
        }
        r.set_status(if ok { "VALID" } else { "INVALID" }, "exact-witness");
        if ok {
            EXIT_HOLDS
        } else {
            EXIT_FAILS
        }
    };
    r.time(start);
    Ok(code)
}

/// Kraus files contribute their provenance formula; anything else is DIMACS.
fn load_cnf(path: &Path) -> Result<Cnf, Fail> {
    let text = read(path)?;
    if text.trim_start().starts_with("KRAUS") {
        let psi = parse_family(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
        psi.provenance()
            .cloned()
            .ok_or_else(|| Fail("Kraus file carries no reduction provenance".into()))
    } else {
        parse_dimacs_raw(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))
    }
}

fn cmd_oracle_sat(r: &mut Report, path: &Path) -> Outcome {
    let cnf = load_cnf(path)?;
    r.kv("N", cnf.num_vars());
    r.kv("M", cnf.num_clauses());
    let start = Instant::now();
    let res = sat_brute_force(&cnf)?;
    if let Some(a) = &res.assignment {
        r.kv("assignment", format_assignment(a));
    }
    r.time(start);
    r.set_status(if res.sat { "SAT" } else { "UNSAT" }, "brute-force");
    Ok(if res.sat { EXIT_HOLDS } else { EXIT_FAILS })
}

fn cmd_oracle_classical(r: &mut Report, path: &Path) -> Outcome {
    let psi = load_family(path)?;
    let p = classical_matrix(&psi)?;
    let n = p.len();
    let g = Digraph::from_matrix(&p);
    let sc = strongly_connected(&g);
    let per = if sc { Some(period(&g)?) } else { None };
    let positive = p.iter().flatten().all(Signed::is_positive);
    let exponent = (n * n - 2 * n + 2) as u64;
    let power_positive = matrix_power(&p, exponent).iter().flatten().all(Signed::is_positive);
    r.kv("n", n);
    r.line(format!(
        "strongly_connected={sc} period={} entrywise_positive={positive} power_positive={power_positive}",
        opt(per)
    ));
    let primitive = per == Some(1);
    r.set_status(if primitive { "PRIMITIVE" } else { "NOT_PRIMITIVE" }, "classical-graph");
    Ok(if primitive { EXIT_HOLDS } else { EXIT_FAILS })
}
