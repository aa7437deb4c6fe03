//! `latmat`: command-line front end for matrices over finite lattices.
//!
//! Every command prints one JSON document on stdout. Errors go to stderr as
//! JSON and select the exit code: 1 for malformed input or usage, 2 when a
//! precondition does not hold, 3 when a budget is exceeded, 4 when the golden
//! suite fails and 5 when an internal cross-check disagrees.

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latmat::boolrel::{
    analyze_pseudo_order, check_pseudo_order_routes, core_poset, greens, greens_oracle,
    hclass_of_reduced_idempotent, poset_automorphisms, reduced_idempotent, GreensRelation,
    GREENS_ORACLE_MAX_N,
};
use latmat::distmat::{
    classify, hclass_chain, invert, triangularize, InvertMode, DEFAULT_INVERT_BUDGET,
};
use latmat::fixpoint::{
    equivalence_report, greatest_fixpoint, has_nonzero_fixpoint, orbit, solve_all_fixpoints,
    DEFAULT_ORBIT_BUDGET, DEFAULT_SOLVE_BUDGET,
};
use latmat::golden::run_golden_suite;
use latmat::io::{
    builtin_name, lattice_to_value, matrix_from_value, matrix_to_value, parse_json, parse_lattice,
    relation_from_value, relation_to_value, vector_from_value,
};
use latmat::spectrum::{spectrum_count, MatrixGroupoid, SpectrumMode, SpectrumOptions};
use latmat::{BoolRel, Error, ErrorKind, LatMatrix, Lattice, Product};

#[derive(Parser)]
#[command(
    name = "latmat",
    version,
    about = "Exact computation with matrices over finite lattices"
)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate or describe a lattice.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Multiply two matrices.
    Matmul {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Use the dual product (meet of joins).
        #[arg(long)]
        dual: bool,
    },
    /// Count distinct bracketed products of matrices.
    Spectrum {
        #[arg(long)]
        lattice: String,
        /// Matrix dimension.
        #[arg(long)]
        n: usize,
        /// Number of factors.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "witness")]
        mode: Mode,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Structural checks on a lattice matrix.
    Classify {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        matrix: String,
    },
    /// Structural checks on a Boolean relation.
    ClassifyRel {
        #[arg(long)]
        relation: String,
        /// Include a Graphviz rendering.
        #[arg(long)]
        dot: bool,
    },
    /// Green's relations between two Boolean relations.
    Greens {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Restrict to one relation (L, R, H or D).
        #[arg(long)]
        relation: Option<GreensRelation>,
        /// Also decide by exhaustive search (n ≤ 3).
        #[arg(long)]
        oracle: bool,
    },
    /// The maximal subgroup at an idempotent Boolean relation.
    Hclass {
        #[arg(long)]
        relation: String,
    },
    /// The H-class of an idempotent over a chain.
    HclassChain {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        matrix: String,
    },
    /// Two-sided inverses of a matrix.
    Invert {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        matrix: String,
        /// Enumerate every right inverse instead of applying the permutation theorem.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Conjugate a nilpotent matrix to strictly upper triangular form.
    Triangularize {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        matrix: String,
    },
    /// Greatest solution of x·A = x.
    Fixpoint {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        matrix: String,
        /// Enumerate every solution.
        #[arg(long)]
        all: bool,
        /// Evaluate the nilpotency equivalences.
        #[arg(long)]
        report: bool,
        /// Follow x·A^k from this vector and report its orbit.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Replay the worked examples.
    Golden {
        /// Run with the dual product; the suite is expected to fail.
        #[arg(long)]
        mutate: bool,
    },
}

#[derive(Subcommand)]
enum LatticeAction {
    /// Validate and exit.
    Check { lattice: String },
    /// Elements, covers and structural properties.
    Info { lattice: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Witness,
}

enum Failure {
    Lib(Error),
    Io(String),
    GoldenFailed(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Value, Failure>;

/// Reads a file, or treats the argument as inline JSON when no such file exists.
fn source(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))
    } else if arg.trim_start().starts_with(['{', '[']) {
        Ok(arg.to_string())
    } else {
        Err(Failure::Io(format!("{arg}: no such file")))
    }
}

fn load_lattice(arg: &str) -> Result<Arc<Lattice>, Failure> {
    if let Some(l) = Lattice::builtin(arg) {
        return Ok(Arc::new(l));
    }
    Ok(Arc::new(parse_lattice(&source(arg)?)?))
}

fn load_matrix(lattice: Option<&str>, arg: &str) -> Result<LatMatrix, Failure> {
    let fallback = lattice.map(load_lattice).transpose()?;
    Ok(matrix_from_value(&parse_json(&source(arg)?)?, fallback)?)
}

fn load_relation(arg: &str) -> Result<BoolRel, Failure> {
    Ok(relation_from_value(&parse_json(&source(arg)?)?)?)
}

fn one_based(set: u64) -> Vec<usize> {
    (0..64)
        .filter(|i| set >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn failure_one_based(mut v: Value) -> Value {
    if let Value::Object(o) = &mut v {
        for key in ["vertex", "lower", "upper"] {
            if let Some(i) = o.get(key).and_then(Value::as_u64) {
                o.insert(key.into(), json!(i + 1));
            }
        }
    }
    v
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn lattice_info(l: &Lattice) -> Value {
    let mut v = lattice_to_value(l);
    let ji: Vec<&str> = l
        .join_irreducibles()
        .into_iter()
        .map(|e| l.name(e))
        .collect();
    let extra = json!({
        "name": builtin_name(l),
        "size": l.size(),
        "distributive": l.is_distributive(),
        "chain": l.is_chain(),
        "join_irreducibles": ji,
        "bounds": to_json(&l.bound_irreducibility()),
    });
    if let (Value::Object(o), Value::Object(e)) = (&mut v, extra) {
        o.extend(e);
    }
    v
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Lattice { action } => match action {
            LatticeAction::Check { lattice } => {
                let l = load_lattice(&lattice)?;
                Ok(json!({"valid": true, "size": l.size()}))
            }
            LatticeAction::Info { lattice } => Ok(lattice_info(load_lattice(&lattice)?.as_ref())),
        },
        Command::Matmul {
            lattice,
            a,
            b,
            dual,
        } => {
            let a = load_matrix(lattice.as_deref(), &a)?;
            let b = load_matrix(lattice.as_deref(), &b)?;
            let product = if dual {
                Product::MeetOfJoins
            } else {
                Product::JoinOfMeets
            };
            Ok(matrix_to_value(&a.mul_with(&b, product)?))
        }
        Command::Spectrum {
            lattice,
            n,
            k,
            mode,
            budget,
        } => {
            let l = load_lattice(&lattice)?;
            let g = MatrixGroupoid::new(l, n);
            let mut opts = SpectrumOptions::new(match mode {
                Mode::Exhaustive => SpectrumMode::Exhaustive,
                Mode::Witness => SpectrumMode::Witness,
            });
            if let Some(b) = budget {
                opts.eval_budget = b;
            }
            let r = spectrum_count(&g, k, &opts)?;
            let names: Vec<String> = r.bracketings.iter().map(|t| t.to_string()).collect();
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| {
                    let args: Vec<_> = w.assignment.iter().map(|m| m.to_labels()).collect();
                    json!({"p": names[w.p], "q": names[w.q], "assignment": args})
                })
                .collect();
            let mut out = json!({
                "k": r.k,
                "n": n,
                "mode": to_json(&r.mode),
                "count": r.count.to_string(),
                "catalan": r.catalan.to_string(),
                "antiassociative": r.count == r.catalan,
                "verified": r.verify_witnesses(&g),
                "bracketings": names,
                "witnesses": witnesses,
            });
            if !r.classes.is_empty() {
                out["classes"] = json!(r.classes);
            }
            Ok(out)
        }
        Command::Classify { lattice, matrix } => Ok(to_json(&classify(&load_matrix(
            lattice.as_deref(),
            &matrix,
        )?))),
        Command::ClassifyRel { relation, dot } => {
            let a = load_relation(&relation)?;
            let analysis = analyze_pseudo_order(&a);
            let reduced = a.is_idempotent() && hclass_of_reduced_idempotent(&a).is_ok();
            let mut out = json!({
                "n": a.n(),
                "idempotent": a.is_idempotent(),
                "pseudo_order": analysis.is_pseudo_order(),
                "pseudo_order_routes": check_pseudo_order_routes(&a),
                "failure": failure_one_based(to_json(&analysis.failure)),
                "loops": one_based(a.loops()),
                "reflexive": a.is_reflexive(),
                "transitive": a.is_transitive(),
                "partial_order": a.is_partial_order(),
                "reduced_idempotent": reduced,
            });
            if let Ok(p) = core_poset(&a) {
                out["core_poset_size"] = json!(p.size());
            }
            if dot {
                out["dot"] = json!(a.to_dot());
            }
            Ok(out)
        }
        Command::Greens {
            a,
            b,
            relation,
            oracle,
        } => {
            let a = load_relation(&a)?;
            let b = load_relation(&b)?;
            let which = match relation {
                Some(r) => vec![r],
                None => vec![
                    GreensRelation::L,
                    GreensRelation::R,
                    GreensRelation::H,
                    GreensRelation::D,
                ],
            };
            let mut out = serde_json::Map::new();
            for r in which {
                let key = to_json(&r).as_str().unwrap_or_default().to_string();
                out.insert(key.clone(), json!(greens(&a, &b, r)?));
                if oracle {
                    if a.n() > GREENS_ORACLE_MAX_N {
                        return Err(Error::SizeLimit {
                            what: "oracle dimension",
                            size: a.n(),
                            limit: GREENS_ORACLE_MAX_N,
                        }
                        .into());
                    }
                    out.insert(format!("{key}_oracle"), json!(greens_oracle(&a, &b, r)?));
                }
            }
            Ok(Value::Object(out))
        }
        Command::Hclass { relation } => {
            let a = load_relation(&relation)?;
            let r = reduced_idempotent(&a)?;
            let members = hclass_of_reduced_idempotent(&r.a1)?;
            let poset = core_poset(&a)?;
            Ok(json!({
                "input_is_reduced": r.a1 == a,
                "transversal": r.transversal.iter().map(|t| t + 1).collect::<Vec<_>>(),
                "reduced": relation_to_value(&r.a1),
                "core_poset_size": poset.size(),
                "group_order": poset_automorphisms(&poset)?.len(),
                "members": to_json(&members),
            }))
        }
        Command::HclassChain { lattice, matrix } => {
            let a = load_matrix(lattice.as_deref(), &matrix)?;
            let members: Vec<Value> = hclass_chain(&a)?
                .iter()
                .map(|m| json!({"automorphism": to_json(&m.automorphism), "matrix": m.matrix.to_labels()}))
                .collect();
            Ok(json!({"size": members.len(), "members": members}))
        }
        Command::Invert {
            lattice,
            matrix,
            exhaustive,
            budget,
        } => {
            let a = load_matrix(lattice.as_deref(), &matrix)?;
            let mode = if exhaustive {
                InvertMode::Exhaustive {
                    budget: budget.unwrap_or(DEFAULT_INVERT_BUDGET),
                }
            } else {
                InvertMode::Theorem
            };
            let found: Vec<_> = invert(&a, mode)?.iter().map(|m| m.to_labels()).collect();
            Ok(json!({
                "invertible": !found.is_empty(),
                "mode": if exhaustive { "exhaustive" } else { "theorem" },
                "inverses": found,
            }))
        }
        Command::Triangularize { lattice, matrix } => {
            let a = load_matrix(lattice.as_deref(), &matrix)?;
            let pi = triangularize(&a)?;
            Ok(json!({
                "permutation": to_json(&pi),
                "triangular": a.conjugate(&pi)?.to_labels(),
            }))
        }
        Command::Fixpoint {
            lattice,
            matrix,
            all,
            report,
            start,
            budget,
        } => {
            let a = load_matrix(lattice.as_deref(), &matrix)?;
            let budget = budget.unwrap_or(DEFAULT_SOLVE_BUDGET);
            let g = greatest_fixpoint(&a)?;
            let mut out = json!({
                "limit": to_json(&g.limit),
                "steps": g.steps,
                "nonzero": has_nonzero_fixpoint(&a)?,
            });
            if all {
                out["solutions"] = to_json(&solve_all_fixpoints(&a, budget)?);
            }
            if report {
                out["equivalence"] = to_json(&equivalence_report(&a, budget)?);
            }
            if let Some(s) = start {
                let x = vector_from_value(&parse_json(&source(&s)?)?, Some(a.lattice().clone()))?;
                out["orbit"] = to_json(&orbit(&x, &a, DEFAULT_ORBIT_BUDGET)?);
            }
            Ok(out)
        }
        Command::Golden { mutate } => {
            let product = if mutate {
                Product::MeetOfJoins
            } else {
                Product::JoinOfMeets
            };
            let summary = run_golden_suite(product);
            let v = to_json(&summary);
            if summary.all_passed() {
                Ok(v)
            } else {
                Err(Failure::GoldenFailed(v))
            }
        }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("JSON values render")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(v) => {
            println!("{}", render(&v, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(Failure::GoldenFailed(v)) => {
            println!("{}", render(&v, cli.pretty));
            ExitCode::from(4)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", json!({"error": "input", "message": msg}));
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            let (kind, code) = match e.kind() {
                ErrorKind::Input => ("input", 1),
                ErrorKind::Precondition => ("precondition", 2),
                ErrorKind::Budget => ("budget", 3),
                ErrorKind::Internal => ("internal", 5),
            };
            eprintln!("{}", json!({"error": kind, "message": e.to_string()}));
            ExitCode::from(code)
        }
    }
}
