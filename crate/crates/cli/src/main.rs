//! Command-line surface: classification, representative generation, path
//! construction, stratification, rationality testing, and realizability
//! enumeration, with structured JSON input and output.
//!
//! Exit codes: 0 success, 2 malformed input (schema), 3 domain/numeric error.

use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilcomm::components::{
    canonical_representative, connect_in_fiber, DEFAULT_PATH_STEPS, DEFAULT_PATH_TOLERANCE,
};
use nilcomm::error::Error;
use nilcomm::invariant::{
    component_label, is_realizable, phi, plucker_rank2_test, LinearMap, SkewLabel,
};
use nilcomm::lie::{Convention, FieldTag, GroupTuple, Lattice};
use nilcomm::strata::{is_rational_point, kernel_projection, splitting_inventory, stratum_index};
use nilcomm::{ExactScalar, GaussRational, QuadRational, Rat, Scalar};

#[derive(Parser)]
#[command(
    name = "nilcomm",
    version,
    about = "Commuting tuples in reduced nilpotent matrix groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Path to a JSON input document ("-" for stdin)
    #[arg(long = "in", value_name = "PATH")]
    input: Option<String>,
    /// Inline JSON input
    #[arg(long, value_name = "JSON", conflicts_with = "input")]
    json: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Component label and realizability of an almost-commuting tuple
    Classify {
        #[command(flatten)]
        io: InputArgs,
        /// Field tag when the input leaves it implicit
        #[arg(long, value_name = "R|C")]
        field: Option<String>,
    },
    /// Canonical representative of a label in ambient dimension n
    Represent {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "omega|j", default_value = "omega")]
        convention: String,
    },
    /// Sampled in-fiber path between two maps with equal label
    Connect {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value_t = DEFAULT_PATH_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_PATH_TOLERANCE)]
        tol: f64,
    },
    /// Rank and exact kernel data of a map
    Stratify {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Rational-point test for the kernel torus of a map
    Rational {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_name = "trivial|unit", default_value = "unit")]
        lattice: String,
    },
    /// Tabulate integer labels with entries in [-B, B] by rank and
    /// realizability for ambient dimension n
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long, value_name = "B")]
        bound: i64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Wedge-summand dimension inventory of a stratum splitting
    Inventory {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_name = "R|C", default_value = "R")]
        field: String,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (name, out, result) = match &cli.command {
        Command::Classify { io, field } => ("classify", io.out.clone(), classify(io, field)),
        Command::Represent { io, n, convention } => {
            ("represent", io.out.clone(), represent(io, *n, convention))
        }
        Command::Connect { io, steps, tol } => {
            ("connect", io.out.clone(), connect(io, *steps, *tol))
        }
        Command::Stratify { io } => ("stratify", io.out.clone(), stratify(io)),
        Command::Rational { io, lattice } => ("rational", io.out.clone(), rational(io, lattice)),
        Command::Enumerate { k, bound, n, out } => {
            ("enumerate", out.clone(), enumerate(*k, *bound, *n))
        }
        Command::Inventory {
            k,
            n,
            d,
            field,
            out,
        } => ("inventory", out.clone(), inventory(*k, *n, *d, field)),
    };
    match result {
        Ok((regime, payload, mut diagnostics)) => {
            diagnostics["elapsed_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
            let report = json!({
                "subcommand": name,
                "regime": regime,
                "result": payload,
                "diagnostics": diagnostics,
            });
            match emit(out.as_deref(), &report) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(3)
                }
            }
        }
        Err(e) => {
            let code = if e.is_schema() { 2 } else { 3 };
            let error_obj = json!({
                "error": {
                    "kind": if e.is_schema() { "schema" } else { "domain" },
                    "name": e.name(),
                    "detail": e.to_string(),
                }
            });
            eprintln!("{error_obj}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<(&'static str, Value, Value), Error>;

fn emit(out: Option<&str>, report: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Schema(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_input(io: &InputArgs) -> Result<Value, Error> {
    let text = match (&io.input, &io.json) {
        (Some(path), None) if path == "-" => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Schema(format!("cannot read stdin: {e}")))?;
            buf
        }
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))?,
        (None, Some(inline)) => inline.clone(),
        _ => {
            return Err(Error::Schema(
                "provide the input document via --in PATH or --json JSON".into(),
            ))
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))
}

fn field_of(v: &Value, flag: &Option<String>) -> Result<FieldTag, Error> {
    if let Some(f) = v.get("field").and_then(Value::as_str) {
        return FieldTag::from_str(f);
    }
    if let Some(f) = flag {
        return FieldTag::from_str(f);
    }
    Err(Error::Schema(
        "field tag missing: set \"field\" in the document or pass --field".into(),
    ))
}

/// Whether any scalar in the document uses the quadratic-field encoding.
fn uses_quadratic(v: &Value) -> bool {
    match v {
        Value::Object(o) => {
            (o.contains_key("a") && o.contains_key("b") && o.contains_key("m"))
                || o.values().any(uses_quadratic)
        }
        Value::Array(a) => a.iter().any(uses_quadratic),
        _ => false,
    }
}

fn lattice_note(field: FieldTag) -> Value {
    match field {
        FieldTag::Real => json!("integers"),
        FieldTag::Complex => json!("gaussian-integers"),
    }
}

fn classify(io: &InputArgs, field_flag: &Option<String>) -> CmdResult {
    let doc = read_input(io)?;
    match field_of(&doc, field_flag)? {
        FieldTag::Real if uses_quadratic(&doc) => classify_typed::<QuadRational>(&doc),
        FieldTag::Real => classify_typed::<Rat>(&doc),
        FieldTag::Complex => classify_typed::<GaussRational>(&doc),
    }
}

fn classify_typed<S: ExactScalar>(doc: &Value) -> CmdResult {
    let tuple = GroupTuple::<S>::from_json(doc)?;
    let label = component_label(&tuple)?;
    Ok((
        "exact",
        json!({
            "label": label.to_json()?,
            "rank": label.rank(),
            "realizable": is_realizable(&label, tuple.n),
            "plucker_rank_le_2": plucker_rank2_test(&label),
        }),
        json!({
            "n": tuple.n,
            "k": tuple.k,
            "lattice_rank": tuple.field.lattice_rank(),
            "lattice_convention": lattice_note(tuple.field),
        }),
    ))
}

fn represent(io: &InputArgs, n: usize, convention: &str) -> CmdResult {
    let doc = read_input(io)?;
    let convention = Convention::from_str(convention)?;
    let label = SkewLabel::from_json(&doc)?;
    match label.field {
        FieldTag::Real => represent_typed::<Rat>(&label, n, convention),
        FieldTag::Complex => represent_typed::<GaussRational>(&label, n, convention),
    }
}

fn represent_typed<S: ExactScalar>(
    label: &SkewLabel,
    n: usize,
    convention: Convention,
) -> CmdResult {
    let map: LinearMap<S> = canonical_representative(label, n, convention)?;
    let verified = phi(&map) == label.to_skew_matrix()?;
    Ok((
        "exact",
        json!({"map": map.to_json()?, "phi_verified": verified}),
        json!({"rank": label.rank(), "lattice_convention": lattice_note(label.field)}),
    ))
}

fn connect(io: &InputArgs, steps: usize, tol: f64) -> CmdResult {
    let doc = read_input(io)?;
    let m0 = doc
        .get("m0")
        .ok_or_else(|| Error::Schema("connect input needs \"m0\"".into()))?;
    match field_of(m0, &None)? {
        FieldTag::Real if uses_quadratic(&doc) => connect_typed::<QuadRational>(&doc, steps, tol),
        FieldTag::Real => connect_typed::<Rat>(&doc, steps, tol),
        FieldTag::Complex => connect_typed::<GaussRational>(&doc, steps, tol),
    }
}

fn connect_typed<S: ExactScalar>(doc: &Value, steps: usize, tol: f64) -> CmdResult {
    let m0 = LinearMap::<S>::from_json(
        doc.get("m0")
            .ok_or_else(|| Error::Schema("connect input needs \"m0\"".into()))?,
    )?;
    let m1 = LinearMap::<S>::from_json(
        doc.get("m1")
            .ok_or_else(|| Error::Schema("connect input needs \"m1\"".into()))?,
    )?;
    let path = connect_in_fiber(&m0, &m1, steps, tol)?;
    let max_residual = path.max_residual();
    Ok((
        "float",
        path.to_json()?,
        json!({"max_residual": max_residual, "steps": steps}),
    ))
}

fn stratify(io: &InputArgs) -> CmdResult {
    let doc = read_input(io)?;
    match field_of(&doc, &None)? {
        FieldTag::Real if uses_quadratic(&doc) => stratify_typed::<QuadRational>(&doc),
        FieldTag::Real => stratify_typed::<Rat>(&doc),
        FieldTag::Complex => stratify_typed::<GaussRational>(&doc),
    }
}

fn stratify_typed<S: ExactScalar>(doc: &Value) -> CmdResult {
    let map = LinearMap::<S>::from_json(doc)?;
    let d = stratum_index(&map);
    let basis = map.mat.kernel_basis();
    let basis_json: Result<Vec<Value>, Error> = basis
        .iter()
        .map(|v| {
            let entries: Result<Vec<_>, Error> = v.iter().map(Scalar::to_json).collect();
            Ok(Value::Array(entries?))
        })
        .collect();
    let rho = kernel_projection(&map);
    let mut rho_rows = Vec::new();
    for i in 0..map.k {
        let row: Result<Vec<_>, Error> = rho.row(i).iter().map(Scalar::to_json).collect();
        rho_rows.push(Value::Array(row?));
    }
    Ok((
        "exact",
        json!({
            "rank": d,
            "kernel_basis": basis_json?,
            "kernel_projection": rho_rows,
        }),
        json!({"n": map.n, "k": map.k}),
    ))
}

fn rational(io: &InputArgs, lattice: &str) -> CmdResult {
    let doc = read_input(io)?;
    match field_of(&doc, &None)? {
        FieldTag::Real if uses_quadratic(&doc) => rational_typed::<QuadRational>(&doc, lattice),
        FieldTag::Real => rational_typed::<Rat>(&doc, lattice),
        FieldTag::Complex => rational_typed::<GaussRational>(&doc, lattice),
    }
}

fn rational_typed<S: ExactScalar>(doc: &Value, lattice: &str) -> CmdResult {
    let map = LinearMap::<S>::from_json(doc)?;
    let lattice = match lattice {
        "unit" => Lattice::unit(),
        "trivial" => Lattice::Trivial,
        other => return Err(Error::Schema(format!("unknown lattice {other:?}"))),
    };
    let verdict = is_rational_point(&map, &lattice)?;
    Ok((
        "exact",
        json!({"rational": verdict}),
        json!({"kernel_dim": map.k - stratum_index(&map)}),
    ))
}

fn enumerate(k: usize, bound: i64, n: usize) -> CmdResult {
    if k < 2 {
        return Err(Error::Schema("enumerate needs k >= 2".into()));
    }
    if bound < 0 {
        return Err(Error::Schema("bound must be non-negative".into()));
    }
    let cells = k * (k - 1) / 2;
    let width = (2 * bound + 1) as u64;
    let total: u64 = width.pow(cells as u32);
    let mut counts: Vec<(usize, u64, bool)> = Vec::new();
    let mut upper = vec![-bound; cells];
    loop {
        let label = SkewLabel::from_upper_ints(k, &upper);
        let rank = label.rank();
        let realizable = rank / 2 <= n;
        match counts.iter_mut().find(|(r, _, _)| *r == rank) {
            Some((_, c, _)) => *c += 1,
            None => counts.push((rank, 1, realizable)),
        }
        // odometer over the upper triangle, lexicographic
        let mut advanced = false;
        for slot in (0..cells).rev() {
            if upper[slot] < bound {
                upper[slot] += 1;
                for later in upper.iter_mut().skip(slot + 1) {
                    *later = -bound;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    counts.sort_by_key(|&(r, _, _)| r);
    let tallied: u64 = counts.iter().map(|&(_, c, _)| c).sum();
    debug_assert_eq!(tallied, total);
    let rows: Vec<Value> = counts
        .iter()
        .map(|&(rank, count, realizable)| {
            json!({"rank": rank, "count": count, "realizable": realizable})
        })
        .collect();
    Ok((
        "exact",
        json!({"k": k, "bound": bound, "n": n, "total": total, "counts": rows}),
        json!({"field": "R"}),
    ))
}

fn inventory(k: usize, n: usize, d: usize, field: &str) -> CmdResult {
    let field = FieldTag::from_str(field)?;
    let summands = splitting_inventory(field, k, n, d)?;
    let rows: Vec<Value> = summands.iter().map(|s| s.to_json()).collect();
    let count = rows.len();
    Ok((
        "exact",
        json!({"k": k, "n": n, "d": d, "field": field.as_str(), "summands": rows}),
        json!({"count": count}),
    ))
}
