//! `sgclose`: analyze finite semigroups, classify families, run the lemma
//! suites and inspect e-base topologies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sgclose_core::classifier::{classify_family, FamilyVerdict};
use sgclose_core::families::{self, FamilySpec};
use sgclose_core::lemmas::{run_all, SuiteOptions, SuiteReport};
use sgclose_core::predicates::{classify, AnalysisReport};
use sgclose_core::topology::{topology_report, BaseKind, EBaseOptions, TopologyReport};
use sgclose_core::{sgp, Error, FiniteSemigroup};

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "sgclose", version, about = "Finite semigroup closedness laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for the randomized parts; recorded in every report.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Largest family parameter for `lemmas`.
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural statistics of one semigroup.
    Analyze {
        /// A `.sgp` file or an instance such as `example-main:8`.
        input: String,
    },
    /// Limit verdicts and theorem conclusions for a family.
    Classify {
        /// Family name such as `example-main` or `monogenic-index:2`.
        family: String,
        /// Inclusive range `Nmin..Nmax`.
        range: String,
    },
    /// Runs every lemma suite on the corpus.
    Lemmas {
        /// Exhaustive corpus order.
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// Restrict to commutative instances.
        #[arg(long)]
        commutative_only: bool,
        /// Number of seeded random compositions.
        #[arg(long, default_value_t = 32)]
        random: usize,
    },
    /// The topology generated by an e-base.
    Topology {
        /// A `.sgp` file or an instance such as `example-main:8`.
        input: String,
        /// Central idempotent.
        #[arg(long)]
        e: usize,
        /// Which e-base generates the topology.
        #[arg(long, value_enum, default_value_t = Base::Z)]
        base: Base,
    },
    /// Writes an instance as a `.sgp` table; `random` draws a seeded
    /// composition.
    Gen {
        /// An instance such as `chain*cyclic:3`, or `random`.
        spec: String,
    },
    /// Converts between `.sgp` and JSON tables.
    Convert {
        /// A `.sgp` or `.json` table file.
        input: String,
        /// Target format.
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        to: TableFormat,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Base {
    #[value(name = "H")]
    H,
    #[value(name = "Z")]
    Z,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    Sgp,
    Json,
}

/// A failure with its exit code and a machine-readable description.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    witness: Value,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        let (code, kind, witness) = match &err {
            Error::Parse { line, .. } => (2, "parse", json!({ "line": line })),
            Error::NotAssociative { x, y, z } => (3, "not-associative", json!([x, y, z])),
            Error::NotAnIdeal { x, y, product } => (3, "not-an-ideal", json!([x, y, product])),
            Error::NotCompatible { x, y, lhs, rhs } => (3, "not-compatible", json!([x, y, lhs, rhs])),
            Error::OutOfRange { row, col, value, .. } => (3, "out-of-range", json!([row, col, value])),
            Error::NotIdempotent(e) => (3, "not-idempotent", json!(e)),
            Error::NotCentralIdempotent(e) => (3, "not-central-idempotent", json!(e)),
            Error::ElementOutOfRange { element, .. } => (3, "element-out-of-range", json!(element)),
            Error::BuilderFailure { n, .. } => (3, "builder-failure", json!({ "n": n })),
            Error::BadShape { .. }
            | Error::DuplicateName(_)
            | Error::EmptyGenerator
            | Error::BadPartition(_)
            | Error::BadParameter(_) => (3, "validation", Value::Null),
            Error::BoundExceeded { size, bound, .. } => (4, "bound-exceeded", json!({ "size": size, "bound": bound })),
            Error::TooLarge { n, cap } => (4, "too-large", json!({ "size": n, "bound": cap })),
            Error::Internal(_) => (1, "internal", Value::Null),
        };
        Self {
            code,
            kind,
            message,
            witness,
        }
    }
}

impl Failure {
    fn input(message: String) -> Self {
        Self {
            code: 2,
            kind: "input",
            message,
            witness: Value::Null,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let diag = json!({
                "schema": SCHEMA,
                "error": { "kind": f.kind, "message": f.message, "witness": f.witness, "exitCode": f.code },
            });
            eprintln!("{diag}");
            ExitCode::from(f.code)
        }
    }
}

/// Reads a `.sgp` or JSON table from disk, or builds a named instance.
fn load(input: &str) -> Result<FiniteSemigroup, Failure> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{input}: {e}")))?;
        return parse_table(&text);
    }
    if input.ends_with(".sgp") || input.ends_with(".json") {
        return Err(Failure::input(format!("{input}: no such file")));
    }
    Ok(families::instance(input)?)
}

#[derive(Serialize, serde::Deserialize)]
struct JsonTable {
    n: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

fn parse_table(text: &str) -> Result<FiniteSemigroup, Failure> {
    if text.trim_start().starts_with('{') {
        let t: JsonTable = serde_json::from_str(text).map_err(|e| Failure {
            code: 2,
            kind: "parse",
            message: e.to_string(),
            witness: json!({ "line": e.line() }),
        })?;
        Ok(FiniteSemigroup::build(t.n, t.table, t.names)?)
    } else {
        Ok(sgp::parse(text)?)
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let json_out = cli.format == Format::Json;
    let (body, code) = match &cli.command {
        Command::Analyze { input } => {
            let s = load(input)?;
            let report = classify(&s)?;
            let text = if json_out {
                envelope(cli, "analyze", json!({ "input": input }), &report)
            } else {
                analyze_text(input, &s, &report)
            };
            (text, 0)
        }
        Command::Classify { family, range } => {
            let spec = FamilySpec::parse(family, range)?;
            let verdict = classify_family(&spec)?;
            let text = if json_out {
                envelope(cli, "classify", json!({ "family": family, "range": range }), &verdict)
            } else {
                classify_text(&verdict)
            };
            (text, 0)
        }
        Command::Lemmas {
            max_order,
            commutative_only,
            random,
        } => {
            let mut opts = SuiteOptions {
                max_order: *max_order,
                commutative_only: *commutative_only,
                random_count: *random,
                seed: cli.seed,
                ..SuiteOptions::default()
            };
            if let Some(n) = cli.nmax {
                opts.family_n_max = n;
            }
            let report = run_all(&opts)?;
            let code = if report.failed() > 0 { 1 } else { 0 };
            let text = if json_out {
                envelope(cli, "lemmas", serde_json::to_value(opts).unwrap_or(Value::Null), &report)
            } else {
                lemmas_text(&report)
            };
            (text, code)
        }
        Command::Topology { input, e, base } => {
            let s = load(input)?;
            let kind = match base {
                Base::H => BaseKind::H,
                Base::Z => BaseKind::Z,
            };
            let report = topology_report(&s, *e, kind, EBaseOptions::default())?;
            let text = if json_out {
                envelope(cli, "topology", json!({ "input": input, "e": e, "base": kind.to_string() }), &report)
            } else {
                topology_text(&report)
            };
            (text, 0)
        }
        Command::Gen { spec } => {
            let s = if spec == "random" {
                families::random_composition(cli.seed, 3, 24)?
            } else {
                families::instance(spec)?
            };
            let label = if spec == "random" {
                format!("random composition, seed {}", cli.seed)
            } else {
                spec.clone()
            };
            let text = if json_out {
                envelope(cli, "gen", json!({ "spec": spec }), &json_table(&s))
            } else {
                sgp::write(&s, &[&label])
            };
            (text, 0)
        }
        Command::Convert { input, to } => {
            let s = load(input)?;
            let text = match to {
                TableFormat::Sgp => sgp::write(&s, &[]),
                TableFormat::Json => {
                    let mut t = serde_json::to_string(&json_table(&s)).unwrap_or_default();
                    t.push('\n');
                    t
                }
            };
            (text, 0)
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(code)
}

fn json_table(s: &FiniteSemigroup) -> JsonTable {
    JsonTable {
        n: s.len(),
        table: s.rows(),
        names: s.names().map(<[String]>::to_vec),
    }
}

/// `{"schema":1,"command":..,"seed":..,"params":..,"result":..}`.
fn envelope<T: Serialize>(cli: &Cli, command: &str, params: Value, result: &T) -> String {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        schema: u32,
        command: &'a str,
        seed: u64,
        params: Value,
        result: &'a T,
    }
    let mut s = serde_json::to_string(&Envelope {
        schema: SCHEMA,
        command,
        seed: cli.seed,
        params,
        result,
    })
    .expect("reports serialize");
    s.push('\n');
    s
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn analyze_text(input: &str, s: &FiniteSemigroup, r: &AnalysisReport) -> String {
    let st = &r.stats;
    let w = &r.witnesses;
    let v = &r.viability;
    let mut out = String::new();
    let _ = writeln!(out, "{input}: order {}, {}", s.len(), if r.commutative { "commutative" } else { "noncommutative" });
    let rows = [
        ("bounded exponent", st.bounded_exponent.to_string()),
        ("band / semilattice", format!("{} / {}", st.is_band, st.is_semilattice)),
        ("idempotents", st.idempotent_count.to_string()),
        ("longest idempotent chain", st.longest_e_chain.to_string()),
        ("chain stat", format!("{} {}", st.chain_stat, list(&w.chain))),
        ("max subgroup", format!("{} {}", st.max_subgroup_size, list(&w.max_subgroup))),
        ("max subgroup exponent", st.max_subgroup_exponent.to_string()),
        ("max null set", format!("{} {} -> {}", st.max_null_set_size, list(&w.null_set), st.max_null_set_value)),
        ("max Clifford-null set", format!("{} {}", st.max_clifford_null_set_size, list(&w.clifford_null_set))),
        ("Clifford part / complement", format!("{} / {}", st.clifford_size, st.clifford_complement_size)),
        ("Clifford / unipotent", format!("{} / {}", st.is_clifford, st.is_unipotent)),
        ("center / central idempotents", format!("{} / {}", st.center.center_size, st.center.central_idempotents)),
        ("viable", v.viable.holds.to_string()),
    ];
    for (k, val) in rows {
        let _ = writeln!(out, "  {k:<30} {val}");
    }
    out
}

fn classify_text(v: &FamilyVerdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} for N = {}..{}", v.family_name, v.n_min, v.n_max);
    for (cond, lv) in &v.limit_verdicts {
        let values: Vec<String> = lv.values.iter().map(|(_, x)| x.to_string()).collect();
        let _ = write!(out, "  {cond:<24} {:<13} {}", lv.verdict.to_string(), values.join(" "));
        if !lv.witness.is_empty() {
            let _ = write!(out, "  (grows at N = {:?})", lv.witness);
        }
        out.push('\n');
    }
    for c in &v.theorem_conclusions {
        let _ = writeln!(out, "  {:<12} {}", c.theorem, c.conclusion);
    }
    out
}

fn lemmas_text(r: &SuiteReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} instances", r.instances);
    for (k, t) in &r.tallies {
        let _ = writeln!(
            out,
            "  {k:<34} checked {:>9}  passed {:>9}  vacuous {:>9}  failed {}",
            t.checked, t.passed, t.vacuous, t.failed
        );
    }
    for f in &r.failures {
        let _ = writeln!(out, "\nFAIL {} on {}: {}\n{}", f.check, f.instance, f.detail, f.sgp);
    }
    out
}

fn topology_text(r: &TopologyReport) -> String {
    let mut out = String::new();
    let sets = |v: &[sgclose_core::Subset]| v.iter().map(|s| list(&s.to_vec())).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "e = {}, base {}", r.e, r.base_kind);
    let _ = writeln!(out, "  members: {}", sets(&r.members));
    let _ = writeln!(out, "  valid: {}, regular: {}", r.validation.valid, r.regularity.regular);
    if let Some(b) = r.regularity.witness {
        let _ = writeln!(out, "  irregular at b = {b}");
    }
    let _ = writeln!(out, "  minimal neighbourhoods: {}", sets(r.topology.min_nbhds()));
    let f = &r.flags;
    let _ = writeln!(
        out,
        "  topological semigroup {}, T0 {}, non-isolated discrete {}, T1 {}, discrete {}, zero-dimensional {}",
        f.is_top_semigroup, f.is_t0, f.non_isolated_discrete, f.is_t1, f.is_discrete, f.zero_dimensional
    );
    if let Some(c) = r.shift_subsets_closed {
        let _ = writeln!(out, "  subsets of shift sets closed: {c}");
    }
    out
}
