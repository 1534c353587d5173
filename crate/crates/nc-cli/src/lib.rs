//! The `nc` command line tool.
//!
//! Every subcommand builds one internal report value that is rendered either
//! as a human-readable text block or, with `--json`, as a stable JSON
//! document; identical invocations produce byte-identical output.
//!
//! Exit codes: 0 on success, 1 on a domain failure (an infeasible walk, a
//! failed certificate, a false predicate), 2 on usage or parse errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use neural_codes::algebra::{
    self, covered_code, covering_map, find_surjective_morphism, is_minor_witness, is_morphism,
    reduce_code, trunk, RemovalReason,
};
use neural_codes::certificates::{
    builtin_certificates, parse_certificate, verify_certificate, CertificateReport, VerifyOptions,
};
use neural_codes::code::{Code, Codeword};
use neural_codes::families::{gen_ln, gen_pd, registry};
use neural_codes::format::{parse_code, serialize_json, serialize_text};
use neural_codes::geometry::{
    code_of_1d_realization, membership, parse_realization, parse_witnesses, segment_atom_trace,
    verify_witnesses, Realization,
};
use neural_codes::graph::{
    codeword_graph, default_walk_bound, enumerate_feasible_paths, forced_between, is_feasible_walk,
    is_order_forced, is_strongly_order_forced, reduce_walk_to_path, GraphError,
};
use neural_codes::iso::is_isomorphic;
use neural_codes::rational::Rational;

/// Operation coverage of the dispatch table: every library operation must be
/// reachable from at least one subcommand. Checked by a test.
pub const OPERATION_COVERAGE: &[(&str, &str)] = &[
    ("parse_code", "parse"),
    ("maximal_codewords", "max"),
    ("is_intersection_complete", "iscomplete"),
    ("is_sunflower_code", "report"),
    ("is_isomorphic", "iso"),
    ("gen_ln", "family"),
    ("gen_pd", "family"),
    ("registry", "registry"),
    ("codeword_graph", "report"),
    ("is_feasible_walk", "walk"),
    ("reduce_walk_to_path", "walk"),
    ("enumerate_feasible_paths", "paths"),
    ("forced_between", "forced"),
    ("is_order_forced", "order-forced"),
    ("is_strongly_order_forced", "strong"),
    ("trunk", "trunk"),
    ("is_morphism", "morphism"),
    ("is_minor_witness", "morphism"),
    ("find_surjective_morphism", "minor"),
    ("covered_code", "covered"),
    ("reduce_code", "reduce"),
    ("membership", "geom member"),
    ("verify_witnesses", "geom witnesses"),
    ("code_of_1d_realization", "geom code1d"),
    ("segment_atom_trace", "geom trace"),
    ("verify_certificate", "cert verify"),
    ("builtin_certificates", "cert builtin"),
];

#[derive(Debug, Parser)]
#[command(name = "nc", about = "Combinatorics of convex neural codes", version)]
pub struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print only the essential result line(s).
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a code file (JSON or compact text) and echo its canonical form.
    Parse { input: PathBuf },
    /// Maximal codewords of a code.
    Max { input: PathBuf },
    /// Is the code intersection complete?
    Iscomplete { input: PathBuf },
    /// Search for a neuron bijection identifying two codes.
    Iso { a: PathBuf, b: PathBuf },
    /// Generate a code family member (Ln or Pd).
    Family {
        /// Family name: Ln or Pd.
        family: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        /// Write the code as JSON to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look up a named registry code with its cited metadata.
    Registry { name: String },
    /// Feasibility of a walk, with optional reduction to a simple path.
    Walk {
        input: PathBuf,
        /// Semicolon-separated codewords, e.g. "13;1235;15".
        #[arg(long)]
        walk: String,
        /// Also reduce the walk to a feasible simple path.
        #[arg(long)]
        reduce: bool,
    },
    /// All feasible simple paths between two codewords.
    Paths {
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Codewords forced between two codewords.
    Forced {
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Is a codeword sequence order-forced?
    #[command(name = "order-forced")]
    OrderForced {
        input: PathBuf,
        /// Semicolon-separated codewords, e.g. "123;23;234;34;345".
        #[arg(long)]
        seq: String,
    },
    /// Is a feasible path strongly order-forced? Prints the walk bound used.
    Strong {
        input: PathBuf,
        #[arg(long)]
        path: String,
    },
    /// The trunk of a neuron set.
    Trunk {
        input: PathBuf,
        /// Codeword token naming the base set, e.g. "5" or "1.2bar".
        #[arg(long)]
        sigma: String,
    },
    /// Check a code map file for the morphism and minor-witness properties.
    Morphism {
        #[arg(long)]
        map: PathBuf,
    },
    /// Exhaustive search for a surjective morphism source -> target.
    Minor {
        source: PathBuf,
        target: PathBuf,
        /// Required acknowledgement: the search is factorial in the source.
        #[arg(long)]
        exhaustive: bool,
    },
    /// The covered code for a neuron.
    Covered {
        input: PathBuf,
        #[arg(long)]
        i: String,
    },
    /// Remove trivial and redundant neurons.
    Reduce { input: PathBuf },
    /// Exact geometry over rational half-space realizations.
    Geom {
        #[command(subcommand)]
        geom: GeomCommand,
    },
    /// Certificate verification and the builtin certificate library.
    Cert {
        #[command(subcommand)]
        cert: CertCommand,
    },
    /// Full analysis bundle for a named registry code.
    Report { name: String },
}

#[derive(Debug, Subcommand)]
pub enum GeomCommand {
    /// Membership pattern of a rational point.
    Member {
        input: PathBuf,
        /// Comma-separated rationals, e.g. "1/2" or "1/2,-3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Verify claimed (codeword, point) witnesses.
    Witnesses {
        realization: PathBuf,
        witnesses: PathBuf,
    },
    /// Exact code of a one-dimensional realization.
    Code1d { input: PathBuf },
    /// Atom trace along a segment.
    Trace {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CertCommand {
    /// Verify a certificate file against a code file.
    Verify { code: PathBuf, cert: PathBuf },
    /// Print a builtin certificate, or list the available names.
    Builtin {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum CliError {
    /// Usage or parse problem; exit 2.
    Usage(String),
    /// Domain failure (infeasible input, no feasible path); exit 1.
    Domain(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

struct Report {
    json: Value,
    text: String,
    /// Minimal text for --quiet mode.
    brief: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String, brief: String) -> Self {
        Report {
            json,
            text,
            brief,
            ok: true,
        }
    }
}

/// Runs the CLI on explicit arguments (the program name included) with an
/// explicit walk-bound override, returning the exit code and both streams.
pub fn run<I, S>(args: I, walk_bound_env: Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0.
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let walk_bound = match walk_bound_env {
        Some(raw) => match raw.parse::<usize>() {
            Ok(b) if b > 0 => Some(b),
            _ => {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!(
                        "error: NC_WALK_BOUND must be a positive integer, got {raw:?}\n"
                    ),
                }
            }
        },
        None => None,
    };
    match dispatch(&cli.command, walk_bound) {
        Ok(report) => {
            let mut stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&report.json)
                    .expect("report serialization cannot fail");
                s.push('\n');
                s
            } else if cli.quiet {
                let mut s = report.brief.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            } else {
                let mut s = report.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            };
            if stdout == "\n" {
                stdout.clear();
            }
            Outcome {
                code: if report.ok { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(CliError::Usage(message)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(CliError::Domain(message)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<Code, CliError> {
    parse_code(&read_file(path)?).map_err(CliError::usage)
}

fn load_realization(path: &Path) -> Result<Realization, CliError> {
    parse_realization(&read_file(path)?).map_err(CliError::usage)
}

fn parse_word(code: &Code, token: &str) -> Result<Codeword, CliError> {
    let word = code
        .universe()
        .parse_codeword(token)
        .map_err(CliError::usage)?;
    Ok(word)
}

fn parse_walk_tokens(code: &Code, raw: &str) -> Result<Vec<Codeword>, CliError> {
    raw.split(';')
        .map(|t| parse_word(code, t))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|words| {
            if words.is_empty() {
                Err(CliError::Usage("empty codeword sequence".to_string()))
            } else {
                Ok(words)
            }
        })
}

fn parse_point(raw: &str) -> Result<Vec<Rational>, CliError> {
    raw.split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(CliError::usage))
        .collect()
}

fn words_json(code: &Code, words: &[Codeword]) -> Value {
    Value::Array(
        words
            .iter()
            .map(|w| {
                Value::Array(
                    w.indices()
                        .map(|i| Value::String(code.universe().label(i).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn words_text(code: &Code, words: &[Codeword]) -> String {
    words
        .iter()
        .map(|w| code.format_codeword(*w))
        .collect::<Vec<_>>()
        .join(", ")
}

fn graph_error(e: GraphError) -> CliError {
    match e {
        GraphError::UnknownCodeword(_) | GraphError::EmptyWalk => CliError::usage(e),
        _ => CliError::Domain(e.to_string()),
    }
}

fn code_display(code: &Code) -> String {
    serialize_text(code).unwrap_or_else(|_| serialize_json(code))
}

fn cert_report_json(report: &CertificateReport) -> Value {
    json!({
        "all_passed": report.all_passed,
        "walk_bound": report.walk_bound,
        "narrative": report.narrative,
        "premises": report.entries.iter().map(|e| json!({
            "index": e.index,
            "description": e.description,
            "passed": e.passed,
            "detail": e.detail,
        })).collect::<Vec<_>>(),
    })
}

fn cert_report_text(report: &CertificateReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let status = if e.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "  [{status}] {}", e.description);
        if let Some(detail) = &e.detail {
            let _ = writeln!(out, "         {detail}");
        }
    }
    if let Some(bound) = report.walk_bound {
        let _ = writeln!(out, "  walk bound: {bound}");
    }
    let _ = write!(
        out,
        "  verdict: {}",
        if report.all_passed {
            "all premises verified"
        } else {
            "verification FAILED"
        }
    );
    out
}

fn dispatch(command: &Command, walk_bound: Option<usize>) -> Result<Report, CliError> {
    match command {
        Command::Parse { input } => {
            let code = load_code(input)?;
            let canonical = code_display(&code);
            Ok(Report::ok(
                json!({
                    "command": "parse",
                    "neurons": code.universe().labels(),
                    "codewords": words_json(&code, code.codewords()),
                }),
                format!(
                    "neurons: {}\ncodewords ({}): {}",
                    code.universe().labels().join(","),
                    code.len(),
                    canonical
                ),
                canonical,
            ))
        }
        Command::Max { input } => {
            let code = load_code(input)?;
            let maximal = code.maximal_codewords();
            Ok(Report::ok(
                json!({
                    "command": "max",
                    "maximal_codewords": words_json(&code, &maximal),
                    "count": maximal.len(),
                }),
                format!(
                    "maximal codewords ({}): {}",
                    maximal.len(),
                    words_text(&code, &maximal)
                ),
                words_text(&code, &maximal),
            ))
        }
        Command::Iscomplete { input } => {
            let code = load_code(input)?;
            let complete = code.is_intersection_complete();
            let mut report = Report::ok(
                json!({"command": "iscomplete", "intersection_complete": complete}),
                format!("intersection complete: {complete}"),
                complete.to_string(),
            );
            report.ok = complete;
            Ok(report)
        }
        Command::Iso { a, b } => {
            let code_a = load_code(a)?;
            let code_b = load_code(b)?;
            match is_isomorphic(&code_a, &code_b) {
                Some(bijection) => {
                    let pairs: Vec<String> =
                        bijection.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                    Ok(Report::ok(
                        json!({"command": "iso", "isomorphic": true, "bijection": bijection}),
                        format!("isomorphic via {}", pairs.join(", ")),
                        "isomorphic".to_string(),
                    ))
                }
                None => {
                    let mut report = Report::ok(
                        json!({"command": "iso", "isomorphic": false, "bijection": Value::Null}),
                        "not isomorphic".to_string(),
                        "not isomorphic".to_string(),
                    );
                    report.ok = false;
                    Ok(report)
                }
            }
        }
        Command::Family { family, n, d, out } => {
            let code = match family.as_str() {
                "Ln" => {
                    let n =
                        n.ok_or_else(|| CliError::Usage("family Ln requires --n".to_string()))?;
                    gen_ln(n).map_err(CliError::usage)?
                }
                "Pd" => {
                    let d =
                        d.ok_or_else(|| CliError::Usage("family Pd requires --d".to_string()))?;
                    gen_pd(d).map_err(CliError::usage)?
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown family {other:?}; expected Ln or Pd"
                    )))
                }
            };
            let json_code = serialize_json(&code);
            if let Some(path) = out {
                fs::write(path, format!("{json_code}\n")).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(Report::ok(
                json!({
                    "command": "family",
                    "family": family,
                    "neurons": code.universe().labels(),
                    "codewords": words_json(&code, code.codewords()),
                    "count": code.len(),
                }),
                format!(
                    "{} codewords on {} neurons\n{}",
                    code.len(),
                    code.universe().len(),
                    json_code
                ),
                json_code.clone(),
            ))
        }
        Command::Registry { name } => {
            let entry = registry(name).map_err(CliError::usage)?;
            let metadata: Vec<Value> = entry
                .metadata
                .iter()
                .map(|m| json!({"fact": m.fact, "value": m.value, "source": m.source}))
                .collect();
            let mut text = format!(
                "{}: {} codewords on {} neurons\n{}",
                entry.name,
                entry.code.len(),
                entry.code.universe().len(),
                code_display(&entry.code)
            );
            for m in &entry.metadata {
                let _ = write!(text, "\n{} = {} ({})", m.fact, m.value, m.source);
            }
            Ok(Report::ok(
                json!({
                    "command": "registry",
                    "name": entry.name,
                    "neurons": entry.code.universe().labels(),
                    "codewords": words_json(&entry.code, entry.code.codewords()),
                    "metadata": metadata,
                }),
                text,
                code_display(&entry.code),
            ))
        }
        Command::Walk {
            input,
            walk,
            reduce,
        } => {
            let code = load_code(input)?;
            let graph = codeword_graph(&code);
            let vertices = parse_walk_tokens(&code, walk)?;
            let report = is_feasible_walk(&graph, &vertices).map_err(graph_error)?;
            let reduced = if *reduce && report.feasible {
                Some(
                    reduce_walk_to_path(&graph, &vertices)
                        .map_err(graph_error)?
                        .vertices,
                )
            } else {
                None
            };
            let violation = report
                .witness_violation
                .map(|v| json!({"i": v.i, "m": v.m, "j": v.j}));
            let mut text = format!("feasible: {}", report.feasible);
            if let Some(v) = report.witness_violation {
                let _ = write!(text, "\nviolating triple: {v}");
            }
            if let Some(r) = &reduced {
                let _ = write!(text, "\nreduced path: {}", words_text(&code, r));
            }
            let mut out = Report::ok(
                json!({
                    "command": "walk",
                    "feasible": report.feasible,
                    "witness_violation": violation,
                    "reduced_path": reduced.as_ref().map(|r| words_json(&code, r)),
                }),
                text,
                report.feasible.to_string(),
            );
            out.ok = report.feasible;
            Ok(out)
        }
        Command::Paths { input, from, to } => {
            let code = load_code(input)?;
            let graph = codeword_graph(&code);
            let from = parse_word(&code, from)?;
            let to = parse_word(&code, to)?;
            let paths = enumerate_feasible_paths(&graph, from, to).map_err(graph_error)?;
            let rendered: Vec<String> = paths
                .iter()
                .map(|p| words_text(&code, &p.vertices))
                .collect();
            let text = if rendered.is_empty() {
                "no feasible paths".to_string()
            } else {
                format!(
                    "{} feasible path(s):\n{}",
                    rendered.len(),
                    rendered.join("\n")
                )
            };
            Ok(Report::ok(
                json!({
                    "command": "paths",
                    "count": paths.len(),
                    "paths": paths.iter().map(|p| words_json(&code, &p.vertices)).collect::<Vec<_>>(),
                }),
                text,
                rendered.len().to_string(),
            ))
        }
        Command::Forced { input, from, to } => {
            let code = load_code(input)?;
            let graph = codeword_graph(&code);
            let from = parse_word(&code, from)?;
            let to = parse_word(&code, to)?;
            let forced = forced_between(&graph, from, to).map_err(graph_error)?;
            Ok(Report::ok(
                json!({
                    "command": "forced",
                    "forced_between": words_json(&code, &forced),
                }),
                format!("forced between: {}", words_text(&code, &forced)),
                words_text(&code, &forced),
            ))
        }
        Command::OrderForced { input, seq } => {
            let code = load_code(input)?;
            let graph = codeword_graph(&code);
            let sequence = parse_walk_tokens(&code, seq)?;
            let forced = is_order_forced(&graph, &sequence).map_err(graph_error)?;
            let mut report = Report::ok(
                json!({"command": "order-forced", "order_forced": forced}),
                format!("order-forced: {forced}"),
                forced.to_string(),
            );
            report.ok = forced;
            Ok(report)
        }
        Command::Strong { input, path } => {
            let code = load_code(input)?;
            let graph = codeword_graph(&code);
            let vertices = parse_walk_tokens(&code, path)?;
            let bound = walk_bound.unwrap_or_else(|| default_walk_bound(&code));
            let result = is_strongly_order_forced(&graph, &vertices, bound).map_err(graph_error)?;
            let counter = result
                .counterexample
                .as_ref()
                .map(|w| words_json(&code, &w.vertices));
            let mut text = format!(
                "strongly order-forced: {} (walk bound {})",
                result.strongly_order_forced, result.bound
            );
            if let Some(w) = &result.counterexample {
                let _ = write!(text, "\ndeviating walk: {}", words_text(&code, &w.vertices));
            }
            let mut report = Report::ok(
                json!({
                    "command": "strong",
                    "strongly_order_forced": result.strongly_order_forced,
                    "walk_bound": result.bound,
                    "counterexample": counter,
                }),
                text,
                result.strongly_order_forced.to_string(),
            );
            report.ok = result.strongly_order_forced;
            Ok(report)
        }
        Command::Trunk { input, sigma } => {
            let code = load_code(input)?;
            let base = parse_word(&code, sigma)?;
            let t = trunk(&code, base);
            Ok(Report::ok(
                json!({
                    "command": "trunk",
                    "sigma": words_json(&code, &[base]),
                    "members": words_json(&code, &t.members),
                }),
                format!(
                    "trunk of {}: {}",
                    code.format_codeword(base),
                    words_text(&code, &t.members)
                ),
                words_text(&code, &t.members),
            ))
        }
        Command::Morphism { map } => {
            let built = algebra::map_json::build(&read_file(map)?).map_err(CliError::usage)?;
            let morphism = is_morphism(&built);
            let witness = is_minor_witness(&built);
            let mut report = Report::ok(
                json!({
                    "command": "morphism",
                    "is_morphism": morphism,
                    "is_surjective": built.is_surjective(),
                    "is_minor_witness": witness,
                }),
                format!(
                    "morphism: {morphism}\nsurjective: {}\nminor witness: {witness}",
                    built.is_surjective()
                ),
                morphism.to_string(),
            );
            report.ok = morphism;
            Ok(report)
        }
        Command::Minor {
            source,
            target,
            exhaustive,
        } => {
            if !exhaustive {
                return Err(CliError::Usage(
                    "minor search is factorial in the source; pass --exhaustive to run it"
                        .to_string(),
                ));
            }
            let source = load_code(source)?;
            let target = load_code(target)?;
            let found = find_surjective_morphism(&source, &target).map_err(CliError::usage)?;
            match found {
                Some(map) => {
                    let pairs: Vec<Value> = (0..source.len())
                        .map(|si| {
                            json!([
                                words_json(&source, &[source.codewords()[si]])[0],
                                words_json(&target, &[target.codewords()[map.image_of_index(si)]])
                                    [0],
                            ])
                        })
                        .collect();
                    let text_pairs: Vec<String> = (0..source.len())
                        .map(|si| {
                            format!(
                                "{} -> {}",
                                source.format_codeword(source.codewords()[si]),
                                target.format_codeword(target.codewords()[map.image_of_index(si)])
                            )
                        })
                        .collect();
                    Ok(Report::ok(
                        json!({"command": "minor", "found": true, "assignment": pairs}),
                        format!("surjective morphism found:\n{}", text_pairs.join("\n")),
                        "found".to_string(),
                    ))
                }
                None => {
                    let mut report = Report::ok(
                        json!({"command": "minor", "found": false, "assignment": Value::Null}),
                        "no surjective morphism exists".to_string(),
                        "none".to_string(),
                    );
                    report.ok = false;
                    Ok(report)
                }
            }
        }
        Command::Covered { input, i } => {
            let code = load_code(input)?;
            let covered = covered_code(&code, i).map_err(CliError::usage)?;
            let map = covering_map(&code, i).map_err(CliError::usage)?;
            debug_assert!(is_minor_witness(&map));
            Ok(Report::ok(
                json!({
                    "command": "covered",
                    "neurons": covered.universe().labels(),
                    "codewords": words_json(&covered, covered.codewords()),
                }),
                format!(
                    "covered code for neuron {i}: {} codewords on {} neurons\n{}",
                    covered.len(),
                    covered.universe().len(),
                    serialize_json(&covered)
                ),
                serialize_json(&covered),
            ))
        }
        Command::Reduce { input } => {
            let code = load_code(input)?;
            let (reduced, log) = reduce_code(&code);
            let log_json: Vec<Value> = log
                .iter()
                .map(|r| match &r.reason {
                    RemovalReason::Trivial => {
                        json!({"neuron": r.label, "reason": "trivial", "witness": Value::Null})
                    }
                    RemovalReason::RedundantTo(sigma) => {
                        json!({"neuron": r.label, "reason": "redundant", "witness": sigma})
                    }
                })
                .collect();
            let mut text = format!(
                "reduced: {} codewords on {} neurons\n{}",
                reduced.len(),
                reduced.universe().len(),
                serialize_json(&reduced)
            );
            for r in &log {
                match &r.reason {
                    RemovalReason::Trivial => {
                        let _ = write!(text, "\nremoved {} (trivial)", r.label);
                    }
                    RemovalReason::RedundantTo(sigma) => {
                        let _ = write!(
                            text,
                            "\nremoved {} (redundant to {{{}}})",
                            r.label,
                            sigma.join(",")
                        );
                    }
                }
            }
            Ok(Report::ok(
                json!({
                    "command": "reduce",
                    "neurons": reduced.universe().labels(),
                    "codewords": words_json(&reduced, reduced.codewords()),
                    "removals": log_json,
                }),
                text,
                serialize_json(&reduced),
            ))
        }
        Command::Geom { geom } => dispatch_geom(geom),
        Command::Cert { cert } => dispatch_cert(cert, walk_bound),
        Command::Report { name } => {
            let entry = registry(name).map_err(CliError::usage)?;
            let code = &entry.code;
            let graph = codeword_graph(code);
            let maximal = code.maximal_codewords();
            let complete = code.is_intersection_complete();
            let sunflower = code.is_sunflower_code();
            let cert_report = builtin_certificates()
                .remove(name)
                .map(|cert| verify_certificate(code, &cert, VerifyOptions { walk_bound }))
                .transpose()
                .map_err(CliError::usage)?;
            let ok = cert_report.as_ref().is_none_or(|r| r.all_passed);
            let mut text = format!(
                "report for {}\n  codewords: {}\n  neurons: {}\n  graph: {} vertices, {} edges\n  maximal codewords ({}): {}\n  intersection complete: {}\n  sunflower: {}",
                entry.name,
                code.len(),
                code.universe().len(),
                graph.vertex_count(),
                graph.edge_count(),
                maximal.len(),
                words_text(code, &maximal),
                complete,
                sunflower,
            );
            for m in &entry.metadata {
                let _ = write!(text, "\n  {} = {} ({})", m.fact, m.value, m.source);
            }
            match &cert_report {
                Some(r) => {
                    let _ = write!(text, "\n  certificate:\n{}", cert_report_text(r));
                }
                None => {
                    let _ = write!(text, "\n  certificate: none builtin");
                }
            }
            let brief = format!(
                "{}: {} codewords, certificate {}",
                entry.name,
                code.len(),
                match &cert_report {
                    Some(r) if r.all_passed => "passed",
                    Some(_) => "FAILED",
                    None => "n/a",
                }
            );
            let mut report = Report::ok(
                json!({
                    "command": "report",
                    "name": entry.name,
                    "codewords": code.len(),
                    "neurons": code.universe().len(),
                    "graph": {"vertices": graph.vertex_count(), "edges": graph.edge_count()},
                    "maximal_codewords": words_json(code, &maximal),
                    "intersection_complete": complete,
                    "sunflower": sunflower,
                    "metadata": entry.metadata.iter().map(|m| json!({
                        "fact": m.fact, "value": m.value, "source": m.source
                    })).collect::<Vec<_>>(),
                    "certificate": cert_report.as_ref().map(cert_report_json),
                }),
                text,
                brief,
            );
            report.ok = ok;
            Ok(report)
        }
    }
}

fn dispatch_geom(command: &GeomCommand) -> Result<Report, CliError> {
    match command {
        GeomCommand::Member { input, point } => {
            let realization = load_realization(input)?;
            let point = parse_point(point)?;
            let word = membership(&realization, &point).map_err(CliError::usage)?;
            let labels: Vec<String> = word
                .indices()
                .map(|i| realization.universe().label(i).to_string())
                .collect();
            Ok(Report::ok(
                json!({"command": "geom member", "codeword": labels}),
                format!(
                    "membership: {}",
                    realization.universe().format_codeword(word)
                ),
                realization.universe().format_codeword(word),
            ))
        }
        GeomCommand::Witnesses {
            realization,
            witnesses,
        } => {
            let r = load_realization(realization)?;
            let claims = parse_witnesses(&r, &read_file(witnesses)?).map_err(CliError::usage)?;
            let report = verify_witnesses(&r, &claims).map_err(CliError::usage)?;
            let entries: Vec<Value> = report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "claimed": r.universe().format_codeword(e.claimed),
                        "point": e.point.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "actual": r.universe().format_codeword(e.actual),
                        "passed": e.passed,
                    })
                })
                .collect();
            let mut text = String::new();
            for e in &report.entries {
                let status = if e.passed { "pass" } else { "FAIL" };
                let _ = writeln!(
                    text,
                    "[{status}] {} at ({})  actual: {}",
                    r.universe().format_codeword(e.claimed),
                    e.point
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    r.universe().format_codeword(e.actual),
                );
            }
            let _ = write!(
                text,
                "witnesses: {}",
                if report.all_passed {
                    "all pass"
                } else {
                    "FAILURES"
                }
            );
            let mut out = Report::ok(
                json!({"command": "geom witnesses", "all_passed": report.all_passed, "entries": entries}),
                text,
                report.all_passed.to_string(),
            );
            out.ok = report.all_passed;
            Ok(out)
        }
        GeomCommand::Code1d { input } => {
            let realization = load_realization(input)?;
            let code = code_of_1d_realization(&realization).map_err(CliError::usage)?;
            Ok(Report::ok(
                json!({
                    "command": "geom code1d",
                    "neurons": code.universe().labels(),
                    "codewords": words_json(&code, code.codewords()),
                }),
                format!(
                    "code: {} codewords on {} neurons\n{}",
                    code.len(),
                    code.universe().len(),
                    serialize_json(&code)
                ),
                serialize_json(&code),
            ))
        }
        GeomCommand::Trace { input, from, to } => {
            let realization = load_realization(input)?;
            let a = parse_point(from)?;
            let b = parse_point(to)?;
            let trace = segment_atom_trace(&realization, &a, &b).map_err(CliError::usage)?;
            let runs: Vec<Value> = trace
                .runs
                .iter()
                .map(|run| {
                    json!({
                        "codeword": realization.universe().format_codeword(run.codeword),
                        "start": run.start.to_string(),
                        "start_closed": run.start_closed,
                        "end": run.end.to_string(),
                        "end_closed": run.end_closed,
                    })
                })
                .collect();
            let mut text = String::new();
            for run in &trace.runs {
                let open = if run.start_closed { '[' } else { '(' };
                let close = if run.end_closed { ']' } else { ')' };
                let _ = writeln!(
                    text,
                    "{open}{}, {}{close}  {}",
                    run.start,
                    run.end,
                    realization.universe().format_codeword(run.codeword)
                );
            }
            let sequence = trace
                .runs
                .iter()
                .map(|r| realization.universe().format_codeword(r.codeword))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = write!(text, "atom sequence: {sequence}");
            Ok(Report::ok(
                json!({"command": "geom trace", "runs": runs}),
                text,
                sequence,
            ))
        }
    }
}

fn dispatch_cert(command: &CertCommand, walk_bound: Option<usize>) -> Result<Report, CliError> {
    match command {
        CertCommand::Verify { code, cert } => {
            let code = load_code(code)?;
            let cert = parse_certificate(&read_file(cert)?).map_err(CliError::usage)?;
            let report = verify_certificate(&code, &cert, VerifyOptions { walk_bound })
                .map_err(CliError::usage)?;
            let mut out = Report::ok(
                json!({"command": "cert verify", "report": cert_report_json(&report)}),
                format!("certificate verification\n{}", cert_report_text(&report)),
                report.all_passed.to_string(),
            );
            out.ok = report.all_passed;
            Ok(out)
        }
        CertCommand::Builtin { name, list } => {
            let certs = builtin_certificates();
            if *list || name.is_none() {
                let names: Vec<String> = certs.keys().cloned().collect();
                return Ok(Report::ok(
                    json!({"command": "cert builtin", "names": names}),
                    names.join("\n"),
                    names.join("\n"),
                ));
            }
            let name = name.as_ref().unwrap();
            let cert = certs
                .get(name)
                .ok_or_else(|| CliError::Usage(format!("no builtin certificate {name:?}")))?;
            let rendered = serde_json::to_string_pretty(cert).expect("certificate serialization");
            Ok(Report::ok(
                serde_json::to_value(cert).expect("certificate serialization"),
                rendered.clone(),
                rendered,
            ))
        }
    }
}
