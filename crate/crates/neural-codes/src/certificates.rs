//! Machine-checkable certificates for non-convexity arguments.
//!
//! A certificate packages the combinatorial premises a geometric argument
//! rests on: unique feasible paths, order-forced sequences, forced-between
//! vertices, disjoint neuron pairs, and codeword presence or absence. The
//! verifier checks every premise against a code; the geometric conclusion
//! itself stays narrative text and is not machine-checked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Code, Codeword};
use crate::families::{registry, FamilyError};
use crate::format::{code_from_json, CodeJson};
use crate::graph::{
    codeword_graph, default_walk_bound, enumerate_feasible_paths, forced_between, is_order_forced,
    is_strongly_order_forced, CodewordGraph,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    CertificateMalformed(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Reference to a code: a registry name or an inline code object.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeRef {
    Name(String),
    Inline(CodeJson),
}

impl CodeRef {
    pub fn resolve(&self) -> Result<Code, CertificateError> {
        match self {
            CodeRef::Name(name) => Ok(registry(name)?.code),
            CodeRef::Inline(json) => code_from_json(json)
                .map_err(|e| CertificateError::CertificateMalformed(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PremiseSpec {
    /// `path` is the unique feasible path from `from` to `to`; with `strong`
    /// set, additionally the unique feasible walk up to the search bound.
    UniqueFeasiblePath {
        from: Vec<String>,
        to: Vec<String>,
        path: Vec<Vec<String>>,
        #[serde(default)]
        strong: bool,
    },
    OrderForced {
        sequence: Vec<Vec<String>>,
    },
    /// `v` lies on every feasible path from `from` to `to`.
    ForcedBetween {
        v: Vec<String>,
        from: Vec<String>,
        to: Vec<String>,
    },
    /// No codeword contains both neurons.
    DisjointNeurons {
        i: String,
        j: String,
    },
    CodewordPresent {
        codeword: Vec<String>,
    },
    CodewordAbsent {
        codeword: Vec<String>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub code: CodeRef,
    pub premises: Vec<PremiseSpec>,
    /// Free-text statement of the geometric conclusion this certificate
    /// backs; recorded, not machine-checked.
    pub narrative: String,
}

pub fn parse_certificate(input: &str) -> Result<Certificate, CertificateError> {
    serde_json::from_str(input).map_err(|e| CertificateError::CertificateMalformed(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PremiseOutcome {
    pub index: usize,
    pub description: String,
    pub passed: bool,
    /// Witness or explanation on failure.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub narrative: String,
    pub entries: Vec<PremiseOutcome>,
    pub all_passed: bool,
    /// Echoed when any strong uniqueness premise ran a bounded walk search.
    pub walk_bound: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Overrides the default walk bound of twice the codeword count.
    pub walk_bound: Option<usize>,
}

fn resolve_word(code: &Code, labels: &[String]) -> Result<Codeword, CertificateError> {
    code.universe()
        .codeword_from_labels(labels.iter().map(String::as_str))
        .map_err(|e| CertificateError::CertificateMalformed(e.to_string()))
}

fn fmt_walk(code: &Code, walk: &[Codeword]) -> String {
    walk.iter()
        .map(|w| code.format_codeword(*w))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Checks every premise of `cert` against `code`, in premise order.
/// References that do not resolve in the code's universe are an error;
/// premises that resolve but do not hold are reported as failures.
/// Premises are independent and verify concurrently under the `parallel`
/// feature; the report order follows the premise order either way.
pub fn verify_certificate(
    code: &Code,
    cert: &Certificate,
    options: VerifyOptions,
) -> Result<CertificateReport, CertificateError> {
    verify_certificate_impl(code, cert, options, true)
}

/// Always-sequential variant of [`verify_certificate`]; output is identical.
/// Kept public for benchmarks and equivalence tests.
pub fn verify_certificate_seq(
    code: &Code,
    cert: &Certificate,
    options: VerifyOptions,
) -> Result<CertificateReport, CertificateError> {
    verify_certificate_impl(code, cert, options, false)
}

fn verify_certificate_impl(
    code: &Code,
    cert: &Certificate,
    options: VerifyOptions,
    parallel: bool,
) -> Result<CertificateReport, CertificateError> {
    if cert.premises.is_empty() {
        return Err(CertificateError::CertificateMalformed(
            "certificate has no premises".to_string(),
        ));
    }
    if cert.narrative.trim().is_empty() {
        return Err(CertificateError::CertificateMalformed(
            "certificate narrative is empty".to_string(),
        ));
    }
    let graph = codeword_graph(code);
    let bound = options
        .walk_bound
        .unwrap_or_else(|| default_walk_bound(code));

    // Resolve all references up front so malformed certificates error rather
    // than partially verify.
    let resolved: Vec<ResolvedPremise> = cert
        .premises
        .iter()
        .map(|p| resolve_premise(code, p))
        .collect::<Result<_, _>>()?;

    // Premise checks on small codes finish in microseconds; forking only
    // pays off when the underlying path searches are substantial.
    let parallel = parallel && code.len() >= 64;
    let indexed: Vec<(usize, ResolvedPremise)> = resolved.into_iter().enumerate().collect();
    let entries = crate::exec::map_collect_when(parallel, indexed, |(index, premise)| {
        let (passed, detail) = check_premise(code, &graph, &premise, bound);
        PremiseOutcome {
            index,
            description: premise.describe(code),
            passed,
            detail,
        }
    });
    let all_passed = entries.iter().all(|e| e.passed);
    let walk_bound = cert
        .premises
        .iter()
        .any(|p| matches!(p, PremiseSpec::UniqueFeasiblePath { strong: true, .. }))
        .then_some(bound);
    Ok(CertificateReport {
        narrative: cert.narrative.clone(),
        entries,
        all_passed,
        walk_bound,
    })
}

enum ResolvedPremise {
    UniquePath {
        from: Codeword,
        to: Codeword,
        path: Vec<Codeword>,
        strong: bool,
    },
    OrderForced {
        sequence: Vec<Codeword>,
    },
    ForcedBetween {
        v: Codeword,
        from: Codeword,
        to: Codeword,
    },
    DisjointNeurons {
        i: usize,
        j: usize,
    },
    Present {
        codeword: Codeword,
    },
    Absent {
        codeword: Codeword,
    },
}

impl ResolvedPremise {
    fn describe(&self, code: &Code) -> String {
        match self {
            ResolvedPremise::UniquePath {
                from, to, strong, ..
            } => {
                let kind = if *strong {
                    "unique feasible walk"
                } else {
                    "unique feasible path"
                };
                format!(
                    "{kind} {} -> {}",
                    code.format_codeword(*from),
                    code.format_codeword(*to)
                )
            }
            ResolvedPremise::OrderForced { sequence } => {
                format!("order-forced [{}]", fmt_walk(code, sequence))
            }
            ResolvedPremise::ForcedBetween { v, from, to } => format!(
                "{} forced between {} and {}",
                code.format_codeword(*v),
                code.format_codeword(*from),
                code.format_codeword(*to)
            ),
            ResolvedPremise::DisjointNeurons { i, j } => format!(
                "neurons {} and {} disjoint",
                code.universe().label(*i),
                code.universe().label(*j)
            ),
            ResolvedPremise::Present { codeword } => {
                format!("codeword {} present", code.format_codeword(*codeword))
            }
            ResolvedPremise::Absent { codeword } => {
                format!("codeword {} absent", code.format_codeword(*codeword))
            }
        }
    }
}

fn resolve_premise(
    code: &Code,
    premise: &PremiseSpec,
) -> Result<ResolvedPremise, CertificateError> {
    Ok(match premise {
        PremiseSpec::UniqueFeasiblePath {
            from,
            to,
            path,
            strong,
        } => ResolvedPremise::UniquePath {
            from: resolve_word(code, from)?,
            to: resolve_word(code, to)?,
            path: path
                .iter()
                .map(|w| resolve_word(code, w))
                .collect::<Result<_, _>>()?,
            strong: *strong,
        },
        PremiseSpec::OrderForced { sequence } => {
            if sequence.is_empty() {
                return Err(CertificateError::CertificateMalformed(
                    "order-forced premise with empty sequence".to_string(),
                ));
            }
            ResolvedPremise::OrderForced {
                sequence: sequence
                    .iter()
                    .map(|w| resolve_word(code, w))
                    .collect::<Result<_, _>>()?,
            }
        }
        PremiseSpec::ForcedBetween { v, from, to } => ResolvedPremise::ForcedBetween {
            v: resolve_word(code, v)?,
            from: resolve_word(code, from)?,
            to: resolve_word(code, to)?,
        },
        PremiseSpec::DisjointNeurons { i, j } => {
            let resolve = |label: &String| {
                code.universe().index_of(label).ok_or_else(|| {
                    CertificateError::CertificateMalformed(format!(
                        "unknown neuron label {label:?}"
                    ))
                })
            };
            ResolvedPremise::DisjointNeurons {
                i: resolve(i)?,
                j: resolve(j)?,
            }
        }
        PremiseSpec::CodewordPresent { codeword } => ResolvedPremise::Present {
            codeword: resolve_word(code, codeword)?,
        },
        PremiseSpec::CodewordAbsent { codeword } => ResolvedPremise::Absent {
            codeword: resolve_word(code, codeword)?,
        },
    })
}

fn check_premise(
    code: &Code,
    graph: &CodewordGraph,
    premise: &ResolvedPremise,
    bound: usize,
) -> (bool, Option<String>) {
    match premise {
        ResolvedPremise::UniquePath {
            from,
            to,
            path,
            strong,
        } => {
            if path.first() != Some(from) || path.last() != Some(to) {
                return (
                    false,
                    Some("path endpoints do not match from/to".to_string()),
                );
            }
            let paths = match enumerate_feasible_paths(graph, *from, *to) {
                Ok(paths) => paths,
                Err(e) => return (false, Some(e.to_string())),
            };
            if paths.len() != 1 {
                let detail = paths
                    .iter()
                    .map(|p| p.vertices.clone())
                    .find(|p| p != path)
                    .map(|p| format!("another feasible path exists: {}", fmt_walk(code, &p)))
                    .unwrap_or_else(|| "no feasible path exists".to_string());
                return (false, Some(detail));
            }
            if paths[0].vertices != *path {
                return (
                    false,
                    Some(format!(
                        "the unique feasible path is {}, not the claimed one",
                        fmt_walk(code, &paths[0].vertices)
                    )),
                );
            }
            if *strong {
                match is_strongly_order_forced(graph, path, bound) {
                    Ok(report) if report.strongly_order_forced => (true, None),
                    Ok(report) => (
                        false,
                        report.counterexample.map(|w| {
                            format!("deviating feasible walk: {}", fmt_walk(code, &w.vertices))
                        }),
                    ),
                    Err(e) => (false, Some(e.to_string())),
                }
            } else {
                (true, None)
            }
        }
        ResolvedPremise::OrderForced { sequence } => match is_order_forced(graph, sequence) {
            Ok(true) => (true, None),
            Ok(false) => (
                false,
                Some("a feasible path omits the sequence".to_string()),
            ),
            Err(e) => (false, Some(e.to_string())),
        },
        ResolvedPremise::ForcedBetween { v, from, to } => match forced_between(graph, *from, *to) {
            Ok(forced) => {
                if forced.contains(v) {
                    (true, None)
                } else {
                    (
                        false,
                        Some(format!("forced set is {{{}}}", fmt_walk(code, &forced))),
                    )
                }
            }
            Err(e) => (false, Some(e.to_string())),
        },
        ResolvedPremise::DisjointNeurons { i, j } => {
            let offender = code
                .codewords()
                .iter()
                .find(|w| w.contains_index(*i) && w.contains_index(*j));
            match offender {
                None => (true, None),
                Some(w) => (
                    false,
                    Some(format!(
                        "codeword {} contains both",
                        code.format_codeword(*w)
                    )),
                ),
            }
        }
        ResolvedPremise::Present { codeword } => {
            if code.contains(*codeword) {
                (true, None)
            } else {
                (false, Some("codeword missing".to_string()))
            }
        }
        ResolvedPremise::Absent { codeword } => {
            if !code.contains(*codeword) {
                (true, None)
            } else {
                (false, Some("codeword present".to_string()))
            }
        }
    }
}

fn labels(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn chars(word: &str) -> Vec<String> {
    word.chars().map(|c| c.to_string()).collect()
}

fn unique_path(from: &str, to: &str, path: &[&str]) -> PremiseSpec {
    PremiseSpec::UniqueFeasiblePath {
        from: chars(from),
        to: chars(to),
        path: path.iter().map(|w| chars(w)).collect(),
        strong: false,
    }
}

/// Certificates shipped with the library, keyed by registry code name.
pub fn builtin_certificates() -> BTreeMap<String, Certificate> {
    let mut map = BTreeMap::new();

    map.insert(
        "R".to_string(),
        Certificate {
            code: CodeRef::Name("R".to_string()),
            premises: vec![
                unique_path("12ab", "14ch", &["12ab", "1a", "13ace", "1c", "14ch"]),
                unique_path("12ab", "24dj", &["12ab", "2b", "23bdg", "2d", "24dj"]),
                unique_path(
                    "14ch",
                    "24dj",
                    &["14ch", "4h", "46hi", "4i", "45ij", "4j", "24dj"],
                ),
                unique_path(
                    "13ace",
                    "23bgd",
                    &["13ace", "3e", "35ef", "3f", "36fg", "3g", "23bgd"],
                ),
                unique_path("35ef", "45ij", &["35ef", "5", "45ij"]),
                unique_path("36fg", "46hi", &["36fg", "6", "46hi"]),
                PremiseSpec::DisjointNeurons {
                    i: "5".to_string(),
                    j: "6".to_string(),
                },
            ],
            narrative: "Any convex realization pins every atom into the triangle spanned by \
                        points of the 12ab, 14ch and 24dj atoms; the segments joining the \
                        35ef-45ij and 36fg-46hi atom pairs would then have to cross, yet \
                        neurons 5 and 6 never co-occur."
                .to_string(),
        },
    );

    map.insert(
        "T".to_string(),
        Certificate {
            code: CodeRef::Name("T".to_string()),
            premises: vec![
                unique_path("14a", "16bg", &["14a", "1a", "15ab", "1b", "16bg"]),
                unique_path("25c", "26dgh", &["25c", "2c", "24cd", "2d", "26dgh"]),
                unique_path("34e", "36fh", &["34e", "3e", "35ef", "3f", "36fh"]),
                unique_path("16bg", "36fh", &["16bg", "6g", "26dgh", "6h", "36fh"]),
                PremiseSpec::DisjointNeurons {
                    i: "4".to_string(),
                    j: "5".to_string(),
                },
            ],
            narrative: "The regions of neurons 4 and 5 are disjoint convex sets, so a \
                        hyperplane separates them; order-forcing then exhibits a segment \
                        that would have to cross that hyperplane twice."
                .to_string(),
        },
    );

    map.insert(
        "wheel".to_string(),
        Certificate {
            code: CodeRef::Name("wheel".to_string()),
            premises: vec![
                PremiseSpec::ForcedBetween {
                    v: chars("12"),
                    from: chars("125"),
                    to: chars("123"),
                },
                PremiseSpec::OrderForced {
                    sequence: vec![
                        chars("123"),
                        chars("23"),
                        chars("234"),
                        chars("34"),
                        chars("345"),
                    ],
                },
                PremiseSpec::ForcedBetween {
                    v: chars("123"),
                    from: chars("12"),
                    to: chars("234"),
                },
            ],
            narrative: "In a closed convex realization, a 123 point chosen nearest to the \
                        segment joining the 125 and 345 atoms is beaten by a forced 123 \
                        point on the segment between forced 12 and 234 points, a \
                        contradiction; the code is closed-non-convex while an open \
                        realization by five half-discs exists."
                .to_string(),
        },
    );

    map.insert(
        "example2.8".to_string(),
        Certificate {
            code: CodeRef::Name("example2.8".to_string()),
            premises: vec![PremiseSpec::UniqueFeasiblePath {
                from: chars("145"),
                to: chars("473"),
                path: ["145", "45", "2456", "46", "467", "47", "473"]
                    .iter()
                    .map(|w| chars(w))
                    .collect(),
                strong: true,
            }],
            narrative: "Every codeword on a feasible 145-473 walk must contain neuron 4, \
                        and the codewords containing 4 induce a path in the codeword \
                        graph, so the walk is unique outright."
                .to_string(),
        },
    );

    for n in 1..=5i64 {
        let num = |k: i64| k.to_string();
        let w = |parts: &[i64]| -> Vec<String> { parts.iter().map(|k| num(*k)).collect() };
        let a = n + 5;
        let b = n + 6;
        // Endpoint atoms from the merge argument's case analysis: a point
        // leaving the second-to-last petal sits in the atom of 4(n+5) or of
        // 4(n+4)(n+5) (2456 when n = 1), a point entering the last petal in
        // the atom of 4(n+6) or 34(n+6).
        let x2 = if n == 1 {
            labels(&["2", "4", "5", "6"])
        } else {
            w(&[4, n + 4, a])
        };
        let seg_core = vec![w(&[4, a]), w(&[4, a, b]), w(&[4, b])];
        let mut with_tail = seg_core.clone();
        with_tail.push(w(&[3, 4, b]));
        let mut from_x2 = vec![x2.clone()];
        from_x2.extend(seg_core.iter().cloned());
        let mut from_x2_tail = from_x2.clone();
        from_x2_tail.push(w(&[3, 4, b]));

        let premises = vec![
            PremiseSpec::UniqueFeasiblePath {
                from: w(&[4, a]),
                to: w(&[4, b]),
                path: seg_core,
                strong: false,
            },
            PremiseSpec::UniqueFeasiblePath {
                from: w(&[4, a]),
                to: w(&[3, 4, b]),
                path: with_tail,
                strong: false,
            },
            PremiseSpec::UniqueFeasiblePath {
                from: x2.clone(),
                to: w(&[4, b]),
                path: from_x2,
                strong: false,
            },
            PremiseSpec::UniqueFeasiblePath {
                from: x2,
                to: w(&[3, 4, b]),
                path: from_x2_tail,
                strong: false,
            },
        ];
        map.insert(
            format!("Ln:{n}"),
            Certificate {
                code: CodeRef::Name(format!("Ln:{n}")),
                premises,
                narrative: format!(
                    "Merging the regions of neurons {a} and {b} in a convex realization \
                     stays convex: every segment between the two petals follows the \
                     unique feasible path through codewords containing {a} or {b}, so \
                     the merged realization realizes the previous family member."
                ),
            },
        );
    }

    map
}
