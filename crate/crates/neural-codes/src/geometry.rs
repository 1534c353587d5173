//! Exact half-space realizations: membership queries, witness verification,
//! full code extraction in one dimension, and atom traces along segments.
//!
//! Every region is an intersection of rational half-spaces, all strict (open
//! realization) or all non-strict (closed realization). All computation is
//! exact; results are identical across platforms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Code, CodeError, Codeword, NeuronUniverse};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionError { expected: usize, got: usize },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("half-space senses must all match the realization topology")]
    MixedSenses,
    #[error("half-space normal must be nonzero and of the ambient dimension")]
    InvalidHalfSpace,
    #[error("operation requires a one-dimensional realization")]
    NotOneDimensional,
    #[error("malformed realization input: {0}")]
    Format(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `normal . x < offset`
    Strict,
    /// `normal . x <= offset`
    NonStrict,
}

impl Topology {
    pub fn sense(self) -> Sense {
        match self {
            Topology::Open => Sense::Strict,
            Topology::Closed => Sense::NonStrict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    pub sense: Sense,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl HalfSpace {
    pub fn contains(&self, point: &[Rational]) -> bool {
        let value = dot(&self.normal, point);
        match self.sense {
            Sense::Strict => value < self.offset,
            Sense::NonStrict => value <= self.offset,
        }
    }
}

/// A labeled convex region: the intersection of finitely many half-spaces.
/// An empty list is the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexRegion {
    pub label: String,
    pub halfspaces: Vec<HalfSpace>,
}

impl ConvexRegion {
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(point))
    }
}

/// A collection of labeled convex regions, uniformly open or closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    dimension: usize,
    topology: Topology,
    regions: Vec<ConvexRegion>,
    universe: NeuronUniverse,
}

impl Realization {
    pub fn new(
        dimension: usize,
        topology: Topology,
        regions: Vec<ConvexRegion>,
    ) -> Result<Self, GeometryError> {
        if dimension == 0 {
            return Err(GeometryError::Format(
                "dimension must be positive".to_string(),
            ));
        }
        for region in &regions {
            for h in &region.halfspaces {
                if h.normal.len() != dimension || h.normal.iter().all(Rational::is_zero) {
                    return Err(GeometryError::InvalidHalfSpace);
                }
                if h.sense != topology.sense() {
                    return Err(GeometryError::MixedSenses);
                }
            }
        }
        let universe = NeuronUniverse::new(regions.iter().map(|r| r.label.clone()))?;
        Ok(Realization {
            dimension,
            topology,
            regions,
            universe,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn regions(&self) -> &[ConvexRegion] {
        &self.regions
    }

    /// Universe formed by the region labels, in declaration order.
    pub fn universe(&self) -> &NeuronUniverse {
        &self.universe
    }

    fn check_point(&self, point: &[Rational]) -> Result<(), GeometryError> {
        if point.len() != self.dimension {
            return Err(GeometryError::DimensionError {
                expected: self.dimension,
                got: point.len(),
            });
        }
        Ok(())
    }
}

/// The exact membership pattern of a point: which labeled regions contain it.
pub fn membership(r: &Realization, point: &[Rational]) -> Result<Codeword, GeometryError> {
    r.check_point(point)?;
    Ok(Codeword::from_indices(
        r.regions
            .iter()
            .enumerate()
            .filter(|(_, region)| region.contains(point))
            .map(|(i, _)| i),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub claimed: Codeword,
    pub point: Vec<Rational>,
    pub actual: Codeword,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub entries: Vec<WitnessEntry>,
    pub all_passed: bool,
}

/// Checks each claimed (codeword, point) pair by exact membership. Passing
/// proves the realization's code contains the claimed codewords; it says
/// nothing about codewords not claimed.
pub fn verify_witnesses(
    r: &Realization,
    claims: &[(Codeword, Vec<Rational>)],
) -> Result<WitnessReport, GeometryError> {
    let mut entries = Vec::with_capacity(claims.len());
    for (claimed, point) in claims {
        let actual = membership(r, point)?;
        entries.push(WitnessEntry {
            claimed: *claimed,
            point: point.clone(),
            actual,
            passed: actual == *claimed,
        });
    }
    let all_passed = entries.iter().all(|e| e.passed);
    Ok(WitnessReport {
        entries,
        all_passed,
    })
}

/// In one dimension the full code is computable exactly: collect every
/// half-space boundary as a breakpoint, then evaluate membership at each
/// breakpoint, between consecutive breakpoints, and on both unbounded rays.
pub fn code_of_1d_realization(r: &Realization) -> Result<Code, GeometryError> {
    if r.dimension != 1 {
        return Err(GeometryError::NotOneDimensional);
    }
    let mut breakpoints: Vec<Rational> = Vec::new();
    for region in &r.regions {
        for h in &region.halfspaces {
            breakpoints.push(&h.offset / &h.normal[0]);
        }
    }
    breakpoints.sort();
    breakpoints.dedup();

    let mut samples: Vec<Rational> = Vec::new();
    if breakpoints.is_empty() {
        samples.push(Rational::zero());
    } else {
        let one = Rational::one();
        samples.push(&breakpoints[0] - &one);
        for (i, b) in breakpoints.iter().enumerate() {
            samples.push(b.clone());
            if let Some(next) = breakpoints.get(i + 1) {
                samples.push(&(b + next) / &Rational::from_integer(2));
            }
        }
        samples.push(breakpoints.last().unwrap() + &one);
    }

    let mut words = Vec::with_capacity(samples.len());
    for s in samples {
        words.push(membership(r, &[s])?);
    }
    Ok(Code::new(r.universe.clone(), words)?)
}

/// One maximal constant-membership stretch of a traced segment, as an
/// interval of the segment parameter in `[0, 1]`. Degenerate intervals
/// (single parameter) occur where a pattern holds only at a breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub codeword: Codeword,
    pub start: Rational,
    pub start_closed: bool,
    pub end: Rational,
    pub end_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTrace {
    pub start: Vec<Rational>,
    pub end: Vec<Rational>,
    /// Consecutive runs have distinct codewords; the intervals partition
    /// `[0, 1]`.
    pub runs: Vec<Run>,
}

impl AtomTrace {
    pub fn codeword_sequence(&self) -> Vec<Codeword> {
        self.runs.iter().map(|r| r.codeword).collect()
    }
}

/// Exact atom trace along the segment from `a` to `b`: computes every
/// parameter where the segment crosses a half-space boundary, evaluates
/// membership at breakpoints and between them, and merges equal neighbors.
pub fn segment_atom_trace(
    r: &Realization,
    a: &[Rational],
    b: &[Rational],
) -> Result<AtomTrace, GeometryError> {
    r.check_point(a)?;
    r.check_point(b)?;
    if a == b {
        return Err(GeometryError::DegenerateSegment);
    }
    let direction: Vec<Rational> = a.iter().zip(b).map(|(x, y)| y - x).collect();

    let zero = Rational::zero();
    let one = Rational::one();
    let mut params: Vec<Rational> = vec![zero.clone(), one.clone()];
    for region in &r.regions {
        for h in &region.halfspaces {
            let slope = dot(&h.normal, &direction);
            if slope.is_zero() {
                continue;
            }
            let t = &(&h.offset - &dot(&h.normal, a)) / &slope;
            if t > zero && t < one {
                params.push(t);
            }
        }
    }
    params.sort();
    params.dedup();

    let at = |t: &Rational| -> Vec<Rational> {
        a.iter()
            .zip(&direction)
            .map(|(x, d)| x + &(t * d))
            .collect()
    };

    // Alternate point samples (degenerate intervals at breakpoints) with
    // open-interval samples (midpoints), then merge equal neighbors.
    struct Piece {
        word: Codeword,
        start: Rational,
        start_closed: bool,
        end: Rational,
        end_closed: bool,
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for (i, t) in params.iter().enumerate() {
        let word = membership(r, &at(t))?;
        pieces.push(Piece {
            word,
            start: t.clone(),
            start_closed: true,
            end: t.clone(),
            end_closed: true,
        });
        if let Some(next) = params.get(i + 1) {
            let mid = &(t + next) / &Rational::from_integer(2);
            let word = membership(r, &at(&mid))?;
            pieces.push(Piece {
                word,
                start: t.clone(),
                start_closed: false,
                end: next.clone(),
                end_closed: false,
            });
        }
    }

    let mut runs: Vec<Run> = Vec::new();
    for piece in pieces {
        match runs.last_mut() {
            Some(last) if last.codeword == piece.word => {
                last.end = piece.end;
                last.end_closed = piece.end_closed;
            }
            _ => runs.push(Run {
                codeword: piece.word,
                start: piece.start,
                start_closed: piece.start_closed,
                end: piece.end,
                end_closed: piece.end_closed,
            }),
        }
    }
    Ok(AtomTrace {
        start: a.to_vec(),
        end: b.to_vec(),
        runs,
    })
}

/// Traces many segments; distinct segments are independent, so this runs
/// concurrently under the `parallel` feature with order preserved.
pub fn trace_batch(
    r: &Realization,
    segments: &[(Vec<Rational>, Vec<Rational>)],
) -> Result<Vec<AtomTrace>, GeometryError> {
    let results =
        crate::exec::map_collect(segments.to_vec(), |(a, b)| segment_atom_trace(r, &a, &b));
    results.into_iter().collect()
}

/// Always-sequential variant of [`trace_batch`] for benches and tests.
pub fn trace_batch_seq(
    r: &Realization,
    segments: &[(Vec<Rational>, Vec<Rational>)],
) -> Result<Vec<AtomTrace>, GeometryError> {
    segments
        .iter()
        .map(|(a, b)| segment_atom_trace(r, a, b))
        .collect()
}

// JSON shapes. Half-space senses are not serialized; they derive from the
// realization topology, so mixed senses cannot be expressed in a file.

#[derive(Debug, Serialize, Deserialize)]
struct HalfSpaceJson {
    normal: Vec<Rational>,
    offset: Rational,
}

#[derive(Debug, Serialize, Deserialize)]
struct RegionJson {
    label: String,
    halfspaces: Vec<HalfSpaceJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RealizationJson {
    dimension: usize,
    topology: Topology,
    regions: Vec<RegionJson>,
}

pub fn parse_realization(input: &str) -> Result<Realization, GeometryError> {
    let json: RealizationJson =
        serde_json::from_str(input).map_err(|e| GeometryError::Format(e.to_string()))?;
    let sense = json.topology.sense();
    let regions = json
        .regions
        .into_iter()
        .map(|r| ConvexRegion {
            label: r.label,
            halfspaces: r
                .halfspaces
                .into_iter()
                .map(|h| HalfSpace {
                    normal: h.normal,
                    offset: h.offset,
                    sense,
                })
                .collect(),
        })
        .collect();
    Realization::new(json.dimension, json.topology, regions)
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessClaimJson {
    codeword: Vec<String>,
    point: Vec<Rational>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessFileJson {
    claims: Vec<WitnessClaimJson>,
}

/// Parses a witness file against a realization's universe.
pub fn parse_witnesses(
    r: &Realization,
    input: &str,
) -> Result<Vec<(Codeword, Vec<Rational>)>, GeometryError> {
    let json: WitnessFileJson =
        serde_json::from_str(input).map_err(|e| GeometryError::Format(e.to_string()))?;
    json.claims
        .into_iter()
        .map(|c| {
            let word = r
                .universe
                .codeword_from_labels(c.codeword.iter().map(String::as_str))?;
            Ok((word, c.point))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(label: &str, lo: (i64, i64), hi: (i64, i64)) -> ConvexRegion {
        // lo < x < hi as two strict half-spaces.
        ConvexRegion {
            label: label.to_string(),
            halfspaces: vec![
                HalfSpace {
                    normal: vec![Rational::from_integer(-1)],
                    offset: -Rational::new(lo.0, lo.1),
                    sense: Sense::Strict,
                },
                HalfSpace {
                    normal: vec![Rational::from_integer(1)],
                    offset: Rational::new(hi.0, hi.1),
                    sense: Sense::Strict,
                },
            ],
        }
    }

    fn neg(r: Rational) -> Rational {
        -&r
    }

    fn p1_fixture() -> Realization {
        Realization::new(
            1,
            Topology::Open,
            vec![
                interval("1", (-2, 1), (-1, 2)),
                interval("2", (3, 2), (3, 1)),
                interval("1bar", (0, 1), (2, 1)),
                interval("2bar", (-1, 1), (1, 1)),
                interval("3bar", (0, 1), (1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn membership_at_one_half() {
        let r = p1_fixture();
        let w = membership(&r, &[Rational::new(1, 2)]).unwrap();
        assert_eq!(
            w,
            r.universe()
                .codeword_from_labels(["1bar", "2bar", "3bar"])
                .unwrap()
        );
    }

    #[test]
    fn whole_space_region_contains_everything() {
        let r = Realization::new(
            2,
            Topology::Open,
            vec![ConvexRegion {
                label: "1".to_string(),
                halfspaces: vec![],
            }],
        )
        .unwrap();
        let point = vec![Rational::from_integer(100), Rational::from_integer(-100)];
        let w = membership(&r, &point).unwrap();
        assert_eq!(w, r.universe().codeword_from_labels(["1"]).unwrap());
    }

    #[test]
    fn strict_boundary_is_excluded_nonstrict_included() {
        let open = Realization::new(
            1,
            Topology::Open,
            vec![ConvexRegion {
                label: "1".to_string(),
                halfspaces: vec![HalfSpace {
                    normal: vec![Rational::one()],
                    offset: Rational::zero(),
                    sense: Sense::Strict,
                }],
            }],
        )
        .unwrap();
        let at_zero = membership(&open, &[Rational::zero()]).unwrap();
        assert!(at_zero.is_empty());

        let closed = Realization::new(
            1,
            Topology::Closed,
            vec![ConvexRegion {
                label: "1".to_string(),
                halfspaces: vec![HalfSpace {
                    normal: vec![Rational::one()],
                    offset: Rational::zero(),
                    sense: Sense::NonStrict,
                }],
            }],
        )
        .unwrap();
        let at_zero = membership(&closed, &[Rational::zero()]).unwrap();
        assert!(!at_zero.is_empty());
    }

    #[test]
    fn mixed_senses_rejected() {
        let result = Realization::new(
            1,
            Topology::Open,
            vec![ConvexRegion {
                label: "1".to_string(),
                halfspaces: vec![HalfSpace {
                    normal: vec![Rational::one()],
                    offset: Rational::zero(),
                    sense: Sense::NonStrict,
                }],
            }],
        );
        assert_eq!(result.unwrap_err(), GeometryError::MixedSenses);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = p1_fixture();
        assert!(matches!(
            membership(&r, &[Rational::zero(), Rational::zero()]),
            Err(GeometryError::DimensionError {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn empty_realization_code_is_just_the_empty_codeword() {
        let r = Realization::new(1, Topology::Open, vec![]).unwrap();
        let code = code_of_1d_realization(&r).unwrap();
        assert_eq!(code.len(), 1);
        assert_eq!(code.codewords(), &[Codeword::EMPTY]);
    }

    #[test]
    fn single_interval_code() {
        let r = Realization::new(1, Topology::Open, vec![interval("1", (0, 1), (1, 1))]).unwrap();
        let code = code_of_1d_realization(&r).unwrap();
        let w1 = r.universe().codeword_from_labels(["1"]).unwrap();
        assert_eq!(code.codewords(), &[Codeword::EMPTY, w1]);
    }

    #[test]
    fn fixture_trace_runs() {
        let r = p1_fixture();
        let trace =
            segment_atom_trace(&r, &[Rational::new(-3, 2)], &[Rational::new(1, 2)]).unwrap();
        let u = r.universe();
        let expect = vec![
            u.codeword_from_labels(["1"]).unwrap(),
            u.codeword_from_labels(["1", "2bar"]).unwrap(),
            u.codeword_from_labels(["2bar"]).unwrap(),
            u.codeword_from_labels(["1bar", "2bar", "3bar"]).unwrap(),
        ];
        assert_eq!(trace.codeword_sequence(), expect);
        // Breakpoints at x = -1, -1/2, 0 map to parameters 1/4, 1/2, 3/4.
        assert_eq!(trace.runs[0].start, Rational::zero());
        assert!(trace.runs[0].start_closed);
        assert_eq!(trace.runs[0].end, Rational::new(1, 4));
        assert!(trace.runs[0].end_closed);
        assert_eq!(trace.runs[1].start, Rational::new(1, 4));
        assert!(!trace.runs[1].start_closed);
        assert_eq!(trace.runs[1].end, Rational::new(1, 2));
        assert!(!trace.runs[1].end_closed);
        assert_eq!(trace.runs[2].start, Rational::new(1, 2));
        assert!(trace.runs[2].start_closed);
        assert_eq!(trace.runs[2].end, Rational::new(3, 4));
        assert!(trace.runs[2].end_closed);
        assert_eq!(trace.runs[3].end, Rational::one());
        assert!(trace.runs[3].end_closed);
    }

    #[test]
    fn segment_inside_one_atom_is_a_single_run() {
        let r = p1_fixture();
        let trace = segment_atom_trace(&r, &[Rational::new(1, 4)], &[Rational::new(1, 2)]).unwrap();
        assert_eq!(trace.runs.len(), 1);
        assert!(trace.runs[0].start_closed && trace.runs[0].end_closed);
    }

    #[test]
    fn degenerate_segment_is_an_error() {
        let r = p1_fixture();
        let p = vec![Rational::zero()];
        assert_eq!(
            segment_atom_trace(&r, &p, &p).unwrap_err(),
            GeometryError::DegenerateSegment
        );
    }

    #[test]
    fn reversed_segment_reverses_runs() {
        let r = p1_fixture();
        let a = vec![Rational::new(-3, 2)];
        let b = vec![Rational::new(1, 2)];
        let fwd = segment_atom_trace(&r, &a, &b).unwrap();
        let rev = segment_atom_trace(&r, &b, &a).unwrap();
        let mut mirrored: Vec<Run> = rev
            .runs
            .iter()
            .map(|run| Run {
                codeword: run.codeword,
                start: &Rational::one() - &run.end,
                start_closed: run.end_closed,
                end: &Rational::one() - &run.start,
                end_closed: run.start_closed,
            })
            .collect();
        mirrored.reverse();
        assert_eq!(fwd.runs, mirrored);
    }

    #[test]
    fn closed_realization_captures_degenerate_runs() {
        // [0,1] and [1,2]: the pattern {1,2} holds only at x = 1.
        let make = |label: &str, lo: i64, hi: i64| ConvexRegion {
            label: label.to_string(),
            halfspaces: vec![
                HalfSpace {
                    normal: vec![Rational::from_integer(-1)],
                    offset: Rational::from_integer(-lo),
                    sense: Sense::NonStrict,
                },
                HalfSpace {
                    normal: vec![Rational::from_integer(1)],
                    offset: Rational::from_integer(hi),
                    sense: Sense::NonStrict,
                },
            ],
        };
        let r =
            Realization::new(1, Topology::Closed, vec![make("1", 0, 1), make("2", 1, 2)]).unwrap();
        let trace = segment_atom_trace(&r, &[Rational::new(1, 2)], &[Rational::new(3, 2)]).unwrap();
        let u = r.universe();
        assert_eq!(
            trace.codeword_sequence(),
            vec![
                u.codeword_from_labels(["1"]).unwrap(),
                u.codeword_from_labels(["1", "2"]).unwrap(),
                u.codeword_from_labels(["2"]).unwrap(),
            ]
        );
        let mid = &trace.runs[1];
        assert_eq!(mid.start, mid.end);
        assert!(mid.start_closed && mid.end_closed);
    }

    #[test]
    fn witness_verification_reports_mismatch() {
        let r = p1_fixture();
        let u = r.universe();
        let good = (
            u.codeword_from_labels(["1"]).unwrap(),
            vec![Rational::new(-3, 2)],
        );
        let bad = (
            u.codeword_from_labels(["2"]).unwrap(),
            vec![Rational::new(-3, 2)],
        );
        let report = verify_witnesses(&r, &[good, bad]).unwrap();
        assert!(!report.all_passed);
        assert!(report.entries[0].passed);
        assert!(!report.entries[1].passed);
        let empty = verify_witnesses(&r, &[]).unwrap();
        assert!(empty.all_passed);
    }

    #[test]
    fn fixture_parses_from_spec_json_shape() {
        let json = r#"{
            "dimension": 1,
            "topology": "open",
            "regions": [
                {"label": "1", "halfspaces": [
                    {"normal": ["1"], "offset": "-1/2"},
                    {"normal": ["-1"], "offset": "2"}
                ]}
            ]
        }"#;
        let r = parse_realization(json).unwrap();
        assert_eq!(r.dimension(), 1);
        let w = membership(&r, &[neg(Rational::one())]).unwrap();
        assert_eq!(w, r.universe().codeword_from_labels(["1"]).unwrap());
    }
}
