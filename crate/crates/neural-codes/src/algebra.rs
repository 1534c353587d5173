//! Trunks, code morphisms, minors, covered codes, and reduction of codes
//! with trivial or redundant neurons.

use thiserror::Error;

use crate::code::{Code, CodeError, Codeword, NeuronUniverse};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown neuron label: {0:?}")]
    UnknownNeuron(String),
    #[error("malformed code map: {0}")]
    MalformedMap(String),
    #[error("exhaustive minor search is limited to sources with at most {limit} codewords")]
    SourceTooLarge { limit: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// All codewords containing a base set. The empty collection is a valid
/// trunk; `base` is the set that was asked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trunk {
    pub base: Option<Codeword>,
    pub members: Vec<Codeword>,
}

/// `trunk(C, sigma)` = all codewords of `C` containing `sigma`. `sigma` need
/// not itself be a codeword.
pub fn trunk(code: &Code, sigma: Codeword) -> Trunk {
    Trunk {
        base: Some(sigma),
        members: code
            .codewords()
            .iter()
            .copied()
            .filter(|w| sigma.is_subset_of(*w))
            .collect(),
    }
}

/// A total function from the codewords of one code to the codewords of
/// another, stored as an index assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMap {
    source: Code,
    target: Code,
    assignment: Vec<usize>,
}

impl CodeMap {
    pub fn new(source: Code, target: Code, assignment: Vec<usize>) -> Result<Self, AlgebraError> {
        if assignment.len() != source.len() {
            return Err(AlgebraError::MalformedMap(format!(
                "assignment covers {} of {} source codewords",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(bad) = assignment.iter().find(|i| **i >= target.len()) {
            return Err(AlgebraError::MalformedMap(format!(
                "image index {bad} out of range"
            )));
        }
        Ok(CodeMap {
            source,
            target,
            assignment,
        })
    }

    /// Builds a map from explicit codeword pairs; every source codeword must
    /// appear exactly once.
    pub fn from_pairs(
        source: Code,
        target: Code,
        pairs: &[(Codeword, Codeword)],
    ) -> Result<Self, AlgebraError> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (from, to) in pairs {
            let si = source.index_of(*from).ok_or_else(|| {
                AlgebraError::MalformedMap(format!(
                    "{} is not a source codeword",
                    source.format_codeword(*from)
                ))
            })?;
            let ti = target.index_of(*to).ok_or_else(|| {
                AlgebraError::MalformedMap(format!(
                    "{} is not a target codeword",
                    target.format_codeword(*to)
                ))
            })?;
            if assignment[si] != usize::MAX {
                return Err(AlgebraError::MalformedMap(format!(
                    "{} is assigned twice",
                    source.format_codeword(*from)
                )));
            }
            assignment[si] = ti;
        }
        if assignment.contains(&usize::MAX) {
            return Err(AlgebraError::MalformedMap(
                "assignment does not cover every source codeword".to_string(),
            ));
        }
        CodeMap::new(source, target, assignment)
    }

    pub fn identity(code: &Code) -> Self {
        CodeMap {
            source: code.clone(),
            target: code.clone(),
            assignment: (0..code.len()).collect(),
        }
    }

    pub fn source(&self) -> &Code {
        &self.source
    }

    pub fn target(&self) -> &Code {
        &self.target
    }

    pub fn image_of_index(&self, source_index: usize) -> usize {
        self.assignment[source_index]
    }

    pub fn image_of(&self, word: Codeword) -> Option<Codeword> {
        let si = self.source.index_of(word)?;
        Some(self.target.codewords()[self.assignment[si]])
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &i in &self.assignment {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Morphism test via single-neuron trunks of the target: the preimage of
/// every trunk must be a trunk of the source or empty. Checking only the
/// trunks `Tk(j)` suffices because `Tk(sigma)` is the intersection of the
/// `Tk(j)` over `j in sigma`, preimages commute with intersection, and
/// trunks are closed under intersection.
pub fn is_morphism(map: &CodeMap) -> bool {
    let target_universe_len = map.target.universe().len();
    (0..target_universe_len).all(|j| {
        let preimage: Vec<usize> = (0..map.source.len())
            .filter(|&si| map.target.codewords()[map.assignment[si]].contains_index(j))
            .collect();
        is_trunk_of(&map.source, &preimage)
    })
}

/// Is this set of codeword indices a trunk of the code (or empty)?
/// A nonempty set `P` is a trunk iff `P = Tk(intersection of P)`.
fn is_trunk_of(code: &Code, member_indices: &[usize]) -> bool {
    if member_indices.is_empty() {
        return true;
    }
    let mut base = code.universe().full_codeword();
    for &i in member_indices {
        base = base.intersection(code.codewords()[i]);
    }
    let expected: Vec<usize> = (0..code.len())
        .filter(|&i| base.is_subset_of(code.codewords()[i]))
        .collect();
    expected == member_indices
}

/// A minor witness is a surjective morphism onto the target.
pub fn is_minor_witness(map: &CodeMap) -> bool {
    map.is_surjective() && is_morphism(map)
}

fn covered_universe(code: &Code, removed: usize) -> Result<NeuronUniverse, CodeError> {
    let kept: Vec<&String> = code
        .universe()
        .labels()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != removed)
        .map(|(_, l)| l)
        .collect();
    let labels: Vec<String> = kept
        .iter()
        .map(|l| l.to_string())
        .chain(kept.iter().map(|l| format!("{l}bar")))
        .collect();
    NeuronUniverse::new(labels)
}

fn covered_image(code: &Code, removed: usize, word: Codeword) -> Codeword {
    let n = code.universe().len();
    let mut bits = 0u64;
    let mut new_i = 0;
    for old_i in 0..n {
        if old_i == removed {
            continue;
        }
        if word.contains_index(old_i) {
            bits |= 1 << new_i;
            if word.contains_index(removed) {
                bits |= 1 << (new_i + n - 1);
            }
        }
        new_i += 1;
    }
    Codeword::from_bits(bits)
}

/// The covered code for a neuron `i`: each codeword is projected away from
/// `i`, and codewords that contained `i` additionally receive barred copies
/// of their remaining neurons. Barred labels are emitted for every kept
/// neuron even when unused; reduction cleans those up.
pub fn covered_code(code: &Code, neuron: &str) -> Result<Code, AlgebraError> {
    Ok(covering_map(code, neuron)?.target)
}

/// The map realizing [`covered_code`], with the original code as source.
pub fn covering_map(code: &Code, neuron: &str) -> Result<CodeMap, AlgebraError> {
    let removed = code
        .universe()
        .index_of(neuron)
        .ok_or_else(|| AlgebraError::UnknownNeuron(neuron.to_string()))?;
    let universe = covered_universe(code, removed)?;
    let images: Vec<Codeword> = code
        .codewords()
        .iter()
        .map(|w| covered_image(code, removed, *w))
        .collect();
    let target = Code::new(universe, images.iter().copied())?;
    let assignment = images
        .iter()
        .map(|w| target.index_of(*w).expect("image is in the image code"))
        .collect();
    CodeMap::new(code.clone(), target, assignment)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovalReason {
    /// The neuron appeared in no codeword.
    Trivial,
    /// The neuron's trunk equals the trunk of this witness set.
    RedundantTo(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub label: String,
    pub reason: RemovalReason,
}

fn delete_neuron(code: &Code, neuron: usize) -> Code {
    let labels: Vec<String> = code
        .universe()
        .labels()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != neuron)
        .map(|(_, l)| l.clone())
        .collect();
    let universe = NeuronUniverse::new(labels).expect("shrinking a valid universe");
    let words = code.codewords().iter().map(|w| {
        let mut bits = 0u64;
        let mut new_i = 0;
        for old_i in 0..code.universe().len() {
            if old_i == neuron {
                continue;
            }
            if w.contains_index(old_i) {
                bits |= 1 << new_i;
            }
            new_i += 1;
        }
        Codeword::from_bits(bits)
    });
    let words: Vec<Codeword> = words.collect();
    Code::new(universe, words).expect("projection stays within the universe")
}

fn member_indices(code: &Code, base: Codeword) -> Vec<usize> {
    (0..code.len())
        .filter(|&i| base.is_subset_of(code.codewords()[i]))
        .collect()
}

/// Finds the canonically smallest witness set `sigma` (by cardinality, then
/// lexicographically) with `Tk(j) = Tk(sigma)`, if the neuron is redundant.
///
/// Any witness must be a subset of the neurons whose trunks contain `Tk(j)`,
/// so only subsets of that candidate set are enumerated. Redundancy itself
/// is equivalent to the full candidate set being a witness.
fn redundancy_witness(code: &Code, j: usize) -> Option<Vec<usize>> {
    let tk_j = member_indices(code, Codeword::from_indices([j]));
    let candidates: Vec<usize> = (0..code.universe().len())
        .filter(|&k| k != j && tk_j.iter().all(|&i| code.codewords()[i].contains_index(k)))
        .collect();
    let full = Codeword::from_indices(candidates.iter().copied());
    if member_indices(code, full) != tk_j {
        return None;
    }
    // Canonically smallest witness, searched by cardinality then lex order.
    for size in 0..=candidates.len() {
        let mut found = None;
        let mut pick = vec![0usize; size];
        enumerate_combinations(&candidates, 0, 0, &mut pick, &mut |combo| {
            if found.is_none() {
                let sigma = Codeword::from_indices(combo.iter().copied());
                if member_indices(code, sigma) == tk_j {
                    found = Some(combo.to_vec());
                }
            }
        });
        if let Some(w) = found {
            return Some(w);
        }
    }
    None
}

fn enumerate_combinations(
    pool: &[usize],
    start: usize,
    depth: usize,
    pick: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == pick.len() {
        visit(pick);
        return;
    }
    for i in start..pool.len() {
        pick[depth] = pool[i];
        enumerate_combinations(pool, i + 1, depth + 1, pick, visit);
    }
}

/// Removes trivial neurons and redundant neurons until none remain.
/// Each pass removes the smallest-index trivial neuron if any, otherwise the
/// smallest-index redundant neuron with its canonical witness; the removal
/// log records every step.
pub fn reduce_code(code: &Code) -> (Code, Vec<Removal>) {
    let mut current = code.clone();
    let mut log = Vec::new();
    loop {
        let trivial = (0..current.universe().len())
            .find(|&j| !current.codewords().iter().any(|w| w.contains_index(j)));
        if let Some(j) = trivial {
            log.push(Removal {
                label: current.universe().label(j).to_string(),
                reason: RemovalReason::Trivial,
            });
            current = delete_neuron(&current, j);
            continue;
        }
        let redundant = (0..current.universe().len())
            .find_map(|j| redundancy_witness(&current, j).map(|w| (j, w)));
        match redundant {
            Some((j, witness)) => {
                log.push(Removal {
                    label: current.universe().label(j).to_string(),
                    reason: RemovalReason::RedundantTo(
                        witness
                            .iter()
                            .map(|&k| current.universe().label(k).to_string())
                            .collect(),
                    ),
                });
                current = delete_neuron(&current, j);
            }
            None => break,
        }
    }
    (current, log)
}

/// Exhaustive search for a surjective morphism `source -> target`, i.e. a
/// witness that `target` is a minor of `source`. Factorial in the source
/// size, hence the hard cap.
pub const MINOR_SEARCH_LIMIT: usize = 9;

pub fn find_surjective_morphism(
    source: &Code,
    target: &Code,
) -> Result<Option<CodeMap>, AlgebraError> {
    if source.len() > MINOR_SEARCH_LIMIT {
        return Err(AlgebraError::SourceTooLarge {
            limit: MINOR_SEARCH_LIMIT,
        });
    }
    if target.len() > source.len() {
        return Ok(None);
    }
    // Branch on the image of the first codeword; subtrees are independent.
    let first_choices: Vec<usize> = (0..target.len()).collect();
    let found = crate::exec::find_map_first(first_choices, |first| {
        let mut assignment = vec![usize::MAX; source.len()];
        assignment[0] = first;
        search_assignments(source, target, 1, &mut assignment)
    });
    match found {
        Some(assignment) => Ok(Some(CodeMap::new(
            source.clone(),
            target.clone(),
            assignment,
        )?)),
        None => Ok(None),
    }
}

fn search_assignments(
    source: &Code,
    target: &Code,
    depth: usize,
    assignment: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if depth == source.len() {
        let map = CodeMap::new(source.clone(), target.clone(), assignment.clone()).ok()?;
        if is_minor_witness(&map) {
            return Some(assignment.clone());
        }
        return None;
    }
    // Surjectivity must remain achievable with the slots left.
    let mut covered = vec![false; target.len()];
    for &a in assignment[..depth].iter() {
        covered[a] = true;
    }
    let missing = covered.iter().filter(|c| !**c).count();
    if missing > source.len() - depth {
        return None;
    }
    for candidate in 0..target.len() {
        assignment[depth] = candidate;
        if partial_morphism_ok(source, target, &assignment[..=depth]) {
            if let Some(hit) = search_assignments(source, target, depth + 1, assignment) {
                return Some(hit);
            }
        }
    }
    assignment[depth] = usize::MAX;
    None
}

/// Necessary condition on a partial assignment: for every target neuron `j`,
/// the assigned sources mapping into `Tk(j)` must all contain the
/// intersection-closure of that partial preimage.
fn partial_morphism_ok(source: &Code, target: &Code, assigned: &[usize]) -> bool {
    (0..target.universe().len()).all(|j| {
        let mut base = source.universe().full_codeword();
        let mut any = false;
        for (si, &ti) in assigned.iter().enumerate() {
            if target.codewords()[ti].contains_index(j) {
                base = base.intersection(source.codewords()[si]);
                any = true;
            }
        }
        if !any {
            return true;
        }
        assigned.iter().enumerate().all(|(si, &ti)| {
            !base.is_subset_of(source.codewords()[si]) || target.codewords()[ti].contains_index(j)
        })
    })
}

/// Serde shape for map files: source and target codes plus codeword pairs.
pub mod map_json {
    use serde::Deserialize;

    use super::{AlgebraError, CodeMap};
    use crate::certificates::CodeRef;
    use crate::code::Code;

    #[derive(Debug, Deserialize)]
    pub struct MapJson {
        pub source: CodeRef,
        pub target: CodeRef,
        pub assignment: Vec<(Vec<String>, Vec<String>)>,
    }

    pub fn parse_map(input: &str) -> Result<(Code, Code, MapJson), AlgebraError> {
        let json: MapJson =
            serde_json::from_str(input).map_err(|e| AlgebraError::MalformedMap(e.to_string()))?;
        let source = json
            .source
            .resolve()
            .map_err(|e| AlgebraError::MalformedMap(e.to_string()))?;
        let target = json
            .target
            .resolve()
            .map_err(|e| AlgebraError::MalformedMap(e.to_string()))?;
        Ok((source, target, json))
    }

    pub fn build(input: &str) -> Result<CodeMap, AlgebraError> {
        let (source, target, json) = parse_map(input)?;
        let mut pairs = Vec::with_capacity(json.assignment.len());
        for (from, to) in &json.assignment {
            let from = source
                .universe()
                .codeword_from_labels(from.iter().map(String::as_str))?;
            let to = target
                .universe()
                .codeword_from_labels(to.iter().map(String::as_str))?;
            pairs.push((from, to));
        }
        CodeMap::from_pairs(source, target, &pairs)
    }
}
