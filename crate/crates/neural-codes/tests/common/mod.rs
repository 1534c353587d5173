//! Brute-force oracles and random generators shared by the integration test
//! suites. Everything here is deliberately independent of the library's
//! pruned implementations: paths are enumerated without feasibility pruning
//! and filtered afterwards, trunks are enumerated exhaustively, and walks are
//! grown with a full recheck at every step.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use neural_codes::algebra::CodeMap;
use neural_codes::code::{Code, Codeword, NeuronUniverse};
use neural_codes::graph::{is_feasible_walk, CodewordGraph, FeasibilityReport};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn word(code: &Code, token: &str) -> Codeword {
    code.universe().parse_codeword(token).unwrap()
}

pub fn walk(code: &Code, tokens: &[&str]) -> Vec<Codeword> {
    tokens.iter().map(|t| word(code, t)).collect()
}

pub fn feasible(graph: &CodewordGraph, walk: &[Codeword]) -> bool {
    matches!(
        is_feasible_walk(graph, walk),
        Ok(FeasibilityReport { feasible: true, .. })
    )
}

/// All simple paths from `from` to `to` by plain depth-first search with no
/// feasibility pruning, filtered afterwards by the full walk check.
pub fn brute_force_feasible_paths(
    graph: &CodewordGraph,
    code: &Code,
    from: Codeword,
    to: Codeword,
) -> Vec<Vec<Codeword>> {
    let from_i = code.index_of(from).unwrap();
    let to_i = code.index_of(to).unwrap();
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut path = vec![from_i];
    let mut visited = vec![false; code.len()];
    visited[from_i] = true;
    simple_paths_dfs(graph, to_i, &mut path, &mut visited, &mut all);
    all.into_iter()
        .map(|p| p.into_iter().map(|i| code.codewords()[i]).collect())
        .filter(|p: &Vec<Codeword>| feasible(graph, p))
        .collect()
}

fn simple_paths_dfs(
    graph: &CodewordGraph,
    target: usize,
    path: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    if last == target {
        out.push(path.clone());
        return;
    }
    for &u in graph.neighbors(last) {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        path.push(u);
        simple_paths_dfs(graph, target, path, visited, out);
        path.pop();
        visited[u] = false;
    }
}

/// Every feasible walk from `from` to `to` with at most `bound` vertices,
/// grown breadth-first with a full feasibility recheck on each candidate.
pub fn naive_feasible_walks_up_to(
    graph: &CodewordGraph,
    code: &Code,
    from: Codeword,
    to: Codeword,
    bound: usize,
) -> Vec<Vec<Codeword>> {
    let mut complete = Vec::new();
    let mut frontier: Vec<Vec<Codeword>> = vec![vec![from]];
    if from == to {
        complete.push(vec![from]);
    }
    while let Some(walk) = frontier.pop() {
        if walk.len() >= bound {
            continue;
        }
        let last_i = code.index_of(*walk.last().unwrap()).unwrap();
        for &u in graph.neighbors(last_i) {
            let mut candidate = walk.clone();
            candidate.push(code.codewords()[u]);
            if !feasible(graph, &candidate) {
                continue;
            }
            if code.codewords()[u] == to {
                complete.push(candidate.clone());
            }
            frontier.push(candidate);
        }
    }
    complete.sort();
    complete
}

/// Random code on up to `max_neurons` neurons with up to `max_words` distinct
/// codewords. The empty codeword is included half the time.
pub fn random_code(rng: &mut StdRng, max_neurons: usize, max_words: usize) -> Code {
    let n = rng.gen_range(2..=max_neurons);
    let universe = NeuronUniverse::new((1..=n).map(|i| i.to_string())).unwrap();
    let target = rng.gen_range(1..=max_words);
    let mut masks = BTreeSet::new();
    if rng.gen_bool(0.5) {
        masks.insert(0u64);
    }
    for _ in 0..4 * target {
        if masks.len() >= target {
            break;
        }
        masks.insert(rng.gen_range(0..(1u64 << n)));
    }
    Code::new(universe, masks.into_iter().map(Codeword::from_bits)).unwrap()
}

/// A feasible walk grown by random feasible extensions.
pub fn random_feasible_walk(
    graph: &CodewordGraph,
    code: &Code,
    rng: &mut StdRng,
    max_len: usize,
) -> Vec<Codeword> {
    let start = rng.gen_range(0..code.len());
    let mut walk = vec![code.codewords()[start]];
    for _ in 1..max_len {
        let last_i = code.index_of(*walk.last().unwrap()).unwrap();
        let mut extensions: Vec<Codeword> = graph
            .neighbors(last_i)
            .iter()
            .map(|&u| code.codewords()[u])
            .filter(|w| {
                let mut candidate = walk.clone();
                candidate.push(*w);
                feasible(graph, &candidate)
            })
            .collect();
        if extensions.is_empty() || rng.gen_bool(0.2) {
            break;
        }
        extensions.shuffle(rng);
        walk.push(extensions[0]);
    }
    walk
}

/// Member-index sets of all trunks, by exhaustive enumeration over every
/// subset of the universe. Only usable on small universes.
pub fn trunks_by_enumeration(code: &Code) -> BTreeSet<Vec<usize>> {
    let n = code.universe().len();
    assert!(n <= 20, "enumeration oracle needs a small universe");
    let mut trunks = BTreeSet::new();
    for mask in 0..(1u64 << n) {
        let sigma = Codeword::from_bits(mask);
        trunks.insert(trunk_members(code, sigma));
    }
    trunks.insert(Vec::new());
    trunks
}

/// Same set of trunks, computed as the intersection closure of the
/// single-neuron trunks together with the whole code.
pub fn trunks_by_closure(code: &Code) -> BTreeSet<Vec<usize>> {
    let mut trunks: BTreeSet<Vec<usize>> = BTreeSet::new();
    trunks.insert((0..code.len()).collect());
    for j in 0..code.universe().len() {
        trunks.insert(trunk_members(code, Codeword::from_indices([j])));
    }
    loop {
        let snapshot: Vec<Vec<usize>> = trunks.iter().cloned().collect();
        let before = trunks.len();
        for a in &snapshot {
            for b in &snapshot {
                let inter: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
                trunks.insert(inter);
            }
        }
        if trunks.len() == before {
            break;
        }
    }
    trunks.insert(Vec::new());
    trunks
}

pub fn trunk_members(code: &Code, sigma: Codeword) -> Vec<usize> {
    (0..code.len())
        .filter(|&i| sigma.is_subset_of(code.codewords()[i]))
        .collect()
}

/// Morphism check against the full trunk list of the target: the preimage of
/// every trunk must be a trunk of the source or empty.
pub fn is_morphism_oracle(map: &CodeMap) -> bool {
    let source_trunks = if map.source().universe().len() <= 16 {
        trunks_by_enumeration(map.source())
    } else {
        trunks_by_closure(map.source())
    };
    let target_trunks = if map.target().universe().len() <= 16 {
        trunks_by_enumeration(map.target())
    } else {
        trunks_by_closure(map.target())
    };
    target_trunks.iter().all(|t| {
        let preimage: Vec<usize> = (0..map.source().len())
            .filter(|&si| t.contains(&map.image_of_index(si)))
            .collect();
        preimage.is_empty() || source_trunks.contains(&preimage)
    })
}

/// Exhaustive redundancy/triviality check: true iff some neuron appears in
/// no codeword or has the same trunk as some subset of the other neurons.
pub fn has_trivial_or_redundant_neuron(code: &Code) -> bool {
    let n = code.universe().len();
    assert!(n <= 16, "redundancy oracle needs a small universe");
    for j in 0..n {
        let tk_j = trunk_members(code, Codeword::from_indices([j]));
        if tk_j.is_empty() {
            return true; // trivial
        }
        let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        for mask in 0..(1u64 << others.len()) {
            let sigma = Codeword::from_indices(
                others
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &k)| k),
            );
            if trunk_members(code, sigma) == tk_j {
                return true;
            }
        }
    }
    false
}

/// Random total map between two random small codes.
pub fn random_code_map(rng: &mut StdRng) -> CodeMap {
    let source = random_code(rng, 5, 10);
    let target = if rng.gen_bool(0.3) {
        source.clone()
    } else {
        random_code(rng, 5, 10)
    };
    let assignment: Vec<usize> = (0..source.len())
        .map(|_| rng.gen_range(0..target.len()))
        .collect();
    CodeMap::new(source, target, assignment).unwrap()
}
