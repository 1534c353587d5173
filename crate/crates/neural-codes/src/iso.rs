//! Codeword-set isomorphism: exhaustive label-bijection search with
//! neuron-signature pruning.

use std::collections::BTreeSet;

use crate::code::{Code, Codeword};

/// Searches for a neuron bijection carrying the codeword set of `c` onto the
/// codeword set of `d`. Returns label pairs in universe order of `c`, or
/// `None` when no bijection exists.
///
/// Neurons are tried in universe order and candidate images in universe
/// order, so the returned bijection is the canonically first one.
pub fn is_isomorphic(c: &Code, d: &Code) -> Option<Vec<(String, String)>> {
    let n = c.universe().len();
    if n != d.universe().len() || c.len() != d.len() {
        return None;
    }
    let mut c_cards: Vec<u32> = c.codewords().iter().map(|w| w.cardinality()).collect();
    let mut d_cards: Vec<u32> = d.codewords().iter().map(|w| w.cardinality()).collect();
    c_cards.sort_unstable();
    d_cards.sort_unstable();
    if c_cards != d_cards {
        return None;
    }

    let c_sigs = signatures(c);
    let d_sigs = signatures(d);
    let d_words: BTreeSet<u64> = d.codewords().iter().map(|w| w.bits()).collect();

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(c, &c_sigs, &d_sigs, &d_words, 0, &mut image, &mut used) {
        Some(
            image
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    (
                        c.universe().label(i).to_string(),
                        d.universe().label(j).to_string(),
                    )
                })
                .collect(),
        )
    } else {
        None
    }
}

/// Per-neuron degree signature: the sorted cardinalities of the codewords
/// containing the neuron. Mapped neurons must have equal signatures.
fn signatures(code: &Code) -> Vec<Vec<u32>> {
    (0..code.universe().len())
        .map(|i| {
            let mut sig: Vec<u32> = code
                .codewords()
                .iter()
                .filter(|w| w.contains_index(i))
                .map(|w| w.cardinality())
                .collect();
            sig.sort_unstable();
            sig
        })
        .collect()
}

fn search(
    c: &Code,
    c_sigs: &[Vec<u32>],
    d_sigs: &[Vec<u32>],
    d_words: &BTreeSet<u64>,
    neuron: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = image.len();
    if neuron == n {
        return c.codewords().iter().all(|w| {
            let mapped: u64 = w.indices().map(|i| 1u64 << image[i]).sum();
            d_words.contains(&mapped)
        });
    }
    for candidate in 0..n {
        if used[candidate] || c_sigs[neuron] != d_sigs[candidate] {
            continue;
        }
        image[neuron] = candidate;
        used[candidate] = true;
        if search(c, c_sigs, d_sigs, d_words, neuron + 1, image, used) {
            return true;
        }
        used[candidate] = false;
        image[neuron] = usize::MAX;
    }
    false
}

/// Applies a label bijection to a code; used to validate returned bijections.
pub fn apply_bijection(code: &Code, bijection: &[(String, String)], target: &Code) -> Option<Code> {
    let mut mapped = Vec::with_capacity(code.len());
    for w in code.codewords() {
        let mut bits = 0u64;
        for i in w.indices() {
            let from_label = code.universe().label(i);
            let (_, to_label) = bijection.iter().find(|(a, _)| a == from_label)?;
            bits |= 1 << target.universe().index_of(to_label)?;
        }
        mapped.push(Codeword::from_bits(bits));
    }
    Code::new(target.universe().clone(), mapped).ok()
}
