//! Neurons, codewords, and codes.
//!
//! A code is a finite set of codewords over an ordered universe of neuron
//! labels. Codewords are stored as 64-bit masks, so a universe holds at most
//! 64 neurons. All iteration follows the canonical order (cardinality, then
//! lexicographic on neuron indices), which makes every downstream output
//! deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Hard cap on universe size: codewords are single-word bitsets.
pub const MAX_NEURONS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("duplicate codeword: {0}")]
    DuplicateCodeword(String),
    #[error("unknown neuron label: {0:?}")]
    UnknownNeuron(String),
    #[error("universe has {0} neurons, at most {MAX_NEURONS} are supported")]
    UniverseTooLarge(usize),
    #[error("invalid neuron label: {0:?}")]
    InvalidLabel(String),
    #[error("codeword uses neuron indices outside its universe")]
    CodewordOutOfUniverse,
    #[error("malformed code input: {0}")]
    Format(String),
}

/// Ordered set of distinct neuron labels with label -> index lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronUniverse {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl NeuronUniverse {
    pub fn new<I, S>(labels: I) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_NEURONS {
            return Err(CodeError::UniverseTooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(CodeError::InvalidLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(CodeError::InvalidLabel(format!("duplicate label {label}")));
            }
        }
        Ok(NeuronUniverse { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The codeword containing every neuron of this universe.
    pub fn full_codeword(&self) -> Codeword {
        if self.labels.len() == MAX_NEURONS {
            Codeword(u64::MAX)
        } else {
            Codeword((1u64 << self.labels.len()) - 1)
        }
    }

    pub fn codeword_from_labels<'a, I>(&self, labels: I) -> Result<Codeword, CodeError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = 0u64;
        for label in labels {
            let i = self
                .index_of(label)
                .ok_or_else(|| CodeError::UnknownNeuron(label.to_string()))?;
            bits |= 1 << i;
        }
        Ok(Codeword(bits))
    }

    /// Renders a codeword: concatenated labels when every label is a single
    /// character, dot-separated labels otherwise, `{}` for the empty codeword.
    pub fn format_codeword(&self, word: Codeword) -> String {
        if word.is_empty() {
            return "{}".to_string();
        }
        let parts: Vec<&str> = word.indices().map(|i| self.label(i)).collect();
        if self.all_labels_single_char() {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// Parses the rendering produced by [`format_codeword`]: `{}` is empty,
    /// a token with dots is split on dots, otherwise each character is a label.
    ///
    /// [`format_codeword`]: NeuronUniverse::format_codeword
    pub fn parse_codeword(&self, token: &str) -> Result<Codeword, CodeError> {
        let token = token.trim();
        if token == "{}" {
            return Ok(Codeword::EMPTY);
        }
        if token.is_empty() {
            return Err(CodeError::Format("empty codeword token".to_string()));
        }
        if token.contains('.') {
            self.codeword_from_labels(token.split('.'))
        } else if self.all_labels_single_char() {
            let owned: Vec<String> = token.chars().map(|c| c.to_string()).collect();
            self.codeword_from_labels(owned.iter().map(String::as_str))
        } else {
            // Fall back to treating the whole token as one label.
            self.codeword_from_labels([token])
        }
    }

    pub fn all_labels_single_char(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// A set of neuron indices within some universe, stored as a bitmask.
///
/// Ordering is canonical: smaller cardinality first, then lexicographic on
/// the ascending index sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword(u64);

impl Codeword {
    pub const EMPTY: Codeword = Codeword(0);

    pub fn from_bits(bits: u64) -> Self {
        Codeword(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u64;
        for i in indices {
            debug_assert!(i < MAX_NEURONS);
            bits |= 1 << i;
        }
        Codeword(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains_index(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: Codeword) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset_of(self, other: Codeword) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn intersection(self, other: Codeword) -> Codeword {
        Codeword(self.0 & other.0)
    }

    pub fn union(self, other: Codeword) -> Codeword {
        Codeword(self.0 | other.0)
    }

    pub fn difference(self, other: Codeword) -> Codeword {
        Codeword(self.0 & !other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl Ord for Codeword {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cardinality().cmp(&other.cardinality()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else {
                // Equal cardinality: the word owning the lowest differing
                // index comes first in lexicographic index order.
                let low = diff & diff.wrapping_neg();
                if self.0 & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for Codeword {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A combinatorial neural code: a universe plus a set of distinct codewords
/// kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    universe: NeuronUniverse,
    words: Vec<Codeword>,
}

impl Code {
    /// Builds a code, silently deduplicating and sorting canonically.
    pub fn new<I: IntoIterator<Item = Codeword>>(
        universe: NeuronUniverse,
        words: I,
    ) -> Result<Self, CodeError> {
        let full = universe.full_codeword();
        let mut words: Vec<Codeword> = words.into_iter().collect();
        for w in &words {
            if !w.is_subset_of(full) {
                return Err(CodeError::CodewordOutOfUniverse);
            }
        }
        words.sort();
        words.dedup();
        Ok(Code { universe, words })
    }

    pub fn universe(&self) -> &NeuronUniverse {
        &self.universe
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: Codeword) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    pub fn index_of(&self, word: Codeword) -> Option<usize> {
        self.words.binary_search(&word).ok()
    }

    pub fn format_codeword(&self, word: Codeword) -> String {
        self.universe.format_codeword(word)
    }

    /// Projects every codeword onto the given labels and deduplicates.
    /// The result lives on a fresh universe consisting of exactly `labels`.
    pub fn restrict(&self, labels: &[&str]) -> Result<Code, CodeError> {
        let sub = NeuronUniverse::new(labels.iter().map(|s| s.to_string()))?;
        let mut mask = 0u64;
        for label in labels {
            let i = self
                .universe
                .index_of(label)
                .ok_or_else(|| CodeError::UnknownNeuron(label.to_string()))?;
            mask |= 1 << i;
        }
        let words = self.words.iter().map(|w| {
            let kept = w.bits() & mask;
            let mut bits = 0u64;
            for (new_i, label) in labels.iter().enumerate() {
                let old_i = self.universe.index_of(label).unwrap();
                if kept & (1 << old_i) != 0 {
                    bits |= 1 << new_i;
                }
            }
            Codeword::from_bits(bits)
        });
        let words: Vec<Codeword> = words.collect();
        Code::new(sub, words)
    }

    /// All codewords not strictly contained in another codeword.
    pub fn maximal_codewords(&self) -> Vec<Codeword> {
        self.words
            .iter()
            .copied()
            .filter(|w| !self.words.iter().any(|v| w.is_strict_subset_of(*v)))
            .collect()
    }

    /// True iff the intersection of any two codewords is again a codeword.
    pub fn is_intersection_complete(&self) -> bool {
        let words = &self.words;
        crate::exec::all_indices(words.len(), |i| {
            words[i..]
                .iter()
                .all(|w| self.contains(words[i].intersection(*w)))
        })
    }

    /// True iff the full universe is a codeword and every other codeword has
    /// at most one neuron.
    pub fn is_sunflower_code(&self) -> bool {
        let full = self.universe.full_codeword();
        self.contains(full)
            && self
                .words
                .iter()
                .all(|w| *w == full || w.cardinality() <= 1)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .words
            .iter()
            .map(|w| self.universe.format_codeword(*w))
            .collect();
        write!(f, "{}", rendered.join(","))
    }
}
