//! Parsing and serialization of codes.
//!
//! Two formats are supported:
//!
//! * JSON: `{"neurons": ["1","2","a"], "codewords": [[], ["1"], ["1","2"]]}`.
//! * Compact text: `1235,1245,125,{}` with one character per neuron label;
//!   only available when every label is a single character. The universe is
//!   the sorted set of characters that appear.
//!
//! Both serializers emit codewords in canonical order, so
//! `parse(serialize(code)) == code` and serialization is idempotent.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::code::{Code, CodeError, Codeword, NeuronUniverse};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeJson {
    pub neurons: Vec<String>,
    pub codewords: Vec<Vec<String>>,
}

/// Parses either format, sniffing JSON by the presence of a `"neurons"` key.
pub fn parse_code(input: &str) -> Result<Code, CodeError> {
    let trimmed = input.trim();
    if trimmed.starts_with('{') && trimmed.contains("\"neurons\"") {
        parse_json(trimmed)
    } else {
        parse_text(trimmed)
    }
}

pub fn parse_json(input: &str) -> Result<Code, CodeError> {
    let json: CodeJson =
        serde_json::from_str(input).map_err(|e| CodeError::Format(e.to_string()))?;
    code_from_json(&json)
}

pub fn code_from_json(json: &CodeJson) -> Result<Code, CodeError> {
    let universe = NeuronUniverse::new(json.neurons.iter().cloned())?;
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(json.codewords.len());
    for labels in &json.codewords {
        let word = universe.codeword_from_labels(labels.iter().map(String::as_str))?;
        if !seen.insert(word.bits()) {
            return Err(CodeError::DuplicateCodeword(universe.format_codeword(word)));
        }
        words.push(word);
    }
    Code::new(universe, words)
}

pub fn parse_text(input: &str) -> Result<Code, CodeError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(CodeError::Format("empty code input".to_string()));
    }
    let tokens: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    let mut labels = BTreeSet::new();
    for token in &tokens {
        if token.is_empty() {
            return Err(CodeError::Format("empty codeword token".to_string()));
        }
        if *token != "{}" {
            labels.extend(token.chars());
        }
    }
    if labels.len() > crate::code::MAX_NEURONS {
        return Err(CodeError::UniverseTooLarge(labels.len()));
    }
    let universe = NeuronUniverse::new(labels.iter().map(|c| c.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let word = if *token == "{}" {
            Codeword::EMPTY
        } else {
            let owned: Vec<String> = token.chars().map(|c| c.to_string()).collect();
            universe.codeword_from_labels(owned.iter().map(String::as_str))?
        };
        if !seen.insert(word.bits()) {
            return Err(CodeError::DuplicateCodeword(token.to_string()));
        }
        words.push(word);
    }
    Code::new(universe, words)
}

pub fn to_json(code: &Code) -> CodeJson {
    CodeJson {
        neurons: code.universe().labels().to_vec(),
        codewords: code
            .codewords()
            .iter()
            .map(|w| {
                w.indices()
                    .map(|i| code.universe().label(i).to_string())
                    .collect()
            })
            .collect(),
    }
}

pub fn serialize_json(code: &Code) -> String {
    serde_json::to_string(&to_json(code)).expect("code serialization cannot fail")
}

/// Compact text rendering; fails when some label has more than one character.
pub fn serialize_text(code: &Code) -> Result<String, CodeError> {
    if !code.universe().all_labels_single_char() {
        return Err(CodeError::Format(
            "text format requires single-character labels".to_string(),
        ));
    }
    Ok(code
        .codewords()
        .iter()
        .map(|w| code.universe().format_codeword(*w))
        .collect::<Vec<_>>()
        .join(","))
}
