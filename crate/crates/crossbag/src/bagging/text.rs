//! Text tokenization, dictionary learning, and term counting.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Text processing settings. `n_gram` emits all word m-grams for m up to the
/// given order; `n_char_gram` additionally emits character grams of exactly
/// that length within each token (0 or 1 disables). The term-frequency bounds
/// implement stopping: terms rarer than `min_term_freq` or more frequent than
/// `max_term_freq` in the training corpus are dropped from the dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextConfig {
    pub n_gram: usize,
    pub n_char_gram: usize,
    pub min_term_freq: u64,
    pub max_term_freq: u64,
}

impl Default for TextConfig {
    fn default() -> TextConfig {
        TextConfig {
            n_gram: 1,
            n_char_gram: 0,
            min_term_freq: 1,
            max_term_freq: u64::MAX,
        }
    }
}

/// Lowercase, split on runs of non-alphanumeric characters, and emit all word
/// m-grams for m = 1..=n_gram (joined by single spaces) followed by character
/// n-grams within each token when enabled.
pub fn tokenize(text: &str, cfg: &TextConfig) -> Vec<String> {
    let lower = text.to_lowercase();
    let tokens: Vec<&str> = lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .collect();
    let mut terms = Vec::new();
    for m in 1..=cfg.n_gram.max(1) {
        if m > tokens.len() {
            break;
        }
        for window in tokens.windows(m) {
            terms.push(window.join(" "));
        }
    }
    if cfg.n_char_gram >= 2 {
        for token in &tokens {
            let chars: Vec<char> = token.chars().collect();
            if chars.len() >= cfg.n_char_gram {
                for window in chars.windows(cfg.n_char_gram) {
                    terms.push(window.iter().collect());
                }
            }
        }
    }
    terms
}

/// Ordered set of dictionary terms. Order is descending training frequency
/// with lexicographic tie-break, so output columns are stable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Dictionary {
    pub fn from_terms(terms: Vec<String>) -> Result<Dictionary> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, term) in terms.iter().enumerate() {
            if index.insert(term.clone(), i).is_some() {
                return Err(Error::data(format!("dictionary: duplicate term \"{term}\"")));
            }
        }
        Ok(Dictionary { terms, index })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }
}

/// Count total corpus frequency per term, keep terms inside the stopping
/// bounds, and order them descending by frequency (ties lexicographic).
pub fn build_dictionary(corpus: &[Vec<String>], cfg: &TextConfig) -> Result<Dictionary> {
    if cfg.min_term_freq > cfg.max_term_freq {
        return Err(Error::data(format!(
            "dictionary: minTermFreq {} exceeds maxTermFreq {}",
            cfg.min_term_freq, cfg.max_term_freq
        )));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for doc in corpus {
        for term in doc {
            *counts.entry(term).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, f)| f >= cfg.min_term_freq && f <= cfg.max_term_freq)
        .collect();
    if kept.is_empty() {
        return Err(Error::data(format!(
            "dictionary: no terms survive the frequency bounds \
             (minTermFreq {}, maxTermFreq {}); loosen the thresholds",
            cfg.min_term_freq, cfg.max_term_freq
        )));
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Dictionary::from_terms(kept.into_iter().map(|(t, _)| t.to_string()).collect())
}

/// Occurrence counts of dictionary terms in a token list. Out-of-dictionary
/// tokens are ignored.
pub fn bag_text(tokens: &[String], dict: &Dictionary) -> Vec<f64> {
    let mut tf = vec![0.0; dict.len()];
    for token in tokens {
        if let Some(i) = dict.index_of(token) {
            tf[i] += 1.0;
        }
    }
    tf
}
