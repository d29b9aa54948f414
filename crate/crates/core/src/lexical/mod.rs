//! Lexical features: tokenization, TF-IDF over author documents, per-label
//! top terms, coarse POS unigram profiles and mean tweet length.

mod pos;
mod tfidf;

pub use pos::{pos_tokens, pos_unigrams, PosProfile, PosTagger, SuffixRule, Tag, TAGSET};
pub use tfidf::{
    build_vocab, ngrams, tfidf, tfidf_row, top_terms_per_label, LabelTopTerms, TfidfRow, TopTerms,
    VocabParams, Vocabulary,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexicalError {
    #[error("no documents to build a vocabulary from")]
    NoDocuments,
    #[error("every term was removed by the document-frequency cutoffs")]
    EmptyVocabulary,
    #[error("label class {0} has no authors")]
    MissingLabelClass(&'static str),
    #[error("tag resource line {line}: {message}")]
    BadResourceLine { line: usize, message: String },
    #[error("rows and labels differ in length ({rows} vs {labels})")]
    LengthMismatch { rows: usize, labels: usize },
}

/// Lowercases, deletes apostrophes in place (`don't` -> `dont`) and splits on
/// every remaining non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if is_apostrophe(ch) {
            continue;
        }
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            tokens.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

pub(crate) fn is_apostrophe(ch: char) -> bool {
    matches!(ch, '\'' | '\u{2019}' | '\u{2018}' | '`')
}

/// Mean token count over all tweet slots; empty slots count as zero.
pub fn mean_len<S: AsRef<str>>(tweets: &[S]) -> f64 {
    if tweets.is_empty() {
        return 0.0;
    }
    let total: usize = tweets.iter().map(|t| tokenize(t.as_ref()).len()).sum();
    total as f64 / tweets.len() as f64
}
