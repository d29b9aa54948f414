use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::LexicalError;
use crate::corpus::Label;

/// N-gram range and document-frequency cutoffs (fractions of the document count,
/// both inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VocabParams {
    pub ngram_range: (usize, usize),
    pub min_df: f64,
    pub max_df: f64,
}

impl Default for VocabParams {
    fn default() -> Self {
        VocabParams {
            ngram_range: (1, 2),
            min_df: 0.05,
            max_df: 0.95,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    df: Vec<usize>,
    document_count: usize,
    params: VocabParams,
}

/// Term -> column index, sorted lexicographically, with the document frequency
/// of every surviving term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<usize>,
    document_count: usize,
    params: VocabParams,
    index: HashMap<String, usize>,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        let index = r
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            terms: r.terms,
            df: r.df,
            document_count: r.document_count,
            params: r.params,
            index,
        }
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            terms: v.terms,
            df: v.df,
            document_count: v.document_count,
            params: v.params,
        }
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn df(&self, idx: usize) -> usize {
        self.df[idx]
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn params(&self) -> VocabParams {
        self.params
    }

    /// Smoothed inverse document frequency `ln((1 + N) / (1 + df)) + 1`.
    pub fn idf(&self, idx: usize) -> f64 {
        let n = self.document_count as f64;
        ((1.0 + n) / (1.0 + self.df[idx] as f64)).ln() + 1.0
    }

    /// Number of words in the term (1 for unigrams, 2 for bigrams...).
    pub fn order(&self, idx: usize) -> usize {
        self.terms[idx].split(' ').count()
    }
}

/// N-grams of one tweet's tokens, joined by single spaces. N-grams never cross
/// tweet boundaries.
pub fn ngrams(tokens: &[String], range: (usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.0.max(1)..=range.1 {
        if tokens.len() < n {
            break;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

fn in_df_bounds(df: usize, n: usize, params: &VocabParams) -> bool {
    const EPS: f64 = 1e-12;
    let frac = df as f64 / n as f64;
    frac + EPS >= params.min_df && frac <= params.max_df + EPS
}

/// Builds the vocabulary from author documents (each a list of tokenized tweets).
/// Document frequency counts author documents containing the term at least once.
pub fn build_vocab(
    docs: &[Vec<Vec<String>>],
    params: VocabParams,
) -> Result<Vocabulary, LexicalError> {
    if docs.is_empty() {
        return Err(LexicalError::NoDocuments);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let unique: BTreeSet<String> = doc
            .iter()
            .flat_map(|tweet| ngrams(tweet, params.ngram_range))
            .collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let n = docs.len();
    let (terms, dfs): (Vec<String>, Vec<usize>) = df
        .into_iter()
        .filter(|&(_, d)| in_df_bounds(d, n, &params))
        .unzip();
    if terms.is_empty() {
        return Err(LexicalError::EmptyVocabulary);
    }
    Ok(VocabularyRepr {
        terms,
        df: dfs,
        document_count: n,
        params,
    }
    .into())
}

/// Sparse L2-normalized TF-IDF row; weights sorted by column index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfRow {
    pub author_id: String,
    pub weights: Vec<(usize, f64)>,
}

impl TfidfRow {
    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        for &(i, w) in &self.weights {
            v[i] = w;
        }
        v
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }
}

/// Raw count times smoothed idf, L2-normalized. Out-of-vocabulary terms are ignored.
pub fn tfidf_row(author_id: &str, doc: &[Vec<String>], vocab: &Vocabulary) -> TfidfRow {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for tweet in doc {
        for term in ngrams(tweet, vocab.params.ngram_range) {
            if let Some(i) = vocab.index_of(&term) {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
    }
    let mut weights: Vec<(usize, f64)> = counts
        .into_iter()
        .map(|(i, c)| (i, c as f64 * vocab.idf(i)))
        .collect();
    let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in &mut weights {
            *w /= norm;
        }
    }
    TfidfRow {
        author_id: author_id.to_string(),
        weights,
    }
}

pub fn tfidf(ids: &[&str], docs: &[Vec<Vec<String>>], vocab: &Vocabulary) -> Vec<TfidfRow> {
    ids.iter()
        .zip(docs)
        .map(|(id, doc)| tfidf_row(id, doc, vocab))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelTopTerms {
    pub unigrams: Vec<(String, f64)>,
    pub bigrams: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopTerms {
    pub ironic: LabelTopTerms,
    pub non_ironic: LabelTopTerms,
}

/// Ranks terms by summed TF-IDF weight within each label class and keeps the
/// top `n` unigrams and bigrams per class. Ties rank alphabetically.
pub fn top_terms_per_label(
    rows: &[TfidfRow],
    labels: &[Label],
    vocab: &Vocabulary,
    n: usize,
) -> Result<TopTerms, LexicalError> {
    if rows.len() != labels.len() {
        return Err(LexicalError::LengthMismatch {
            rows: rows.len(),
            labels: labels.len(),
        });
    }
    let rank = |class: Label| -> Result<LabelTopTerms, LexicalError> {
        let mut mass = vec![0.0; vocab.len()];
        let mut members = 0;
        for (row, _) in rows.iter().zip(labels).filter(|(_, &l)| l == class) {
            members += 1;
            for &(i, w) in &row.weights {
                mass[i] += w;
            }
        }
        if members == 0 {
            return Err(LexicalError::MissingLabelClass(
                class.code().unwrap_or("unknown"),
            ));
        }
        let top = |order: usize| {
            let mut scored: Vec<(String, f64)> = (0..vocab.len())
                .filter(|&i| vocab.order(i) == order && mass[i] > 0.0)
                .map(|i| (vocab.terms[i].clone(), mass[i]))
                .collect();
            scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            scored.truncate(n);
            scored
        };
        Ok(LabelTopTerms {
            unigrams: top(1),
            bigrams: top(2),
        })
    };
    Ok(TopTerms {
        ironic: rank(Label::Ironic)?,
        non_ironic: rank(Label::NonIronic)?,
    })
}
