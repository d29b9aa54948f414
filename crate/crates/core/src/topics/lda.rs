use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TopicError;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    /// Document-topic prior; `None` means `50 / topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaParams {
    pub fn new(topics: usize, seed: u64) -> LdaParams {
        LdaParams {
            topics,
            alpha: None,
            beta: 0.01,
            iterations: 200,
            seed,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics as f64)
    }
}

#[derive(Serialize, Deserialize)]
struct TopicModelRepr {
    topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    vocabulary: Vec<String>,
    topic_totals: Vec<u64>,
    word_topic_counts: Vec<Vec<u32>>,
}

/// Fitted LDA state: word-topic counts (K x V) plus hyperparameters and vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "TopicModelRepr", into = "TopicModelRepr")]
pub struct TopicModel {
    repr_topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    vocabulary: Vec<String>,
    topic_totals: Vec<u64>,
    word_topic_counts: Vec<Vec<u32>>,
    index: HashMap<String, u32>,
    /// Smoothed topic-word distribution, K x V row-major.
    phi: Vec<f64>,
}

impl From<TopicModelRepr> for TopicModel {
    fn from(r: TopicModelRepr) -> Self {
        TopicModel::from_counts(
            r.vocabulary,
            r.word_topic_counts,
            r.alpha,
            r.beta,
            r.seed,
            r.iterations,
        )
    }
}

impl From<TopicModel> for TopicModelRepr {
    fn from(m: TopicModel) -> Self {
        TopicModelRepr {
            topics: m.repr_topics,
            alpha: m.alpha,
            beta: m.beta,
            seed: m.seed,
            iterations: m.iterations,
            vocabulary: m.vocabulary,
            topic_totals: m.topic_totals,
            word_topic_counts: m.word_topic_counts,
        }
    }
}

impl TopicModel {
    /// Builds a model from raw counts; `word_topic_counts[k][w]`.
    pub fn from_counts(
        vocabulary: Vec<String>,
        word_topic_counts: Vec<Vec<u32>>,
        alpha: f64,
        beta: f64,
        seed: u64,
        iterations: usize,
    ) -> TopicModel {
        let k = word_topic_counts.len();
        let v = vocabulary.len();
        let topic_totals: Vec<u64> = word_topic_counts
            .iter()
            .map(|row| row.iter().map(|&c| c as u64).sum())
            .collect();
        let mut phi = vec![0.0; k * v];
        for t in 0..k {
            let denom = topic_totals[t] as f64 + v as f64 * beta;
            for w in 0..v {
                phi[t * v + w] = (word_topic_counts[t][w] as f64 + beta) / denom;
            }
        }
        let index = vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        TopicModel {
            repr_topics: k,
            alpha,
            beta,
            seed,
            iterations,
            vocabulary,
            topic_totals,
            word_topic_counts,
            index,
            phi,
        }
    }

    pub fn topics(&self) -> usize {
        self.repr_topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn word_topic_counts(&self) -> &[Vec<u32>] {
        &self.word_topic_counts
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    pub fn word_id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    /// Smoothed probability of word `w` under topic `k`.
    pub fn phi(&self, k: usize, w: usize) -> f64 {
        self.phi[k * self.vocabulary.len() + w]
    }

    /// The `n` highest-probability words of topic `k` (ties by word index).
    pub fn top_words(&self, k: usize, n: usize) -> Vec<&str> {
        let mut idx: Vec<usize> = (0..self.vocab_size()).collect();
        idx.sort_by(|&a, &b| {
            self.word_topic_counts[k][b]
                .cmp(&self.word_topic_counts[k][a])
                .then(a.cmp(&b))
        });
        idx.into_iter()
            .take(n)
            .map(|i| self.vocabulary[i].as_str())
            .collect()
    }

    fn encode(&self, doc: &[String]) -> Vec<u32> {
        doc.iter().filter_map(|t| self.word_id(t)).collect()
    }
}

/// Collapsed Gibbs sampler state. Exposed so callers can step sweep by sweep.
pub struct GibbsSampler {
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u16>>,
    doc_topic: Vec<Vec<u32>>,
    word_topic: Vec<u32>,
    topic_totals: Vec<u32>,
    vocab: Vec<String>,
    topics: usize,
    alpha: f64,
    beta: f64,
    rng: ChaCha8Rng,
    sweeps: usize,
    params: LdaParams,
    weights: Vec<f64>,
}

impl GibbsSampler {
    pub fn new(docs: &[Vec<String>], params: LdaParams) -> Result<GibbsSampler, TopicError> {
        let k = params.topics;
        if k < 2 {
            return Err(TopicError::TooFewTopics(k));
        }
        let mut vocab: Vec<String> = docs.iter().flatten().cloned().collect();
        vocab.sort();
        vocab.dedup();
        if vocab.is_empty() {
            return Err(TopicError::EmptyCorpus);
        }
        if vocab.len() < k {
            return Err(TopicError::DegenerateVocab {
                vocab: vocab.len(),
                topics: k,
            });
        }
        let index: HashMap<&str, u32> = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i as u32))
            .collect();
        let encoded: Vec<Vec<u32>> = docs
            .iter()
            .map(|d| d.iter().map(|t| index[t.as_str()]).collect())
            .collect();
        let v = vocab.len();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut word_topic = vec![0u32; k * v];
        let mut topic_totals = vec![0u32; k];
        let mut doc_topic = Vec::with_capacity(encoded.len());
        let mut assignments = Vec::with_capacity(encoded.len());
        for doc in &encoded {
            let mut counts = vec![0u32; k];
            let mut z = Vec::with_capacity(doc.len());
            for &w in doc {
                let t = rng.random_range(0..k);
                z.push(t as u16);
                counts[t] += 1;
                word_topic[t * v + w as usize] += 1;
                topic_totals[t] += 1;
            }
            doc_topic.push(counts);
            assignments.push(z);
        }
        Ok(GibbsSampler {
            docs: encoded,
            assignments,
            doc_topic,
            word_topic,
            topic_totals,
            vocab,
            topics: k,
            alpha: params.alpha(),
            beta: params.beta,
            rng,
            sweeps: 0,
            params,
            weights: vec![0.0; k],
        })
    }

    /// One full pass resampling every token's topic.
    pub fn sweep(&mut self) {
        let k = self.topics;
        let v = self.vocab.len();
        let vbeta = v as f64 * self.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i] as usize;
                let old = self.assignments[d][i] as usize;
                self.doc_topic[d][old] -= 1;
                self.word_topic[old * v + w] -= 1;
                self.topic_totals[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let p = (self.doc_topic[d][t] as f64 + self.alpha)
                        * (self.word_topic[t * v + w] as f64 + self.beta)
                        / (self.topic_totals[t] as f64 + vbeta);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.assignments[d][i] = new as u16;
                self.doc_topic[d][new] += 1;
                self.word_topic[new * v + w] += 1;
                self.topic_totals[new] += 1;
            }
        }
        self.sweeps += 1;
    }

    pub fn token_count(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    /// Sum of the word-topic table; equals [`Self::token_count`] after every sweep.
    pub fn assigned_count(&self) -> u64 {
        self.word_topic.iter().map(|&c| c as u64).sum()
    }

    /// Per-topic totals agree with the word-topic table and the doc-topic table.
    pub fn counts_consistent(&self) -> bool {
        let v = self.vocab.len();
        let by_topic = (0..self.topics).all(|t| {
            let row: u64 = self.word_topic[t * v..(t + 1) * v]
                .iter()
                .map(|&c| c as u64)
                .sum();
            let docs: u64 = self.doc_topic.iter().map(|d| d[t] as u64).sum();
            row == self.topic_totals[t] as u64 && docs == row
        });
        by_topic
            && self
                .doc_topic
                .iter()
                .zip(&self.docs)
                .all(|(c, d)| c.iter().map(|&x| x as usize).sum::<usize>() == d.len())
    }

    pub fn into_model(self) -> TopicModel {
        let v = self.vocab.len();
        let counts = (0..self.topics)
            .map(|t| self.word_topic[t * v..(t + 1) * v].to_vec())
            .collect();
        TopicModel::from_counts(
            self.vocab,
            counts,
            self.alpha,
            self.beta,
            self.params.seed,
            self.sweeps,
        )
    }
}

/// Fits LDA with `params.iterations` Gibbs sweeps. Documents are token lists.
pub fn fit_lda(docs: &[Vec<String>], params: LdaParams) -> Result<TopicModel, TopicError> {
    let mut sampler = GibbsSampler::new(docs, params)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}

/// Document-topic mixture for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicAssignment {
    pub theta: Vec<f64>,
    pub argmax_topic: usize,
    pub max_probability: f64,
}

impl TopicAssignment {
    fn from_theta(theta: Vec<f64>) -> TopicAssignment {
        let mut best = 0;
        for (k, &p) in theta.iter().enumerate() {
            if p > theta[best] {
                best = k;
            }
        }
        TopicAssignment {
            max_probability: theta[best],
            argmax_topic: best,
            theta,
        }
    }

    pub fn uniform(topics: usize) -> TopicAssignment {
        TopicAssignment::from_theta(vec![1.0 / topics as f64; topics])
    }
}

fn infer_encoded(model: &TopicModel, doc: &[u32], iterations: usize, seed: u64) -> Vec<f64> {
    let k = model.topics();
    if doc.is_empty() {
        return vec![1.0 / k as f64; k];
    }
    let alpha = model.alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u32; k];
    let mut z: Vec<usize> = doc
        .iter()
        .map(|_| {
            let t = rng.random_range(0..k);
            counts[t] += 1;
            t
        })
        .collect();
    let iterations = iterations.max(1);
    let burn_in = iterations / 2;
    let denom = doc.len() as f64 + k as f64 * alpha;
    let mut theta = vec![0.0; k];
    let mut kept = 0usize;
    let mut cumulative = vec![0.0; k];
    for it in 0..iterations {
        for (i, &w) in doc.iter().enumerate() {
            counts[z[i]] -= 1;
            let mut total = 0.0;
            for t in 0..k {
                total += (counts[t] as f64 + alpha) * model.phi(t, w as usize);
                cumulative[t] = total;
            }
            let u = rng.random::<f64>() * total;
            let new = cumulative.iter().position(|&c| u < c).unwrap_or(k - 1);
            z[i] = new;
            counts[new] += 1;
        }
        if it >= burn_in {
            for t in 0..k {
                theta[t] += (counts[t] as f64 + alpha) / denom;
            }
            kept += 1;
        }
    }
    let sum: f64 = theta.iter().sum();
    debug_assert!(kept > 0);
    theta.iter_mut().for_each(|p| *p /= sum);
    theta
}

/// Seeded Gibbs inference with the word-topic counts held fixed. Documents
/// with no in-vocabulary tokens get the uniform mixture.
pub fn infer(model: &TopicModel, doc: &[String], iterations: usize, seed: u64) -> TopicAssignment {
    let encoded = model.encode(doc);
    TopicAssignment::from_theta(infer_encoded(model, &encoded, iterations, seed))
}

/// `exp(-sum log p(w|d) / N)` with `p(w|d) = sum_k theta(d,k) phi(k,w)`;
/// out-of-vocabulary tokens are skipped. The mixture used for a token is
/// inferred from the document's other half (alternate token positions), so
/// a document never scores tokens it was conditioned on.
pub fn perplexity(
    model: &TopicModel,
    docs: &[Vec<String>],
    iterations: usize,
    seed: u64,
) -> Result<f64, TopicError> {
    let per_doc: Vec<(f64, usize)> = docs
        .par_iter()
        .enumerate()
        .map(|(d, doc)| {
            let encoded = model.encode(doc);
            if encoded.is_empty() {
                return (0.0, 0);
            }
            // each half of the tokens is scored under the mixture inferred from the other half
            let (even, odd): (Vec<_>, Vec<_>) = encoded
                .iter()
                .copied()
                .enumerate()
                .partition(|(i, _)| i % 2 == 0);
            let halves = [even, odd];
            let mut ll = 0.0;
            for h in 0..2 {
                let context: Vec<u32> = halves[1 - h].iter().map(|&(_, w)| w).collect();
                let theta = infer_encoded(
                    model,
                    &context,
                    iterations,
                    derive_seed(seed, (2 * d + h) as u64),
                );
                ll += halves[h]
                    .iter()
                    .map(|&(_, w)| {
                        theta
                            .iter()
                            .enumerate()
                            .map(|(k, p)| p * model.phi(k, w as usize))
                            .sum::<f64>()
                            .ln()
                    })
                    .sum::<f64>();
            }
            (ll, encoded.len())
        })
        .collect();
    let (ll, n) = per_doc
        .iter()
        .fold((0.0, 0usize), |(a, n), &(l, c)| (a + l, n + c));
    if n == 0 {
        return Err(TopicError::NoInDomainTokens);
    }
    Ok((-ll / n as f64).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub best_k: usize,
    pub perplexities: Vec<(usize, f64)>,
}

/// Fits one model per topic count on a seeded training shard and scores
/// perplexity on the held-out `holdout` fraction of documents. Ties go to the
/// smaller count.
pub fn select_k(
    docs: &[Vec<String>],
    k_min: usize,
    k_max: usize,
    base: LdaParams,
    holdout: f64,
    infer_iterations: usize,
) -> Result<KSelection, TopicError> {
    if k_min > k_max || k_min < 2 {
        return Err(TopicError::BadRange {
            min: k_min,
            max: k_max,
        });
    }
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(
        base.seed, 0x5e1ec7,
    )));
    let n_held = ((docs.len() as f64 * holdout).round() as usize).clamp(1, docs.len().max(2) - 1);
    let (held_idx, train_idx) = order.split_at(n_held.min(docs.len()));
    let mut held_idx = held_idx.to_vec();
    let mut train_idx = train_idx.to_vec();
    held_idx.sort_unstable();
    train_idx.sort_unstable();
    let train: Vec<Vec<String>> = train_idx.iter().map(|&i| docs[i].clone()).collect();
    let held: Vec<Vec<String>> = held_idx.iter().map(|&i| docs[i].clone()).collect();

    let results: Vec<Result<(usize, f64), TopicError>> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let params = LdaParams { topics: k, ..base };
            let model = fit_lda(&train, params)?;
            let p = perplexity(
                &model,
                &held,
                infer_iterations,
                derive_seed(base.seed, k as u64),
            )?;
            Ok((k, p))
        })
        .collect();
    let perplexities = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut best = perplexities[0];
    for &(k, p) in &perplexities[1..] {
        if p < best.1 {
            best = (k, p);
        }
    }
    Ok(KSelection {
        best_k: best.0,
        perplexities,
    })
}

/// Most frequent per-tweet argmax topic; ties go to the lowest index.
pub fn dominant_topic_user(argmax_topics: &[usize]) -> usize {
    let Some(&max) = argmax_topics.iter().max() else {
        return 0;
    };
    let mut counts = vec![0usize; max + 1];
    for &t in argmax_topics {
        counts[t] += 1;
    }
    let mut best = 0;
    for (t, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = t;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Draws documents from known disjoint-vocabulary topics; returns the docs
    /// and the true topic word lists.
    fn planted_corpus(
        topics: usize,
        words_per_topic: usize,
        docs: usize,
        len: usize,
        seed: u64,
    ) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab: Vec<Vec<String>> = (0..topics)
            .map(|t| (0..words_per_topic).map(|w| format!("t{t}w{w}")).collect())
            .collect();
        let corpus = (0..docs)
            .map(|_| {
                let main = rng.random_range(0..topics);
                (0..len)
                    .map(|_| {
                        let t = if rng.random::<f64>() < 0.9 {
                            main
                        } else {
                            rng.random_range(0..topics)
                        };
                        // skewed word choice so top words are well defined
                        let r: f64 = rng.random();
                        let w = ((r * r) * words_per_topic as f64) as usize;
                        vocab[t][w.min(words_per_topic - 1)].clone()
                    })
                    .collect()
            })
            .collect();
        (corpus, vocab)
    }

    #[test]
    fn recovers_two_disjoint_topics() {
        let (docs, truth) = planted_corpus(2, 50, 200, 30, 11);
        let mut params = LdaParams::new(2, 3);
        params.iterations = 500;
        let model = fit_lda(&docs, params).unwrap();
        // true top-10 words by generation frequency are the first 10 of each list
        for words in &truth {
            let true_top: Vec<&str> = words[..10].iter().map(String::as_str).collect();
            let best_overlap = (0..2)
                .map(|k| {
                    model
                        .top_words(k, 10)
                        .iter()
                        .filter(|w| true_top.contains(w))
                        .count()
                })
                .max()
                .unwrap();
            assert!(best_overlap >= 8, "overlap {best_overlap}");
        }
    }

    #[test]
    fn fitting_is_deterministic() {
        let (docs, _) = planted_corpus(3, 20, 40, 15, 5);
        let params = LdaParams {
            iterations: 30,
            ..LdaParams::new(3, 9)
        };
        assert_eq!(
            fit_lda(&docs, params).unwrap(),
            fit_lda(&docs, params).unwrap()
        );
    }

    #[test]
    fn degenerate_inputs() {
        let docs = vec![vec!["a".to_string(), "b".to_string()]];
        assert!(matches!(
            fit_lda(&docs, LdaParams::new(3, 1)),
            Err(TopicError::DegenerateVocab {
                vocab: 2,
                topics: 3
            })
        ));
        assert!(matches!(
            fit_lda(&[vec![], vec![]], LdaParams::new(2, 1)),
            Err(TopicError::EmptyCorpus)
        ));
        assert!(matches!(
            fit_lda(&docs, LdaParams::new(1, 1)),
            Err(TopicError::TooFewTopics(1))
        ));
    }

    #[test]
    fn count_conservation_every_sweep() {
        let (docs, _) = planted_corpus(3, 20, 50, 12, 2);
        let mut sampler = GibbsSampler::new(&docs, LdaParams::new(3, 4)).unwrap();
        let total = sampler.token_count() as u64;
        for _ in 0..25 {
            sampler.sweep();
            assert_eq!(sampler.assigned_count(), total);
            assert!(sampler.counts_consistent());
        }
    }

    #[test]
    fn phi_rows_are_distributions() {
        let (docs, _) = planted_corpus(3, 10, 30, 10, 8);
        let model = fit_lda(
            &docs,
            LdaParams {
                iterations: 10,
                ..LdaParams::new(3, 1)
            },
        )
        .unwrap();
        for k in 0..3 {
            let s: f64 = (0..model.vocab_size()).map(|w| model.phi(k, w)).sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_model_perplexity_is_vocab_size() {
        let vocab: Vec<String> = (0..64).map(|i| format!("w{i}")).collect();
        let model = TopicModel::from_counts(vocab.clone(), vec![vec![0; 64]; 4], 0.1, 0.01, 0, 0);
        let docs: Vec<Vec<String>> = (0..10)
            .map(|d| (0..7).map(|i| vocab[(d * 7 + i) % 64].clone()).collect())
            .collect();
        let p = perplexity(&model, &docs, 20, 1).unwrap();
        assert!((p - 64.0).abs() <= 64.0 * 1e-12, "{p}");
        assert!(matches!(
            perplexity(&model, &[vec!["oov".to_string()]], 5, 1),
            Err(TopicError::NoInDomainTokens)
        ));
    }

    #[test]
    fn perplexity_at_least_one() {
        let (docs, _) = planted_corpus(2, 10, 30, 10, 3);
        let model = fit_lda(
            &docs,
            LdaParams {
                iterations: 20,
                ..LdaParams::new(2, 1)
            },
        )
        .unwrap();
        assert!(perplexity(&model, &docs, 10, 2).unwrap() >= 1.0);
    }

    #[test]
    fn inference_rules() {
        let (docs, truth) = planted_corpus(2, 30, 100, 20, 21);
        let model = fit_lda(
            &docs,
            LdaParams {
                iterations: 100,
                ..LdaParams::new(2, 7)
            },
        )
        .unwrap();
        let oov = infer(&model, &["nothing".to_string()], 10, 1);
        assert_eq!(oov.theta, vec![0.5, 0.5]);
        assert_eq!(oov.argmax_topic, 0);

        // a document made only of one true topic's words lands on the learned
        // topic that owns those words
        for words in &truth {
            let owner = (0..2)
                .max_by_key(|&k| {
                    model
                        .top_words(k, 10)
                        .iter()
                        .filter(|w| words.iter().any(|x| x == *w))
                        .count()
                })
                .unwrap();
            let doc: Vec<String> = words[..8].to_vec();
            let a = infer(&model, &doc, 50, 3);
            assert_eq!(a.argmax_topic, owner);
            assert!((a.theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_assignment_for_five_topics() {
        let vocab: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let model = TopicModel::from_counts(vocab, vec![vec![1; 10]; 5], 10.0, 0.01, 0, 0);
        let a = infer(&model, &[], 10, 0);
        assert_eq!(a.theta, vec![0.2; 5]);
        assert_eq!(a.argmax_topic, 0);
        assert_eq!(a.max_probability, 0.2);
    }

    #[test]
    fn dominant_topic_mode() {
        assert_eq!(dominant_topic_user(&[2, 2, 1]), 2);
        assert_eq!(dominant_topic_user(&[0, 1]), 0);
        assert_eq!(dominant_topic_user(&[3, 3, 3]), 3);
        assert_eq!(dominant_topic_user(&[1, 0]), 0);
    }

    #[test]
    fn select_k_report_shape() {
        let (docs, _) = planted_corpus(3, 15, 60, 12, 4);
        let base = LdaParams {
            iterations: 20,
            ..LdaParams::new(2, 5)
        };
        let one = select_k(&docs, 7, 7, base, 0.1, 10).unwrap();
        assert_eq!(one.best_k, 7);
        assert_eq!(one.perplexities.len(), 1);
        let range = select_k(&docs, 2, 6, base, 0.1, 10).unwrap();
        assert_eq!(range.perplexities.len(), 5);
        assert!(matches!(
            select_k(&docs, 6, 5, base, 0.1, 10),
            Err(TopicError::BadRange { .. })
        ));
    }

    #[test]
    fn select_k_finds_planted_topic_count() {
        for corpus_seed in [17, 18, 19, 20] {
            let (docs, _) = planted_corpus(5, 30, 1000, 25, corpus_seed);
            let base = LdaParams::new(2, 5);
            let sel = select_k(&docs, 2, 9, base, 0.1, 50).unwrap();
            assert_eq!(sel.best_k, 5, "{:?}", sel.perplexities);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn theta_sums_to_one(words in proptest::collection::vec(0usize..12, 0..15), seed in 0u64..1000) {
            let vocab: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
            let counts: Vec<Vec<u32>> = (0..3).map(|k| (0..10).map(|w| ((w * 7 + k * 3) % 5) as u32).collect()).collect();
            let model = TopicModel::from_counts(vocab, counts, 0.5, 0.01, 0, 0);
            let doc: Vec<String> = words.iter().map(|w| format!("w{w}")).collect();
            let a = infer(&model, &doc, 10, seed);
            proptest::prop_assert!((a.theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            proptest::prop_assert!(a.theta.iter().all(|&p| p > 0.0));
            proptest::prop_assert!(a.max_probability > 0.0 && a.max_probability <= 1.0);
        }
    }
}
