use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::store::{vocab_digest, FeatureMatrix};
use super::{Feature, FeatureError};
use crate::corpus::{AuthorRecord, Corpus};
use crate::lexical::{
    build_vocab, mean_len, pos_unigrams, tfidf_row, tokenize, PosTagger, VocabParams, Vocabulary,
};
use crate::matrix::Matrix;
use crate::seed::named_seed;
use crate::sentiment::{
    channel_std, contrast, contrast_std, disagreement, trigram_scores, Analyzer, AnalyzerId,
    Channel, DisagreementStats, RulesAnalyzer, ScoreKey, SecondaryAnalyzer, SentimentScores,
};
use crate::topics::{
    assign_nearest, dominant_topic_user, fit_lda, infer, kmeans, LdaParams, TopicAssignment,
    TopicModel,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractorConfig {
    pub tweet_slots: usize,
    pub lda_topics: usize,
    /// `None` means `50 / lda_topics`.
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_iterations: usize,
    pub infer_iterations: usize,
    /// Fit LDA on one concatenated document per author instead of per tweet.
    pub lda_user_documents: bool,
    pub clusters: usize,
    pub kmeans_iterations: usize,
    pub vocab: VocabParams,
    pub seed: u64,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            tweet_slots: crate::corpus::DEFAULT_TWEET_SLOTS,
            lda_topics: 5,
            lda_alpha: None,
            lda_beta: 0.01,
            lda_iterations: 200,
            infer_iterations: 30,
            lda_user_documents: false,
            clusters: 5,
            kmeans_iterations: 300,
            vocab: VocabParams::default(),
            seed: 0,
        }
    }
}

impl ExtractorConfig {
    pub fn lda_params(&self) -> LdaParams {
        LdaParams {
            topics: self.lda_topics,
            alpha: self.lda_alpha,
            beta: self.lda_beta,
            iterations: self.lda_iterations,
            seed: named_seed(self.seed, "lda"),
        }
    }
}

/// Everything learned from the training authors that feature extraction needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedExtractors {
    pub config: ExtractorConfig,
    pub config_hash: String,
    pub rules: RulesAnalyzer,
    pub secondary: SecondaryAnalyzer,
    pub disagreement: Option<DisagreementStats>,
    pub topics: Option<TopicModel>,
    pub vocabulary: Option<Vocabulary>,
    pub centroids: Option<Vec<Vec<f64>>>,
    #[serde(skip, default = "PosTagger::builtin")]
    pub tagger: PosTagger,
}

fn needs_disagreement(f: Feature) -> bool {
    matches!(f, Feature::DiffNeg | Feature::DiffPos | Feature::DiffNeu)
}

fn needs_topics(f: Feature) -> bool {
    matches!(
        f,
        Feature::MaxProbabilities | Feature::DominantTopicUser | Feature::ArgmaxTopic
    )
}

fn needs_vocabulary(f: Feature) -> bool {
    matches!(f, Feature::Tfidf | Feature::Cluster)
}

fn tweet_docs(author: &AuthorRecord) -> Vec<Vec<String>> {
    author.tweets.iter().map(|t| tokenize(t)).collect()
}

fn is_blank(tweet: &str) -> bool {
    tweet.split_whitespace().next().is_none()
}

fn hash_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

impl FittedExtractors {
    /// Fits only the resources the requested features depend on, on `train` only.
    pub fn fit(
        train: &Corpus,
        features: &[Feature],
        config: ExtractorConfig,
        rules: RulesAnalyzer,
        secondary: SecondaryAnalyzer,
    ) -> Result<FittedExtractors, FeatureError> {
        if train.tweet_slots() != config.tweet_slots {
            return Err(FeatureError::SlotMismatch {
                expected: config.tweet_slots,
                found: train.tweet_slots(),
            });
        }
        let disagreement = if features.iter().any(|&f| needs_disagreement(f)) {
            let per_author: Vec<Result<Vec<(SentimentScores, SentimentScores)>, FeatureError>> =
                train
                    .authors()
                    .par_iter()
                    .map(|a| {
                        a.tweets
                            .iter()
                            .enumerate()
                            .filter(|(_, t)| !is_blank(t))
                            .map(|(i, t)| {
                                let key = ScoreKey::tweet(&a.author_id, i);
                                Ok((rules.analyze(t, &key)?, secondary.analyze(t, &key)?))
                            })
                            .collect()
                    })
                    .collect();
            let mut pairs = Vec::new();
            for p in per_author {
                pairs.extend(p?);
            }
            Some(DisagreementStats::fit(&pairs))
        } else {
            None
        };

        let topics = if features.iter().any(|&f| needs_topics(f)) {
            let docs: Vec<Vec<String>> = if config.lda_user_documents {
                train
                    .authors()
                    .iter()
                    .map(|a| tweet_docs(a).concat())
                    .filter(|d| !d.is_empty())
                    .collect()
            } else {
                train
                    .authors()
                    .iter()
                    .flat_map(tweet_docs)
                    .filter(|d| !d.is_empty())
                    .collect()
            };
            Some(fit_lda(&docs, config.lda_params())?)
        } else {
            None
        };

        let vocabulary = if features.iter().any(|&f| needs_vocabulary(f)) {
            let docs: Vec<Vec<Vec<String>>> = train.authors().par_iter().map(tweet_docs).collect();
            Some(build_vocab(&docs, config.vocab)?)
        } else {
            None
        };

        let centroids = match (&vocabulary, features.contains(&Feature::Cluster)) {
            (Some(vocab), true) => {
                let rows: Vec<Vec<f64>> = train
                    .authors()
                    .par_iter()
                    .map(|a| tfidf_row(&a.author_id, &tweet_docs(a), vocab).to_dense(vocab.len()))
                    .collect();
                let fit = kmeans(
                    &rows,
                    config.clusters,
                    config.kmeans_iterations,
                    named_seed(config.seed, "kmeans"),
                )?;
                Some(fit.centroids)
            }
            _ => None,
        };

        Ok(FittedExtractors {
            config_hash: hash_json(&config),
            config,
            rules,
            secondary,
            disagreement,
            topics,
            vocabulary,
            centroids,
            tagger: PosTagger::builtin(),
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.as_ref().map_or(0, Vocabulary::len)
    }

    fn check_fitted(&self, f: Feature) -> Result<(), FeatureError> {
        let missing = |extractor| {
            Err(FeatureError::UnfittedExtractor {
                feature: f.name(),
                extractor,
            })
        };
        if needs_disagreement(f) && self.disagreement.is_none() {
            return missing("disagreement statistics");
        }
        if needs_topics(f) && self.topics.is_none() {
            return missing("topic model");
        }
        if needs_vocabulary(f) && self.vocabulary.is_none() {
            return missing("tf-idf vocabulary");
        }
        if f == Feature::Cluster && self.centroids.is_none() {
            return missing("k-means centroids");
        }
        Ok(())
    }
}

/// Fills degenerate (`None`) slots: uniform topic mass `1/K` for
/// `max_probabilities`, 0 for everything else. Present values pass through.
pub fn impute_degenerate(values: Vec<Option<f64>>, feature: Feature, topics: usize) -> Vec<f64> {
    let fill = match feature {
        Feature::MaxProbabilities if topics > 0 => 1.0 / topics as f64,
        _ => 0.0,
    };
    values.into_iter().map(|v| v.unwrap_or(fill)).collect()
}

/// Lazily computed per-author intermediates shared between features.
struct AuthorWork<'a> {
    fx: &'a FittedExtractors,
    author: &'a AuthorRecord,
    rules: Option<Vec<Option<SentimentScores>>>,
    secondary: Option<Vec<Option<SentimentScores>>>,
    contrast: Option<[Vec<Option<f64>>; 2]>,
    topics: Option<Vec<Option<TopicAssignment>>>,
    tfidf: Option<Vec<f64>>,
}

impl<'a> AuthorWork<'a> {
    fn new(fx: &'a FittedExtractors, author: &'a AuthorRecord) -> Self {
        AuthorWork {
            fx,
            author,
            rules: None,
            secondary: None,
            contrast: None,
            topics: None,
            tfidf: None,
        }
    }

    fn score_all<A: Analyzer>(
        &self,
        analyzer: &A,
    ) -> Result<Vec<Option<SentimentScores>>, FeatureError> {
        self.author
            .tweets
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if is_blank(t) {
                    Ok(None)
                } else {
                    Ok(Some(
                        analyzer.analyze(t, &ScoreKey::tweet(&self.author.author_id, i))?,
                    ))
                }
            })
            .collect()
    }

    fn rules(&mut self) -> Result<&[Option<SentimentScores>], FeatureError> {
        if self.rules.is_none() {
            self.rules = Some(self.score_all(&self.fx.rules)?);
        }
        Ok(self.rules.as_deref().expect("set above"))
    }

    fn secondary(&mut self) -> Result<&[Option<SentimentScores>], FeatureError> {
        if self.secondary.is_none() {
            self.secondary = Some(self.score_all(&self.fx.secondary)?);
        }
        Ok(self.secondary.as_deref().expect("set above"))
    }

    fn contrast(&mut self, channel: Channel) -> Result<&[Option<f64>], FeatureError> {
        if self.contrast.is_none() {
            let mut pos = Vec::with_capacity(self.author.tweets.len());
            let mut neg = Vec::with_capacity(self.author.tweets.len());
            for (i, t) in self.author.tweets.iter().enumerate() {
                let tokens: Vec<&str> = t.split_whitespace().collect();
                if tokens.is_empty() {
                    pos.push(None);
                    neg.push(None);
                    continue;
                }
                let windows = trigram_scores(
                    &tokens,
                    &self.fx.rules,
                    &ScoreKey::tweet(&self.author.author_id, i),
                )?;
                pos.push(Some(contrast(&windows, Channel::Pos)));
                neg.push(Some(contrast(&windows, Channel::Neg)));
            }
            self.contrast = Some([pos, neg]);
        }
        let [pos, neg] = self.contrast.as_ref().expect("set above");
        Ok(if channel == Channel::Pos { pos } else { neg })
    }

    fn topics(&mut self) -> &[Option<TopicAssignment>] {
        if self.topics.is_none() {
            let model = self.fx.topics.as_ref().expect("checked before extraction");
            let root = named_seed(self.fx.config.seed, "lda-infer");
            let assignments = self
                .author
                .tweets
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let tokens = tokenize(t);
                    (!tokens.is_empty()).then(|| {
                        let seed = named_seed(root, &format!("{}:{i}", self.author.author_id));
                        infer(model, &tokens, self.fx.config.infer_iterations, seed)
                    })
                })
                .collect();
            self.topics = Some(assignments);
        }
        self.topics.as_deref().expect("set above")
    }

    fn tfidf(&mut self) -> &[f64] {
        if self.tfidf.is_none() {
            let vocab = self
                .fx
                .vocabulary
                .as_ref()
                .expect("checked before extraction");
            let row = tfidf_row(&self.author.author_id, &tweet_docs(self.author), vocab);
            self.tfidf = Some(row.to_dense(vocab.len()));
        }
        self.tfidf.as_deref().expect("set above")
    }

    fn block(&mut self, f: Feature) -> Result<Vec<f64>, FeatureError> {
        let k = self.fx.topics.as_ref().map_or(0, TopicModel::topics);
        let per_tweet = |scores: &[Option<SentimentScores>], pick: fn(&SentimentScores) -> f64| {
            scores
                .iter()
                .map(|s| s.as_ref().map(pick))
                .collect::<Vec<_>>()
        };
        let slots = |values: Vec<Option<f64>>| impute_degenerate(values, f, k);
        let filled = |scores: &[Option<SentimentScores>]| -> Vec<SentimentScores> {
            scores
                .iter()
                .map(|s| s.unwrap_or(SentimentScores::zero(AnalyzerId::Secondary)))
                .collect()
        };
        Ok(match f {
            Feature::PosSentVecs => slots(self.contrast(Channel::Pos)?.to_vec()),
            Feature::NegSentVecs => slots(self.contrast(Channel::Neg)?.to_vec()),
            Feature::PosSentStd => {
                vec![contrast_std(&slots(self.contrast(Channel::Pos)?.to_vec()))]
            }
            Feature::NegSentStd => {
                vec![contrast_std(&slots(self.contrast(Channel::Neg)?.to_vec()))]
            }
            Feature::XNegative => slots(per_tweet(self.secondary()?, |s| s.neg)),
            Feature::XNeutral => slots(per_tweet(self.secondary()?, |s| s.neu)),
            Feature::XPositive => slots(per_tweet(self.secondary()?, |s| s.pos)),
            Feature::NegVader => slots(per_tweet(self.rules()?, |s| s.neg)),
            Feature::NeuVader => slots(per_tweet(self.rules()?, |s| s.neu)),
            Feature::PosVader => slots(per_tweet(self.rules()?, |s| s.pos)),
            Feature::CompoundVader => {
                slots(per_tweet(self.rules()?, |s| s.compound.unwrap_or(0.0)))
            }
            Feature::DiffNeg | Feature::DiffPos | Feature::DiffNeu => {
                let channel = match f {
                    Feature::DiffNeg => Channel::Neg,
                    Feature::DiffPos => Channel::Pos,
                    _ => Channel::Neu,
                };
                let stats = self.fx.disagreement.as_ref();
                let rules = self.rules()?.to_vec();
                let secondary = self.secondary()?;
                let values = rules
                    .iter()
                    .zip(secondary)
                    .map(|(a, b)| match (a, b) {
                        (Some(a), Some(b)) => disagreement(a, b, channel, stats).map(Some),
                        _ => Ok(None),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                slots(values)
            }
            Feature::PosScoreStd => vec![channel_std(&filled(self.secondary()?), Channel::Pos)],
            Feature::NegScoreStd => vec![channel_std(&filled(self.secondary()?), Channel::Neg)],
            Feature::NeuScoreStd => vec![channel_std(&filled(self.secondary()?), Channel::Neu)],
            Feature::MaxProbabilities => slots(
                self.topics()
                    .iter()
                    .map(|a| a.as_ref().map(|a| a.max_probability))
                    .collect(),
            ),
            Feature::ArgmaxTopic => slots(
                self.topics()
                    .iter()
                    .map(|a| a.as_ref().map(|a| a.argmax_topic as f64))
                    .collect(),
            ),
            Feature::DominantTopicUser => {
                let argmaxes: Vec<usize> = self
                    .topics()
                    .iter()
                    .flatten()
                    .map(|a| a.argmax_topic)
                    .collect();
                vec![dominant_topic_user(&argmaxes) as f64]
            }
            Feature::Tfidf => self.tfidf().to_vec(),
            Feature::Cluster => {
                let row = self.tfidf().to_vec();
                let centroids = self
                    .fx
                    .centroids
                    .as_ref()
                    .expect("checked before extraction");
                vec![assign_nearest(centroids, &row).0 as f64]
            }
            Feature::PosUnis => pos_unigrams(&self.author.tweets, &self.fx.tagger)
                .0
                .to_vec(),
            Feature::MeanLen => vec![mean_len(&self.author.tweets)],
        })
    }
}

/// Per-author concatenation of the listed feature blocks, in the listed order.
pub fn assemble(
    corpus: &Corpus,
    fx: &FittedExtractors,
    features: &[Feature],
) -> Result<FeatureMatrix, FeatureError> {
    if corpus.tweet_slots() != fx.config.tweet_slots {
        return Err(FeatureError::SlotMismatch {
            expected: fx.config.tweet_slots,
            found: corpus.tweet_slots(),
        });
    }
    for &f in features {
        fx.check_fitted(f)?;
    }
    let t = fx.config.tweet_slots;
    let v = fx.vocab_size();
    let dims: Vec<usize> = features.iter().map(|f| f.dim(t, v)).collect();
    let width: usize = dims.iter().sum();
    let rows: Vec<Result<Vec<f64>, FeatureError>> = corpus
        .authors()
        .par_iter()
        .map(|author| {
            let mut work = AuthorWork::new(fx, author);
            let mut row = Vec::with_capacity(width);
            for &f in features {
                let block = work.block(f)?;
                if block.iter().any(|x| !x.is_finite()) {
                    return Err(FeatureError::NonFinite {
                        feature: f.name(),
                        author_id: author.author_id.clone(),
                    });
                }
                row.extend(block);
            }
            Ok(row)
        })
        .collect();
    let mut data = Vec::with_capacity(corpus.len() * width);
    for row in rows {
        data.extend(row?);
    }
    FeatureMatrix::new(
        features.to_vec(),
        dims,
        t,
        v,
        fx.vocabulary
            .as_ref()
            .map_or_else(String::new, |vocab| vocab_digest(vocab.terms())),
        corpus.ids().into_iter().map(str::to_string).collect(),
        corpus.authors().iter().map(|a| a.label).collect(),
        Matrix::new(corpus.len(), width, data),
        fx.config.seed,
        fx.config_hash.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;
    use crate::sentiment::Lexicon;

    fn author(id: &str, label: Label, tweets: &[&str]) -> AuthorRecord {
        AuthorRecord {
            author_id: id.to_string(),
            label,
            tweets: tweets.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn corpus() -> Corpus {
        let words = [
            "good day",
            "bad news today",
            "i love this",
            "terrible traffic again",
            "okay fine",
            "great game",
            "sad story",
            "happy friday",
        ];
        let authors = (0..10)
            .map(|i| {
                let tweets: Vec<&str> = (0..3).map(|j| words[(i + j * 3) % words.len()]).collect();
                let label = if i % 2 == 0 {
                    Label::Ironic
                } else {
                    Label::NonIronic
                };
                author(&format!("u{i}"), label, &tweets)
            })
            .collect();
        Corpus::new(authors, 4).unwrap()
    }

    fn config() -> ExtractorConfig {
        ExtractorConfig {
            tweet_slots: 4,
            lda_topics: 2,
            lda_iterations: 20,
            infer_iterations: 10,
            clusters: 2,
            vocab: VocabParams {
                ngram_range: (1, 2),
                min_df: 0.0,
                max_df: 1.0,
            },
            seed: 3,
            ..ExtractorConfig::default()
        }
    }

    fn fitted(features: &[Feature]) -> FittedExtractors {
        FittedExtractors::fit(
            &corpus(),
            features,
            config(),
            RulesAnalyzer::builtin(),
            SecondaryAnalyzer::plain_lexicon(Lexicon::builtin()),
        )
        .unwrap()
    }

    #[test]
    fn widths_follow_levels() {
        let all: Vec<Feature> = Feature::all().collect();
        let fx = fitted(&all);
        let m = assemble(&corpus(), &fx, &[Feature::MeanLen]).unwrap();
        assert_eq!(m.cols(), 1);
        let m = assemble(&corpus(), &fx, &super::super::FINAL_FEATURES).unwrap();
        assert_eq!(m.cols(), 4 + 3 * 4 + 4 + fx.vocab_size() + 12);
        assert_eq!(m.rows(), 10);
    }

    #[test]
    fn concatenation_property() {
        let all: Vec<Feature> = Feature::all().collect();
        let fx = fitted(&all);
        let c = corpus();
        for pair in all.windows(2) {
            let both = assemble(&c, &fx, pair).unwrap();
            let f = assemble(&c, &fx, &pair[..1]).unwrap();
            let g = assemble(&c, &fx, &pair[1..]).unwrap();
            assert_eq!(both.values(), &Matrix::hconcat(&[f.values(), g.values()]));
        }
    }

    #[test]
    fn unfitted_extractor_reported() {
        let fx = fitted(&[Feature::MeanLen]);
        assert!(matches!(
            assemble(&corpus(), &fx, &[Feature::Tfidf]),
            Err(FeatureError::UnfittedExtractor {
                feature: "tfidf",
                ..
            })
        ));
        assert!(matches!(
            assemble(&corpus(), &fx, &[Feature::DiffPos]),
            Err(FeatureError::UnfittedExtractor { .. })
        ));
    }

    #[test]
    fn padding_slots_are_imputed() {
        let all: Vec<Feature> = Feature::all().collect();
        let fx = fitted(&all);
        let m = assemble(
            &corpus(),
            &fx,
            &[Feature::DiffPos, Feature::MaxProbabilities],
        )
        .unwrap();
        // slot 3 of every author is padding
        for r in 0..m.rows() {
            assert_eq!(m.values().get(r, 3), 0.0);
            assert_eq!(m.values().get(r, 4 + 3), 0.5);
        }
    }

    #[test]
    fn impute_rules() {
        assert_eq!(
            impute_degenerate(vec![None, Some(0.3)], Feature::DiffPos, 5),
            vec![0.0, 0.3]
        );
        assert_eq!(
            impute_degenerate(vec![None], Feature::MaxProbabilities, 5),
            vec![0.2]
        );
        assert_eq!(
            impute_degenerate(vec![Some(0.7)], Feature::MaxProbabilities, 5),
            vec![0.7]
        );
    }

    #[test]
    fn extraction_ignores_thread_count() {
        let all: Vec<Feature> = Feature::all().collect();
        let fx = fitted(&all);
        let c = corpus();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| assemble(&c, &fx, &all).unwrap());
        let b = four.install(|| assemble(&c, &fx, &all).unwrap());
        let bits = |m: &FeatureMatrix| {
            m.values()
                .data()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn artifact_round_trips_through_json() {
        let all: Vec<Feature> = Feature::all().collect();
        let fx = fitted(&all);
        let json = serde_json::to_string(&fx).unwrap();
        let back: FittedExtractors = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fx);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
