//! Feature registry and per-author matrix assembly.
//!
//! Every named feature has a level that fixes its width: tweet-level features
//! take one column per tweet slot, user-level features one column, and block
//! features a width set by a fitted resource (vocabulary or tagset).
//! Categorical features (`dominant_topic_user`, `cluster`, `argmax_topic`) are
//! raw integer codes, which suits trees but not linear models.

mod extract;
mod store;

pub use extract::{assemble, impute_degenerate, ExtractorConfig, FittedExtractors};
pub use store::{FeatureMatrix, MatrixHeader};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CorpusError;
use crate::lexical::{LexicalError, TAGSET};
use crate::sentiment::SentimentError;
use crate::topics::TopicError;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("feature {feature} needs the {extractor} extractor, which was not fitted")]
    UnfittedExtractor {
        feature: &'static str,
        extractor: &'static str,
    },
    #[error("corpus has {found} tweet slots but the extractors expect {expected}")]
    SlotMismatch { expected: usize, found: usize },
    #[error("non-finite value in feature {feature} for author {author_id}")]
    NonFinite {
        feature: &'static str,
        author_id: String,
    },
    #[error("bad feature matrix: {0}")]
    BadMatrix(String),
    #[error(transparent)]
    Sentiment(#[from] SentimentError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Lexical(#[from] LexicalError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Feature {
    PosSentVecs,
    NegSentVecs,
    XNegative,
    XNeutral,
    XPositive,
    NegVader,
    NeuVader,
    PosVader,
    CompoundVader,
    DiffNeg,
    DiffPos,
    DiffNeu,
    PosSentStd,
    NegSentStd,
    MaxProbabilities,
    DominantTopicUser,
    Cluster,
    Tfidf,
    PosUnis,
    MeanLen,
    PosScoreStd,
    NegScoreStd,
    NeuScoreStd,
    ArgmaxTopic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Tweet,
    User,
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Sentiment,
    Topic,
    Lexical,
    /// Registered and extractable but outside the selection categories.
    Auxiliary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureDescriptor {
    pub feature: Feature,
    pub name: &'static str,
    /// Predictor name as shown in selection tables.
    pub label: &'static str,
    pub level: Level,
    pub category: Category,
    pub producer: &'static str,
}

const fn d(
    feature: Feature,
    name: &'static str,
    level: Level,
    category: Category,
    producer: &'static str,
) -> FeatureDescriptor {
    FeatureDescriptor {
        feature,
        name,
        label: name,
        level,
        category,
        producer,
    }
}

use Category::{Auxiliary, Lexical as Lex, Sentiment as Sent, Topic};
use Level::{Block, Tweet, User};

/// Registry order; within a category this is the selection tie-break order.
pub const REGISTRY: [FeatureDescriptor; 24] = [
    d(
        Feature::PosSentVecs,
        "pos_sent_vecs",
        Tweet,
        Sent,
        "sentiment::contrast(pos)",
    ),
    d(
        Feature::NegSentVecs,
        "neg_sent_vecs",
        Tweet,
        Sent,
        "sentiment::contrast(neg)",
    ),
    d(
        Feature::XNegative,
        "X_negative",
        Tweet,
        Sent,
        "sentiment::secondary(neg)",
    ),
    d(
        Feature::XNeutral,
        "X_neutral",
        Tweet,
        Sent,
        "sentiment::secondary(neu)",
    ),
    d(
        Feature::XPositive,
        "X_positive",
        Tweet,
        Sent,
        "sentiment::secondary(pos)",
    ),
    d(
        Feature::NegVader,
        "negVader",
        Tweet,
        Sent,
        "sentiment::rules(neg)",
    ),
    d(
        Feature::NeuVader,
        "neuVader",
        Tweet,
        Sent,
        "sentiment::rules(neu)",
    ),
    d(
        Feature::PosVader,
        "posVader",
        Tweet,
        Sent,
        "sentiment::rules(pos)",
    ),
    d(
        Feature::CompoundVader,
        "compoundVader",
        Tweet,
        Sent,
        "sentiment::rules(compound)",
    ),
    d(
        Feature::DiffNeg,
        "diff_neg",
        Tweet,
        Sent,
        "sentiment::disagreement(neg)",
    ),
    d(
        Feature::DiffPos,
        "diff_pos",
        Tweet,
        Sent,
        "sentiment::disagreement(pos)",
    ),
    d(
        Feature::DiffNeu,
        "diff_neu",
        Tweet,
        Sent,
        "sentiment::disagreement(neu)",
    ),
    d(
        Feature::PosSentStd,
        "pos_sent_std",
        User,
        Sent,
        "sentiment::contrast_std(pos)",
    ),
    d(
        Feature::NegSentStd,
        "neg_sent_std",
        User,
        Sent,
        "sentiment::contrast_std(neg)",
    ),
    d(
        Feature::MaxProbabilities,
        "max_probabilities",
        Tweet,
        Topic,
        "topics::infer",
    ),
    d(
        Feature::DominantTopicUser,
        "dominant_topic_user",
        User,
        Topic,
        "topics::dominant_topic_user",
    ),
    d(Feature::Cluster, "cluster", User, Topic, "topics::kmeans"),
    d(Feature::Tfidf, "tfidf", Block, Lex, "lexical::tfidf"),
    d(
        Feature::PosUnis,
        "pos_unis",
        Block,
        Lex,
        "lexical::pos_unigrams",
    ),
    d(Feature::MeanLen, "mean_len", User, Lex, "lexical::mean_len"),
    d(
        Feature::PosScoreStd,
        "pos_score_std",
        User,
        Auxiliary,
        "sentiment::channel_std(pos)",
    ),
    d(
        Feature::NegScoreStd,
        "neg_score_std",
        User,
        Auxiliary,
        "sentiment::channel_std(neg)",
    ),
    d(
        Feature::NeuScoreStd,
        "neu_score_std",
        User,
        Auxiliary,
        "sentiment::channel_std(neu)",
    ),
    d(
        Feature::ArgmaxTopic,
        "argmax_topic",
        Tweet,
        Auxiliary,
        "topics::infer(argmax)",
    ),
];

/// The final model's feature set, in canonical order.
pub const FINAL_FEATURES: [Feature; 7] = [
    Feature::MaxProbabilities,
    Feature::NeuVader,
    Feature::PosVader,
    Feature::CompoundVader,
    Feature::DiffPos,
    Feature::Tfidf,
    Feature::PosUnis,
];

impl Feature {
    pub fn descriptor(self) -> &'static FeatureDescriptor {
        REGISTRY
            .iter()
            .find(|d| d.feature == self)
            .expect("every feature is registered")
    }

    pub fn name(self) -> &'static str {
        self.descriptor().name
    }

    pub fn level(self) -> Level {
        self.descriptor().level
    }

    pub fn category(self) -> Category {
        self.descriptor().category
    }

    pub fn registry_index(self) -> usize {
        REGISTRY
            .iter()
            .position(|d| d.feature == self)
            .expect("registered")
    }

    /// Column width given tweet slots and vocabulary size.
    pub fn dim(self, tweet_slots: usize, vocab_size: usize) -> usize {
        match (self.level(), self) {
            (Level::Tweet, _) => tweet_slots,
            (Level::User, _) => 1,
            (Level::Block, Feature::Tfidf) => vocab_size,
            (Level::Block, _) => TAGSET.len(),
        }
    }

    pub fn all() -> impl Iterator<Item = Feature> {
        REGISTRY.iter().map(|d| d.feature)
    }

    pub fn in_category(category: Category) -> Vec<Feature> {
        REGISTRY
            .iter()
            .filter(|d| d.category == category)
            .map(|d| d.feature)
            .collect()
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        REGISTRY
            .iter()
            .find(|d| d.name == s || d.label == s)
            .map(|d| d.feature)
            .ok_or_else(|| FeatureError::UnknownFeature(s.to_string()))
    }
}

impl From<Feature> for String {
    fn from(f: Feature) -> String {
        f.name().to_string()
    }
}

impl TryFrom<String> for Feature {
    type Error = FeatureError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Parses a comma-separated list of names, keeping the given order.
pub fn parse_feature_list(list: &str) -> Result<Vec<Feature>, FeatureError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Final-model features in canonical order, then the rest sorted by name.
pub fn canonical_order(features: &[Feature]) -> Vec<Feature> {
    let mut out: Vec<Feature> = FINAL_FEATURES
        .iter()
        .copied()
        .filter(|f| features.contains(f))
        .collect();
    let mut rest: Vec<Feature> = features
        .iter()
        .copied()
        .filter(|f| !FINAL_FEATURES.contains(f))
        .collect();
    rest.sort_by_key(|f| f.name());
    rest.dedup();
    out.extend(rest);
    out
}
