//! Topic features: LDA via collapsed Gibbs sampling, perplexity-based choice
//! of the topic count, per-tweet inference and k-means over author vectors.

mod kmeans;
mod lda;

pub use kmeans::{assign_nearest, kmeans, ClusterAssignment};
pub use lda::{
    dominant_topic_user, fit_lda, infer, perplexity, select_k, GibbsSampler, KSelection, LdaParams,
    TopicAssignment, TopicModel,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TopicError {
    #[error("no tokens to fit a topic model on")]
    EmptyCorpus,
    #[error("vocabulary of {vocab} terms is smaller than the {topics} requested topics")]
    DegenerateVocab { vocab: usize, topics: usize },
    #[error("topic count must be at least 2, got {0}")]
    TooFewTopics(usize),
    #[error("no in-vocabulary tokens to evaluate")]
    NoInDomainTokens,
    #[error("invalid topic range {min}..={max}")]
    BadRange { min: usize, max: usize },
    #[error("k-means needs at least {k} distinct points, have {distinct}")]
    TooFewPoints { k: usize, distinct: usize },
}
