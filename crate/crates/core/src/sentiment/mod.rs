//! Sentiment scoring with two analyzers and the per-tweet / per-author
//! contrast, variation and disagreement measures built on top of them.

mod contrast;
mod rules;
mod secondary;

pub use contrast::{
    channel_std, contrast, contrast_std, disagreement, population_std, trigram_scores,
    ChannelStats, DisagreementStats,
};
pub use rules::{normalize_compound, Lexicon, RuleConfig, RulesAnalyzer};
pub use secondary::{ScoreTable, SecondaryAnalyzer};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SentimentError {
    #[error("no ingested score for author {author_id:?}, tweet {tweet_index}, trigram {trigram_index:?}")]
    MissingScore {
        author_id: String,
        tweet_index: usize,
        trigram_index: Option<usize>,
    },
    #[error("disagreement standardization stats have not been fitted")]
    StatsNotFitted,
    #[error("lexicon line {line}: {message}")]
    BadLexiconLine { line: usize, message: String },
    #[error("score file line {line}: {message}")]
    BadScoreLine { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnalyzerId {
    RulesLex,
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    Pos,
    Neg,
    Neu,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Pos, Channel::Neg, Channel::Neu];

    fn slot(self) -> usize {
        match self {
            Channel::Pos => 0,
            Channel::Neg => 1,
            Channel::Neu => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScores {
    pub pos: f64,
    pub neg: f64,
    pub neu: f64,
    pub compound: Option<f64>,
    pub analyzer: AnalyzerId,
}

impl SentimentScores {
    pub fn zero(analyzer: AnalyzerId) -> SentimentScores {
        SentimentScores {
            pos: 0.0,
            neg: 0.0,
            neu: 0.0,
            compound: Some(0.0),
            analyzer,
        }
    }

    pub fn channel(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Pos => self.pos,
            Channel::Neg => self.neg,
            Channel::Neu => self.neu,
        }
    }
}

/// Identifies the text being scored, for analyzers that look scores up
/// rather than compute them.
#[derive(Debug, Clone, Copy)]
pub struct ScoreKey<'a> {
    pub author_id: &'a str,
    pub tweet_index: usize,
    pub trigram_index: Option<usize>,
}

impl<'a> ScoreKey<'a> {
    pub fn tweet(author_id: &'a str, tweet_index: usize) -> Self {
        ScoreKey {
            author_id,
            tweet_index,
            trigram_index: None,
        }
    }
}

pub trait Analyzer: Sync {
    fn id(&self) -> AnalyzerId;

    fn analyze(&self, text: &str, key: &ScoreKey<'_>) -> Result<SentimentScores, SentimentError>;
}
