//! The second analyzer: plain lexicon shares without any rule modifiers, or
//! externally computed scores read from a JSON-lines table.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{
    Analyzer, AnalyzerId, Lexicon, RuleConfig, RulesAnalyzer, ScoreKey, SentimentError,
    SentimentScores,
};

#[derive(Debug, Deserialize)]
struct ScoreLine {
    author_id: String,
    tweet_index: usize,
    trigram_index: Option<usize>,
    pos: f64,
    neg: f64,
    neu: f64,
}

type TableKey = (String, usize, Option<usize>);

/// Tweet index and optional trigram window within one author's timeline.
type WindowKey = (usize, Option<usize>);

/// Externally computed scores keyed by (author, tweet, optional trigram window).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    entries: BTreeMap<String, BTreeMap<WindowKey, [f64; 3]>>,
}

impl ScoreTable {
    /// Values are clamped to [0, 1] on insertion.
    pub fn insert(&mut self, key: TableKey, pos: f64, neg: f64, neu: f64) -> bool {
        let clamp = |v: f64| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        self.entries
            .entry(key.0)
            .or_default()
            .insert((key.1, key.2), [clamp(pos), clamp(neg), clamp(neu)])
            .is_none()
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<ScoreTable, SentimentError> {
        let mut table = ScoreTable::default();
        for (i, line) in input.lines().enumerate() {
            let bad = |message: String| SentimentError::BadScoreLine {
                line: i + 1,
                message,
            };
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ScoreLine = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            let key = (rec.author_id, rec.tweet_index, rec.trigram_index);
            if !table.insert(key.clone(), rec.pos, rec.neg, rec.neu) {
                return Err(bad(format!("duplicate key {key:?}")));
            }
        }
        Ok(table)
    }

    pub fn get(&self, key: &ScoreKey<'_>) -> Option<[f64; 3]> {
        self.entries
            .get(key.author_id)?
            .get(&(key.tweet_index, key.trigram_index))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SecondaryAnalyzer {
    PlainLexicon(RulesAnalyzer),
    Ingested(ScoreTable),
}

impl SecondaryAnalyzer {
    pub fn plain_lexicon(lexicon: Lexicon) -> SecondaryAnalyzer {
        SecondaryAnalyzer::PlainLexicon(RulesAnalyzer::new(lexicon, RuleConfig::none()))
    }
}

impl Analyzer for SecondaryAnalyzer {
    fn id(&self) -> AnalyzerId {
        AnalyzerId::Secondary
    }

    fn analyze(&self, text: &str, key: &ScoreKey<'_>) -> Result<SentimentScores, SentimentError> {
        match self {
            SecondaryAnalyzer::PlainLexicon(inner) => Ok(inner.score(text, AnalyzerId::Secondary)),
            SecondaryAnalyzer::Ingested(table) => {
                let [pos, neg, neu] =
                    table.get(key).ok_or_else(|| SentimentError::MissingScore {
                        author_id: key.author_id.to_string(),
                        tweet_index: key.tweet_index,
                        trigram_index: key.trigram_index,
                    })?;
                Ok(SentimentScores {
                    pos,
                    neg,
                    neu,
                    compound: None,
                    analyzer: AnalyzerId::Secondary,
                })
            }
        }
    }
}
