//! Flat `key = value` run configuration. Later sources override earlier ones:
//! defaults, then the config file, then command-line flags.

use std::path::{Path, PathBuf};

use irony_core::features::{parse_feature_list, Category, ExtractorConfig, Feature};
use irony_core::lexical::VocabParams;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tweet_slots: usize,
    pub split_ratio: f64,
    pub folds: usize,
    pub shuffled_folds: bool,
    pub stratified_folds: bool,
    pub top: usize,
    pub lda_topics: usize,
    pub lda_iterations: usize,
    pub infer_iterations: usize,
    pub lda_user_documents: bool,
    pub select_k: bool,
    pub k_min: usize,
    pub k_max: usize,
    pub clusters: usize,
    pub kmeans_iterations: usize,
    pub min_df: f64,
    pub max_df: f64,
    pub ngram_max: usize,
    pub features: Vec<Feature>,
    pub rules_lexicon: Option<PathBuf>,
    pub secondary_lexicon: Option<PathBuf>,
    pub secondary_scores: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            tweet_slots: irony_core::corpus::DEFAULT_TWEET_SLOTS,
            split_ratio: 0.7,
            folds: 5,
            shuffled_folds: true,
            stratified_folds: false,
            top: 5,
            lda_topics: 5,
            lda_iterations: 200,
            infer_iterations: 30,
            lda_user_documents: false,
            select_k: false,
            k_min: 2,
            k_max: 10,
            clusters: 5,
            kmeans_iterations: 300,
            min_df: 0.05,
            max_df: 0.95,
            ngram_max: 2,
            features: Feature::all()
                .filter(|f| f.category() != Category::Auxiliary)
                .collect(),
            rules_lexicon: None,
            secondary_lexicon: None,
            secondary_scores: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value {value:?} for {key}"))
}

fn path_or_none(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl RunConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key.trim() {
            "seed" => self.seed = parse(key, v)?,
            "tweet_slots" => self.tweet_slots = parse(key, v)?,
            "split_ratio" => self.split_ratio = parse(key, v)?,
            "folds" => self.folds = parse(key, v)?,
            "shuffled_folds" => self.shuffled_folds = parse(key, v)?,
            "stratified_folds" => self.stratified_folds = parse(key, v)?,
            "top" => self.top = parse(key, v)?,
            "lda_topics" => self.lda_topics = parse(key, v)?,
            "lda_iterations" => self.lda_iterations = parse(key, v)?,
            "infer_iterations" => self.infer_iterations = parse(key, v)?,
            "lda_user_documents" => self.lda_user_documents = parse(key, v)?,
            "select_k" => self.select_k = parse(key, v)?,
            "k_min" => self.k_min = parse(key, v)?,
            "k_max" => self.k_max = parse(key, v)?,
            "clusters" => self.clusters = parse(key, v)?,
            "kmeans_iterations" => self.kmeans_iterations = parse(key, v)?,
            "min_df" => self.min_df = parse(key, v)?,
            "max_df" => self.max_df = parse(key, v)?,
            "ngram_max" => self.ngram_max = parse(key, v)?,
            "features" => {
                let list = parse_feature_list(v).map_err(|e| e.to_string())?;
                if list.is_empty() {
                    return Err("features must name at least one feature".into());
                }
                self.features = list;
            }
            "rules_lexicon" => self.rules_lexicon = path_or_none(v),
            "secondary_lexicon" => self.secondary_lexicon = path_or_none(v),
            "secondary_scores" => self.secondary_scores = path_or_none(v),
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, source: &Path) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                file: source.display().to_string(),
                line: i + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            self.set(k, v).map_err(err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.apply_text(&text, path)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.tweet_slots == 0 {
            return bad("tweet_slots must be positive");
        }
        if self.folds < 2 {
            return bad("folds must be at least 2");
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return bad("split_ratio must lie strictly between 0 and 1");
        }
        if self.ngram_max == 0 {
            return bad("ngram_max must be positive");
        }
        if self.top < 2 {
            return bad("top must be at least 2");
        }
        for p in [
            &self.rules_lexicon,
            &self.secondary_lexicon,
            &self.secondary_scores,
        ]
        .into_iter()
        .flatten()
        {
            if !p.exists() {
                return Err(CliError::MissingPath(p.display().to_string()));
            }
        }
        Ok(())
    }

    /// Canonical `key=value` lines, one per key, in a fixed order.
    pub fn render(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let features: Vec<&str> = self.features.iter().map(|f| f.name()).collect();
        [
            format!("seed={}", self.seed),
            format!("tweet_slots={}", self.tweet_slots),
            format!("split_ratio={}", self.split_ratio),
            format!("folds={}", self.folds),
            format!("shuffled_folds={}", self.shuffled_folds),
            format!("stratified_folds={}", self.stratified_folds),
            format!("top={}", self.top),
            format!("lda_topics={}", self.lda_topics),
            format!("lda_iterations={}", self.lda_iterations),
            format!("infer_iterations={}", self.infer_iterations),
            format!("lda_user_documents={}", self.lda_user_documents),
            format!("select_k={}", self.select_k),
            format!("k_min={}", self.k_min),
            format!("k_max={}", self.k_max),
            format!("clusters={}", self.clusters),
            format!("kmeans_iterations={}", self.kmeans_iterations),
            format!("min_df={}", self.min_df),
            format!("max_df={}", self.max_df),
            format!("ngram_max={}", self.ngram_max),
            format!("features={}", features.join(",")),
            format!("rules_lexicon={}", path(&self.rules_lexicon)),
            format!("secondary_lexicon={}", path(&self.secondary_lexicon)),
            format!("secondary_scores={}", path(&self.secondary_scores)),
        ]
        .join("\n")
            + "\n"
    }

    /// sha256 of [`RunConfig::render`]; the worker count is not part of it.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.render().as_bytes()))
    }

    pub fn extractor_config(&self) -> ExtractorConfig {
        ExtractorConfig {
            tweet_slots: self.tweet_slots,
            lda_topics: self.lda_topics,
            lda_alpha: None,
            lda_beta: 0.01,
            lda_iterations: self.lda_iterations,
            infer_iterations: self.infer_iterations,
            lda_user_documents: self.lda_user_documents,
            clusters: self.clusters,
            kmeans_iterations: self.kmeans_iterations,
            vocab: VocabParams {
                ngram_range: (1, self.ngram_max),
                min_df: self.min_df,
                max_df: self.max_df,
            },
            seed: self.seed,
        }
    }
}
