//! Lexicon-and-rules analyzer in the style of VADER.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Analyzer, AnalyzerId, ScoreKey, SentimentError, SentimentScores};

const BUILTIN_LEXICON: &str = include_str!("../../resources/sentiment_lexicon.tsv");

const NEGATIONS: &[&str] = &[
    "aint",
    "arent",
    "cannot",
    "cant",
    "couldnt",
    "darent",
    "didnt",
    "doesnt",
    "ain't",
    "aren't",
    "can't",
    "couldn't",
    "daren't",
    "didn't",
    "doesn't",
    "dont",
    "hadnt",
    "hasnt",
    "havent",
    "isnt",
    "mightnt",
    "mustnt",
    "neither",
    "don't",
    "hadn't",
    "hasn't",
    "haven't",
    "isn't",
    "mightn't",
    "mustn't",
    "neednt",
    "needn't",
    "never",
    "none",
    "nope",
    "nor",
    "not",
    "nothing",
    "nowhere",
    "oughtnt",
    "shant",
    "shouldnt",
    "uhuh",
    "wasnt",
    "werent",
    "oughtn't",
    "shan't",
    "shouldn't",
    "uh-uh",
    "wasn't",
    "weren't",
    "without",
    "wont",
    "wouldnt",
    "won't",
    "wouldn't",
    "rarely",
    "seldom",
    "despite",
];

const BOOSTERS_UP: &[&str] = &[
    "absolutely",
    "amazingly",
    "awfully",
    "completely",
    "considerably",
    "decidedly",
    "deeply",
    "effing",
    "enormously",
    "entirely",
    "especially",
    "exceptionally",
    "extremely",
    "fabulously",
    "flipping",
    "fricking",
    "frigging",
    "fully",
    "greatly",
    "hella",
    "highly",
    "hugely",
    "incredibly",
    "intensely",
    "majorly",
    "more",
    "most",
    "particularly",
    "purely",
    "quite",
    "really",
    "remarkably",
    "so",
    "substantially",
    "thoroughly",
    "totally",
    "tremendously",
    "uber",
    "unbelievably",
    "unusually",
    "utterly",
    "very",
];

const BOOSTERS_DOWN: &[&str] = &[
    "almost",
    "barely",
    "hardly",
    "less",
    "little",
    "marginally",
    "occasionally",
    "partly",
    "scarcely",
    "slightly",
    "somewhat",
    "sort",
    "kinda",
    "kindof",
    "sorta",
];

/// Token -> valence map with lowercase keys.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Lexicon(BTreeMap<String, f64>);

impl Lexicon {
    /// Parses `token<TAB>valence` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Lexicon, SentimentError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| SentimentError::BadLexiconLine {
                line: i + 1,
                message,
            };
            let (tok, val) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `token<TAB>valence`".into()))?;
            let valence: f64 = val
                .trim()
                .parse()
                .map_err(|e| bad(format!("bad valence {val:?}: {e}")))?;
            if !valence.is_finite() {
                return Err(bad("valence must be finite".into()));
            }
            let tok = tok.trim().to_lowercase();
            if map.insert(tok.clone(), valence).is_some() {
                return Err(bad(format!("duplicate token {tok:?}")));
            }
        }
        Ok(Lexicon(map))
    }

    pub fn builtin() -> Lexicon {
        Lexicon::parse(BUILTIN_LEXICON).expect("bundled lexicon parses")
    }

    pub fn from_entries<I: IntoIterator<Item = (String, f64)>>(entries: I) -> Lexicon {
        Lexicon(
            entries
                .into_iter()
                .map(|(t, v)| (t.to_lowercase(), v))
                .collect(),
        )
    }

    pub fn get(&self, token: &str) -> Option<f64> {
        self.0.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains_key(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rule modifiers and constants. A `None` modifier is switched off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleConfig {
    /// Multiplier applied when one of the three preceding tokens negates.
    pub negation_scalar: Option<f64>,
    pub booster_increment: Option<f64>,
    pub caps_increment: Option<f64>,
    pub exclamation_increment: Option<f64>,
    pub max_exclamations: usize,
    /// Weights for sentiment before / after the first "but".
    pub but_weights: Option<(f64, f64)>,
    pub alpha: f64,
    pub negation_words: Vec<String>,
    /// Booster word -> +1 (intensifier) or -1 (dampener).
    pub booster_words: BTreeMap<String, f64>,
}

impl Default for RuleConfig {
    fn default() -> Self {
        let mut booster_words = BTreeMap::new();
        for w in BOOSTERS_UP {
            booster_words.insert(w.to_string(), 1.0);
        }
        for w in BOOSTERS_DOWN {
            booster_words.insert(w.to_string(), -1.0);
        }
        RuleConfig {
            negation_scalar: Some(-0.74),
            booster_increment: Some(0.293),
            caps_increment: Some(0.733),
            exclamation_increment: Some(0.292),
            max_exclamations: 3,
            but_weights: Some((0.5, 1.5)),
            alpha: 15.0,
            negation_words: NEGATIONS.iter().map(|s| s.to_string()).collect(),
            booster_words,
        }
    }
}

impl RuleConfig {
    /// Every modifier off: plain lexicon shares.
    pub fn none() -> RuleConfig {
        RuleConfig {
            negation_scalar: None,
            booster_increment: None,
            caps_increment: None,
            exclamation_increment: None,
            max_exclamations: 0,
            but_weights: None,
            alpha: 15.0,
            negation_words: Vec::new(),
            booster_words: BTreeMap::new(),
        }
    }

    fn is_negation(&self, lower: &str) -> bool {
        self.negation_words.iter().any(|w| w == lower) || lower.contains("n't")
    }
}

/// `score / sqrt(score^2 + alpha)`, clamped to [-1, 1].
pub fn normalize_compound(score: f64, alpha: f64) -> f64 {
    (score / (score * score + alpha).sqrt()).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulesAnalyzer {
    lexicon: Lexicon,
    config: RuleConfig,
}

fn is_all_caps(word: &str) -> bool {
    word.chars().any(char::is_alphabetic)
        && word
            .chars()
            .filter(|c| c.is_alphabetic())
            .all(char::is_uppercase)
}

/// Strips surrounding punctuation unless that would leave two characters or
/// fewer, which keeps emoticons such as `:)` intact.
fn strip_punct(token: &str) -> &str {
    let stripped = token.trim_matches(|c: char| c.is_ascii_punctuation());
    if stripped.chars().count() <= 2 {
        token
    } else {
        stripped
    }
}

impl RulesAnalyzer {
    pub fn new(lexicon: Lexicon, config: RuleConfig) -> RulesAnalyzer {
        RulesAnalyzer { lexicon, config }
    }

    pub fn builtin() -> RulesAnalyzer {
        RulesAnalyzer::new(Lexicon::builtin(), RuleConfig::default())
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn config(&self) -> &RuleConfig {
        &self.config
    }

    fn booster_scalar(&self, word: &str, valence: f64, cap_diff: bool) -> f64 {
        let (Some(incr), Some(&dir)) = (
            self.config.booster_increment,
            self.config.booster_words.get(&word.to_lowercase()),
        ) else {
            return 0.0;
        };
        let mut scalar = dir * incr;
        if valence < 0.0 {
            scalar = -scalar;
        }
        if let Some(caps) = self.config.caps_increment {
            if cap_diff && is_all_caps(word) {
                scalar += if valence > 0.0 { caps } else { -caps };
            }
        }
        scalar
    }

    fn token_valences(&self, words: &[&str]) -> Vec<f64> {
        let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
        let caps = words.iter().filter(|w| is_all_caps(w)).count();
        let cap_diff = caps > 0 && caps < words.len();
        let mut valences = Vec::with_capacity(words.len());
        for (i, word) in words.iter().enumerate() {
            if self.config.booster_increment.is_some()
                && self.config.booster_words.contains_key(&lower[i])
            {
                valences.push(0.0);
                continue;
            }
            let Some(mut v) = self.lexicon.get(&lower[i]) else {
                valences.push(0.0);
                continue;
            };
            if let Some(caps) = self.config.caps_increment {
                if cap_diff && is_all_caps(word) {
                    v += if v > 0.0 { caps } else { -caps };
                }
            }
            for dist in 0..3 {
                if i <= dist {
                    break;
                }
                let j = i - dist - 1;
                if self.lexicon.contains(&lower[j]) {
                    continue;
                }
                let mut s = self.booster_scalar(words[j], v, cap_diff);
                s *= match dist {
                    1 => 0.95,
                    2 => 0.9,
                    _ => 1.0,
                };
                v += s;
                if let Some(neg) = self.config.negation_scalar {
                    if self.config.is_negation(&lower[j]) {
                        v *= neg;
                    }
                }
            }
            valences.push(v);
        }
        if let Some((before, after)) = self.config.but_weights {
            if let Some(bi) = lower.iter().position(|w| w == "but") {
                for (k, v) in valences.iter_mut().enumerate() {
                    if k < bi {
                        *v *= before;
                    } else if k > bi {
                        *v *= after;
                    }
                }
            }
        }
        valences
    }

    fn exclamation_emphasis(&self, text: &str) -> f64 {
        match self.config.exclamation_increment {
            Some(incr) => {
                let count = text.chars().filter(|&c| c == '!').count();
                count.min(self.config.max_exclamations) as f64 * incr
            }
            None => 0.0,
        }
    }

    /// Scores one text. Text without tokens scores all zeros.
    pub fn score(&self, text: &str, analyzer: AnalyzerId) -> SentimentScores {
        let words: Vec<&str> = text.split_whitespace().map(strip_punct).collect();
        if words.is_empty() {
            return SentimentScores::zero(analyzer);
        }
        let valences = self.token_valences(&words);
        let emphasis = self.exclamation_emphasis(text);

        let mut sum: f64 = valences.iter().sum();
        if sum > 0.0 {
            sum += emphasis;
        } else if sum < 0.0 {
            sum -= emphasis;
        }
        let compound = normalize_compound(sum, self.config.alpha);

        let (mut pos_mass, mut neg_mass, mut neu_count) = (0.0, 0.0, 0.0);
        for &v in &valences {
            if v > 0.0 {
                pos_mass += v + 1.0;
            } else if v < 0.0 {
                neg_mass += v - 1.0;
            } else {
                neu_count += 1.0;
            }
        }
        if pos_mass > neg_mass.abs() {
            pos_mass += emphasis;
        } else if pos_mass < neg_mass.abs() {
            neg_mass -= emphasis;
        }
        let total = pos_mass + neg_mass.abs() + neu_count;
        SentimentScores {
            pos: (pos_mass / total).abs(),
            neg: (neg_mass / total).abs(),
            neu: (neu_count / total).abs(),
            compound: Some(compound),
            analyzer,
        }
    }
}

impl Analyzer for RulesAnalyzer {
    fn id(&self) -> AnalyzerId {
        AnalyzerId::RulesLex
    }

    fn analyze(&self, text: &str, _key: &ScoreKey<'_>) -> Result<SentimentScores, SentimentError> {
        Ok(self.score(text, AnalyzerId::RulesLex))
    }
}
