//! Lexicon + suffix-rule tagger over the 12-tag coarse universal tagset.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_apostrophe, LexicalError};

const BUILTIN_LEXICON: &str = include_str!("../../resources/tag_lexicon.tsv");
const BUILTIN_RULES: &str = include_str!("../../resources/suffix_rules.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Conj,
    Prt,
    Punct,
    X,
}

/// Fixed column order of a [`PosProfile`].
pub const TAGSET: [Tag; 12] = [
    Tag::Noun,
    Tag::Verb,
    Tag::Adj,
    Tag::Adv,
    Tag::Pron,
    Tag::Det,
    Tag::Adp,
    Tag::Num,
    Tag::Conj,
    Tag::Prt,
    Tag::Punct,
    Tag::X,
];

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "NOUN",
            Tag::Verb => "VERB",
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Pron => "PRON",
            Tag::Det => "DET",
            Tag::Adp => "ADP",
            Tag::Num => "NUM",
            Tag::Conj => "CONJ",
            Tag::Prt => "PRT",
            Tag::Punct => "PUNCT",
            Tag::X => "X",
        }
    }

    fn column(self) -> usize {
        TAGSET
            .iter()
            .position(|&t| t == self)
            .expect("tag in tagset")
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TAGSET
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown tag {s:?}"))
    }
}

/// One ordered fallback rule. Shapes are written `<digits>`, `<punct>` or
/// `<symbol>` in rule files; anything else is a suffix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SuffixRule {
    Digits(Tag),
    Punct(Tag),
    Symbol(Tag),
    Suffix(String, Tag),
}

impl SuffixRule {
    fn apply(&self, token: &str) -> Option<Tag> {
        match self {
            SuffixRule::Digits(tag) => {
                let has_digit = token.chars().any(|c| c.is_ascii_digit());
                let numeric = token
                    .chars()
                    .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | ':' | '/'));
                (has_digit && numeric).then_some(*tag)
            }
            SuffixRule::Punct(tag) => (!token.is_empty()
                && token.chars().all(|c| c.is_ascii_punctuation()))
            .then_some(*tag),
            SuffixRule::Symbol(tag) => {
                (!token.is_empty() && !token.chars().any(char::is_alphanumeric)).then_some(*tag)
            }
            SuffixRule::Suffix(suffix, tag) => (token.chars().count()
                >= suffix.chars().count() + 2
                && token.ends_with(suffix.as_str()))
            .then_some(*tag),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosTagger {
    lexicon: BTreeMap<String, Tag>,
    rules: Vec<SuffixRule>,
}

fn parse_lines(text: &str) -> Result<Vec<(usize, String, Tag)>, LexicalError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, tag) = line.split_once('\t').ok_or(LexicalError::BadResourceLine {
            line: i + 1,
            message: "expected `key<TAB>TAG`".into(),
        })?;
        let tag = tag
            .trim()
            .parse::<Tag>()
            .map_err(|message| LexicalError::BadResourceLine {
                line: i + 1,
                message,
            })?;
        out.push((i + 1, key.trim().to_string(), tag));
    }
    Ok(out)
}

impl PosTagger {
    /// Tag lexicon lines are `token<TAB>TAG`; rule lines are `suffix_or_shape<TAB>TAG`, in priority order.
    pub fn from_resources(lexicon: &str, rules: &str) -> Result<PosTagger, LexicalError> {
        let lexicon = parse_lines(lexicon)?
            .into_iter()
            .map(|(_, tok, tag)| (tok.to_lowercase(), tag))
            .collect();
        let rules = parse_lines(rules)?
            .into_iter()
            .map(|(line, key, tag)| match key.as_str() {
                "<digits>" => Ok(SuffixRule::Digits(tag)),
                "<punct>" => Ok(SuffixRule::Punct(tag)),
                "<symbol>" => Ok(SuffixRule::Symbol(tag)),
                k if k.starts_with('<') => Err(LexicalError::BadResourceLine {
                    line,
                    message: format!("unknown shape {k}"),
                }),
                _ => Ok(SuffixRule::Suffix(key.to_lowercase(), tag)),
            })
            .collect::<Result<_, _>>()?;
        Ok(PosTagger { lexicon, rules })
    }

    pub fn builtin() -> PosTagger {
        PosTagger::from_resources(BUILTIN_LEXICON, BUILTIN_RULES)
            .expect("bundled tag resources parse")
    }

    /// Lexicon first, then the first matching rule, else NOUN.
    pub fn tag_token(&self, token: &str) -> Tag {
        if let Some(&tag) = self.lexicon.get(token) {
            return tag;
        }
        self.rules
            .iter()
            .find_map(|r| r.apply(token))
            .unwrap_or(Tag::Noun)
    }

    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<Tag> {
        tokens.iter().map(|t| self.tag_token(t.as_ref())).collect()
    }
}

/// Tokens for tagging: like [`super::tokenize`] but every non-space,
/// non-alphanumeric character is kept as its own token.
pub fn pos_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if is_apostrophe(ch) {
            continue;
        }
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
            continue;
        }
        if !cur.is_empty() {
            tokens.push(std::mem::take(&mut cur));
        }
        if !ch.is_whitespace() {
            tokens.push(ch.to_string());
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

/// Relative tag frequencies in [`TAGSET`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosProfile(pub [f64; 12]);

impl PosProfile {
    pub fn from_tags(tags: &[Tag]) -> PosProfile {
        let mut counts = [0usize; 12];
        for t in tags {
            counts[t.column()] += 1;
        }
        let total = tags.len();
        let mut out = [0.0; 12];
        if total > 0 {
            for (o, c) in out.iter_mut().zip(counts) {
                *o = c as f64 / total as f64;
            }
        }
        PosProfile(out)
    }
}

/// Tag profile over all of an author's tweets; an author with no tokens gets zeros.
pub fn pos_unigrams<S: AsRef<str>>(tweets: &[S], tagger: &PosTagger) -> PosProfile {
    let tags: Vec<Tag> = tweets
        .iter()
        .flat_map(|t| tagger.tag(&pos_tokens(t.as_ref())))
        .collect();
    PosProfile::from_tags(&tags)
}
