//! Author corpus: XML ingestion, truth labels, tweet cleaning and the
//! seeded train/test author split.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::LazyLock;

use quick_xml::events::{BytesCData, BytesEnd, BytesStart, BytesText, Event};
use quick_xml::{Reader, Writer};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of tweet slots per author.
pub const DEFAULT_TWEET_SLOTS: usize = 200;

/// Tokens masked by the data provider.
pub const MASK_TOKENS: [&str; 3] = ["#HASHTAG#", "#URL#", "#USER#"];

/// Tokens longer than this (in characters) are dropped by [`clean_tweet`].
pub const MAX_TOKEN_CHARS: usize = 30;

static HTML_ENTITY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"&#?[A-Za-z0-9]+;").expect("valid entity regex"));

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed XML{}: {message}", source_hint(.source_name))]
    MalformedXml {
        source_name: Option<String>,
        message: String,
    },
    #[error("author{} has no documents", source_hint(.source_name))]
    EmptyAuthor { source_name: Option<String> },
    #[error("truth file line {line}: expected `<id>:::<I|NI>`, got {content:?}")]
    BadLine { line: usize, content: String },
    #[error("duplicate author id {0:?}")]
    DuplicateId(String),
    #[error("too few authors to split: {0}")]
    TooFewAuthors(String),
    #[error("no truth label for author file {0}")]
    MissingLabel(String),
    #[error("no .xml author files found in {0}")]
    EmptyDirectory(String),
    #[error("corpus line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn source_hint(name: &Option<String>) -> String {
    name.as_ref()
        .map(|n| format!(" in {n}"))
        .unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, CorpusError>;

/// Author class. `Unknown` only appears for unlabeled (prediction) corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Ironic,
    NonIronic,
    Unknown,
}

impl Label {
    pub fn code(self) -> Option<&'static str> {
        match self {
            Label::Ironic => Some("I"),
            Label::NonIronic => Some("NI"),
            Label::Unknown => None,
        }
    }

    pub fn from_code(code: &str) -> Option<Label> {
        match code {
            "I" => Some(Label::Ironic),
            "NI" => Some(Label::NonIronic),
            _ => None,
        }
    }

    /// Binary target with the ironic class as positive.
    pub fn as_target(self) -> Option<bool> {
        match self {
            Label::Ironic => Some(true),
            Label::NonIronic => Some(false),
            Label::Unknown => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code().unwrap_or("unknown"))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.code().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = Option::<String>::deserialize(d)?;
        match code {
            None => Ok(Label::Unknown),
            Some(c) => Label::from_code(&c)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown label {c:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub author_id: String,
    pub label: Label,
    pub tweets: Vec<String>,
}

impl AuthorRecord {
    /// Returns a copy with every tweet passed through [`clean_tweet`].
    pub fn cleaned(&self) -> AuthorRecord {
        AuthorRecord {
            author_id: self.author_id.clone(),
            label: self.label,
            tweets: self.tweets.iter().map(|t| clean_tweet(t)).collect(),
        }
    }
}

/// A set of authors, each holding exactly `tweet_slots` tweets.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    authors: Vec<AuthorRecord>,
    tweet_slots: usize,
}

impl Corpus {
    /// Builds a corpus, cleaning tweets and padding (empty text) or truncating
    /// every author to `tweet_slots`. Author ids must be unique and non-empty.
    pub fn new(authors: Vec<AuthorRecord>, tweet_slots: usize) -> Result<Corpus> {
        assert!(tweet_slots > 0, "tweet_slots must be positive");
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(authors.len());
        for author in authors {
            if author.author_id.is_empty() {
                return Err(CorpusError::BadRecord {
                    line: out.len() + 1,
                    message: "empty author_id".into(),
                });
            }
            if !seen.insert(author.author_id.clone()) {
                return Err(CorpusError::DuplicateId(author.author_id));
            }
            let mut cleaned = author.cleaned();
            cleaned.tweets.resize(tweet_slots, String::new());
            out.push(cleaned);
        }
        Ok(Corpus {
            authors: out,
            tweet_slots,
        })
    }

    pub fn authors(&self) -> &[AuthorRecord] {
        &self.authors
    }

    pub fn tweet_slots(&self) -> usize {
        self.tweet_slots
    }

    pub fn len(&self) -> usize {
        self.authors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.authors.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.authors.iter().map(|a| a.author_id.as_str()).collect()
    }

    /// Sub-corpus with the given ids, kept in this corpus' order.
    pub fn subset(&self, ids: &BTreeSet<String>) -> Corpus {
        Corpus {
            authors: self
                .authors
                .iter()
                .filter(|a| ids.contains(&a.author_id))
                .cloned()
                .collect(),
            tweet_slots: self.tweet_slots,
        }
    }

    pub fn label_counts(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::new();
        for a in &self.authors {
            *counts.entry(a.label).or_insert(0) += 1;
        }
        counts
    }
}

/// Parses one PAN-style author file: `<author><documents><document>..</document>..</documents></author>`.
/// Tweet text is returned verbatim; the label is `Unknown`.
pub fn parse_author_xml(author_id: &str, bytes: &[u8]) -> Result<AuthorRecord> {
    let malformed = |message: String| CorpusError::MalformedXml {
        source_name: Some(author_id.to_string()),
        message,
    };
    let mut reader = Reader::from_reader(bytes);
    let mut buf = Vec::new();
    let mut stack: Vec<Vec<u8>> = Vec::new();
    let mut tweets = Vec::new();
    let mut current: Option<String> = None;
    let mut saw_author = false;
    let mut saw_documents = false;

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| malformed(format!("at byte {}: {e}", reader.buffer_position())))?;
        match event {
            Event::Start(start) => {
                let name = start.name().as_ref().to_vec();
                match (stack.last().map(Vec::as_slice), name.as_slice()) {
                    (None, b"author") => saw_author = true,
                    (Some(b"author"), b"documents") => saw_documents = true,
                    (Some(b"documents"), b"document") => current = Some(String::new()),
                    _ => {}
                }
                stack.push(name);
            }
            Event::Empty(start) => {
                let name = start.name();
                match (stack.last().map(Vec::as_slice), name.as_ref()) {
                    (None, b"author") => saw_author = true,
                    (Some(b"author"), b"documents") => saw_documents = true,
                    (Some(b"documents"), b"document") => tweets.push(String::new()),
                    _ => {}
                }
            }
            Event::End(end) => {
                let open = stack
                    .pop()
                    .ok_or_else(|| malformed("unbalanced end tag".into()))?;
                if open.as_slice() != end.name().as_ref() {
                    return Err(malformed(format!(
                        "mismatched end tag </{}>",
                        String::from_utf8_lossy(end.name().as_ref())
                    )));
                }
                if open == b"document" && stack.last().map(Vec::as_slice) == Some(b"documents") {
                    if let Some(text) = current.take() {
                        tweets.push(text);
                    }
                }
            }
            Event::Text(text) => {
                if let Some(cur) = current.as_mut() {
                    let unescaped = text
                        .unescape()
                        .map_err(|e| malformed(format!("bad text escape: {e}")))?;
                    cur.push_str(&unescaped);
                }
            }
            Event::CData(data) => {
                if let Some(cur) = current.as_mut() {
                    let raw = std::str::from_utf8(&data)
                        .map_err(|e| malformed(format!("invalid UTF-8 in CDATA: {e}")))?;
                    cur.push_str(raw);
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if !stack.is_empty() {
        return Err(malformed("unexpected end of input".into()));
    }
    if !saw_author || !saw_documents {
        return Err(malformed("missing <author>/<documents> structure".into()));
    }
    if tweets.is_empty() {
        return Err(CorpusError::EmptyAuthor {
            source_name: Some(author_id.to_string()),
        });
    }
    Ok(AuthorRecord {
        author_id: author_id.to_string(),
        label: Label::Unknown,
        tweets,
    })
}

/// Serializes an author in the layout [`parse_author_xml`] reads, each tweet as CDATA.
pub fn author_to_xml(author: &AuthorRecord) -> Vec<u8> {
    let mut writer = Writer::new(Vec::new());
    let write = |w: &mut Writer<Vec<u8>>, e: Event<'_>| w.write_event(e).expect("in-memory write");
    let mut root = BytesStart::new("author");
    root.push_attribute(("lang", "en"));
    write(&mut writer, Event::Start(root));
    write(&mut writer, Event::Text(BytesText::new("\n\t")));
    write(&mut writer, Event::Start(BytesStart::new("documents")));
    for tweet in &author.tweets {
        write(&mut writer, Event::Text(BytesText::new("\n\t\t")));
        write(&mut writer, Event::Start(BytesStart::new("document")));
        // CDATA cannot hold "]]>", so such tweets fall back to escaped text.
        if tweet.contains("]]>") {
            write(&mut writer, Event::Text(BytesText::new(tweet)));
        } else {
            write(&mut writer, Event::CData(BytesCData::new(tweet.as_str())));
        }
        write(&mut writer, Event::End(BytesEnd::new("document")));
    }
    write(&mut writer, Event::Text(BytesText::new("\n\t")));
    write(&mut writer, Event::End(BytesEnd::new("documents")));
    write(&mut writer, Event::Text(BytesText::new("\n")));
    write(&mut writer, Event::End(BytesEnd::new("author")));
    let mut out = writer.into_inner();
    out.push(b'\n');
    out
}

/// Parses `<id>:::<I|NI>` lines. Blank lines are ignored.
pub fn load_truth(text: &str) -> Result<BTreeMap<String, Label>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CorpusError::BadLine {
            line: i + 1,
            content: raw.to_string(),
        };
        let (id, code) = line.split_once(":::").ok_or_else(bad)?;
        let label = Label::from_code(code.trim()).ok_or_else(bad)?;
        let id = id.trim();
        if id.is_empty() {
            return Err(bad());
        }
        if map.insert(id.to_string(), label).is_some() {
            return Err(CorpusError::DuplicateId(id.to_string()));
        }
    }
    Ok(map)
}

/// Removes mask tokens, HTML entities and over-long tokens, then collapses whitespace.
///
/// An entity is replaced by a space, so `A&amp;M` becomes the two tokens `A M`.
pub fn clean_tweet(text: &str) -> String {
    let without_entities = HTML_ENTITY.replace_all(text, " ");
    without_entities
        .split_whitespace()
        .filter(|tok| !MASK_TOKENS.contains(tok))
        .filter(|tok| tok.chars().count() <= MAX_TOKEN_CHARS)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Disjoint train/test author ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_ids: BTreeSet<String>,
    pub test_ids: BTreeSet<String>,
    pub seed: u64,
    pub ratio: f64,
}

/// Seeded shuffle of the ids followed by a prefix (train) / suffix (test) cut
/// with `round(ratio * N)` training authors. Both sides must be non-empty.
pub fn split_users(ids: &[&str], ratio: f64, seed: u64) -> Result<SplitPlan> {
    let n = ids.len();
    if n < 2 {
        return Err(CorpusError::TooFewAuthors(format!(
            "need at least 2 authors, have {n}"
        )));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(CorpusError::TooFewAuthors(format!(
            "ratio {ratio} leaves one side of the split empty"
        )));
    }
    let n_train = (ratio * n as f64).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(CorpusError::TooFewAuthors(format!(
            "ratio {ratio} on {n} authors leaves one side of the split empty"
        )));
    }
    let mut order: Vec<&str> = ids.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    Ok(SplitPlan {
        train_ids: order[..n_train].iter().map(|s| s.to_string()).collect(),
        test_ids: order[n_train..].iter().map(|s| s.to_string()).collect(),
        seed,
        ratio,
    })
}

/// Reads a directory of `<author_id>.xml` files plus a truth file. Fails on the
/// first file that does not parse or has no truth entry. Output is sorted by id.
pub fn ingest_dir(xml_dir: &Path, truth_path: Option<&Path>) -> Result<Vec<AuthorRecord>> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| CorpusError::Io { path, source }
    };
    let truth = match truth_path {
        Some(p) => Some(load_truth(&std::fs::read_to_string(p).map_err(io_err(p))?)?),
        None => None,
    };
    let mut files: Vec<_> = std::fs::read_dir(xml_dir)
        .map_err(io_err(xml_dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "xml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CorpusError::EmptyDirectory(xml_dir.display().to_string()));
    }
    let parsed: Vec<Result<AuthorRecord>> = files
        .par_iter()
        .map(|path| {
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let bytes = std::fs::read(path).map_err(io_err(path))?;
            let mut record = parse_author_xml(&id, &bytes).map_err(|e| match e {
                CorpusError::MalformedXml { message, .. } => CorpusError::MalformedXml {
                    source_name: Some(path.display().to_string()),
                    message,
                },
                CorpusError::EmptyAuthor { .. } => CorpusError::EmptyAuthor {
                    source_name: Some(path.display().to_string()),
                },
                other => other,
            })?;
            if let Some(truth) = &truth {
                record.label = *truth
                    .get(&id)
                    .ok_or_else(|| CorpusError::MissingLabel(path.display().to_string()))?;
            }
            Ok(record)
        })
        .collect();
    let mut authors = parsed.into_iter().collect::<Result<Vec<_>>>()?;
    authors.sort_by(|a, b| a.author_id.cmp(&b.author_id));
    Ok(authors)
}

/// Writes one JSON object per author.
pub fn write_jsonl<W: Write>(mut out: W, authors: &[AuthorRecord]) -> std::io::Result<()> {
    for a in authors {
        serde_json::to_writer(&mut out, a)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<AuthorRecord>> {
    let mut authors = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: "<corpus>".into(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: AuthorRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::BadRecord {
                line: i + 1,
                message: e.to_string(),
            })?;
        authors.push(record);
    }
    Ok(authors)
}
