//! Synthetic labeled author corpora with a tunable amount of class signal.
//!
//! Both classes share one filler vocabulary and the same masking noise. With
//! probability `signal` a tweet also carries a marker term exclusive to its
//! author's class, and independently a sentiment word skewed towards that
//! class (positive for ironic authors, negative otherwise). At `signal = 0`
//! the classes are identically distributed.

use std::path::Path;

use irony_core::corpus::{author_to_xml, write_jsonl, AuthorRecord, Label};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

const FILLER: &[&str] = &[
    "the", "a", "to", "and", "of", "in", "is", "it", "for", "on", "that", "this", "with", "my",
    "you", "at", "be", "was", "are", "have", "just", "so", "we", "all", "about", "what", "out",
    "up", "today", "now", "time", "day", "people", "new", "know", "get", "one", "more", "like",
    "when", "week", "work", "going", "back", "home", "game", "news", "night", "morning", "city",
    "team", "phone", "coffee", "train", "weather", "music", "movie", "book", "school", "office",
    "store", "street", "car", "bus", "dinner", "lunch", "weekend", "monday", "friday", "year",
    "really", "still", "again", "never", "always", "maybe", "after", "before", "while", "because",
    "there", "here", "watch", "read", "play", "make", "take", "see", "think", "say", "look",
    "want", "need", "call", "wait", "try", "start", "finish", "open", "close", "run", "walk",
    "talk", "show", "post", "update", "photo", "video", "link",
];

const IRONIC_MARKERS: &[&str] = &[
    "obviously",
    "totally",
    "sooo",
    "yeahright",
    "clearly",
    "shocking",
];
const PLAIN_MARKERS: &[&str] = &[
    "reportedly",
    "schedule",
    "announced",
    "meeting",
    "official",
    "briefing",
];

/// Words from the bundled sentiment lexicon.
const POSITIVE: &[&str] = &[
    "great",
    "love",
    "amazing",
    "awesome",
    "happy",
    "best",
    "fantastic",
    "wonderful",
];
const NEGATIVE: &[&str] = &[
    "bad", "hate", "awful", "horrible", "terrible", "sad", "worst", "fail",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub authors: usize,
    pub tweets: usize,
    pub signal: f64,
    pub seed: u64,
}

fn tweet(rng: &mut ChaCha8Rng, ironic: bool, signal: f64) -> String {
    let mut words: Vec<String> = Vec::new();
    if rng.random_bool(0.2) {
        words.push("#USER#".into());
    }
    let len = rng.random_range(6..=14);
    for _ in 0..len {
        // squared uniform skews draws towards the head of the list
        let u: f64 = rng.random();
        words.push(FILLER[((u * u) * FILLER.len() as f64) as usize].to_string());
    }
    // class-independent sentiment background
    if rng.random_bool(0.25) {
        let pool = if rng.random_bool(0.5) {
            POSITIVE
        } else {
            NEGATIVE
        };
        let w = *pool.choose(rng).expect("non-empty");
        insert(rng, &mut words, w);
    }
    if rng.random_bool(signal) {
        let pool = if ironic {
            IRONIC_MARKERS
        } else {
            PLAIN_MARKERS
        };
        let w = *pool.choose(rng).expect("non-empty");
        insert(rng, &mut words, w);
    }
    if rng.random_bool(signal) {
        let pool = if ironic { POSITIVE } else { NEGATIVE };
        let w = *pool.choose(rng).expect("non-empty");
        insert(rng, &mut words, w);
    }
    if rng.random_bool(0.1) {
        insert(rng, &mut words, "&amp;");
    }
    if rng.random_bool(0.15) {
        words.push("#HASHTAG#".into());
    }
    if rng.random_bool(0.15) {
        words.push("#URL#".into());
    }
    words.join(" ")
}

fn insert(rng: &mut ChaCha8Rng, words: &mut Vec<String>, w: &str) {
    let at = rng.random_range(0..=words.len());
    words.insert(at, w.to_string());
}

/// Even-indexed authors are ironic, so labels are exactly balanced.
pub fn generate(params: &SynthParams) -> Result<Vec<AuthorRecord>, CliError> {
    if params.authors < 2 || !params.authors.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "authors must be a positive even number, got {}",
            params.authors
        )));
    }
    if params.tweets == 0 {
        return Err(CliError::Usage("tweets must be positive".into()));
    }
    if !(0.0..=1.0).contains(&params.signal) {
        return Err(CliError::Usage(format!(
            "signal must lie in [0, 1], got {}",
            params.signal
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok((0..params.authors)
        .map(|i| {
            let ironic = i % 2 == 0;
            AuthorRecord {
                author_id: format!("author{i:04}"),
                label: if ironic {
                    Label::Ironic
                } else {
                    Label::NonIronic
                },
                tweets: (0..params.tweets)
                    .map(|_| tweet(&mut rng, ironic, params.signal))
                    .collect(),
            }
        })
        .collect())
}

/// Writes `corpus.jsonl`, `truth.txt` and one XML file per author under `xml/`.
pub fn write(out: &Path, authors: &[AuthorRecord]) -> Result<(), CliError> {
    let xml_dir = out.join("xml");
    std::fs::create_dir_all(&xml_dir).map_err(|e| CliError::io(&xml_dir, e))?;
    let mut truth = String::new();
    for a in authors {
        let path = xml_dir.join(format!("{}.xml", a.author_id));
        std::fs::write(&path, author_to_xml(a)).map_err(|e| CliError::io(&path, e))?;
        truth.push_str(&format!("{}:::{}\n", a.author_id, a.label));
    }
    let truth_path = out.join("truth.txt");
    std::fs::write(&truth_path, truth).map_err(|e| CliError::io(&truth_path, e))?;
    let corpus_path = out.join("corpus.jsonl");
    let mut buf = Vec::new();
    write_jsonl(&mut buf, authors).map_err(|e| CliError::io(&corpus_path, e))?;
    std::fs::write(&corpus_path, buf).map_err(|e| CliError::io(&corpus_path, e))?;
    Ok(())
}
