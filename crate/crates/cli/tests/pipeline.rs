use std::path::{Path, PathBuf};
use std::process::Command;

use irony_cli::config::RunConfig;
use irony_cli::error::CliError;
use irony_cli::pipeline::{self, GridModel, Manifest, ModelKind, PredictInput};
use irony_cli::synth::{self, SynthParams};
use irony_core::features::Feature;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
    cfg: RunConfig,
}

impl Fixture {
    fn new(signal: f64, seed: u64) -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let authors = synth::generate(&SynthParams {
            authors: 40,
            tweets: 20,
            signal,
            seed,
        })
        .unwrap();
        synth::write(&dir.path().join("synth"), &authors).unwrap();
        let cfg = RunConfig {
            seed,
            tweet_slots: 20,
            ..RunConfig::default()
        };
        Fixture { dir, cfg }
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    fn featurize(&self) -> Manifest {
        pipeline::featurize(
            &self.cfg,
            &self.path("synth/corpus.jsonl"),
            &self.path("feat"),
        )
        .unwrap()
    }
}

fn irony(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_irony"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn default_featurize_writes_twenty_blocks() {
    let f = Fixture::new(0.3, 1);
    let m = f.featurize();
    assert_eq!(m.features.len(), 20);
    assert_eq!((m.train_ids.len(), m.test_ids.len()), (28, 12));
    let train = pipeline::read_matrix(&f.path("feat/train.irfm")).unwrap();
    assert_eq!(train.fingerprint(), m.fingerprint);
    assert_eq!(
        train.cols(),
        m.features.iter().map(|e| e.dim).sum::<usize>()
    );
    for name in ["extractors.json", "manifest.json", "test.irfm"] {
        assert!(f.path("feat").join(name).exists(), "{name}");
    }
}

#[test]
fn single_feature_gives_one_column() {
    let mut f = Fixture::new(0.3, 2);
    f.cfg.features = vec![Feature::MeanLen];
    let m = f.featurize();
    assert_eq!(m.features.len(), 1);
    assert_eq!(
        pipeline::read_matrix(&f.path("feat/train.irfm"))
            .unwrap()
            .cols(),
        1
    );
}

#[test]
fn corrupt_matrix_header_is_rejected() {
    let f = Fixture::new(0.3, 3);
    f.featurize();
    let p = f.path("feat/train.irfm");
    let mut bytes = std::fs::read(&p).unwrap();
    bytes[0] ^= 0xff;
    std::fs::write(&p, bytes).unwrap();
    let e = pipeline::read_matrix(&p).unwrap_err();
    assert!(matches!(e, CliError::Matrix { .. }), "{e}");
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn wrong_layout_fails_prediction() {
    let f = Fixture::new(0.3, 4);
    f.featurize();
    let model = f.path("model.json");
    pipeline::train(
        &f.cfg,
        &f.path("feat"),
        ModelKind::BaselineLr,
        &[],
        None,
        &model,
    )
    .unwrap();
    // a matrix featurized with a different vocabulary cutoff has another tf-idf width
    let mut other = f.cfg.clone();
    other.min_df = 0.3;
    pipeline::featurize(&other, &f.path("synth/corpus.jsonl"), &f.path("other")).unwrap();
    let e = pipeline::predict(
        &model,
        PredictInput::Matrix(&f.path("other/test.irfm")),
        &f.path("p.csv"),
    )
    .unwrap_err();
    assert!(matches!(e, CliError::FingerprintMismatch { .. }), "{e}");
    assert_eq!(e.exit_code(), 65);
}

#[test]
fn ingest_errors_name_their_inputs() {
    let f = Fixture::new(0.3, 5);
    let missing = f.path("nowhere/truth.txt");
    let e = pipeline::ingest(&f.path("synth/xml"), Some(&missing), &f.path("c.jsonl")).unwrap_err();
    assert!(e.to_string().contains("truth.txt"), "{e}");
    std::fs::create_dir(f.path("empty")).unwrap();
    assert!(pipeline::ingest(&f.path("empty"), None, &f.path("c.jsonl")).is_err());
}

#[test]
fn ingest_round_trips_synthetic_xml() {
    let f = Fixture::new(0.3, 6);
    let out = f.path("ingested.jsonl");
    let summary =
        pipeline::ingest(&f.path("synth/xml"), Some(&f.path("synth/truth.txt")), &out).unwrap();
    assert_eq!(
        (
            summary.authors,
            summary.ironic,
            summary.non_ironic,
            summary.unknown
        ),
        (40, 20, 20, 0)
    );
    let a = pipeline::load_corpus(&out, 20).unwrap();
    let b = pipeline::load_corpus(&f.path("synth/corpus.jsonl"), 20).unwrap();
    assert_eq!(a.ids(), b.ids());
}

#[test]
fn selection_is_structured_and_reproducible() {
    let f = Fixture::new(0.3, 7);
    f.featurize();
    pipeline::select(&f.cfg, &f.path("feat"), &f.path("sel1")).unwrap();
    pipeline::select(&f.cfg, &f.path("feat"), &f.path("sel2")).unwrap();
    let rows = |name: &str| {
        std::fs::read_to_string(f.path("sel1").join(name))
            .unwrap()
            .lines()
            .count()
            - 1
    };
    assert_eq!(rows("selection_topic.csv"), 7);
    assert_eq!(rows("selection_lexical.csv"), 7);
    assert_eq!(rows("selection_sentiment.csv"), 40);
    for entry in std::fs::read_dir(f.path("sel1")).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(
            std::fs::read(f.path("sel1").join(&name)).unwrap(),
            std::fs::read(f.path("sel2").join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn baselines_and_final_model_train_and_evaluate() {
    let f = Fixture::new(1.0, 8);
    f.featurize();
    let feat = f.path("feat");
    for kind in [ModelKind::BaselineLr, ModelKind::BaselineRf] {
        let model = f.path("m.json");
        let a = pipeline::train(&f.cfg, &feat, kind, &[], None, &model).unwrap();
        assert_eq!(a.features, vec![Feature::Tfidf]);
        let m = pipeline::evaluate(&model, &feat.join("test.irfm"), &f.path("eval")).unwrap();
        assert_eq!(m.rows, 12);
    }
    let model = f.path("final.json");
    let list = [Feature::CompoundVader, Feature::Tfidf];
    pipeline::train(&f.cfg, &feat, ModelKind::FinalRf, &list, None, &model).unwrap();
    let m = pipeline::evaluate(&model, &feat.join("test.irfm"), &f.path("eval")).unwrap();
    // every tweet carries a class marker at full signal
    assert_eq!(m.f1, 1.0);
    for name in ["metrics.json", "roc.csv", "confusion.csv"] {
        assert!(f.path("eval").join(name).exists(), "{name}");
    }
}

#[test]
fn corpus_prediction_matches_matrix_prediction() {
    let f = Fixture::new(0.5, 9);
    f.featurize();
    let model = f.path("final.json");
    let list = [Feature::MeanLen, Feature::Tfidf, Feature::MaxProbabilities];
    pipeline::train(
        &f.cfg,
        &f.path("feat"),
        ModelKind::FinalRf,
        &list,
        None,
        &model,
    )
    .unwrap();
    let from_matrix = pipeline::predict(
        &model,
        PredictInput::Matrix(&f.path("feat/test.irfm")),
        &f.path("a.csv"),
    )
    .unwrap();
    let from_corpus = pipeline::predict(
        &model,
        PredictInput::Corpus {
            corpus: &f.path("synth/corpus.jsonl"),
            extractors: &f.path("feat/extractors.json"),
        },
        &f.path("b.csv"),
    )
    .unwrap();
    assert_eq!(from_corpus.len(), 40);
    for p in &from_matrix {
        let q = from_corpus
            .iter()
            .find(|q| q.author_id == p.author_id)
            .unwrap();
        assert_eq!((p.score, p.label), (q.score, q.label), "{}", p.author_id);
    }
    let csv = std::fs::read_to_string(f.path("a.csv")).unwrap();
    assert!(csv.starts_with("author_id,score,label\n"));
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn grid_search_writes_every_candidate() {
    let f = Fixture::new(0.3, 10);
    f.featurize();
    let g = pipeline::grid(
        &f.cfg,
        &f.path("feat"),
        GridModel::Lr,
        &[Feature::Tfidf],
        &f.path("grid"),
    )
    .unwrap();
    assert_eq!(g.candidates, 3);
    let csv = std::fs::read_to_string(f.path("grid/grid_lr.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(
        csv.lines().skip(1).filter(|l| l.ends_with(",true")).count(),
        1
    );
}

#[test]
fn binary_reports_errors_with_exit_codes() {
    let f = Fixture::new(0.3, 11);
    let out = irony(&[
        "featurize",
        "--corpus",
        s(&f.path("missing.jsonl")),
        "--out",
        s(&f.path("feat")),
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.jsonl"));

    std::fs::write(f.path("bad.conf"), "seed = 3\nfolds = lots\n").unwrap();
    let out = irony(&[
        "--config",
        s(&f.path("bad.conf")),
        "synth",
        "--out",
        s(&f.path("x")),
    ]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.conf") && err.contains("line 2"), "{err}");

    let out = irony(&["--set", "nonsense=1", "synth", "--out", s(&f.path("x"))]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn binary_flags_override_config_file() {
    let f = Fixture::new(0.3, 12);
    std::fs::write(
        f.path("run.conf"),
        "seed = 3\ntweet_slots = 20\nfeatures = mean_len\n",
    )
    .unwrap();
    let out = irony(&[
        "--config",
        s(&f.path("run.conf")),
        "--seed",
        "5",
        "--jobs",
        "1",
        "featurize",
        "--corpus",
        s(&f.path("synth/corpus.jsonl")),
        "--out",
        s(&f.path("feat")),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m: Manifest = pipeline::read_json(&f.path("feat/manifest.json")).unwrap();
    assert_eq!((m.seed, m.tweet_slots, m.features.len()), (5, 20, 1));
}
