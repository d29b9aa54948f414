//! The commands behind the `irony` binary. Every artifact records the root
//! seed and the config hash; nothing time- or path-dependent is written, so
//! equal inputs give byte-identical outputs.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use irony_core::corpus::{ingest_dir, read_jsonl, split_users, write_jsonl, Corpus, Label};
use irony_core::eval::{self, pca2, roc_auc, write_pca_csv, write_roc_csv, ConfusionMatrix};
use irony_core::features::{
    assemble, canonical_order, Category, ExtractorConfig, Feature, FeatureMatrix, FittedExtractors,
};
use irony_core::learn::{
    forest_grid, grid_search, logreg_grid, make_folds, make_stratified_folds, select_exhaustive,
    select_stagewise, selection_forest, svm_grid, write_grid_csv, write_selection_csv, CvPlan,
    ModelSpec, SelectionReport, TrainedModel,
};
use irony_core::lexical::{tokenize, top_terms_per_label, TfidfRow, TopTerms};
use irony_core::seed::named_seed;
use irony_core::sentiment::{Lexicon, RuleConfig, RulesAnalyzer, ScoreTable, SecondaryAnalyzer};
use irony_core::topics::{select_k, LdaParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

pub const TRAIN_MATRIX: &str = "train.irfm";
pub const TEST_MATRIX: &str = "test.irfm";
pub const EXTRACTORS: &str = "extractors.json";
pub const MANIFEST: &str = "manifest.json";
pub const SELECTION: &str = "selection.json";

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::json(path, e))?;
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| CliError::json(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Renders into memory, then writes the file in one go.
fn write_with<F, E>(path: &Path, render: F) -> Result<(), CliError>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), E>,
    CliError: From<E>,
{
    let mut buf = Vec::new();
    render(&mut buf)?;
    write_bytes(path, &buf)
}

fn require(path: &Path) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::MissingPath(path.display().to_string()))
    }
}

pub fn read_matrix(path: &Path) -> Result<FeatureMatrix, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    FeatureMatrix::read_binary(BufReader::new(file)).map_err(|source| CliError::Matrix {
        path: path.display().to_string(),
        source,
    })
}

fn write_matrix(path: &Path, m: &FeatureMatrix) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    m.write_binary(&mut out)
        .map_err(|source| CliError::Matrix {
            path: path.display().to_string(),
            source,
        })?;
    out.flush().map_err(|e| CliError::io(path, e))
}

fn targets(m: &FeatureMatrix, path: &Path) -> Result<Vec<bool>, CliError> {
    m.targets()
        .ok_or_else(|| CliError::Unlabeled(path.display().to_string()))
}

/// Ironic / non-ironic / unknown author counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub authors: usize,
    pub ironic: usize,
    pub non_ironic: usize,
    pub unknown: usize,
}

pub fn ingest(xml_dir: &Path, truth: Option<&Path>, out: &Path) -> Result<IngestSummary, CliError> {
    require(xml_dir)?;
    let authors = ingest_dir(xml_dir, truth)?;
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &authors).map_err(|e| CliError::io(out, e))?;
    write_bytes(out, &buf)?;
    let count = |l: Label| authors.iter().filter(|a| a.label == l).count();
    Ok(IngestSummary {
        authors: authors.len(),
        ironic: count(Label::Ironic),
        non_ironic: count(Label::NonIronic),
        unknown: count(Label::Unknown),
    })
}

pub fn load_corpus(path: &Path, tweet_slots: usize) -> Result<Corpus, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(Corpus::new(read_jsonl(BufReader::new(file))?, tweet_slots)?)
}

fn analyzers(cfg: &RunConfig) -> Result<(RulesAnalyzer, SecondaryAnalyzer), CliError> {
    let lexicon = |p: &PathBuf| -> Result<Lexicon, CliError> {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
        Ok(Lexicon::parse(&text)?)
    };
    let rules = match &cfg.rules_lexicon {
        Some(p) => RulesAnalyzer::new(lexicon(p)?, RuleConfig::default()),
        None => RulesAnalyzer::builtin(),
    };
    let secondary = match (&cfg.secondary_scores, &cfg.secondary_lexicon) {
        (Some(p), _) => {
            let file = File::open(p).map_err(|e| CliError::io(p, e))?;
            SecondaryAnalyzer::Ingested(ScoreTable::read_jsonl(BufReader::new(file))?)
        }
        (None, Some(p)) => SecondaryAnalyzer::plain_lexicon(lexicon(p)?),
        (None, None) => SecondaryAnalyzer::plain_lexicon(Lexicon::builtin()),
    };
    Ok((rules, secondary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub name: String,
    pub category: Category,
    pub dim: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub config_hash: String,
    pub config: BTreeMap<String, String>,
    pub tweet_slots: usize,
    pub lda_topics: usize,
    pub perplexities: Vec<(usize, f64)>,
    pub vocab_size: usize,
    pub fingerprint: String,
    pub features: Vec<FeatureEntry>,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub split_seed: u64,
}

fn config_map(cfg: &RunConfig) -> BTreeMap<String, String> {
    cfg.render()
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Splits authors, fits every extractor on the training side only and writes
/// both matrices, the fitted extractors and a manifest into `out`.
pub fn featurize(cfg: &RunConfig, corpus_path: &Path, out: &Path) -> Result<Manifest, CliError> {
    require(corpus_path)?;
    let corpus = load_corpus(corpus_path, cfg.tweet_slots)?;
    let split_seed = named_seed(cfg.seed, "split");
    let plan = split_users(&corpus.ids(), cfg.split_ratio, split_seed)?;
    let train = corpus.subset(&plan.train_ids);
    let test = corpus.subset(&plan.test_ids);

    let mut extractor: ExtractorConfig = cfg.extractor_config();
    let mut perplexities = Vec::new();
    if cfg.select_k
        && cfg.features.iter().any(|f| {
            matches!(
                f,
                Feature::MaxProbabilities | Feature::DominantTopicUser | Feature::ArgmaxTopic
            )
        })
    {
        let docs: Vec<Vec<String>> = train
            .authors()
            .iter()
            .flat_map(|a| a.tweets.iter().map(|t| tokenize(t)))
            .filter(|d| !d.is_empty())
            .collect();
        let base = LdaParams {
            seed: named_seed(cfg.seed, "select-k"),
            ..extractor.lda_params()
        };
        let chosen = select_k(&docs, cfg.k_min, cfg.k_max, base, 0.1, cfg.infer_iterations)?;
        extractor.lda_topics = chosen.best_k;
        perplexities = chosen.perplexities;
        let mut csv = String::from("topics,perplexity\n");
        for (k, p) in &perplexities {
            csv.push_str(&format!("{k},{p}\n"));
        }
        write_bytes(&out.join("perplexity.csv"), csv.as_bytes())?;
    }

    let (rules, secondary) = analyzers(cfg)?;
    let fx = FittedExtractors::fit(&train, &cfg.features, extractor.clone(), rules, secondary)?;
    let train_m = assemble(&train, &fx, &cfg.features)?;
    let test_m = assemble(&test, &fx, &cfg.features)?;

    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    write_matrix(&out.join(TRAIN_MATRIX), &train_m)?;
    write_matrix(&out.join(TEST_MATRIX), &test_m)?;
    write_json(&out.join(EXTRACTORS), &fx)?;

    let h = train_m.header();
    let manifest = Manifest {
        seed: cfg.seed,
        config_hash: cfg.hash(),
        config: config_map(cfg),
        tweet_slots: cfg.tweet_slots,
        lda_topics: extractor.lda_topics,
        perplexities,
        vocab_size: h.vocab_size,
        fingerprint: h.fingerprint.clone(),
        features: h
            .features
            .iter()
            .zip(&h.dims)
            .zip(&h.offsets)
            .map(|((f, &dim), &offset)| FeatureEntry {
                name: f.name().to_string(),
                category: f.category(),
                dim,
                offset,
            })
            .collect(),
        train_ids: train_m.author_ids().to_vec(),
        test_ids: test_m.author_ids().to_vec(),
        split_seed,
    };
    write_json(&out.join(MANIFEST), &manifest)?;
    Ok(manifest)
}

fn fold_plan(cfg: &RunConfig, y: &[bool]) -> Result<CvPlan, CliError> {
    let seed = named_seed(cfg.seed, "folds");
    Ok(if cfg.stratified_folds {
        make_stratified_folds(y, cfg.folds, seed)?
    } else {
        make_folds(y.len(), cfg.folds, seed, cfg.shuffled_folds)?
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryChoice {
    pub category: Category,
    pub features: Vec<Feature>,
    pub mean_f1: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub seed: u64,
    pub config_hash: String,
    pub folds: usize,
    pub fold_seed: u64,
    pub classifier: ModelSpec,
    pub categories: Vec<CategoryChoice>,
    /// Union of the per-category winners in canonical order.
    pub selected: Vec<Feature>,
}

fn category_file(c: Category) -> &'static str {
    match c {
        Category::Sentiment => "selection_sentiment.csv",
        Category::Topic => "selection_topic.csv",
        Category::Lexical => "selection_lexical.csv",
        Category::Auxiliary => "selection_auxiliary.csv",
    }
}

/// Per-category wrapper selection on the training matrix. Categories of up to
/// four features are searched exhaustively; larger ones go stagewise.
pub fn select(
    cfg: &RunConfig,
    features_dir: &Path,
    out: &Path,
) -> Result<SelectionSummary, CliError> {
    let path = features_dir.join(TRAIN_MATRIX);
    let m = read_matrix(&path)?;
    let y = targets(&m, &path)?;
    let plan = fold_plan(cfg, &y)?;
    let classifier = selection_forest();
    let cv_seed = named_seed(cfg.seed, "select");
    let evaluate = |subset: &[Feature]| {
        let sub = m
            .select(subset)
            .map_err(|e| irony_core::learn::LearnError::InvalidParams(e.to_string()))?;
        irony_core::learn::cv_f1(sub.values(), &y, &classifier, &plan, cv_seed)
    };
    let mut categories = Vec::new();
    for category in [
        Category::Sentiment,
        Category::Topic,
        Category::Lexical,
        Category::Auxiliary,
    ] {
        let present: Vec<Feature> = Feature::in_category(category)
            .into_iter()
            .filter(|f| m.block(*f).is_some())
            .collect();
        if present.is_empty() {
            continue;
        }
        let report: SelectionReport<Feature> = if present.len() <= 4 {
            select_exhaustive(&present, evaluate)?
        } else {
            select_stagewise(&present, cfg.top.min(present.len() - 1), evaluate)?
        };
        let csv = out.join(category_file(category));
        write_with(&csv, |buf| write_selection_csv(buf, &report))?;
        let best = report.best_row();
        categories.push(CategoryChoice {
            category,
            features: best.features.clone(),
            mean_f1: best.score.mean_f1,
            rows: report.rows.len(),
        });
    }
    let union: Vec<Feature> = categories
        .iter()
        .flat_map(|c| c.features.iter().copied())
        .collect();
    let summary = SelectionSummary {
        seed: cfg.seed,
        config_hash: cfg.hash(),
        folds: cfg.folds,
        fold_seed: plan.seed,
        classifier,
        categories,
        selected: canonical_order(&union),
    };
    write_json(&out.join(SELECTION), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridModel {
    Rf,
    Lr,
    Svm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub seed: u64,
    pub config_hash: String,
    pub model: GridModel,
    pub features: Vec<Feature>,
    pub candidates: usize,
    pub best: ModelSpec,
    pub best_mean_f1: f64,
}

/// Feature list from an explicit list, else a selection summary, else `fallback`.
pub fn resolve_features(
    explicit: Option<&[Feature]>,
    selection: Option<&Path>,
    fallback: &[Feature],
) -> Result<Vec<Feature>, CliError> {
    if let Some(list) = explicit {
        return Ok(list.to_vec());
    }
    if let Some(p) = selection {
        let s: SelectionSummary = read_json(p)?;
        return Ok(s.selected);
    }
    Ok(fallback.to_vec())
}

fn select_blocks(
    m: &FeatureMatrix,
    features: &[Feature],
    path: &Path,
) -> Result<FeatureMatrix, CliError> {
    for f in features {
        if m.block(*f).is_none() {
            return Err(CliError::MissingFeature {
                path: path.display().to_string(),
                feature: f.name().to_string(),
            });
        }
    }
    m.select(features).map_err(|source| CliError::Matrix {
        path: path.display().to_string(),
        source,
    })
}

pub fn grid(
    cfg: &RunConfig,
    features_dir: &Path,
    model: GridModel,
    features: &[Feature],
    out: &Path,
) -> Result<GridSummary, CliError> {
    let path = features_dir.join(TRAIN_MATRIX);
    let m = read_matrix(&path)?;
    let y = targets(&m, &path)?;
    let sub = select_blocks(&m, features, &path)?;
    let plan = fold_plan(cfg, &y)?;
    let candidates = match model {
        GridModel::Rf => forest_grid(),
        GridModel::Lr => logreg_grid(),
        GridModel::Svm => svm_grid(),
    };
    let result = grid_search(
        sub.values(),
        &y,
        &candidates,
        &plan,
        named_seed(cfg.seed, "grid"),
    )?;
    let name = match model {
        GridModel::Rf => "rf",
        GridModel::Lr => "lr",
        GridModel::Svm => "svm",
    };
    write_with(&out.join(format!("grid_{name}.csv")), |buf| {
        write_grid_csv(buf, &result)
    })?;
    let summary = GridSummary {
        seed: cfg.seed,
        config_hash: cfg.hash(),
        model,
        features: features.to_vec(),
        candidates: result.rows.len(),
        best: *result.best_spec(),
        best_mean_f1: result.rows[result.best].score.mean_f1,
    };
    write_json(&out.join(format!("grid_{name}.json")), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    BaselineLr,
    BaselineRf,
    FinalRf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub kind: ModelKind,
    pub features: Vec<Feature>,
    pub fingerprint: String,
    pub tweet_slots: usize,
    pub seed: u64,
    pub model_seed: u64,
    pub config_hash: String,
    pub spec: ModelSpec,
    pub model: TrainedModel,
}

/// Baselines use the TF-IDF block alone; the final forest uses `features`
/// and, when given, the forest parameters a grid search picked.
pub fn train(
    cfg: &RunConfig,
    features_dir: &Path,
    kind: ModelKind,
    features: &[Feature],
    grid_result: Option<&Path>,
    out: &Path,
) -> Result<ModelArtifact, CliError> {
    let path = features_dir.join(TRAIN_MATRIX);
    let m = read_matrix(&path)?;
    let y = targets(&m, &path)?;
    let (features, spec) = match kind {
        ModelKind::BaselineLr => (vec![Feature::Tfidf], ModelSpec::LogReg { c: 1.0 }),
        ModelKind::BaselineRf => (vec![Feature::Tfidf], selection_forest()),
        ModelKind::FinalRf => {
            let spec = match grid_result {
                Some(p) => {
                    let g: GridSummary = read_json(p)?;
                    if !matches!(g.best, ModelSpec::Forest(_)) {
                        return Err(CliError::Usage(format!(
                            "{}: not a forest grid result",
                            p.display()
                        )));
                    }
                    g.best
                }
                None => selection_forest(),
            };
            (features.to_vec(), spec)
        }
    };
    if features.is_empty() {
        return Err(CliError::Usage("no features to train on".into()));
    }
    let sub = select_blocks(&m, &features, &path)?;
    let model_seed = named_seed(cfg.seed, "train");
    let model = spec.fit(sub.values(), &y, model_seed)?;
    let artifact = ModelArtifact {
        kind,
        features,
        fingerprint: sub.fingerprint().to_string(),
        tweet_slots: sub.header().tweet_slots,
        seed: cfg.seed,
        model_seed,
        config_hash: cfg.hash(),
        spec,
        model,
    };
    write_json(out, &artifact)?;
    Ok(artifact)
}

/// The model's columns from `m`, refusing any layout other than the one it was trained on.
fn model_input(
    artifact: &ModelArtifact,
    m: &FeatureMatrix,
    path: &Path,
) -> Result<FeatureMatrix, CliError> {
    let mismatch = |found: String| CliError::FingerprintMismatch {
        path: path.display().to_string(),
        expected: artifact.fingerprint.clone(),
        found,
    };
    if artifact.features.iter().any(|f| m.block(*f).is_none()) {
        return Err(mismatch(m.fingerprint().to_string()));
    }
    let sub = select_blocks(m, &artifact.features, path)?;
    if sub.fingerprint() != artifact.fingerprint || sub.cols() != artifact.model.n_features() {
        return Err(mismatch(sub.fingerprint().to_string()));
    }
    Ok(sub)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub kind: ModelKind,
    pub features: Vec<Feature>,
    pub seed: u64,
    pub config_hash: String,
    pub rows: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub auc: Option<f64>,
    pub confusion: ConfusionMatrix,
    /// `[[tp, fn], [fp, tn]]` as percentages of each actual class.
    pub row_percentages: [[f64; 2]; 2],
}

pub fn evaluate(model_path: &Path, matrix_path: &Path, out: &Path) -> Result<Metrics, CliError> {
    let artifact: ModelArtifact = read_json(model_path)?;
    let m = read_matrix(matrix_path)?;
    let y = targets(&m, matrix_path)?;
    let x = model_input(&artifact, &m, matrix_path)?;
    let scores = artifact.model.scores(x.values())?;
    let threshold = artifact.model.threshold();
    let pred: Vec<bool> = scores.iter().map(|&s| s > threshold).collect();
    let bm = eval::f1(&y, &pred)?;
    let roc = match roc_auc(&y, &scores) {
        Ok(r) => Some(r),
        Err(eval::EvalError::SingleClass) => None,
        Err(e) => return Err(e.into()),
    };
    if let Some(r) = &roc {
        write_with(&out.join("roc.csv"), |buf| write_roc_csv(buf, r))?;
    }
    let c = bm.confusion;
    let pct = c.row_percentages();
    let p = |v: f64| eval::format_percent(v);
    let confusion = format!(
        "actual,predicted,count,percent\nI,I,{},{}\nI,NI,{},{}\nNI,I,{},{}\nNI,NI,{},{}\n",
        c.tp,
        p(pct[0][0]),
        c.fn_,
        p(pct[0][1]),
        c.fp,
        p(pct[1][0]),
        c.tn,
        p(pct[1][1])
    );
    write_bytes(&out.join("confusion.csv"), confusion.as_bytes())?;
    let metrics = Metrics {
        kind: artifact.kind,
        features: artifact.features.clone(),
        seed: artifact.seed,
        config_hash: artifact.config_hash.clone(),
        rows: y.len(),
        precision: bm.precision,
        recall: bm.recall,
        f1: bm.f1,
        accuracy: bm.accuracy,
        auc: roc.map(|r| r.auc),
        confusion: c,
        row_percentages: pct,
    };
    write_json(&out.join("metrics.json"), &metrics)?;
    Ok(metrics)
}

pub enum PredictInput<'a> {
    Matrix(&'a Path),
    Corpus {
        corpus: &'a Path,
        extractors: &'a Path,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub author_id: String,
    pub score: f64,
    pub label: Label,
}

/// Writes `author_id,score,label` rows.
pub fn predict(
    model_path: &Path,
    input: PredictInput<'_>,
    out: &Path,
) -> Result<Vec<Prediction>, CliError> {
    let artifact: ModelArtifact = read_json(model_path)?;
    let (m, source) = match input {
        PredictInput::Matrix(p) => (read_matrix(p)?, p.to_path_buf()),
        PredictInput::Corpus { corpus, extractors } => {
            let fx: FittedExtractors = read_json(extractors)?;
            if fx.config.tweet_slots != artifact.tweet_slots {
                return Err(CliError::FingerprintMismatch {
                    path: extractors.display().to_string(),
                    expected: format!("T={}", artifact.tweet_slots),
                    found: format!("T={}", fx.config.tweet_slots),
                });
            }
            let c = load_corpus(corpus, fx.config.tweet_slots)?;
            (assemble(&c, &fx, &artifact.features)?, corpus.to_path_buf())
        }
    };
    let x = model_input(&artifact, &m, &source)?;
    let pred = artifact.model.predict(x.values())?;
    let scores = artifact.model.scores(x.values())?;
    let rows: Vec<Prediction> = m
        .author_ids()
        .iter()
        .zip(pred.iter().zip(&scores))
        .map(|(id, (&p, &s))| Prediction {
            author_id: id.clone(),
            score: s,
            label: if p { Label::Ironic } else { Label::NonIronic },
        })
        .collect();
    let mut csv = String::from("author_id,score,label\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{}\n", r.author_id, r.score, r.label));
    }
    write_bytes(out, csv.as_bytes())?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicWords {
    pub topic: usize,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub seed: u64,
    pub config_hash: String,
    pub explained_variance: [f64; 2],
    pub rank_deficient: bool,
    pub top_terms: Option<TopTerms>,
    pub topics: Vec<TopicWords>,
}

/// Two-component projection of the training TF-IDF rows plus the top terms
/// per class and the top words per LDA topic, when those were fitted.
pub fn report(cfg: &RunConfig, features_dir: &Path, out: &Path) -> Result<ReportSummary, CliError> {
    let path = features_dir.join(TRAIN_MATRIX);
    let m = read_matrix(&path)?;
    let fx: FittedExtractors = read_json(&features_dir.join(EXTRACTORS))?;
    let projected = if m.block(Feature::Tfidf).is_some() {
        select_blocks(&m, &[Feature::Tfidf], &path)?
    } else {
        m.clone()
    };
    let pca = pca2(projected.values(), named_seed(cfg.seed, "pca"))?;
    let labels: Vec<Option<&str>> = m.labels().iter().map(|l| l.code()).collect();
    write_with(&out.join("pca.csv"), |buf| {
        write_pca_csv(buf, m.author_ids(), &labels, &pca)
    })?;

    let top_terms = match (&fx.vocabulary, m.block(Feature::Tfidf)) {
        (Some(vocab), Some(range)) if m.labels().iter().all(|l| *l != Label::Unknown) => {
            let rows: Vec<TfidfRow> = (0..m.rows())
                .map(|r| TfidfRow {
                    author_id: m.author_ids()[r].clone(),
                    weights: m.values().row(r)[range.clone()]
                        .iter()
                        .enumerate()
                        .filter(|(_, &w)| w != 0.0)
                        .map(|(i, &w)| (i, w))
                        .collect(),
                })
                .collect();
            top_terms_per_label(&rows, m.labels(), vocab, 10).ok()
        }
        _ => None,
    };
    let topics = fx
        .topics
        .as_ref()
        .map(|t| {
            (0..t.topics())
                .map(|k| TopicWords {
                    topic: k,
                    words: t.top_words(k, 10).into_iter().map(str::to_string).collect(),
                })
                .collect()
        })
        .unwrap_or_default();
    let summary = ReportSummary {
        seed: cfg.seed,
        config_hash: cfg.hash(),
        explained_variance: pca.explained,
        rank_deficient: pca.rank_deficient,
        top_terms,
        topics,
    };
    write_json(&out.join("report.json"), &summary)?;
    Ok(summary)
}
