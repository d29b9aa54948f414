use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irony_cli::config::RunConfig;
use irony_cli::error::CliError;
use irony_cli::pipeline::{self, GridModel, ModelKind, PredictInput};
use irony_cli::synth::{self, SynthParams};
use irony_core::features::{parse_feature_list, Feature};

#[derive(Parser)]
#[command(name = "irony", version, about = "Irony author profiling pipeline")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Root seed; every stage seed is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tweet_slots: Option<usize>,
    #[arg(long, global = true)]
    folds: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Extra `key=value` config overrides.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Collect per-author XML files and a truth file into a JSONL corpus.
    Ingest {
        #[arg(long)]
        xml_dir: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit extractors on the training split and write feature matrices.
    Featurize {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated feature names; overrides the config.
        #[arg(long)]
        features: Option<String>,
    },
    /// Per-category wrapper feature selection on the training matrix.
    Select {
        #[arg(long)]
        features_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validated parameter grid for one classifier family.
    GridSearch {
        #[arg(long)]
        features_dir: PathBuf,
        #[arg(long, value_enum)]
        model: GridModel,
        #[arg(long)]
        selection: Option<PathBuf>,
        #[arg(long)]
        features: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a baseline or the final model and write its artifact.
    Train {
        #[arg(long)]
        features_dir: PathBuf,
        #[arg(long, value_enum)]
        kind: ModelKind,
        #[arg(long)]
        selection: Option<PathBuf>,
        #[arg(long)]
        features: Option<String>,
        /// Forest grid result whose best parameters the final model uses.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a labeled matrix: metrics JSON, ROC CSV and confusion counts.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Label authors from a matrix, or from a corpus plus fitted extractors.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with_all = ["corpus", "extractors"])]
        matrix: Option<PathBuf>,
        #[arg(long, requires = "extractors")]
        corpus: Option<PathBuf>,
        #[arg(long, requires = "corpus")]
        extractors: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic labeled corpus.
    Synth {
        #[arg(long, default_value_t = 100)]
        authors: usize,
        #[arg(long, default_value_t = 50)]
        tweets: usize,
        #[arg(long, default_value_t = 0.3)]
        signal: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// PCA projection of the training TF-IDF rows and top terms per class.
    Report {
        #[arg(long)]
        features_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn resolve_config(g: &Global) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &g.config {
        cfg.apply_file(p)?;
    }
    let flag = |key: &str, value: String| (key.to_string(), value);
    let mut overrides = Vec::new();
    for kv in &g.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        overrides.push(flag(k, v.to_string()));
    }
    if let Some(s) = g.seed {
        overrides.push(flag("seed", s.to_string()));
    }
    if let Some(t) = g.tweet_slots {
        overrides.push(flag("tweet_slots", t.to_string()));
    }
    if let Some(k) = g.folds {
        overrides.push(flag("folds", k.to_string()));
    }
    for (k, v) in overrides {
        cfg.set(&k, &v)
            .map_err(|m| CliError::Usage(format!("--{}: {m}", k.replace('_', "-"))))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn feature_list(list: &Option<String>) -> Result<Option<Vec<Feature>>, CliError> {
    list.as_deref()
        .map(|l| parse_feature_list(l).map_err(CliError::from))
        .transpose()
}

fn run(cli: Cli) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build_global()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    let mut cfg = resolve_config(&cli.global)?;
    match cli.command {
        Command::Ingest {
            xml_dir,
            truth,
            out,
        } => {
            let s = pipeline::ingest(&xml_dir, truth.as_deref(), &out)?;
            println!(
                "{} authors: {} I, {} NI, {} unlabeled -> {}",
                s.authors,
                s.ironic,
                s.non_ironic,
                s.unknown,
                out.display()
            );
        }
        Command::Featurize {
            corpus,
            out,
            features,
        } => {
            if let Some(list) = feature_list(&features)? {
                cfg.features = list;
            }
            let m = pipeline::featurize(&cfg, &corpus, &out)?;
            let width: usize = m.features.iter().map(|f| f.dim).sum();
            println!(
                "{} features ({width} columns), {} train / {} test authors -> {}",
                m.features.len(),
                m.train_ids.len(),
                m.test_ids.len(),
                out.display()
            );
        }
        Command::Select { features_dir, out } => {
            let s = pipeline::select(&cfg, &features_dir, &out)?;
            for c in &s.categories {
                let names: Vec<&str> = c.features.iter().map(|f| f.name()).collect();
                println!(
                    "{:?}: {} rows, best {} (F1 {:.4})",
                    c.category,
                    c.rows,
                    names.join("+"),
                    c.mean_f1
                );
            }
        }
        Command::GridSearch {
            features_dir,
            model,
            selection,
            features,
            out,
        } => {
            let list = pipeline::resolve_features(
                feature_list(&features)?.as_deref(),
                selection.as_deref(),
                &[Feature::Tfidf],
            )?;
            let g = pipeline::grid(&cfg, &features_dir, model, &list, &out)?;
            println!(
                "{} candidates, best {} (F1 {:.4})",
                g.candidates, g.best, g.best_mean_f1
            );
        }
        Command::Train {
            features_dir,
            kind,
            selection,
            features,
            grid,
            out,
        } => {
            let list = pipeline::resolve_features(
                feature_list(&features)?.as_deref(),
                selection.as_deref(),
                &irony_core::features::FINAL_FEATURES,
            )?;
            let a = pipeline::train(&cfg, &features_dir, kind, &list, grid.as_deref(), &out)?;
            println!(
                "{} on {} features -> {}",
                a.spec,
                a.features.len(),
                out.display()
            );
        }
        Command::Evaluate { model, matrix, out } => {
            let m = pipeline::evaluate(&model, &matrix, &out)?;
            let auc = m.auc.map_or("n/a".to_string(), |a| format!("{a:.4}"));
            println!(
                "F1 {:.4}  precision {:.4}  recall {:.4}  AUC {auc}",
                m.f1, m.precision, m.recall
            );
        }
        Command::Predict {
            model,
            matrix,
            corpus,
            extractors,
            out,
        } => {
            let input = match (&matrix, &corpus, &extractors) {
                (Some(m), _, _) => PredictInput::Matrix(m),
                (None, Some(c), Some(e)) => PredictInput::Corpus {
                    corpus: c,
                    extractors: e,
                },
                _ => {
                    return Err(CliError::Usage(
                        "predict needs --matrix or --corpus with --extractors".into(),
                    ))
                }
            };
            let rows = pipeline::predict(&model, input, &out)?;
            println!("{} predictions -> {}", rows.len(), out.display());
        }
        Command::Synth {
            authors,
            tweets,
            signal,
            out,
        } => {
            let records = synth::generate(&SynthParams {
                authors,
                tweets,
                signal,
                seed: cfg.seed,
            })?;
            synth::write(&out, &records)?;
            println!(
                "{authors} authors x {tweets} tweets (signal {signal}) -> {}",
                out.display()
            );
        }
        Command::Report { features_dir, out } => {
            let r = pipeline::report(&cfg, &features_dir, &out)?;
            println!(
                "PCA explained variance {:.4} / {:.4} -> {}",
                r.explained_variance[0],
                r.explained_variance[1],
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
