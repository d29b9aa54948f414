use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forest::{fit_forest, ForestModel, ForestParams};
use super::linear::{fit_linear_svm, fit_logreg, LogRegModel, SvmModel};
use super::tree::{Criterion, MaxFeatures, TreeParams};
use super::LearnError;
use crate::eval;
use crate::matrix::Matrix;
use crate::seed::derive_seed;

const LOGREG_MAX_ITER: usize = 1000;
const SVM_MAX_EPOCHS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvPlan {
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
    pub shuffled: bool,
    pub stratified: bool,
    pub n: usize,
}

impl CvPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    /// Row indices outside fold `f`, ascending.
    pub fn complement(&self, f: usize) -> Vec<usize> {
        let mut in_fold = vec![false; self.n];
        self.folds[f].iter().for_each(|&i| in_fold[i] = true);
        (0..self.n).filter(|&i| !in_fold[i]).collect()
    }
}

/// Contiguous chunks of the (optionally shuffled) row order; the first
/// `n % k` folds hold one extra row.
pub fn make_folds(n: usize, k: usize, seed: u64, shuffled: bool) -> Result<CvPlan, LearnError> {
    if k < 2 || n < k {
        return Err(LearnError::TooFewRows { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    if shuffled {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(order[start..start + len].to_vec());
        start += len;
    }
    Ok(CvPlan {
        folds,
        seed,
        shuffled,
        stratified: false,
        n,
    })
}

/// Shuffles each class separately and deals positives then negatives round
/// robin, so class shares match across folds and sizes still differ by at most one.
pub fn make_stratified_folds(y: &[bool], k: usize, seed: u64) -> Result<CvPlan, LearnError> {
    let n = y.len();
    if k < 2 || n < k {
        return Err(LearnError::TooFewRows { n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut slot = 0;
    for class in [true, false] {
        let mut rows: Vec<usize> = (0..n).filter(|&i| y[i] == class).collect();
        rows.shuffle(&mut rng);
        for i in rows {
            folds[slot % k].push(i);
            slot += 1;
        }
    }
    Ok(CvPlan {
        folds,
        seed,
        shuffled: true,
        stratified: true,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Forest(ForestParams),
    LogReg { c: f64 },
    Svm { c: f64 },
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Forest(p) => write!(
                f,
                "rf n_estimators={} max_features={} max_depth={} criterion={}",
                p.n_estimators,
                match p.tree.max_features {
                    MaxFeatures::Sqrt => "sqrt",
                    MaxFeatures::All => "all",
                },
                p.tree.max_depth,
                match p.tree.criterion {
                    Criterion::Gini => "gini",
                    Criterion::Entropy => "entropy",
                }
            ),
            ModelSpec::LogReg { c } => write!(f, "lr penalty=l2 C={c}"),
            ModelSpec::Svm { c } => write!(f, "svm kernel=linear C={c}"),
        }
    }
}

impl ModelSpec {
    pub fn fit(&self, x: &Matrix, y: &[bool], seed: u64) -> Result<TrainedModel, LearnError> {
        Ok(match self {
            ModelSpec::Forest(p) => TrainedModel::Forest(fit_forest(x, y, p, seed)?),
            ModelSpec::LogReg { c } => TrainedModel::LogReg(fit_logreg(x, y, *c, LOGREG_MAX_ITER)?),
            ModelSpec::Svm { c } => {
                TrainedModel::Svm(fit_linear_svm(x, y, *c, SVM_MAX_EPOCHS, seed)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum TrainedModel {
    Forest(ForestModel),
    LogReg(LogRegModel),
    Svm(SvmModel),
}

impl TrainedModel {
    /// Probabilities for forest and logistic models, signed margins for the SVM.
    pub fn scores(&self, x: &Matrix) -> Result<Vec<f64>, LearnError> {
        match self {
            TrainedModel::Forest(m) => m.predict_proba(x),
            TrainedModel::LogReg(m) => m.predict_proba(x),
            TrainedModel::Svm(m) => m.decision(x),
        }
    }

    /// Scores strictly above this are the ironic class.
    pub fn threshold(&self) -> f64 {
        match self {
            TrainedModel::Svm(_) => 0.0,
            _ => 0.5,
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<bool>, LearnError> {
        let t = self.threshold();
        Ok(self.scores(x)?.into_iter().map(|s| s > t).collect())
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Forest(m) => m.n_features,
            TrainedModel::LogReg(m) => m.weights.len(),
            TrainedModel::Svm(m) => m.weights.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvScore {
    pub mean_f1: f64,
    pub fold_f1: Vec<f64>,
}

/// Fits on each fold's complement and scores F1 on the fold; the model for
/// fold `f` is seeded with `derive_seed(seed, f)`.
pub fn cv_f1(
    x: &Matrix,
    y: &[bool],
    spec: &ModelSpec,
    plan: &CvPlan,
    seed: u64,
) -> Result<CvScore, LearnError> {
    super::check_xy(x, y)?;
    if plan.n != x.rows() {
        return Err(LearnError::InvalidParams(format!(
            "fold plan covers {} rows, data has {}",
            plan.n,
            x.rows()
        )));
    }
    let fold_f1 = (0..plan.k())
        .into_par_iter()
        .map(|f| {
            let train = plan.complement(f);
            let train_y: Vec<bool> = train.iter().map(|&i| y[i]).collect();
            if train_y.iter().all(|&t| t) || train_y.iter().all(|&t| !t) {
                return Err(LearnError::DegenerateFold { fold: f });
            }
            let model = spec.fit(&x.take_rows(&train), &train_y, derive_seed(seed, f as u64))?;
            let test = &plan.folds[f];
            let pred = model.predict(&x.take_rows(test))?;
            let truth: Vec<bool> = test.iter().map(|&i| y[i]).collect();
            Ok(eval::f1(&truth, &pred).map(|m| m.f1).unwrap_or(0.0))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()?;
    let mean_f1 = fold_f1.iter().sum::<f64>() / fold_f1.len() as f64;
    Ok(CvScore { mean_f1, fold_f1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub spec: ModelSpec,
    pub score: CvScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: usize,
    pub rows: Vec<GridRow>,
}

impl GridResult {
    pub fn best_spec(&self) -> &ModelSpec {
        &self.rows[self.best].spec
    }
}

/// Evaluates every candidate; the first candidate with the highest mean F1 wins.
pub fn grid_search(
    x: &Matrix,
    y: &[bool],
    grid: &[ModelSpec],
    plan: &CvPlan,
    seed: u64,
) -> Result<GridResult, LearnError> {
    if grid.is_empty() {
        return Err(LearnError::EmptyGrid);
    }
    let rows = grid
        .par_iter()
        .map(|spec| cv_f1(x, y, spec, plan, seed).map(|score| GridRow { spec: *spec, score }))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.score.mean_f1 > rows[best].score.mean_f1 {
            best = i;
        }
    }
    Ok(GridResult { best, rows })
}

/// Estimators outermost, then feature sampling, depth, and criterion innermost.
pub fn forest_grid() -> Vec<ModelSpec> {
    let mut out = Vec::new();
    for n_estimators in [200, 500] {
        for max_features in [MaxFeatures::All, MaxFeatures::Sqrt] {
            for depth in 4..=8 {
                for criterion in [Criterion::Gini, Criterion::Entropy] {
                    out.push(ModelSpec::Forest(ForestParams {
                        n_estimators,
                        tree: TreeParams::new(criterion, depth, max_features),
                        bootstrap: true,
                    }));
                }
            }
        }
    }
    out
}

pub fn logreg_grid() -> Vec<ModelSpec> {
    [1.0, 0.1, 0.01]
        .into_iter()
        .map(|c| ModelSpec::LogReg { c })
        .collect()
}

pub fn svm_grid() -> Vec<ModelSpec> {
    [1.0, 2.0, 3.0]
        .into_iter()
        .map(|c| ModelSpec::Svm { c })
        .collect()
}

/// Fixed forest used to score candidate feature subsets.
pub fn selection_forest() -> ModelSpec {
    ModelSpec::Forest(ForestParams {
        n_estimators: 200,
        tree: TreeParams::new(Criterion::Gini, 6, MaxFeatures::Sqrt),
        bootstrap: true,
    })
}

pub fn write_grid_csv<W: Write>(mut out: W, result: &GridResult) -> Result<(), LearnError> {
    let k = result.rows.first().map_or(0, |r| r.score.fold_f1.len());
    write!(out, "params,mean_f1")?;
    for f in 1..=k {
        write!(out, ",fold_{f}")?;
    }
    writeln!(out, ",best")?;
    for (i, r) in result.rows.iter().enumerate() {
        write!(out, "{},{}", r.spec, r.score.mean_f1)?;
        for v in &r.score.fold_f1 {
            write!(out, ",{v}")?;
        }
        writeln!(out, ",{}", i == result.best)?;
    }
    Ok(())
}
