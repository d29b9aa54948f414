//! Classifiers, cross-validation, grid search and feature-subset selection.

mod cv;
mod forest;
mod linear;
mod select;
mod tree;

pub use cv::{
    cv_f1, forest_grid, grid_search, logreg_grid, make_folds, make_stratified_folds,
    selection_forest, svm_grid, write_grid_csv, CvPlan, CvScore, GridResult, GridRow, ModelSpec,
    TrainedModel,
};
pub use forest::{bootstrap_indices, fit_forest, ForestModel, ForestParams};
pub use linear::{fit_linear_svm, fit_logreg, logreg_objective, LogRegModel, SvmModel};
pub use select::{
    select_exhaustive, select_stagewise, write_selection_csv, SelectionReport, SelectionRow, Stage,
};
pub use tree::{fit_tree, impurity, Criterion, DecisionTree, MaxFeatures, TreeNode, TreeParams};

use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("no training rows")]
    EmptyData,
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },
    #[error("{n} rows cannot be split into {k} folds")]
    TooFewRows { n: usize, k: usize },
    #[error("training split of fold {fold} contains a single class")]
    DegenerateFold { fold: usize },
    #[error("model expects {expected} features, input has {found}")]
    SpecMismatch { expected: usize, found: usize },
    #[error("{rows} feature rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_xy(x: &Matrix, y: &[bool]) -> Result<(), LearnError> {
    if x.rows() != y.len() {
        return Err(LearnError::LengthMismatch {
            rows: x.rows(),
            labels: y.len(),
        });
    }
    if x.rows() == 0 {
        return Err(LearnError::EmptyData);
    }
    Ok(())
}

pub(crate) fn check_finite(x: &Matrix) -> Result<(), LearnError> {
    match x.data().iter().position(|v| !v.is_finite()) {
        Some(p) => Err(LearnError::NonFiniteFeature {
            row: p / x.cols(),
            col: p % x.cols(),
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_width(expected: usize, x: &Matrix) -> Result<(), LearnError> {
    if x.cols() != expected {
        return Err(LearnError::SpecMismatch {
            expected,
            found: x.cols(),
        });
    }
    Ok(())
}
