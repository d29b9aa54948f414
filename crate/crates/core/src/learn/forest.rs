use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{fit_tree_on, DecisionTree, TreeParams};
use super::LearnError;
use crate::matrix::Matrix;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub tree: TreeParams,
    /// Off only for testing: every tree then sees all rows once.
    pub bootstrap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub params: ForestParams,
    pub seed: u64,
    pub tree_seeds: Vec<u64>,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
}

/// `n` draws with replacement from `0..n`.
pub fn bootstrap_indices(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Each tree gets its own seed derived from `seed`; the bootstrap sample is
/// drawn from that seed's stream before the tree is grown.
pub fn fit_forest(
    x: &Matrix,
    y: &[bool],
    params: &ForestParams,
    seed: u64,
) -> Result<ForestModel, LearnError> {
    super::check_xy(x, y)?;
    if params.n_estimators == 0 {
        return Err(LearnError::InvalidParams(
            "n_estimators must be positive".into(),
        ));
    }
    let tree_seeds: Vec<u64> = (0..params.n_estimators as u64)
        .map(|t| derive_seed(seed, t))
        .collect();
    let trees = tree_seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let idx = if params.bootstrap {
                bootstrap_indices(x.rows(), &mut rng)
            } else {
                (0..x.rows()).collect()
            };
            fit_tree_on(x, y, idx, &params.tree, &mut rng)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ForestModel {
        params: *params,
        seed,
        tree_seeds,
        n_features: x.cols(),
        trees,
    })
}

impl ForestModel {
    /// Mean over trees of the leaf positive fraction.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Vec<f64>, LearnError> {
        super::check_width(self.n_features, x)?;
        let n = self.trees.len() as f64;
        Ok(x.iter_rows()
            .map(|row| self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / n)
            .collect())
    }
}
