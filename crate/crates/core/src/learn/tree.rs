use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Gini,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    Sqrt,
    All,
}

impl MaxFeatures {
    pub fn count(self, d: usize) -> usize {
        match self {
            MaxFeatures::All => d,
            MaxFeatures::Sqrt => ((d as f64).sqrt().ceil() as usize).clamp(1, d.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub criterion: Criterion,
    pub max_depth: usize,
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
}

impl TreeParams {
    pub fn new(criterion: Criterion, max_depth: usize, max_features: MaxFeatures) -> TreeParams {
        TreeParams {
            criterion,
            max_depth,
            max_features,
            min_samples_split: 2,
        }
    }
}

/// Node impurity from class counts.
pub fn impurity(criterion: Criterion, negative: f64, positive: f64) -> f64 {
    let n = negative + positive;
    if n == 0.0 {
        return 0.0;
    }
    let (p0, p1) = (negative / n, positive / n);
    match criterion {
        Criterion::Gini => 1.0 - p0 * p0 - p1 * p1,
        Criterion::Entropy => [p0, p1]
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        negative: u32,
        positive: u32,
    },
}

impl TreeNode {
    fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaves() + right.leaves(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_features: usize,
}

impl DecisionTree {
    /// Positive-class fraction of the leaf the row falls into.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { negative, positive } => {
                    let n = negative + positive;
                    return if n == 0 {
                        0.0
                    } else {
                        *positive as f64 / n as f64
                    };
                }
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaves(&self) -> usize {
        self.root.leaves()
    }
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [bool],
    params: &'a TreeParams,
    rng: &'a mut ChaCha8Rng,
    pairs: Vec<(f64, bool)>,
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl Grower<'_> {
    fn counts(&self, idx: &[usize]) -> (u32, u32) {
        let pos = idx.iter().filter(|&&i| self.y[i]).count() as u32;
        (idx.len() as u32 - pos, pos)
    }

    fn best_split(&mut self, idx: &[usize], neg: u32, pos: u32) -> Option<Split> {
        let d = self.x.cols();
        let mut features = sample(self.rng, d, self.params.max_features.count(d)).into_vec();
        features.sort_unstable();
        let parent = impurity(self.params.criterion, neg as f64, pos as f64);
        let n = idx.len() as f64;
        let mut best: Option<Split> = None;
        for f in features {
            self.pairs.clear();
            self.pairs
                .extend(idx.iter().map(|&i| (self.x.get(i, f), self.y[i])));
            self.pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (mut ln, mut lp) = (0.0, 0.0);
            for k in 0..self.pairs.len() - 1 {
                if self.pairs[k].1 {
                    lp += 1.0;
                } else {
                    ln += 1.0;
                }
                let (lo, hi) = (self.pairs[k].0, self.pairs[k + 1].0);
                if lo >= hi {
                    continue;
                }
                let (rn, rp) = (neg as f64 - ln, pos as f64 - lp);
                let nl = ln + lp;
                let child = (nl / n) * impurity(self.params.criterion, ln, lp)
                    + ((n - nl) / n) * impurity(self.params.criterion, rn, rp);
                let gain = parent - child;
                if gain > 1e-12 && best.as_ref().is_none_or(|b| gain > b.gain + 1e-12) {
                    let mid = lo + (hi - lo) / 2.0;
                    best = Some(Split {
                        feature: f,
                        threshold: if mid < hi { mid } else { lo },
                        gain,
                    });
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: &mut [usize], depth: usize) -> TreeNode {
        let (neg, pos) = self.counts(idx);
        let leaf = TreeNode::Leaf {
            negative: neg,
            positive: pos,
        };
        if depth >= self.params.max_depth
            || idx.len() < self.params.min_samples_split.max(2)
            || neg == 0
            || pos == 0
        {
            return leaf;
        }
        let Some(split) = self.best_split(idx, neg, pos) else {
            return leaf;
        };
        let x = self.x;
        let mut mid = 0;
        for k in 0..idx.len() {
            if x.get(idx[k], split.feature) <= split.threshold {
                idx.swap(k, mid);
                mid += 1;
            }
        }
        let (l, r) = idx.split_at_mut(mid);
        TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(self.grow(l, depth + 1)),
            right: Box::new(self.grow(r, depth + 1)),
        }
    }
}

/// Grows a CART tree on the given row indices (repeats allowed).
pub(crate) fn fit_tree_on(
    x: &Matrix,
    y: &[bool],
    mut idx: Vec<usize>,
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Result<DecisionTree, LearnError> {
    if idx.is_empty() {
        return Err(LearnError::EmptyData);
    }
    if params.max_depth == 0 {
        return Err(LearnError::InvalidParams(
            "max_depth must be at least 1".into(),
        ));
    }
    let mut grower = Grower {
        x,
        y,
        params,
        rng,
        pairs: Vec::with_capacity(idx.len()),
    };
    let root = if x.cols() == 0 {
        let (n, p) = grower.counts(&idx);
        TreeNode::Leaf {
            negative: n,
            positive: p,
        }
    } else {
        grower.grow(&mut idx, 0)
    };
    Ok(DecisionTree {
        root,
        n_features: x.cols(),
    })
}

/// Greedy CART; ties in impurity decrease keep the lowest feature index, then
/// the lowest threshold.
pub fn fit_tree(
    x: &Matrix,
    y: &[bool],
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Result<DecisionTree, LearnError> {
    super::check_xy(x, y)?;
    fit_tree_on(x, y, (0..x.rows()).collect(), params, rng)
}
