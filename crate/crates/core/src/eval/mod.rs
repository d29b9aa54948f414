//! Classification metrics and plot-ready report tables.

mod pca;

pub use pca::{pca2, write_pca_csv, Pca2};

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("truth has {truth} entries but predictions have {pred}")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("no rows to evaluate")]
    Empty,
    #[error("ROC needs both classes in the truth labels")]
    SingleClass,
    #[error("PCA needs at least {min_rows} rows and {min_cols} columns, got {rows}x{cols}")]
    TooSmall {
        rows: usize,
        cols: usize,
        min_rows: usize,
        min_cols: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Counts with the ironic class as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ConfusionMatrix {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }

    /// Percent of each actual class per predicted class:
    /// `[[tp, fn] of ironic, [fp, tn] of non-ironic]`.
    pub fn row_percentages(&self) -> [[f64; 2]; 2] {
        let row = |a: usize, b: usize| {
            let n = a + b;
            [100.0 * ratio(a, n), 100.0 * ratio(b, n)]
        };
        [row(self.tp, self.fn_), row(self.fp, self.tn)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

fn check_lengths(truth: usize, pred: usize) -> Result<(), EvalError> {
    if truth != pred {
        return Err(EvalError::LengthMismatch { truth, pred });
    }
    if truth == 0 {
        return Err(EvalError::Empty);
    }
    Ok(())
}

pub fn confusion(y_true: &[bool], y_pred: &[bool]) -> Result<ConfusionMatrix, EvalError> {
    check_lengths(y_true.len(), y_pred.len())?;
    let mut c = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Precision, recall and F1 of the ironic class; a zero denominator makes the metric 0.
pub fn f1(y_true: &[bool], y_pred: &[bool]) -> Result<BinaryMetrics, EvalError> {
    let c = confusion(y_true, y_pred)?;
    Ok(BinaryMetrics {
        precision: c.precision(),
        recall: c.recall(),
        f1: c.f1(),
        accuracy: ratio(c.tp + c.tn, c.total()),
        confusion: c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// (false-positive rate, true-positive rate), from (0,0) to (1,1).
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Threshold sweep over distinct scores, highest first; tied scores move
/// together. AUC by the trapezoidal rule.
pub fn roc_auc(y_true: &[bool], scores: &[f64]) -> Result<RocCurve, EvalError> {
    check_lengths(y_true.len(), scores.len())?;
    let pos = y_true.iter().filter(|&&t| t).count();
    let neg = y_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if y_true[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let (x0, y0) = *points.last().expect("non-empty");
        let (x1, y1) = (fp as f64 / neg as f64, tp as f64 / pos as f64);
        auc += (x1 - x0) * (y0 + y1) / 2.0;
        points.push((x1, y1));
    }
    Ok(RocCurve { points, auc })
}

pub fn write_roc_csv<W: Write>(mut out: W, roc: &RocCurve) -> Result<(), EvalError> {
    writeln!(out, "fpr,tpr")?;
    for (x, y) in &roc.points {
        writeln!(out, "{x},{y}")?;
    }
    Ok(())
}

/// Two-decimal percentage, as printed in confusion-matrix figures.
pub fn format_percent(p: f64) -> String {
    format!("{p:.2}%")
}
