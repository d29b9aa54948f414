use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::matrix::Matrix;

const GRADIENT_TOLERANCE: f64 = 1e-6;
const HISTORY: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub c: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
}

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean log-loss plus `|w|^2 / (2 C N)`; `params` is the weights followed by
/// the (unpenalized) intercept. Returns the objective and its gradient.
pub fn logreg_objective(x: &Matrix, y: &[bool], params: &[f64], c: f64) -> (f64, Vec<f64>) {
    let d = x.cols();
    let n = x.rows() as f64;
    let (w, b) = (&params[..d], params[d]);
    let mut loss = 0.0;
    let mut grad = vec![0.0; d + 1];
    for (row, &label) in x.iter_rows().zip(y) {
        let z = dot(row, w) + b;
        let t = if label { 1.0 } else { 0.0 };
        loss += if label { softplus(-z) } else { softplus(z) };
        let r = sigmoid(z) - t;
        for (g, v) in grad.iter_mut().zip(row) {
            *g += r * v;
        }
        grad[d] += r;
    }
    let penalty = 1.0 / (2.0 * c * n);
    loss = loss / n + penalty * dot(w, w);
    grad.iter_mut().for_each(|g| *g /= n);
    for j in 0..d {
        grad[j] += 2.0 * penalty * w[j];
    }
    (loss, grad)
}

/// Minimizes [`logreg_objective`] with full-batch L-BFGS and a backtracking
/// line search until the gradient norm drops below 1e-6 or `max_iter` is hit.
pub fn fit_logreg(
    x: &Matrix,
    y: &[bool],
    c: f64,
    max_iter: usize,
) -> Result<LogRegModel, LearnError> {
    super::check_xy(x, y)?;
    super::check_finite(x)?;
    if c <= 0.0 || !c.is_finite() {
        return Err(LearnError::InvalidParams(format!(
            "C must be positive, got {c}"
        )));
    }
    let d = x.cols();
    let mut p = vec![0.0; d + 1];
    let (mut f, mut g) = logreg_objective(x, y, &p, c);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    while iterations < max_iter && dot(&g, &g).sqrt() > GRADIENT_TOLERANCE {
        iterations += 1;
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, yv, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(yv).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, yv, _)) = history.back() {
            let gamma = dot(s, yv) / dot(yv, yv);
            q.iter_mut().for_each(|qi| *qi *= gamma);
        }
        for ((s, yv, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let beta = rho * dot(yv, &q);
            q.iter_mut()
                .zip(s)
                .for_each(|(qi, si)| *qi += (a - beta) * si);
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
            history.clear();
        }
        let mut step = 1.0;
        let accepted = loop {
            let cand: Vec<f64> = p.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let (fc, gc) = logreg_objective(x, y, &cand, c);
            if fc <= f + 1e-4 * step * slope {
                break Some((cand, fc, gc));
            }
            step *= 0.5;
            if step < 1e-20 {
                break None;
            }
        };
        let Some((cand, fc, gc)) = accepted else {
            break;
        };
        let s: Vec<f64> = cand.iter().zip(&p).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gc.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, yv, 1.0 / sy));
        }
        p = cand;
        f = fc;
        g = gc;
    }
    let intercept = p.pop().expect("intercept slot");
    Ok(LogRegModel {
        weights: p,
        intercept,
        c,
        iterations,
        gradient_norm: dot(&g, &g).sqrt(),
    })
}

impl LogRegModel {
    pub fn predict_proba(&self, x: &Matrix) -> Result<Vec<f64>, LearnError> {
        super::check_width(self.weights.len(), x)?;
        Ok(x.iter_rows()
            .map(|r| sigmoid(dot(r, &self.weights) + self.intercept))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub epochs: usize,
}

/// Hinge loss with `|w|^2 / (2 C N)` regularization, solved exactly in the
/// dual by seeded coordinate descent. The bias is an extra constant-1
/// feature, so it is regularized with the weights.
pub fn fit_linear_svm(
    x: &Matrix,
    y: &[bool],
    c: f64,
    max_epochs: usize,
    seed: u64,
) -> Result<SvmModel, LearnError> {
    super::check_xy(x, y)?;
    super::check_finite(x)?;
    if c <= 0.0 || !c.is_finite() {
        return Err(LearnError::InvalidParams(format!(
            "C must be positive, got {c}"
        )));
    }
    let (n, d) = (x.rows(), x.cols());
    let sign: Vec<f64> = y.iter().map(|&t| if t { 1.0 } else { -1.0 }).collect();
    let q: Vec<f64> = x.iter_rows().map(|r| dot(r, r) + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; d + 1];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut epochs = 0;
    while epochs < max_epochs {
        epochs += 1;
        order.shuffle(&mut rng);
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for &i in &order {
            let row = x.row(i);
            let margin = sign[i] * (dot(row, &w[..d]) + w[d]);
            let grad = margin - 1.0;
            let projected = if alpha[i] <= 0.0 {
                grad.min(0.0)
            } else if alpha[i] >= c {
                grad.max(0.0)
            } else {
                grad
            };
            hi = hi.max(projected);
            lo = lo.min(projected);
            if projected.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - grad / q[i]).clamp(0.0, c);
                let delta = (alpha[i] - old) * sign[i];
                for (wj, v) in w.iter_mut().zip(row) {
                    *wj += delta * v;
                }
                w[d] += delta;
            }
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let bias = w.pop().expect("bias slot");
    Ok(SvmModel {
        weights: w,
        bias,
        c,
        epochs,
    })
}

impl SvmModel {
    pub fn decision(&self, x: &Matrix) -> Result<Vec<f64>, LearnError> {
        super::check_width(self.weights.len(), x)?;
        Ok(x.iter_rows()
            .map(|r| dot(r, &self.weights) + self.bias)
            .collect())
    }

    pub fn hinge_losses(&self, x: &Matrix, y: &[bool]) -> Result<Vec<f64>, LearnError> {
        Ok(self
            .decision(x)?
            .iter()
            .zip(y)
            .map(|(&f, &t)| (1.0 - if t { f } else { -f }).max(0.0))
            .collect())
    }
}
