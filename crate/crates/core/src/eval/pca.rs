use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::matrix::Matrix;

const TOLERANCE: f64 = 1e-9;
const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pca2 {
    pub projections: Vec<[f64; 2]>,
    pub components: [Vec<f64>; 2],
    /// Share of total variance per component.
    pub explained: [f64; 2],
    /// Set when fewer than two directions carry variance; component 2 is then zero.
    pub rank_deficient: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// `Xc^T (Xc v)` without forming the covariance matrix.
fn apply(centered: &Matrix, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; centered.cols()];
    for row in centered.iter_rows() {
        let s = dot(row, v);
        for (o, x) in out.iter_mut().zip(row) {
            *o += s * x;
        }
    }
    out
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for u in against {
        let p = dot(v, u);
        v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
    }
}

/// Leading eigenvector orthogonal to `found`; `None` if the remaining variance is zero.
fn power_iteration(
    centered: &Matrix,
    found: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    let d = centered.cols();
    let mut v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
    orthogonalize(&mut v, found);
    if normalize(&mut v) == 0.0 {
        return None;
    }
    for _ in 0..MAX_ITERATIONS {
        let mut next = apply(centered, &v);
        orthogonalize(&mut next, found);
        if normalize(&mut next) == 0.0 {
            return None;
        }
        let delta: f64 = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if delta < TOLERANCE {
            break;
        }
    }
    Some(v)
}

/// Flips the sign so the largest-magnitude loading is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Projects mean-centered rows onto the top two principal directions,
/// found by seeded power iteration with deflation.
pub fn pca2(rows: &Matrix, seed: u64) -> Result<Pca2, EvalError> {
    let (n, d) = (rows.rows(), rows.cols());
    if n < 3 || d < 2 {
        return Err(EvalError::TooSmall {
            rows: n,
            cols: d,
            min_rows: 3,
            min_cols: 2,
        });
    }
    let mut means = vec![0.0; d];
    for row in rows.iter_rows() {
        means.iter_mut().zip(row).for_each(|(m, x)| *m += x);
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut centered = rows.clone();
    for i in 0..n {
        for (j, m) in means.iter().enumerate() {
            centered.set(i, j, rows.get(i, j) - m);
        }
    }
    let total: f64 = centered.data().iter().map(|x| x * x).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components: Vec<Vec<f64>> = Vec::new();
    let mut explained = [0.0; 2];
    let mut rank_deficient = false;
    for slot in explained.iter_mut() {
        let found = if total > 0.0 {
            power_iteration(&centered, &components, &mut rng)
        } else {
            None
        };
        let variance = found.as_ref().map_or(0.0, |v| {
            centered.iter_rows().map(|r| dot(r, v).powi(2)).sum::<f64>()
        });
        match found {
            Some(mut v) if variance > 1e-12 * total => {
                fix_sign(&mut v);
                *slot = variance / total;
                components.push(v);
            }
            _ => {
                rank_deficient = true;
                components.push(vec![0.0; d]);
            }
        }
    }
    let projections = centered
        .iter_rows()
        .map(|r| [dot(r, &components[0]), dot(r, &components[1])])
        .collect();
    let second = components.pop().expect("two components");
    let first = components.pop().expect("two components");
    Ok(Pca2 {
        projections,
        components: [first, second],
        explained,
        rank_deficient,
    })
}

pub fn write_pca_csv<W: Write>(
    mut out: W,
    ids: &[String],
    labels: &[Option<&str>],
    pca: &Pca2,
) -> Result<(), EvalError> {
    writeln!(out, "author_id,pc1,pc2,label")?;
    for ((id, label), p) in ids.iter().zip(labels).zip(&pca.projections) {
        writeln!(out, "{id},{},{},{}", p[0], p[1], label.unwrap_or(""))?;
    }
    Ok(())
}
