use std::fmt::Display;
use std::io::Write;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::CvScore;
use super::LearnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Individual,
    Combination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow<T> {
    pub features: Vec<T>,
    pub stage: Stage,
    pub score: CvScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport<T> {
    pub rows: Vec<SelectionRow<T>>,
    /// Index of the first row with the highest mean F1.
    pub best: usize,
}

impl<T> SelectionReport<T> {
    pub fn best_row(&self) -> &SelectionRow<T> {
        &self.rows[self.best]
    }
}

fn evaluate_all<T, F>(
    subsets: Vec<(Vec<T>, Stage)>,
    evaluate: &F,
) -> Result<Vec<SelectionRow<T>>, LearnError>
where
    T: Clone + Send + Sync,
    F: Fn(&[T]) -> Result<CvScore, LearnError> + Sync,
{
    subsets
        .into_par_iter()
        .map(|(features, stage)| {
            evaluate(&features).map(|score| SelectionRow {
                features,
                stage,
                score,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn report<T>(rows: Vec<SelectionRow<T>>) -> SelectionReport<T> {
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.score.mean_f1 > rows[best].score.mean_f1 {
            best = i;
        }
    }
    SelectionReport { rows, best }
}

/// Every non-empty subset, by size then in combination order of `features`.
pub fn select_exhaustive<T, F>(
    features: &[T],
    evaluate: F,
) -> Result<SelectionReport<T>, LearnError>
where
    T: Clone + Send + Sync,
    F: Fn(&[T]) -> Result<CvScore, LearnError> + Sync,
{
    if features.is_empty() || features.len() > 4 {
        return Err(LearnError::InvalidParams(format!(
            "exhaustive selection takes 1 to 4 features, got {}",
            features.len()
        )));
    }
    let subsets = (1..=features.len())
        .flat_map(|size| features.iter().cloned().combinations(size))
        .map(|s| {
            let stage = if s.len() == 1 {
                Stage::Individual
            } else {
                Stage::Combination
            };
            (s, stage)
        })
        .collect();
    Ok(report(evaluate_all(subsets, &evaluate)?))
}

/// Scores each feature alone, keeps the `top` best (ties keep the earlier
/// feature), then scores every combination of two or more of them.
pub fn select_stagewise<T, F>(
    features: &[T],
    top: usize,
    evaluate: F,
) -> Result<SelectionReport<T>, LearnError>
where
    T: Clone + Send + Sync,
    F: Fn(&[T]) -> Result<CvScore, LearnError> + Sync,
{
    if top == 0 || features.len() <= top {
        return Err(LearnError::InvalidParams(format!(
            "stagewise selection needs more than {top} features, got {}",
            features.len()
        )));
    }
    let singles: Vec<(Vec<T>, Stage)> = features
        .iter()
        .map(|f| (vec![f.clone()], Stage::Individual))
        .collect();
    let mut rows = evaluate_all(singles, &evaluate)?;
    let mut ranked: Vec<usize> = (0..rows.len()).collect();
    // stable sort keeps input order among equal scores
    ranked.sort_by(|&a, &b| rows[b].score.mean_f1.total_cmp(&rows[a].score.mean_f1));
    let mut kept: Vec<usize> = ranked[..top].to_vec();
    kept.sort_unstable();
    let chosen: Vec<T> = kept.iter().map(|&i| features[i].clone()).collect();
    let combos = (2..=top)
        .flat_map(|size| chosen.iter().cloned().combinations(size))
        .map(|s| (s, Stage::Combination))
        .collect();
    rows.extend(evaluate_all(combos, &evaluate)?);
    Ok(report(rows))
}

pub fn write_selection_csv<W: Write, T: Display>(
    mut out: W,
    report: &SelectionReport<T>,
) -> Result<(), LearnError> {
    let k = report.rows.first().map_or(0, |r| r.score.fold_f1.len());
    write!(out, "stage,features,mean_f1")?;
    for f in 1..=k {
        write!(out, ",fold_{f}")?;
    }
    writeln!(out, ",best")?;
    for (i, r) in report.rows.iter().enumerate() {
        let stage = match r.stage {
            Stage::Individual => "individual",
            Stage::Combination => "combination",
        };
        write!(
            out,
            "{stage},{},{}",
            r.features.iter().join("+"),
            r.score.mean_f1
        )?;
        for v in &r.score.fold_f1 {
            write!(out, ",{v}")?;
        }
        writeln!(out, ",{}", i == report.best)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Additive per-feature scores so the expected winners are known.
    fn additive(
        weights: &'static [f64],
    ) -> impl Fn(&[usize]) -> Result<CvScore, LearnError> + Sync {
        move |s: &[usize]| {
            let v = s.iter().map(|&i| weights[i]).sum::<f64>();
            Ok(CvScore {
                mean_f1: v,
                fold_f1: vec![v; 5],
            })
        }
    }

    #[test]
    fn exhaustive_row_counts_and_order() {
        let r = select_exhaustive(&[0usize, 1, 2], additive(&[0.1, 0.2, 0.3])).unwrap();
        assert_eq!(r.rows.len(), 7);
        let subsets: Vec<Vec<usize>> = r.rows.iter().map(|r| r.features.clone()).collect();
        assert_eq!(
            subsets,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(r.best_row().features, vec![0, 1, 2]);
        assert_eq!(
            select_exhaustive(&[4usize], additive(&[0.0, 0.0, 0.0, 0.0, 0.5]))
                .unwrap()
                .rows
                .len(),
            1
        );
        assert_eq!(
            select_exhaustive(&[0usize, 1, 2, 3], additive(&[0.0; 4]))
                .unwrap()
                .rows
                .len(),
            15
        );
        assert!(select_exhaustive(&[0usize; 5], additive(&[0.0])).is_err());
    }

    #[test]
    fn stagewise_row_counts() {
        let w: &'static [f64] = &[
            0.1, 0.9, 0.3, 0.8, 0.2, 0.7, 0.05, 0.6, 0.4, 0.15, 0.5, 0.01, 0.02, 0.03,
        ];
        let r = select_stagewise(&(0..14).collect::<Vec<usize>>(), 5, additive(w)).unwrap();
        assert_eq!(r.rows.len(), 40);
        assert_eq!(
            r.rows
                .iter()
                .filter(|r| r.stage == Stage::Individual)
                .count(),
            14
        );
        // top five by score: 1, 3, 5, 7, 10 in input order
        assert_eq!(r.rows[14].features, vec![1, 3]);
        assert_eq!(r.rows.last().unwrap().features, vec![1, 3, 5, 7, 10]);
        assert_eq!(r.best_row().features, vec![1, 3, 5, 7, 10]);

        let six =
            select_stagewise(&(0..6).collect::<Vec<usize>>(), 5, additive(&[0.1; 6])).unwrap();
        assert_eq!(six.rows.len(), 32);
        assert!(select_stagewise(&[0usize, 1, 2, 3, 4], 5, additive(&[0.0; 5])).is_err());
    }

    #[test]
    fn stagewise_ties_keep_earlier_features() {
        // features 4 and 5 tie for fifth place
        let w: &'static [f64] = &[0.9, 0.8, 0.7, 0.6, 0.5, 0.5, 0.1];
        let r = select_stagewise(&(0..7).collect::<Vec<usize>>(), 5, additive(w)).unwrap();
        assert_eq!(r.rows.last().unwrap().features, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn csv_layout() {
        let r = select_exhaustive(&["a", "b"], |s: &[&str]| {
            Ok(CvScore {
                mean_f1: s.len() as f64 / 2.0,
                fold_f1: vec![0.5, 0.5],
            })
        })
        .unwrap();
        let mut out = Vec::new();
        write_selection_csv(&mut out, &r).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "stage,features,mean_f1,fold_1,fold_2,best\n\
             individual,a,0.5,0.5,0.5,false\n\
             individual,b,0.5,0.5,0.5,false\n\
             combination,a+b,1,0.5,0.5,true\n"
        );
    }
}
