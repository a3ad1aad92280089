//! Per-phase predictivity analytics: Pearson correlation, chi-square feature
//! ranking, and three classifiers (random forest, linear max-margin,
//! multilayer perceptron) with accuracy and feature-importance reports.

mod chi2;
mod evaluate;
mod forest;
mod margin;
mod mlp;
mod pearson;
mod split;

use thiserror::Error;

use crate::dataset::CaseRecord;
use crate::features::FEATURE_NAMES;

pub use chi2::{chi2_rank, chi2_scores};
pub use evaluate::{evaluate, AnalysisReport, AnalyzeOptions, ClassifierAccuracies, PhaseReport};
pub use forest::{train_forest, ForestParams, RandomForest};
pub use margin::{train_margin, MarginModel, MarginParams};
pub use mlp::{train_mlp, MlpGradients, MlpModel, MlpParams};
pub use pearson::{matrix_to_csv, pearson_matrix};
pub use split::{stratified_split, zscore_fit_apply};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset mixes problems: {0} and {1}")]
    MixedProblems(String, String),
    #[error("phase {0} is missing from the dataset")]
    MissingPhase(u8),
    #[error("only one class present; at least two are required")]
    SingleClass,
    #[error("class {label} has {rows} row(s); at least 2 are required")]
    ClassTooSmall { label: u8, rows: usize },
    #[error("matrix shape is inconsistent: {0}")]
    Shape(String),
    #[error("non-finite value in column {column:?} at row {row}")]
    NonFinite { column: String, row: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A labelled feature matrix: `rows x names.len()` values plus one class
/// label per row.
#[derive(Clone, Debug)]
pub struct DataMatrix {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    /// Search phase the rows came from; 0 for synthetic data.
    pub phase: u8,
    pub problem: String,
}

impl DataMatrix {
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
    ) -> Result<Self, AnalysisError> {
        if rows.is_empty() {
            return Err(AnalysisError::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(AnalysisError::Shape(format!(
                "{} rows vs {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != names.len() {
                return Err(AnalysisError::Shape(format!(
                    "row {i} has {} values, expected {}",
                    row.len(),
                    names.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(AnalysisError::NonFinite {
                        column: names[j].clone(),
                        row: i,
                    });
                }
            }
        }
        Ok(DataMatrix {
            names,
            rows,
            labels,
            phase: 0,
            problem: String::new(),
        })
    }

    /// Builds the 19-feature matrix from successful records of one phase.
    pub fn from_records(records: &[CaseRecord], phase: u8) -> Result<Self, AnalysisError> {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut problem = None;
        for r in records.iter().filter(|r| r.success && r.phase == phase) {
            rows.push(r.features.values().to_vec());
            labels.push(r.op);
            problem.get_or_insert(r.problem);
        }
        if rows.is_empty() {
            return Err(AnalysisError::MissingPhase(phase));
        }
        let names = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
        let mut matrix = DataMatrix::new(names, rows, labels)?;
        matrix.phase = phase;
        matrix.problem = problem.map(|p| p.to_string()).unwrap_or_default();
        Ok(matrix)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> Vec<u8> {
        let mut classes: Vec<u8> = self.labels.clone();
        classes.sort_unstable();
        classes.dedup();
        classes
    }

    /// Fraction of rows belonging to the most frequent class.
    pub fn majority_fraction(&self) -> f64 {
        let mut counts = [0usize; 256];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        let max = counts.iter().max().copied().unwrap_or(0);
        max as f64 / self.n_rows() as f64
    }

    /// Appends an extra feature column.
    pub fn push_column(&mut self, name: &str, values: &[f64]) -> Result<(), AnalysisError> {
        if values.len() != self.n_rows() {
            return Err(AnalysisError::Shape(format!(
                "column has {} values, matrix has {} rows",
                values.len(),
                self.n_rows()
            )));
        }
        for (row, &v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
        self.names.push(name.to_string());
        Ok(())
    }

    /// New matrix holding the given row indices, in order.
    pub fn select_rows(&self, indices: &[usize]) -> DataMatrix {
        DataMatrix {
            names: self.names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            phase: self.phase,
            problem: self.problem.clone(),
        }
    }
}

/// A normalised per-feature importance ranking.
///
/// Scores are min-max normalised to `[0, 1]`; ranks are a permutation of
/// `1..=k` with 1 the most important (ties break towards the earlier
/// feature).
#[derive(Clone, Debug)]
pub struct ImportanceRanking {
    pub method: String,
    pub names: Vec<String>,
    pub scores: Vec<f64>,
    pub ranks: Vec<usize>,
}

impl ImportanceRanking {
    /// Normalises raw scores and assigns ranks.
    pub fn from_scores(method: &str, names: Vec<String>, raw: Vec<f64>) -> Self {
        assert_eq!(names.len(), raw.len());
        let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scores: Vec<f64> = if max > min {
            raw.iter().map(|s| (s - min) / (max - min)).collect()
        } else {
            vec![0.0; raw.len()]
        };
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let mut ranks = vec![0usize; scores.len()];
        for (rank, &feature) in order.iter().enumerate() {
            ranks[feature] = rank + 1;
        }
        ImportanceRanking {
            method: method.to_string(),
            names,
            scores,
            ranks,
        }
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.ranks[i])
    }

    /// CSV rendering: `feature,score,rank` in feature order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature,score,rank\n");
        for i in 0..self.names.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.names[i], self.scores[i], self.ranks[i]
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_validates_shape_and_finiteness() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(DataMatrix::new(names.clone(), vec![], vec![]).is_err());
        assert!(DataMatrix::new(names.clone(), vec![vec![1.0]], vec![0]).is_err());
        assert!(DataMatrix::new(names.clone(), vec![vec![1.0, f64::NAN]], vec![0]).is_err());
        let m = DataMatrix::new(names, vec![vec![1.0, 2.0], vec![3.0, 4.0]], vec![0, 1]).unwrap();
        assert_eq!(m.n_rows(), 2);
        assert_eq!(m.column(1), vec![2.0, 4.0]);
        assert_eq!(m.classes(), vec![0, 1]);
        assert_eq!(m.majority_fraction(), 0.5);
    }

    #[test]
    fn ranking_normalises_and_ranks_with_stable_ties() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let r = ImportanceRanking::from_scores("test", names, vec![2.0, 8.0, 2.0, 5.0]);
        assert_eq!(r.scores, vec![0.0, 1.0, 0.0, 0.5]);
        assert_eq!(r.ranks, vec![3, 1, 4, 2]);
        let mut sorted = r.ranks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 4]);
        assert_eq!(r.rank_of("b"), Some(1));
    }

    #[test]
    fn ranking_of_constant_scores_is_all_zero() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let r = ImportanceRanking::from_scores("test", names, vec![3.0, 3.0]);
        assert_eq!(r.scores, vec![0.0, 0.0]);
        assert_eq!(r.ranks, vec![1, 2]);
    }
}
