//! Linear max-margin classifier trained on hinge loss with a stochastic
//! subgradient schedule, one-vs-rest over the class labels.
//!
//! Inputs should be standardised first (see
//! [`zscore_fit_apply`](super::zscore_fit_apply)); unscaled features are
//! accepted but condition the problem badly. The per-class coefficient
//! magnitudes double as a feature importance ranking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AnalysisError, DataMatrix, ImportanceRanking};
use crate::seeds;

#[derive(Clone, Debug)]
pub struct MarginParams {
    /// L2 regularisation strength.
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for MarginParams {
    fn default() -> Self {
        MarginParams {
            lambda: 1e-4,
            epochs: 100,
            seed: 0,
        }
    }
}

/// One-vs-rest linear models: a weight vector and bias per class.
#[derive(Clone, Debug)]
pub struct MarginModel {
    pub classes: Vec<u8>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    feature_names: Vec<String>,
}

/// Trains one hinge-loss linear model per class with learning rate
/// `1 / (lambda * t)` over shuffled epochs.
pub fn train_margin(
    train: &DataMatrix,
    params: &MarginParams,
) -> Result<MarginModel, AnalysisError> {
    let classes = train.classes();
    if classes.len() < 2 {
        return Err(AnalysisError::SingleClass);
    }
    if !params.lambda.is_finite() || params.lambda <= 0.0 {
        return Err(AnalysisError::InvalidParameter(format!(
            "lambda must be positive, got {}",
            params.lambda
        )));
    }
    let k = train.n_cols();
    let n = train.n_rows();
    let mut weights = Vec::with_capacity(classes.len());
    let mut biases = Vec::with_capacity(classes.len());

    for (c, &class) in classes.iter().enumerate() {
        let targets: Vec<f64> = train
            .labels
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(params.seed, c as u64));
        let mut w = vec![0.0; k];
        let mut b = 0.0;
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 1.0;
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let eta = 1.0 / (params.lambda * t);
                let row = &train.rows[i];
                let y = targets[i];
                let margin = y * (dot(&w, row) + b);
                let shrink = 1.0 - eta * params.lambda;
                if margin < 1.0 {
                    for (wj, xj) in w.iter_mut().zip(row) {
                        *wj = *wj * shrink + eta * y * xj;
                    }
                    b += eta * y;
                } else {
                    for wj in &mut w {
                        *wj *= shrink;
                    }
                }
                t += 1.0;
            }
        }
        weights.push(w);
        biases.push(b);
    }

    Ok(MarginModel {
        classes,
        weights,
        biases,
        feature_names: train.names.clone(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl MarginModel {
    /// Highest decision value wins; ties go to the smaller label.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (c, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let score = dot(w, row) + b;
            if score > best_score {
                best_score = score;
                best = c;
            }
        }
        self.classes[best]
    }

    pub fn predict(&self, matrix: &DataMatrix) -> Vec<u8> {
        matrix.rows.iter().map(|r| self.predict_row(r)).collect()
    }

    pub fn accuracy(&self, matrix: &DataMatrix) -> f64 {
        let hits = self
            .predict(matrix)
            .iter()
            .zip(&matrix.labels)
            .filter(|(p, l)| p == l)
            .count();
        hits as f64 / matrix.n_rows() as f64
    }

    /// Mean absolute coefficient per feature across the class models,
    /// min-max normalised.
    pub fn coefficients(&self) -> ImportanceRanking {
        let k = self.feature_names.len();
        let mut raw = vec![0.0; k];
        for w in &self.weights {
            for (total, wj) in raw.iter_mut().zip(w) {
                *total += wj.abs();
            }
        }
        for v in &mut raw {
            *v /= self.weights.len() as f64;
        }
        ImportanceRanking::from_scores("margin-coefficients", self.feature_names.clone(), raw)
    }
}
