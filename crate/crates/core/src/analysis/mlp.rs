//! Multilayer perceptron with one rectified hidden layer and a softmax
//! output, trained with cross-entropy loss and adaptive moment estimation.
//!
//! Inputs should be standardised. All randomness (weight init, batch order)
//! comes from the seed, so training is bit-reproducible.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DataMatrix;
use crate::seeds;

#[derive(Clone, Debug)]
pub struct MlpParams {
    pub hidden: usize,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: 32,
            epochs: 200,
            batch: 32,
            learning_rate: 1e-3,
            seed: 0,
        }
    }
}

/// Weights of the two dense layers. `w1` is hidden x input, `w2` is
/// classes x hidden.
#[derive(Clone, Debug)]
pub struct MlpModel {
    pub classes: Vec<u8>,
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

/// Gradients in the same shapes as the model weights.
#[derive(Clone, Debug)]
pub struct MlpGradients {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

impl MlpModel {
    /// Fresh network with Xavier-uniform weights and zero biases.
    pub fn init(n_features: usize, classes: Vec<u8>, hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, 0x11));
        let out = classes.len();
        let mut layer = |rows: usize, cols: usize| -> Vec<Vec<f64>> {
            let bound = (6.0 / (rows + cols) as f64).sqrt();
            (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(-bound..bound)).collect())
                .collect()
        };
        let w1 = layer(hidden, n_features);
        let w2 = layer(out, hidden);
        MlpModel {
            classes,
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: vec![0.0; out],
        }
    }

    fn forward(&self, row: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let hidden: Vec<f64> = self
            .w1
            .iter()
            .zip(&self.b1)
            .map(|(w, b)| (w.iter().zip(row).map(|(wj, x)| wj * x).sum::<f64>() + b).max(0.0))
            .collect();
        let logits: Vec<f64> = self
            .w2
            .iter()
            .zip(&self.b2)
            .map(|(w, b)| w.iter().zip(&hidden).map(|(wj, h)| wj * h).sum::<f64>() + b)
            .collect();
        (hidden, logits)
    }

    /// Predicted class of one row; ties go to the smaller label.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let (_, logits) = self.forward(row);
        let mut best = 0;
        for c in 1..logits.len() {
            if logits[c] > logits[best] {
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

    fn class_index(&self, label: u8) -> usize {
        self.classes
            .iter()
            .position(|&c| c == label)
            .expect("label seen in training")
    }

    /// Mean cross-entropy of a batch.
    pub fn loss(&self, rows: &[Vec<f64>], labels: &[u8]) -> f64 {
        let mut total = 0.0;
        for (row, &label) in rows.iter().zip(labels) {
            let (_, logits) = self.forward(row);
            let probs = softmax(&logits);
            total -= probs[self.class_index(label)].max(1e-300).ln();
        }
        total / rows.len() as f64
    }

    /// Mean cross-entropy and its analytic gradient for a batch.
    pub fn loss_and_grad(&self, rows: &[Vec<f64>], labels: &[u8]) -> (f64, MlpGradients) {
        let n_in = self.w1[0].len();
        let hidden = self.w1.len();
        let out = self.w2.len();
        let mut grad = MlpGradients {
            w1: vec![vec![0.0; n_in]; hidden],
            b1: vec![0.0; hidden],
            w2: vec![vec![0.0; hidden]; out],
            b2: vec![0.0; out],
        };
        let scale = 1.0 / rows.len() as f64;
        let mut loss = 0.0;

        for (row, &label) in rows.iter().zip(labels) {
            let (h, logits) = self.forward(row);
            let probs = softmax(&logits);
            let target = self.class_index(label);
            loss -= probs[target].max(1e-300).ln();

            // d(loss)/d(logit_c) = p_c - 1[c == target]
            let mut dlogits = probs;
            dlogits[target] -= 1.0;

            let mut dhidden = vec![0.0; hidden];
            for (c, &dlogit) in dlogits.iter().enumerate() {
                let d = dlogit * scale;
                for j in 0..hidden {
                    grad.w2[c][j] += d * h[j];
                    dhidden[j] += dlogit * self.w2[c][j];
                }
                grad.b2[c] += d;
            }
            for j in 0..hidden {
                if h[j] > 0.0 {
                    let d = dhidden[j] * scale;
                    for (g, &x) in grad.w1[j].iter_mut().zip(row) {
                        *g += d * x;
                    }
                    grad.b1[j] += d;
                }
            }
        }
        (loss * scale, grad)
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: f64,
    lr: f64,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(len: usize, lr: f64) -> Self {
        Adam {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0.0,
            lr,
        }
    }

    fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        self.t += 1.0;
        let bias1 = 1.0 - Self::BETA1.powf(self.t);
        let bias2 = 1.0 - Self::BETA2.powf(self.t);
        for ((p, &g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            let m_hat = *m / bias1;
            let v_hat = *v / bias2;
            *p -= self.lr * m_hat / (v_hat.sqrt() + Self::EPS);
        }
    }
}

/// Trains a one-hidden-layer perceptron on the matrix. The class set is
/// taken from the training labels.
pub fn train_mlp(train: &DataMatrix, params: &MlpParams) -> MlpModel {
    let classes = train.classes();
    let mut model = MlpModel::init(train.n_cols(), classes, params.hidden, params.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(params.seed, 0x22));
    let n = train.n_rows();
    let mut order: Vec<usize> = (0..n).collect();

    let hidden = params.hidden;
    let n_in = train.n_cols();
    let out = model.classes.len();
    let mut opt_w1 = Adam::new(hidden * n_in, params.learning_rate);
    let mut opt_b1 = Adam::new(hidden, params.learning_rate);
    let mut opt_w2 = Adam::new(out * hidden, params.learning_rate);
    let mut opt_b2 = Adam::new(out, params.learning_rate);

    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(params.batch.max(1)) {
            let rows: Vec<Vec<f64>> = batch.iter().map(|&i| train.rows[i].clone()).collect();
            let labels: Vec<u8> = batch.iter().map(|&i| train.labels[i]).collect();
            let (_, grad) = model.loss_and_grad(&rows, &labels);

            let mut w1_flat: Vec<f64> = model.w1.iter().flatten().copied().collect();
            let g1_flat: Vec<f64> = grad.w1.iter().flatten().copied().collect();
            opt_w1.step(&mut w1_flat, &g1_flat);
            for (j, row) in model.w1.iter_mut().enumerate() {
                row.copy_from_slice(&w1_flat[j * n_in..(j + 1) * n_in]);
            }
            opt_b1.step(&mut model.b1, &grad.b1);

            let mut w2_flat: Vec<f64> = model.w2.iter().flatten().copied().collect();
            let g2_flat: Vec<f64> = grad.w2.iter().flatten().copied().collect();
            opt_w2.step(&mut w2_flat, &g2_flat);
            for (c, row) in model.w2.iter_mut().enumerate() {
                row.copy_from_slice(&w2_flat[c * hidden..(c + 1) * hidden]);
            }
            opt_b2.step(&mut model.b2, &grad.b2);
        }
    }
    model
}
