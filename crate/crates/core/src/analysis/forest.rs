//! Random forest classifier built from scratch: bootstrap-resampled Gini
//! trees with per-node feature subsampling and mean-decrease-in-impurity
//! feature importance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{AnalysisError, DataMatrix, ImportanceRanking};
use crate::seeds;

#[derive(Clone, Debug)]
pub struct ForestParams {
    pub trees: usize,
    pub seed: u64,
    /// Train trees across threads; per-tree seeds keep the result identical
    /// to serial training.
    pub parallel: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            trees: 200,
            seed: 0,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

/// A trained forest.
#[derive(Clone, Debug)]
pub struct RandomForest {
    trees: Vec<Tree>,
    classes: Vec<u8>,
    feature_names: Vec<String>,
    /// Mean impurity decrease per feature across trees (unnormalised).
    importance_raw: Vec<f64>,
}

/// Trains `params.trees` Gini decision trees on bootstrap samples of the
/// training rows.
///
/// Each split considers `ceil(sqrt(k))` candidate features; nodes are grown
/// to purity or until fewer than 2 samples remain. Prediction is a majority
/// vote with ties broken towards the smallest class label.
pub fn train_forest(
    train: &DataMatrix,
    params: &ForestParams,
) -> Result<RandomForest, AnalysisError> {
    let classes = train.classes();
    if classes.len() < 2 {
        return Err(AnalysisError::SingleClass);
    }
    if params.trees == 0 {
        return Err(AnalysisError::InvalidParameter(
            "forest needs at least one tree".into(),
        ));
    }
    let class_of: Vec<usize> = train
        .labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).unwrap())
        .collect();
    let k = train.n_cols();
    let mtry = (k as f64).sqrt().ceil() as usize;

    let build = |tree_index: usize| -> (Tree, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(params.seed, tree_index as u64));
        let n = train.n_rows();
        let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let mut builder = TreeBuilder {
            matrix: train,
            class_of: &class_of,
            n_classes: classes.len(),
            mtry,
            total: sample.len() as f64,
            nodes: Vec::new(),
            importance: vec![0.0; k],
        };
        builder.grow(sample, &mut rng);
        (
            Tree {
                nodes: builder.nodes,
            },
            builder.importance,
        )
    };

    let grown: Vec<(Tree, Vec<f64>)> = if params.parallel {
        (0..params.trees).into_par_iter().map(build).collect()
    } else {
        (0..params.trees).map(build).collect()
    };

    let mut trees = Vec::with_capacity(params.trees);
    let mut importance_raw = vec![0.0; k];
    for (tree, importance) in grown {
        trees.push(tree);
        for (total, part) in importance_raw.iter_mut().zip(importance) {
            *total += part;
        }
    }
    for v in &mut importance_raw {
        *v /= params.trees as f64;
    }

    Ok(RandomForest {
        trees,
        classes,
        feature_names: train.names.clone(),
        importance_raw,
    })
}

struct TreeBuilder<'a> {
    matrix: &'a DataMatrix,
    class_of: &'a [usize],
    n_classes: usize,
    mtry: usize,
    total: f64,
    nodes: Vec<Node>,
    importance: Vec<f64>,
}

impl TreeBuilder<'_> {
    fn grow<R: Rng>(&mut self, sample: Vec<usize>, rng: &mut R) -> usize {
        let counts = self.count(&sample);
        let node_gini = gini(&counts, sample.len() as f64);

        if sample.len() < 2 || node_gini == 0.0 {
            return self.leaf(&counts);
        }
        let Some(split) = self.best_split(&sample, rng) else {
            return self.leaf(&counts);
        };

        let (mut left, mut right) = (Vec::new(), Vec::new());
        for &row in &sample {
            if self.matrix.rows[row][split.feature] <= split.threshold {
                left.push(row);
            } else {
                right.push(row);
            }
        }
        let n = sample.len() as f64;
        let left_gini = gini(&self.count(&left), left.len() as f64);
        let right_gini = gini(&self.count(&right), right.len() as f64);
        let decrease =
            node_gini - (left.len() as f64 / n) * left_gini - (right.len() as f64 / n) * right_gini;
        self.importance[split.feature] += (n / self.total) * decrease;

        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { class: 0 }); // placeholder, patched below
        let left_at = self.grow(left, rng);
        let right_at = self.grow(right, rng);
        self.nodes[at] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: left_at,
            right: right_at,
        };
        at
    }

    fn leaf(&mut self, counts: &[f64]) -> usize {
        let mut best = 0;
        for c in 1..counts.len() {
            if counts[c] > counts[best] {
                best = c;
            }
        }
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { class: best });
        at
    }

    fn count(&self, sample: &[usize]) -> Vec<f64> {
        let mut counts = vec![0.0; self.n_classes];
        for &row in sample {
            counts[self.class_of[row]] += 1.0;
        }
        counts
    }

    fn best_split<R: Rng>(&self, sample: &[usize], rng: &mut R) -> Option<SplitChoice> {
        let k = self.matrix.n_cols();
        let candidates = rand::seq::index::sample(rng, k, self.mtry.min(k));
        let mut best: Option<(f64, SplitChoice)> = None;

        for feature in candidates {
            let mut values: Vec<(f64, usize)> = sample
                .iter()
                .map(|&row| (self.matrix.rows[row][feature], self.class_of[row]))
                .collect();
            values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

            let n = values.len() as f64;
            let mut right_counts = vec![0.0; self.n_classes];
            for &(_, c) in &values {
                right_counts[c] += 1.0;
            }
            let mut left_counts = vec![0.0; self.n_classes];
            for i in 0..values.len() - 1 {
                let (v, c) = values[i];
                left_counts[c] += 1.0;
                right_counts[c] -= 1.0;
                let next = values[i + 1].0;
                if next == v {
                    continue;
                }
                let n_left = (i + 1) as f64;
                let n_right = n - n_left;
                let weighted = (n_left / n) * gini(&left_counts, n_left)
                    + (n_right / n) * gini(&right_counts, n_right);
                let better = match &best {
                    Some((score, _)) => weighted < *score,
                    None => true,
                };
                if better {
                    best = Some((
                        weighted,
                        SplitChoice {
                            feature,
                            threshold: (v + next) / 2.0,
                        },
                    ));
                }
            }
        }
        best.map(|(_, choice)| choice)
    }
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
}

fn gini(counts: &[f64], n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    1.0 - counts.iter().map(|c| (c / n).powi(2)).sum::<f64>()
}

impl RandomForest {
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut votes = vec![0usize; self.classes.len()];
        for tree in &self.trees {
            votes[tree.predict(row)] += 1;
        }
        let mut best = 0;
        for c in 1..votes.len() {
            if votes[c] > votes[best] {
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

    /// Mean decrease in impurity across the trees, min-max normalised.
    pub fn importance(&self) -> ImportanceRanking {
        ImportanceRanking::from_scores(
            "forest",
            self.feature_names.clone(),
            self.importance_raw.clone(),
        )
    }
}
