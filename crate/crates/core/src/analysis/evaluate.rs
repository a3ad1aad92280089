//! Full per-phase analysis: split, train the three classifiers, and collect
//! correlation, ranking, and accuracy reports.

use std::fmt::Write as _;

use super::{
    chi2_rank, pearson_matrix, stratified_split, train_forest, train_margin, train_mlp,
    zscore_fit_apply, AnalysisError, DataMatrix, ForestParams, ImportanceRanking, MarginParams,
    MlpParams,
};
use crate::dataset::CaseRecord;
use crate::seeds;

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub test_fraction: f64,
    /// Bin budget for the chi-square discretisation.
    pub bins: usize,
    pub forest_trees: usize,
    pub margin: MarginParams,
    pub mlp: MlpParams,
    pub parallel: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            seed: 0,
            test_fraction: 0.2,
            bins: 10,
            forest_trees: 200,
            margin: MarginParams::default(),
            mlp: MlpParams::default(),
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifierAccuracies {
    pub forest: f64,
    pub margin: f64,
    pub mlp: f64,
}

/// Everything measured on one search phase.
#[derive(Clone, Debug)]
pub struct PhaseReport {
    pub phase: u8,
    pub cases: usize,
    pub test_cases: usize,
    /// Fraction of the test split held by its most frequent class.
    pub baseline: f64,
    pub accuracy: ClassifierAccuracies,
    pub pearson: Vec<Vec<f64>>,
    pub chi2: ImportanceRanking,
    pub forest_importance: ImportanceRanking,
    pub margin_importance: ImportanceRanking,
}

/// Per-phase reports plus the cross-phase accuracy means.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub problem: String,
    pub feature_names: Vec<String>,
    pub phases: Vec<PhaseReport>,
    pub mean: ClassifierAccuracies,
}

/// Runs the full analysis over a recorded dataset.
///
/// The dataset must contain successful cases with at least two operator
/// classes in each of the three phases. Per phase: a seeded stratified
/// split, the forest on raw features, the margin and perceptron models on
/// standardised features, plus Pearson and chi-square statistics over the
/// whole phase.
pub fn evaluate(
    records: &[CaseRecord],
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, AnalysisError> {
    let successes: Vec<&CaseRecord> = records.iter().filter(|r| r.success).collect();
    if successes.is_empty() {
        return Err(AnalysisError::EmptyDataset);
    }
    let first = successes[0].problem;
    if let Some(other) = successes.iter().find(|r| r.problem != first) {
        return Err(AnalysisError::MixedProblems(
            first.to_string(),
            other.problem.to_string(),
        ));
    }

    let mut phases = Vec::with_capacity(3);
    for phase in 1..=3u8 {
        let matrix = DataMatrix::from_records(records, phase)?;
        phases.push(evaluate_phase(&matrix, opts)?);
    }

    let mean = ClassifierAccuracies {
        forest: phases.iter().map(|p| p.accuracy.forest).sum::<f64>() / 3.0,
        margin: phases.iter().map(|p| p.accuracy.margin).sum::<f64>() / 3.0,
        mlp: phases.iter().map(|p| p.accuracy.mlp).sum::<f64>() / 3.0,
    };
    Ok(AnalysisReport {
        problem: first.to_string(),
        feature_names: phases[0].chi2.names.clone(),
        phases,
        mean,
    })
}

fn evaluate_phase(
    matrix: &DataMatrix,
    opts: &AnalyzeOptions,
) -> Result<PhaseReport, AnalysisError> {
    let phase = matrix.phase;
    let split_seed = seeds::derive(opts.seed, phase as u64);
    let (train, test) = stratified_split(matrix, opts.test_fraction, split_seed)?;

    let forest = train_forest(
        &train,
        &ForestParams {
            trees: opts.forest_trees,
            seed: seeds::derive(opts.seed, 0x100 + phase as u64),
            parallel: opts.parallel,
        },
    )?;
    let forest_accuracy = forest.accuracy(&test);

    let (strain, stest) = zscore_fit_apply(&train, &test);
    let margin = train_margin(
        &strain,
        &MarginParams {
            seed: seeds::derive(opts.seed, 0x200 + phase as u64),
            ..opts.margin.clone()
        },
    )?;
    let margin_accuracy = margin.accuracy(&stest);

    let mlp = train_mlp(
        &strain,
        &MlpParams {
            seed: seeds::derive(opts.seed, 0x300 + phase as u64),
            ..opts.mlp.clone()
        },
    );
    let mlp_accuracy = mlp.accuracy(&stest);

    Ok(PhaseReport {
        phase,
        cases: matrix.n_rows(),
        test_cases: test.n_rows(),
        baseline: test.majority_fraction(),
        accuracy: ClassifierAccuracies {
            forest: forest_accuracy,
            margin: margin_accuracy,
            mlp: mlp_accuracy,
        },
        pearson: pearson_matrix(matrix),
        chi2: chi2_rank(matrix, opts.bins)?,
        forest_importance: forest.importance(),
        margin_importance: margin.coefficients(),
    })
}

impl AnalysisReport {
    /// Accuracy table: one row per phase plus the cross-phase mean.
    pub fn accuracy_csv(&self) -> String {
        let mut out = String::from("phase,forest,margin,mlp\n");
        for p in &self.phases {
            writeln!(
                out,
                "{},{:.4},{:.4},{:.4}",
                p.phase, p.accuracy.forest, p.accuracy.margin, p.accuracy.mlp
            )
            .unwrap();
        }
        writeln!(
            out,
            "mean,{:.4},{:.4},{:.4}",
            self.mean.forest, self.mean.margin, self.mean.mlp
        )
        .unwrap();
        out
    }

    /// Human-readable summary of accuracies and the top-ranked features.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "problem: {}", self.problem).unwrap();
        writeln!(out).unwrap();
        writeln!(
            out,
            "{:<8} {:>8} {:>8} {:>8} {:>10} {:>7}",
            "phase", "forest", "margin", "mlp", "baseline", "cases"
        )
        .unwrap();
        for p in &self.phases {
            writeln!(
                out,
                "{:<8} {:>8.2} {:>8.2} {:>8.2} {:>10.2} {:>7}",
                p.phase, p.accuracy.forest, p.accuracy.margin, p.accuracy.mlp, p.baseline, p.cases
            )
            .unwrap();
        }
        writeln!(
            out,
            "{:<8} {:>8.2} {:>8.2} {:>8.2}",
            "mean", self.mean.forest, self.mean.margin, self.mean.mlp
        )
        .unwrap();
        writeln!(out).unwrap();
        for p in &self.phases {
            writeln!(
                out,
                "phase {} top features: chi2 {} | forest {} | margin {}",
                p.phase,
                top_three(&p.chi2),
                top_three(&p.forest_importance),
                top_three(&p.margin_importance)
            )
            .unwrap();
        }
        out
    }

    /// Long-format importance table for external plotting:
    /// `problem,phase,method,feature,score,rank`.
    pub fn importance_long_csv(&self) -> String {
        let mut out = String::from("problem,phase,method,feature,score,rank\n");
        for p in &self.phases {
            for ranking in [&p.chi2, &p.forest_importance, &p.margin_importance] {
                for i in 0..ranking.names.len() {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        self.problem,
                        p.phase,
                        ranking.method,
                        ranking.names[i],
                        ranking.scores[i],
                        ranking.ranks[i]
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}

fn top_three(ranking: &ImportanceRanking) -> String {
    let mut order: Vec<usize> = (0..ranking.names.len()).collect();
    order.sort_by_key(|&i| ranking.ranks[i]);
    order
        .iter()
        .take(3)
        .map(|&i| ranking.names[i].as_str())
        .collect::<Vec<_>>()
        .join("/")
}
