//! Chi-square feature ranking over discretised features.

use super::{AnalysisError, DataMatrix, ImportanceRanking};

/// Raw chi-square statistic per feature.
///
/// Each feature is discretised into at most `bins` equal-frequency bins
/// (duplicate edges merged, so heavily tied features land in fewer bins) and
/// tested against the class labels on the resulting contingency table.
/// Constant features produce a single bin and therefore score 0.
pub fn chi2_scores(matrix: &DataMatrix, bins: usize) -> Result<Vec<f64>, AnalysisError> {
    if bins < 2 {
        return Err(AnalysisError::InvalidParameter(format!(
            "bin count must be at least 2, got {bins}"
        )));
    }
    let classes = matrix.classes();
    if classes.len() < 2 {
        return Err(AnalysisError::SingleClass);
    }
    let n = matrix.n_rows();
    let class_index: Vec<usize> = matrix
        .labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).unwrap())
        .collect();

    let mut scores = Vec::with_capacity(matrix.n_cols());
    for j in 0..matrix.n_cols() {
        let values = matrix.column(j);
        let edges = equal_frequency_edges(&values, bins);
        let assign: Vec<usize> = values
            .iter()
            .map(|v| edges.partition_point(|e| e <= v))
            .collect();
        scores.push(chi2_statistic(
            &assign,
            edges.len() + 1,
            &class_index,
            classes.len(),
            n,
        ));
    }
    Ok(scores)
}

/// Upper-exclusive bin edges at the equal-frequency quantiles, deduplicated.
fn equal_frequency_edges(values: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut edges = Vec::new();
    for q in 1..bins {
        let idx = q * n / bins;
        if idx == 0 || idx >= n {
            continue;
        }
        let edge = sorted[idx];
        if edges.last() != Some(&edge) {
            edges.push(edge);
        }
    }
    edges
}

fn chi2_statistic(
    bin_of: &[usize],
    n_bins: usize,
    class_of: &[usize],
    n_classes: usize,
    n: usize,
) -> f64 {
    let mut observed = vec![vec![0.0f64; n_classes]; n_bins];
    let mut bin_totals = vec![0.0f64; n_bins];
    let mut class_totals = vec![0.0f64; n_classes];
    for (&b, &c) in bin_of.iter().zip(class_of) {
        observed[b][c] += 1.0;
        bin_totals[b] += 1.0;
        class_totals[c] += 1.0;
    }
    let mut stat = 0.0;
    for b in 0..n_bins {
        if bin_totals[b] == 0.0 {
            continue;
        }
        for c in 0..n_classes {
            let expected = bin_totals[b] * class_totals[c] / n as f64;
            if expected > 0.0 {
                let diff = observed[b][c] - expected;
                stat += diff * diff / expected;
            }
        }
    }
    stat
}

/// Min-max normalised chi-square ranking of all features.
pub fn chi2_rank(matrix: &DataMatrix, bins: usize) -> Result<ImportanceRanking, AnalysisError> {
    let raw = chi2_scores(matrix, bins)?;
    Ok(ImportanceRanking::from_scores(
        "chi2",
        matrix.names.clone(),
        raw,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled(columns: Vec<Vec<f64>>, labels: Vec<u8>) -> DataMatrix {
        let n = labels.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        let names = (0..columns.len()).map(|j| format!("f{j}")).collect();
        DataMatrix::new(names, rows, labels).unwrap()
    }

    #[test]
    fn perfect_association_scores_the_sample_size() {
        // A feature identical to a balanced binary label in two bins: the
        // statistic of full association equals n.
        let feature: Vec<f64> = vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let labels: Vec<u8> = vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let m = labelled(vec![feature], labels);
        let scores = chi2_scores(&m, 2).unwrap();
        assert!((scores[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn independent_feature_scores_zero() {
        // Uniform contingency: observed equals expected everywhere.
        let feature = vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        let labels = vec![0, 0, 1, 1, 0, 0, 1, 1];
        let m = labelled(vec![feature], labels);
        let scores = chi2_scores(&m, 2).unwrap();
        assert!(scores[0].abs() < 1e-12);
    }

    #[test]
    fn constant_feature_scores_zero() {
        let feature = vec![5.0; 8];
        let labels = vec![0, 1, 0, 1, 0, 1, 0, 1];
        let m = labelled(vec![feature], labels);
        let scores = chi2_scores(&m, 10).unwrap();
        assert_eq!(scores[0], 0.0);
    }

    #[test]
    fn statistic_is_invariant_under_monotone_transforms() {
        let feature: Vec<f64> = (0..40).map(|i| i as f64 / 3.0).collect();
        let labels: Vec<u8> = (0..40).map(|i| (i / 10) as u8).collect();
        let squashed: Vec<f64> = feature.iter().map(|v| (v * 0.3).exp()).collect();
        let a = chi2_scores(&labelled(vec![feature], labels.clone()), 10).unwrap();
        let b = chi2_scores(&labelled(vec![squashed], labels), 10).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-9);
    }

    #[test]
    fn single_class_labels_are_rejected() {
        let m = labelled(vec![vec![1.0, 2.0, 3.0]], vec![1, 1, 1]);
        assert!(matches!(
            chi2_scores(&m, 10),
            Err(AnalysisError::SingleClass)
        ));
    }

    #[test]
    fn ranking_contains_every_feature_once() {
        let m = labelled(
            vec![
                vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0],
                vec![0.1, 0.4, 0.2, 0.9, 0.3, 0.2, 0.8, 0.7],
                vec![7.0; 8],
            ],
            vec![0, 0, 1, 1, 0, 0, 1, 1],
        );
        let ranking = chi2_rank(&m, 4).unwrap();
        let mut ranks = ranking.ranks.clone();
        ranks.sort_unstable();
        assert_eq!(ranks, vec![1, 2, 3]);
        assert_eq!(ranking.scores[2], 0.0);
    }
}
