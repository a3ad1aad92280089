//! Train/test splitting and feature standardisation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AnalysisError, DataMatrix};

/// Seeded stratified split into (train, test).
///
/// Each class contributes `round(test_fraction * count)` rows to the test
/// side, clamped so both sides keep at least one row per class. Classes with
/// fewer than 2 rows are rejected.
pub fn stratified_split(
    matrix: &DataMatrix,
    test_fraction: f64,
    seed: u64,
) -> Result<(DataMatrix, DataMatrix), AnalysisError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(AnalysisError::InvalidParameter(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in matrix.classes() {
        let mut members: Vec<usize> = (0..matrix.n_rows())
            .filter(|&i| matrix.labels[i] == class)
            .collect();
        if members.len() < 2 {
            return Err(AnalysisError::ClassTooSmall {
                label: class,
                rows: members.len(),
            });
        }
        members.shuffle(&mut rng);
        let want = (test_fraction * members.len() as f64).round() as usize;
        let take = want.clamp(1, members.len() - 1);
        test_idx.extend(members.drain(..take));
        train_idx.extend(members);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((
        matrix.select_rows(&train_idx),
        matrix.select_rows(&test_idx),
    ))
}

/// Standardises both matrices with the train statistics only.
///
/// Columns with zero deviation in the train set pass through as zeros.
pub fn zscore_fit_apply(train: &DataMatrix, test: &DataMatrix) -> (DataMatrix, DataMatrix) {
    let k = train.n_cols();
    let n = train.n_rows() as f64;
    let means: Vec<f64> = (0..k)
        .map(|j| train.rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    let sds: Vec<f64> = (0..k)
        .map(|j| {
            (train
                .rows
                .iter()
                .map(|r| (r[j] - means[j]).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        })
        .collect();
    let transform = |m: &DataMatrix| {
        let mut out = m.clone();
        for row in &mut out.rows {
            for j in 0..k {
                row[j] = if sds[j] > 0.0 {
                    (row[j] - means[j]) / sds[j]
                } else {
                    0.0
                };
            }
        }
        out
    };
    (transform(train), transform(test))
}
