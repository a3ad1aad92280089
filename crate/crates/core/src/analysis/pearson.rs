//! Pearson correlation matrices over feature columns.

use super::DataMatrix;

/// Pairwise Pearson correlation of all feature columns.
///
/// The matrix is symmetric with a unit diagonal; constant columns correlate
/// 0 with everything, including themselves.
pub fn pearson_matrix(matrix: &DataMatrix) -> Vec<Vec<f64>> {
    let k = matrix.n_cols();
    let n = matrix.n_rows() as f64;
    let means: Vec<f64> = (0..k)
        .map(|j| matrix.rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    let sds: Vec<f64> = (0..k)
        .map(|j| {
            (matrix
                .rows
                .iter()
                .map(|r| (r[j] - means[j]).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        })
        .collect();

    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        if sds[i] == 0.0 {
            continue;
        }
        out[i][i] = 1.0;
        for j in (i + 1)..k {
            if sds[j] == 0.0 {
                continue;
            }
            let cov = matrix
                .rows
                .iter()
                .map(|r| (r[i] - means[i]) * (r[j] - means[j]))
                .sum::<f64>()
                / n;
            let r = cov / (sds[i] * sds[j]);
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    out
}

/// Renders a correlation matrix as CSV with feature names on both axes.
pub fn matrix_to_csv(names: &[String], matrix: &[Vec<f64>]) -> String {
    let mut out = String::from("feature");
    for name in names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, row) in matrix.iter().enumerate() {
        out.push_str(&names[i]);
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}
