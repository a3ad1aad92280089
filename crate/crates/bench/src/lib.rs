//! Shared fixtures for the criterion benchmarks.

use beescape_core::features::PopulationSnapshot;
use beescape_core::problems::BitString;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random snapshot of `n` sources over `dims` bits, colony-invariant
/// consistent (gbest fitness dominates the parents).
pub fn random_snapshot(n: usize, dims: usize, seed: u64) -> PopulationSnapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<BitString> = (0..n).map(|_| BitString::random(dims, &mut rng)).collect();
    let children: Vec<BitString> = (0..n).map(|_| BitString::random(dims, &mut rng)).collect();
    let parent_fitness: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
    let child_fitness: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
    let best = parent_fitness
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let worst = parent_fitness
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    PopulationSnapshot {
        gbest: BitString::random(dims, &mut rng),
        gbest_fitness: parent_fitness[best] + 1.0,
        pbest: parents[best].clone(),
        pworst: parents[worst].clone(),
        trials: (0..n).map(|_| rng.random_range(0..50)).collect(),
        trial_max: 100,
        dims,
        parents,
        children,
        parent_fitness,
        child_fitness,
    }
}

/// Labelled random matrix where column 0 carries the class signal.
pub fn random_matrix(rows: usize, cols: usize, classes: u8, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(rows);
    let mut y = Vec::with_capacity(rows);
    for _ in 0..rows {
        let label = rng.random_range(0..classes);
        let mut row: Vec<f64> = (0..cols).map(|_| rng.random::<f64>()).collect();
        row[0] = label as f64 + rng.random::<f64>() * 0.5;
        x.push(row);
        y.push(label);
    }
    (x, y)
}
