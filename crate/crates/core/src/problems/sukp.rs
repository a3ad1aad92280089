//! Set-Union Knapsack Problem: select items (each covering a set of weighted
//! elements) maximising total profit while the weight of the covered element
//! union stays within capacity.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BitString, Fitness, ProblemError};

/// A SUKP instance: `m` items over `n` weighted elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SukpInstance {
    m: usize,
    n: usize,
    capacity: f64,
    profits: Vec<f64>,
    weights: Vec<f64>,
    incidence: Vec<Vec<u8>>,
    /// Element indices per item, derived from `incidence` at construction.
    covers: Vec<Vec<u32>>,
}

impl SukpInstance {
    /// Validates and builds an instance.
    ///
    /// Requires `capacity > 0`, positive profits and weights, an `m x n`
    /// incidence matrix of 0/1 cells, and at least one element per item.
    pub fn new(
        capacity: f64,
        profits: Vec<f64>,
        weights: Vec<f64>,
        incidence: Vec<Vec<u8>>,
    ) -> Result<Self, ProblemError> {
        let m = profits.len();
        let n = weights.len();
        if m == 0 || n == 0 {
            return Err(ProblemError::InvalidInstance(
                "item and element counts must be at least 1".into(),
            ));
        }
        if !capacity.is_finite() || capacity <= 0.0 {
            return Err(ProblemError::InvalidInstance(format!(
                "capacity must be positive and finite, got {capacity}"
            )));
        }
        if let Some(p) = profits.iter().find(|p| !p.is_finite() || **p <= 0.0) {
            return Err(ProblemError::InvalidInstance(format!(
                "profits must be positive and finite, got {p}"
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(ProblemError::InvalidInstance(format!(
                "weights must be positive and finite, got {w}"
            )));
        }
        if incidence.len() != m {
            return Err(ProblemError::InvalidInstance(format!(
                "incidence has {} rows, expected {m}",
                incidence.len()
            )));
        }
        let mut covers = Vec::with_capacity(m);
        for (i, row) in incidence.iter().enumerate() {
            if row.len() != n {
                return Err(ProblemError::InvalidInstance(format!(
                    "incidence row {i} has {} columns, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&c| c > 1) {
                return Err(ProblemError::InvalidInstance(format!(
                    "incidence row {i} contains a value other than 0 or 1"
                )));
            }
            let items: Vec<u32> = row
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == 1)
                .map(|(j, _)| j as u32)
                .collect();
            if items.is_empty() {
                return Err(ProblemError::InvalidInstance(format!(
                    "item {i} covers no elements"
                )));
            }
            covers.push(items);
        }
        Ok(SukpInstance {
            m,
            n,
            capacity,
            profits,
            weights,
            incidence,
            covers,
        })
    }

    /// Item count `m` (the genotype length).
    pub fn items(&self) -> usize {
        self.m
    }

    /// Element count `n`.
    pub fn elements(&self) -> usize {
        self.n
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Elements covered by item `i`.
    pub fn covered_by(&self, i: usize) -> &[u32] {
        &self.covers[i]
    }

    fn check_dims(&self, x: &BitString) -> Result<(), ProblemError> {
        if x.len() != self.m {
            return Err(ProblemError::DimensionMismatch {
                expected: self.m,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Total weight of the element union covered by the selected items; each
/// element is counted once however many selected items cover it.
pub fn sukp_union_weight(x: &BitString, inst: &SukpInstance) -> Result<f64, ProblemError> {
    inst.check_dims(x)?;
    let mut covered = vec![false; inst.n];
    let mut total = 0.0;
    for i in x.ones() {
        for &e in inst.covered_by(i) {
            let e = e as usize;
            if !covered[e] {
                covered[e] = true;
                total += inst.weights[e];
            }
        }
    }
    Ok(total)
}

/// Total profit of the selected items, defined only for feasible solutions.
///
/// Callers must repair infeasible candidates first (see [`sukp_repair`]);
/// evaluating an infeasible solution is a contract violation and errors.
pub fn sukp_fitness(x: &BitString, inst: &SukpInstance) -> Result<Fitness, ProblemError> {
    let weight = sukp_union_weight(x, inst)?;
    if weight > inst.capacity {
        return Err(ProblemError::Infeasible {
            weight,
            capacity: inst.capacity,
        });
    }
    Ok(Fitness(x.ones().map(|i| inst.profits[i]).sum()))
}

/// Maps any selection onto a feasible one.
///
/// While the union weight exceeds capacity, the selected item with the lowest
/// profit-to-marginal-union-weight ratio is dropped (the marginal weight of a
/// selected item is the weight of elements only it covers; a zero marginal
/// weight counts as an infinite ratio). Once feasible, unselected items that
/// still fit are greedily re-added, highest ratio first. Ties break towards
/// the lower item index, so the result is fully deterministic.
pub fn sukp_repair(x: &BitString, inst: &SukpInstance) -> BitString {
    debug_assert_eq!(x.len(), inst.m);
    let mut selected: Vec<bool> = x.bits().iter().map(|&b| b == 1).collect();
    let mut cover = vec![0u32; inst.n];
    let mut total = 0.0;
    for i in x.ones() {
        for &e in inst.covered_by(i) {
            let e = e as usize;
            if cover[e] == 0 {
                total += inst.weights[e];
            }
            cover[e] += 1;
        }
    }

    // Drop phase: worst ratio out first until feasible.
    while total > inst.capacity {
        let mut worst: Option<(f64, usize)> = None;
        for (i, _) in selected.iter().enumerate().filter(|(_, &s)| s) {
            let marginal: f64 = inst
                .covered_by(i)
                .iter()
                .filter(|&&e| cover[e as usize] == 1)
                .map(|&e| inst.weights[e as usize])
                .sum();
            let ratio = if marginal > 0.0 {
                inst.profits[i] / marginal
            } else {
                f64::INFINITY
            };
            if worst.is_none_or(|(r, _)| ratio < r) {
                worst = Some((ratio, i));
            }
        }
        let (_, drop) = worst.expect("infeasible selection is non-empty");
        selected[drop] = false;
        for &e in inst.covered_by(drop) {
            let e = e as usize;
            cover[e] -= 1;
            if cover[e] == 0 {
                total -= inst.weights[e];
            }
        }
    }

    // Re-add phase: best ratio in first while it fits.
    loop {
        let mut best: Option<(f64, usize, f64)> = None;
        for (i, _) in selected.iter().enumerate().filter(|(_, &s)| !s) {
            let added: f64 = inst
                .covered_by(i)
                .iter()
                .filter(|&&e| cover[e as usize] == 0)
                .map(|&e| inst.weights[e as usize])
                .sum();
            if total + added > inst.capacity {
                continue;
            }
            let ratio = if added > 0.0 {
                inst.profits[i] / added
            } else {
                f64::INFINITY
            };
            if best.is_none_or(|(r, _, _)| ratio > r) {
                best = Some((ratio, i, added));
            }
        }
        match best {
            Some((_, add, added)) => {
                selected[add] = true;
                total += added;
                for &e in inst.covered_by(add) {
                    cover[e as usize] += 1;
                }
            }
            None => break,
        }
    }

    BitString::from_bits(selected.into_iter().map(u8::from).collect())
}

/// Generates a random instance, fully reproducible from `seed`.
///
/// Each incidence cell is 1 with probability `density` (all-zero rows get one
/// random element), profits and weights are uniform integers in `[1, 100]`,
/// and the capacity is `capacity_ratio` times the total element weight.
pub fn generate_sukp(
    m: usize,
    n: usize,
    density: f64,
    capacity_ratio: f64,
    seed: u64,
) -> Result<SukpInstance, ProblemError> {
    if m < 1 || n < 1 {
        return Err(ProblemError::InvalidParameter(
            "item and element counts must be at least 1".into(),
        ));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ProblemError::InvalidParameter(format!(
            "density must be in (0, 1], got {density}"
        )));
    }
    if !(capacity_ratio > 0.0 && capacity_ratio < 1.0) {
        return Err(ProblemError::InvalidParameter(format!(
            "capacity ratio must be in (0, 1), got {capacity_ratio}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profits: Vec<f64> = (0..m).map(|_| rng.random_range(1..=100) as f64).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=100) as f64).collect();
    let mut incidence: Vec<Vec<u8>> = (0..m)
        .map(|_| (0..n).map(|_| u8::from(rng.random_bool(density))).collect())
        .collect();
    for row in &mut incidence {
        if row.iter().all(|&c| c == 0) {
            row[rng.random_range(0..n)] = 1;
        }
    }
    let capacity = capacity_ratio * weights.iter().sum::<f64>();
    SukpInstance::new(capacity, profits, weights, incidence)
}

/// Writes an instance in the plain-text exchange format.
///
/// Line 1 is `m n capacity`, line 2 the `m` profits, line 3 the `n` weights,
/// then `m` lines of `n` space-separated 0/1 incidence cells. UTF-8, LF.
pub fn save_sukp(inst: &SukpInstance, path: impl AsRef<Path>) -> Result<(), ProblemError> {
    let mut out = String::new();
    out.push_str(&format!("{} {} {}\n", inst.m, inst.n, inst.capacity));
    out.push_str(&join_numbers(&inst.profits));
    out.push('\n');
    out.push_str(&join_numbers(&inst.weights));
    out.push('\n');
    for row in &inst.incidence {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn join_numbers(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads an instance saved by [`save_sukp`]; `load(save(x)) == x`.
pub fn load_sukp(path: impl AsRef<Path>) -> Result<SukpInstance, ProblemError> {
    let text = fs::read_to_string(path)?;
    parse_sukp(&text)
}

fn parse_sukp(text: &str) -> Result<SukpInstance, ProblemError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ProblemError::Parse {
        line: 1,
        msg: "missing header line".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(ProblemError::Parse {
            line: 1,
            msg: format!("expected `m n capacity`, got {} fields", fields.len()),
        });
    }
    let m: usize = parse_field(fields[0], 1, "item count")?;
    let n: usize = parse_field(fields[1], 1, "element count")?;
    let capacity: f64 = parse_field(fields[2], 1, "capacity")?;

    let (_, profits_line) = lines.next().ok_or(ProblemError::Parse {
        line: 2,
        msg: "missing profits line".into(),
    })?;
    let profits = parse_numbers(profits_line, 2, m, "profit")?;
    let (_, weights_line) = lines.next().ok_or(ProblemError::Parse {
        line: 3,
        msg: "missing weights line".into(),
    })?;
    let weights = parse_numbers(weights_line, 3, n, "weight")?;

    let mut incidence = Vec::with_capacity(m);
    for i in 0..m {
        let (idx, row_line) = lines.next().ok_or(ProblemError::Parse {
            line: 4 + i,
            msg: format!("missing incidence row {i}"),
        })?;
        let row = parse_numbers(row_line, idx + 1, n, "incidence cell")?;
        let mut cells = Vec::with_capacity(n);
        for v in row {
            if v != 0.0 && v != 1.0 {
                return Err(ProblemError::Parse {
                    line: idx + 1,
                    msg: format!("incidence cell must be 0 or 1, got {v}"),
                });
            }
            cells.push(v as u8);
        }
        incidence.push(cells);
    }
    SukpInstance::new(capacity, profits, weights, incidence)
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    line: usize,
    what: &str,
) -> Result<T, ProblemError> {
    field.parse().map_err(|_| ProblemError::Parse {
        line,
        msg: format!("invalid {what}: {field:?}"),
    })
}

fn parse_numbers(
    line_text: &str,
    line: usize,
    expected: usize,
    what: &str,
) -> Result<Vec<f64>, ProblemError> {
    let values = line_text
        .split_whitespace()
        .map(|f| parse_field::<f64>(f, line, what))
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != expected {
        return Err(ProblemError::Parse {
            line,
            msg: format!("expected {expected} values, got {}", values.len()),
        });
    }
    Ok(values)
}
