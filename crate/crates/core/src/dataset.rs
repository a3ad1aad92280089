//! Phase-labelled case datasets: CSV export/import and operator success
//! tables.
//!
//! The CSV schema is fixed: metadata columns, the 19 features in canonical
//! order, the parent and child fitness, and the operator label last. Floats
//! are written with the shortest representation that parses back to the same
//! value, so export followed by import is the identity.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::features::{FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
use crate::problems::ProblemKind;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("iteration {iteration} is outside the budget of {max_iter}")]
    IterationOutOfRange { iteration: usize, max_iter: usize },
    #[error("iteration budget must be at least 3, got {0}")]
    BudgetTooSmall(usize),
    #[error("refusing to export an empty record set")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("schema mismatch at column {position}: expected {expected:?}, found {found:?}")]
    Schema {
        position: usize,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One recorded move: metadata, the 19 features, and the operator label.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseRecord {
    pub problem: ProblemKind,
    pub run_id: u32,
    pub iteration: u32,
    /// Search phase in {1, 2, 3}.
    pub phase: u8,
    /// Operator label in {0, 1, 2, 3}.
    pub op: u8,
    pub features: FeatureVector,
    pub parent_fitness: f64,
    pub child_fitness: f64,
    /// False only when failure recording is enabled.
    pub success: bool,
}

/// Maps an iteration index onto one of three equal phases of the budget:
/// `phase = min(3, floor(3 * iteration / max_iter) + 1)`.
pub fn phase_of(iteration: usize, max_iter: usize) -> Result<u8, DatasetError> {
    if max_iter < 3 {
        return Err(DatasetError::BudgetTooSmall(max_iter));
    }
    if iteration >= max_iter {
        return Err(DatasetError::IterationOutOfRange {
            iteration,
            max_iter,
        });
    }
    Ok(((3 * iteration / max_iter) + 1).min(3) as u8)
}

fn header(include_success: bool) -> String {
    let mut columns: Vec<&str> = vec!["problem", "run_id", "iteration", "phase"];
    columns.extend(FEATURE_NAMES);
    columns.extend(["parent_fitness", "child_fitness", "op"]);
    if include_success {
        columns.push("success");
    }
    columns.join(",")
}

/// Serialises records in deterministic order (the caller's order, which the
/// engine emits sorted by run, iteration, and emission index).
pub fn render_csv(records: &[CaseRecord], include_success: bool) -> Result<String, DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut out = String::new();
    out.push_str(&header(include_success));
    out.push('\n');
    for r in records {
        write!(
            out,
            "{},{},{},{}",
            r.problem, r.run_id, r.iteration, r.phase
        )
        .unwrap();
        for v in r.features.values() {
            write!(out, ",{v}").unwrap();
        }
        write!(out, ",{},{},{}", r.parent_fitness, r.child_fitness, r.op).unwrap();
        if include_success {
            write!(out, ",{}", u8::from(r.success)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes `render_csv` output to a file.
pub fn export_csv(
    records: &[CaseRecord],
    path: impl AsRef<Path>,
    include_success: bool,
) -> Result<(), DatasetError> {
    let text = render_csv(records, include_success)?;
    let mut file = fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Parses a dataset produced by [`export_csv`]. The header is validated
/// column by column; the first deviation is reported.
pub fn parse_csv(text: &str) -> Result<Vec<CaseRecord>, DatasetError> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or(DatasetError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let got: Vec<&str> = head.split(',').collect();
    let plain = header(false);
    let expected_plain: Vec<&str> = plain.split(',').collect();
    for (i, expected) in expected_plain.iter().enumerate() {
        match got.get(i) {
            Some(found) if found == expected => {}
            found => {
                return Err(DatasetError::Schema {
                    position: i + 1,
                    expected: expected.to_string(),
                    found: found.unwrap_or(&"<missing>").to_string(),
                })
            }
        }
    }
    let include_success = match got.len() {
        n if n == expected_plain.len() => false,
        n if n == expected_plain.len() + 1 && got[n - 1] == "success" => true,
        n => {
            return Err(DatasetError::Schema {
                position: expected_plain.len() + 1,
                expected: "success or end of header".into(),
                found: got
                    .get(expected_plain.len())
                    .map_or_else(|| format!("{n} columns"), |s| s.to_string()),
            })
        }
    };
    let width = got.len();

    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(DatasetError::Parse {
                line: line_no,
                msg: format!("expected {width} fields, got {}", fields.len()),
            });
        }
        let problem: ProblemKind = fields[0].parse().map_err(|_| DatasetError::Parse {
            line: line_no,
            msg: format!("unknown problem tag {:?}", fields[0]),
        })?;
        let run_id = parse_number::<u32>(fields[1], line_no, "run_id")?;
        let iteration = parse_number::<u32>(fields[2], line_no, "iteration")?;
        let phase = parse_number::<u8>(fields[3], line_no, "phase")?;
        let mut values = [0.0; FEATURE_COUNT];
        for (k, value) in values.iter_mut().enumerate() {
            *value = parse_number::<f64>(fields[4 + k], line_no, FEATURE_NAMES[k])?;
        }
        let parent_fitness =
            parse_number::<f64>(fields[4 + FEATURE_COUNT], line_no, "parent_fitness")?;
        let child_fitness =
            parse_number::<f64>(fields[5 + FEATURE_COUNT], line_no, "child_fitness")?;
        let op = parse_number::<u8>(fields[6 + FEATURE_COUNT], line_no, "op")?;
        let success = if include_success {
            parse_number::<u8>(fields[7 + FEATURE_COUNT], line_no, "success")? != 0
        } else {
            true
        };
        records.push(CaseRecord {
            problem,
            run_id,
            iteration,
            phase,
            op,
            features: FeatureVector::from_values(values),
            parent_fitness,
            child_fitness,
            success,
        });
    }
    Ok(records)
}

/// Reads a dataset file written by [`export_csv`].
pub fn import_csv(path: impl AsRef<Path>) -> Result<Vec<CaseRecord>, DatasetError> {
    parse_csv(&fs::read_to_string(path)?)
}

fn parse_number<T: std::str::FromStr>(
    field: &str,
    line: usize,
    what: &str,
) -> Result<T, DatasetError> {
    field.parse().map_err(|_| DatasetError::Parse {
        line,
        msg: format!("invalid {what}: {field:?}"),
    })
}

/// Per-operator, per-phase success counts for one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessRow {
    pub problem: ProblemKind,
    pub operator: u8,
    pub phases: [u64; 3],
    pub mean: f64,
}

/// Success counts per problem, operator, and phase, with per-operator means
/// across the phases.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuccessTable {
    pub rows: Vec<SuccessRow>,
}

impl SuccessTable {
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.phases.iter().sum::<u64>()).sum()
    }

    /// CSV rendering: `problem,operator,phase1,phase2,phase3,mean`, means
    /// with two decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem,operator,phase1,phase2,phase3,mean\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.2}",
                r.problem, r.operator, r.phases[0], r.phases[1], r.phases[2], r.mean
            )
            .unwrap();
        }
        out
    }

    /// Fixed-width text rendering for logs and the report command.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<8} {:<8} {:>8} {:>8} {:>8} {:>10}",
            "problem", "operator", "phase 1", "phase 2", "phase 3", "mean"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<8} {:<8} {:>8} {:>8} {:>8} {:>10.2}",
                r.problem.to_string(),
                format!("OP {}", r.operator),
                r.phases[0],
                r.phases[1],
                r.phases[2],
                r.mean
            )
            .unwrap();
        }
        out
    }
}

/// Builds the success table over successful records, all four operator rows
/// per problem present in the data.
pub fn success_table(records: &[CaseRecord]) -> SuccessTable {
    let mut problems: Vec<ProblemKind> = Vec::new();
    for r in records {
        if r.success && !problems.contains(&r.problem) {
            problems.push(r.problem);
        }
    }
    problems.sort();
    let mut rows = Vec::new();
    for problem in problems {
        for op in 0..4u8 {
            let mut phases = [0u64; 3];
            for r in records {
                if r.success && r.problem == problem && r.op == op {
                    let idx = (r.phase as usize).saturating_sub(1).min(2);
                    phases[idx] += 1;
                }
            }
            let mean = phases.iter().sum::<u64>() as f64 / 3.0;
            rows.push(SuccessRow {
                problem,
                operator: op,
                phases,
                mean,
            });
        }
    }
    SuccessTable { rows }
}
