//! Benchmark problems: One-Max and the Set-Union Knapsack Problem (SUKP),
//! with instance IO, instance generation, fitness evaluation, and feasibility
//! repair.
//!
//! Both problems are maximised over fixed-length bitstrings, and both yield
//! non-negative fitness values (the fitness-gap features divide by child
//! fitness, so negative objectives are deliberately unrepresentable here:
//! infeasible SUKP solutions are repaired, never penalised).

mod bitstring;
mod sukp;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

pub use bitstring::BitString;
pub use sukp::{
    generate_sukp, load_sukp, save_sukp, sukp_fitness, sukp_repair, sukp_union_weight, SukpInstance,
};

/// Errors from problem construction, evaluation, and instance IO.
#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("dimension mismatch: solution has {got} bits, instance expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("infeasible solution: union weight {weight} exceeds capacity {capacity}")]
    Infeasible { weight: f64, capacity: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Objective value; maximised, finite, and non-negative for both problems.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug, Default)]
pub struct Fitness(pub f64);

impl Fitness {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which benchmark a solution or dataset belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProblemKind {
    OneMax,
    Sukp,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::OneMax => write!(f, "onemax"),
            ProblemKind::Sukp => write!(f, "sukp"),
        }
    }
}

impl FromStr for ProblemKind {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "onemax" => Ok(ProblemKind::OneMax),
            "sukp" => Ok(ProblemKind::Sukp),
            other => Err(ProblemError::InvalidParameter(format!(
                "unknown problem kind {other:?} (expected onemax or sukp)"
            ))),
        }
    }
}

/// A benchmark instance the colony can search.
#[derive(Clone, Debug)]
pub enum Problem {
    OneMax { dims: usize },
    Sukp(SukpInstance),
}

impl Problem {
    pub fn one_max(dims: usize) -> Self {
        Problem::OneMax { dims }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::OneMax { .. } => ProblemKind::OneMax,
            Problem::Sukp(_) => ProblemKind::Sukp,
        }
    }

    /// Genotype length D.
    pub fn dims(&self) -> usize {
        match self {
            Problem::OneMax { dims } => *dims,
            Problem::Sukp(inst) => inst.items(),
        }
    }

    /// Evaluates a solution. SUKP solutions must be feasible; repair first.
    pub fn evaluate(&self, x: &BitString) -> Result<Fitness, ProblemError> {
        match self {
            Problem::OneMax { dims } => {
                if x.len() != *dims {
                    return Err(ProblemError::DimensionMismatch {
                        expected: *dims,
                        got: x.len(),
                    });
                }
                Ok(onemax_fitness(x))
            }
            Problem::Sukp(inst) => sukp_fitness(x, inst),
        }
    }

    /// Maps a candidate into the feasible region. Identity for One-Max.
    pub fn repair(&self, x: BitString) -> BitString {
        match self {
            Problem::OneMax { .. } => x,
            Problem::Sukp(inst) => sukp_repair(&x, inst),
        }
    }

    /// Random feasible solution (uniform bits, then repair).
    pub fn random_solution<R: Rng>(&self, rng: &mut R) -> BitString {
        self.repair(BitString::random(self.dims(), rng))
    }
}

/// Number of 1-bits in `x`.
pub fn onemax_fitness(x: &BitString) -> Fitness {
    Fitness(x.count_ones() as f64)
}
