//! Binary artificial bee colony experiments with landscape-feature case
//! recording and per-phase predictivity analysis.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`problems`] defines the two benchmark problems (One-Max and the
//!    Set-Union Knapsack Problem), instance generation and IO, and the
//!    feasibility repair used for SUKP.
//! 2. [`operators`] is the pool of four binary neighbourhood operators the
//!    colony draws from (ids 0..=3, which double as the class labels of the
//!    exported datasets).
//! 3. [`abc`] runs the bee colony (employed / onlooker / scout phases) with
//!    uniform random operator selection and reports every successful move to
//!    a [`abc::Recorder`].
//! 4. [`features`] computes the 19-value landscape feature vector attached
//!    to each recorded move: 11 population-based features from a
//!    per-iteration snapshot and 8 individual/operator features per move.
//! 5. [`dataset`] turns recorder streams into phase-labelled CSV datasets
//!    and operator success tables.
//! 6. [`analysis`] ranks feature predictivity per search phase: Pearson
//!    correlation, chi-square ranking, and three classifiers (random forest,
//!    linear max-margin, multilayer perceptron) with accuracy and feature
//!    importance reports.

pub mod abc;
pub mod analysis;
pub mod dataset;
pub mod features;
pub mod operators;
pub mod problems;
pub mod seeds;

pub use abc::{run, Colony, NullRecorder, Recorder, RunConfig, RunResult};
pub use analysis::{evaluate, AnalysisReport, AnalyzeOptions, DataMatrix, ImportanceRanking};
pub use dataset::{phase_of, success_table, CaseRecord, SuccessTable};
pub use features::{FeatureVector, PopulationSnapshot, FEATURE_COUNT, FEATURE_NAMES};
pub use operators::{OperatorContext, OperatorId};
pub use problems::{BitString, Fitness, Problem, ProblemKind, SukpInstance};
