//! Experiment specification: defaults, config-file loading, and flag
//! overrides.

use std::path::{Path, PathBuf};

use beescape_core::features::EapVariant;
use beescape_core::problems::ProblemKind;

use crate::{CliError, RunArgs};

/// Fully resolved `run` parameters.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    pub dims: usize,
    pub instance: Option<PathBuf>,
    pub iters: usize,
    pub runs: u32,
    pub colony: usize,
    pub limit: u32,
    pub seed: u64,
    pub out: PathBuf,
    pub record_failures: bool,
    pub eap_variant: EapVariant,
}

/// Partially specified parameters, merged defaults <- config <- flags.
#[derive(Clone, Debug, Default)]
struct PartialSpec {
    problem: Option<ProblemKind>,
    dims: Option<usize>,
    instance: Option<PathBuf>,
    iters: Option<usize>,
    runs: Option<u32>,
    colony: Option<usize>,
    limit: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    record_failures: Option<bool>,
    eap_variant: Option<EapVariant>,
}

impl PartialSpec {
    fn overlay(self, other: PartialSpec) -> PartialSpec {
        PartialSpec {
            problem: other.problem.or(self.problem),
            dims: other.dims.or(self.dims),
            instance: other.instance.or(self.instance),
            iters: other.iters.or(self.iters),
            runs: other.runs.or(self.runs),
            colony: other.colony.or(self.colony),
            limit: other.limit.or(self.limit),
            seed: other.seed.or(self.seed),
            out: other.out.or(self.out),
            record_failures: other.record_failures.or(self.record_failures),
            eap_variant: other.eap_variant.or(self.eap_variant),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Parses a `key=value` config file. Blank lines and `#` comments are
/// skipped; unknown keys are rejected.
fn parse_config(path: &Path) -> Result<PartialSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read config {}: {e}", path.display())))?;
    let mut spec = PartialSpec::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            validation(format!(
                "{}:{}: expected key=value, got {raw:?}",
                path.display(),
                idx + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            validation(format!(
                "{}:{}: invalid {what}: {value:?}",
                path.display(),
                idx + 1
            ))
        };
        match key {
            "problem" => spec.problem = Some(value.parse().map_err(|_| bad("problem"))?),
            "dims" => spec.dims = Some(value.parse().map_err(|_| bad("dims"))?),
            "instance" => spec.instance = Some(PathBuf::from(value)),
            "iters" => spec.iters = Some(value.parse().map_err(|_| bad("iters"))?),
            "runs" => spec.runs = Some(value.parse().map_err(|_| bad("runs"))?),
            "colony" => spec.colony = Some(value.parse().map_err(|_| bad("colony"))?),
            "limit" => spec.limit = Some(value.parse().map_err(|_| bad("limit"))?),
            "seed" => spec.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "out" => spec.out = Some(PathBuf::from(value)),
            "record_failures" => {
                spec.record_failures = Some(value.parse().map_err(|_| bad("record_failures"))?)
            }
            "eap_variant" => {
                spec.eap_variant = Some(value.parse().map_err(|_| bad("eap_variant"))?)
            }
            other => {
                return Err(validation(format!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(spec)
}

/// Resolves the final spec from defaults, the optional config file, and the
/// command-line flags (highest precedence).
pub fn resolve(args: &RunArgs) -> Result<ExperimentSpec, CliError> {
    let mut merged = PartialSpec::default();
    if let Some(path) = &args.config {
        merged = merged.overlay(parse_config(path)?);
    }
    let flags = PartialSpec {
        problem: args
            .problem
            .as_deref()
            .map(|p| p.parse())
            .transpose()
            .map_err(|e: beescape_core::problems::ProblemError| validation(e.to_string()))?,
        dims: args.dims,
        instance: args.instance.clone(),
        iters: args.iters,
        runs: args.runs,
        colony: args.colony,
        limit: args.limit,
        seed: args.seed,
        out: args.out.clone(),
        record_failures: args.record_failures.then_some(true),
        eap_variant: args
            .eap_variant
            .as_deref()
            .map(|v| v.parse())
            .transpose()
            .map_err(|e: String| validation(e))?,
    };
    merged = merged.overlay(flags);

    let problem = merged.problem.unwrap_or(ProblemKind::OneMax);
    let iters = merged.iters.unwrap_or(match problem {
        ProblemKind::OneMax => 150,
        ProblemKind::Sukp => 500,
    });
    let spec = ExperimentSpec {
        problem,
        dims: merged.dims.unwrap_or(1000),
        instance: merged.instance,
        iters,
        runs: merged.runs.unwrap_or(10),
        colony: merged.colony.unwrap_or(20),
        limit: merged.limit.unwrap_or(100),
        seed: merged.seed.unwrap_or(42),
        out: merged
            .out
            .ok_or_else(|| validation("missing output directory: pass --out <dir>"))?,
        record_failures: merged.record_failures.unwrap_or(false),
        eap_variant: merged.eap_variant.unwrap_or_default(),
    };

    if spec.runs == 0 {
        return Err(validation("--runs must be at least 1"));
    }
    if spec.problem == ProblemKind::Sukp && spec.instance.is_none() {
        return Err(validation(
            "sukp needs an instance file: pass --instance (generate one with gen-sukp)",
        ));
    }
    if spec.problem == ProblemKind::OneMax && spec.dims == 0 {
        return Err(validation("--dims must be at least 1"));
    }
    Ok(spec)
}

impl ExperimentSpec {
    /// Echo used by run.log; one `key=value` per line, loadable as a config.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("problem={}\n", self.problem));
        match self.problem {
            ProblemKind::OneMax => out.push_str(&format!("dims={}\n", self.dims)),
            ProblemKind::Sukp => {
                if let Some(path) = &self.instance {
                    out.push_str(&format!("instance={}\n", path.display()));
                }
            }
        }
        out.push_str(&format!("iters={}\n", self.iters));
        out.push_str(&format!("runs={}\n", self.runs));
        out.push_str(&format!("colony={}\n", self.colony));
        out.push_str(&format!("limit={}\n", self.limit));
        out.push_str(&format!("seed={}\n", self.seed));
        out.push_str(&format!("out={}\n", self.out.display()));
        out.push_str(&format!("record_failures={}\n", self.record_failures));
        let variant = match self.eap_variant {
            EapVariant::Literal => "literal",
            EapVariant::SigmaDivide => "sigma-divide",
        };
        out.push_str(&format!("eap_variant={variant}\n"));
        out
    }
}
