//! Subcommand implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use beescape_core::abc::{run as run_colony, RunConfig, RunResult};
use beescape_core::analysis::{evaluate, matrix_to_csv, AnalysisReport, AnalyzeOptions};
use beescape_core::dataset::{export_csv, import_csv, success_table, CaseRecord};
use beescape_core::problems::{generate_sukp, load_sukp, save_sukp, Problem, ProblemKind};

use crate::config::{resolve, ExperimentSpec};
use crate::{AnalyzeArgs, CliError, GenSukpArgs, ReportArgs, RunArgs};

pub fn run(args: RunArgs) -> Result<(), CliError> {
    let spec = resolve(&args)?;
    let problem = load_problem(&spec)?;

    fs::create_dir_all(&spec.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", spec.out.display())))?;
    // Probe writability before spending compute.
    let cases_path = spec.out.join("cases.csv");
    fs::File::create(&cases_path)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", cases_path.display())))?;

    let started = Instant::now();
    let mut outcomes: Vec<Result<(Vec<CaseRecord>, RunResult), CliError>> = (0..spec.runs)
        .into_par_iter()
        .map(|run_id| {
            let mut config = RunConfig::new(problem.clone());
            config.colony_size = spec.colony;
            config.max_iter = spec.iters;
            config.limit = spec.limit;
            config.seed = spec.seed + run_id as u64;
            config.run_id = run_id;
            config.record_failures = spec.record_failures;
            config.eap_variant = spec.eap_variant;
            let mut cases = Vec::new();
            let result = run_colony(&config, &mut cases)?;
            Ok((cases, result))
        })
        .collect();

    let mut records = Vec::new();
    let mut summaries = Vec::with_capacity(spec.runs as usize);
    for outcome in outcomes.drain(..) {
        let (cases, result) = outcome?;
        records.extend(cases);
        summaries.push(result);
    }

    export_csv(&records, &cases_path, spec.record_failures)?;
    let table = success_table(&records);
    fs::write(spec.out.join("success_table.csv"), table.to_csv())?;

    let mut log = String::new();
    log.push_str("# resolved experiment spec\n");
    log.push_str(&spec.render());
    log.push_str("\n# per-run results\n");
    writeln!(
        log,
        "{:<6} {:<10} {:>12} {:>12} {:>12} {:>8}",
        "run", "seed", "initial", "final", "replacements", "cases"
    )
    .unwrap();
    for (run_id, result) in summaries.iter().enumerate() {
        let cases = records
            .iter()
            .filter(|r| r.run_id == run_id as u32 && r.success)
            .count();
        writeln!(
            log,
            "{:<6} {:<10} {:>12} {:>12} {:>12} {:>8}",
            run_id,
            spec.seed + run_id as u64,
            result.initial_best,
            result.gbest_fitness,
            result.replacements,
            cases
        )
        .unwrap();
    }
    let successes: u64 = records.iter().filter(|r| r.success).count() as u64;
    writeln!(
        log,
        "\n# totals\nrecords={}\nsuccess_cases={successes}",
        records.len()
    )
    .unwrap();
    log.push_str("\n# success table\n");
    log.push_str(&table.render_text());
    writeln!(log, "\nelapsed_ms={}", started.elapsed().as_millis()).unwrap();
    fs::write(spec.out.join("run.log"), log)?;

    println!(
        "{} run(s) on {}: {} cases -> {}",
        spec.runs,
        spec.problem,
        successes,
        spec.out.display()
    );
    Ok(())
}

fn load_problem(spec: &ExperimentSpec) -> Result<Problem, CliError> {
    match spec.problem {
        ProblemKind::OneMax => Ok(Problem::one_max(spec.dims)),
        ProblemKind::Sukp => {
            let path = spec.instance.as_ref().expect("validated by resolve");
            Ok(Problem::Sukp(load_sukp(path)?))
        }
    }
}

pub fn gen_sukp(args: GenSukpArgs) -> Result<(), CliError> {
    let instance = generate_sukp(
        args.items,
        args.elements,
        args.density,
        args.ratio,
        args.seed,
    )?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    save_sukp(&instance, &args.out)?;
    println!(
        "wrote {} items x {} elements (capacity {}) -> {}",
        instance.items(),
        instance.elements(),
        instance.capacity(),
        args.out.display()
    );
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let records = import_csv(&args.dataset)?;
    let opts = AnalyzeOptions {
        seed: args.seed,
        test_fraction: args.test_fraction,
        forest_trees: args.trees,
        parallel: !args.serial,
        ..AnalyzeOptions::default()
    };
    let report = evaluate(&records, &opts)?;
    write_report(&report, &records, &args.out)?;
    println!(
        "analysed {} ({} phases) -> {}",
        args.dataset.display(),
        report.phases.len(),
        args.out.display()
    );
    Ok(())
}

fn write_report(
    report: &AnalysisReport,
    records: &[CaseRecord],
    out: &Path,
) -> Result<(), CliError> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out.display())))?;
    fs::write(out.join("accuracy.csv"), report.accuracy_csv())?;
    fs::write(out.join("report.txt"), report.render_text())?;
    fs::write(
        out.join("importance_long.csv"),
        report.importance_long_csv(),
    )?;
    for phase in &report.phases {
        let k = phase.phase;
        fs::write(
            out.join(format!("pearson_phase{k}.csv")),
            matrix_to_csv(&report.feature_names, &phase.pearson),
        )?;
        fs::write(out.join(format!("chi2_phase{k}.csv")), phase.chi2.to_csv())?;
        fs::write(
            out.join(format!("importance_forest_phase{k}.csv")),
            phase.forest_importance.to_csv(),
        )?;
        fs::write(
            out.join(format!("importance_margin_phase{k}.csv")),
            phase.margin_importance.to_csv(),
        )?;
    }
    // The success table is re-derived here so an analysis directory is
    // self-contained.
    fs::write(
        out.join("success_table.csv"),
        success_table(records).to_csv(),
    )?;
    Ok(())
}

pub fn report(args: ReportArgs) -> Result<(), CliError> {
    let records = import_csv(&args.dataset)?;
    let successes = records.iter().filter(|r| r.success).count();
    let table = success_table(&records);
    println!("dataset: {}", args.dataset.display());
    println!("records: {} ({successes} successes)", records.len());
    let runs: std::collections::BTreeSet<u32> = records.iter().map(|r| r.run_id).collect();
    println!("runs: {}", runs.len());
    for phase in 1..=3u8 {
        let count = records
            .iter()
            .filter(|r| r.phase == phase && r.success)
            .count();
        println!("phase {phase} cases: {count}");
    }
    println!();
    print!("{}", table.render_text());
    // Sanity line so mangled datasets are visible at a glance.
    let finite = records.iter().all(|r| r.features.is_finite());
    println!("\nall feature vectors finite: {finite}");
    Ok(())
}
