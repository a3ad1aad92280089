//! Binary artificial bee colony driver.
//!
//! Each iteration runs an employed phase (one candidate per food source), an
//! onlooker phase (N candidates on fitness-proportionally selected sources),
//! and a scout phase (sources whose trial counter exceeds the limit are
//! reinitialised). Operators are drawn uniformly at random from the pool, and
//! every move that strictly improves its parent is reported to the
//! [`Recorder`] as a labelled case.
//!
//! Population features are computed once per iteration from the
//! employed-phase snapshot and shared by that iteration's onlooker cases;
//! individual features are computed per move. Runs are fully deterministic
//! given the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{phase_of, CaseRecord};
use crate::features::{
    individual_features, population_features, EapVariant, FeatureError, FeatureVector,
    PopulationFeatures, PopulationSnapshot,
};
use crate::operators::{apply_operator, OperatorContext, OperatorId, OPERATOR_COUNT};
use crate::problems::{BitString, Fitness, Problem};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid run config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Configuration of a single colony run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Problem,
    /// Number of food sources N.
    pub colony_size: usize,
    pub max_iter: usize,
    /// Scout threshold: a source is reinitialised once its trial counter
    /// exceeds this.
    pub limit: u32,
    pub seed: u64,
    /// Identifies this run in exported records.
    pub run_id: u32,
    /// Operators available to the colony; drawn uniformly.
    pub pool: Vec<OperatorId>,
    /// Also report non-improving moves (flagged unsuccessful).
    pub record_failures: bool,
    pub eap_variant: EapVariant,
}

impl RunConfig {
    /// Defaults: N = 20, limit = 100, the full operator pool, and the
    /// problem's conventional iteration budget (150 for One-Max, 500 for
    /// SUKP).
    pub fn new(problem: Problem) -> Self {
        let max_iter = match problem {
            Problem::OneMax { .. } => 150,
            Problem::Sukp(_) => 500,
        };
        RunConfig {
            problem,
            colony_size: 20,
            max_iter,
            limit: 100,
            seed: 0,
            run_id: 0,
            pool: OperatorId::ALL.to_vec(),
            record_failures: false,
            eap_variant: EapVariant::default(),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.colony_size < 2 {
            return Err(EngineError::InvalidConfig(format!(
                "colony size must be at least 2, got {}",
                self.colony_size
            )));
        }
        if self.max_iter < 3 {
            return Err(EngineError::InvalidConfig(format!(
                "max_iter must be at least 3 so every phase is non-empty, got {}",
                self.max_iter
            )));
        }
        if self.limit < 1 {
            return Err(EngineError::InvalidConfig(
                "limit must be at least 1".into(),
            ));
        }
        if self.pool.is_empty() {
            return Err(EngineError::InvalidConfig("operator pool is empty".into()));
        }
        if self.problem.dims() == 0 {
            return Err(EngineError::InvalidConfig("problem dimension is 0".into()));
        }
        Ok(())
    }
}

/// Live colony state, readable from recorder hooks.
#[derive(Clone, Debug)]
pub struct Colony {
    pub foods: Vec<BitString>,
    pub fitnesses: Vec<Fitness>,
    pub trials: Vec<u32>,
    pub gbest: BitString,
    pub gbest_fitness: Fitness,
    pub iteration: usize,
}

/// Outcome of a run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub gbest: BitString,
    pub gbest_fitness: Fitness,
    /// Global best fitness right after initialisation.
    pub initial_best: Fitness,
    /// Global best fitness after each iteration; monotone non-decreasing.
    pub trace: Vec<f64>,
    /// Successful moves per operator id.
    pub success_counts: [u64; OPERATOR_COUNT],
    /// Candidate generations per operator id.
    pub usage_counts: [u64; OPERATOR_COUNT],
    /// Total parent replacements (equals recorded success cases).
    pub replacements: u64,
}

/// Receives engine events. `on_case` fires once per recorded move;
/// `on_candidate` fires for every evaluated solution (including initial and
/// scout solutions); `on_iteration_end` fires after each scout phase.
pub trait Recorder {
    fn on_case(&mut self, case: CaseRecord);
    fn on_candidate(&mut self, _solution: &BitString, _fitness: Fitness) {}
    fn on_iteration_end(&mut self, _colony: &Colony) {}
}

/// Discards everything.
pub struct NullRecorder;

impl Recorder for NullRecorder {
    fn on_case(&mut self, _case: CaseRecord) {}
}

impl Recorder for Vec<CaseRecord> {
    fn on_case(&mut self, case: CaseRecord) {
        self.push(case);
    }
}

/// Fitness-proportional (roulette) source selection; uniform when the total
/// fitness is zero.
pub fn onlooker_select<R: Rng>(fitnesses: &[Fitness], rng: &mut R) -> usize {
    let total: f64 = fitnesses.iter().map(|f| f.0).sum();
    if total <= 0.0 {
        return rng.random_range(0..fitnesses.len());
    }
    let mut ticket = rng.random::<f64>() * total;
    for (i, f) in fitnesses.iter().enumerate() {
        ticket -= f.0;
        if ticket < 0.0 {
            return i;
        }
    }
    fitnesses.len() - 1
}

/// A candidate move waiting for its population features.
struct PendingCase {
    parent: BitString,
    child: BitString,
    parent_fitness: f64,
    child_fitness: f64,
    trial_before: u32,
    op: OperatorId,
    successes_before: u64,
    uses_before: u64,
    success: bool,
}

struct Engine<'a, R: Recorder> {
    config: &'a RunConfig,
    rng: ChaCha8Rng,
    colony: Colony,
    recorder: &'a mut R,
    success_counts: [u64; OPERATOR_COUNT],
    usage_counts: [u64; OPERATOR_COUNT],
    replacements: u64,
}

impl<'a, R: Recorder> Engine<'a, R> {
    fn evaluate(problem: &Problem, x: &BitString) -> Fitness {
        problem
            .evaluate(x)
            .expect("engine only evaluates repaired solutions")
    }

    fn new(config: &'a RunConfig, recorder: &'a mut R) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let n = config.colony_size;
        let mut foods = Vec::with_capacity(n);
        let mut fitnesses = Vec::with_capacity(n);
        for _ in 0..n {
            let x = config.problem.random_solution(&mut rng);
            let f = Self::evaluate(&config.problem, &x);
            recorder.on_candidate(&x, f);
            foods.push(x);
            fitnesses.push(f);
        }
        let best = argmax(&fitnesses);
        let colony = Colony {
            gbest: foods[best].clone(),
            gbest_fitness: fitnesses[best],
            foods,
            fitnesses,
            trials: vec![0; n],
            iteration: 0,
        };
        Engine {
            config,
            rng,
            colony,
            recorder,
            success_counts: [0; OPERATOR_COUNT],
            usage_counts: [0; OPERATOR_COUNT],
            replacements: 0,
        }
    }

    /// Generates one candidate for `source`, applies greedy replacement, and
    /// returns the move for case recording.
    fn step_source(&mut self, source: usize) -> PendingCase {
        let n = self.config.colony_size;
        let op = self.config.pool[self.rng.random_range(0..self.config.pool.len())];
        let mut neighbor = self.rng.random_range(0..n - 1);
        if neighbor >= source {
            neighbor += 1;
        }
        let raw = apply_operator(
            op,
            &OperatorContext {
                parent: &self.colony.foods[source],
                neighbor: &self.colony.foods[neighbor],
                gbest: &self.colony.gbest,
            },
            &mut self.rng,
        );
        let child = self.config.problem.repair(raw);
        let child_fitness = Self::evaluate(&self.config.problem, &child);
        self.recorder.on_candidate(&child, child_fitness);

        let parent_fitness = self.colony.fitnesses[source];
        let trial_before = self.colony.trials[source];
        let success = child_fitness > parent_fitness;
        let pending = PendingCase {
            parent: self.colony.foods[source].clone(),
            child: child.clone(),
            parent_fitness: parent_fitness.0,
            child_fitness: child_fitness.0,
            trial_before,
            op,
            successes_before: self.success_counts[op.index()],
            uses_before: self.usage_counts[op.index()],
            success,
        };

        if success {
            self.colony.foods[source] = child;
            self.colony.fitnesses[source] = child_fitness;
            self.colony.trials[source] = 0;
            self.replacements += 1;
            if child_fitness > self.colony.gbest_fitness {
                self.colony.gbest = self.colony.foods[source].clone();
                self.colony.gbest_fitness = child_fitness;
            }
            self.success_counts[op.index()] += 1;
        } else {
            self.colony.trials[source] += 1;
        }
        self.usage_counts[op.index()] += 1;
        pending
    }

    fn record(
        &mut self,
        pending: &PendingCase,
        snapshot: &PopulationSnapshot,
        pop: &PopulationFeatures,
        phase: u8,
    ) {
        let ind = individual_features(
            &pending.parent,
            &pending.child,
            pending.parent_fitness,
            pending.child_fitness,
            snapshot,
            pending.trial_before,
            pending.successes_before,
            pending.uses_before,
        );
        self.recorder.on_case(CaseRecord {
            problem: self.config.problem.kind(),
            run_id: self.config.run_id,
            iteration: self.colony.iteration as u32,
            phase,
            op: pending.op.get(),
            features: FeatureVector::from_parts(pop, &ind),
            parent_fitness: pending.parent_fitness,
            child_fitness: pending.child_fitness,
            success: pending.success,
        });
    }

    fn run(mut self) -> Result<RunResult, EngineError> {
        let n = self.config.colony_size;
        let initial_best = self.colony.gbest_fitness;
        let mut trace = Vec::with_capacity(self.config.max_iter);

        for iteration in 0..self.config.max_iter {
            self.colony.iteration = iteration;
            let phase = phase_of(iteration, self.config.max_iter)
                .expect("iteration is within the validated budget");

            // Frozen at the top of the iteration: parents, their fitnesses,
            // and the pre-iteration global best (so children can still beat
            // it), feeding both the snapshot and idg/idb/idw.
            let parents = self.colony.foods.clone();
            let parent_fitness: Vec<f64> = self.colony.fitnesses.iter().map(|f| f.0).collect();
            let trials = self.colony.trials.clone();
            let gbest = self.colony.gbest.clone();
            let gbest_fitness = self.colony.gbest_fitness.0;
            let pbest = parents[argmax(&self.colony.fitnesses)].clone();
            let pworst = parents[argmin(&self.colony.fitnesses)].clone();

            // Employed phase: one candidate per source; records are deferred
            // until the full child set (the snapshot) exists.
            let mut children = Vec::with_capacity(n);
            let mut child_fitness = Vec::with_capacity(n);
            let mut pending = Vec::new();
            for source in 0..n {
                let outcome = self.step_source(source);
                children.push(outcome.child.clone());
                child_fitness.push(outcome.child_fitness);
                if outcome.success || self.config.record_failures {
                    pending.push(outcome);
                }
            }

            let snapshot = PopulationSnapshot {
                parents,
                children,
                parent_fitness,
                child_fitness,
                gbest,
                gbest_fitness,
                pbest,
                pworst,
                trials,
                trial_max: self.config.limit,
                dims: self.config.problem.dims(),
            };
            let mut pop: Option<PopulationFeatures> = None;
            for case in std::mem::take(&mut pending) {
                if pop.is_none() {
                    pop = Some(population_features(&snapshot, self.config.eap_variant)?);
                }
                self.record(&case, &snapshot, pop.as_ref().unwrap(), phase);
            }

            // Onlooker phase: N more candidates on roulette-selected sources,
            // sharing this iteration's population features.
            for _ in 0..n {
                let source = onlooker_select(&self.colony.fitnesses, &mut self.rng);
                let outcome = self.step_source(source);
                if outcome.success || self.config.record_failures {
                    if pop.is_none() {
                        pop = Some(population_features(&snapshot, self.config.eap_variant)?);
                    }
                    self.record(&outcome, &snapshot, pop.as_ref().unwrap(), phase);
                }
            }

            // Scout phase: exhausted sources restart from fresh random
            // solutions; the global best is persistent memory and survives.
            for source in 0..n {
                if self.colony.trials[source] > self.config.limit {
                    let x = self.config.problem.random_solution(&mut self.rng);
                    let f = Self::evaluate(&self.config.problem, &x);
                    self.recorder.on_candidate(&x, f);
                    self.colony.foods[source] = x;
                    self.colony.fitnesses[source] = f;
                    self.colony.trials[source] = 0;
                    if f > self.colony.gbest_fitness {
                        self.colony.gbest = self.colony.foods[source].clone();
                        self.colony.gbest_fitness = f;
                    }
                }
            }

            trace.push(self.colony.gbest_fitness.0);
            self.recorder.on_iteration_end(&self.colony);
        }

        Ok(RunResult {
            gbest: self.colony.gbest,
            gbest_fitness: self.colony.gbest_fitness,
            initial_best,
            trace,
            success_counts: self.success_counts,
            usage_counts: self.usage_counts,
            replacements: self.replacements,
        })
    }
}

/// Runs the colony to completion, reporting cases to `recorder`.
pub fn run<R: Recorder>(config: &RunConfig, recorder: &mut R) -> Result<RunResult, EngineError> {
    config.validate()?;
    Engine::new(config, recorder).run()
}

fn argmax(fitnesses: &[Fitness]) -> usize {
    let mut best = 0;
    for i in 1..fitnesses.len() {
        if fitnesses[i] > fitnesses[best] {
            best = i;
        }
    }
    best
}

fn argmin(fitnesses: &[Fitness]) -> usize {
    let mut worst = 0;
    for i in 1..fitnesses.len() {
        if fitnesses[i] < fitnesses[worst] {
            worst = i;
        }
    }
    worst
}
