//! Landscape features computed from iteration snapshots.
//!
//! Eleven population-based features are computed once per iteration from the
//! employed-phase parent/child pairs; eight individual features are computed
//! per successful move. All distances are Hamming distances, and most
//! features are normalised by the dimension `D` or the colony size `N` so
//! they stay comparable across problem sizes.
//!
//! Degenerate denominators are guarded to zero (a zero reads as "no
//! information"), which keeps every exported vector finite.

use thiserror::Error;

use crate::problems::BitString;

/// Number of features in a [`FeatureVector`].
pub const FEATURE_COUNT: usize = 19;

/// Canonical feature order used by every export.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "psd", "pfd", "pnb", "pic", "pai", "pcv", "pcr", "eap", "evp", "atn", "pdd", "idg", "idp",
    "ifg", "ifp", "idb", "idw", "itn", "osr",
];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("bitstring length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("population features need at least 2 sources, got {0}")]
    TooFewSources(usize),
    #[error("snapshot arrays disagree: {0}")]
    InconsistentSnapshot(String),
}

/// Which reading of the evolutionary-ability feature `eap` to use.
///
/// The printed formula multiplies the improvement sum by the fitness
/// deviation; the source it was adapted from arguably divides instead. Both
/// are available, `Literal` is the default.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum EapVariant {
    /// `eap = sigma(F_p) * sum_{improving} |max(F_p) - f_c| / N`
    #[default]
    Literal,
    /// `eap = sum_{improving} |max(F_p) - f_c| / (N * sigma(F_p))`, 0 when
    /// the deviation is 0.
    SigmaDivide,
}

impl std::str::FromStr for EapVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(EapVariant::Literal),
            "sigma-divide" => Ok(EapVariant::SigmaDivide),
            other => Err(format!(
                "unknown eap variant {other:?} (expected literal or sigma-divide)"
            )),
        }
    }
}

/// One iteration of colony state, frozen for feature computation.
///
/// `parents` are the food sources at the start of the iteration, `children`
/// the employed-phase candidates generated from them (one per parent).
/// `gbest` is the global best *before* this iteration's children are
/// absorbed, so its fitness is at least `max(parent_fitness)`. `pbest` and
/// `pworst` are the best and worst parents of the iteration.
#[derive(Clone, Debug)]
pub struct PopulationSnapshot {
    pub parents: Vec<BitString>,
    pub children: Vec<BitString>,
    pub parent_fitness: Vec<f64>,
    pub child_fitness: Vec<f64>,
    pub gbest: BitString,
    pub gbest_fitness: f64,
    pub pbest: BitString,
    pub pworst: BitString,
    pub trials: Vec<u32>,
    pub trial_max: u32,
    pub dims: usize,
}

impl PopulationSnapshot {
    pub fn colony_size(&self) -> usize {
        self.parents.len()
    }

    fn validate(&self) -> Result<(), FeatureError> {
        let n = self.parents.len();
        if n < 2 {
            return Err(FeatureError::TooFewSources(n));
        }
        if self.children.len() != n
            || self.parent_fitness.len() != n
            || self.child_fitness.len() != n
            || self.trials.len() != n
        {
            return Err(FeatureError::InconsistentSnapshot(
                "array lengths differ from the parent count".into(),
            ));
        }
        for x in self.parents.iter().chain(&self.children) {
            if x.len() != self.dims {
                return Err(FeatureError::InconsistentSnapshot(format!(
                    "bitstring of length {} in a dimension-{} snapshot",
                    x.len(),
                    self.dims
                )));
            }
        }
        if self.trial_max == 0 {
            return Err(FeatureError::InconsistentSnapshot("trial_max is 0".into()));
        }
        Ok(())
    }
}

/// The 11 population-based features of one iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopulationFeatures {
    /// Mean pairwise parent distance, normalised by D.
    pub psd: f64,
    /// Mean pairwise absolute parent fitness difference.
    pub pfd: f64,
    /// Fraction of children strictly better than their parent.
    pub pnb: f64,
    /// Fraction of children strictly better than the global best.
    pub pic: f64,
    /// Mean relative improvement over the whole population.
    pub pai: f64,
    /// Relative gain of the best child over the best parent.
    pub pcv: f64,
    /// Mean movement towards the global best, normalised by D.
    pub pcr: f64,
    /// Evolutionary ability of the population.
    pub eap: f64,
    /// Evolvability: `eap * pic`.
    pub evp: f64,
    /// Mean trial counter divided by the scout limit.
    pub atn: f64,
    /// Largest pairwise distance among parents and children, normalised by D.
    pub pdd: f64,
    /// Mean trial counter before the limit normalisation.
    pub atn_raw: f64,
}

/// The 8 per-move features.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndividualFeatures {
    pub idg: f64,
    pub idp: f64,
    pub ifg: f64,
    pub ifp: f64,
    pub idb: f64,
    pub idw: f64,
    pub itn: f64,
    pub osr: f64,
}

/// The full 19-value case vector in canonical order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureVector {
    pub psd: f64,
    pub pfd: f64,
    pub pnb: f64,
    pub pic: f64,
    pub pai: f64,
    pub pcv: f64,
    pub pcr: f64,
    pub eap: f64,
    pub evp: f64,
    pub atn: f64,
    pub pdd: f64,
    pub idg: f64,
    pub idp: f64,
    pub ifg: f64,
    pub ifp: f64,
    pub idb: f64,
    pub idw: f64,
    pub itn: f64,
    pub osr: f64,
}

impl FeatureVector {
    pub fn from_parts(pop: &PopulationFeatures, ind: &IndividualFeatures) -> Self {
        FeatureVector {
            psd: pop.psd,
            pfd: pop.pfd,
            pnb: pop.pnb,
            pic: pop.pic,
            pai: pop.pai,
            pcv: pop.pcv,
            pcr: pop.pcr,
            eap: pop.eap,
            evp: pop.evp,
            atn: pop.atn,
            pdd: pop.pdd,
            idg: ind.idg,
            idp: ind.idp,
            ifg: ind.ifg,
            ifp: ind.ifp,
            idb: ind.idb,
            idw: ind.idw,
            itn: ind.itn,
            osr: ind.osr,
        }
    }

    /// Values in [`FEATURE_NAMES`] order.
    pub fn values(&self) -> [f64; FEATURE_COUNT] {
        [
            self.psd, self.pfd, self.pnb, self.pic, self.pai, self.pcv, self.pcr, self.eap,
            self.evp, self.atn, self.pdd, self.idg, self.idp, self.ifg, self.ifp, self.idb,
            self.idw, self.itn, self.osr,
        ]
    }

    pub fn from_values(v: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector {
            psd: v[0],
            pfd: v[1],
            pnb: v[2],
            pic: v[3],
            pai: v[4],
            pcv: v[5],
            pcr: v[6],
            eap: v[7],
            evp: v[8],
            atn: v[9],
            pdd: v[10],
            idg: v[11],
            idp: v[12],
            ifg: v[13],
            ifp: v[14],
            idb: v[15],
            idw: v[16],
            itn: v[17],
            osr: v[18],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

/// Count of differing positions; errors when lengths differ.
pub fn hamming(a: &BitString, b: &BitString) -> Result<usize, FeatureError> {
    if a.len() != b.len() {
        return Err(FeatureError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.hamming(b))
}

/// Population standard deviation (divides by N).
fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Computes the 11 population-based features from a snapshot.
pub fn population_features(
    s: &PopulationSnapshot,
    eap_variant: EapVariant,
) -> Result<PopulationFeatures, FeatureError> {
    s.validate()?;
    let n = s.colony_size();
    let nf = n as f64;
    let d = s.dims as f64;

    let mut dist_sum = 0.0;
    let mut fit_sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            dist_sum += s.parents[i].hamming(&s.parents[j]) as f64;
            fit_sum += (s.parent_fitness[i] - s.parent_fitness[j]).abs();
        }
    }
    let pairs = nf * (nf - 1.0) / 2.0;
    let psd = dist_sum / (d * pairs);
    let pfd = fit_sum / pairs;

    let max_fp = s.parent_fitness.iter().cloned().fold(f64::MIN, f64::max);
    let max_fc = s.child_fitness.iter().cloned().fold(f64::MIN, f64::max);

    let mut improving = 0usize;
    let mut beating_best = 0usize;
    let mut pai_sum = 0.0;
    let mut eap_sum = 0.0;
    for i in 0..n {
        let fp = s.parent_fitness[i];
        let fc = s.child_fitness[i];
        if fc > fp {
            improving += 1;
            if fc != 0.0 {
                pai_sum += (fc - fp) / fc;
            }
            eap_sum += (max_fp - fc).abs();
        }
        if fc > s.gbest_fitness {
            beating_best += 1;
        }
    }
    let pnb = improving as f64 / nf;
    let pic = beating_best as f64 / nf;
    let pai = pai_sum / nf;
    let pcv = if max_fp != 0.0 {
        (max_fc - max_fp) / max_fp
    } else {
        0.0
    };

    let mut pull_sum = 0.0;
    for i in 0..n {
        pull_sum += s.gbest.hamming(&s.parents[i]) as f64 - s.gbest.hamming(&s.children[i]) as f64;
    }
    let pcr = pull_sum / nf / d;

    let sigma = std_dev(&s.parent_fitness);
    let eap = match eap_variant {
        EapVariant::Literal => sigma * eap_sum / nf,
        EapVariant::SigmaDivide => {
            if sigma > 0.0 {
                eap_sum / nf / sigma
            } else {
                0.0
            }
        }
    };
    let evp = eap * pic;

    let atn_raw = s.trials.iter().map(|&t| t as f64).sum::<f64>() / nf;
    let atn = atn_raw / s.trial_max as f64;

    let mut pdd_max = 0usize;
    let everyone: Vec<&BitString> = s.parents.iter().chain(&s.children).collect();
    for i in 0..everyone.len() {
        for j in (i + 1)..everyone.len() {
            pdd_max = pdd_max.max(everyone[i].hamming(everyone[j]));
        }
    }
    let pdd = pdd_max as f64 / d;

    Ok(PopulationFeatures {
        psd,
        pfd,
        pnb,
        pic,
        pai,
        pcv,
        pcr,
        eap,
        evp,
        atn,
        pdd,
        atn_raw,
    })
}

/// Computes the 8 per-move features for one (parent, child) pair.
///
/// `trial` is the source's trial counter when the candidate was generated;
/// `op_successes` / `op_uses` are the producing operator's counters before
/// this move was counted.
#[allow(clippy::too_many_arguments)]
pub fn individual_features(
    parent: &BitString,
    child: &BitString,
    parent_fitness: f64,
    child_fitness: f64,
    s: &PopulationSnapshot,
    trial: u32,
    op_successes: u64,
    op_uses: u64,
) -> IndividualFeatures {
    let d = s.dims as f64;
    let idg = s.gbest.hamming(parent) as f64 / d;
    let idp = parent.hamming(child) as f64 / d;
    let ifg = if s.gbest_fitness != 0.0 {
        (s.gbest_fitness - child_fitness) / s.gbest_fitness
    } else {
        0.0
    };
    let ifp = if child_fitness != 0.0 {
        (child_fitness - parent_fitness) / child_fitness
    } else {
        0.0
    };
    let idb = s.pbest.hamming(parent) as f64 / d;
    let idw = s.pworst.hamming(parent) as f64 / d;
    let itn = trial as f64 / s.trial_max as f64;
    let osr = if op_uses > 0 {
        op_successes as f64 / op_uses as f64
    } else {
        0.0
    };
    IndividualFeatures {
        idg,
        idp,
        ifg,
        ifp,
        idb,
        idw,
        itn,
        osr,
    }
}
