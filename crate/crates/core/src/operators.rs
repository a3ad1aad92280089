//! The pool of four binary neighbourhood operators applied by the colony.
//!
//! The ids 0..=3 are stable across runs: they are the class labels of the
//! exported datasets. The pool spans four distinct move classes so the
//! downstream classifiers have genuinely distinguishable behaviours to
//! separate:
//!
//! * OP 0 — blind per-bit flip (rate 1/D),
//! * OP 1 — uniform mixing towards a random neighbour,
//! * OP 2 — uniform mixing towards the global best,
//! * OP 3 — distance-scaled multi-bit flip.
//!
//! Every operator changes at least one bit relative to the parent, so no
//! clone children are ever evaluated.

use rand::Rng;
use thiserror::Error;

use crate::problems::BitString;

/// Number of operators in the pool.
pub const OPERATOR_COUNT: usize = 4;

#[derive(Debug, Error)]
#[error("unknown operator id {0}: valid ids are 0..=3")]
pub struct UnknownOperator(pub u8);

/// Identifier of a pool operator; doubles as the dataset class label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OperatorId(u8);

impl OperatorId {
    pub const ALL: [OperatorId; OPERATOR_COUNT] =
        [OperatorId(0), OperatorId(1), OperatorId(2), OperatorId(3)];

    pub fn new(id: u8) -> Result<Self, UnknownOperator> {
        if (id as usize) < OPERATOR_COUNT {
            Ok(OperatorId(id))
        } else {
            Err(UnknownOperator(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u8> for OperatorId {
    type Error = UnknownOperator;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        OperatorId::new(id)
    }
}

impl std::fmt::Display for OperatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inputs an operator may draw from. `neighbor` is another food source
/// (never the parent's own index) and `gbest` the best solution found so far.
/// All three have the same length.
pub struct OperatorContext<'a> {
    pub parent: &'a BitString,
    pub neighbor: &'a BitString,
    pub gbest: &'a BitString,
}

/// OP 0: flips each bit independently with probability 1/D; if no bit
/// flipped, one uniformly chosen bit is forced to flip.
pub fn op0_flip<R: Rng>(ctx: &OperatorContext, rng: &mut R) -> BitString {
    let d = ctx.parent.len();
    let rate = 1.0 / d as f64;
    let mut child = ctx.parent.clone();
    let mut flipped = false;
    for i in 0..d {
        if rng.random_bool(rate) {
            child.flip(i);
            flipped = true;
        }
    }
    if !flipped {
        child.flip(rng.random_range(0..d));
    }
    child
}

/// OP 1: where parent and neighbour differ, copies the neighbour's bit with
/// probability 1/2. Falls back to [`op0_flip`] when they are identical; if
/// the coin flips leave the parent unchanged, one differing bit is copied.
pub fn op1_neighbor_mix<R: Rng>(ctx: &OperatorContext, rng: &mut R) -> BitString {
    donor_mix(ctx, ctx.neighbor, rng)
}

/// OP 2: same mixing rule as OP 1 but the donor is the global best.
pub fn op2_best_guided<R: Rng>(ctx: &OperatorContext, rng: &mut R) -> BitString {
    donor_mix(ctx, ctx.gbest, rng)
}

fn donor_mix<R: Rng>(ctx: &OperatorContext, donor: &BitString, rng: &mut R) -> BitString {
    let differing: Vec<usize> = (0..ctx.parent.len())
        .filter(|&i| ctx.parent.get(i) != donor.get(i))
        .collect();
    if differing.is_empty() {
        return op0_flip(ctx, rng);
    }
    let mut child = ctx.parent.clone();
    let mut copied = false;
    for &i in &differing {
        if rng.random_bool(0.5) {
            child.set(i, donor.get(i));
            copied = true;
        }
    }
    if !copied {
        let i = differing[rng.random_range(0..differing.len())];
        child.set(i, donor.get(i));
    }
    child
}

/// OP 3: flips exactly `k` distinct uniformly chosen positions, where
/// `k = max(1, ceil(u * d))` for `u ~ uniform(0, 1]` and `d` the Hamming
/// distance between parent and neighbour; `k` is therefore uniform over
/// `1..=d`. When `d = 0`, a single bit is flipped.
pub fn op3_distance_flip<R: Rng>(ctx: &OperatorContext, rng: &mut R) -> BitString {
    let d = ctx.parent.hamming(ctx.neighbor);
    let k = if d == 0 {
        1
    } else {
        let u = 1.0 - rng.random::<f64>();
        ((u * d as f64).ceil() as usize).clamp(1, d)
    };
    let mut child = ctx.parent.clone();
    for i in rand::seq::index::sample(rng, ctx.parent.len(), k) {
        child.flip(i);
    }
    child
}

/// Dispatches to the operator with the given id. The id space is closed
/// (constructing an [`OperatorId`] above 3 already fails), so dispatch
/// itself cannot fail.
pub fn apply_operator<R: Rng>(id: OperatorId, ctx: &OperatorContext, rng: &mut R) -> BitString {
    match id.get() {
        0 => op0_flip(ctx, rng),
        1 => op1_neighbor_mix(ctx, rng),
        2 => op2_best_guided(ctx, rng),
        _ => op3_distance_flip(ctx, rng),
    }
}
