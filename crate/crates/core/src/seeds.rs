//! Deterministic seed derivation.
//!
//! Sub-streams (per run, per tree, per phase) are seeded from a base seed and
//! a salt so that parallel and serial execution draw identical randomness.

/// splitmix64 finalizer; decorrelates nearby inputs.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives an independent seed from `base` and `salt`.
pub fn derive(base: u64, salt: u64) -> u64 {
    splitmix64(base ^ splitmix64(salt.wrapping_add(1)))
}
