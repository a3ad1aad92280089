use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::ProblemError;

/// Fixed-length binary solution vector, the universal genotype.
///
/// Every element is 0 or 1 and the length equals the problem dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    /// All-zero solution of the given length.
    pub fn zeros(len: usize) -> Self {
        BitString { bits: vec![0; len] }
    }

    /// Builds from raw bits; every value must be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bit values must be 0 or 1");
        BitString { bits }
    }

    /// Uniform random solution (each bit is 1 with probability 1/2).
    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        BitString {
            bits: (0..len).map(|_| u8::from(rng.random_bool(0.5))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(value <= 1);
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Indices of set bits.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
    }

    pub fn complement(&self) -> Self {
        BitString {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }

    /// Number of differing positions. Panics if lengths differ; use
    /// [`crate::features::hamming`] for the checked variant.
    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(
            self.len(),
            other.len(),
            "hamming distance needs equal lengths"
        );
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(ProblemError::InvalidParameter(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(BitString { bits })
    }
}
