use serde::{Deserialize, Serialize};

use crate::herd::HerdError;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum GaError {
    #[error("gene segment is empty")]
    EmptySegment,
    #[error("chromosome length {found} does not match bounds (expected {expected})")]
    LengthMismatch { expected: usize, found: usize },
    #[error("fitness vector is empty")]
    EmptyPopulation,
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Data(#[from] HerdError),
}

/// Fixed-length bit string: the `C` segment followed by the `gamma` segment,
/// each most-significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chromosome {
    pub bits: Vec<bool>,
}

impl Chromosome {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl std::fmt::Display for Chromosome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneBounds {
    pub c_min: f64,
    pub c_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub p: usize,
    pub q: usize,
}

impl Default for GeneBounds {
    fn default() -> Self {
        Self { c_min: 0.01, c_max: 1000.0, gamma_min: 1e-4, gamma_max: 10.0, p: 12, q: 12 }
    }
}

impl GeneBounds {
    pub fn chromosome_len(&self) -> usize {
        self.p + self.q
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (name, lo, hi) in [("c", self.c_min, self.c_max), ("gamma", self.gamma_min, self.gamma_max)] {
            if !(lo > 0.0 && lo.is_finite()) {
                v.push(format!("{name}_min must be positive and finite, got {lo}"));
            }
            if !(hi > lo && hi.is_finite()) {
                v.push(format!("{name}_max must be finite and exceed {name}_min, got {hi}"));
            }
        }
        for (name, k) in [("p", self.p), ("q", self.q)] {
            if !(1..=63).contains(&k) {
                v.push(format!("{name} must be in 1..=63, got {k}"));
            }
        }
        v
    }
}

/// `lo + (hi - lo) * int(bits) / (2^k - 1)` with `bits` read most significant first.
pub fn decode_gene<T: Scalar>(bits: &[bool], lo: T, hi: T) -> Result<T, GaError> {
    if bits.is_empty() {
        return Err(GaError::EmptySegment);
    }
    let k = bits.len();
    let int = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
    let max = (1u128 << k) - 1;
    let frac = T::lit(int as f64) / T::lit(max as f64);
    if int == max {
        return Ok(hi);
    }
    Ok(lo + (hi - lo) * frac)
}

/// Decodes a chromosome into `(C, gamma)`.
pub fn decode<T: Scalar>(c: &Chromosome, b: &GeneBounds) -> Result<(T, T), GaError> {
    if c.len() != b.chromosome_len() {
        return Err(GaError::LengthMismatch { expected: b.chromosome_len(), found: c.len() });
    }
    let (cs, gs) = c.bits.split_at(b.p);
    Ok((decode_gene(cs, T::lit(b.c_min), T::lit(b.c_max))?, decode_gene(gs, T::lit(b.gamma_min), T::lit(b.gamma_max))?))
}
