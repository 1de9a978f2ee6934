//! Seeded random streams and exact categorical sampling.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded through
//! `SeedableRng::seed_from_u64`. ChaCha is a counter-based cipher with a
//! 64-bit stream selector, which gives a cheap splitting function:
//! trial `i` of a run seeded with `s` uses stream `i` of the key derived
//! from `s` (see [`SeededRng::for_trial`]). Streams never overlap, so the
//! draws of one trial do not depend on how trials are scheduled.
//!
//! Uniform integers are produced by rejection sampling on raw 64-bit words,
//! implemented here rather than borrowed from `rand`, so the mapping from
//! seed to draws is fixed by this crate alone.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("no weights given")]
    Empty,
    #[error("weight {index} is negative ({value})")]
    Negative { index: usize, value: Rational },
    #[error("weights sum to zero")]
    ZeroMass,
}

/// A deterministic random stream. Equal seeds give equal streams on every
/// platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `index` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        // Values below `threshold` would bias the modulus.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform big integer in `0..bound`, by masking to the bit length of
    /// `bound` and rejecting overshoots.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "empty range");
        if let Some(b) = bound.to_u64() {
            return BigUint::from(self.below(b));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        let top_mask = if top_bits == 64 {
            u64::MAX
        } else {
            (1u64 << top_bits) - 1
        };
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            *digits.last_mut().expect("at least two words") &= top_mask;
            let candidate = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                    .collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }
}

/// Categorical distribution over indices with exact rational weights.
///
/// Weights are brought to a common denominator, so index `i` is drawn with
/// probability exactly `weights[i] / sum(weights)`.
#[derive(Debug, Clone)]
pub struct WeightedSampler {
    repr: Cumulative,
}

#[derive(Debug, Clone)]
enum Cumulative {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl WeightedSampler {
    pub fn new(weights: &[Rational]) -> Result<Self, SampleError> {
        if weights.is_empty() {
            return Err(SampleError::Empty);
        }
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(SampleError::Negative {
                index,
                value: w.clone(),
            });
        }
        let lcm = weights
            .iter()
            .fold(BigInt::from(1), |acc, w| acc.lcm(w.denom()));
        let mut running = BigUint::zero();
        let mut cumulative = Vec::with_capacity(weights.len());
        for w in weights {
            let scaled = w.numer() * (&lcm / w.denom());
            let (sign, mag) = scaled.into_parts();
            debug_assert!(sign != Sign::Minus);
            running += mag;
            cumulative.push(running.clone());
        }
        if running.is_zero() {
            return Err(SampleError::ZeroMass);
        }
        let repr = if running.to_u64().is_some() {
            Cumulative::Small(cumulative.iter().map(|c| c.to_u64().unwrap()).collect())
        } else {
            Cumulative::Big(cumulative)
        };
        Ok(Self { repr })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Cumulative::Small(c) => c.len(),
            Cumulative::Big(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample(&self, rng: &mut SeededRng) -> usize {
        match &self.repr {
            Cumulative::Small(c) => {
                let u = rng.below(*c.last().unwrap());
                c.partition_point(|&x| x <= u)
            }
            Cumulative::Big(c) => {
                let u = rng.below_big(c.last().unwrap());
                c.partition_point(|x| x <= &u)
            }
        }
    }
}

/// Draws one index from `weights`. Prefer [`WeightedSampler`] when drawing
/// repeatedly from the same weights.
pub fn sample_categorical(rng: &mut SeededRng, weights: &[Rational]) -> Result<usize, SampleError> {
    Ok(WeightedSampler::new(weights)?.sample(rng))
}
