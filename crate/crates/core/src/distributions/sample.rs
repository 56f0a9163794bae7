//! Sorted samples and seeded inverse-transform sampling.
//!
//! Random streams: a 64-bit seed is expanded with SplitMix64 into the 32-byte
//! key of a ChaCha8 generator. Each uniform takes one 64-bit output `x` and
//! maps it to `((x >> 11) + 0.5) · 2⁻⁵³`, which lies strictly inside (0, 1).
//! Independent streams for replication `i` use `derive_seed(seed, i)`.

use super::{ContinuousModel, Level};
use crate::error::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index` under the experiment seed `seed`: the second
/// SplitMix64 output started from `seed ^ splitmix64(index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut s = index;
    let mut state = seed ^ splitmix64(&mut s);
    splitmix64(&mut state);
    splitmix64(&mut state)
}

/// Uniform stream on (0, 1).
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        StreamRng {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        let x = self.inner.next_u64();
        ((x >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// A level whose complement is also drawn exactly, so that upper-tail
    /// draws keep precision: the uniform decides `p` if below one half and
    /// `q` otherwise.
    pub fn level(&mut self) -> Level {
        let u = self.uniform();
        if u < 0.5 {
            Level::new(u).expect("uniform lies in (0, 1)")
        } else {
            Level::upper(1.0 - u).expect("uniform lies in (0, 1)")
        }
    }
}

/// Observations sorted ascending; nonempty and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample must be nonempty"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("sample contains non-finite value {v}")));
        }
        values.sort_by(f64::total_cmp);
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// The sample `c·x + d`, re-sorted.
    pub fn affine(&self, c: f64, d: f64) -> Result<Self> {
        Sample::new(self.values.iter().map(|x| c * x + d).collect())
    }
}

/// `n` i.i.d. draws in stream order, by inverse transform of the model's
/// quantile function.
pub fn draw(model: &ContinuousModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let mut rng = StreamRng::new(seed);
    Ok((0..n).map(|_| model.quantile_level(rng.level())).collect())
}

/// The sorted sample of [`draw`].
pub fn sample_from(model: &ContinuousModel, n: usize, seed: u64) -> Result<Sample> {
    Sample::new(draw(model, n, seed)?)
}
