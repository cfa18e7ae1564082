use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A sampled signal with `origin` pre-record samples: index `origin + k` holds
/// sample k, so negative k down to -origin are available.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtSignal {
    pub samples: Vec<f64>,
    pub origin: usize,
}

impl ExtSignal {
    pub fn new(samples: Vec<f64>, origin: usize) -> Self {
        assert!(origin <= samples.len(), "origin beyond buffer");
        Self { samples, origin }
    }

    /// Samples k = 0..N.
    pub fn record(&self) -> &[f64] {
        &self.samples[self.origin..]
    }

    /// Record length N.
    pub fn len(&self) -> usize {
        self.samples.len() - self.origin
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sample index k of buffer position t.
    pub fn k_at(&self, t: usize) -> i64 {
        t as i64 - self.origin as i64
    }
}

/// One realization of Gaussian white noise e[k] with variance sigma_e2.
///
/// Uniforms come from a ChaCha8 stream keyed by `seed`; normals are produced
/// by the Box-Muller transform, both outputs of each pair used in turn.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRealization {
    pub signal: ExtSignal,
    pub seed: u64,
}

impl NoiseRealization {
    pub fn generate(seed: u64, sigma_e2: f64, origin: usize, n: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = sigma_e2.sqrt();
        let total = origin + n;
        let mut samples = Vec::with_capacity(total + 1);
        while samples.len() < total {
            // u1 in (0, 1], u2 in [0, 1)
            let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
            let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (2.0 * PI * u2).sin_cos();
            samples.push(sd * r * c);
            samples.push(sd * r * s);
        }
        samples.truncate(total);
        Self {
            signal: ExtSignal::new(samples, origin),
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for stream `index` under `base`; a fixed function of both so
/// results do not depend on evaluation order.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(mix64(base ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}
