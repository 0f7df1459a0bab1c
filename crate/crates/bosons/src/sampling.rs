//! Seeded, reproducible Haar sampling on complex spheres.
//!
//! Generators are keyed by (seed, stream, substream): the triple is packed
//! into a ChaCha key, so identical triples give bit-identical sequences on
//! every platform and thread schedule, and distinct triples give independent
//! streams with O(1) derivation.
//!
//! Stream allocation used across the crate:
//!
//! * stream 0 (or the user-chosen stream): experiment sampling, one
//!   substream per sample index;
//! * streams `RESTART_STREAM_BASE + r`: spectral-norm restart r, with the
//!   caller's instance id as substream;
//! * streams `NET_PROBE_STREAM_BASE + k`: net covering probe k.

use crate::error::{Error, Result};
use crate::index::dim_sym;
use crate::scalar::Real;
use crate::tensor::{BosonState, SymmetricTensor};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// First stream reserved for spectral-norm restarts.
pub const RESTART_STREAM_BASE: u64 = 1;

/// First stream reserved for net covering probes.
pub const NET_PROBE_STREAM_BASE: u64 = 1 << 63;

/// Guard on the symmetric dimension when sampling states.
pub const MAX_SAMPLE_DIM: u64 = 1 << 28;

/// Seed and substream index for a deterministic generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    /// Generator for one substream of this (seed, stream) pair.
    pub fn rng(&self, substream: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key[16..24].copy_from_slice(&substream.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    /// Same seed, different stream.
    pub fn with_stream(&self, stream: u64) -> Self {
        RngSpec {
            seed: self.seed,
            stream,
        }
    }
}

impl Default for RngSpec {
    fn default() -> Self {
        RngSpec { seed: 42, stream: 0 }
    }
}

/// Haar-uniform unit vector in C^d: 2d independent standard normals,
/// normalized. A zero draw (probability zero) is redrawn.
pub fn haar_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex<T>> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v: Vec<Complex<T>> = (0..d)
            .map(|_| Complex::new(T::standard_normal(rng), T::standard_normal(rng)))
            .collect();
        let norm_sqr: T = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if norm_sqr > T::zero() {
            let norm = norm_sqr.sqrt();
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random Boson state: a Haar unit vector in the orthonormal symmetric
/// coordinates of dimension binomial(n+m-1, m).
pub fn haar_boson_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: u32,
    m: u32,
) -> Result<BosonState<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "Haar Boson sampling needs n >= 2".into(),
        });
    }
    let d = dim_sym(n, m)?;
    if d > MAX_SAMPLE_DIM {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: format!("symmetric dimension {d} exceeds sampling guard {MAX_SAMPLE_DIM}"),
        });
    }
    let coeffs = haar_unit_vector(rng, d as usize);
    BosonState::new(SymmetricTensor::new(n, m, coeffs)?)
}
