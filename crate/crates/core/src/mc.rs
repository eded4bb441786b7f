//! Deterministic Monte Carlo plumbing: seeded streams and ordered reduction.
//!
//! Sample `i` belongs to stream `i mod streams`. Every stream owns a
//! ChaCha8 generator keyed by `(seed, stream id)`, so a stream's draws do
//! not depend on which thread ran it or when. Per-stream partial moments
//! are merged in stream-id order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type StreamRng = ChaCha8Rng;

/// Seed, sample count and stream count of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub samples: usize,
    pub streams: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 20_000,
            streams: 8,
        }
    }
}

impl McConfig {
    pub fn new(seed: u64, samples: usize, streams: usize) -> Result<Self> {
        let mc = Self {
            seed,
            samples,
            streams,
        };
        mc.validate()?;
        Ok(mc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::validation("samples", "must be at least 1"));
        }
        if self.streams == 0 {
            return Err(Error::validation("streams", "must be at least 1"));
        }
        Ok(())
    }

    /// Sample count actually drawn: `samples` rounded up to a multiple of
    /// `streams` so every stream draws the same number of samples.
    pub fn padded_samples(&self) -> usize {
        self.samples.div_ceil(self.streams) * self.streams
    }

    pub fn per_stream(&self) -> usize {
        self.samples.div_ceil(self.streams)
    }

    /// Independent generator for one stream.
    pub fn stream_rng(&self, stream: usize) -> StreamRng {
        stream_rng(self.seed, stream as u64)
    }
}

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mean and standard error of a Monte Carlo expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples_used: usize,
}

/// Running mean and second central moment (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise merge.
    pub(crate) fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub(crate) fn estimate(&self) -> BoundEstimate {
        let std_error = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64).max(0.0).sqrt() / (self.count as f64).sqrt()
        } else {
            0.0
        };
        BoundEstimate {
            mean: self.mean,
            std_error,
            samples_used: self.count,
        }
    }
}

/// Reduces per-stream sample values in stream order.
pub(crate) fn reduce_streams<T, F>(streams: &[Vec<T>], f: F) -> BoundEstimate
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let partials: Vec<Moments> = streams
        .par_iter()
        .map(|samples| {
            let mut m = Moments::default();
            for s in samples {
                m.push(f(s));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &partials {
        total.merge(p);
    }
    total.estimate()
}

/// Per-stream values of two functions, reduced into two estimates.
pub(crate) fn reduce_streams_pair<T, F>(streams: &[Vec<T>], f: F) -> (BoundEstimate, BoundEstimate)
where
    T: Sync,
    F: Fn(&T) -> (f64, f64) + Sync,
{
    let partials: Vec<(Moments, Moments)> = streams
        .par_iter()
        .map(|samples| {
            let mut a = Moments::default();
            let mut b = Moments::default();
            for s in samples {
                let (x, y) = f(s);
                a.push(x);
                b.push(y);
            }
            (a, b)
        })
        .collect();
    let mut ta = Moments::default();
    let mut tb = Moments::default();
    for (a, b) in &partials {
        ta.merge(a);
        tb.merge(b);
    }
    (ta.estimate(), tb.estimate())
}
