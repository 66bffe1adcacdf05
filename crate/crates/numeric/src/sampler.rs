//! Deterministic parallel Monte-Carlo accumulation.
//!
//! The sample budget is cut into fixed-size chunks; chunk `i` draws from the
//! ChaCha stream `i` of the run's seed. Chunks may run on any number of
//! threads, and their partial sums are combined in chunk order, so the result
//! does not depend on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};

const CHUNK: u64 = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub samples: u64,
    pub seed: u64,
    /// Threads used for sampling; `0` means rayon's default.
    pub workers: usize,
}

impl Budget {
    pub const DEFAULT_SAMPLES: u64 = 1_000_000;

    pub fn new(samples: u64, seed: u64) -> Self {
        Budget {
            samples,
            seed,
            workers: 0,
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Budget { workers, ..self }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Budget::DEFAULT_SAMPLES, 0)
    }
}

/// Sample mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub std_error: f64,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Averages `k` estimators that share every random draw. `sample` writes the
/// `k` values of one draw into its output slice.
pub fn accumulate<F>(budget: &Budget, k: usize, sample: F) -> Result<Vec<Moments>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    if budget.samples < 2 {
        return Err(NumericError::InvalidParameter("need at least two samples".into()));
    }
    let n_chunks = budget.samples.div_ceil(CHUNK);
    let run_chunk = |c: u64| {
        let mut rng = chunk_rng(budget.seed, c);
        let len = CHUNK.min(budget.samples - c * CHUNK);
        let mut buf = vec![0.0; k];
        let mut sums = vec![(0.0f64, 0.0f64); k];
        for _ in 0..len {
            sample(&mut rng, &mut buf);
            for (s, &x) in sums.iter_mut().zip(&buf) {
                s.0 += x;
                s.1 += x * x;
            }
        }
        sums
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.workers)
        .build()
        .map_err(|e| NumericError::InvalidParameter(format!("thread pool: {e}")))?;
    let partials: Vec<Vec<(f64, f64)>> = pool.install(|| (0..n_chunks).into_par_iter().map(run_chunk).collect());

    let n = budget.samples as f64;
    let mut total = vec![(0.0f64, 0.0f64); k];
    for chunk in &partials {
        for (t, s) in total.iter_mut().zip(chunk) {
            t.0 += s.0;
            t.1 += s.1;
        }
    }
    Ok(total
        .into_iter()
        .map(|(s, ss)| {
            let mean = s / n;
            let var = ((ss / n - mean * mean) * n / (n - 1.0)).max(0.0);
            Moments {
                mean,
                std_error: (var / n).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn uniform_mean() {
        let m = accumulate(&Budget::new(200_000, 7), 1, |rng, out| out[0] = rng.random::<f64>()).unwrap();
        assert!((m[0].mean - 0.5).abs() < 4.0 * m[0].std_error);
        // sd of U(0,1) is 1/sqrt(12)
        let expected = (1.0 / 12.0f64).sqrt() / (200_000f64).sqrt();
        assert!((m[0].std_error / expected - 1.0).abs() < 0.02);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let f = |rng: &mut ChaCha8Rng, out: &mut [f64]| {
            let x: f64 = rng.random();
            out[0] = x.sin();
            out[1] = x * x;
        };
        let b = Budget::new(100_003, 11);
        let one = accumulate(&b.with_workers(1), 2, f).unwrap();
        let four = accumulate(&b.with_workers(4), 2, f).unwrap();
        for (a, b) in one.iter().zip(&four) {
            assert_eq!(a.mean.to_bits(), b.mean.to_bits());
            assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        }
    }

    #[test]
    fn seeds_differ() {
        let f = |rng: &mut ChaCha8Rng, out: &mut [f64]| out[0] = rng.random::<f64>();
        let a = accumulate(&Budget::new(10_000, 1), 1, f).unwrap();
        let b = accumulate(&Budget::new(10_000, 2), 1, f).unwrap();
        assert_ne!(a[0].mean, b[0].mean);
    }

    #[test]
    fn rejects_tiny_budgets() {
        assert!(accumulate(&Budget::new(1, 0), 1, |_, o| o[0] = 1.0).is_err());
    }
}
