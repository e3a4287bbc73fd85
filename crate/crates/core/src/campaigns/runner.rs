//! Deterministic parallel evaluation of campaign trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One aggregated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignPoint {
    pub grid_value: f64,
    /// Mean per-trial error, clamped at zero.
    pub mean_error: f64,
    /// Sample standard deviation of the per-trial errors over `sqrt(n)`.
    pub std_error: f64,
    pub n_trials: usize,
    pub mean_fidelity: f64,
    /// Fidelity the per-trial errors are measured against.
    pub reference_fidelity: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at grid point `grid`; independent of scheduling.
pub fn trial_seed(base_seed: u64, grid: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ grid as u64) ^ (trial as u64).rotate_left(32))
}

pub fn trial_rng(base_seed: u64, grid: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(base_seed, grid, trial))
}

/// Runs `f` on a pool of `jobs` threads, keeping results in input order.
pub fn parallel_map<I, O, F>(jobs: usize, items: &[I], f: F) -> Result<Vec<O>>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Aggregates per-trial fidelities against per-point reference fidelities.
pub fn aggregate(grid: &[f64], reference: &[f64], fidelities: &[Vec<f64>]) -> Vec<CampaignPoint> {
    grid.iter()
        .zip(reference)
        .zip(fidelities)
        .map(|((&g, &f_ref), fs)| {
            let n = fs.len();
            let errors: Vec<f64> = fs.iter().map(|f| f_ref - f).collect();
            let mean = errors.iter().sum::<f64>() / n as f64;
            let std_error = if n > 1 {
                let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                0.0
            };
            CampaignPoint {
                grid_value: g,
                mean_error: mean.clamp(0.0, 1.0),
                std_error,
                n_trials: n,
                mean_fidelity: fs.iter().sum::<f64>() / n as f64,
                reference_fidelity: f_ref,
            }
        })
        .collect()
}

/// Evaluates `trials` fidelities per grid point with per-trial RNG streams.
pub fn run_trials<F>(grid_len: usize, trials: usize, base_seed: u64, jobs: usize, eval: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let tasks: Vec<(usize, usize)> = (0..grid_len).flat_map(|g| (0..trials).map(move |t| (g, t))).collect();
    let flat = parallel_map(jobs, &tasks, |&(g, t)| eval(g, &mut trial_rng(base_seed, g, t)))?;
    Ok(flat.chunks(trials.max(1)).map(<[f64]>::to_vec).collect())
}
