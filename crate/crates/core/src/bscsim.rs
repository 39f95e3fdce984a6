//! Monte Carlo block error rates of LP decoding on the binary symmetric
//! channel.
//!
//! The all-zero word is sent. Trial `k` draws its error pattern from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `k`: bit `i` flips
//! when the `i`-th uniform `f64` drawn is below the crossover probability.
//! Because every trial owns its stream, any split of trials across workers
//! yields the same tally.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fracdist::with_pool;
use crate::gf2::{BitMatrix, BitVector};
use crate::lpdecode::{DecodeError, LpDecoder};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("crossover probability {0} is outside [0, 1/2]")]
    InvalidProbability(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimPoint {
    pub crossover: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub seed: u64,
}

/// Error pattern of trial `trial`.
pub fn error_pattern(n: usize, crossover: f64, seed: u64, trial: u64) -> BitVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let bits: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < crossover).collect();
    BitVector::from_bools(&bits)
}

/// Counts block errors over trials `range`. Identical patterns are decoded once.
pub fn count_block_errors(
    decoder: &LpDecoder,
    crossover: f64,
    seed: u64,
    range: std::ops::Range<u64>,
) -> Result<u64, SimError> {
    let n = decoder.n();
    let patterns: Vec<BitVector> = range
        .into_par_iter()
        .map(|k| error_pattern(n, crossover, seed, k))
        .collect();
    let mut counts: HashMap<BitVector, u64> = HashMap::new();
    for p in patterns {
        *counts.entry(p).or_default() += 1;
    }
    let distinct: Vec<(BitVector, u64)> = counts.into_iter().collect();
    let zero = BitVector::zeros(n);
    let failures: Result<Vec<u64>, DecodeError> = distinct
        .par_iter()
        .map(|(e, c)| {
            if e.is_zero() {
                return Ok(0);
            }
            Ok(if decoder.decode(e)?.recovered(&zero) { 0 } else { *c })
        })
        .collect();
    Ok(failures?.into_iter().sum())
}

fn check(crossover: f64, trials: u64) -> Result<(), SimError> {
    if !(0.0..=0.5).contains(&crossover) {
        return Err(SimError::InvalidProbability(crossover));
    }
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    Ok(())
}

pub fn simulate_bler(h: &BitMatrix, crossover: f64, trials: u64, seed: u64) -> Result<SimPoint, SimError> {
    simulate_bler_with(&LpDecoder::new(h), crossover, trials, seed, 0)
}

/// [`simulate_bler`] with a prepared decoder and `jobs` worker threads
/// (0 uses the global pool).
pub fn simulate_bler_with(
    decoder: &LpDecoder,
    crossover: f64,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<SimPoint, SimError> {
    check(crossover, trials)?;
    let block_errors = with_pool(jobs, || count_block_errors(decoder, crossover, seed, 0..trials))?;
    Ok(SimPoint {
        crossover,
        trials,
        block_errors,
        bler: block_errors as f64 / trials as f64,
        seed,
    })
}

/// One point per crossover; point `i` uses seed `seed + i`.
pub fn sweep(h: &BitMatrix, crossovers: &[f64], trials: u64, seed: u64) -> Result<Vec<SimPoint>, SimError> {
    sweep_with(&LpDecoder::new(h), crossovers, trials, seed, 0)
}

pub fn sweep_with(
    decoder: &LpDecoder,
    crossovers: &[f64],
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<Vec<SimPoint>, SimError> {
    for &p in crossovers {
        check(p, trials)?;
    }
    crossovers
        .iter()
        .enumerate()
        .map(|(i, &p)| simulate_bler_with(decoder, p, trials, seed.wrapping_add(i as u64), jobs))
        .collect()
}

/// One-sided pooled two-proportion z statistic for "`a` has a lower error
/// rate than `b`"; positive values favour `a`.
pub fn z_lower(a: &SimPoint, b: &SimPoint) -> f64 {
    let (na, nb) = (a.trials as f64, b.trials as f64);
    let pooled = (a.block_errors + b.block_errors) as f64 / (na + nb);
    let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
    if se == 0.0 {
        return 0.0;
    }
    (b.bler - a.bler) / se
}

/// 95% one-sided critical value of the standard normal.
pub const Z_95: f64 = 1.6449;
