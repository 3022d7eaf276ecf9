//! Frequency of reversals in random 2×2×2 tables.
//!
//! A draw is eight cell probabilities over (treatment, group, outcome). The
//! uniform sampler draws eight unit exponentials and normalizes them, which is
//! exactly a flat Dirichlet on the 7-simplex.
//!
//! Samples are cut into consecutive blocks of [`SAMPLES_PER_STREAM`]. Block `b`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so the hit count
//! depends only on the seed and the sample count, never on how blocks are
//! spread over workers.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

pub const SAMPLES_PER_STREAM: u64 = 4096;

/// Cell masses indexed by `treatment * 4 + group * 2 + outcome`, outcome 0
/// being a success and 1 a failure.
pub type CellMasses = [f64; 8];

pub trait CellSampler: Sync {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CellMasses;
}

/// Uniform on the probability simplex.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformSimplex;

impl CellSampler for UniformSimplex {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CellMasses {
        let mut cells = [0.0; 8];
        for c in cells.iter_mut() {
            *c = rng.sample(Exp1);
        }
        let total: f64 = cells.iter().sum();
        cells.iter_mut().for_each(|c| *c /= total);
        cells
    }
}

/// Every cell at 1/8.
#[derive(Debug, Clone, Copy, Default)]
pub struct EqualMasses;

impl CellSampler for EqualMasses {
    fn sample<R: Rng + ?Sized>(&self, _rng: &mut R) -> CellMasses {
        [0.125; 8]
    }
}

/// `+1` if treatment 1 has the strictly higher success rate, `-1` for
/// treatment 2, `0` on a tie or an empty margin.
fn preference(t1: (f64, f64), t2: (f64, f64)) -> i8 {
    let ((s1, f1), (s2, f2)) = (t1, t2);
    if s1 + f1 <= 0.0 || s2 + f2 <= 0.0 {
        return 0;
    }
    // s1/(s1+f1) vs s2/(s2+f2), cross-multiplied
    let lhs = s1 * f2;
    let rhs = s2 * f1;
    if lhs > rhs {
        1
    } else if lhs < rhs {
        -1
    } else {
        0
    }
}

/// Both groups strictly favour one treatment and the pooled data strictly favours the other.
pub fn is_paradox_point(cells: &CellMasses) -> bool {
    let at = |t: usize, g: usize| (cells[t * 4 + g * 2], cells[t * 4 + g * 2 + 1]);
    let g0 = preference(at(0, 0), at(1, 0));
    let g1 = preference(at(0, 1), at(1, 1));
    let pool = |t: usize| {
        let (a, b) = (at(t, 0), at(t, 1));
        (a.0 + b.0, a.1 + b.1)
    };
    let pooled = preference(pool(0), pool(1));
    g0 != 0 && g0 == g1 && pooled == -g0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl ParadoxEstimate {
    fn new(samples: u64, hits: u64, seed: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        ParadoxEstimate {
            samples,
            hits,
            estimate,
            std_error: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
            seed,
        }
    }
}

fn count_block<S: CellSampler>(sampler: &S, seed: u64, block: u64, len: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    (0..len)
        .filter(|_| is_paradox_point(&sampler.sample(&mut rng)))
        .count() as u64
}

pub fn estimate_with_sampler<S: CellSampler>(
    sampler: &S,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ParadoxEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let blocks = samples.div_ceil(SAMPLES_PER_STREAM);
    let block_len = |b: u64| SAMPLES_PER_STREAM.min(samples - b * SAMPLES_PER_STREAM);
    let workers = workers.clamp(1, blocks as usize) as u64;
    let hits = if workers == 1 {
        (0..blocks).map(|b| count_block(sampler, seed, b, block_len(b))).sum()
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..blocks)
                            .step_by(workers as usize)
                            .map(|b| count_block(sampler, seed, b, block_len(b)))
                            .sum::<u64>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("monte carlo worker panicked"))
                .sum()
        })
    };
    Ok(ParadoxEstimate::new(samples, hits, seed))
}

/// Fraction of uniformly random 2×2×2 tables showing a strict reversal.
pub fn estimate_paradox_probability(samples: u64, seed: u64, workers: usize) -> Result<ParadoxEstimate> {
    estimate_with_sampler(&UniformSimplex, samples, seed, workers)
}
