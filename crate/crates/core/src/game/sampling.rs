//! Monte-Carlo Shapley estimates from seeded random permutations.
//!
//! Samples are split into fixed-size chunks; chunk `c` draws from a ChaCha
//! stream `c` under the caller's seed, and chunk sums are reduced in chunk
//! order. Output therefore depends only on `(game, samples, seed)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Allocation, Characteristic, ShapleyEngine};
use crate::error::{Error, Result};
use crate::sets::{Coalition, MAX_PLAYERS};
use crate::worth::Worth;

/// Permutations drawn per independent random stream.
pub const SAMPLE_CHUNK: usize = 4096;

pub fn shapley_sampled<C: Characteristic>(
    game: &C,
    samples: usize,
    seed: u64,
) -> Result<Allocation<f64>> {
    shapley_sampled_with(&ShapleyEngine::default(), game, samples, seed)
}

/// Sampled estimate using `engine`'s thread settings. The engine's exact
/// player limit does not apply; only the 63-player mask bound does.
pub fn shapley_sampled_with<C: Characteristic>(
    engine: &ShapleyEngine,
    game: &C,
    samples: usize,
    seed: u64,
) -> Result<Allocation<f64>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let n = game.players();
    if n > MAX_PLAYERS {
        return Err(Error::Capacity {
            players: n,
            limit: MAX_PLAYERS,
        });
    }
    if !game.worth(Coalition::EMPTY).is_zero() {
        return Err(Error::NonZeroEmpty);
    }

    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let partials: Vec<Vec<f64>> = engine.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let draws = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
                chunk_sums(game, n, draws, seed, c as u64)
            })
            .collect()
    });

    let mut totals = vec![0.0; n];
    for partial in &partials {
        for (t, p) in totals.iter_mut().zip(partial) {
            *t += p;
        }
    }
    let scale = samples as f64;
    Ok(Allocation::new(totals.into_iter().map(|t| t / scale).collect()))
}

fn chunk_sums<C: Characteristic>(game: &C, n: usize, draws: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut order: Vec<usize> = (0..n).collect();
    let mut sums = vec![0.0; n];
    for _ in 0..draws {
        order.shuffle(&mut rng);
        let mut coalition = Coalition::EMPTY;
        let mut previous = C::Worth::zero();
        for &player in &order {
            coalition = coalition.with(player);
            let current = game.worth(coalition);
            sums[player] += (current.clone() - previous).to_f64();
            previous = current;
        }
    }
    sums
}
