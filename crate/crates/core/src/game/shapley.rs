//! Exact Shapley values by full coalition enumeration.
//!
//! Each player's value is accumulated as per-size sums of marginal
//! contributions, visiting coalitions in a fixed order, and only then weighted
//! by `s!(n-s-1)!/n!`. Players are processed in parallel but each player's sum
//! is sequential, so results are bit-identical for any worker count.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use super::{Allocation, Characteristic};
use crate::error::{Error, Result};
use crate::sets::{Coalition, MAX_PLAYERS};
use crate::worth::{Domain, Rational, Worth};

/// Default refusal threshold for exact enumeration.
pub const DEFAULT_MAX_PLAYERS: usize = 24;

// Above these sizes worths are recomputed on demand instead of tabulated.
const APPROX_TABLE_LIMIT: usize = 22;
const EXACT_TABLE_LIMIT: usize = 18;

/// `s!(n-s-1)!/n!` for `s = 0..n`, as exact rationals.
pub fn shapley_weights(n: usize) -> Vec<Rational> {
    if n == 0 {
        return Vec::new();
    }
    let mut factorial = vec![BigUint::one()];
    for k in 1..=n {
        let next = &factorial[k - 1] * BigUint::from(k);
        factorial.push(next);
    }
    (0..n)
        .map(|s| {
            let numer = &factorial[s] * &factorial[n - s - 1];
            Rational::new(numer.into(), factorial[n].clone().into())
        })
        .collect()
}

/// Marginal-evaluation counts from a pruned run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneStats {
    /// Marginals actually evaluated, summed over players.
    pub evaluated: u64,
    /// Marginals a full enumeration evaluates: `n * 2^(n-1)`.
    pub full: u64,
}

#[derive(Clone, Copy)]
enum Scope {
    All,
    /// Only coalitions meeting this set.
    Meeting(Coalition),
}

#[derive(Clone, Debug)]
pub struct ShapleyEngine {
    max_players: usize,
    threads: Option<usize>,
    tabulate: bool,
}

impl Default for ShapleyEngine {
    fn default() -> Self {
        ShapleyEngine {
            max_players: DEFAULT_MAX_PLAYERS,
            threads: None,
            tabulate: true,
        }
    }
}

impl ShapleyEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Raises or lowers the exact-enumeration limit (never above 63).
    pub fn with_max_players(mut self, limit: usize) -> Self {
        self.max_players = limit.min(MAX_PLAYERS);
        self
    }

    /// Pins the worker count; `None` uses rayon's global pool.
    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads.filter(|&k| k > 0);
        self
    }

    /// Whether to tabulate all `2^n` worths up front when `n` is small enough.
    /// Off means every marginal re-evaluates the characteristic function.
    pub fn with_tabulation(mut self, tabulate: bool) -> Self {
        self.tabulate = tabulate;
        self
    }

    pub fn max_players(&self) -> usize {
        self.max_players
    }

    pub fn threads(&self) -> Option<usize> {
        self.threads
    }

    pub fn check_capacity(&self, players: usize) -> Result<()> {
        if players > self.max_players {
            return Err(Error::Capacity {
                players,
                limit: self.max_players,
            });
        }
        Ok(())
    }

    pub(crate) fn install<T: Send>(&self, op: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .expect("thread pool")
                .install(op),
            None => op(),
        }
    }

    pub fn exact<C: Characteristic>(&self, game: &C) -> Result<Allocation<C::Worth>> {
        let scopes = vec![Scope::All; game.players()];
        self.run(game, &scopes).map(|(alloc, _)| alloc)
    }

    /// Exact values enumerating, for player `i`, only coalitions that meet
    /// `relevant[i]`.
    ///
    /// Sound only when every marginal of `i` against a coalition disjoint
    /// from `relevant[i]` is zero; the caller is responsible for that.
    pub fn exact_pruned<C: Characteristic>(
        &self,
        game: &C,
        relevant: &[Coalition],
    ) -> Result<(Allocation<C::Worth>, PruneStats)> {
        if relevant.len() != game.players() {
            return Err(Error::LengthMismatch {
                expected: game.players(),
                actual: relevant.len(),
            });
        }
        let scopes: Vec<Scope> = relevant.iter().map(|&r| Scope::Meeting(r)).collect();
        self.run(game, &scopes)
    }

    fn run<C: Characteristic>(
        &self,
        game: &C,
        scopes: &[Scope],
    ) -> Result<(Allocation<C::Worth>, PruneStats)> {
        let n = game.players();
        self.check_capacity(n)?;
        if !game.worth(Coalition::EMPTY).is_zero() {
            return Err(Error::NonZeroEmpty);
        }
        if n == 0 {
            return Ok((Allocation::new(Vec::new()), PruneStats::default()));
        }
        let weights = shapley_weights(n);
        let table_limit = match C::Worth::DOMAIN {
            Domain::Exact => EXACT_TABLE_LIMIT,
            Domain::Approx => APPROX_TABLE_LIMIT,
        };

        let (values, counts): (Vec<C::Worth>, Vec<u64>) = self.install(|| {
            let table: Option<Vec<C::Worth>> = (self.tabulate && n <= table_limit).then(|| {
                (0..1u64 << n)
                    .into_par_iter()
                    .map(|m| game.worth(Coalition::from_bits(m)))
                    .collect()
            });
            let table = table.as_deref();
            (0..n)
                .into_par_iter()
                .map(|i| player_value(game, table, n, i, scopes[i], &weights))
                .unzip()
        });

        let stats = PruneStats {
            evaluated: counts.iter().sum(),
            full: (n as u64) << (n - 1),
        };
        Ok((Allocation::new(values), stats))
    }
}

fn player_value<C: Characteristic>(
    game: &C,
    table: Option<&[C::Worth]>,
    n: usize,
    i: usize,
    scope: Scope,
    weights: &[Rational],
) -> (C::Worth, u64) {
    let worth = |s: Coalition| match table {
        Some(t) => t[s.bits() as usize].clone(),
        None => game.worth(s),
    };
    let mut by_size = vec![C::Worth::zero(); n];
    let mut count = 0u64;
    let mut visit = |s: Coalition| {
        by_size[s.len()] += worth(s.with(i)) - worth(s);
        count += 1;
    };

    let others = Coalition::full(n).without(i);
    match scope {
        Scope::All => others.subsets().for_each(&mut visit),
        Scope::Meeting(required) => {
            let required = required.intersection(others);
            let free = others.difference(required);
            for t in required.subsets().skip(1) {
                for r in free.subsets() {
                    visit(t.union(r));
                }
            }
        }
    }

    let value = by_size
        .iter()
        .zip(weights)
        .fold(C::Worth::zero(), |acc, (sum, w)| acc + sum.mul_rational(w));
    (value, count)
}

/// Exact Shapley value under the default engine settings.
pub fn shapley_exact<C: Characteristic>(game: &C) -> Result<Allocation<C::Worth>> {
    ShapleyEngine::default().exact(game)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::FnGame;
    use crate::worth::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn weights_for_three_players() {
        assert_eq!(shapley_weights(3), vec![q("1/3"), q("1/6"), q("1/3")]);
        assert_eq!(shapley_weights(1), vec![q("1")]);
    }

    #[test]
    fn unanimity_splits_evenly() {
        let t = Coalition::from_members([0, 1, 2]);
        let game = FnGame::new(3, |s: Coalition| {
            Rational::from_i64(t.is_subset_of(s) as i64)
        });
        let alloc = shapley_exact(&game).unwrap();
        assert_eq!(alloc.values(), &[q("1/3"), q("1/3"), q("1/3")]);
    }

    #[test]
    fn additive_game_gives_ones() {
        let game = FnGame::new(4, |s: Coalition| Rational::from_i64(s.len() as i64));
        let alloc = shapley_exact(&game).unwrap();
        assert!(alloc.iter().all(|v| *v == q("1")));
    }

    #[test]
    fn rejects_nonzero_empty_and_oversize() {
        let game = FnGame::new(2, |_| 1.0f64);
        assert_eq!(shapley_exact(&game), Err(Error::NonZeroEmpty));
        let big = FnGame::new(25, |s: Coalition| s.len() as f64);
        assert_eq!(
            shapley_exact(&big),
            Err(Error::Capacity {
                players: 25,
                limit: 24
            })
        );
        let small_limit = ShapleyEngine::new().with_max_players(3);
        let four = FnGame::new(4, |s: Coalition| s.len() as f64);
        assert!(small_limit.exact(&four).is_err());
    }

    #[test]
    fn untabulated_path_matches_tabulated() {
        let game = FnGame::new(8, |s: Coalition| {
            Rational::from_i64((s.bits() % 7) as i64 * s.len() as i64)
        });
        let direct = ShapleyEngine::new().with_tabulation(false).exact(&game).unwrap();
        let tabulated = ShapleyEngine::new().exact(&game).unwrap();
        assert_eq!(direct, tabulated);
    }

    #[test]
    fn empty_game() {
        let game = FnGame::new(0, |_| 0.0f64);
        assert!(shapley_exact(&game).unwrap().is_empty());
    }

    #[test]
    fn pruned_counts_only_meeting_coalitions() {
        let game = FnGame::new(3, |s: Coalition| s.len() as f64 * 0.0);
        let relevant = [Coalition::singleton(1), Coalition::EMPTY, Coalition::full(3)];
        let (_, stats) = ShapleyEngine::new().exact_pruned(&game, &relevant).unwrap();
        // player 0: S ⊆ {1,2} meeting {1} → 2; player 1: none; player 2: 3.
        assert_eq!(stats.evaluated, 5);
        assert_eq!(stats.full, 12);
    }
}
