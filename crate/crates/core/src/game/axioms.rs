//! Checks of the Shapley axioms against a computed allocation.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Allocation, Characteristic, FnGame, ShapleyEngine};
use crate::error::{Error, Result};
use crate::sets::Coalition;
use crate::worth::Worth;

/// Up to this many players, symmetric pairs and null players are detected by
/// visiting every coalition; above it, by a seeded spot-check.
pub const EXHAUSTIVE_DETECTION_LIMIT: usize = 12;

const SPOT_CHECKS: usize = 512;
const SPOT_SEED: u64 = 0x5eed_5a3d;

/// Relative tolerance used for binary64 allocations.
pub const APPROX_TOLERANCE: f64 = 1e-9;
const DETECTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Efficiency,
    Symmetry,
    NullPlayer,
    Additivity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Efficiency => "efficiency",
            Axiom::Symmetry => "symmetry",
            Axiom::NullPlayer => "null-player",
            Axiom::Additivity => "additivity",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub players: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub axiom: Axiom,
    pub passed: bool,
    pub detail: String,
    pub witnesses: Vec<Witness>,
}

/// Coalitions of `universe` visited when testing a property: all of them for
/// small games, a deterministic random sample otherwise.
fn probe_coalitions(universe: Coalition, n: usize) -> Vec<Coalition> {
    if n <= EXHAUSTIVE_DETECTION_LIMIT {
        return universe.subsets().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED ^ universe.bits());
    let mut out = vec![Coalition::EMPTY, universe];
    out.extend((0..SPOT_CHECKS).map(|_| Coalition::from_bits(rng.gen::<u64>() & universe.bits())));
    out
}

/// Pairs `(i, j)`, `i < j`, with `v(S∪{i}) = v(S∪{j})` for every probed
/// `S ⊆ N∖{i,j}`.
pub fn detect_symmetric_pairs<C: Characteristic>(game: &C) -> Vec<(usize, usize)> {
    let n = game.players();
    let full = Coalition::full(n);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rest = full.without(i).without(j);
            let symmetric = probe_coalitions(rest, n).into_iter().all(|s| {
                game.worth(s.with(i))
                    .approx_eq(&game.worth(s.with(j)), DETECTION_TOLERANCE)
            });
            if symmetric {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Players whose every probed marginal contribution is zero.
pub fn detect_null_players<C: Characteristic>(game: &C) -> Vec<usize> {
    let n = game.players();
    let full = Coalition::full(n);
    (0..n)
        .filter(|&i| {
            probe_coalitions(full.without(i), n)
                .into_iter()
                .all(|s| game.worth(s.with(i)).approx_eq(&game.worth(s), DETECTION_TOLERANCE))
        })
        .collect()
}

fn close<V: Worth>(a: &V, b: &V) -> bool {
    a.approx_eq(b, APPROX_TOLERANCE)
}

/// Checks one axiom of `allocation` against `game`.
///
/// Additivity is tested by splitting the game by coalition-size parity,
/// solving both halves, and comparing their sum with `allocation`.
pub fn axiom_check<C: Characteristic>(
    game: &C,
    allocation: &Allocation<C::Worth>,
    axiom: Axiom,
) -> Result<CheckResult> {
    let n = game.players();
    if allocation.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: allocation.len(),
        });
    }
    let result = match axiom {
        Axiom::Efficiency => {
            let total = allocation.total();
            let grand = game.worth(Coalition::full(n));
            let passed = close(&total, &grand);
            CheckResult {
                axiom,
                passed,
                detail: format!("sum = {}, v(N) = {}", total.render(), grand.render()),
                witnesses: Vec::new(),
            }
        }
        Axiom::Symmetry => {
            let pairs = detect_symmetric_pairs(game);
            let witnesses: Vec<Witness> = pairs
                .iter()
                .map(|&(i, j)| Witness {
                    players: vec![i, j],
                    detail: format!("{} vs {}", allocation[i].render(), allocation[j].render()),
                })
                .collect();
            let failed = pairs
                .iter()
                .filter(|&&(i, j)| !close(&allocation[i], &allocation[j]))
                .count();
            CheckResult {
                axiom,
                passed: failed == 0,
                detail: format!("{} interchangeable pairs, {failed} unequal", pairs.len()),
                witnesses,
            }
        }
        Axiom::NullPlayer => {
            let nulls = detect_null_players(game);
            let zero = C::Worth::zero();
            let witnesses: Vec<Witness> = nulls
                .iter()
                .map(|&i| Witness {
                    players: vec![i],
                    detail: allocation[i].render(),
                })
                .collect();
            let failed = nulls.iter().filter(|&&i| !close(&allocation[i], &zero)).count();
            CheckResult {
                axiom,
                passed: failed == 0,
                detail: format!("{} null players, {failed} non-zero", nulls.len()),
                witnesses,
            }
        }
        Axiom::Additivity => {
            let even = FnGame::new(n, |s: Coalition| {
                if s.len().is_multiple_of(2) { game.worth(s) } else { C::Worth::zero() }
            });
            let odd = FnGame::new(n, |s: Coalition| {
                if s.len() % 2 == 1 { game.worth(s) } else { C::Worth::zero() }
            });
            let engine = ShapleyEngine::new();
            let parts = engine.exact(&even)?;
            let rest = engine.exact(&odd)?;
            compare_sum(axiom, allocation, &parts, &rest)
        }
    };
    Ok(result)
}

/// Additivity over a caller-supplied pair: `Sh(v + w) = Sh(v) + Sh(w)`.
pub fn check_additivity<A, B>(engine: &ShapleyEngine, v: &A, w: &B) -> Result<CheckResult>
where
    A: Characteristic,
    B: Characteristic<Worth = A::Worth>,
{
    let sum = engine.exact(&super::SumGame(v, w))?;
    let left = engine.exact(v)?;
    let right = engine.exact(w)?;
    Ok(compare_sum(Axiom::Additivity, &sum, &left, &right))
}

fn compare_sum<V: Worth>(
    axiom: Axiom,
    whole: &Allocation<V>,
    left: &Allocation<V>,
    right: &Allocation<V>,
) -> CheckResult {
    let witnesses: Vec<Witness> = (0..whole.len())
        .filter(|&i| !close(&whole[i], &(left[i].clone() + right[i].clone())))
        .map(|i| Witness {
            players: vec![i],
            detail: format!(
                "{} vs {} + {}",
                whole[i].render(),
                left[i].render(),
                right[i].render()
            ),
        })
        .collect();
    CheckResult {
        axiom,
        passed: witnesses.is_empty(),
        detail: format!("{} mismatched components", witnesses.len()),
        witnesses,
    }
}
