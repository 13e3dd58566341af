//! Node-coalition games and the classical allocation engines.

mod axioms;
mod myerson;
mod sampling;
mod shapley;

use std::marker::PhantomData;
use std::ops::Index;

pub use axioms::{
    axiom_check, check_additivity, detect_null_players, detect_symmetric_pairs, Axiom, CheckResult,
    Witness, APPROX_TOLERANCE, EXHAUSTIVE_DETECTION_LIMIT,
};
pub use myerson::{myerson, ComponentLift, GraphGame};
pub use sampling::{shapley_sampled, shapley_sampled_with, SAMPLE_CHUNK};
pub use shapley::{shapley_exact, shapley_weights, PruneStats, ShapleyEngine, DEFAULT_MAX_PLAYERS};

use crate::error::{Error, Result};
use crate::sets::Coalition;
use crate::worth::Worth;

/// A characteristic function on coalitions of `players()` players.
///
/// Implementations must be deterministic and free of side effects: the
/// engines evaluate coalitions from several threads, in any order.
pub trait Characteristic: Sync {
    type Worth: Worth;

    fn players(&self) -> usize;

    fn worth(&self, coalition: Coalition) -> Self::Worth;
}

impl<C: Characteristic + ?Sized> Characteristic for &C {
    type Worth = C::Worth;

    fn players(&self) -> usize {
        (**self).players()
    }

    fn worth(&self, coalition: Coalition) -> Self::Worth {
        (**self).worth(coalition)
    }
}

impl<C: Characteristic + ?Sized + Send> Characteristic for Box<C> {
    type Worth = C::Worth;

    fn players(&self) -> usize {
        (**self).players()
    }

    fn worth(&self, coalition: Coalition) -> Self::Worth {
        (**self).worth(coalition)
    }
}

/// A game backed by a closure.
pub struct FnGame<V, F> {
    players: usize,
    f: F,
    _worth: PhantomData<fn() -> V>,
}

impl<V, F> FnGame<V, F>
where
    V: Worth,
    F: Fn(Coalition) -> V + Sync,
{
    pub fn new(players: usize, f: F) -> Self {
        FnGame {
            players,
            f,
            _worth: PhantomData,
        }
    }
}

impl<V, F> Characteristic for FnGame<V, F>
where
    V: Worth,
    F: Fn(Coalition) -> V + Sync,
{
    type Worth = V;

    fn players(&self) -> usize {
        self.players
    }

    fn worth(&self, coalition: Coalition) -> V {
        (self.f)(coalition)
    }
}

/// A game given by its full worth table, indexed by coalition mask.
#[derive(Clone, Debug, PartialEq)]
pub struct TableGame<V> {
    players: usize,
    table: Vec<V>,
}

impl<V: Worth> TableGame<V> {
    pub fn new(players: usize, table: Vec<V>) -> Result<Self> {
        if players > 24 || table.len() != 1 << players {
            return Err(Error::InvalidArgument(format!(
                "a worth table for {players} players needs 2^{players} entries, got {}",
                table.len()
            )));
        }
        Ok(TableGame { players, table })
    }

    /// Tabulates any characteristic function.
    pub fn tabulate<C: Characteristic<Worth = V>>(game: &C) -> Result<Self> {
        let n = game.players();
        let table = Coalition::full(n).subsets().map(|s| game.worth(s)).collect();
        Self::new(n, table)
    }
}

impl<V: Worth> Characteristic for TableGame<V> {
    type Worth = V;

    fn players(&self) -> usize {
        self.players
    }

    fn worth(&self, coalition: Coalition) -> V {
        self.table[coalition.bits() as usize].clone()
    }
}

/// Pointwise sum of two games over the same players.
pub struct SumGame<A, B>(pub A, pub B);

impl<A, B> Characteristic for SumGame<A, B>
where
    A: Characteristic,
    B: Characteristic<Worth = A::Worth>,
{
    type Worth = A::Worth;

    fn players(&self) -> usize {
        self.0.players()
    }

    fn worth(&self, coalition: Coalition) -> A::Worth {
        self.0.worth(coalition) + self.1.worth(coalition)
    }
}

/// Per-player values in canonical node order.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation<V> {
    values: Vec<V>,
}

impl<V: Worth> Allocation<V> {
    pub fn new(values: Vec<V>) -> Self {
        Allocation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, V> {
        self.values.iter()
    }

    pub fn total(&self) -> V {
        self.values.iter().fold(V::zero(), |acc, v| acc + v.clone())
    }

    /// Sum over the members of `s`.
    pub fn total_over(&self, s: Coalition) -> V {
        s.members().fold(V::zero(), |acc, i| acc + self.values[i].clone())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Worth::to_f64).collect()
    }

    /// Largest absolute componentwise difference, in binary64.
    pub fn max_abs_diff<W: Worth>(&self, other: &Allocation<W>) -> f64 {
        assert_eq!(self.len(), other.len(), "allocations differ in length");
        self.values
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Allocation<V>) -> Allocation<V> {
        assert_eq!(self.len(), other.len(), "allocations differ in length");
        Allocation::new(
            self.values
                .iter()
                .zip(other.values())
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<V> Index<usize> for Allocation<V> {
    type Output = V;

    fn index(&self, i: usize) -> &V {
        &self.values[i]
    }
}

impl<V> IntoIterator for Allocation<V> {
    type Item = V;
    type IntoIter = std::vec::IntoIter<V>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.into_iter()
    }
}
