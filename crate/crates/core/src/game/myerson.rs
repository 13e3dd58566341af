//! Myerson value: the Shapley value of the component-decomposed game.

use super::{Allocation, Characteristic, ShapleyEngine};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sets::Coalition;

/// A node game played on a graph.
pub struct GraphGame<C> {
    graph: Graph,
    v: C,
}

impl<C: Characteristic> GraphGame<C> {
    pub fn new(graph: Graph, v: C) -> Result<Self> {
        if v.players() != graph.node_count() {
            return Err(Error::LengthMismatch {
                expected: graph.node_count(),
                actual: v.players(),
            });
        }
        Ok(GraphGame { graph, v })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn characteristic(&self) -> &C {
        &self.v
    }

    /// The graph-restricted game `S ↦ Σ v(T)` over components `T` of `S`.
    pub fn component_lift(&self) -> ComponentLift<'_, C> {
        ComponentLift {
            graph: &self.graph,
            v: &self.v,
        }
    }
}

pub struct ComponentLift<'a, C> {
    graph: &'a Graph,
    v: &'a C,
}

impl<C: Characteristic> Characteristic for ComponentLift<'_, C> {
    type Worth = C::Worth;

    fn players(&self) -> usize {
        self.v.players()
    }

    fn worth(&self, coalition: Coalition) -> C::Worth {
        self.graph
            .components_within(coalition)
            .fold(<C::Worth as crate::worth::Worth>::zero(), |acc, t| acc + self.v.worth(t))
    }
}

pub fn myerson<C: Characteristic>(engine: &ShapleyEngine, gg: &GraphGame<C>) -> Result<Allocation<C::Worth>> {
    engine.exact(&gg.component_lift())
}
