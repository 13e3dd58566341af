//! Edge-based graph games.
//!
//! An [`EdgeGame`] pairs a graph with a characteristic function on subsets of
//! its edges. Lifting it gives the node game `S ↦ w(edges inside S)`, whose
//! Shapley value is the edge-based Shapley value. This module also holds the
//! neighbourhood-pruned computation, edge deletion, the bridge from node
//! games (under which the edge-based value reproduces the Myerson value), and
//! the component-efficiency and fairness checkers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Allocation, Characteristic, GraphGame, PruneStats, ShapleyEngine};
use crate::graph::{Graph, NodeIndex};
use crate::sets::{Coalition, EdgeSet};
use crate::worth::{Rational, Worth};
use crate::game::shapley_weights;

/// A characteristic function on subsets of an edge universe `0..edge_count()`.
///
/// Must be deterministic and side-effect free, with worth zero on the empty set.
pub trait EdgeCharacteristic: Sync {
    type Worth: Worth;

    fn edge_count(&self) -> usize;

    fn worth(&self, edges: &EdgeSet) -> Self::Worth;
}

impl<W: EdgeCharacteristic + ?Sized> EdgeCharacteristic for &W {
    type Worth = W::Worth;

    fn edge_count(&self) -> usize {
        (**self).edge_count()
    }

    fn worth(&self, edges: &EdgeSet) -> Self::Worth {
        (**self).worth(edges)
    }
}

impl<W: EdgeCharacteristic + ?Sized + Send> EdgeCharacteristic for Box<W> {
    type Worth = W::Worth;

    fn edge_count(&self) -> usize {
        (**self).edge_count()
    }

    fn worth(&self, edges: &EdgeSet) -> Self::Worth {
        (**self).worth(edges)
    }
}

pub struct EdgeGame<W> {
    graph: Graph,
    w: W,
}

impl<W: EdgeCharacteristic> EdgeGame<W> {
    pub fn new(graph: Graph, w: W) -> Result<Self> {
        if w.edge_count() != graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: graph.edge_count(),
                actual: w.edge_count(),
            });
        }
        if !w.worth(&EdgeSet::empty(graph.edge_count())).is_zero() {
            return Err(Error::NonZeroEmpty);
        }
        Ok(EdgeGame { graph, w })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn characteristic(&self) -> &W {
        &self.w
    }

    pub fn players(&self) -> usize {
        self.graph.node_count()
    }

    /// The induced node game `S ↦ w(induced_edges(S))`.
    pub fn lift(&self) -> Lifted<'_, W> {
        Lifted {
            graph: &self.graph,
            w: &self.w,
        }
    }

    /// Worth of the full edge set.
    pub fn total_worth(&self) -> W::Worth {
        self.w.worth(&EdgeSet::full(self.graph.edge_count()))
    }

    /// The game on `E ∖ {e}` whose characteristic ignores `e`: `F ↦ w(F ∖ {e})`.
    pub fn delete_edge(&self, edge: usize) -> Result<EdgeGame<WithoutEdge<&W>>> {
        if edge >= self.graph.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "edge index {edge} out of range (graph has {} edges)",
                self.graph.edge_count()
            )));
        }
        let graph = self.graph.without_edge(edge);
        let w = WithoutEdge {
            inner: &self.w,
            universe: self.graph.edge_count(),
            old_index: (0..self.graph.edge_count()).filter(|&k| k != edge).collect(),
        };
        Ok(EdgeGame { graph, w })
    }

    pub fn delete_edge_by_label(&self, a: &str, b: &str) -> Result<EdgeGame<WithoutEdge<&W>>> {
        let k = self.graph.find_edge_by_label(a, b)?;
        self.delete_edge(k)
    }
}

pub struct Lifted<'a, W> {
    graph: &'a Graph,
    w: &'a W,
}

impl<W: EdgeCharacteristic> Characteristic for Lifted<'_, W> {
    type Worth = W::Worth;

    fn players(&self) -> usize {
        self.graph.node_count()
    }

    fn worth(&self, coalition: Coalition) -> W::Worth {
        self.w.worth(&self.graph.induced_edges(coalition))
    }
}

/// Characteristic of a game after one edge was deleted: subsets of the
/// remaining edges are mapped back to the original universe.
pub struct WithoutEdge<W> {
    inner: W,
    universe: usize,
    old_index: Vec<usize>,
}

impl<W: EdgeCharacteristic> EdgeCharacteristic for WithoutEdge<W> {
    type Worth = W::Worth;

    fn edge_count(&self) -> usize {
        self.old_index.len()
    }

    fn worth(&self, edges: &EdgeSet) -> W::Worth {
        let original = EdgeSet::from_indices(self.universe, edges.iter().map(|k| self.old_index[k]));
        self.inner.worth(&original)
    }
}

/// Edge-based Shapley value by full enumeration of the lifted game.
pub fn edge_shapley<W: EdgeCharacteristic>(
    engine: &ShapleyEngine,
    eg: &EdgeGame<W>,
) -> Result<Allocation<W::Worth>> {
    engine.exact(&eg.lift())
}

/// Edge-based Shapley value skipping, for each node, every coalition that
/// contains none of its neighbours. Those marginals vanish because adding a
/// node without neighbours in `S` adds no edge inside `S`.
pub fn edge_shapley_pruned<W: EdgeCharacteristic>(
    engine: &ShapleyEngine,
    eg: &EdgeGame<W>,
) -> Result<(Allocation<W::Worth>, PruneStats)> {
    let neighbors: Vec<Coalition> = (0..eg.players()).map(|i| eg.graph.neighbors(i)).collect();
    engine.exact_pruned(&eg.lift(), &neighbors)
}

/// Endpoint allocation changes from deleting edge `edge = (i, j)`:
/// `(ESh_i(E, w) - ESh_i(E∖e, w_e), ESh_j(E, w) - ESh_j(E∖e, w_e))`.
pub fn fairness_delta<W: EdgeCharacteristic>(
    engine: &ShapleyEngine,
    eg: &EdgeGame<W>,
    edge: usize,
) -> Result<(W::Worth, W::Worth)> {
    let deleted = eg.delete_edge(edge)?;
    let before = edge_shapley(engine, eg)?;
    let after = edge_shapley(engine, &deleted)?;
    let e = eg.graph.edge(edge);
    Ok((
        before[e.from].clone() - after[e.from].clone(),
        before[e.to].clone() - after[e.to].clone(),
    ))
}

/// Edge game whose worth on `F` sums `v` over the node sets of the connected
/// groups formed by `F`. Its lift is the graph-restricted game of `v`
/// whenever `v` vanishes on singletons.
pub struct BridgeCharacteristic<'a, C> {
    graph: &'a Graph,
    v: &'a C,
}

impl<C: Characteristic> EdgeCharacteristic for BridgeCharacteristic<'_, C> {
    type Worth = C::Worth;

    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn worth(&self, edges: &EdgeSet) -> C::Worth {
        self.graph
            .edge_components(edges)
            .into_iter()
            .fold(C::Worth::zero(), |acc, group| acc + self.v.worth(group))
    }
}

/// Builds the edge game whose edge-based Shapley value equals the Myerson
/// value of `gg`. Requires `v({i}) = 0` for every player.
pub fn myerson_bridge<C: Characteristic>(
    gg: &GraphGame<C>,
) -> Result<EdgeGame<BridgeCharacteristic<'_, C>>> {
    let graph = gg.graph();
    let v = gg.characteristic();
    if !v.worth(Coalition::EMPTY).is_zero() {
        return Err(Error::NonZeroEmpty);
    }
    if let Some(i) = (0..graph.node_count()).find(|&i| !v.worth(Coalition::singleton(i)).is_zero()) {
        return Err(Error::NotZeroNormalized(graph.label(i).to_string()));
    }
    EdgeGame::new(graph.clone(), BridgeCharacteristic { graph, v })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentEfficiency<V> {
    pub component: Coalition,
    pub allocated: V,
    pub worth: V,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport<V> {
    pub allocation: Allocation<V>,
    pub components: Vec<ComponentEfficiency<V>>,
    /// `w^N(S ∪ T) = w^N(S) + w^N(T)` held on every probed disjoint pair.
    pub node_additive: bool,
    /// A disjoint pair violating node additivity, when one was found.
    pub node_additivity_witness: Option<(Coalition, Coalition)>,
    /// `w(F) = Σ_{e ∈ F} w({e})` held on every probed edge subset. This is
    /// sufficient for component efficiency.
    pub edge_additive: bool,
    /// Whether the additivity probes covered every case.
    pub exhaustive: bool,
}

impl<V> ComponentReport<V> {
    pub fn all_match(&self) -> bool {
        self.components.iter().all(|c| c.matches)
    }
}

/// Node-additivity pairs are enumerated exhaustively up to this many players.
pub const NODE_ADDITIVITY_EXHAUSTIVE: usize = 10;
/// Edge-additivity subsets are enumerated exhaustively up to this many edges.
pub const EDGE_ADDITIVITY_EXHAUSTIVE: usize = 16;
const ADDITIVITY_SAMPLES: usize = 4096;

/// Compares, per connected component, the summed edge-based Shapley value
/// with the component's worth, and probes the additivity hypotheses.
pub fn component_efficiency_check<W: EdgeCharacteristic>(
    engine: &ShapleyEngine,
    eg: &EdgeGame<W>,
) -> Result<ComponentReport<W::Worth>> {
    let allocation = edge_shapley(engine, eg)?;
    let lifted = eg.lift();
    let components = eg
        .graph
        .connected_components()
        .into_iter()
        .map(|c| {
            let allocated = allocation.total_over(c);
            let worth = lifted.worth(c);
            let matches = allocated.approx_eq(&worth, crate::game::APPROX_TOLERANCE);
            ComponentEfficiency {
                component: c,
                allocated,
                worth,
                matches,
            }
        })
        .collect();

    let n = eg.players();
    let m = eg.graph.edge_count();
    let tol = crate::game::APPROX_TOLERANCE;
    let mut rng = ChaCha8Rng::seed_from_u64(0xadd1_7105);

    let additive_on = |s: Coalition, t: Coalition| {
        lifted
            .worth(s.union(t))
            .approx_eq(&(lifted.worth(s) + lifted.worth(t)), tol)
    };
    let node_additivity_witness = if n <= NODE_ADDITIVITY_EXHAUSTIVE {
        let full = Coalition::full(n);
        full.subsets().find_map(|s| {
            full.difference(s)
                .subsets()
                .find(|&t| !additive_on(s, t))
                .map(|t| (s, t))
        })
    } else {
        let full = full_bits(n);
        (0..ADDITIVITY_SAMPLES).find_map(|_| {
            let s = rng.gen::<u64>() & full;
            let t = rng.gen::<u64>() & full & !s;
            let (s, t) = (Coalition::from_bits(s), Coalition::from_bits(t));
            (!additive_on(s, t)).then_some((s, t))
        })
    };

    let w = &eg.w;
    let singles: Vec<W::Worth> = (0..m)
        .map(|k| w.worth(&EdgeSet::from_indices(m, [k])))
        .collect();
    let edge_additive_on = |f: &EdgeSet| {
        let sum = f.iter().fold(W::Worth::zero(), |acc, k| acc + singles[k].clone());
        w.worth(f).approx_eq(&sum, tol)
    };
    let edge_additive = if m <= EDGE_ADDITIVITY_EXHAUSTIVE {
        Coalition::full(m)
            .subsets()
            .all(|mask| edge_additive_on(&EdgeSet::from_indices(m, mask.members())))
    } else {
        (0..ADDITIVITY_SAMPLES).all(|_| {
            let f = EdgeSet::from_indices(m, (0..m).filter(|_| rng.gen::<bool>()));
            edge_additive_on(&f)
        })
    };

    Ok(ComponentReport {
        allocation,
        components,
        node_additive: node_additivity_witness.is_none(),
        node_additivity_witness,
        edge_additive,
        exhaustive: n <= NODE_ADDITIVITY_EXHAUSTIVE && m <= EDGE_ADDITIVITY_EXHAUSTIVE,
    })
}

fn full_bits(n: usize) -> u64 {
    Coalition::full(n).bits()
}

/// Per-node comparison between the edge-based Shapley value and the sum
/// restricted to coalitions inside the node's neighbourhood.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedSumEntry<V> {
    pub node: NodeIndex,
    pub restricted: V,
    pub full: V,
    pub agrees: bool,
}

/// Evaluates `Σ_{S ⊆ Γ(i)} s!(n-s-1)!/n! · (w^N(S ∪ {i}) - w^N(S))` for
/// every node and compares it with the full value. This restricted sum is a
/// diagnostic only; it generally disagrees with the true value.
pub fn restricted_sum_diagnostic<W: EdgeCharacteristic>(
    engine: &ShapleyEngine,
    eg: &EdgeGame<W>,
) -> Result<Vec<RestrictedSumEntry<W::Worth>>> {
    let full = edge_shapley(engine, eg)?;
    let lifted = eg.lift();
    let weights: Vec<Rational> = shapley_weights(eg.players());
    Ok((0..eg.players())
        .map(|i| {
            let restricted = eg.graph.neighbors(i).subsets().fold(W::Worth::zero(), |acc, s| {
                let marginal = lifted.worth(s.with(i)) - lifted.worth(s);
                acc + marginal.mul_rational(&weights[s.len()])
            });
            let agrees = restricted.approx_eq(&full[i], crate::game::APPROX_TOLERANCE);
            RestrictedSumEntry {
                node: i,
                restricted,
                full: full[i].clone(),
                agrees,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worth::parse_rational;

    struct Squared(usize);

    impl EdgeCharacteristic for Squared {
        type Worth = Rational;

        fn edge_count(&self) -> usize {
            self.0
        }

        fn worth(&self, edges: &EdgeSet) -> Rational {
            Rational::from_i64((edges.len() * edges.len()) as i64)
        }
    }

    fn h_game() -> EdgeGame<Squared> {
        let g = Graph::builder()
            .nodes(["A", "B", "C", "D", "E"])
            .edge("A", "D", 1.0)
            .edge("B", "D", 1.0)
            .edge("C", "E", 1.0)
            .build()
            .unwrap();
        EdgeGame::new(g, Squared(3)).unwrap()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn lift_identities() {
        let eg = h_game();
        let lifted = eg.lift();
        let n = eg.players();
        assert_eq!(lifted.worth(Coalition::EMPTY), q("0"));
        for u in 0..n {
            assert_eq!(lifted.worth(Coalition::singleton(u)), q("0"));
            // Removing u removes exactly its incident edges.
            let mut remaining = EdgeSet::full(eg.graph().edge_count());
            for k in eg.graph().incident_edges(u).iter() {
                remaining.remove(k);
            }
            let without_u = lifted.worth(Coalition::full(n).without(u));
            assert_eq!(without_u, eg.characteristic().worth(&remaining));
        }
        assert_eq!(lifted.worth(Coalition::full(n)), eg.total_worth());
        let abd = eg.graph().coalition_of(["A", "B", "D"]).unwrap();
        assert_eq!(lifted.worth(abd), q("4"));
    }

    #[test]
    fn pruned_skips_isolated_node() {
        let g = Graph::builder()
            .nodes(["a", "b", "x"])
            .edge("a", "b", 1.0)
            .build()
            .unwrap();
        let eg = EdgeGame::new(g, Squared(1)).unwrap();
        let engine = ShapleyEngine::new();
        let (alloc, stats) = edge_shapley_pruned(&engine, &eg).unwrap();
        assert_eq!(alloc.values(), &[q("1/2"), q("1/2"), q("0")]);
        // a and b each see the two coalitions containing the other; x sees none.
        assert_eq!(stats.evaluated, 4);
    }

    #[test]
    fn deletion_ignores_edge() {
        let eg = h_game();
        let deleted = eg.delete_edge_by_label("C", "E").unwrap();
        assert_eq!(deleted.graph().edge_count(), 2);
        assert_eq!(deleted.total_worth(), q("4"));
        assert!(eg.delete_edge(7).is_err());
        assert!(eg.delete_edge_by_label("A", "B").is_err());
    }

    #[test]
    fn single_edge_fairness_is_half() {
        let g = Graph::builder().nodes(["a", "b"]).edge("a", "b", 1.0).build().unwrap();
        let eg = EdgeGame::new(g, Squared(1)).unwrap();
        let (da, db) = fairness_delta(&ShapleyEngine::new(), &eg, 0).unwrap();
        assert_eq!(da, q("1/2"));
        assert_eq!(db, q("1/2"));
    }

    #[test]
    fn restricted_sum_disagrees_on_h() {
        let eg = h_game();
        let diag = restricted_sum_diagnostic(&ShapleyEngine::new(), &eg).unwrap();
        let c = &diag[2];
        assert_eq!(c.restricted, q("1/20"));
        assert_eq!(c.full, q("3/2"));
        assert!(!c.agrees);
    }

    #[test]
    fn nonzero_empty_edge_worth_rejected() {
        struct Constant;
        impl EdgeCharacteristic for Constant {
            type Worth = f64;
            fn edge_count(&self) -> usize {
                0
            }
            fn worth(&self, _: &EdgeSet) -> f64 {
                1.0
            }
        }
        let g = Graph::builder().nodes(["a"]).build().unwrap();
        assert!(matches!(EdgeGame::new(g, Constant), Err(Error::NonZeroEmpty)));
    }
}
