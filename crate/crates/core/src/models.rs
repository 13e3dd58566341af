//! Builders that turn application data into edge characteristic functions.
//!
//! Route models credit a route's value to an edge set `F` when the route's
//! edges are contained in `F` (the default) or, in strict mode, exactly equal
//! to `F`. Under containment the lifted game is a non-negative combination of
//! unanimity games on route node sets, which gives the closed form in
//! [`RouteWeight::closed_form`].

use std::collections::HashMap;
use std::fmt;

use crate::edge::EdgeCharacteristic;
use crate::error::{Error, Result};
use crate::game::Allocation;
use crate::graph::{Graph, Route};
use crate::sets::{Coalition, EdgeSet};
use crate::worth::{Rational, Worth};

pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Semantics {
    /// Route counts toward `F` when its edges are a subset of `F`.
    #[default]
    Containment,
    /// Route counts toward `F` only when its edge set equals `F`.
    StrictEquality,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Containment => "containment",
            Semantics::StrictEquality => "strict-equality",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostDecayParams {
    alpha: f64,
    pub semantics: Semantics,
}

impl Default for CostDecayParams {
    fn default() -> Self {
        CostDecayParams {
            alpha: DEFAULT_ALPHA,
            semantics: Semantics::Containment,
        }
    }
}

impl CostDecayParams {
    pub fn new(alpha: f64, semantics: Semantics) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        Ok(CostDecayParams { alpha, semantics })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `quantity · exp(−alpha · cost)`.
pub fn decayed_value(quantity: f64, alpha: f64, cost: f64) -> f64 {
    quantity * (-alpha * cost).exp()
}

/// One route of a route model with its edge set and value.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteTerm<V> {
    pub nodes: Coalition,
    pub edges: EdgeSet,
    /// Total cost of the route's edges.
    pub cost: f64,
    pub value: V,
}

/// Edge characteristic `F ↦ Σ_r value_r · [E_r ⊆ F]` (or `[E_r = F]`).
#[derive(Clone, Debug, PartialEq)]
pub struct RouteWeight<V> {
    universe: usize,
    terms: Vec<RouteTerm<V>>,
    semantics: Semantics,
}

impl<V: Worth> RouteWeight<V> {
    fn build<F>(g: &Graph, routes: &[Coalition], semantics: Semantics, mut value: F) -> Result<Self>
    where
        F: FnMut(usize, f64) -> V,
    {
        let mut terms = Vec::with_capacity(routes.len());
        for (r, &nodes) in routes.iter().enumerate() {
            if !nodes.is_subset_of(g.all_nodes()) {
                return Err(Error::InvalidRoute(format!("route {r} references unknown nodes")));
            }
            let cost = g.route_cost(&Route::from_coalition(nodes, 0.0)?)?;
            let edges = g.induced_edges(nodes);
            terms.push(RouteTerm {
                nodes,
                edges,
                cost,
                value: value(r, cost),
            });
        }
        Ok(RouteWeight {
            universe: g.edge_count(),
            terms,
            semantics,
        })
    }

    pub fn terms(&self) -> &[RouteTerm<V>] {
        &self.terms
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// Sum of all route values.
    pub fn total_route_value(&self) -> V {
        self.terms
            .iter()
            .fold(V::zero(), |acc, t| acc + t.value.clone())
    }

    /// Edge-based Shapley value in closed form: each route's value split
    /// evenly over its nodes.
    ///
    /// Requires containment semantics, and every route node must be an
    /// endpoint of one of the route's own edges.
    pub fn closed_form(&self, g: &Graph) -> Result<Allocation<V>> {
        if self.semantics != Semantics::Containment {
            return Err(Error::InvalidArgument(
                "closed form needs containment semantics".into(),
            ));
        }
        let mut values = vec![V::zero(); g.node_count()];
        for term in &self.terms {
            let covered = g.endpoints_of(&term.edges);
            if covered != term.nodes {
                let stray = term.nodes.difference(covered);
                return Err(Error::InvalidRoute(format!(
                    "route nodes {{{}}} have no edge inside the route",
                    g.labels_of(stray).join(",")
                )));
            }
            let share = term
                .value
                .mul_rational(&Rational::new(1.into(), (term.nodes.len() as i64).into()));
            for i in term.nodes.members() {
                values[i] += share.clone();
            }
        }
        Ok(Allocation::new(values))
    }
}

impl<V: Worth> EdgeCharacteristic for RouteWeight<V> {
    type Worth = V;

    fn edge_count(&self) -> usize {
        self.universe
    }

    fn worth(&self, edges: &EdgeSet) -> V {
        let counts = |t: &&RouteTerm<V>| match self.semantics {
            Semantics::Containment => t.edges.is_subset_of(edges),
            Semantics::StrictEquality => t.edges == *edges,
        };
        self.terms
            .iter()
            .filter(counts)
            .fold(V::zero(), |acc, t| acc + t.value.clone())
    }
}

/// Supply model: each route is worth `q_r · exp(−alpha · c_r)`, where `c_r`
/// is the total cost of the edges induced by the route's nodes.
pub fn supply_weight_fn(g: &Graph, routes: &[Route], params: CostDecayParams) -> Result<RouteWeight<f64>> {
    let nodes: Vec<Coalition> = routes.iter().map(|r| r.nodes).collect();
    RouteWeight::build(g, &nodes, params.semantics, |r, cost| {
        decayed_value(routes[r].quantity, params.alpha, cost)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractRoute {
    pub nodes: Coalition,
    pub contracts: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractRouteTable {
    pub routes: Vec<ContractRoute>,
}

impl ContractRouteTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn route<I, S>(mut self, g: &Graph, labels: I, contracts: u64) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let nodes = g.coalition_of(labels)?;
        self.routes.push(ContractRoute { nodes, contracts });
        Ok(self)
    }

    pub fn total_contracts(&self) -> u64 {
        self.routes.iter().map(|r| r.contracts).sum()
    }
}

/// Contract model: each contract route is worth its contract count.
pub fn contract_weight_fn(
    g: &Graph,
    table: &ContractRouteTable,
    semantics: Semantics,
) -> Result<RouteWeight<Rational>> {
    let nodes: Vec<Coalition> = table.routes.iter().map(|r| r.nodes).collect();
    RouteWeight::build(g, &nodes, semantics, |r, _| {
        Rational::from_i64(table.routes[r].contracts as i64)
    })
}

/// `F ↦ |F|^exponent`, in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWeight {
    universe: usize,
    exponent: u32,
}

pub fn power_weight_fn(g: &Graph, exponent: u32) -> Result<PowerWeight> {
    if exponent == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    Ok(PowerWeight {
        universe: g.edge_count(),
        exponent,
    })
}

impl EdgeCharacteristic for PowerWeight {
    type Worth = Rational;

    fn edge_count(&self) -> usize {
        self.universe
    }

    fn worth(&self, edges: &EdgeSet) -> Rational {
        let base = num_bigint::BigInt::from(edges.len());
        Rational::from_integer(num_traits::pow(base, self.exponent as usize))
    }
}

/// Explicit worth table over edge subsets; unlisted subsets are worth zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitTable<V> {
    universe: usize,
    entries: HashMap<EdgeSet, V>,
}

impl<V: Worth> ExplicitTable<V> {
    pub fn new(universe: usize) -> Self {
        ExplicitTable {
            universe,
            entries: HashMap::new(),
        }
    }

    pub fn set(&mut self, edges: EdgeSet, value: V) -> Result<()> {
        if edges.universe() != self.universe {
            return Err(Error::InvalidArgument(format!(
                "edge set over {} edges used in a table over {}",
                edges.universe(),
                self.universe
            )));
        }
        self.entries.insert(edges, value);
        Ok(())
    }

    pub fn with(mut self, edges: EdgeSet, value: V) -> Result<Self> {
        self.set(edges, value)?;
        Ok(self)
    }

    /// Table with an entry for every edge subset, from a mask-indexed vector.
    pub fn from_masks(universe: usize, values: Vec<V>) -> Result<Self> {
        if universe > 24 || values.len() != 1 << universe {
            return Err(Error::InvalidArgument(format!(
                "dense table over {universe} edges needs 2^{universe} values"
            )));
        }
        let mut table = Self::new(universe);
        for (mask, value) in values.into_iter().enumerate() {
            let set = EdgeSet::from_indices(universe, Coalition::from_bits(mask as u64).members());
            table.entries.insert(set, value);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&EdgeSet, &V)> {
        self.entries.iter()
    }
}

impl<V: Worth> EdgeCharacteristic for ExplicitTable<V> {
    type Worth = V;

    fn edge_count(&self) -> usize {
        self.universe
    }

    fn worth(&self, edges: &EdgeSet) -> V {
        self.entries.get(edges).cloned().unwrap_or_else(V::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::{edge_shapley, EdgeGame};
    use crate::game::ShapleyEngine;

    fn chain(ac_cost: f64) -> Graph {
        Graph::builder()
            .nodes(["A", "B", "C", "D", "E"])
            .edge("A", "C", ac_cost)
            .edge("B", "C", 1.0)
            .edge("C", "D", 1.0)
            .edge("D", "E", 1.0)
            .build()
            .unwrap()
    }

    fn chain_routes(g: &Graph) -> Vec<Route> {
        vec![
            Route::new(g, ["A", "C", "D", "E"], 8.0).unwrap(),
            Route::new(g, ["B", "C", "D", "E"], 8.0).unwrap(),
            Route::new(g, ["A", "B", "C", "D", "E"], 15.0).unwrap(),
        ]
    }

    #[test]
    fn supply_worth_examples() {
        let g = chain(1.0);
        let w = supply_weight_fn(&g, &chain_routes(&g), CostDecayParams::default()).unwrap();
        let all = EdgeSet::full(4);
        let expected = 16.0 * (-0.3f64).exp() + 15.0 * (-0.4f64).exp();
        assert!((w.worth(&all) - expected).abs() < 1e-12);
        assert!((w.worth(&all) - 21.908).abs() < 1e-3);
        assert_eq!(w.worth(&EdgeSet::empty(4)), 0.0);
        let acde = g.induced_edges(g.coalition_of(["A", "C", "D", "E"]).unwrap());
        assert!((w.worth(&acde) - 8.0 * (-0.3f64).exp()).abs() < 1e-12);
        assert!((w.worth(&acde) - 5.927).abs() < 1e-3);
    }

    #[test]
    fn strict_semantics_matches_exact_sets_only() {
        let g = chain(1.0);
        let params = CostDecayParams::new(0.1, Semantics::StrictEquality).unwrap();
        let w = supply_weight_fn(&g, &chain_routes(&g), params).unwrap();
        assert!((w.worth(&EdgeSet::full(4)) - 15.0 * (-0.4f64).exp()).abs() < 1e-12);
        assert!(w.closed_form(&g).is_err());
    }

    #[test]
    fn closed_form_reproduces_chain_cases() {
        let g = chain(1.0);
        let w = supply_weight_fn(&g, &chain_routes(&g), CostDecayParams::default()).unwrap();
        let cf = w.closed_form(&g).unwrap();
        let a = 8.0 * (-0.3f64).exp() / 4.0 + 15.0 * (-0.4f64).exp() / 5.0;
        assert!((cf[0] - a).abs() < 1e-12);
        assert!((cf[0] - 3.4926).abs() < 1e-4);

        let g = chain(4.0);
        let w = supply_weight_fn(&g, &chain_routes(&g), CostDecayParams::default()).unwrap();
        let cf = w.closed_form(&g).unwrap();
        for (got, want) in cf.iter().zip([2.587, 2.971, 4.069, 4.069, 4.069]) {
            assert!((got - want).abs() < 2e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn closed_form_rejects_uncovered_route_node() {
        // B is in the route but no route edge touches it.
        let g = Graph::builder()
            .nodes(["A", "B", "C"])
            .edge("A", "C", 1.0)
            .edge("B", "C", 1.0)
            .build()
            .unwrap();
        let g2 = g.without_edge(1);
        let r = Route::new(&g2, ["A", "B", "C"], 1.0).unwrap();
        let w = supply_weight_fn(&g2, &[r], CostDecayParams::default()).unwrap();
        assert!(matches!(w.closed_form(&g2), Err(Error::InvalidRoute(_))));
    }

    #[test]
    fn contract_examples() {
        let g = Graph::builder()
            .nodes(["A", "B", "P"])
            .edge("A", "P", 1.0)
            .edge("B", "P", 1.0)
            .build()
            .unwrap();
        let table = ContractRouteTable::new()
            .route(&g, ["A", "P"], 3)
            .unwrap()
            .route(&g, ["A", "B", "P"], 5)
            .unwrap();
        let w = contract_weight_fn(&g, &table, Semantics::Containment).unwrap();
        assert_eq!(w.worth(&EdgeSet::from_indices(2, [0])), Rational::from_i64(3));
        assert_eq!(w.worth(&EdgeSet::full(2)), Rational::from_i64(8));

        let empty = contract_weight_fn(&g, &ContractRouteTable::new(), Semantics::Containment).unwrap();
        assert_eq!(empty.worth(&EdgeSet::full(2)), Rational::from_i64(0));
    }

    #[test]
    fn power_weight_values() {
        let g = chain(1.0);
        let w = power_weight_fn(&g, 2).unwrap();
        assert_eq!(w.worth(&EdgeSet::from_indices(4, [0, 1, 3])), Rational::from_i64(9));
        assert_eq!(w.worth(&EdgeSet::empty(4)), Rational::from_i64(0));
        assert!(power_weight_fn(&g, 0).is_err());
    }

    #[test]
    fn alpha_validation_and_limits() {
        assert!(CostDecayParams::new(0.0, Semantics::Containment).is_err());
        assert!(CostDecayParams::new(f64::NAN, Semantics::Containment).is_err());
        assert!((decayed_value(8.0, 1e-12, 3.0) - 8.0).abs() < 1e-9);
        assert!(decayed_value(8.0, 0.2, 3.0) < decayed_value(8.0, 0.1, 3.0));
        assert!(decayed_value(8.0, 0.1, 4.0) < decayed_value(8.0, 0.1, 3.0));
    }

    #[test]
    fn explicit_table_defaults_to_zero() {
        let g = Graph::builder().nodes(["a", "b"]).edge("a", "b", 1.0).build().unwrap();
        let table = ExplicitTable::new(1)
            .with(EdgeSet::full(1), Rational::from_i64(6))
            .unwrap();
        assert!(ExplicitTable::<Rational>::new(1).with(EdgeSet::full(2), Rational::from_i64(1)).is_err());
        let eg = EdgeGame::new(g, table).unwrap();
        let alloc = edge_shapley(&ShapleyEngine::new(), &eg).unwrap();
        assert_eq!(alloc.values(), &[Rational::from_i64(3), Rational::from_i64(3)]);
    }
}
