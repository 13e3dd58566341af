//! Immutable graphs with the structural queries every game construction needs.
//!
//! Edges are stored with a direction (flow from supplier to consumer), but
//! containment, adjacency, and connectivity all treat endpoints symmetrically.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::sets::{Coalition, EdgeSet, MAX_PLAYERS};

/// Canonical index of a node: its position in the graph's node order.
pub type NodeIndex = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(NodeId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: NodeIndex,
    pub to: NodeIndex,
    pub cost: f64,
}

impl Edge {
    pub fn endpoints(&self) -> Coalition {
        Coalition::singleton(self.from).with(self.to)
    }

    pub fn touches(&self, u: NodeIndex) -> bool {
        self.from == u || self.to == u
    }

    /// The endpoint opposite `u`, if `u` is an endpoint.
    pub fn other(&self, u: NodeIndex) -> Option<NodeIndex> {
        if self.from == u {
            Some(self.to)
        } else if self.to == u {
            Some(self.from)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    nodes: Vec<NodeId>,
    index: HashMap<String, NodeIndex>,
    edges: Vec<Edge>,
    adjacency: Vec<Coalition>,
}

#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<String>,
    edges: Vec<(String, String, f64)>,
}

impl GraphBuilder {
    pub fn node(mut self, label: impl Into<String>) -> Self {
        self.nodes.push(label.into());
        self
    }

    pub fn nodes<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.nodes.extend(labels.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, from: impl Into<String>, to: impl Into<String>, cost: f64) -> Self {
        self.edges.push((from.into(), to.into(), cost));
        self
    }

    pub fn build(self) -> Result<Graph> {
        if self.nodes.len() > MAX_PLAYERS {
            return Err(Error::TooManyNodes(self.nodes.len()));
        }
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut index = HashMap::with_capacity(self.nodes.len());
        for label in self.nodes {
            let id = NodeId::new(label.clone())?;
            if index.insert(label.clone(), nodes.len()).is_some() {
                return Err(Error::DuplicateNode(label));
            }
            nodes.push(id);
        }

        let mut adjacency = vec![Coalition::EMPTY; nodes.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (from, to, cost) in self.edges {
            let a = *index.get(&from).ok_or_else(|| Error::UnknownNode(from.clone()))?;
            let b = *index.get(&to).ok_or_else(|| Error::UnknownNode(to.clone()))?;
            let invalid = |reason: &str| Error::InvalidEdge {
                from: from.clone(),
                to: to.clone(),
                reason: reason.to_string(),
            };
            if a == b {
                return Err(invalid("self-loops are not allowed"));
            }
            if !cost.is_finite() || cost < 0.0 {
                return Err(invalid("cost must be finite and non-negative"));
            }
            if adjacency[a].contains(b) {
                return Err(Error::DuplicateEdge(from, to));
            }
            adjacency[a] = adjacency[a].with(b);
            adjacency[b] = adjacency[b].with(a);
            edges.push(Edge { from: a, to: b, cost });
        }

        Ok(Graph {
            nodes,
            index,
            edges,
            adjacency,
        })
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn label(&self, u: NodeIndex) -> &str {
        self.nodes[u].as_str()
    }

    pub fn all_nodes(&self) -> Coalition {
        Coalition::full(self.nodes.len())
    }

    pub fn index_of(&self, label: &str) -> Result<NodeIndex> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn coalition_of<I, S>(&self, labels: I) -> Result<Coalition>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels
            .into_iter()
            .try_fold(Coalition::EMPTY, |acc, l| Ok(acc.with(self.index_of(l.as_ref())?)))
    }

    pub fn labels_of(&self, s: Coalition) -> Vec<&str> {
        s.members().map(|i| self.label(i)).collect()
    }

    /// Index of the edge joining `a` and `b` in either orientation.
    pub fn find_edge(&self, a: NodeIndex, b: NodeIndex) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    pub fn find_edge_by_label(&self, a: &str, b: &str) -> Result<usize> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        self.find_edge(ia, ib)
            .ok_or_else(|| Error::UnknownEdge(a.to_string(), b.to_string()))
    }

    /// Nodes joined to `u` by an edge in either orientation.
    pub fn neighbors(&self, u: NodeIndex) -> Coalition {
        self.adjacency[u]
    }

    pub fn neighborhood(&self, label: &str) -> Result<Vec<&str>> {
        let u = self.index_of(label)?;
        Ok(self.labels_of(self.neighbors(u)))
    }

    /// Edges with both endpoints in `s`.
    pub fn induced_edges(&self, s: Coalition) -> EdgeSet {
        let mut set = EdgeSet::empty(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            if s.contains(e.from) && s.contains(e.to) {
                set.insert(k);
            }
        }
        set
    }

    pub fn induced_edges_by_label<I, S>(&self, labels: I) -> Result<Vec<&Edge>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let s = self.coalition_of(labels)?;
        Ok(self.induced_edges(s).iter().map(|k| &self.edges[k]).collect())
    }

    /// Union of endpoints over an edge subset.
    pub fn endpoints_of(&self, f: &EdgeSet) -> Coalition {
        f.iter()
            .fold(Coalition::EMPTY, |acc, k| acc.union(self.edges[k].endpoints()))
    }

    /// Edges incident to `u`.
    pub fn incident_edges(&self, u: NodeIndex) -> EdgeSet {
        EdgeSet::from_indices(
            self.edges.len(),
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.touches(u))
                .map(|(k, _)| k),
        )
    }

    /// Connected components of the whole graph, singletons included, ordered
    /// by their smallest member.
    pub fn connected_components(&self) -> Vec<Coalition> {
        self.components_within(self.all_nodes()).collect()
    }

    /// Connected components of the subgraph induced by `s`.
    pub fn components_within(&self, s: Coalition) -> Components<'_> {
        Components {
            adjacency: &self.adjacency,
            within: s,
            rest: s,
        }
    }

    /// Connected groups of the subgraph formed by the edges in `f` and their
    /// endpoints. Nodes not touched by `f` do not appear.
    pub fn edge_components(&self, f: &EdgeSet) -> Vec<Coalition> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut touched = Coalition::EMPTY;
        for k in f.iter() {
            let e = &self.edges[k];
            touched = touched.union(e.endpoints());
            let (ra, rb) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<(usize, Coalition)> = Vec::new();
        for u in touched.members() {
            let root = find(&mut parent, u);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => *g = g.with(u),
                None => groups.push((root, Coalition::singleton(u))),
            }
        }
        groups.into_iter().map(|(_, g)| g).collect()
    }

    /// Total cost of the edges induced by the route's node set.
    pub fn route_cost(&self, route: &Route) -> Result<f64> {
        let induced = self.induced_edges(route.nodes);
        if induced.is_empty() {
            return Err(Error::DegenerateRoute(self.labels_of(route.nodes).join(",")));
        }
        Ok(induced.iter().map(|k| self.edges[k].cost).sum())
    }

    /// The graph with edge `k` removed; node order is unchanged.
    pub fn without_edge(&self, k: usize) -> Graph {
        let mut g = self.clone();
        let e = g.edges.remove(k);
        g.adjacency[e.from] = g.adjacency[e.from].without(e.to);
        g.adjacency[e.to] = g.adjacency[e.to].without(e.from);
        g
    }

    /// The graph with node `u` and its incident edges removed. Remaining
    /// nodes keep their relative order.
    pub fn without_node(&self, u: NodeIndex) -> Graph {
        let mut builder = Graph::builder();
        for (i, id) in self.nodes.iter().enumerate() {
            if i != u {
                builder = builder.node(id.as_str());
            }
        }
        for e in self.edges.iter().filter(|e| !e.touches(u)) {
            builder = builder.edge(self.label(e.from), self.label(e.to), e.cost);
        }
        builder.build().expect("subgraph of a valid graph is valid")
    }
}

pub struct Components<'a> {
    adjacency: &'a [Coalition],
    within: Coalition,
    rest: Coalition,
}

impl Iterator for Components<'_> {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let start = self.rest.members().next()?;
        let mut component = Coalition::singleton(start);
        let mut frontier = component;
        while let Some(u) = frontier.members().next() {
            frontier = frontier.without(u);
            let fresh = self.adjacency[u]
                .intersection(self.within)
                .difference(component);
            component = component.union(fresh);
            frontier = frontier.union(fresh);
        }
        self.rest = self.rest.difference(component);
        Some(component)
    }
}

/// A supply or contract route: a node set carrying a quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    pub nodes: Coalition,
    pub quantity: f64,
}

impl Route {
    pub fn new<I, S>(graph: &Graph, labels: I, quantity: f64) -> Result<Route>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let nodes = graph.coalition_of(labels)?;
        Route::from_coalition(nodes, quantity)
    }

    pub fn from_coalition(nodes: Coalition, quantity: f64) -> Result<Route> {
        if nodes.len() < 2 {
            return Err(Error::InvalidRoute(format!(
                "a route needs at least two nodes, got {}",
                nodes.len()
            )));
        }
        if !quantity.is_finite() || quantity < 0.0 {
            return Err(Error::InvalidRoute(format!(
                "quantity must be finite and non-negative, got {quantity}"
            )));
        }
        Ok(Route { nodes, quantity })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_graph() -> Graph {
        Graph::builder()
            .nodes(["A", "B", "C", "D", "E"])
            .edge("A", "D", 1.0)
            .edge("B", "D", 1.0)
            .edge("C", "E", 1.0)
            .build()
            .unwrap()
    }

    #[test]
    fn neighborhoods_are_symmetric() {
        let g = h_graph();
        assert_eq!(g.neighborhood("D").unwrap(), vec!["A", "B"]);
        assert_eq!(g.neighborhood("C").unwrap(), vec!["E"]);
        assert_eq!(g.neighborhood("A").unwrap(), vec!["D"]);
        assert_eq!(g.neighborhood("Z"), Err(Error::UnknownNode("Z".into())));
    }

    #[test]
    fn isolated_node_has_empty_neighborhood() {
        let g = Graph::builder().nodes(["X", "Y"]).build().unwrap();
        assert!(g.neighborhood("X").unwrap().is_empty());
    }

    #[test]
    fn induced_edges_examples() {
        let g = h_graph();
        let abd: Vec<(usize, usize)> = g
            .induced_edges_by_label(["A", "B", "D"])
            .unwrap()
            .iter()
            .map(|e| (e.from, e.to))
            .collect();
        assert_eq!(abd, vec![(0, 3), (1, 3)]);
        assert!(g.induced_edges_by_label(["A", "B"]).unwrap().is_empty());
        assert!(g.induced_edges_by_label(["A", "Q"]).is_err());
    }

    #[test]
    fn components_of_h_and_edgeless() {
        let g = h_graph();
        let comps: Vec<Vec<&str>> = g
            .connected_components()
            .into_iter()
            .map(|c| g.labels_of(c))
            .collect();
        assert_eq!(comps, vec![vec!["A", "B", "D"], vec!["C", "E"]]);

        let edgeless = Graph::builder().nodes(["x", "y", "z"]).build().unwrap();
        assert_eq!(edgeless.connected_components().len(), 3);
    }

    #[test]
    fn edge_components_group_touched_nodes() {
        let g = h_graph();
        let f = EdgeSet::from_indices(3, [0, 2]);
        let groups = g.edge_components(&f);
        assert_eq!(groups.len(), 2);
        assert_eq!(g.labels_of(groups[0]), vec!["A", "D"]);
        assert_eq!(g.labels_of(groups[1]), vec!["C", "E"]);
    }

    #[test]
    fn construction_rejects_bad_input() {
        let dup = Graph::builder().nodes(["A", "A"]).build();
        assert_eq!(dup, Err(Error::DuplicateNode("A".into())));
        let rev = Graph::builder()
            .nodes(["A", "B"])
            .edge("A", "B", 1.0)
            .edge("B", "A", 2.0)
            .build();
        assert!(matches!(rev, Err(Error::DuplicateEdge(..))));
        let neg = Graph::builder().nodes(["A", "B"]).edge("A", "B", -1.0).build();
        assert!(matches!(neg, Err(Error::InvalidEdge { .. })));
        let looped = Graph::builder().nodes(["A"]).edge("A", "A", 1.0).build();
        assert!(matches!(looped, Err(Error::InvalidEdge { .. })));
        let unknown = Graph::builder().nodes(["A"]).edge("A", "B", 1.0).build();
        assert_eq!(unknown, Err(Error::UnknownNode("B".into())));
        assert_eq!(Graph::builder().node(" ").build(), Err(Error::EmptyLabel));
        let many = Graph::builder().nodes((0..64).map(|i| i.to_string())).build();
        assert_eq!(many, Err(Error::TooManyNodes(64)));
    }

    #[test]
    fn route_cost_sums_induced_edges() {
        let g = Graph::builder()
            .nodes(["A", "B", "C", "D", "E"])
            .edge("A", "C", 4.0)
            .edge("B", "C", 1.0)
            .edge("C", "D", 1.0)
            .edge("D", "E", 1.0)
            .build()
            .unwrap();
        let r = Route::new(&g, ["A", "C", "D", "E"], 8.0).unwrap();
        assert_eq!(g.route_cost(&r).unwrap(), 6.0);
        let degenerate = Route::new(&g, ["A", "B"], 1.0).unwrap();
        assert!(matches!(g.route_cost(&degenerate), Err(Error::DegenerateRoute(_))));
        assert!(Route::new(&g, ["A"], 1.0).is_err());
        assert!(Route::new(&g, ["A", "C"], -1.0).is_err());
    }

    #[test]
    fn removal_keeps_order() {
        let g = h_graph();
        let g2 = g.without_node(3);
        assert_eq!(g2.labels_of(g2.all_nodes()), vec!["A", "B", "C", "E"]);
        assert_eq!(g2.edge_count(), 1);
        let g3 = g.without_edge(0);
        assert_eq!(g3.neighborhood("D").unwrap(), vec!["B"]);
    }
}
