//! Scenario documents: a graph, a value model, routes, a numeric domain, and
//! optionally the allocation a run is expected to reproduce.
//!
//! ```json
//! { "nodes": ["A", "B"],
//!   "edges": [{"from": "A", "to": "B", "cost": 1.0}],
//!   "model": {"type": "edge_count_power", "exponent": 2},
//!   "routes": [],
//!   "domain": "exact",
//!   "expected": {"A": "1/2", "B": "1/2"} }
//! ```

pub mod fixtures;

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::edge::{EdgeCharacteristic, EdgeGame};
use crate::error::{Error, Result};
use crate::game::Allocation;
use crate::graph::{Graph, NodeIndex, Route};
use crate::models::{
    contract_weight_fn, power_weight_fn, supply_weight_fn, ContractRoute, ContractRouteTable,
    CostDecayParams, ExplicitTable, Semantics, DEFAULT_ALPHA,
};
use crate::sets::{Coalition, EdgeSet, MAX_PLAYERS};
use crate::worth::{format_rational, parse_rational, Domain, Rational, Worth};

/// Absolute tolerance for approx-domain regression against printed values
/// rounded to three decimals.
pub const APPROX_REGRESSION_TOLERANCE: f64 = 2e-3;

// ---- wire format ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Metadata::is_default")]
    metadata: Metadata,
    nodes: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeRecord>,
    model: ModelRecord,
    #[serde(default)]
    routes: Vec<RouteRecord>,
    domain: DomainRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<IndexMap<String, NumberText>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    from: String,
    to: String,
    cost: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum ModelRecord {
    SupplyCostDecay {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default)]
        semantics: SemanticsRecord,
    },
    EdgeCountPower {
        exponent: u32,
    },
    Contract {
        #[serde(default, skip_serializing_if = "SemanticsRecord::is_containment")]
        semantics: SemanticsRecord,
    },
    ExplicitTable {
        table: Vec<TableRecord>,
    },
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SemanticsRecord {
    #[default]
    Containment,
    #[serde(alias = "strict_equality", alias = "strict")]
    StrictEquality,
}

impl SemanticsRecord {
    fn is_containment(&self) -> bool {
        *self == SemanticsRecord::Containment
    }
}

impl From<SemanticsRecord> for Semantics {
    fn from(s: SemanticsRecord) -> Self {
        match s {
            SemanticsRecord::Containment => Semantics::Containment,
            SemanticsRecord::StrictEquality => Semantics::StrictEquality,
        }
    }
}

impl From<Semantics> for SemanticsRecord {
    fn from(s: Semantics) -> Self {
        match s {
            Semantics::Containment => SemanticsRecord::Containment,
            Semantics::StrictEquality => SemanticsRecord::StrictEquality,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRecord {
    edges: Vec<(String, String)>,
    value: NumberText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteRecord {
    nodes: Vec<String>,
    quantity: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DomainRecord {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum NumberText {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumberText {
    fn rational(&self) -> Result<Rational> {
        match self {
            NumberText::Text(t) => parse_rational(t),
            NumberText::Int(i) => Ok(Rational::from_i64(*i)),
            NumberText::Float(f) => Err(Error::InvalidArgument(format!(
                "{f} is not exact; write an integer or a \"p/q\" string"
            ))),
        }
    }

    fn decimal(&self) -> Result<f64> {
        match self {
            NumberText::Text(t) => match t.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => parse_rational(t).map(|r| r.to_f64()),
            },
            NumberText::Int(i) => Ok(*i as f64),
            NumberText::Float(f) => Ok(*f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Topology or routes were reconstructed rather than given verbatim.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reconstruction: bool,
    /// Whether the expected vector can be reproduced from this document.
    #[serde(default = "yes", skip_serializing_if = "Clone::clone")]
    pub verifiable: bool,
}

fn yes() -> bool {
    true
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            note: None,
            reconstruction: false,
            verifiable: true,
        }
    }
}

impl Metadata {
    fn is_default(&self) -> bool {
        self.note.is_none() && !self.reconstruction && self.verifiable
    }
}

// ---- validated scenario ----

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    SupplyCostDecay(CostDecayParams),
    Contract(Semantics),
    EdgeCountPower(u32),
    /// Edge subsets with their worths; unlisted subsets are worth zero.
    ExplicitTable(Vec<(EdgeSet, Rational)>),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::SupplyCostDecay(_) => "supply_cost_decay",
            Model::Contract(_) => "contract",
            Model::EdgeCountPower(_) => "edge_count_power",
            Model::ExplicitTable(_) => "explicit_table",
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Model::SupplyCostDecay(_) => Domain::Approx,
            _ => Domain::Exact,
        }
    }

    pub fn uses_routes(&self) -> bool {
        matches!(self, Model::SupplyCostDecay(_) | Model::Contract(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expected {
    Exact(Vec<Rational>),
    Approx(Vec<f64>),
}

/// An allocation in whichever domain the scenario evaluates in.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAllocation {
    Exact(Allocation<Rational>),
    Approx(Allocation<f64>),
}

impl AnyAllocation {
    pub fn domain(&self) -> Domain {
        match self {
            AnyAllocation::Exact(_) => Domain::Exact,
            AnyAllocation::Approx(_) => Domain::Approx,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyAllocation::Exact(a) => a.len(),
            AnyAllocation::Approx(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            AnyAllocation::Exact(a) => a.to_f64(),
            AnyAllocation::Approx(a) => a.to_f64(),
        }
    }

    /// Exact `p/q` strings, present only in the exact domain.
    pub fn exact_strings(&self) -> Option<Vec<String>> {
        match self {
            AnyAllocation::Exact(a) => Some(a.iter().map(format_rational).collect()),
            AnyAllocation::Approx(_) => None,
        }
    }

    pub fn total_f64(&self) -> f64 {
        match self {
            AnyAllocation::Exact(a) => a.total().to_f64(),
            AnyAllocation::Approx(a) => a.total(),
        }
    }

    pub fn total_string(&self) -> String {
        match self {
            AnyAllocation::Exact(a) => format_rational(&a.total()),
            AnyAllocation::Approx(a) => a.total().render(),
        }
    }

    /// `self - other` in the common domain; mixed domains fall back to binary64.
    pub fn delta(&self, other: &AnyAllocation) -> AnyAllocation {
        match (self, other) {
            (AnyAllocation::Exact(a), AnyAllocation::Exact(b)) => AnyAllocation::Exact(a.sub(b)),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                AnyAllocation::Approx(Allocation::new(a.iter().zip(&b).map(|(x, y)| x - y).collect()))
            }
        }
    }
}

pub type DynWeight<V> = Box<dyn EdgeCharacteristic<Worth = V> + Send + Sync>;

pub enum AnyEdgeGame {
    Exact(EdgeGame<DynWeight<Rational>>),
    Approx(EdgeGame<DynWeight<f64>>),
}

impl AnyEdgeGame {
    pub fn graph(&self) -> &Graph {
        match self {
            AnyEdgeGame::Exact(g) => g.graph(),
            AnyEdgeGame::Approx(g) => g.graph(),
        }
    }
}

/// Outcome of comparing a computed allocation with a scenario's expected vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Regression {
    pub passed: bool,
    pub max_abs_error: f64,
    /// Labels of nodes outside tolerance.
    pub mismatched: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub metadata: Metadata,
    pub graph: Graph,
    pub model: Model,
    pub routes: Vec<Route>,
    pub domain: Domain,
    pub expected: Option<Expected>,
}

fn at(path: impl std::fmt::Display, err: impl std::fmt::Display) -> Error {
    Error::Scenario(format!("{path}: {err}"))
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        let mut scenario = Self::from_json(&text)?;
        if scenario.name.is_none() {
            scenario.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(scenario)
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::validate(file)
    }

    fn validate(file: ScenarioFile) -> Result<Scenario> {
        if file.nodes.len() > MAX_PLAYERS {
            return Err(Error::TooManyNodes(file.nodes.len()));
        }
        let mut builder = Graph::builder();
        for (i, label) in file.nodes.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(at(format!("nodes[{i}]"), "empty label"));
            }
            if file.nodes[..i].contains(label) {
                return Err(at(format!("nodes[{i}]"), format!("duplicate node `{label}`")));
            }
            builder = builder.node(label.as_str());
        }
        let known = |label: &str| file.nodes.iter().any(|n| n == label);
        let mut seen: Vec<(&str, &str)> = Vec::new();
        for (i, e) in file.edges.iter().enumerate() {
            let path = format!("edges[{i}]");
            for end in [&e.from, &e.to] {
                if !known(end) {
                    return Err(at(&path, format!("unknown node `{end}`")));
                }
            }
            if e.from == e.to {
                return Err(at(&path, "self-loops are not allowed"));
            }
            if !(e.cost.is_finite() && e.cost >= 0.0) {
                return Err(at(&path, format!("cost must be finite and non-negative, got {}", e.cost)));
            }
            let pair = (e.from.as_str(), e.to.as_str());
            if seen.iter().any(|&(a, b)| (a, b) == pair || (b, a) == pair) {
                return Err(at(&path, format!("duplicate edge between `{}` and `{}`", e.from, e.to)));
            }
            seen.push(pair);
            builder = builder.edge(e.from.as_str(), e.to.as_str(), e.cost);
        }
        let graph = builder.build()?;

        let model = match &file.model {
            ModelRecord::SupplyCostDecay { alpha, semantics } => Model::SupplyCostDecay(
                CostDecayParams::new(*alpha, (*semantics).into()).map_err(|e| at("model.alpha", e))?,
            ),
            ModelRecord::Contract { semantics } => Model::Contract((*semantics).into()),
            ModelRecord::EdgeCountPower { exponent } => {
                if *exponent == 0 {
                    return Err(at("model.exponent", "must be at least 1"));
                }
                Model::EdgeCountPower(*exponent)
            }
            ModelRecord::ExplicitTable { table } => {
                let m = graph.edge_count();
                let mut rows: Vec<(EdgeSet, Rational)> = Vec::with_capacity(table.len());
                for (r, row) in table.iter().enumerate() {
                    let mut set = EdgeSet::empty(m);
                    for (k, (a, b)) in row.edges.iter().enumerate() {
                        let idx = graph
                            .find_edge_by_label(a, b)
                            .map_err(|e| at(format!("model.table[{r}].edges[{k}]"), e))?;
                        set.insert(idx);
                    }
                    let value = row.value.rational().map_err(|e| at(format!("model.table[{r}].value"), e))?;
                    if set.is_empty() && !Worth::is_zero(&value) {
                        return Err(at(format!("model.table[{r}]"), "the empty edge set must be worth 0"));
                    }
                    if rows.iter().any(|(s, _)| *s == set) {
                        return Err(at(format!("model.table[{r}]"), "edge subset listed twice"));
                    }
                    rows.push((set, value));
                }
                Model::ExplicitTable(rows)
            }
        };

        let domain = match file.domain {
            DomainRecord::Exact => Domain::Exact,
            DomainRecord::Approx => Domain::Approx,
        };
        if domain != model.domain() {
            return Err(at(
                "domain",
                format!("model `{}` evaluates in the {} domain, not {domain}", model.kind(), model.domain()),
            ));
        }

        if !model.uses_routes() && !file.routes.is_empty() {
            return Err(at("routes", format!("model `{}` takes no routes", model.kind())));
        }
        let mut routes = Vec::with_capacity(file.routes.len());
        for (r, record) in file.routes.iter().enumerate() {
            let path = format!("routes[{r}]");
            let route = Route::new(&graph, &record.nodes, record.quantity).map_err(|e| at(&path, e))?;
            if record.nodes.len() != route.nodes.len() {
                return Err(at(&path, "node listed twice"));
            }
            graph.route_cost(&route).map_err(|e| at(&path, e))?;
            if matches!(model, Model::Contract(_)) && route.quantity.fract() != 0.0 {
                return Err(at(format!("{path}.quantity"), "contract counts must be whole numbers"));
            }
            routes.push(route);
        }

        let expected = match &file.expected {
            None => None,
            Some(map) => {
                for key in map.keys() {
                    graph.index_of(key).map_err(|e| at("expected", e))?;
                }
                let mut exact = Vec::new();
                let mut approx = Vec::new();
                for id in graph.nodes() {
                    let path = format!("expected.{id}");
                    let value = map.get(id.as_str()).ok_or_else(|| at(&path, "missing"))?;
                    match domain {
                        Domain::Exact => exact.push(value.rational().map_err(|e| at(&path, e))?),
                        Domain::Approx => approx.push(value.decimal().map_err(|e| at(&path, e))?),
                    }
                }
                Some(match domain {
                    Domain::Exact => Expected::Exact(exact),
                    Domain::Approx => Expected::Approx(approx),
                })
            }
        };

        Ok(Scenario {
            name: file.name,
            metadata: file.metadata,
            graph,
            model,
            routes,
            domain,
            expected,
        })
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("scenario")
    }

    /// Whether a regression against `expected` is meaningful.
    pub fn is_verifiable(&self) -> bool {
        self.metadata.verifiable && self.expected.is_some()
    }

    fn contract_table(&self) -> ContractRouteTable {
        ContractRouteTable {
            routes: self
                .routes
                .iter()
                .map(|r| ContractRoute {
                    nodes: r.nodes,
                    contracts: r.quantity as u64,
                })
                .collect(),
        }
    }

    pub fn edge_game(&self) -> Result<AnyEdgeGame> {
        let g = self.graph.clone();
        Ok(match &self.model {
            Model::SupplyCostDecay(params) => {
                let w = supply_weight_fn(&self.graph, &self.routes, *params)?;
                AnyEdgeGame::Approx(EdgeGame::new(g, Box::new(w) as DynWeight<f64>)?)
            }
            Model::Contract(semantics) => {
                let w = contract_weight_fn(&self.graph, &self.contract_table(), *semantics)?;
                AnyEdgeGame::Exact(EdgeGame::new(g, Box::new(w) as DynWeight<Rational>)?)
            }
            Model::EdgeCountPower(exponent) => {
                let w = power_weight_fn(&self.graph, *exponent)?;
                AnyEdgeGame::Exact(EdgeGame::new(g, Box::new(w) as DynWeight<Rational>)?)
            }
            Model::ExplicitTable(rows) => {
                let mut table = ExplicitTable::new(self.graph.edge_count());
                for (set, value) in rows {
                    table.set(set.clone(), value.clone())?;
                }
                AnyEdgeGame::Exact(EdgeGame::new(g, Box::new(table) as DynWeight<Rational>)?)
            }
        })
    }

    /// Closed-form allocation for route models (containment semantics only).
    pub fn closed_form(&self) -> Result<AnyAllocation> {
        match &self.model {
            Model::SupplyCostDecay(params) => {
                let w = supply_weight_fn(&self.graph, &self.routes, *params)?;
                Ok(AnyAllocation::Approx(w.closed_form(&self.graph)?))
            }
            Model::Contract(semantics) => {
                let w = contract_weight_fn(&self.graph, &self.contract_table(), *semantics)?;
                Ok(AnyAllocation::Exact(w.closed_form(&self.graph)?))
            }
            other => Err(Error::InvalidArgument(format!(
                "closed form needs a route model, scenario uses `{}`",
                other.kind()
            ))),
        }
    }

    pub fn check_expected(&self, allocation: &AnyAllocation) -> Option<Regression> {
        let expected = self.expected.as_ref()?;
        let labels = |idx: Vec<usize>| idx.into_iter().map(|i| self.graph.label(i).to_string()).collect();
        let got = allocation.to_f64();
        match (expected, allocation) {
            (Expected::Exact(want), AnyAllocation::Exact(have)) => {
                let bad: Vec<usize> = (0..want.len()).filter(|&i| want[i] != have[i]).collect();
                let max = want
                    .iter()
                    .zip(&got)
                    .map(|(w, g)| (w.to_f64() - g).abs())
                    .fold(0.0, f64::max);
                Some(Regression {
                    passed: bad.is_empty(),
                    max_abs_error: max,
                    mismatched: labels(bad),
                })
            }
            _ => {
                let want: Vec<f64> = match expected {
                    Expected::Exact(w) => w.iter().map(Worth::to_f64).collect(),
                    Expected::Approx(w) => w.clone(),
                };
                let errors: Vec<f64> = want.iter().zip(&got).map(|(w, g)| (w - g).abs()).collect();
                let bad: Vec<usize> = (0..errors.len())
                    .filter(|&i| errors[i].is_nan() || errors[i] > APPROX_REGRESSION_TOLERANCE)
                    .collect();
                Some(Regression {
                    passed: bad.is_empty(),
                    max_abs_error: errors.iter().copied().fold(0.0, f64::max),
                    mismatched: labels(bad),
                })
            }
        }
    }

    /// Drops node `label`, its incident edges, every route through it, and
    /// any table entry using a dropped edge. The expected vector is dropped.
    pub fn remove_node(&self, label: &str) -> Result<Scenario> {
        let u = self.graph.index_of(label)?;
        let graph = self.graph.without_node(u);
        let edge_map: Vec<Option<usize>> = {
            let mut next = 0;
            self.graph
                .edges()
                .iter()
                .map(|e| {
                    (!e.touches(u)).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let routes = self
            .routes
            .iter()
            .filter(|r| !r.nodes.contains(u))
            .map(|r| Route {
                nodes: drop_index(r.nodes, u),
                quantity: r.quantity,
            })
            .collect();
        let model = match &self.model {
            Model::ExplicitTable(rows) => Model::ExplicitTable(
                rows.iter()
                    .filter_map(|(set, value)| {
                        let mapped: Option<Vec<usize>> = set.iter().map(|k| edge_map[k]).collect();
                        mapped.map(|ks| (EdgeSet::from_indices(graph.edge_count(), ks), value.clone()))
                    })
                    .collect(),
            ),
            other => other.clone(),
        };
        Ok(Scenario {
            name: Some(format!("{}-without-{label}", self.name())),
            metadata: self.metadata.clone(),
            graph,
            model,
            routes,
            domain: self.domain,
            expected: None,
        })
    }

    /// Drops the edge between `a` and `b` and re-expresses the model on the
    /// remaining edges: the resulting game ignores the removed edge, so routes
    /// and table entries that use it can no longer contribute and are dropped.
    pub fn remove_edge(&self, a: &str, b: &str) -> Result<Scenario> {
        let k = self.graph.find_edge_by_label(a, b)?;
        let removed = *self.graph.edge(k);
        let graph = self.graph.without_edge(k);
        let ends = removed.endpoints();
        let routes = self
            .routes
            .iter()
            .filter(|r| !ends.is_subset_of(r.nodes))
            .cloned()
            .collect();
        let model = match &self.model {
            Model::ExplicitTable(rows) => Model::ExplicitTable(
                rows.iter()
                    .filter(|(set, _)| !set.contains(k))
                    .map(|(set, value)| {
                        let shifted = set.iter().map(|j| if j > k { j - 1 } else { j });
                        (EdgeSet::from_indices(graph.edge_count(), shifted), value.clone())
                    })
                    .collect(),
            ),
            other => other.clone(),
        };
        Ok(Scenario {
            name: Some(format!("{}-without-{a}-{b}", self.name())),
            metadata: self.metadata.clone(),
            graph,
            model,
            routes,
            domain: self.domain,
            expected: None,
        })
    }

    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let model = match &self.model {
            Model::SupplyCostDecay(p) => ModelRecord::SupplyCostDecay {
                alpha: p.alpha(),
                semantics: p.semantics.into(),
            },
            Model::Contract(s) => ModelRecord::Contract { semantics: (*s).into() },
            Model::EdgeCountPower(e) => ModelRecord::EdgeCountPower { exponent: *e },
            Model::ExplicitTable(rows) => ModelRecord::ExplicitTable {
                table: rows
                    .iter()
                    .map(|(set, value)| TableRecord {
                        edges: set
                            .iter()
                            .map(|k| {
                                let e = g.edge(k);
                                (g.label(e.from).to_string(), g.label(e.to).to_string())
                            })
                            .collect(),
                        value: NumberText::Text(format_rational(value)),
                    })
                    .collect(),
            },
        };
        let expected = self.expected.as_ref().map(|exp| {
            g.nodes()
                .iter()
                .enumerate()
                .map(|(i, id)| {
                    let text = match exp {
                        Expected::Exact(v) => format_rational(&v[i]),
                        Expected::Approx(v) => v[i].render(),
                    };
                    (id.to_string(), NumberText::Text(text))
                })
                .collect()
        });
        let file = ScenarioFile {
            name: self.name.clone(),
            metadata: self.metadata.clone(),
            nodes: g.nodes().iter().map(|n| n.to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: g.label(e.from).to_string(),
                    to: g.label(e.to).to_string(),
                    cost: e.cost,
                })
                .collect(),
            model,
            routes: self
                .routes
                .iter()
                .map(|r| RouteRecord {
                    nodes: g.labels_of(r.nodes).iter().map(|s| s.to_string()).collect(),
                    quantity: r.quantity,
                })
                .collect(),
            domain: match self.domain {
                Domain::Exact => DomainRecord::Exact,
                Domain::Approx => DomainRecord::Approx,
            },
            expected,
        };
        serde_json::to_string_pretty(&file).expect("scenario serializes")
    }
}

/// Removes bit `u` from a mask, shifting higher members down by one.
fn drop_index(c: Coalition, u: NodeIndex) -> Coalition {
    let bits = c.bits();
    let low = bits & ((1u64 << u) - 1);
    let high = (bits >> (u + 1)) << u;
    Coalition::from_bits(low | high)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "nodes": ["A", "B", "C"],
        "edges": [{"from": "A", "to": "B", "cost": 1.0}],
        "model": {"type": "edge_count_power", "exponent": 2},
        "domain": "exact"
    }"#;

    fn err_of(text: &str) -> String {
        Scenario::from_json(text).unwrap_err().to_string()
    }

    #[test]
    fn minimal_document_loads() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.graph.node_count(), 3);
        assert_eq!(s.name(), "scenario");
        assert!(s.expected.is_none());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = Scenario::from_json("{\n  \"nodes\": [,]\n}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_edge = MINIMAL.replace(r#""to": "B""#, r#""to": "Z""#);
        assert!(err_of(&bad_edge).contains("edges[0]: unknown node `Z`"));
        let dup = MINIMAL.replace(
            r#"[{"from": "A", "to": "B", "cost": 1.0}]"#,
            r#"[{"from": "A", "to": "B", "cost": 1.0}, {"from": "B", "to": "A", "cost": 2.0}]"#,
        );
        assert!(err_of(&dup).contains("edges[1]: duplicate edge"));
        let mismatch = MINIMAL.replace(r#""exact""#, r#""approx""#);
        assert!(err_of(&mismatch).contains("domain:"));
        let unknown_route = MINIMAL
            .replace(r#"{"type": "edge_count_power", "exponent": 2}"#, r#"{"type": "contract"}"#)
            .replace(r#""domain""#, r#""routes": [{"nodes": ["A", "Q"], "quantity": 1}], "domain""#);
        assert!(err_of(&unknown_route).contains("routes[0]: unknown node `Q`"));
        let degenerate = unknown_route.replace(r#"["A", "Q"]"#, r#"["A", "C"]"#);
        assert!(err_of(&degenerate).contains("routes[0]: route over"));
        let fractional = unknown_route.replace(r#"["A", "Q"], "quantity": 1"#, r#"["A", "B"], "quantity": 1.5"#);
        assert!(err_of(&fractional).contains("routes[0].quantity"));
        let missing = MINIMAL.replace(r#""domain": "exact""#, r#""domain": "exact", "expected": {"A": "1"}"#);
        assert!(err_of(&missing).contains("expected.B: missing"));
        let extra = MINIMAL.replace(r#""domain""#, r#""colour": "red", "domain""#);
        assert!(matches!(Scenario::from_json(&extra), Err(Error::Parse { .. })));
        let too_many: Vec<String> = (0..64).map(|i| format!("\"n{i}\"")).collect();
        let big = format!(
            r#"{{"nodes": [{}], "model": {{"type": "edge_count_power", "exponent": 1}}, "domain": "exact"}}"#,
            too_many.join(",")
        );
        assert_eq!(Scenario::from_json(&big), Err(Error::TooManyNodes(64)));
    }

    #[test]
    fn explicit_table_rows_validate() {
        let doc = |table: &str| {
            format!(
                r#"{{"nodes": ["A", "B"], "edges": [{{"from": "A", "to": "B", "cost": 1}}],
                   "model": {{"type": "explicit_table", "table": {table}}}, "domain": "exact"}}"#
            )
        };
        assert!(Scenario::from_json(&doc(r#"[{"edges": [["B", "A"]], "value": "3/4"}]"#)).is_ok());
        assert!(err_of(&doc(r#"[{"edges": [["A", "C"]], "value": "1"}]"#)).contains("model.table[0].edges[0]"));
        assert!(err_of(&doc(r#"[{"edges": [], "value": "1"}]"#)).contains("empty edge set"));
        assert!(err_of(&doc(r#"[{"edges": [["A", "B"]], "value": "x"}]"#)).contains("model.table[0].value"));
        assert!(err_of(&doc(r#"[{"edges": [["A", "B"]], "value": 1.5}]"#)).contains("not exact"));
    }

    #[test]
    fn drop_index_shifts_members() {
        let c = Coalition::from_members([0, 2, 4]);
        assert_eq!(drop_index(c, 1), Coalition::from_members([0, 1, 3]));
        assert_eq!(drop_index(c, 0), Coalition::from_members([1, 3]));
    }

    #[test]
    fn every_fixture_loads() {
        for name in fixtures::names() {
            let s = fixtures::load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name(), name);
        }
        assert!(fixtures::load("nope").is_err());
    }

    #[test]
    fn metadata_defaults_to_verifiable() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert!(s.metadata.verifiable);
        assert!(!s.is_verifiable());
        assert!(!fixtures::load("platform-single").unwrap().is_verifiable());
    }

    #[test]
    fn remove_edge_matches_edge_deletion() {
        use crate::edge::edge_shapley;
        use crate::game::ShapleyEngine;
        let engine = ShapleyEngine::new();
        for (name, a, b) in [
            ("counterexample-H", "A", "D"),
            ("chain-suppliers", "B", "C"),
            ("chain-modules", "A", "B"),
            ("two-node", "X", "Y"),
        ] {
            let s = fixtures::load(name).unwrap();
            let removed = s.remove_edge(a, b).unwrap().edge_game().unwrap();
            let deleted = match s.edge_game().unwrap() {
                AnyEdgeGame::Exact(eg) => {
                    let d = eg.delete_edge_by_label(a, b).unwrap();
                    edge_shapley(&engine, &d).unwrap().to_f64()
                }
                AnyEdgeGame::Approx(eg) => {
                    let d = eg.delete_edge_by_label(a, b).unwrap();
                    edge_shapley(&engine, &d).unwrap().to_f64()
                }
            };
            let via_scenario = match removed {
                AnyEdgeGame::Exact(eg) => edge_shapley(&engine, &eg).unwrap().to_f64(),
                AnyEdgeGame::Approx(eg) => edge_shapley(&engine, &eg).unwrap().to_f64(),
            };
            for (x, y) in via_scenario.iter().zip(&deleted) {
                assert!((x - y).abs() < 1e-12, "{name}: {via_scenario:?} vs {deleted:?}");
            }
        }
    }
}
