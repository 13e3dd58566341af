//! Scenario files bundled with the crate.

use super::Scenario;
use crate::error::{Error, Result};

const FIXTURES: &[(&str, &str)] = &[
    ("counterexample-H", include_str!("../../fixtures/counterexample-h.json")),
    ("chain-suppliers", include_str!("../../fixtures/chain-suppliers.json")),
    ("chain-modules", include_str!("../../fixtures/chain-modules.json")),
    ("chain-costly-edge", include_str!("../../fixtures/chain-costly-edge.json")),
    ("smartphone", include_str!("../../fixtures/smartphone.json")),
    ("platform-single", include_str!("../../fixtures/platform-single.json")),
    ("platform-dual", include_str!("../../fixtures/platform-dual.json")),
    ("platform-unsubscribed", include_str!("../../fixtures/platform-unsubscribed.json")),
    ("two-node", include_str!("../../fixtures/two-node.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(name, _)| *name)
}

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| *text)
}

pub fn load(name: &str) -> Result<Scenario> {
    let text = source(name).ok_or_else(|| Error::Scenario(format!("no bundled fixture named `{name}`")))?;
    Scenario::from_json(text)
}

/// Every bundled fixture, loaded.
pub fn all() -> Result<Vec<Scenario>> {
    names().map(load).collect()
}
