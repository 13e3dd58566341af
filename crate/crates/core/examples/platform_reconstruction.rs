//! Content platforms valued by contract counts. The bundled platform scenarios
//! carry no route table, so this example supplies one: a table of contract
//! routes over a platform P and its contents A, B, C totalling 24 contracts.
//! Many tables share the same total; this one happens to reproduce the
//! expected vector listed in the scenario exactly.

use edge_shapley::edge::{edge_shapley, EdgeGame};
use edge_shapley::game::ShapleyEngine;
use edge_shapley::models::{contract_weight_fn, ContractRouteTable, Semantics};
use edge_shapley::scenario::{fixtures, Expected};
use edge_shapley::worth::Worth;

fn main() -> edge_shapley::error::Result<()> {
    let scenario = fixtures::load("platform-single")?;
    let g = &scenario.graph;
    let table = ContractRouteTable::new()
        .route(g, ["A", "P"], 9)?
        .route(g, ["B", "P"], 5)?
        .route(g, ["C", "P"], 3)?
        .route(g, ["A", "B", "P"], 4)?
        .route(g, ["A", "C", "P"], 1)?
        .route(g, ["B", "C", "P"], 1)?
        .route(g, ["A", "B", "C", "P"], 1)?;
    println!("contracts: {}", table.total_contracts());

    let w = contract_weight_fn(g, &table, Semantics::Containment)?;
    let closed = w.closed_form(g)?;
    let game = EdgeGame::new(g.clone(), w)?;
    let value = edge_shapley(&ShapleyEngine::new(), &game)?;
    assert_eq!(value, closed);
    println!("sum {} = w(E) {}", value.total().render(), game.total_worth().render());

    let Some(Expected::Exact(listed)) = &scenario.expected else {
        unreachable!("fixture lists an exact expected vector");
    };
    for (i, v) in value.iter().enumerate() {
        let target = &listed[i];
        println!(
            "  {} = {:<6} published {:<6} {}",
            g.label(i),
            v.render(),
            target.render(),
            if v == target { "match" } else { "differs" }
        );
    }
    Ok(())
}
