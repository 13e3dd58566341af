//! A five-node graph where restricting each node's sum to coalitions inside
//! its neighbourhood gives the wrong answer, while the lifted game does not.

use edge_shapley::edge::{edge_shapley, restricted_sum_diagnostic, EdgeGame};
use edge_shapley::game::ShapleyEngine;
use edge_shapley::graph::Graph;
use edge_shapley::models::power_weight_fn;
use edge_shapley::worth::Worth;

fn main() -> edge_shapley::error::Result<()> {
    let graph = Graph::builder()
        .nodes(["A", "B", "C", "D", "E"])
        .edge("A", "D", 1.0)
        .edge("B", "D", 1.0)
        .edge("C", "E", 1.0)
        .build()?;
    let w = power_weight_fn(&graph, 2)?;
    let game = EdgeGame::new(graph, w)?;
    let engine = ShapleyEngine::new();

    let value = edge_shapley(&engine, &game)?;
    println!("w(E) = {}", game.total_worth().render());
    for (i, v) in value.iter().enumerate() {
        println!("  {} = {}", game.graph().label(i), v.render());
    }
    println!("sum = {}", value.total().render());

    println!("\nneighbourhood-restricted sums:");
    for entry in restricted_sum_diagnostic(&engine, &game)? {
        println!(
            "  {}: restricted {} vs true {}{}",
            game.graph().label(entry.node),
            entry.restricted.render(),
            entry.full.render(),
            if entry.agrees { "" } else { "  (differs)" }
        );
    }
    Ok(())
}
