//! Deleting an edge changes both endpoints' allocations by the same amount.

use edge_shapley::edge::{fairness_delta, EdgeGame};
use edge_shapley::game::ShapleyEngine;
use edge_shapley::graph::Graph;
use edge_shapley::models::{power_weight_fn, ExplicitTable};
use edge_shapley::sets::EdgeSet;
use edge_shapley::worth::{Rational, Worth};

fn main() -> edge_shapley::error::Result<()> {
    let graph = Graph::builder()
        .nodes(["A", "B", "C", "D"])
        .edge("A", "B", 1.0)
        .edge("B", "C", 1.0)
        .edge("C", "D", 1.0)
        .edge("A", "C", 1.0)
        .build()?;
    let engine = ShapleyEngine::new();

    let squares = EdgeGame::new(graph.clone(), power_weight_fn(&graph, 2)?)?;
    println!("w(F) = |F|^2");
    report(&engine, &squares)?;

    // A table game rewarding two particular pairs of edges.
    let m = graph.edge_count();
    let table = ExplicitTable::new(m)
        .with(EdgeSet::from_indices(m, [0, 1]), Rational::from_i64(6))?
        .with(EdgeSet::from_indices(m, [2, 3]), Rational::from_i64(4))?
        .with(EdgeSet::full(m), Rational::from_i64(12))?;
    println!("\nexplicit table");
    report(&engine, &EdgeGame::new(graph, table)?)
}

fn report<W>(engine: &ShapleyEngine, game: &EdgeGame<W>) -> edge_shapley::error::Result<()>
where
    W: edge_shapley::edge::EdgeCharacteristic,
{
    for (k, e) in game.graph().edges().iter().enumerate() {
        let (di, dj) = fairness_delta(engine, game, k)?;
        println!(
            "  remove ({}, {}): {} loses {}, {} loses {}",
            game.graph().label(e.from),
            game.graph().label(e.to),
            game.graph().label(e.from),
            di.render(),
            game.graph().label(e.to),
            dj.render()
        );
    }
    Ok(())
}
