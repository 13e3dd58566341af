//! Skipping coalitions that contain none of a node's neighbours gives the same
//! value with fewer characteristic evaluations.

use edge_shapley::edge::{edge_shapley, edge_shapley_pruned, EdgeCharacteristic, EdgeGame};
use edge_shapley::error::Result;
use edge_shapley::game::ShapleyEngine;
use edge_shapley::scenario::{fixtures, AnyEdgeGame};

fn compare<W: EdgeCharacteristic>(name: &str, engine: &ShapleyEngine, game: &EdgeGame<W>) -> Result<()> {
    let (pruned, stats) = edge_shapley_pruned(engine, game)?;
    let full = edge_shapley(engine, game)?;
    println!(
        "{name}: {} of {} marginals ({:.1}%), largest difference {:.1e}",
        stats.evaluated,
        stats.full,
        100.0 * stats.evaluated as f64 / stats.full as f64,
        pruned.max_abs_diff(&full)
    );
    Ok(())
}

fn main() -> Result<()> {
    let engine = ShapleyEngine::new();
    for name in ["counterexample-H", "chain-suppliers", "platform-dual", "smartphone"] {
        match fixtures::load(name)?.edge_game()? {
            AnyEdgeGame::Exact(game) => compare(name, &engine, &game)?,
            AnyEdgeGame::Approx(game) => compare(name, &engine, &game)?,
        }
    }
    Ok(())
}
