//! The Myerson value of a graph-restricted game, computed directly and as
//! the edge-based value of the matching edge game.

use edge_shapley::edge::{edge_shapley, myerson_bridge};
use edge_shapley::game::{myerson, FnGame, GraphGame, ShapleyEngine};
use edge_shapley::graph::Graph;
use edge_shapley::worth::{Rational, Worth};

fn main() -> edge_shapley::error::Result<()> {
    // Any two players form a winning coalition, but only along the path.
    let graph = Graph::builder()
        .nodes(["1", "2", "3", "4"])
        .edge("1", "2", 1.0)
        .edge("2", "3", 1.0)
        .edge("3", "4", 1.0)
        .build()?;
    let v = FnGame::new(4, |s| Rational::from_i64(if s.len() >= 2 { 1 } else { 0 }));
    let gg = GraphGame::new(graph, v)?;
    let engine = ShapleyEngine::new();

    let direct = myerson(&engine, &gg)?;
    let bridge = myerson_bridge(&gg)?;
    let via_edges = edge_shapley(&engine, &bridge)?;
    for i in 0..direct.len() {
        println!(
            "player {}: myerson {}  edge-based {}",
            gg.graph().label(i),
            direct[i].render(),
            via_edges[i].render()
        );
    }
    assert_eq!(direct, via_edges);
    Ok(())
}
