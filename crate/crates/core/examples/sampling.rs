//! Monte Carlo permutation sampling against the exact value. Results depend
//! only on the seed, never on the thread count.

use edge_shapley::edge::{edge_shapley, EdgeGame};
use edge_shapley::game::{shapley_sampled_with, ShapleyEngine};
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
    let game = EdgeGame::new(graph.clone(), power_weight_fn(&graph, 2)?)?;
    let exact = edge_shapley(&ShapleyEngine::new(), &game)?;

    for samples in [1_000, 20_000, 200_000] {
        let estimate = shapley_sampled_with(&ShapleyEngine::new(), &game.lift(), samples, 7)?;
        let serial = shapley_sampled_with(&ShapleyEngine::new().with_threads(Some(1)), &game.lift(), samples, 7)?;
        assert_eq!(estimate, serial);
        let error = estimate.max_abs_diff(&exact);
        print!("{samples:>7} samples:");
        for v in estimate.iter() {
            print!(" {v:.4}");
        }
        println!("  max error {error:.4}");
    }
    print!("  exact:        ");
    for v in exact.iter() {
        print!(" {:.4}", v.to_f64());
    }
    println!();
    Ok(())
}
