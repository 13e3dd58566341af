//! Counterfactuals on a scenario: drop a firm or a link and compare.

use edge_shapley::scenario::fixtures;
use edge_shapley::solve::{solve, Method, SolveOptions};

fn main() -> edge_shapley::error::Result<()> {
    let options = SolveOptions::default();
    let base = fixtures::load("chain-modules")?;
    let before = solve(&base, Method::EdgeShapley, &options)?.allocation.to_f64();

    let without_d = base.remove_node("D")?;
    let after = solve(&without_d, Method::EdgeShapley, &options)?.allocation.to_f64();
    println!("remove node D");
    for (i, label) in without_d.graph.nodes().iter().enumerate() {
        let old = before[base.graph.index_of(label.as_str())?];
        println!("  {:<2} {:>8.4} -> {:>8.4}", label.as_str(), old, after[i]);
    }

    let without_ab = base.remove_edge("A", "B")?;
    let after = solve(&without_ab, Method::EdgeShapley, &options)?.allocation.to_f64();
    println!("remove edge (A, B)");
    for (i, label) in base.graph.nodes().iter().enumerate() {
        println!("  {:<2} change {:>+8.4}", label.as_str(), after[i] - before[i]);
    }
    Ok(())
}
