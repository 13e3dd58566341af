//! Supply chains valued by `q * exp(-alpha * cost)` per route: the engine
//! agrees with splitting each route's value evenly among its nodes.

use edge_shapley::scenario::fixtures;
use edge_shapley::solve::{solve, Method, SolveOptions};

fn main() -> edge_shapley::error::Result<()> {
    let options = SolveOptions::default();
    for name in ["chain-suppliers", "chain-modules", "chain-costly-edge"] {
        let scenario = fixtures::load(name)?;
        let engine = solve(&scenario, Method::EdgeShapley, &options)?;
        let closed = scenario.closed_form()?;
        println!("{name}");
        let (e, c) = (engine.allocation.to_f64(), closed.to_f64());
        for (i, label) in scenario.graph.nodes().iter().enumerate() {
            println!("  {:<2} engine {:>9.5}  closed form {:>9.5}", label.as_str(), e[i], c[i]);
        }
        if let Some(reg) = scenario.check_expected(&engine.allocation) {
            println!("  expected vector reproduced: {} (max error {:.2e})", reg.passed, reg.max_abs_error);
        }
    }
    Ok(())
}
