//! A 20-firm smartphone supply network solved exactly by enumeration.
//!
//! Run with `--release` for realistic timings.

use std::time::Instant;

use edge_shapley::scenario::fixtures;
use edge_shapley::solve::{solve, Method, SolveOptions};

fn main() -> edge_shapley::error::Result<()> {
    let scenario = fixtures::load("smartphone")?;
    let options = SolveOptions::default();

    let started = Instant::now();
    let exact = solve(&scenario, Method::EdgeShapley, &options)?;
    let elapsed = started.elapsed();
    let closed = scenario.closed_form()?;

    let (e, c) = (exact.allocation.to_f64(), closed.to_f64());
    let mut ranked: Vec<usize> = (0..e.len()).collect();
    ranked.sort_by(|&a, &b| e[b].total_cmp(&e[a]));
    for i in ranked {
        println!("{:<3} {:>9.4}  (closed form {:>9.4})", scenario.graph.label(i), e[i], c[i]);
    }
    let gap = e.iter().zip(&c).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("total {:.4}, largest gap {gap:.2e}, {:.0} ms", exact.allocation.total_f64(), elapsed.as_secs_f64() * 1e3);
    Ok(())
}
