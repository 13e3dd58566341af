//! Random instances and brute-force oracles shared by the integration tests.
//! The oracles avoid the library's engines: they enumerate permutations or
//! walk edge lists directly.

#![allow(dead_code)]

use edge_shapley::game::{Characteristic, TableGame};
use edge_shapley::graph::{Graph, Route};
use edge_shapley::models::ExplicitTable;
use edge_shapley::sets::{Coalition, EdgeSet};
use edge_shapley::worth::{Rational, Worth};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// A random graph on `n` nodes. When `connected`, a random spanning tree is
/// laid down first; every other pair gets an edge with probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, connected: bool) -> Graph {
    let names = labels(n);
    let mut pairs = Vec::new();
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for k in 1..n {
            let parent = order[rng.gen_range(0..k)];
            pairs.push((parent.min(order[k]), parent.max(order[k])));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !pairs.contains(&(a, b)) && rng.gen_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    let mut builder = Graph::builder().nodes(names.iter().cloned());
    for (a, b) in pairs {
        let cost = rng.gen_range(0..=40) as f64 / 4.0;
        builder = builder.edge(names[a].clone(), names[b].clone(), cost);
    }
    builder.build().expect("random graph is valid")
}

/// Edge indices with both endpoints in `s`, by scanning the edge list.
pub fn induced(g: &Graph, s: Coalition) -> EdgeSet {
    EdgeSet::from_indices(
        g.edge_count(),
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| s.contains(e.from) && s.contains(e.to))
            .map(|(k, _)| k),
    )
}

/// A connected node set of the requested size grown from a random edge, or
/// `None` if the edge's component is too small.
pub fn random_connected_set(rng: &mut impl Rng, g: &Graph, size: usize) -> Option<Coalition> {
    if g.edge_count() == 0 {
        return None;
    }
    let e = g.edge(rng.gen_range(0..g.edge_count()));
    let mut set = e.endpoints();
    while set.len() < size {
        let frontier: Vec<usize> = g
            .edges()
            .iter()
            .filter_map(|e| match (set.contains(e.from), set.contains(e.to)) {
                (true, false) => Some(e.to),
                (false, true) => Some(e.from),
                _ => None,
            })
            .collect();
        let &next = frontier.choose(rng)?;
        set = set.with(next);
    }
    Some(set)
}

/// Up to `count` routes over connected node sets with integer quantities.
pub fn random_routes(rng: &mut impl Rng, g: &Graph, count: usize) -> Vec<Route> {
    (0..count)
        .filter_map(|_| {
            let size = rng.gen_range(2..=g.node_count().min(5));
            let nodes = random_connected_set(rng, g, size)?;
            Route::from_coalition(nodes, rng.gen_range(1..=12) as f64).ok()
        })
        .collect()
}

pub fn random_int(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    Rational::from_i64(rng.gen_range(lo..=hi))
}

/// A random integer game on `n` players with `v(∅) = 0`, and `v({i}) = 0`
/// too when `zero_normalized`.
pub fn random_game(rng: &mut impl Rng, n: usize, zero_normalized: bool) -> TableGame<Rational> {
    let table = (0..1u64 << n)
        .map(|mask| {
            let s = Coalition::from_bits(mask);
            if s.is_empty() || (zero_normalized && s.len() == 1) {
                Rational::zero()
            } else {
                random_int(rng, -5, 20)
            }
        })
        .collect();
    TableGame::new(n, table).expect("table has 2^n entries")
}

/// A sparse explicit-table edge game: a handful of random edge sets get
/// random integer worths, every other set is worth zero.
pub fn random_table(rng: &mut impl Rng, m: usize, rows: usize) -> ExplicitTable<Rational> {
    let mut table = ExplicitTable::new(m);
    if m == 0 {
        return table;
    }
    for _ in 0..rows {
        let set = EdgeSet::from_indices(m, (0..m).filter(|_| rng.gen_bool(0.5)));
        if !set.is_empty() {
            table.set(set, random_int(rng, -3, 15)).expect("row is valid");
        }
    }
    table
}

/// Shapley value as the average marginal contribution over all `n!` orders.
pub fn permutation_shapley<C: Characteristic<Worth = Rational>>(game: &C) -> Vec<Rational> {
    let n = game.players();
    let mut totals = vec![Rational::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut count: i64 = 0;
    permute(&mut order, 0, &mut |perm| {
        let mut s = Coalition::EMPTY;
        let mut before = game.worth(s);
        for &i in perm {
            s = s.with(i);
            let after = game.worth(s);
            totals[i] = totals[i].clone() + after.clone() - before;
            before = after;
        }
        count += 1;
    });
    let count = Rational::from_i64(count.max(1));
    totals.into_iter().map(|t| t / count.clone()).collect()
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for j in k..items.len() {
        items.swap(k, j);
        permute(items, k + 1, visit);
        items.swap(k, j);
    }
}

/// Route cost as the sum over the edge list of edges inside the route.
pub fn route_cost(g: &Graph, nodes: Coalition) -> f64 {
    g.edges()
        .iter()
        .filter(|e| nodes.contains(e.from) && nodes.contains(e.to))
        .map(|e| e.cost)
        .sum()
}

/// Each route's decayed value split evenly over its nodes.
pub fn split_evenly(g: &Graph, routes: &[Route], alpha: f64) -> Vec<f64> {
    let mut out = vec![0.0; g.node_count()];
    for r in routes {
        let value = r.quantity * (-alpha * route_cost(g, r.nodes)).exp();
        for i in r.nodes.members() {
            out[i] += value / r.nodes.len() as f64;
        }
    }
    out
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
