//! Runs an allocation method against a loaded scenario.

use std::fmt;
use std::str::FromStr;

use crate::edge::{edge_shapley, edge_shapley_pruned, EdgeCharacteristic, EdgeGame};
use crate::error::{Error, Result};
use crate::game::{
    myerson, shapley_sampled_with, Allocation, Characteristic, GraphGame, PruneStats, ShapleyEngine,
    APPROX_TOLERANCE,
};
use crate::scenario::{AnyAllocation, AnyEdgeGame, Scenario};
use crate::sets::Coalition;
use crate::worth::Worth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    EdgeShapley,
    EdgeShapleyPruned,
    Myerson,
    /// Classical Shapley value of the lifted node game, through the generic engine.
    Shapley,
    ClosedForm,
    Sampled,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::EdgeShapley,
        Method::EdgeShapleyPruned,
        Method::Myerson,
        Method::Shapley,
        Method::ClosedForm,
        Method::Sampled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::EdgeShapley => "edge_shapley",
            Method::EdgeShapleyPruned => "edge_shapley_pruned",
            Method::Myerson => "myerson",
            Method::Shapley => "shapley",
            Method::ClosedForm => "closed_form",
            Method::Sampled => "sampled",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == wanted)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub engine: ShapleyEngine,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            engine: ShapleyEngine::default(),
            samples: 100_000,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub method: Method,
    pub allocation: AnyAllocation,
    /// Worth of the grand coalition in the game the method allocates.
    pub grand_worth: AnyAllocation,
    pub prune_stats: Option<PruneStats>,
}

impl Solution {
    /// Whether allocations sum to the grand worth (exactly, or within 1e-9
    /// relative in binary64).
    pub fn efficient(&self) -> bool {
        match (&self.allocation, &self.grand_worth) {
            (AnyAllocation::Exact(a), AnyAllocation::Exact(g)) => a.total() == g[0],
            _ => {
                let total = self.allocation.total_f64();
                total.approx_eq(&self.grand_worth.to_f64()[0], APPROX_TOLERANCE)
            }
        }
    }
}

fn single<V: Worth>(v: V) -> Allocation<V> {
    Allocation::new(vec![v])
}

/// Allocation, grand worth, and pruning statistics.
type Solved<V> = (Allocation<V>, Allocation<V>, Option<PruneStats>);

fn solve_game<W: EdgeCharacteristic>(
    eg: &EdgeGame<W>,
    method: Method,
    options: &SolveOptions,
) -> Result<Solved<W::Worth>> {
    let engine = &options.engine;
    let grand = single(eg.total_worth());
    Ok(match method {
        Method::EdgeShapley => (edge_shapley(engine, eg)?, grand, None),
        Method::EdgeShapleyPruned => {
            let (alloc, stats) = edge_shapley_pruned(engine, eg)?;
            (alloc, grand, Some(stats))
        }
        Method::Shapley => (engine.exact(&eg.lift())?, grand, None),
        Method::Myerson => {
            let gg = GraphGame::new(eg.graph().clone(), eg.lift())?;
            let restricted = gg.component_lift();
            let grand = single(restricted.worth(Coalition::full(eg.players())));
            (myerson(engine, &gg)?, grand, None)
        }
        Method::ClosedForm | Method::Sampled => unreachable!("handled by solve"),
    })
}

pub fn solve(scenario: &Scenario, method: Method, options: &SolveOptions) -> Result<Solution> {
    if method == Method::ClosedForm {
        let allocation = scenario.closed_form()?;
        let grand = match scenario.edge_game()? {
            AnyEdgeGame::Exact(eg) => AnyAllocation::Exact(single(eg.total_worth())),
            AnyEdgeGame::Approx(eg) => AnyAllocation::Approx(single(eg.total_worth())),
        };
        return Ok(Solution {
            method,
            allocation,
            grand_worth: grand,
            prune_stats: None,
        });
    }
    let game = scenario.edge_game()?;
    if method == Method::Sampled {
        let (allocation, grand) = match &game {
            AnyEdgeGame::Exact(eg) => (
                shapley_sampled_with(&options.engine, &eg.lift(), options.samples, options.seed)?,
                eg.total_worth().to_f64(),
            ),
            AnyEdgeGame::Approx(eg) => (
                shapley_sampled_with(&options.engine, &eg.lift(), options.samples, options.seed)?,
                eg.total_worth(),
            ),
        };
        return Ok(Solution {
            method,
            allocation: AnyAllocation::Approx(allocation),
            grand_worth: AnyAllocation::Approx(single(grand)),
            prune_stats: None,
        });
    }
    let (allocation, grand_worth, prune_stats) = match &game {
        AnyEdgeGame::Exact(eg) => {
            let (a, g, s) = solve_game(eg, method, options)?;
            (AnyAllocation::Exact(a), AnyAllocation::Exact(g), s)
        }
        AnyEdgeGame::Approx(eg) => {
            let (a, g, s) = solve_game(eg, method, options)?;
            (AnyAllocation::Approx(a), AnyAllocation::Approx(g), s)
        }
    };
    Ok(Solution {
        method,
        allocation,
        grand_worth,
        prune_stats,
    })
}
