//! Two-step reference method: enumerate the whole rate region, then solve
//! one flow LP over it.

pub mod cycles;
pub mod hull;
pub mod mis;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::joint::{resolve_oracle, Method, OracleKind, SolveOptions, SolveReport};
use crate::lp::{build_and_solve, RegionSubset};
use crate::net::{Network, RateVector, SessionSet};
use crate::par;
use crate::scalar::{Rational, Scalar};
use crate::sched::{build_scheduling_graph, GraphLimits, SchedulingGraph};

pub use cycles::cycles_from;
pub use hull::extreme_points;
pub use mis::maximal_independent_sets;

/// Indicators of every maximal independent set, plus the zero vector.
pub fn region_zero_delay(net: &Network, cap: usize) -> Result<RegionSubset> {
    if net.has_nonzero_delay() {
        return Err(Error::InvalidArgument(
            "independent-set region requires a zero-delay network".into(),
        ));
    }
    let links = net.link_count();
    let mut vertices = vec![RateVector::zeros(links)];
    vertices.extend(
        maximal_independent_sets(net, cap)?
            .iter()
            .map(|s| RateVector::indicator(links, s)),
    );
    RegionSubset::from_vertices(vertices)
}

/// Rate vectors of all simple cycles of the scheduling graph, deduplicated
/// and sorted, plus the zero vector.
pub fn region_delay(
    net: &Network,
    window: usize,
    limits: GraphLimits,
    max_cycles: usize,
) -> Result<RegionSubset> {
    let graph = build_scheduling_graph(net, window, limits)?;
    region_of_graph(&graph, max_cycles)
}

pub fn region_of_graph(graph: &SchedulingGraph, max_cycles: usize) -> Result<RegionSubset> {
    let links = graph.link_count();
    let rows: Vec<Vec<u32>> = (0..graph.vertex_count())
        .map(|v| (0..links).map(|l| graph.row_count(v, l)).collect())
        .collect();
    let seen = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);

    // Key: (active counts per link, cycle length * window) reduced by their
    // gcd, which identifies the rate vector without rational arithmetic.
    let keys = par::map_range(graph.vertex_count(), |s| {
        let mut local: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut counts = vec![0u32; links + 1];
        cycles_from(graph, s, |cycle| {
            if seen.fetch_add(1, Ordering::Relaxed) >= max_cycles {
                overflow.store(true, Ordering::Relaxed);
                return false;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &v in cycle {
                for (c, r) in counts.iter_mut().zip(&rows[v]) {
                    *c += r;
                }
            }
            counts[links] = (cycle.len() * graph.window()) as u32;
            let g = counts.iter().fold(0u32, |acc, &c| acc.gcd(&c));
            local.insert(counts.iter().map(|c| c / g).collect());
            !overflow.load(Ordering::Relaxed)
        });
        local
    });
    if overflow.load(Ordering::Relaxed) {
        return Err(Error::EnumerationOverflow {
            what: "simple cycles",
            cap: max_cycles,
        });
    }
    let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
    for k in keys {
        all.extend(k);
    }
    let mut vertices = vec![RateVector::zeros(links)];
    vertices.extend(all.into_iter().map(|key| {
        let denom = i64::from(key[links]);
        RateVector(
            key[..links]
                .iter()
                .map(|&c| Rational::new(i64::from(c).into(), denom.into()))
                .collect(),
        )
    }));
    let mut sorted = vertices;
    sorted[1..].sort();
    RegionSubset::from_vertices(sorted)
}

/// Full region, then a single LP.
pub fn two_step_solve(
    net: &Network,
    sessions: &SessionSet,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    if opts.exact {
        two_step_with::<Rational>(net, sessions, opts)
    } else {
        two_step_with::<f64>(net, sessions, opts)
    }
}

fn two_step_with<S: Scalar>(
    net: &Network,
    sessions: &SessionSet,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    net.ensure_valid()?;
    sessions.ensure_valid(net)?;
    let oracle = resolve_oracle(net, opts.mode)?;
    let (region, graph) = match oracle {
        OracleKind::Mwis => (region_zero_delay(net, opts.max_independent_sets)?, None),
        OracleKind::Mmc => {
            let window = opts.window.unwrap_or_else(|| crate::sched::min_window(net));
            let graph = build_scheduling_graph(net, window, opts.graph_limits)?;
            (region_of_graph(&graph, opts.max_cycles)?, Some(graph))
        }
    };
    let solution = build_and_solve::<S>(net, sessions, &region, opts.kind)?.to_rational();
    Ok(SolveReport {
        method: Method::TwoStep,
        kind: opts.kind,
        oracle,
        exact: S::EXACT,
        tolerance: opts.tolerance(),
        window: graph.as_ref().map(SchedulingGraph::window),
        graph_vertices: graph.as_ref().map(SchedulingGraph::vertex_count),
        graph_edges: graph.as_ref().map(SchedulingGraph::edge_count),
        objective: solution.objective.clone(),
        solution,
        region,
        iterations: Vec::new(),
        rounding_anomaly: false,
        elapsed: start.elapsed(),
    })
}
