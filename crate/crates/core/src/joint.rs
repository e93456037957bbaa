//! The joint iteration: flow LP over a growing vertex list, priced by an
//! exact oracle over the full rate region.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{build_and_solve, FlowSolution, ProblemKind, RegionSubset};
use crate::mwis::{greedy_maximal_independent_set, mwis_solve};
use crate::net::{Network, RateVector, SessionSet};
use crate::scalar::{Rational, Scalar, FLOAT_TOLERANCE};
use crate::sched::{
    build_scheduling_graph, cycle_to_rate_vector, max_mean_cycle, min_window, weight_graph,
    GraphLimits, SchedulingGraph,
};

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_MIS_CAP: usize = 1 << 20;
pub const DEFAULT_CYCLE_CAP: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Delay mode iff some collision pair has a nonzero delay.
    Auto,
    ZeroDelay,
    Delay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Maximum-weight independent set on the conflict graph.
    Mwis,
    /// Maximum-mean cycle on the weighted scheduling graph.
    Mmc,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Mwis => "mwis",
            OracleKind::Mmc => "mmc",
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::ZeroDelay => "zero-delay",
            Mode::Delay => "delay",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub kind: ProblemKind,
    pub mode: Mode,
    /// Run the LP in exact rational arithmetic with zero tolerances.
    pub exact: bool,
    /// Scheduling window; defaults to the minimum admissible one.
    pub window: Option<usize>,
    pub max_iterations: usize,
    pub graph_limits: GraphLimits,
    /// Caps for the two-step baseline's enumerations.
    pub max_independent_sets: usize,
    pub max_cycles: usize,
    /// Among price-optimal vertices, prefer the largest total rate.
    pub prefer_total_rate: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            kind: ProblemKind::Mmf,
            mode: Mode::Auto,
            exact: false,
            window: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            graph_limits: GraphLimits::default(),
            max_independent_sets: DEFAULT_MIS_CAP,
            max_cycles: DEFAULT_CYCLE_CAP,
            prefer_total_rate: true,
        }
    }
}

impl SolveOptions {
    pub fn new(kind: ProblemKind, mode: Mode) -> Self {
        SolveOptions {
            kind,
            mode,
            ..Self::default()
        }
    }

    pub fn exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn tolerance(&self) -> f64 {
        if self.exact {
            0.0
        } else {
            FLOAT_TOLERANCE
        }
    }
}

pub fn resolve_oracle(net: &Network, mode: Mode) -> Result<OracleKind> {
    match mode {
        Mode::Auto if net.has_nonzero_delay() => Ok(OracleKind::Mmc),
        Mode::Auto => Ok(OracleKind::Mwis),
        Mode::ZeroDelay if net.has_nonzero_delay() => Err(Error::InvalidArgument(
            "zero-delay mode requested on a network with nonzero delays".into(),
        )),
        Mode::ZeroDelay => Ok(OracleKind::Mwis),
        Mode::Delay => Ok(OracleKind::Mmc),
    }
}

/// Linear optimization over the full rate region.
pub enum Oracle {
    Mwis,
    Mmc(SchedulingGraph),
}

impl Oracle {
    pub fn new(net: &Network, kind: OracleKind, opts: &SolveOptions) -> Result<Self> {
        Ok(match kind {
            OracleKind::Mwis => Oracle::Mwis,
            OracleKind::Mmc => {
                let window = opts.window.unwrap_or_else(|| min_window(net));
                Oracle::Mmc(build_scheduling_graph(net, window, opts.graph_limits)?)
            }
        })
    }

    pub fn kind(&self) -> OracleKind {
        match self {
            Oracle::Mwis => OracleKind::Mwis,
            Oracle::Mmc(_) => OracleKind::Mmc,
        }
    }

    pub fn graph(&self) -> Option<&SchedulingGraph> {
        match self {
            Oracle::Mwis => None,
            Oracle::Mmc(g) => Some(g),
        }
    }

    /// Like [`Oracle::best_vertex`], but among maximizers of `<a, R>` returns
    /// one with the largest total rate `<1, R>`.
    ///
    /// Adds `delta` to every weight, with `delta` below the smallest gap
    /// between distinct objective values divided by the largest possible
    /// total rate, so the maximizer set of `<a, .>` is never changed.
    pub fn best_vertex_by_total(
        &self,
        net: &Network,
        a: &[Rational],
    ) -> Result<(RateVector, Rational)> {
        let links = a.len().max(1) as i64;
        let denom = a.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let spread = match self {
            // set values differ by >= 1/denom; totals are <= links
            Oracle::Mwis => BigInt::from(2 * links),
            // cycle means differ by >= 1/(denom n^2); window-scaled totals <= links*T
            Oracle::Mmc(g) => {
                let n = g.vertex_count() as i64;
                BigInt::from(2 * links * g.window() as i64) * BigInt::from(n) * BigInt::from(n)
            }
        };
        let delta = Rational::new(BigInt::one(), denom * spread);
        let shifted: Vec<Rational> = a.iter().map(|w| w + &delta).collect();
        let (vertex, _) = self.best_vertex(net, &shifted)?;
        let score = vertex.dot(a);
        Ok((vertex, score))
    }

    /// A region vertex maximizing `<a, R>`, and that maximum.
    pub fn best_vertex(&self, net: &Network, a: &[Rational]) -> Result<(RateVector, Rational)> {
        match self {
            Oracle::Mwis => {
                let sol = mwis_solve(net, a)?;
                Ok((sol.indicator, sol.value))
            }
            Oracle::Mmc(graph) => {
                let weighted = weight_graph(graph, a)?;
                let cycle = max_mean_cycle(&weighted)
                    .expect("the all-idle block always carries a self-loop");
                let r = cycle_to_rate_vector(graph, &cycle.cycle);
                let window = Rational::from_integer((graph.window() as i64).into());
                Ok((r, cycle.mean / window))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub region_size: usize,
    pub objective: Rational,
    pub dual: Vec<Rational>,
    /// The dual was zero and all-ones weights were used instead.
    pub fallback_weights: bool,
    pub vertex: RateVector,
    /// `<mu, R_new>`.
    pub score: Rational,
    /// `max_{R in subset} <mu, R>`.
    pub incumbent: Rational,
    pub added: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Joint,
    TwoStep,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Joint => "joint",
            Method::TwoStep => "two-step",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub method: Method,
    pub kind: ProblemKind,
    pub oracle: OracleKind,
    pub exact: bool,
    pub tolerance: f64,
    pub window: Option<usize>,
    pub graph_vertices: Option<usize>,
    pub graph_edges: Option<usize>,
    pub objective: Rational,
    pub solution: FlowSolution<Rational>,
    pub region: RegionSubset,
    pub iterations: Vec<IterationRecord>,
    /// The oracle handed back a stored vertex that beat the incumbent,
    /// which only rounding can cause.
    pub rounding_anomaly: bool,
    pub elapsed: Duration,
}

impl SolveReport {
    pub fn objective_f64(&self) -> f64 {
        self.objective.to_f64()
    }

    pub fn vertices_used(&self) -> usize {
        self.region.len()
    }
}

pub fn solve(net: &Network, sessions: &SessionSet, opts: &SolveOptions) -> Result<SolveReport> {
    if opts.exact {
        solve_with::<Rational>(net, sessions, opts)
    } else {
        solve_with::<f64>(net, sessions, opts)
    }
}

pub fn solve_with<S: Scalar>(
    net: &Network,
    sessions: &SessionSet,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    net.ensure_valid()?;
    sessions.ensure_valid(net)?;
    let oracle = Oracle::new(net, resolve_oracle(net, opts.mode)?, opts)?;
    let links = net.link_count();
    let mut region = RegionSubset::new(RateVector::indicator(
        links,
        &greedy_maximal_independent_set(net),
    ))?;
    let mut iterations: Vec<IterationRecord> = Vec::new();

    for _ in 0..opts.max_iterations {
        let sol = build_and_solve::<S>(net, sessions, &region, opts.kind)?;
        let mu: Vec<Rational> = sol.dual.iter().map(Scalar::to_rational).collect();
        let fallback = mu.iter().all(Zero::is_zero);
        let weights = if fallback {
            vec![Rational::one(); links]
        } else {
            mu.clone()
        };
        let (vertex, _) = if opts.prefer_total_rate {
            oracle.best_vertex_by_total(net, &weights)?
        } else {
            oracle.best_vertex(net, &weights)?
        };
        let score = vertex.dot(&mu);
        let (_, incumbent) = region.best_score(&mu);
        let slack = if S::EXACT {
            Rational::zero()
        } else {
            let tol = FLOAT_TOLERANCE * (1.0 + score.abs().to_f64());
            Rational::from_float(tol).expect("finite tolerance")
        };
        let known = region.contains(&vertex);
        let converged = if fallback {
            known
        } else {
            score <= &incumbent + &slack
        };
        let anomaly = !converged && known;
        let done = converged || anomaly;
        iterations.push(IterationRecord {
            region_size: region.len(),
            objective: sol.objective.to_rational(),
            dual: mu,
            fallback_weights: fallback,
            vertex: vertex.clone(),
            score,
            incumbent,
            added: !done,
        });
        if done {
            let solution = sol.to_rational();
            return Ok(SolveReport {
                method: Method::Joint,
                kind: opts.kind,
                oracle: oracle.kind(),
                exact: S::EXACT,
                tolerance: opts.tolerance(),
                window: oracle.graph().map(SchedulingGraph::window),
                graph_vertices: oracle.graph().map(SchedulingGraph::vertex_count),
                graph_edges: oracle.graph().map(SchedulingGraph::edge_count),
                objective: solution.objective.clone(),
                solution,
                region,
                iterations,
                rounding_anomaly: anomaly,
                elapsed: start.elapsed(),
            });
        }
        region.insert(vertex)?;
    }
    Err(Error::IterationCapExceeded(opts.max_iterations))
}
