//! Maximum multiflow and maximum concurrent multiflow over a region subset.
//!
//! Each session `i` owns one flow `F_ij` per sink. The sinks of a session
//! share a coupling variable `G_i(l) >= F_ij(l)`, which is how intra-session
//! network coding enters: a link carries the largest per-sink flow, not the
//! sum. The link capacity is a point of the region subset written as a
//! convex combination `R = sum_k lambda_k R_k`, and the dual of
//! `sum_i G_i(l) <= R(l)` is the link price handed to the oracles.

use std::fmt;

use crate::error::{Error, Result};
use crate::lp::region::RegionSubset;
use crate::lp::simplex::{LinearProgram, LpSolution, Relation};
use crate::net::{Network, SessionSet};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// Maximize the sum of session rates.
    Mmf,
    /// Maximize `phi` with every session at rate `phi * gamma_i`.
    Mcmf,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Mmf => "mmf",
            ProblemKind::Mcmf => "mcmf",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution<S> {
    pub kind: ProblemKind,
    /// `sum_i v_i` or `phi`.
    pub objective: S,
    /// Per-session rate `v_i`.
    pub rates: Vec<S>,
    /// `flows[i][j][l]` is `F_ij(l)`.
    pub flows: Vec<Vec<Vec<S>>>,
    /// `couplings[i][l]` is `G_i(l)`.
    pub couplings: Vec<Vec<S>>,
    /// Convex-combination weights over the region subset.
    pub lambda: Vec<S>,
    /// The chosen rate vector `sum_k lambda_k R_k`.
    pub rate: Vec<S>,
    /// Link prices, one per link.
    pub dual: Vec<S>,
    pub pivots: usize,
}

struct Layout {
    links: usize,
    /// First variable of `F_ij`, indexed `[i][j]`.
    flow: Vec<Vec<usize>>,
    coupling: Vec<usize>,
    rate: usize,
    lambda: usize,
    total: usize,
}

impl Layout {
    fn new(links: usize, sessions: &SessionSet, kind: ProblemKind, vertices: usize) -> Self {
        let mut next = 0;
        let mut flow = Vec::new();
        for s in sessions.iter() {
            flow.push(
                s.sinks
                    .iter()
                    .map(|_| {
                        next += links;
                        next - links
                    })
                    .collect(),
            );
        }
        let coupling = (0..sessions.len())
            .map(|_| {
                next += links;
                next - links
            })
            .collect();
        let rate = next;
        next += match kind {
            ProblemKind::Mmf => sessions.len(),
            ProblemKind::Mcmf => 1,
        };
        let lambda = next;
        next += vertices;
        Layout {
            links,
            flow,
            coupling,
            rate,
            lambda,
            total: next,
        }
    }
}

pub fn build_and_solve_mmf<S: Scalar>(
    net: &Network,
    sessions: &SessionSet,
    region: &RegionSubset,
) -> Result<FlowSolution<S>> {
    build_and_solve(net, sessions, region, ProblemKind::Mmf)
}

pub fn build_and_solve_mcmf<S: Scalar>(
    net: &Network,
    sessions: &SessionSet,
    region: &RegionSubset,
) -> Result<FlowSolution<S>> {
    build_and_solve(net, sessions, region, ProblemKind::Mcmf)
}

pub fn build_and_solve<S: Scalar>(
    net: &Network,
    sessions: &SessionSet,
    region: &RegionSubset,
    kind: ProblemKind,
) -> Result<FlowSolution<S>> {
    sessions.ensure_valid(net)?;
    let links = net.link_count();
    if region.links() != links {
        return Err(Error::InvalidArgument(format!(
            "region subset has {} links, network has {links}",
            region.links()
        )));
    }
    let layout = Layout::new(links, sessions, kind, region.len());
    let mut lp = LinearProgram::<S>::new(layout.total);
    let one = S::one;

    match kind {
        ProblemKind::Mmf => {
            for i in 0..sessions.len() {
                lp.set_objective(layout.rate + i, one());
            }
        }
        ProblemKind::Mcmf => lp.set_objective(layout.rate, one()),
    }

    for (i, s) in sessions.iter().enumerate() {
        for (j, &sink) in s.sinks.iter().enumerate() {
            let base = layout.flow[i][j];
            for node in 0..net.node_count() {
                if node == sink {
                    continue;
                }
                let mut row: Vec<(usize, S)> = Vec::new();
                for l in net.out_links(node) {
                    row.push((base + l, one()));
                }
                for l in net.in_links(node) {
                    row.push((base + l, -one()));
                }
                if node == s.source {
                    row.push(match kind {
                        ProblemKind::Mmf => (layout.rate + i, -one()),
                        ProblemKind::Mcmf => (layout.rate, -S::from_rational(&s.gamma)),
                    });
                }
                if !row.is_empty() {
                    lp.add_constraint(row, Relation::Eq, S::zero());
                }
            }
            for l in 0..links {
                lp.add_constraint(
                    vec![(base + l, one()), (layout.coupling[i] + l, -one())],
                    Relation::Le,
                    S::zero(),
                );
            }
        }
    }

    let mut link_rows = Vec::with_capacity(links);
    for l in 0..links {
        let mut row: Vec<(usize, S)> = (0..sessions.len())
            .map(|i| (layout.coupling[i] + l, one()))
            .collect();
        for (k, v) in region.vertices().iter().enumerate() {
            if !num_traits::Zero::is_zero(&v.0[l]) {
                row.push((layout.lambda + k, -S::from_rational(&v.0[l])));
            }
        }
        link_rows.push(lp.add_constraint(row, Relation::Le, S::zero()));
    }
    lp.add_constraint(
        (0..region.len())
            .map(|k| (layout.lambda + k, one()))
            .collect(),
        Relation::Eq,
        one(),
    );

    let sol = lp.solve()?;
    Ok(extract(
        &layout, net, sessions, region, kind, &sol, &link_rows,
    ))
}

fn extract<S: Scalar>(
    layout: &Layout,
    net: &Network,
    sessions: &SessionSet,
    region: &RegionSubset,
    kind: ProblemKind,
    sol: &LpSolution<S>,
    link_rows: &[usize],
) -> FlowSolution<S> {
    let x = &sol.primal;
    let links = layout.links;
    let slice = |start: usize| x[start..start + links].to_vec();
    let rates = match kind {
        ProblemKind::Mmf => (0..sessions.len())
            .map(|i| x[layout.rate + i].clone())
            .collect(),
        ProblemKind::Mcmf => sessions
            .iter()
            .map(|s| x[layout.rate].clone() * S::from_rational(&s.gamma))
            .collect(),
    };
    let lambda: Vec<S> = x[layout.lambda..layout.lambda + region.len()].to_vec();
    let rate = (0..net.link_count())
        .map(|l| {
            region
                .vertices()
                .iter()
                .zip(&lambda)
                .fold(S::zero(), |acc, (v, w)| {
                    acc + S::from_rational(&v.0[l]) * w.clone()
                })
        })
        .collect();
    let dual = link_rows
        .iter()
        .map(|&r| {
            let mut y = sol.duals[r].clone();
            // Round-off can leave a price a hair below zero.
            if y.is_negative() && y.near_zero() {
                y = S::zero();
            }
            y
        })
        .collect();
    FlowSolution {
        kind,
        objective: sol.objective.clone(),
        rates,
        flows: layout
            .flow
            .iter()
            .map(|per_sink| per_sink.iter().map(|&b| slice(b)).collect())
            .collect(),
        couplings: layout.coupling.iter().map(|&b| slice(b)).collect(),
        lambda,
        rate,
        dual,
        pivots: sol.pivots,
    }
}

impl<S: Scalar> FlowSolution<S> {
    /// Checks every structural invariant; returns the first failure.
    ///
    /// Exact solutions are checked with zero tolerance, floating ones with
    /// `1e-7` absolute slack.
    pub fn check(
        &self,
        net: &Network,
        sessions: &SessionSet,
        region: &RegionSubset,
    ) -> std::result::Result<(), String> {
        let tol = if S::EXACT {
            S::zero()
        } else {
            S::from_rational(&Rational::new(1.into(), 10_000_000.into()))
        };
        let below = |a: &S, b: &S| a.clone() <= b.clone() + tol.clone();
        let close = |a: &S, b: &S| below(a, b) && below(b, a);
        let zero = S::zero();

        for (i, s) in sessions.iter().enumerate() {
            for (j, &sink) in s.sinks.iter().enumerate() {
                let f = &self.flows[i][j];
                for (l, (x, c)) in f.iter().zip(&self.couplings[i]).enumerate() {
                    if !below(&zero, x) {
                        return Err(format!("negative flow on session {i} sink {j} link {l}"));
                    }
                    if !below(x, c) {
                        return Err(format!(
                            "flow above coupling on session {i} sink {j} link {l}"
                        ));
                    }
                }
                for node in 0..net.node_count() {
                    let out = net
                        .out_links(node)
                        .fold(zero.clone(), |a, l| a + f[l].clone());
                    let inn = net
                        .in_links(node)
                        .fold(zero.clone(), |a, l| a + f[l].clone());
                    let net_out = out - inn;
                    let expect = if node == s.source {
                        self.rates[i].clone()
                    } else if node == sink {
                        -self.rates[i].clone()
                    } else {
                        zero.clone()
                    };
                    if !close(&net_out, &expect) {
                        return Err(format!(
                            "conservation fails at node {node} for session {i} sink {j}"
                        ));
                    }
                }
            }
        }
        for l in 0..net.link_count() {
            let used = self
                .couplings
                .iter()
                .fold(zero.clone(), |a, g| a + g[l].clone());
            if !below(&used, &self.rate[l]) {
                return Err(format!("link {l} over capacity"));
            }
            if !below(&zero, &self.dual[l]) {
                return Err(format!("negative price on link {l}"));
            }
        }
        if self.lambda.len() != region.len() || self.lambda.iter().any(|w| !below(&zero, w)) {
            return Err("convex weights are not nonnegative".into());
        }
        let total = self.lambda.iter().fold(zero.clone(), |a, w| a + w.clone());
        if !close(&total, &S::one()) {
            return Err("convex weights do not sum to one".into());
        }
        let value = match self.kind {
            ProblemKind::Mmf => self.rates.iter().fold(zero.clone(), |a, v| a + v.clone()),
            ProblemKind::Mcmf => match sessions.iter().next() {
                Some(s) => self.rates[0].clone() / S::from_rational(&s.gamma),
                None => zero.clone(),
            },
        };
        if !close(&value, &self.objective) {
            return Err("objective does not match session rates".into());
        }
        Ok(())
    }

    pub fn to_rational(&self) -> FlowSolution<Rational> {
        let conv = |v: &[S]| v.iter().map(Scalar::to_rational).collect::<Vec<_>>();
        FlowSolution {
            kind: self.kind,
            objective: self.objective.to_rational(),
            rates: conv(&self.rates),
            flows: self
                .flows
                .iter()
                .map(|s| s.iter().map(|f| conv(f)).collect())
                .collect(),
            couplings: self.couplings.iter().map(|g| conv(g)).collect(),
            lambda: conv(&self.lambda),
            rate: conv(&self.rate),
            dual: conv(&self.dual),
            pivots: self.pivots,
        }
    }
}
