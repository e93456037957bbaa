//! Maximum-mean cycle by Karp's characterization, in exact arithmetic.
//!
//! For a strongly connected graph with `n` vertices and a source `s`, let
//! `F_k(v)` be the maximum weight of a walk of exactly `k` edges from `s` to
//! `v`. Then
//!
//! ```text
//! λ* = max_v min_{0 <= k < n} (F_n(v) - F_k(v)) / (n - k)
//! ```
//!
//! Graphs that are not strongly connected are split into components first;
//! the best component wins. The cycle itself is read off the optimal
//! `n`-edge walk into the maximizing vertex: every cycle on that walk has
//! mean exactly `λ*`, and the one closed first when walking backwards from
//! the end is returned.

use std::collections::HashMap;

use num_traits::Zero;

use super::graph::WeightedSchedulingGraph;
use crate::digraph::{component_has_cycle, strongly_connected_components, Adjacency};
use crate::par;
use crate::scalar::Rational;

pub trait WeightedDigraph: Adjacency + Sync {
    /// Weight of the edge to `successors(from)[position]`.
    fn weight(&self, from: usize, position: usize) -> &Rational;
}

impl WeightedDigraph for WeightedSchedulingGraph<'_> {
    fn weight(&self, from: usize, position: usize) -> &Rational {
        let to = self.graph().successors(from)[position] as usize;
        self.arrival_weight(to)
    }
}

impl Adjacency for WeightedSchedulingGraph<'_> {
    fn vertex_count(&self) -> usize {
        self.graph().vertex_count()
    }

    fn successors(&self, v: usize) -> &[u32] {
        self.graph().successors(v)
    }
}

/// Plain weighted digraph with explicit edge weights; parallel edges allowed.
#[derive(Clone, Debug, Default)]
pub struct Digraph {
    succ: Vec<Vec<u32>>,
    weights: Vec<Vec<Rational>>,
}

impl Digraph {
    pub fn new(vertices: usize) -> Self {
        Digraph {
            succ: vec![Vec::new(); vertices],
            weights: vec![Vec::new(); vertices],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: Rational) {
        self.succ[from].push(to as u32);
        self.weights[from].push(weight);
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.succ.iter().enumerate().flat_map(move |(u, s)| {
            s.iter()
                .zip(&self.weights[u])
                .map(move |(&v, w)| (u, v as usize, w))
        })
    }
}

impl Adjacency for Digraph {
    fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self.succ[v]
    }
}

impl WeightedDigraph for Digraph {
    fn weight(&self, from: usize, position: usize) -> &Rational {
        &self.weights[from][position]
    }
}

/// A cycle `v_0, ..., v_m` with `v_0 = v_m` and its mean edge weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleResult {
    pub cycle: Vec<usize>,
    pub mean: Rational,
}

impl CycleResult {
    pub fn len(&self) -> usize {
        self.cycle.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.len() <= 1
    }
}

/// Maximum-mean cycle over all components; `None` for an acyclic graph.
///
/// Ties between components go to the one with the smallest vertex; ties
/// within a component follow the dynamic program's scan order.
pub fn max_mean_cycle<G: WeightedDigraph>(g: &G) -> Option<CycleResult> {
    let comps: Vec<Vec<usize>> = strongly_connected_components(g, |_| true)
        .into_iter()
        .filter(|c| component_has_cycle(g, c))
        .collect();
    let results = par::map_slice(&comps, |comp| karp_component(g, comp));
    let mut best: Option<CycleResult> = None;
    for r in results {
        if best.as_ref().is_none_or(|b| r.mean > b.mean) {
            best = Some(r);
        }
    }
    best
}

fn karp_component<G: WeightedDigraph>(g: &G, comp: &[usize]) -> CycleResult {
    let n = comp.len();
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // best[k][j]: max weight of a k-edge walk from comp[0] to comp[j];
    // pred[k][j]: (local predecessor, successor position) on that walk.
    let mut best: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
    let mut pred: Vec<Vec<(u32, u32)>> = vec![vec![(u32::MAX, u32::MAX); n]; n + 1];
    best[0][0] = Some(Rational::zero());
    for k in 1..=n {
        let (done, rest) = best.split_at_mut(k);
        let (prev, cur) = (&done[k - 1], &mut rest[0]);
        for (i, &u) in comp.iter().enumerate() {
            let Some(fu) = &prev[i] else { continue };
            for (pos, &v) in g.successors(u).iter().enumerate() {
                let Some(&j) = local.get(&(v as usize)) else {
                    continue;
                };
                let cand = fu + g.weight(u, pos);
                if cur[j].as_ref().is_none_or(|f| cand > *f) {
                    cur[j] = Some(cand);
                    pred[k][j] = (i as u32, pos as u32);
                }
            }
        }
    }

    let mut lambda: Option<(Rational, usize)> = None;
    for (j, last) in best[n].iter().enumerate() {
        let Some(fn_j) = last else { continue };
        let worst = (0..n)
            .filter_map(|k| {
                best[k][j]
                    .as_ref()
                    .map(|fk| (fn_j - fk) / Rational::from_integer(((n - k) as i64).into()))
            })
            .min()
            .expect("vertex of a strongly connected component is reachable in < n steps");
        if lambda.as_ref().is_none_or(|(l, _)| worst > *l) {
            lambda = Some((worst, j));
        }
    }
    let (lambda, end) = lambda.expect("component with a cycle has n-edge walks");

    // Walk back from (n, end) and close the first repeated vertex.
    let mut walk = vec![(end, u32::MAX); n + 1];
    for k in (1..=n).rev() {
        let (i, pos) = pred[k][walk[k].0];
        walk[k].1 = pos;
        walk[k - 1].0 = i as usize;
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut cycle_span = None;
    for k in (0..=n).rev() {
        if let Some(&later) = seen.get(&walk[k].0) {
            cycle_span = Some((k, later));
            break;
        }
        seen.insert(walk[k].0, k);
    }
    let (start, stop) = cycle_span.expect("an n-edge walk on n vertices repeats a vertex");
    let cycle: Vec<usize> = walk[start..=stop].iter().map(|&(j, _)| comp[j]).collect();
    let total = (start + 1..=stop).fold(Rational::zero(), |acc, k| {
        acc + g.weight(comp[walk[k - 1].0], walk[k].1 as usize)
    });
    let mean = total / Rational::from_integer(((stop - start) as i64).into());
    debug_assert_eq!(
        mean, lambda,
        "cycle on the optimal walk must attain the maximum mean"
    );
    CycleResult { cycle, mean }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn single_self_loop() {
        let mut g = Digraph::new(1);
        g.add_edge(0, 0, rational(5, 1));
        let r = max_mean_cycle(&g).unwrap();
        assert_eq!(r.mean, rational(5, 1));
        assert_eq!(r.cycle, vec![0, 0]);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn two_cycle() {
        let mut g = Digraph::new(2);
        g.add_edge(0, 1, rational(2, 1));
        g.add_edge(1, 0, rational(4, 1));
        let r = max_mean_cycle(&g).unwrap();
        assert_eq!(r.mean, rational(3, 1));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn acyclic_graph_has_no_cycle() {
        let mut g = Digraph::new(3);
        g.add_edge(0, 1, rational(1, 1));
        g.add_edge(1, 2, rational(1, 1));
        assert!(max_mean_cycle(&g).is_none());
    }

    #[test]
    fn picks_best_component() {
        let mut g = Digraph::new(5);
        g.add_edge(0, 1, rational(1, 1));
        g.add_edge(1, 0, rational(1, 1));
        g.add_edge(1, 2, rational(100, 1));
        g.add_edge(2, 3, rational(3, 1));
        g.add_edge(3, 2, rational(4, 1));
        g.add_edge(4, 4, rational(-1, 1));
        let r = max_mean_cycle(&g).unwrap();
        assert_eq!(r.mean, rational(7, 2));
        let mut inner = r.cycle[..2].to_vec();
        inner.sort();
        assert_eq!(inner, vec![2, 3]);
    }

    #[test]
    fn parallel_edges_use_the_heavier_one() {
        let mut g = Digraph::new(2);
        g.add_edge(0, 1, rational(1, 1));
        g.add_edge(0, 1, rational(5, 1));
        g.add_edge(1, 0, rational(1, 1));
        assert_eq!(max_mean_cycle(&g).unwrap().mean, rational(3, 1));
    }
}
