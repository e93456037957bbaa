use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_traits::Zero;

use crate::digraph::Adjacency;
use crate::error::{Error, Result};
use crate::net::{Network, RateVector};
use crate::par;
use crate::scalar::{Rational, Scalar};

/// A `|L| x T` binary block packed column-major: cell `(l, t)` is bit
/// `t * |L| + l`.
pub type Block = u128;

pub const MAX_BLOCK_CELLS: usize = Block::BITS as usize;
pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;
pub const DEFAULT_EDGE_CAP: usize = 1 << 27;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            max_vertices: DEFAULT_VERTEX_CAP,
            max_edges: DEFAULT_EDGE_CAP,
        }
    }
}

/// Smallest admissible window: `max(1, max |D(l, l')|)`.
pub fn min_window(net: &Network) -> usize {
    (net.max_abs_delay() as usize).max(1)
}

/// Conflict masks between the cells of one window and of two adjacent
/// windows.
struct CellConflicts {
    /// For cell `c`, the cells `< c` of the same window it collides with.
    earlier: Vec<Block>,
    /// For cell `c` of a window, the cells of the following window it
    /// collides with (in either direction).
    next: Vec<Block>,
}

impl CellConflicts {
    fn new(net: &Network, window: usize) -> Self {
        let links = net.link_count();
        let cells = links * window;
        let cell = |l: usize, t: usize| t * links + l;
        let mut earlier = vec![0 as Block; cells];
        let mut next = vec![0 as Block; cells];
        let w = window as i64;
        for l in 0..links {
            for (other, delay) in net.interferers(l) {
                for t in 0..window {
                    let partner = t as i64 + delay;
                    if (0..w).contains(&partner) {
                        let (a, b) = (cell(l, t), cell(other, partner as usize));
                        let (lo, hi) = (a.min(b), a.max(b));
                        earlier[hi] |= 1 << lo;
                    } else if (w..2 * w).contains(&partner) {
                        next[cell(l, t)] |= 1 << cell(other, (partner - w) as usize);
                    } else if (-w..0).contains(&partner) {
                        // l active in the later window, partner in the earlier one
                        next[cell(other, (partner + w) as usize)] |= 1 << cell(l, t);
                    }
                }
            }
        }
        CellConflicts { earlier, next }
    }

    fn internally_free(&self, block: Block) -> bool {
        ones(block).all(|c| block & self.earlier[c] == 0)
    }

    fn forbidden_successors(&self, block: Block) -> Block {
        ones(block).fold(0, |acc, c| acc | self.next[c])
    }
}

fn ones(block: Block) -> impl Iterator<Item = usize> {
    let mut rest = block;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(c)
    })
}

/// The scheduling graph: vertices are the internally collision-free
/// `|L| x T` blocks, edges join blocks that may follow one another.
#[derive(Clone, Debug)]
pub struct SchedulingGraph {
    links: usize,
    window: usize,
    blocks: Vec<Block>,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

impl SchedulingGraph {
    pub fn link_count(&self) -> usize {
        self.links
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Blocks in canonical (ascending numeric) order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> Block {
        self.blocks[v]
    }

    pub fn vertex_of(&self, block: Block) -> Option<usize> {
        self.blocks.binary_search(&block).ok()
    }

    pub fn successors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from].binary_search(&(to as u32)).is_ok()
    }

    pub fn cell(&self, v: usize, link: usize, slot: usize) -> bool {
        self.blocks[v] >> (slot * self.links + link) & 1 == 1
    }

    /// Number of active slots of `link` in block `v`.
    pub fn row_count(&self, v: usize, link: usize) -> u32 {
        (0..self.window).filter(|&t| self.cell(v, link, t)).count() as u32
    }

    /// Block rendered column by column, each column top (first link) to
    /// bottom, e.g. `1001` for links 1 and 4 active in a one-slot window.
    pub fn block_bits(&self, v: usize) -> String {
        let mut s = String::with_capacity(self.links * self.window + self.window);
        for t in 0..self.window {
            if t > 0 {
                s.push('|');
            }
            for l in 0..self.links {
                s.push(if self.cell(v, l, t) { '1' } else { '0' });
            }
        }
        s
    }

    /// Vertex list followed by the adjacency matrix, rows = source vertex.
    pub fn dump(&self) -> String {
        let n = self.vertex_count();
        let width = format!("v{}", n.saturating_sub(1)).len();
        let mut out = String::new();
        for v in 0..n {
            let _ = writeln!(out, "{:>width$} = {}", format!("v{v}"), self.block_bits(v));
        }
        let _ = write!(out, "{:>width$}", "");
        for v in 0..n {
            let _ = write!(out, " {:>width$}", format!("v{v}"));
        }
        out.push('\n');
        for u in 0..n {
            let _ = write!(out, "{:>width$}", format!("v{u}"));
            for v in 0..n {
                let bit = if self.has_edge(u, v) { '1' } else { '0' };
                let _ = write!(out, " {bit:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

impl Adjacency for SchedulingGraph {
    fn vertex_count(&self) -> usize {
        self.blocks.len()
    }

    fn successors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }
}

/// Builds the scheduling graph for window length `window`.
pub fn build_scheduling_graph(
    net: &Network,
    window: usize,
    limits: GraphLimits,
) -> Result<SchedulingGraph> {
    net.ensure_valid()?;
    let minimum = min_window(net);
    if window < minimum {
        return Err(Error::WindowTooSmall { window, minimum });
    }
    let links = net.link_count();
    let cells = links * window;
    let too_large = |what, cap| Error::SchedulingGraphTooLarge {
        what,
        cap,
        links,
        window,
    };
    if cells > MAX_BLOCK_CELLS {
        return Err(too_large("block cells", MAX_BLOCK_CELLS));
    }
    let conflicts = CellConflicts::new(net, window);
    let blocks = enumerate_blocks(&conflicts, cells, limits.max_vertices)
        .ok_or_else(|| too_large("vertices", limits.max_vertices))?;

    let edge_total = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);
    let adjacency = par::map_slice(&blocks, |&from| {
        if overflow.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let forbidden = conflicts.forbidden_successors(from);
        let succ: Vec<u32> = blocks
            .iter()
            .enumerate()
            .filter(|(_, &to)| to & forbidden == 0)
            .map(|(i, _)| i as u32)
            .collect();
        if edge_total.fetch_add(succ.len(), Ordering::Relaxed) + succ.len() > limits.max_edges {
            overflow.store(true, Ordering::Relaxed);
        }
        succ
    });
    if overflow.load(Ordering::Relaxed) {
        return Err(too_large("edges", limits.max_edges));
    }
    let edge_count = adjacency.iter().map(Vec::len).sum();
    Ok(SchedulingGraph {
        links,
        window,
        blocks,
        adjacency,
        edge_count,
    })
}

/// All internally collision-free blocks, ascending; `None` past the cap.
fn enumerate_blocks(conflicts: &CellConflicts, cells: usize, cap: usize) -> Option<Vec<Block>> {
    // Expand a short prefix sequentially, then complete the prefixes in
    // parallel.
    let split = cells.min(8);
    let mut prefixes = vec![0 as Block];
    for c in 0..split {
        let mut grown = Vec::with_capacity(prefixes.len() * 2);
        for &p in &prefixes {
            grown.push(p);
            if p & conflicts.earlier[c] == 0 {
                grown.push(p | 1 << c);
            }
        }
        prefixes = grown;
    }
    let count = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);
    let parts = par::map_slice(&prefixes, |&prefix| {
        let mut out = Vec::new();
        extend_block(
            conflicts, prefix, split, cells, cap, &count, &overflow, &mut out,
        );
        out
    });
    if overflow.load(Ordering::Relaxed) {
        return None;
    }
    let mut blocks: Vec<Block> = parts.into_iter().flatten().collect();
    blocks.sort_unstable();
    debug_assert!(blocks.iter().all(|&b| conflicts.internally_free(b)));
    Some(blocks)
}

#[allow(clippy::too_many_arguments)]
fn extend_block(
    conflicts: &CellConflicts,
    partial: Block,
    cell: usize,
    cells: usize,
    cap: usize,
    count: &AtomicUsize,
    overflow: &AtomicBool,
    out: &mut Vec<Block>,
) {
    if overflow.load(Ordering::Relaxed) {
        return;
    }
    if cell == cells {
        if count.fetch_add(1, Ordering::Relaxed) >= cap {
            overflow.store(true, Ordering::Relaxed);
        } else {
            out.push(partial);
        }
        return;
    }
    extend_block(
        conflicts,
        partial,
        cell + 1,
        cells,
        cap,
        count,
        overflow,
        out,
    );
    if partial & conflicts.earlier[cell] == 0 {
        let set = partial | 1 << cell;
        extend_block(conflicts, set, cell + 1, cells, cap, count, overflow, out);
    }
}

/// A scheduling graph whose edge `(u, v)` carries `a^T v 1`, the weighted
/// count of active cells of the arriving block.
#[derive(Clone, Debug)]
pub struct WeightedSchedulingGraph<'g> {
    graph: &'g SchedulingGraph,
    arrival: Vec<Rational>,
}

impl<'g> WeightedSchedulingGraph<'g> {
    pub fn graph(&self) -> &'g SchedulingGraph {
        self.graph
    }

    /// Weight of every edge entering `v`.
    pub fn arrival_weight(&self, v: usize) -> &Rational {
        &self.arrival[v]
    }

    pub fn edge_weight(&self, from: usize, to: usize) -> Option<&Rational> {
        self.graph.has_edge(from, to).then(|| &self.arrival[to])
    }
}

pub fn weight_graph<'g, S: Scalar>(
    graph: &'g SchedulingGraph,
    weights: &[S],
) -> Result<WeightedSchedulingGraph<'g>> {
    if weights.len() != graph.links {
        return Err(Error::InvalidArgument(format!(
            "weight vector has {} entries for {} links",
            weights.len(),
            graph.links
        )));
    }
    let a: Vec<Rational> = weights.iter().map(Scalar::to_rational).collect();
    let arrival = par::map_range(graph.vertex_count(), |v| {
        (0..graph.links).fold(Rational::zero(), |acc, l| match graph.row_count(v, l) {
            0 => acc,
            k => acc + &a[l] * Rational::from_integer(k.into()),
        })
    });
    Ok(WeightedSchedulingGraph { graph, arrival })
}

/// Rate vector of the periodic schedule that repeats the cycle's blocks:
/// `R(l) = (active slots of l over the cycle) / (m T)`.
pub fn cycle_to_rate_vector(graph: &SchedulingGraph, cycle: &[usize]) -> RateVector {
    let m = cycle.len().saturating_sub(1).max(1);
    let denom = (m * graph.window) as i64;
    RateVector(
        (0..graph.links)
            .map(|l| {
                let active: u32 = cycle[..m].iter().map(|&v| graph.row_count(v, l)).sum();
                Rational::new(i64::from(active).into(), denom.into())
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::gen_line_network;
    use crate::scalar::rational;

    /// Reference blocks v0..v8 for the 4-hop unit-delay line, as columns.
    pub(crate) const LINE4_BLOCKS: [[u8; 4]; 9] = [
        [0, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 1],
        [1, 1, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 1, 1],
    ];

    fn block_of(column: &[u8; 4]) -> Block {
        column
            .iter()
            .enumerate()
            .fold(0, |acc, (l, &b)| acc | (b as Block) << l)
    }

    fn line4() -> SchedulingGraph {
        let net = gen_line_network(4, 1, 1).unwrap();
        build_scheduling_graph(&net, 1, GraphLimits::default()).unwrap()
    }

    #[test]
    fn min_window_cases() {
        assert_eq!(min_window(&gen_line_network(4, 1, 1).unwrap()), 1);
        assert_eq!(min_window(&gen_line_network(4, 1, 0).unwrap()), 1);
        assert_eq!(min_window(&gen_line_network(4, 2, 3).unwrap()), 3);
    }

    #[test]
    fn rejects_short_window() {
        let net = gen_line_network(4, 2, 3).unwrap();
        let err = build_scheduling_graph(&net, 2, GraphLimits::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::WindowTooSmall {
                window: 2,
                minimum: 3
            }
        ));
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let net = gen_line_network(6, 1, 1).unwrap();
        let limits = GraphLimits {
            max_vertices: 10,
            ..GraphLimits::default()
        };
        let err = build_scheduling_graph(&net, 1, limits).unwrap_err();
        assert!(matches!(
            err,
            Error::SchedulingGraphTooLarge {
                what: "vertices",
                ..
            }
        ));
    }

    #[test]
    fn line4_vertex_set() {
        let g = line4();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 56);
        for column in &LINE4_BLOCKS {
            assert!(g.vertex_of(block_of(column)).is_some());
        }
    }

    #[test]
    fn two_link_zero_delay_is_complete() {
        let net = gen_line_network(2, 1, 0).unwrap();
        let g = build_scheduling_graph(&net, 1, GraphLimits::default()).unwrap();
        assert_eq!(g.blocks(), &[0b00, 0b01, 0b10]);
        assert_eq!(g.edge_count(), 9);
    }

    #[test]
    fn single_link_graph() {
        let net = gen_line_network(1, 1, 1).unwrap();
        let g = build_scheduling_graph(&net, 1, GraphLimits::default()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn weights_depend_on_arriving_block() {
        let g = line4();
        let a = [1i64, 0, 1, 0].map(|x| rational(x, 1));
        let wg = weight_graph(&g, &a).unwrap();
        let v5 = g.vertex_of(block_of(&LINE4_BLOCKS[5])).unwrap();
        for u in 0..g.vertex_count() {
            if let Some(w) = wg.edge_weight(u, v5) {
                assert_eq!(*w, rational(1, 1));
            }
        }
        let ones = [1.0f64; 4];
        let wg = weight_graph(&g, &ones).unwrap();
        let v0 = g.vertex_of(0).unwrap();
        let v6 = g.vertex_of(block_of(&LINE4_BLOCKS[6])).unwrap();
        assert_eq!(*wg.arrival_weight(v0), rational(0, 1));
        assert_eq!(*wg.arrival_weight(v6), rational(2, 1));
        let zero = weight_graph(&g, &[0.0f64; 4]).unwrap();
        assert!((0..9).all(|v| zero.arrival_weight(v).is_zero()));
    }

    #[test]
    fn rate_vector_of_two_cycle() {
        let g = line4();
        let v4 = g.vertex_of(block_of(&LINE4_BLOCKS[4])).unwrap();
        let v1 = g.vertex_of(block_of(&LINE4_BLOCKS[1])).unwrap();
        assert!(g.has_edge(v4, v1) && g.has_edge(v1, v4));
        let r = cycle_to_rate_vector(&g, &[v4, v1, v4]);
        let h = rational(1, 2);
        let z = rational(0, 1);
        assert_eq!(r.0, vec![h.clone(), z.clone(), z, h]);

        let v5 = g.vertex_of(block_of(&LINE4_BLOCKS[5])).unwrap();
        let r = cycle_to_rate_vector(&g, &[v5, v5]);
        assert_eq!(r.to_f64(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn dump_lists_blocks_and_matrix() {
        let net = gen_line_network(2, 1, 0).unwrap();
        let g = build_scheduling_graph(&net, 1, GraphLimits::default()).unwrap();
        let text = g.dump();
        assert!(text.contains("v1 = 10"));
        assert!(text.contains("v2 = 01"));
        assert_eq!(text.lines().count(), 3 + 1 + 3);
    }
}
