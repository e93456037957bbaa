//! Scheduling graphs for networks with propagation delay.

pub mod graph;
pub mod mmc;
pub mod schedule;

pub use graph::{
    build_scheduling_graph, cycle_to_rate_vector, min_window, weight_graph, Block, GraphLimits,
    SchedulingGraph, WeightedSchedulingGraph, DEFAULT_EDGE_CAP, DEFAULT_VERTEX_CAP,
    MAX_BLOCK_CELLS,
};
pub use mmc::{max_mean_cycle, CycleResult, Digraph, WeightedDigraph};
pub use schedule::{empirical_rate, realize_schedule, verify_collision_free, Collision, Schedule};
