pub mod flow;
pub mod region;
pub mod simplex;

pub use flow::{
    build_and_solve, build_and_solve_mcmf, build_and_solve_mmf, FlowSolution, ProblemKind,
};
pub use region::RegionSubset;
pub use simplex::{Constraint, LinearProgram, LpError, LpSolution, Relation};
