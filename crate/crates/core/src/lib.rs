//! Exact maximum multiflow and maximum concurrent multiflow for
//! interference-limited multi-hop networks.
//!
//! The joint solver keeps a small list of rate-region vertices, solves a flow
//! LP over their convex hull, and asks an oracle for the vertex that is best
//! under the LP's link prices: a maximum-weight independent set when delays
//! are zero, a maximum-mean cycle of the scheduling graph otherwise. It stops
//! once the oracle cannot beat the vertices it already has.

pub mod baseline;
pub mod bench;
pub mod digraph;
pub mod error;
pub mod joint;
pub mod lp;
pub mod mwis;
pub mod net;
pub mod par;
pub mod scalar;
pub mod sched;

pub use error::{Error, Result};
pub use joint::{solve, Mode, OracleKind, SolveOptions, SolveReport};
pub use lp::{FlowSolution, ProblemKind, RegionSubset};
pub use net::{Network, RateVector, Session, SessionSet};
pub use scalar::{Rational, Scalar};
