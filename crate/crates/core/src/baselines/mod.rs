//! Comparison searches over the same fitness: greedy forward selection, a binary genetic
//! algorithm and binary particle swarm optimization.

mod ga;
mod pso;
mod quickreduct;

pub use ga::{ga_search, ga_search_with, GaConfig};
pub use pso::{pso_search, pso_search_with, PsoConfig, Swarm};
pub use quickreduct::{quickreduct, quickreduct_with, QUICKREDUCT_TOLERANCE};
