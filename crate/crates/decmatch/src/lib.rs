//! Decremental (1-eps)-approximate maximum-weight matching for general
//! weighted multigraphs via congestion balancing.
//!
//! The crate is organized around the pipeline that maintains the matching
//! under adversarial edge deletions:
//!
//! - [`graph`]: multigraph, capacities, fractional matchings, collapse /
//!   distribute transforms, double cover, feasibility checkers.
//! - [`oracle`]: brute-force ground truth (exact integral matching, exact
//!   capacitated bipartite LP with dual certificates).
//! - [`stat`]: static weighted matching with dual certificates.
//! - [`frac`]: the single-scale primal-dual solver for capacitated
//!   fractional matching on bipartite multigraphs, plus the double-cover
//!   lift to general graphs.
//! - [`congestion`]: sample, statically match, and either assemble a
//!   near-optimal fractional matching or return the bottleneck set.
//! - [`sparsify`]: value buckets, dynamic edge coloring, color sampling
//!   and rounding of the fractional part to an integral matching.
//! - [`engine`]: the decremental matching engine (phases, capacity
//!   boosting, counters, rebuilds).
//! - [`reduction`]: vertex reduction into multigraph instances and the
//!   orchestrator that runs them in parallel with restarts.
//! - [`small`]: core-graph fallback for graphs whose matching weight has
//!   become small.
//! - [`cli`]: file formats, run modes and instance generation behind the
//!   `decmatch` binary; the library examples drive the same entry points.

pub mod blossom;
pub mod cli;
pub mod congestion;
pub mod engine;
pub mod frac;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod rng;
pub mod small;
pub mod sparsify;
pub mod stat;

pub use graph::{
    CapacityFn, CollapsedMatching, EdgeId, FractionalMatching, VertexId, WeightedMultigraph,
};
pub use rational::Rat;
