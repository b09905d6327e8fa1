//! Flexible graph connectivity: feasibility checking, cut-family analysis,
//! and a primal-dual cover engine that emits exact dual certificates.
//!
//! An instance is an edge-labeled multigraph in which every edge is either
//! safe or unsafe. A subgraph `F` is `(p,q)`-feasible when deleting any `q`
//! or fewer unsafe edges of `F` still leaves a `p`-edge-connected graph.
//! The solver pipeline first picks a `(p,1)`-feasible subgraph, then
//! augments the cuts that remain deficient for `q = 2` by running a
//! primal-dual covering algorithm over the family of deficient cuts.
//! All dual arithmetic is exact (arbitrary-precision rationals), so the
//! certificates shipped with every run either hold exactly or fail loudly.

pub mod counterexample;
pub mod exact;
pub mod family;
pub mod fgc;
pub mod flow;
pub mod graph;
pub mod instances;
pub mod pd;
pub mod pipeline;
pub mod rational;
pub mod shore;

pub use graph::{EdgeId, LabeledMultigraph, NodeId, Safety};
pub use rational::Cost;
pub use shore::NodeShore;
