//! Flexible-connectivity feasibility and deficient cuts.
//!
//! An edge set `F` is `(p,q)`-feasible when removing any at most `q` unsafe
//! edges from `F` leaves a `p`-edge-connected subgraph. Equivalently, every
//! proper shore `S` must satisfy `s + max(0, u − q) ≥ p`, where `s` and `u`
//! count the safe and unsafe edges of `δ(S) ∩ F`: an adversary deletes
//! `min(q, u)` unsafe edges from whichever cut it attacks, so the per-cut
//! inequality is exactly what survives. Both routes are implemented; the
//! per-shore test is the production one and the removal enumeration serves
//! as a cross-check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow;
use crate::graph::{EdgeSet, GraphError, LabeledMultigraph};
use crate::shore::NodeShore;

/// Largest node count for which cut enumeration is attempted by default.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 18;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FgcError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cut enumeration over {n} nodes exceeds the limit of {limit}")]
    EnumerationTooLarge { n: usize, limit: usize },
    #[error("instance is infeasible even using every edge: {witness}")]
    InstanceInfeasible { witness: DeficiencyWitness },
    #[error("edge set is not ({p},1)-feasible: {witness}")]
    NotP1Feasible { p: u32, witness: DeficiencyWitness },
    #[error("expected q={expected}, instance has q={got}")]
    UnsupportedQ { expected: u32, got: u32 },
}

/// A shore certifying that `F` fails the per-cut inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyWitness {
    pub shore: NodeShore,
    pub total_edges: usize,
    pub unsafe_edges: usize,
    pub required: u32,
    pub q: u32,
}

impl fmt::Display for DeficiencyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} total={} unsafe={} (needs s + max(0, u-{}) >= {})",
            self.shore, self.total_edges, self.unsafe_edges, self.q, self.required
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    Feasible,
    Infeasible(DeficiencyWitness),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

/// Per-cut counts of an edge set across one shore.
fn cut_counts(g: &LabeledMultigraph, f: &EdgeSet, shore: &NodeShore) -> (usize, usize) {
    let mut total = 0;
    let mut unsafe_count = 0;
    for &id in f {
        let e = &g.edges()[id as usize];
        if e.crosses(shore) {
            total += 1;
            if !e.is_safe() {
                unsafe_count += 1;
            }
        }
    }
    (total, unsafe_count)
}

/// Decides `(p,q)`-feasibility of `F` by scanning every canonical shore.
/// On failure, returns the first failing shore in enumeration order
/// (ascending bitmask over nodes `1..n`, node 0 fixed outside).
pub fn feasibility(
    g: &LabeledMultigraph,
    p: u32,
    q: u32,
    f: &EdgeSet,
    enumeration_limit: usize,
) -> Result<Feasibility, FgcError> {
    let n = g.node_count();
    if n > enumeration_limit {
        return Err(FgcError::EnumerationTooLarge {
            n,
            limit: enumeration_limit,
        });
    }
    if p == 0 {
        return Ok(Feasibility::Feasible);
    }
    for shore in canonical_shores(n) {
        let (total, unsafe_count) = cut_counts(g, f, &shore);
        let safe = total - unsafe_count;
        let shortfall_cover = unsafe_count.saturating_sub(q as usize);
        if safe + shortfall_cover < p as usize {
            return Ok(Feasibility::Infeasible(DeficiencyWitness {
                shore,
                total_edges: total,
                unsafe_edges: unsafe_count,
                required: p,
                q,
            }));
        }
    }
    Ok(Feasibility::Feasible)
}

/// All proper shores not containing node 0, in ascending bitmask order over
/// nodes `1..n`.
pub fn canonical_shores(n: usize) -> impl Iterator<Item = NodeShore> {
    let count: u64 = 1 << (n - 1);
    (1..count).map(move |mask| {
        let members = (0..n - 1).filter(move |&i| mask >> i & 1 == 1).map(|i| (i + 1) as u32);
        NodeShore::from_members(n, members).expect("mask shores are proper")
    })
}

/// Cross-check route: search for at most `q` unsafe edges of `F` whose
/// removal drops the edge connectivity below `p`. Returns such a removal
/// set, or `None` when `F` is `(p,q)`-feasible.
pub fn infeasible_removal(
    g: &LabeledMultigraph,
    p: u32,
    q: u32,
    f: &EdgeSet,
) -> Result<Option<EdgeSet>, GraphError> {
    if p == 0 {
        return Ok(None);
    }
    let unsafe_in_f: Vec<u32> = f
        .iter()
        .copied()
        .filter(|&id| !g.edges()[id as usize].is_safe())
        .collect();
    let mut removal = Vec::new();
    search_removals(g, p, q as usize, f, &unsafe_in_f, 0, &mut removal)
}

fn search_removals(
    g: &LabeledMultigraph,
    p: u32,
    budget: usize,
    f: &EdgeSet,
    unsafe_in_f: &[u32],
    start: usize,
    removal: &mut Vec<u32>,
) -> Result<Option<EdgeSet>, GraphError> {
    let remaining: EdgeSet = f
        .iter()
        .copied()
        .filter(|id| !removal.contains(id))
        .collect();
    if flow::edge_connectivity(g, &remaining)? < p as usize {
        return Ok(Some(removal.iter().copied().collect()));
    }
    if budget == 0 {
        return Ok(None);
    }
    for i in start..unsafe_in_f.len() {
        removal.push(unsafe_in_f[i]);
        let found = search_removals(g, p, budget - 1, f, unsafe_in_f, i + 1, removal)?;
        removal.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A cut that blocks `(p,2)`-feasibility of a `(p,1)`-feasible edge set:
/// exactly `p+1` edges with at least two unsafe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficientCut {
    pub shore: NodeShore,
    pub total_edges: usize,
    pub unsafe_edges: usize,
}

impl fmt::Display for DeficientCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} total={} unsafe={}",
            self.shore, self.total_edges, self.unsafe_edges
        )
    }
}

/// Enumerates the deficient cuts of a `(p,1)`-feasible edge set `f1`,
/// i.e. the canonical shores whose cut in `f1` would fail `(p,2)`-
/// feasibility. `(p,1)`-feasibility of `f1` is a precondition and is
/// verified first.
///
/// For a `(p,1)`-feasible `f1`, every cut satisfies `s + max(0, u−1) ≥ p`;
/// the cuts failing `s + max(0, u−2) ≥ p` are then exactly those with
/// `p+1` edges of which at least two are unsafe. `p`-cuts of `f1` have no
/// unsafe edge at all, so augmenting every deficient cut with one new edge
/// restores `(p,2)`-feasibility.
pub fn deficient_cuts(
    g: &LabeledMultigraph,
    p: u32,
    f1: &EdgeSet,
    enumeration_limit: usize,
) -> Result<Vec<DeficientCut>, FgcError> {
    let n = g.node_count();
    if n > enumeration_limit {
        return Err(FgcError::EnumerationTooLarge {
            n,
            limit: enumeration_limit,
        });
    }
    let mut cuts = Vec::new();
    for shore in canonical_shores(n) {
        let (total, unsafe_count) = cut_counts(g, f1, &shore);
        let safe = total - unsafe_count;
        if safe + unsafe_count.saturating_sub(1) < p as usize {
            return Err(FgcError::NotP1Feasible {
                p,
                witness: DeficiencyWitness {
                    shore,
                    total_edges: total,
                    unsafe_edges: unsafe_count,
                    required: p,
                    q: 1,
                },
            });
        }
        if safe + unsafe_count.saturating_sub(2) < p as usize {
            debug_assert!(total == p as usize + 1 && unsafe_count >= 2);
            cuts.push(DeficientCut {
                shore,
                total_edges: total,
                unsafe_edges: unsafe_count,
            });
        }
    }
    cuts.sort_by(|a, b| a.shore.cmp(&b.shore));
    Ok(cuts)
}

/// A validated `(p,q)` flexible-connectivity instance: the full edge set is
/// feasible, so an optimal solution exists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FgcInstance {
    graph: LabeledMultigraph,
    p: u32,
    q: u32,
    enumeration_limit: usize,
}

impl FgcInstance {
    pub fn new(graph: LabeledMultigraph, p: u32, q: u32) -> Result<Self, FgcError> {
        let instance = Self::new_unchecked(graph, p, q);
        match instance.is_feasible(&instance.graph.all_edges())? {
            Feasibility::Feasible => Ok(instance),
            Feasibility::Infeasible(witness) => Err(FgcError::InstanceInfeasible { witness }),
        }
    }

    /// Builds without checking that the full edge set is feasible, so that
    /// infeasible instances can still be analysed and reported on.
    pub fn new_unchecked(graph: LabeledMultigraph, p: u32, q: u32) -> Self {
        FgcInstance {
            graph,
            p,
            q,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }

    pub fn with_enumeration_limit(mut self, limit: usize) -> Self {
        self.enumeration_limit = limit;
        self
    }

    pub fn graph(&self) -> &LabeledMultigraph {
        &self.graph
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn enumeration_limit(&self) -> usize {
        self.enumeration_limit
    }

    pub fn is_feasible(&self, f: &EdgeSet) -> Result<Feasibility, FgcError> {
        feasibility(&self.graph, self.p, self.q, f, self.enumeration_limit)
    }

    /// Deficient cuts of a `(p,1)`-feasible edge set, for `q = 2` instances.
    pub fn deficient_cuts(&self, f1: &EdgeSet) -> Result<Vec<DeficientCut>, FgcError> {
        if self.q != 2 {
            return Err(FgcError::UnsupportedQ {
                expected: 2,
                got: self.q,
            });
        }
        deficient_cuts(&self.graph, self.p, f1, self.enumeration_limit)
    }
}
