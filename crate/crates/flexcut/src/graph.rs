//! Edge-labeled multigraphs and cut primitives.
//!
//! Edges carry a safe/unsafe label and an exact rational cost. Edge ids are
//! assigned by insertion order (file order when parsed), and every report in
//! the crate refers to edges by these ids, so the assignment is part of the
//! interface contract.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Cost, RationalParseError};
use crate::shore::{NodeShore, ShoreError};

pub type NodeId = u32;
pub type EdgeId = u32;
pub type EdgeSet = BTreeSet<EdgeId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Safety {
    Safe,
    Unsafe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    #[serde(with = "crate::rational::serde_cost")]
    pub cost: Cost,
    pub safety: Safety,
}

impl Edge {
    pub fn is_safe(&self) -> bool {
        self.safety == Safety::Safe
    }

    /// Whether exactly one endpoint lies in `side`.
    pub fn crosses(&self, side: &NodeShore) -> bool {
        side.contains(self.u) != side.contains(self.v)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("edge {id} endpoint {node} out of range for {n} nodes")]
    EndpointOutOfRange { id: EdgeId, node: NodeId, n: usize },
    #[error("edge {id} is a self loop at node {node}")]
    SelfLoop { id: EdgeId, node: NodeId },
    #[error("edge {id} has negative cost {cost}")]
    NegativeCost { id: EdgeId, cost: String },
    #[error("edge id {0} out of range ({1} edges)")]
    UnknownEdge(EdgeId, usize),
    #[error(transparent)]
    Shore(#[from] ShoreError),
    #[error("shores must be disjoint for a between() query, they share node {0}")]
    NotDisjoint(NodeId),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("parse error on line {line}: {source}")]
    ParseCost {
        line: usize,
        source: RationalParseError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledMultigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl LabeledMultigraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }
        for (id, e) in edges.iter().enumerate() {
            let id = id as EdgeId;
            for node in [e.u, e.v] {
                if (node as usize) >= n {
                    return Err(GraphError::EndpointOutOfRange { id, node, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { id, node: e.u });
            }
            if e.cost < crate::rational::zero() {
                return Err(GraphError::NegativeCost {
                    id,
                    cost: format_rational(&e.cost),
                });
            }
        }
        Ok(LabeledMultigraph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges
            .get(id as usize)
            .ok_or(GraphError::UnknownEdge(id, self.edges.len()))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        0..self.edges.len() as EdgeId
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.edge_ids().collect()
    }

    pub fn cost_of(&self, edges: &EdgeSet) -> Cost {
        edges
            .iter()
            .map(|&id| self.edges[id as usize].cost.clone())
            .sum()
    }

    /// Unsafe edges of the whole graph.
    pub fn unsafe_edges(&self) -> EdgeSet {
        self.edge_ids()
            .filter(|&id| !self.edges[id as usize].is_safe())
            .collect()
    }

    /// `δ(S)`: all edges with exactly one endpoint in `S`. `S` must be a
    /// nonempty proper shore; `δ(S) = δ(V∖S)` by construction.
    pub fn cut_edges(&self, s: &NodeShore) -> Result<EdgeSet, GraphError> {
        s.require_proper()?;
        Ok(self
            .edge_ids()
            .filter(|&id| self.edges[id as usize].crosses(s))
            .collect())
    }

    /// `δ(S) ∩ F` without materializing the whole cut.
    pub fn cut_edges_in(&self, s: &NodeShore, f: &EdgeSet) -> Result<EdgeSet, GraphError> {
        s.require_proper()?;
        Ok(f.iter()
            .copied()
            .filter(|&id| self.edges[id as usize].crosses(s))
            .collect())
    }

    /// Number of `F`-edges crossing an arbitrary subset (degenerate sides
    /// allowed: the empty set and `V` have empty coboundary).
    pub fn cut_size_in(&self, side: &NodeShore, f: &EdgeSet) -> usize {
        f.iter()
            .filter(|&&id| self.edges[id as usize].crosses(side))
            .count()
    }

    /// Whether any edge of `f` crosses `side`.
    pub fn covers(&self, side: &NodeShore, f: &EdgeSet) -> bool {
        f.iter().any(|&id| self.edges[id as usize].crosses(side))
    }

    /// `E(X, Y)`: edges with one endpoint in `X` and the other in `Y`, for
    /// disjoint `X`, `Y`.
    pub fn between(&self, x: &NodeShore, y: &NodeShore) -> Result<EdgeSet, GraphError> {
        if let Some(&shared) = x.intersection(y).members().first() {
            return Err(GraphError::NotDisjoint(shared));
        }
        Ok(self
            .edge_ids()
            .filter(|&id| {
                let e = &self.edges[id as usize];
                (x.contains(e.u) && y.contains(e.v)) || (x.contains(e.v) && y.contains(e.u))
            })
            .collect())
    }

    fn between_size_in(&self, x: &NodeShore, y: &NodeShore, f: &EdgeSet) -> usize {
        f.iter()
            .filter(|&&id| {
                let e = &self.edges[id as usize];
                (x.contains(e.u) && y.contains(e.v)) || (x.contains(e.v) && y.contains(e.u))
            })
            .count()
    }
}

/// One evaluated identity: both sides of the equation plus the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

impl IdentityCheck {
    fn of(lhs: usize, rhs: usize) -> Self {
        IdentityCheck {
            lhs,
            rhs,
            holds: lhs == rhs,
        }
    }
}

/// Report for the three submodular counting identities relating the cuts of
/// `A`, `B` and their derived sets, restricted to an edge set `F`:
///
/// * union/intersection: `|δ(A∪B)| + |δ(A∩B)| + 2|E(A∖B, B∖A)| = |δ(A)| + |δ(B)|`
/// * differences:        `|δ(A∖B)| + |δ(B∖A)| + 2|E(A∩B, V∖(A∪B))| = |δ(A)| + |δ(B)|`
/// * corner split:       `|δ(A∖B)| + |δ(A∩B)| = |δ(A)| + 2|E(A∖B, A∩B)|`
///
/// These hold for every multigraph and every pair of shores; a failed check
/// indicates a bug in the cut primitives, not in the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingIdentitiesReport {
    pub union_intersection: IdentityCheck,
    pub differences: IdentityCheck,
    pub corner_split: IdentityCheck,
}

impl CountingIdentitiesReport {
    pub fn all_hold(&self) -> bool {
        self.union_intersection.holds && self.differences.holds && self.corner_split.holds
    }
}

pub fn counting_identities_check(
    g: &LabeledMultigraph,
    f: &EdgeSet,
    a: &NodeShore,
    b: &NodeShore,
) -> Result<CountingIdentitiesReport, GraphError> {
    a.require_proper()?;
    b.require_proper()?;
    let union = a.union(b);
    let inter = a.intersection(b);
    let a_minus = a.difference(b);
    let b_minus = b.difference(a);
    let outside = union.complement();

    let da = g.cut_size_in(a, f);
    let db = g.cut_size_in(b, f);
    let union_intersection = IdentityCheck::of(
        g.cut_size_in(&union, f) + g.cut_size_in(&inter, f) + 2 * g.between_size_in(&a_minus, &b_minus, f),
        da + db,
    );
    let differences = IdentityCheck::of(
        g.cut_size_in(&a_minus, f) + g.cut_size_in(&b_minus, f) + 2 * g.between_size_in(&inter, &outside, f),
        da + db,
    );
    let corner_split = IdentityCheck::of(
        g.cut_size_in(&a_minus, f) + g.cut_size_in(&inter, f),
        da + 2 * g.between_size_in(&a_minus, &inter, f),
    );
    Ok(CountingIdentitiesReport {
        union_intersection,
        differences,
        corner_split,
    })
}

/// An instance as stored on disk: the graph plus the connectivity target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub graph: LabeledMultigraph,
    pub p: u32,
    pub q: u32,
}

/// Parses the plain-text instance format:
///
/// ```text
/// n m p q
/// u v cost S|U      (m lines, 0-based node ids, decimal or p/q cost)
/// ```
///
/// Edge ids are assigned in file order starting from 0. Blank lines and
/// `#` comments are ignored.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or(GraphError::Parse {
        line: 0,
        reason: "empty input".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(GraphError::Parse {
            line: line_no,
            reason: format!("header must be `n m p q`, got {} fields", fields.len()),
        });
    }
    let parse_u32 = |line: usize, s: &str, what: &str| -> Result<u32, GraphError> {
        s.parse().map_err(|_| GraphError::Parse {
            line,
            reason: format!("bad {what} {s:?}"),
        })
    };
    let n = parse_u32(line_no, fields[0], "node count")? as usize;
    let m = parse_u32(line_no, fields[1], "edge count")? as usize;
    let p = parse_u32(line_no, fields[2], "connectivity target p")?;
    let q = parse_u32(line_no, fields[3], "robustness target q")?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| GraphError::Parse {
            line: 0,
            reason: format!("expected {m} edge lines, input ended early"),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("edge line must be `u v cost S|U`, got {} fields", fields.len()),
            });
        }
        let u = parse_u32(line_no, fields[0], "endpoint")?;
        let v = parse_u32(line_no, fields[1], "endpoint")?;
        let cost = parse_rational(fields[2]).map_err(|source| GraphError::ParseCost {
            line: line_no,
            source,
        })?;
        let safety = match fields[3] {
            "S" => Safety::Safe,
            "U" => Safety::Unsafe,
            other => {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: format!("safety label must be S or U, got {other:?}"),
                })
            }
        };
        edges.push(Edge { u, v, cost, safety });
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(GraphError::Parse {
            line: line_no,
            reason: "trailing content after last edge line".into(),
        });
    }
    let graph = LabeledMultigraph::new(n, edges)?;
    Ok(ParsedInstance { graph, p, q })
}

pub fn format_instance(g: &LabeledMultigraph, p: u32, q: u32) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {} {}", g.node_count(), g.edge_count(), p, q);
    for e in g.edges() {
        let label = if e.is_safe() { "S" } else { "U" };
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, format_rational(&e.cost), label);
    }
    out
}
