//! Exact brute-force solvers, used as ground truth for the approximation
//! pipeline on small instances.
//!
//! Both solvers run the same depth-first search over edge subsets in
//! (cost, id) order with include-first branching. Three prunes keep it
//! exact: feasible nodes stop descending (a superset of a feasible set is
//! never cheaper, and because zero-cost edges sort first it is never
//! lexicographically smaller either), branches whose partial cost already
//! exceeds the incumbent stop, and branches that stay infeasible even after
//! adding every remaining edge stop. Ties between equal-cost optima break
//! toward the lexicographically smallest sorted edge-id list, so results
//! are deterministic.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::CutFamily;
use crate::fgc;
use crate::graph::{EdgeId, EdgeSet, GraphError, LabeledMultigraph};
use crate::rational::Cost;
use crate::shore::NodeShore;

/// Resource limits for the exact solvers. Exceeding a limit is an error,
/// never a silent approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_subsets_explored: u64,
    pub max_family_shores: usize,
}

impl SolveBudget {
    /// Default limits for feasibility solves.
    pub fn for_feasibility() -> Self {
        SolveBudget {
            max_nodes: 12,
            max_edges: 20,
            max_subsets_explored: 10_000_000,
            max_family_shores: 10_000,
        }
    }

    /// Default limits for family-cover solves, where the node count does
    /// not drive the search.
    pub fn for_covers() -> Self {
        SolveBudget {
            max_nodes: usize::MAX,
            max_edges: 24,
            max_subsets_explored: 10_000_000,
            max_family_shores: 10_000,
        }
    }

    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_max_subsets(mut self, max_subsets_explored: u64) -> Self {
        self.max_subsets_explored = max_subsets_explored;
        self
    }

    pub fn with_max_family_shores(mut self, max_family_shores: usize) -> Self {
        self.max_family_shores = max_family_shores;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{n} nodes exceed the solve budget of {max}")]
    TooManyNodes { n: usize, max: usize },
    #[error("{m} edges exceed the solve budget of {max}")]
    TooManyEdges { m: usize, max: usize },
    #[error("{count} family shores exceed the solve budget of {max}")]
    TooManyShores { count: usize, max: usize },
    #[error("search exceeded the budget of {max} explored subsets")]
    BudgetExceeded { max: u64 },
    #[error("no feasible edge set exists: {witness}")]
    Infeasible { witness: fgc::DeficiencyWitness },
    #[error("no candidate edge lies on the cut of S={shore}")]
    Uncoverable { shore: NodeShore },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub edges: Vec<EdgeId>,
    #[serde(with = "crate::rational::serde_cost")]
    pub cost: Cost,
    /// Search nodes visited; a determinism and budget diagnostic.
    pub explored: u64,
}

impl ExactSolution {
    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }
}

/// Shared subset search. `bits` maps search positions (already sorted by
/// (cost, id)) to bit indices; `feasible` must be monotone (supersets of
/// feasible masks stay feasible).
struct SubsetSearch<'a, F: Fn(u64) -> bool> {
    costs: &'a [Cost],
    bits: &'a [u32],
    suffix: &'a [u64],
    feasible: F,
    max_explored: u64,
    explored: u64,
    incumbent: Option<(Cost, Vec<u32>)>,
}

impl<F: Fn(u64) -> bool> SubsetSearch<'_, F> {
    fn run(&mut self) -> Result<(), SolveError> {
        self.dfs(0, 0, Cost::zero())
    }

    fn dfs(&mut self, pos: usize, mask: u64, cost: Cost) -> Result<(), SolveError> {
        self.explored += 1;
        if self.explored > self.max_explored {
            return Err(SolveError::BudgetExceeded {
                max: self.max_explored,
            });
        }
        if (self.feasible)(mask) {
            let picked: Vec<u32> = (0..64).filter(|b| mask >> b & 1 == 1).collect();
            let better = match &self.incumbent {
                None => true,
                Some((c, ids)) => cost < *c || (cost == *c && picked < *ids),
            };
            if better {
                self.incumbent = Some((cost, picked));
            }
            return Ok(());
        }
        if pos == self.bits.len() {
            return Ok(());
        }
        if !(self.feasible)(mask | self.suffix[pos]) {
            return Ok(());
        }
        let with = &cost + &self.costs[pos];
        let fits = match &self.incumbent {
            None => true,
            Some((c, _)) => with <= *c,
        };
        if fits {
            self.dfs(pos + 1, mask | 1 << self.bits[pos], with)?;
        }
        self.dfs(pos + 1, mask, cost)
    }
}

/// (cost, id)-sorted search positions over the given edge ids.
fn sorted_positions(g: &LabeledMultigraph, ids: &[EdgeId]) -> (Vec<Cost>, Vec<EdgeId>) {
    let mut order: Vec<EdgeId> = ids.to_vec();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (&g.edges()[a as usize], &g.edges()[b as usize]);
        ea.cost.cmp(&eb.cost).then(a.cmp(&b))
    });
    let costs = order.iter().map(|&id| g.edges()[id as usize].cost.clone()).collect();
    (costs, order)
}

fn suffix_masks(bits: &[u32]) -> Vec<u64> {
    let mut suffix = vec![0u64; bits.len()];
    let mut acc = 0u64;
    for (i, &b) in bits.iter().enumerate().rev() {
        acc |= 1 << b;
        suffix[i] = acc;
    }
    suffix
}

/// Minimum-cost `(p,q)`-feasible edge subset by exhaustive search.
pub fn exact_min_cost_feasible(
    g: &LabeledMultigraph,
    p: u32,
    q: u32,
    budget: &SolveBudget,
) -> Result<ExactSolution, SolveError> {
    let (n, m) = (g.node_count(), g.edge_count());
    if n > budget.max_nodes {
        return Err(SolveError::TooManyNodes {
            n,
            max: budget.max_nodes,
        });
    }
    let max_edges = budget.max_edges.min(64);
    if m > max_edges {
        return Err(SolveError::TooManyEdges { m, max: max_edges });
    }

    // Per-shore edge and unsafe masks; feasibility of a subset is then a
    // popcount scan.
    let shore_masks: Vec<(u64, u64)> = fgc::canonical_shores(n)
        .map(|shore| {
            let mut edge_mask = 0u64;
            let mut unsafe_mask = 0u64;
            for (id, e) in g.edges().iter().enumerate() {
                if e.crosses(&shore) {
                    edge_mask |= 1 << id;
                    if !e.is_safe() {
                        unsafe_mask |= 1 << id;
                    }
                }
            }
            (edge_mask, unsafe_mask)
        })
        .collect();
    let feasible = |mask: u64| {
        shore_masks.iter().all(|&(em, um)| {
            let total = (em & mask).count_ones() as usize;
            let unsafe_count = (um & mask).count_ones() as usize;
            let safe = total - unsafe_count;
            safe + unsafe_count.saturating_sub(q as usize) >= p as usize
        })
    };

    let ids: Vec<EdgeId> = (0..m as EdgeId).collect();
    let (costs, order) = sorted_positions(g, &ids);
    let suffix = suffix_masks(&order);
    let mut search = SubsetSearch {
        costs: &costs,
        bits: &order,
        suffix: &suffix,
        feasible,
        max_explored: budget.max_subsets_explored,
        explored: 0,
        incumbent: None,
    };
    search.run()?;
    let explored = search.explored;
    match search.incumbent {
        Some((cost, edges)) => Ok(ExactSolution {
            edges,
            cost,
            explored,
        }),
        None => {
            let witness = match fgc::feasibility(g, p, q, &g.all_edges(), n) {
                Ok(fgc::Feasibility::Infeasible(w)) => w,
                Ok(fgc::Feasibility::Feasible) => {
                    unreachable!("search visits the full edge set")
                }
                Err(fgc::FgcError::Graph(e)) => return Err(SolveError::Graph(e)),
                Err(e) => unreachable!("a limit of n nodes cannot be exceeded: {e}"),
            };
            Err(SolveError::Infeasible { witness })
        }
    }
}

/// Minimum-cost subset of `candidates` meeting every member cut of the
/// family, by exhaustive search with constraint-domination pruning.
pub fn exact_min_cost_cover(
    g: &LabeledMultigraph,
    candidates: &EdgeSet,
    family: &CutFamily,
    budget: &SolveBudget,
) -> Result<ExactSolution, SolveError> {
    if family.len() > budget.max_family_shores {
        return Err(SolveError::TooManyShores {
            count: family.len(),
            max: budget.max_family_shores,
        });
    }
    let max_edges = budget.max_edges.min(64);
    if candidates.len() > max_edges {
        return Err(SolveError::TooManyEdges {
            m: candidates.len(),
            max: max_edges,
        });
    }
    let cand_list: Vec<EdgeId> = candidates.iter().copied().collect();
    for &id in &cand_list {
        g.edge(id)?;
    }

    // Constraint mask over candidate positions for every member cut.
    let mut masks = Vec::with_capacity(family.len());
    for shore in family.shores() {
        let mut mask = 0u64;
        for (pos, &id) in cand_list.iter().enumerate() {
            if g.edges()[id as usize].crosses(shore) {
                mask |= 1 << pos;
            }
        }
        if mask == 0 {
            return Err(SolveError::Uncoverable {
                shore: shore.clone(),
            });
        }
        masks.push(mask);
    }
    // Keep only inclusion-minimal constraints: a cut containing another
    // cut's candidate edges is covered whenever the smaller one is.
    masks.sort_by_key(|m| m.count_ones());
    masks.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for m in masks {
        if !kept.iter().any(|k| k & m == *k) {
            kept.push(m);
        }
    }
    let feasible = move |mask: u64| kept.iter().all(|c| c & mask != 0);

    // Search positions index into cand_list; candidate ids ascend with
    // position, so position-lexicographic ties equal id-lexicographic ones.
    let mut positions: Vec<u32> = (0..cand_list.len() as u32).collect();
    positions.sort_by(|&a, &b| {
        let (ea, eb) = (
            &g.edges()[cand_list[a as usize] as usize],
            &g.edges()[cand_list[b as usize] as usize],
        );
        ea.cost.cmp(&eb.cost).then(a.cmp(&b))
    });
    let costs: Vec<Cost> = positions
        .iter()
        .map(|&pos| g.edges()[cand_list[pos as usize] as usize].cost.clone())
        .collect();
    let suffix = suffix_masks(&positions);
    let mut search = SubsetSearch {
        costs: &costs,
        bits: &positions,
        suffix: &suffix,
        feasible,
        max_explored: budget.max_subsets_explored,
        explored: 0,
        incumbent: None,
    };
    search.run()?;
    let explored = search.explored;
    let (cost, picked) = search
        .incumbent
        .expect("every constraint mask is nonempty, so the full mask is feasible");
    Ok(ExactSolution {
        edges: picked.into_iter().map(|pos| cand_list[pos as usize]).collect(),
        cost,
        explored,
    })
}
