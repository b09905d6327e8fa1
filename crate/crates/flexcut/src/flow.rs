//! Edge connectivity of a spanning subgraph via repeated max-flow.
//!
//! Undirected unit-capacity flow with parallel edges merged into integer
//! capacities. The global edge connectivity is the minimum over all targets
//! `t != 0` of the max 0→t flow, because the minimum cut separates node 0
//! from some node.

use std::collections::VecDeque;

use crate::graph::{EdgeSet, GraphError, LabeledMultigraph, NodeId};

/// λ(V, F): size of the smallest cut of the subgraph `(V, F)`. Returns 0 when
/// `F` does not connect the graph.
pub fn edge_connectivity(g: &LabeledMultigraph, f: &EdgeSet) -> Result<usize, GraphError> {
    let n = g.node_count();
    let mut net = FlowNetwork::new(n);
    for &id in f {
        let e = g.edge(id)?;
        net.add_undirected(e.u, e.v, 1);
    }
    let mut best = usize::MAX;
    for t in 1..n as NodeId {
        best = best.min(net.max_flow(0, t));
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

struct FlowNetwork {
    // Arcs stored as (to, capacity); arc i and i^1 are a residual pair.
    arcs: Vec<(NodeId, i64)>,
    adjacency: Vec<Vec<usize>>,
    // Baseline capacities so the network can be reset between flow queries.
    base: Vec<i64>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); n],
            base: Vec::new(),
        }
    }

    fn add_undirected(&mut self, u: NodeId, v: NodeId, cap: i64) {
        // Merge into an existing arc pair when the endpoints repeat.
        if let Some(&i) = self.adjacency[u as usize]
            .iter()
            .find(|&&i| self.arcs[i].0 == v && i % 2 == 0)
        {
            self.base[i / 2] += cap;
            return;
        }
        let i = self.arcs.len();
        self.arcs.push((v, 0));
        self.arcs.push((u, 0));
        self.base.push(cap);
        self.adjacency[u as usize].push(i);
        self.adjacency[v as usize].push(i + 1);
    }

    fn reset(&mut self) {
        // Undirected edge: full capacity on both residual directions.
        for (pair, arcs) in self.base.iter().zip(self.arcs.chunks_mut(2)) {
            arcs[0].1 = *pair;
            arcs[1].1 = *pair;
        }
    }

    fn max_flow(&mut self, s: NodeId, t: NodeId) -> usize {
        self.reset();
        let mut total = 0i64;
        while let Some(levels) = self.bfs_levels(s, t) {
            let mut iter = vec![0usize; self.adjacency.len()];
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &levels, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total as usize
    }

    fn bfs_levels(&self, s: NodeId, t: NodeId) -> Option<Vec<i32>> {
        let mut levels = vec![-1; self.adjacency.len()];
        levels[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.adjacency[u as usize] {
                let (to, cap) = self.arcs[i];
                if cap > 0 && levels[to as usize] < 0 {
                    levels[to as usize] = levels[u as usize] + 1;
                    queue.push_back(to);
                }
            }
        }
        (levels[t as usize] >= 0).then_some(levels)
    }

    fn dfs(&mut self, u: NodeId, t: NodeId, limit: i64, levels: &[i32], iter: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while iter[u as usize] < self.adjacency[u as usize].len() {
            let i = self.adjacency[u as usize][iter[u as usize]];
            let (to, cap) = self.arcs[i];
            if cap > 0 && levels[to as usize] == levels[u as usize] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap), levels, iter);
                if pushed > 0 {
                    self.arcs[i].1 -= pushed;
                    self.arcs[i ^ 1].1 += pushed;
                    return pushed;
                }
            }
            iter[u as usize] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, EdgeSet, Safety};
    use crate::rational::from_int;
    use crate::shore::NodeShore;
    use proptest::prelude::*;

    fn graph(n: usize, pairs: &[(NodeId, NodeId)]) -> LabeledMultigraph {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge {
                u,
                v,
                cost: from_int(1),
                safety: Safety::Safe,
            })
            .collect();
        LabeledMultigraph::new(n, edges).unwrap()
    }

    /// Independent oracle: minimize |δ(S) ∩ F| over all 2^(n-1) - 1 shores.
    fn connectivity_by_shore_scan(g: &LabeledMultigraph, f: &EdgeSet) -> usize {
        let n = g.node_count();
        (1u32..(1 << (n - 1)))
            .map(|mask| {
                let shore =
                    NodeShore::from_members(n, (0..n as NodeId - 1).filter(|v| mask >> v & 1 == 1).map(|v| v + 1))
                        .unwrap();
                g.cut_size_in(&shore, f)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn doubled_cycle_is_four_connected() {
        let g = crate::instances::doubled_four_cycle();
        assert_eq!(edge_connectivity(&g, &g.all_edges()).unwrap(), 4);
    }

    #[test]
    fn path_tree_and_disconnection() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(edge_connectivity(&g, &g.all_edges()).unwrap(), 1);
        assert_eq!(edge_connectivity(&g, &EdgeSet::from([0, 1])).unwrap(), 0);
        assert_eq!(edge_connectivity(&g, &EdgeSet::new()).unwrap(), 0);
    }

    #[test]
    fn parallel_edges_add_capacity() {
        let g = graph(2, &[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(edge_connectivity(&g, &g.all_edges()).unwrap(), 3);
    }

    #[test]
    fn complete_graph_connectivity_is_degree() {
        let mut pairs = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                pairs.push((u, v));
            }
        }
        let g = graph(5, &pairs);
        assert_eq!(edge_connectivity(&g, &g.all_edges()).unwrap(), 4);
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_shore_scan(
            n in 2usize..8,
            edge_seeds in proptest::collection::vec((0u32..8, 0u32..8), 0..20),
            f_bits in any::<u32>(),
        ) {
            let pairs: Vec<(NodeId, NodeId)> = edge_seeds
                .iter()
                .filter(|(u, v)| (*u as usize) < n && (*v as usize) < n && u != v)
                .copied()
                .collect();
            prop_assume!(!pairs.is_empty());
            let g = graph(n, &pairs);
            let f: EdgeSet = g.edge_ids().filter(|&id| f_bits >> (id % 32) & 1 == 1).collect();
            prop_assert_eq!(
                edge_connectivity(&g, &f).unwrap(),
                connectivity_by_shore_scan(&g, &f)
            );
        }
    }
}
