//! Plain exhaustive reference implementations used by the integration
//! suites. Everything here recomputes from first principles with flat
//! masks and loops, sharing no logic with the production code paths it
//! cross-checks, so an agreement failure always implicates exactly one
//! side.

use flexcut::graph::{EdgeSet, LabeledMultigraph};
use flexcut::instances;
use flexcut::rational::Cost;
use flexcut::shore::NodeShore;
use flexcut::EdgeId;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whether the node-mask subgraph stays connected using only `f`-edges
/// minus the removed set, by union over a flat adjacency scan.
fn connected_under(g: &LabeledMultigraph, f: u64, removed: u64) -> bool {
    let n = g.node_count();
    let mut reach: u64 = 1;
    loop {
        let mut grew = false;
        for (id, e) in g.edges().iter().enumerate() {
            let bit = 1u64 << id;
            if f & bit == 0 || removed & bit != 0 {
                continue;
            }
            let (u, v) = (1u64 << e.u, 1u64 << e.v);
            if reach & u != 0 && reach & v == 0 {
                reach |= v;
                grew = true;
            } else if reach & v != 0 && reach & u == 0 {
                reach |= u;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    reach.count_ones() as usize == n
}

/// Minimum number of `f`-edges crossing any proper shore, minus `removed`;
/// 0 when the subgraph is disconnected.
fn min_cut_under(g: &LabeledMultigraph, f: u64, removed: u64) -> usize {
    let n = g.node_count();
    if !connected_under(g, f, removed) {
        return 0;
    }
    let mut best = usize::MAX;
    for mask in 1u64..(1 << (n - 1)) {
        let shore = mask << 1; // node 0 stays on the outside
        let mut crossing = 0;
        for (id, e) in g.edges().iter().enumerate() {
            let bit = 1u64 << id;
            if f & bit == 0 || removed & bit != 0 {
                continue;
            }
            if (shore >> e.u & 1) != (shore >> e.v & 1) {
                crossing += 1;
            }
        }
        best = best.min(crossing);
    }
    best
}

/// Reference `(p,q)`-feasibility by direct adversary enumeration: for
/// every way to remove at most `q` unsafe edges of `f`, the remainder
/// must stay `p`-edge-connected.
pub fn brute_feasibility(g: &LabeledMultigraph, p: u32, q: u32, f: &EdgeSet) -> bool {
    if p == 0 {
        return true;
    }
    let f_mask: u64 = f.iter().map(|&e| 1u64 << e).sum();
    let unsafe_ids: Vec<EdgeId> = g
        .unsafe_edges()
        .into_iter()
        .filter(|e| f.contains(e))
        .collect();
    let mut removals: Vec<u64> = vec![0];
    let mut frontier: Vec<u64> = vec![0];
    for _ in 0..q {
        let mut next = Vec::new();
        for &r in &frontier {
            for &e in &unsafe_ids {
                let bit = 1u64 << e;
                if r & bit == 0 {
                    next.push(r | bit);
                }
            }
        }
        removals.extend(next.iter().copied());
        frontier = next;
    }
    removals
        .into_iter()
        .all(|r| min_cut_under(g, f_mask, r) >= p as usize)
}

/// Reference global edge connectivity of `(V, f)`.
pub fn brute_edge_connectivity(g: &LabeledMultigraph, f: &EdgeSet) -> usize {
    let f_mask: u64 = f.iter().map(|&e| 1u64 << e).sum();
    min_cut_under(g, f_mask, 0)
}

/// Reference minimum feasible cost by scanning every one of the `2^m`
/// subsets. Returns `None` when no subset is feasible.
pub fn brute_min_cost_feasible(g: &LabeledMultigraph, p: u32, q: u32) -> Option<Cost> {
    let m = g.edge_count();
    assert!(m <= 20, "brute subset scan needs m <= 20");
    let mut best: Option<Cost> = None;
    for mask in 0u64..(1 << m) {
        let f: EdgeSet = (0..m as EdgeId).filter(|&e| mask >> e & 1 == 1).collect();
        let cost = g.cost_of(&f);
        if let Some(b) = &best {
            if cost >= *b {
                continue;
            }
        }
        if brute_feasibility(g, p, q, &f) {
            best = Some(cost);
        }
    }
    best
}

/// Reference minimal violated sets: every orientation of every listed
/// member whose cut misses `f`, filtered by pairwise strict inclusion.
pub fn brute_minimal_violated(
    g: &LabeledMultigraph,
    members: &[NodeShore],
    f: &EdgeSet,
) -> Vec<NodeShore> {
    let mut violated: Vec<NodeShore> = Vec::new();
    for s in members {
        let cut = g.cut_edges_in(s, f).expect("member shores are proper");
        if cut.is_empty() {
            violated.push(s.clone());
            violated.push(s.complement());
        }
    }
    violated.sort();
    violated.dedup();
    let mut minimal: Vec<NodeShore> = Vec::new();
    for s in &violated {
        if !violated.iter().any(|t| t.is_proper_subset_of(s)) {
            minimal.push(s.clone());
        }
    }
    minimal
}

/// Deterministic graph stream for the suites; never gives up, unlike the
/// feasibility-filtered production generator.
pub fn seeded_graph(
    seed: u64,
    n: usize,
    m: usize,
    safe_prob: f64,
    cost_range: (i64, i64),
) -> LabeledMultigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    instances::random_labeled_multigraph(&mut rng, n, m, safe_prob, cost_range)
        .expect("parameters are valid")
}

/// Seeded `(p,1)`-feasible instances: draws graphs until the full edge set
/// is `(p,1)`-feasible, so the graph itself serves as the stage-1 output.
pub fn seeded_p1_feasible(
    seed: u64,
    n: usize,
    m: usize,
    p: u32,
    safe_prob: f64,
    cost_range: (i64, i64),
) -> LabeledMultigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2000 {
        let g = instances::random_labeled_multigraph(&mut rng, n, m, safe_prob, cost_range)
            .expect("parameters are valid");
        if brute_feasibility(&g, p, 1, &g.all_edges()) {
            return g;
        }
    }
    panic!("no (p,1)-feasible graph for seed {seed}, n={n}, m={m}, p={p}");
}

/// A random nonempty proper shore avoiding node 0 half the time.
pub fn random_shore(rng: &mut impl Rng, n: usize) -> NodeShore {
    loop {
        let members: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.5)).collect();
        if members.is_empty() || members.len() == n {
            continue;
        }
        return NodeShore::from_members(n, members).expect("members in range");
    }
}

/// A random edge subset with inclusion probability `prob`.
pub fn random_edge_subset(rng: &mut impl Rng, g: &LabeledMultigraph, prob: f64) -> EdgeSet {
    g.edge_ids().filter(|_| rng.gen_bool(prob)).collect()
}
