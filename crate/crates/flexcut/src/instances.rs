//! Instance fixtures and the seeded random generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fgc::{self, Feasibility};
use crate::graph::{Edge, GraphError, LabeledMultigraph, Safety};
use crate::rational::from_int;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fgc(#[from] fgc::FgcError),
    #[error("need at least n-1 = {required} edges to connect {n} nodes, got {m}")]
    TooFewEdges { n: usize, m: usize, required: usize },
    #[error("invalid cost range {0}..={1}")]
    BadCostRange(i64, i64),
    #[error("no ({p},2)-feasible instance found in {attempts} attempts for seed {seed}")]
    Exhausted { seed: u64, p: u32, attempts: usize },
}

/// The doubled 4-cycle: nodes 0..4 are v1..v4, every cycle edge appears
/// twice at cost 1. One copy of (v1,v2), one copy of (v3,v4), and both
/// copies of (v4,v1) are unsafe. The full edge set is (3,1)-feasible but
/// not (3,2)-feasible, and its deficient cuts form a weakly uncrossable
/// family that is not uncrossable.
pub fn doubled_four_cycle() -> LabeledMultigraph {
    let sides: [(u32, u32, Safety); 8] = [
        (0, 1, Safety::Safe),
        (0, 1, Safety::Unsafe),
        (1, 2, Safety::Safe),
        (1, 2, Safety::Safe),
        (2, 3, Safety::Safe),
        (2, 3, Safety::Unsafe),
        (3, 0, Safety::Unsafe),
        (3, 0, Safety::Unsafe),
    ];
    let edges = sides
        .into_iter()
        .map(|(u, v, safety)| Edge {
            u,
            v,
            cost: from_int(1),
            safety,
        })
        .collect();
    LabeledMultigraph::new(4, edges).expect("fixture is well formed")
}

/// The doubled 4-cycle plus two safe unit-cost chords: (v1,v3) as edge 8
/// and (v2,v4) as edge 9. The cycle edges alone are (3,1)-feasible, and
/// the chords are exactly the candidates available to repair its
/// deficient cuts up to (3,2)-feasibility.
pub fn extended_doubled_cycle() -> LabeledMultigraph {
    let mut edges: Vec<Edge> = doubled_four_cycle().edges().to_vec();
    for (u, v) in [(0, 2), (1, 3)] {
        edges.push(Edge {
            u,
            v,
            cost: from_int(1),
            safety: Safety::Safe,
        });
    }
    LabeledMultigraph::new(4, edges).expect("fixture is well formed")
}

/// One connected random multigraph: a random spanning tree (each node
/// attaches to a uniformly chosen earlier node) plus uniform random extra
/// pairs, possibly parallel. Safety is i.i.d. with `P(safe) = safe_prob`
/// and costs are uniform integers in `cost_range`.
pub fn random_labeled_multigraph(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    safe_prob: f64,
    cost_range: (i64, i64),
) -> Result<LabeledMultigraph, GenerateError> {
    if m + 1 < n {
        return Err(GenerateError::TooFewEdges {
            n,
            m,
            required: n - 1,
        });
    }
    if cost_range.0 > cost_range.1 || cost_range.0 < 0 {
        return Err(GenerateError::BadCostRange(cost_range.0, cost_range.1));
    }
    fn draw_edge(rng: &mut impl Rng, u: u32, v: u32, safe_prob: f64, cost_range: (i64, i64)) -> Edge {
        let cost = from_int(rng.gen_range(cost_range.0..=cost_range.1));
        let safety = if rng.gen_bool(safe_prob) {
            Safety::Safe
        } else {
            Safety::Unsafe
        };
        Edge { u, v, cost, safety }
    }
    let mut edges = Vec::with_capacity(m);
    for v in 1..n as u32 {
        let u = rng.gen_range(0..v);
        edges.push(draw_edge(rng, u, v, safe_prob, cost_range));
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            edges.push(draw_edge(rng, u, v, safe_prob, cost_range));
        }
    }
    Ok(LabeledMultigraph::new(n, edges)?)
}

const MAX_ATTEMPTS: usize = 500;

/// Deterministic random instance generation: draws graphs from the seeded
/// stream until one is `(p,2)`-feasible using all edges. The same seed and
/// parameters always produce the same instance.
pub fn generate_random_instance(
    seed: u64,
    n: usize,
    m: usize,
    p: u32,
    safe_prob: f64,
    cost_range: (i64, i64),
) -> Result<LabeledMultigraph, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let g = random_labeled_multigraph(&mut rng, n, m, safe_prob, cost_range)?;
        if let Feasibility::Feasible = fgc::feasibility(&g, p, 2, &g.all_edges(), fgc::DEFAULT_ENUMERATION_LIMIT)? {
            return Ok(g);
        }
    }
    Err(GenerateError::Exhausted {
        seed,
        p,
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::format_instance;

    #[test]
    fn doubled_cycle_layout() {
        let g = doubled_four_cycle();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.unsafe_edges(), crate::graph::EdgeSet::from([1, 5, 6, 7]));
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_random_instance(7, 5, 12, 2, 0.6, (1, 10)).unwrap();
        let b = generate_random_instance(7, 5, 12, 2, 0.6, (1, 10)).unwrap();
        assert_eq!(format_instance(&a, 2, 2), format_instance(&b, 2, 2));
        assert!(fgc::feasibility(&a, 2, 2, &a.all_edges(), 18)
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn distinct_seeds_differ() {
        let a = generate_random_instance(1, 5, 12, 2, 0.6, (1, 10)).unwrap();
        let b = generate_random_instance(2, 5, 12, 2, 0.6, (1, 10)).unwrap();
        assert_ne!(format_instance(&a, 2, 2), format_instance(&b, 2, 2));
    }

    #[test]
    fn generator_rejects_bad_parameters() {
        assert!(matches!(
            generate_random_instance(0, 6, 3, 1, 0.5, (1, 5)),
            Err(GenerateError::TooFewEdges { .. })
        ));
        assert!(matches!(
            generate_random_instance(0, 4, 6, 1, 0.5, (5, 1)),
            Err(GenerateError::BadCostRange(5, 1))
        ));
    }

    #[test]
    fn infeasible_parameters_exhaust() {
        // p = 4 over 4 nodes with only 5 edges can never work: some shore
        // sees at most 2 edges.
        assert!(matches!(
            generate_random_instance(0, 4, 5, 4, 1.0, (1, 2)),
            Err(GenerateError::Exhausted { .. })
        ));
    }
}
