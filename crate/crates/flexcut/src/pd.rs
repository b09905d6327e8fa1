//! Primal-dual covering of violated cut families.
//!
//! The engine grows a dual solution `y` on the currently *minimal* violated
//! sets, raising all of them uniformly until some candidate edge becomes
//! tight, adds exactly one newly tight edge per iteration (smallest id when
//! several become tight together; simultaneous events then play out as
//! zero-increase iterations), and finishes with reverse deletion in reverse
//! addition order. All arithmetic is exact, so the produced dual is a
//! certificate, not an approximation of one: `verify_certificates`
//! recomputes every claimed property from scratch.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{self, CutFamily};
use crate::graph::{EdgeId, EdgeSet, GraphError, LabeledMultigraph};
use crate::rational::{serde_cost, Cost};
use crate::shore::NodeShore;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PdError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {graph} nodes but the oracle expects {oracle}")]
    GroundMismatch { graph: usize, oracle: usize },
    #[error("no candidate edge can cover the cut of S={shore}")]
    Uncoverable { shore: NodeShore },
    #[error("the oracle cannot enumerate members, so witnesses are unavailable")]
    WitnessesUnsupported,
    #[error("no witness cut exists for edge {edge}")]
    WitnessNotFound { edge: EdgeId },
}

/// Access to a complement-closed cut family, possibly too large to store.
pub trait ViolationOracle {
    fn ground_size(&self) -> usize;

    /// `h(S)`: whether either orientation of `S` is a member.
    fn is_member(&self, s: &NodeShore) -> bool;

    /// Inclusion-minimal violated sets over both orientations of every
    /// member, in sorted order, keeping the minimizing orientation.
    fn minimal_violated(&self, g: &LabeledMultigraph, f: &EdgeSet) -> Vec<NodeShore>;

    /// Whether `f` covers every member cut.
    fn is_covering(&self, g: &LabeledMultigraph, f: &EdgeSet) -> bool {
        self.minimal_violated(g, f).is_empty()
    }

    /// Checks that every member cut contains at least one candidate edge,
    /// returning an uncoverable shore otherwise.
    fn check_coverable(&self, g: &LabeledMultigraph, candidates: &EdgeSet)
        -> Result<(), NodeShore>;

    /// The canonical member shores, when the family is explicit.
    fn enumerate_members(&self) -> Option<&[NodeShore]>;
}

/// Oracle over an explicitly stored family.
#[derive(Debug, Clone)]
pub struct ExplicitFamilyOracle {
    family: CutFamily,
}

impl ExplicitFamilyOracle {
    pub fn new(family: CutFamily) -> Self {
        ExplicitFamilyOracle { family }
    }

    pub fn family(&self) -> &CutFamily {
        &self.family
    }
}

impl ViolationOracle for ExplicitFamilyOracle {
    fn ground_size(&self) -> usize {
        self.family.ground_size()
    }

    fn is_member(&self, s: &NodeShore) -> bool {
        self.family.is_member(s)
    }

    fn minimal_violated(&self, g: &LabeledMultigraph, f: &EdgeSet) -> Vec<NodeShore> {
        family::violated_collections(&self.family, g, f).minimal
    }

    fn check_coverable(
        &self,
        g: &LabeledMultigraph,
        candidates: &EdgeSet,
    ) -> Result<(), NodeShore> {
        for s in self.family.shores() {
            if !g.covers(s, candidates) {
                return Err(s.clone());
            }
        }
        Ok(())
    }

    fn enumerate_members(&self) -> Option<&[NodeShore]> {
        Some(self.family.shores())
    }
}

/// One dual variable: `y(shore) = value > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualValue {
    pub shore: NodeShore,
    #[serde(with = "serde_cost")]
    pub value: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub index: usize,
    /// Minimal violated sets at the start of the iteration.
    pub active: Vec<NodeShore>,
    #[serde(with = "serde_cost")]
    pub epsilon: Cost,
    pub tight_edge: EdgeId,
}

/// A cut proving an output edge necessary: violated when the edge was
/// added, and met by no other output edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub edge: EdgeId,
    /// Iteration at which `edge` was added.
    pub iteration: usize,
    pub shore: NodeShore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalDualTrace {
    pub ground_size: usize,
    pub candidates: Vec<EdgeId>,
    pub iterations: Vec<IterationRecord>,
    /// Edges in addition order.
    pub added: Vec<EdgeId>,
    /// Edges removed by reverse deletion, in processing order.
    pub deleted: Vec<EdgeId>,
    /// The output, sorted by id.
    pub final_edges: Vec<EdgeId>,
    /// Positive dual values, sorted by shore.
    pub duals: Vec<DualValue>,
    /// Witness cuts for the output edges; empty until attached.
    pub witnesses: Vec<WitnessEntry>,
}

impl PrimalDualTrace {
    pub fn final_edge_set(&self) -> EdgeSet {
        self.final_edges.iter().copied().collect()
    }

    pub fn dual_sum(&self) -> Cost {
        self.duals.iter().map(|d| &d.value).sum()
    }

    pub fn primal_cost(&self, g: &LabeledMultigraph) -> Cost {
        self.final_edges
            .iter()
            .map(|&e| g.edges()[e as usize].cost.clone())
            .sum()
    }

    /// The edge set present at the start of the given iteration.
    pub fn edges_before_iteration(&self, index: usize) -> EdgeSet {
        self.iterations[..index].iter().map(|it| it.tight_edge).collect()
    }
}

/// Runs dual growth followed by reverse deletion. Terminates after at most
/// `|candidates|` iterations because each one adds a distinct edge.
pub fn run_primal_dual(
    g: &LabeledMultigraph,
    candidates: &EdgeSet,
    oracle: &dyn ViolationOracle,
) -> Result<PrimalDualTrace, PdError> {
    if g.node_count() != oracle.ground_size() {
        return Err(PdError::GroundMismatch {
            graph: g.node_count(),
            oracle: oracle.ground_size(),
        });
    }
    for &id in candidates {
        g.edge(id)?;
    }
    oracle
        .check_coverable(g, candidates)
        .map_err(|shore| PdError::Uncoverable { shore })?;

    let mut slack: BTreeMap<EdgeId, Cost> = candidates
        .iter()
        .map(|&id| (id, g.edges()[id as usize].cost.clone()))
        .collect();
    let mut f = EdgeSet::new();
    let mut added = Vec::new();
    let mut raised: BTreeMap<NodeShore, Cost> = BTreeMap::new();
    let mut iterations = Vec::new();

    loop {
        let active = oracle.minimal_violated(g, &f);
        if active.is_empty() {
            break;
        }
        // Dual load rate of each remaining candidate: how many active cuts
        // it lies on.
        let mut rates: Vec<(EdgeId, usize)> = Vec::new();
        for &e in slack.keys() {
            let edge = &g.edges()[e as usize];
            let rate = active.iter().filter(|c| edge.crosses(c)).count();
            if rate > 0 {
                rates.push((e, rate));
            }
        }
        let epsilon = rates
            .iter()
            .map(|(e, rate)| &slack[e] / Cost::from_integer((*rate).into()))
            .min()
            .ok_or_else(|| PdError::Uncoverable {
                shore: active[0].clone(),
            })?;
        let tight_edge = rates
            .iter()
            .map(|(e, rate)| (e, &slack[e] - &epsilon * Cost::from_integer((*rate).into())))
            .filter(|(_, residual)| residual.is_zero())
            .map(|(&e, _)| e)
            .min()
            .expect("the minimizing edge is tight");
        if !epsilon.is_zero() {
            for c in &active {
                let y = raised.entry(c.clone()).or_insert_with(Cost::zero);
                *y += &epsilon;
            }
            for (e, rate) in &rates {
                let s = slack.get_mut(e).expect("rate entries come from slack");
                *s -= &epsilon * Cost::from_integer((*rate).into());
            }
        }
        slack.remove(&tight_edge);
        f.insert(tight_edge);
        added.push(tight_edge);
        iterations.push(IterationRecord {
            index: iterations.len(),
            active,
            epsilon,
            tight_edge,
        });
    }

    let (final_set, deleted) = reverse_delete(g, oracle, &added);
    Ok(PrimalDualTrace {
        ground_size: g.node_count(),
        candidates: candidates.iter().copied().collect(),
        iterations,
        added,
        deleted,
        final_edges: final_set.iter().copied().collect(),
        duals: raised
            .into_iter()
            .map(|(shore, value)| DualValue { shore, value })
            .collect(),
        witnesses: Vec::new(),
    })
}

/// Drops edges in reverse addition order whenever the rest still covers
/// every member cut. Returns the surviving set and the removals in
/// processing order.
pub fn reverse_delete(
    g: &LabeledMultigraph,
    oracle: &dyn ViolationOracle,
    added: &[EdgeId],
) -> (EdgeSet, Vec<EdgeId>) {
    let mut f: EdgeSet = added.iter().copied().collect();
    let mut deleted = Vec::new();
    for &e in added.iter().rev() {
        f.remove(&e);
        if oracle.is_covering(g, &f) {
            deleted.push(e);
        } else {
            f.insert(e);
        }
    }
    (f, deleted)
}

/// Finds a witness cut for an output edge: a member shore violated at the
/// edge's addition time whose cut meets the output in exactly that edge.
/// Scans canonical members in sorted order, so the choice is deterministic.
pub fn find_witness(
    g: &LabeledMultigraph,
    oracle: &dyn ViolationOracle,
    trace: &PrimalDualTrace,
    edge: EdgeId,
) -> Result<WitnessEntry, PdError> {
    let members = oracle
        .enumerate_members()
        .ok_or(PdError::WitnessesUnsupported)?;
    let iteration = trace
        .iterations
        .iter()
        .position(|it| it.tight_edge == edge)
        .ok_or(PdError::WitnessNotFound { edge })?;
    let before = trace.edges_before_iteration(iteration);
    let final_set = trace.final_edge_set();
    for s in members {
        if g.covers(s, &before) {
            continue;
        }
        let in_final = g.cut_edges_in(s, &final_set).map_err(PdError::Graph)?;
        if in_final.len() == 1 && in_final.contains(&edge) {
            return Ok(WitnessEntry {
                edge,
                iteration,
                shore: s.clone(),
            });
        }
    }
    Err(PdError::WitnessNotFound { edge })
}

/// Attaches a witness cut to every output edge.
pub fn attach_witnesses(
    g: &LabeledMultigraph,
    oracle: &dyn ViolationOracle,
    trace: &mut PrimalDualTrace,
) -> Result<(), PdError> {
    let mut witnesses = Vec::new();
    for &e in &trace.final_edges {
        witnesses.push(find_witness(g, oracle, trace, e)?);
    }
    trace.witnesses = witnesses;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverloadedEdge {
    pub edge: EdgeId,
    #[serde(with = "serde_cost")]
    pub load: Cost,
    #[serde(with = "serde_cost")]
    pub cost: Cost,
}

/// Recomputed-from-scratch validation of a finished run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// Charging constant the run is checked against.
    pub beta: u32,
    /// Every dual variable sits on a member cut and is positive.
    pub duals_on_members: bool,
    /// No edge's dual load exceeds its cost.
    pub dual_feasible: bool,
    pub first_overload: Option<OverloadedEdge>,
    /// Every output edge is tight.
    pub output_edges_tight: bool,
    /// `c(F') = Σ_S y_S · |δ_F'(S)|`, the exact decomposition of the
    /// primal cost over the dual.
    pub cost_identity: bool,
    /// Every iteration's active sets have average output-degree ≤ beta.
    pub iteration_charging: bool,
    /// (iteration, Σ|δ_F'(C)|, active count) with the largest ratio.
    pub worst_iteration: Option<(usize, usize, usize)>,
    /// `c(F') ≤ beta · Σ y`.
    pub within_bound: bool,
    /// Witness validation: `None` when no witnesses are attached.
    pub witnesses_valid: Option<bool>,
    /// The output covers every member cut.
    pub output_covers: bool,
    #[serde(with = "serde_cost")]
    pub primal_cost: Cost,
    #[serde(with = "serde_cost")]
    pub dual_sum: Cost,
}

impl CertificateReport {
    pub fn all_ok(&self) -> bool {
        self.duals_on_members
            && self.dual_feasible
            && self.output_edges_tight
            && self.cost_identity
            && self.iteration_charging
            && self.within_bound
            && self.witnesses_valid.unwrap_or(true)
            && self.output_covers
    }
}

/// Recomputes every certificate of a trace against the graph and oracle,
/// with exact arithmetic and zero tolerance.
pub fn verify_certificates(
    g: &LabeledMultigraph,
    oracle: &dyn ViolationOracle,
    trace: &PrimalDualTrace,
    beta: u32,
) -> CertificateReport {
    let final_set = trace.final_edge_set();
    let load = |e: EdgeId| -> Cost {
        let edge = &g.edges()[e as usize];
        trace
            .duals
            .iter()
            .filter(|d| edge.crosses(&d.shore))
            .map(|d| &d.value)
            .sum()
    };

    let duals_on_members = trace
        .duals
        .iter()
        .all(|d| oracle.is_member(&d.shore) && d.value > Cost::zero());

    let mut dual_feasible = true;
    let mut first_overload = None;
    for &e in &trace.candidates {
        let l = load(e);
        let cost = &g.edges()[e as usize].cost;
        if &l > cost {
            dual_feasible = false;
            first_overload = Some(OverloadedEdge {
                edge: e,
                load: l,
                cost: cost.clone(),
            });
            break;
        }
    }

    let output_edges_tight = trace
        .final_edges
        .iter()
        .all(|&e| load(e) == g.edges()[e as usize].cost);

    let primal_cost = trace.primal_cost(g);
    let dual_sum = trace.dual_sum();
    let decomposition: Cost = trace
        .duals
        .iter()
        .map(|d| {
            let degree = final_set
                .iter()
                .filter(|&&e| g.edges()[e as usize].crosses(&d.shore))
                .count();
            &d.value * Cost::from_integer(degree.into())
        })
        .sum();
    let cost_identity = primal_cost == decomposition;

    let mut iteration_charging = true;
    let mut worst_iteration: Option<(usize, usize, usize)> = None;
    for it in &trace.iterations {
        let total: usize = it
            .active
            .iter()
            .map(|c| {
                final_set
                    .iter()
                    .filter(|&&e| g.edges()[e as usize].crosses(c))
                    .count()
            })
            .sum();
        let count = it.active.len();
        if total > beta as usize * count {
            iteration_charging = false;
        }
        let is_worse = match worst_iteration {
            None => true,
            // Compare total/count > best_total/best_count exactly.
            Some((_, bt, bc)) => total * bc > bt * count,
        };
        if is_worse {
            worst_iteration = Some((it.index, total, count));
        }
    }

    let within_bound = primal_cost <= Cost::from_integer(beta.into()) * &dual_sum;

    let witnesses_valid = if trace.witnesses.is_empty() && !trace.final_edges.is_empty() {
        None
    } else {
        let mut covered: Vec<EdgeId> = trace.witnesses.iter().map(|w| w.edge).collect();
        covered.sort_unstable();
        let all_edges_present = covered == trace.final_edges;
        let each_valid = trace.witnesses.iter().all(|w| {
            if w.iteration >= trace.iterations.len()
                || trace.iterations[w.iteration].tight_edge != w.edge
            {
                return false;
            }
            let before = trace.edges_before_iteration(w.iteration);
            let edge = &g.edges()[w.edge as usize];
            oracle.is_member(&w.shore)
                && !g.covers(&w.shore, &before)
                && edge.crosses(&w.shore)
                && final_set
                    .iter()
                    .filter(|&&e| g.edges()[e as usize].crosses(&w.shore))
                    .count()
                    == 1
        });
        Some(all_edges_present && each_valid)
    };

    let output_covers = oracle.is_covering(g, &final_set);

    CertificateReport {
        beta,
        duals_on_members,
        dual_feasible,
        first_overload,
        output_edges_tight,
        cost_identity,
        iteration_charging,
        worst_iteration,
        within_bound,
        witnesses_valid,
        output_covers,
        primal_cost,
        dual_sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{doubled_four_cycle, extended_doubled_cycle};
    use crate::rational::parse_rational;
    use crate::{fgc, graph};

    fn shore(n: usize, members: &[u32]) -> NodeShore {
        NodeShore::from_members(n, members.iter().copied()).unwrap()
    }

    fn rational(s: &str) -> Cost {
        parse_rational(s).unwrap()
    }

    /// The doubled 4-cycle's deficient family, augmented from two extra
    /// diagonals.
    fn extended_setup() -> (LabeledMultigraph, ExplicitFamilyOracle, EdgeSet) {
        let g = extended_doubled_cycle();
        let f1: EdgeSet = (0..8).collect();
        let cuts = fgc::deficient_cuts(&g, 3, &f1, 18).unwrap();
        let family =
            CutFamily::close_complements(4, cuts.into_iter().map(|c| c.shore)).unwrap();
        let candidates: EdgeSet = EdgeSet::from([8, 9]);
        (g, ExplicitFamilyOracle::new(family), candidates)
    }

    #[test]
    fn frozen_run_on_the_extended_doubled_cycle() {
        let (g, oracle, candidates) = extended_setup();
        let mut trace = run_primal_dual(&g, &candidates, &oracle).unwrap();
        assert_eq!(trace.added, vec![8, 9]);
        assert_eq!(trace.deleted, Vec::<EdgeId>::new());
        assert_eq!(trace.final_edges, vec![8, 9]);

        assert_eq!(trace.iterations.len(), 2);
        let it0 = &trace.iterations[0];
        assert_eq!(
            it0.active,
            vec![shore(4, &[0]), shore(4, &[3]), shore(4, &[1, 2])]
        );
        assert_eq!(it0.epsilon, rational("1/2"));
        assert_eq!(it0.tight_edge, 8);
        let it1 = &trace.iterations[1];
        // Both orientations of the cut around v4 are minimal here.
        assert_eq!(it1.active, vec![shore(4, &[3]), shore(4, &[0, 1, 2])]);
        assert_eq!(it1.epsilon, rational("0"));
        assert_eq!(it1.tight_edge, 9);

        assert_eq!(
            trace.duals,
            vec![
                DualValue { shore: shore(4, &[0]), value: rational("1/2") },
                DualValue { shore: shore(4, &[3]), value: rational("1/2") },
                DualValue { shore: shore(4, &[1, 2]), value: rational("1/2") },
            ]
        );
        assert_eq!(trace.dual_sum(), rational("3/2"));
        assert_eq!(trace.primal_cost(&g), rational("2"));

        attach_witnesses(&g, &oracle, &mut trace).unwrap();
        assert_eq!(
            trace.witnesses,
            vec![
                WitnessEntry { edge: 8, iteration: 0, shore: shore(4, &[1, 2, 3]) },
                WitnessEntry { edge: 9, iteration: 1, shore: shore(4, &[3]) },
            ]
        );

        let report = verify_certificates(&g, &oracle, &trace, 16);
        assert!(report.all_ok(), "report: {report:?}");
        assert_eq!(report.witnesses_valid, Some(true));
        // This run even meets the uncrossable-family constant.
        assert!(verify_certificates(&g, &oracle, &trace, 2).all_ok());
    }

    #[test]
    fn reverse_delete_drops_a_superseded_edge() {
        // Members {1} and {2}; edge 0 covers only {1} cheaply, edge 1
        // covers both. The growth phase adds both; reverse deletion drops
        // edge 0 because edge 1 alone covers everything.
        let g = graph::LabeledMultigraph::new(
            4,
            vec![
                graph::Edge { u: 1, v: 0, cost: rational("1/2"), safety: graph::Safety::Safe },
                graph::Edge { u: 1, v: 2, cost: rational("3/2"), safety: graph::Safety::Safe },
            ],
        )
        .unwrap();
        let family =
            CutFamily::close_complements(4, vec![shore(4, &[1]), shore(4, &[2])]).unwrap();
        let oracle = ExplicitFamilyOracle::new(family);
        let candidates: EdgeSet = EdgeSet::from([0, 1]);
        let mut trace = run_primal_dual(&g, &candidates, &oracle).unwrap();
        assert_eq!(trace.added, vec![0, 1]);
        assert_eq!(trace.deleted, vec![0]);
        assert_eq!(trace.final_edges, vec![1]);
        // After edge 0 covers {1}, the complement {0,1,3} of the one
        // remaining violated member is violated and minimal too, so the
        // second raise splits across both orientations of {2}.
        assert_eq!(
            trace.duals,
            vec![
                DualValue { shore: shore(4, &[1]), value: rational("1/2") },
                DualValue { shore: shore(4, &[2]), value: rational("3/4") },
                DualValue { shore: shore(4, &[0, 1, 3]), value: rational("1/4") },
            ]
        );
        attach_witnesses(&g, &oracle, &mut trace).unwrap();
        assert_eq!(trace.witnesses[0].shore, shore(4, &[2]));
        let report = verify_certificates(&g, &oracle, &trace, 2);
        assert!(report.all_ok(), "report: {report:?}");
        // The deleted edge was tight too; tightness is only *required* of
        // the output, and the output alone carries the cost identity.
        assert_eq!(report.primal_cost, rational("3/2"));
        assert_eq!(report.dual_sum, rational("3/2"));
    }

    #[test]
    fn uncoverable_families_are_rejected_up_front() {
        let (g, oracle, _) = extended_setup();
        // Candidate edge 9 misses the cut around v1 entirely.
        let err = run_primal_dual(&g, &EdgeSet::from([9]), &oracle).unwrap_err();
        match err {
            PdError::Uncoverable { shore } => assert_eq!(shore, shore_of_v1()),
            other => panic!("expected Uncoverable, got {other:?}"),
        }
    }

    fn shore_of_v1() -> NodeShore {
        shore(4, &[1, 2, 3])
    }

    #[test]
    fn certificates_reject_tampered_traces() {
        let (g, oracle, candidates) = extended_setup();
        let mut trace = run_primal_dual(&g, &candidates, &oracle).unwrap();
        attach_witnesses(&g, &oracle, &mut trace).unwrap();

        // Inflate one dual value: feasibility must break.
        let mut tampered = trace.clone();
        tampered.duals[0].value = rational("2");
        let report = verify_certificates(&g, &oracle, &tampered, 16);
        assert!(!report.dual_feasible && !report.all_ok());
        assert_eq!(report.first_overload.as_ref().unwrap().edge, 8);

        // Move a dual onto a non-member shore.
        let mut tampered = trace.clone();
        tampered.duals[0].shore = shore(4, &[1]);
        assert!(!verify_certificates(&g, &oracle, &tampered, 16).duals_on_members);

        // Claim an output edge that was never paid for.
        let mut tampered = trace.clone();
        tampered.final_edges = vec![8];
        let report = verify_certificates(&g, &oracle, &tampered, 16);
        assert!(!report.output_covers && !report.all_ok());

        // Forge a witness pointing at a covered shore.
        let mut tampered = trace.clone();
        tampered.witnesses[1].shore = shore(4, &[1, 2]);
        assert_eq!(
            verify_certificates(&g, &oracle, &tampered, 16).witnesses_valid,
            Some(false)
        );
    }

    #[test]
    fn witnesses_need_an_enumerable_family() {
        struct Opaque;
        impl ViolationOracle for Opaque {
            fn ground_size(&self) -> usize {
                4
            }
            fn is_member(&self, _: &NodeShore) -> bool {
                false
            }
            fn minimal_violated(&self, _: &LabeledMultigraph, _: &EdgeSet) -> Vec<NodeShore> {
                Vec::new()
            }
            fn check_coverable(&self, _: &LabeledMultigraph, _: &EdgeSet) -> Result<(), NodeShore> {
                Ok(())
            }
            fn enumerate_members(&self) -> Option<&[NodeShore]> {
                None
            }
        }
        let g = doubled_four_cycle();
        let trace = run_primal_dual(&g, &EdgeSet::new(), &Opaque).unwrap();
        assert!(trace.final_edges.is_empty());
        let err = find_witness(&g, &Opaque, &trace, 0).unwrap_err();
        assert_eq!(err, PdError::WitnessesUnsupported);
    }

    #[test]
    fn trace_json_is_stable() {
        let (g, oracle, candidates) = extended_setup();
        let mut trace = run_primal_dual(&g, &candidates, &oracle).unwrap();
        attach_witnesses(&g, &oracle, &mut trace).unwrap();
        let json = serde_json::to_string_pretty(&trace).unwrap();
        let back: PrimalDualTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
        assert!(json.contains("\"epsilon\": \"1/2\""));
    }
}
