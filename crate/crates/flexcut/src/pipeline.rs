//! The two-stage `(p,2)` solving pipeline.
//!
//! Stage 1 produces a `(p,1)`-feasible base `F1` (exactly, or by greedy
//! deletion). Relative to `F1`, the cuts blocking `(p,2)`-feasibility are
//! exactly the `(p+1)`-cuts with at least two unsafe edges; stage 2 covers
//! this deficient family with the primal-dual engine and certifies the
//! result. Structural invariants of the family — uncrossable for even `p`,
//! weakly uncrossable plus residual closure for odd `p` — are checked
//! outright, and any violation is a hard error rather than a degraded
//! answer, because the approximation guarantee rests on them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, SolveBudget, SolveError};
use crate::family::{
    self, CutFamily, FamilyError, PairCheck, ResidualCheck, ResidualCounterexample,
};
use crate::fgc::{self, DeficientCut, Feasibility, FgcError};
use crate::graph::{EdgeId, EdgeSet, LabeledMultigraph};
use crate::pd::{self, CertificateReport, PdError, PrimalDualTrace};
use crate::rational::{serde_cost, Cost};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage1Mode {
    /// Exhaustive minimum-cost `(p,1)` base (small instances only).
    Exact,
    /// Greedy deletion from the full edge set in (cost desc, id asc) order.
    Heuristic,
}

/// Parity of `p` selects the structural regime and charging constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(p: u32) -> Self {
        if p.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Charging constant the certificates are checked against: 2 for
    /// uncrossable (even) families, 16 for weakly uncrossable (odd) ones.
    pub fn beta(self) -> u32 {
        match self {
            Parity::Even => 2,
            Parity::Odd => 16,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Fgc(#[from] FgcError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("deficient family violates the {parity:?}-p structural invariant: {check}")]
    StructuralInvariantViolated { parity: Parity, check: PairCheck },
    #[error("deficient family violates residual closure at sample {}", .0.sample_index)]
    ResidualPropertyViolated(ResidualCounterexample),
    #[error("certificate verification failed: {0:?}")]
    CertificateFailure(Box<CertificateReport>),
    #[error("pipeline output is not (p,2)-feasible: {witness}")]
    OutputNotFeasible { witness: fgc::DeficiencyWitness },
}

/// Stage 1: a `(p,1)`-feasible edge set.
#[allow(clippy::result_large_err)] // errors carry full witnesses and are cold
pub fn stage1_p1fgc(
    g: &LabeledMultigraph,
    p: u32,
    mode: Stage1Mode,
    budget: &SolveBudget,
    enumeration_limit: usize,
) -> Result<EdgeSet, PipelineError> {
    match mode {
        Stage1Mode::Exact => {
            let sol = exact::exact_min_cost_feasible(g, p, 1, budget)?;
            Ok(sol.edge_set())
        }
        Stage1Mode::Heuristic => {
            match fgc::feasibility(g, p, 1, &g.all_edges(), enumeration_limit)? {
                Feasibility::Feasible => {}
                Feasibility::Infeasible(witness) => {
                    return Err(FgcError::InstanceInfeasible { witness }.into())
                }
            }
            let mut order: Vec<EdgeId> = g.edge_ids().collect();
            order.sort_by(|&a, &b| {
                let (ea, eb) = (&g.edges()[a as usize], &g.edges()[b as usize]);
                eb.cost.cmp(&ea.cost).then(a.cmp(&b))
            });
            let mut f = g.all_edges();
            for e in order {
                f.remove(&e);
                match fgc::feasibility(g, p, 1, &f, enumeration_limit)? {
                    Feasibility::Feasible => {}
                    Feasibility::Infeasible(_) => {
                        f.insert(e);
                    }
                }
            }
            Ok(f)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub p: u32,
    pub parity: Parity,
    pub beta: u32,
    pub stage1_mode: Stage1Mode,
    pub stage1_edges: Vec<EdgeId>,
    #[serde(with = "serde_cost")]
    pub stage1_cost: Cost,
    pub deficient_cuts: Vec<DeficientCut>,
    /// Canonical size of the complement-closed deficient family.
    pub family_size: usize,
    /// Even `p`: the family must be uncrossable.
    pub uncrossable: Option<PairCheck>,
    /// Odd `p`: the family must be weakly uncrossable…
    pub weakly_uncrossable: Option<PairCheck>,
    /// …and satisfy residual closure along the run's own prefixes.
    pub residual_check: Option<ResidualCheck>,
    pub trace: PrimalDualTrace,
    pub certificates: CertificateReport,
    #[serde(with = "serde_cost")]
    pub augmentation_cost: Cost,
    pub final_edges: Vec<EdgeId>,
    #[serde(with = "serde_cost")]
    pub total_cost: Cost,
}

/// The full `(p,2)` pipeline: stage 1, deficient-cut extraction, structural
/// checks, primal-dual augmentation, certificate verification, and a final
/// feasibility check of the combined output.
#[allow(clippy::result_large_err)] // errors carry full witnesses and are cold
pub fn solve_p2fgc(
    g: &LabeledMultigraph,
    p: u32,
    mode: Stage1Mode,
    budget: &SolveBudget,
    enumeration_limit: usize,
) -> Result<PipelineResult, PipelineError> {
    if let Feasibility::Infeasible(witness) =
        fgc::feasibility(g, p, 2, &g.all_edges(), enumeration_limit)?
    {
        return Err(FgcError::InstanceInfeasible { witness }.into());
    }

    let f1 = stage1_p1fgc(g, p, mode, budget, enumeration_limit)?;
    let deficient = fgc::deficient_cuts(g, p, &f1, enumeration_limit)?;
    let family = CutFamily::close_complements(
        g.node_count(),
        deficient.iter().map(|c| c.shore.clone()),
    )?;

    let parity = Parity::of(p);
    let beta = parity.beta();
    let mut uncrossable = None;
    let mut weakly_uncrossable = None;
    match parity {
        Parity::Even => {
            let check = family::check_uncrossable(&family);
            if !check.passed() {
                return Err(PipelineError::StructuralInvariantViolated { parity, check });
            }
            uncrossable = Some(check);
        }
        Parity::Odd => {
            let check = family::check_weakly_uncrossable(&family);
            if !check.passed() {
                return Err(PipelineError::StructuralInvariantViolated { parity, check });
            }
            weakly_uncrossable = Some(check);
        }
    }

    let candidates: EdgeSet = g.edge_ids().filter(|id| !f1.contains(id)).collect();
    let oracle = pd::ExplicitFamilyOracle::new(family);
    let mut trace = pd::run_primal_dual(g, &candidates, &oracle)?;
    pd::attach_witnesses(g, &oracle, &mut trace)?;

    let residual_check = match parity {
        Parity::Even => None,
        Parity::Odd => {
            let mut samples: Vec<EdgeSet> = (0..trace.iterations.len())
                .map(|i| trace.edges_before_iteration(i))
                .collect();
            samples.push(trace.final_edge_set());
            let check = family::check_residual_closure(oracle.family(), g, &samples);
            if let ResidualCheck::Fail(ce) = check {
                return Err(PipelineError::ResidualPropertyViolated(ce));
            }
            Some(check)
        }
    };

    let certificates = pd::verify_certificates(g, &oracle, &trace, beta);
    if !certificates.all_ok() {
        return Err(PipelineError::CertificateFailure(Box::new(certificates)));
    }

    let final_set: EdgeSet = f1.union(&trace.final_edge_set()).copied().collect();
    if let Feasibility::Infeasible(witness) =
        fgc::feasibility(g, p, 2, &final_set, enumeration_limit)?
    {
        return Err(PipelineError::OutputNotFeasible { witness });
    }

    let stage1_cost = g.cost_of(&f1);
    let augmentation_cost = trace.primal_cost(g);
    let total_cost = &stage1_cost + &augmentation_cost;
    Ok(PipelineResult {
        p,
        parity,
        beta,
        stage1_mode: mode,
        stage1_edges: f1.iter().copied().collect(),
        stage1_cost,
        deficient_cuts: deficient,
        family_size: oracle.family().len(),
        uncrossable,
        weakly_uncrossable,
        residual_check,
        trace,
        certificates,
        augmentation_cost,
        final_edges: final_set.iter().copied().collect(),
        total_cost,
    })
}
