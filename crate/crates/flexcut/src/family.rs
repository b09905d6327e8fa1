//! Cut families and their structural properties.
//!
//! A family assigns `h(S) = 1` to the shores it contains. Families here are
//! always closed under complementation and identify a cut with its canonical
//! shore, so `h(S) = h(V∖S)` holds by construction. The checkers in this
//! module decide, by exhaustive pair scans, whether a family is uncrossable
//! or weakly uncrossable, and whether the violated-set structure needed by
//! the primal-dual charging argument holds.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, LabeledMultigraph};
use crate::shore::{NodeShore, ShoreError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Shore(#[from] ShoreError),
    #[error("family parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("family is empty")]
    Empty,
    #[error("shore over ground set of size {got}, family uses {expected}")]
    GroundMismatch { expected: usize, got: usize },
}

/// A complement-closed cut family, stored as sorted canonical shores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutFamily {
    ground_size: usize,
    shores: Vec<NodeShore>,
    #[serde(skip)]
    index: HashSet<NodeShore>,
}

impl CutFamily {
    /// Builds the family generated by `shores` under complement closure.
    /// Both orientations of every input shore become members; duplicates
    /// (including an input set and its complement) collapse to one canonical
    /// shore.
    pub fn close_complements<I: IntoIterator<Item = NodeShore>>(
        ground_size: usize,
        shores: I,
    ) -> Result<Self, FamilyError> {
        let mut canonical: Vec<NodeShore> = Vec::new();
        for s in shores {
            if s.ground_size() != ground_size {
                return Err(FamilyError::GroundMismatch {
                    expected: ground_size,
                    got: s.ground_size(),
                });
            }
            s.require_proper()?;
            canonical.push(s.canonical());
        }
        canonical.sort();
        canonical.dedup();
        let index = canonical.iter().cloned().collect();
        Ok(CutFamily {
            ground_size,
            shores: canonical,
            index,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.shores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shores.is_empty()
    }

    /// Canonical member shores in sorted order.
    pub fn shores(&self) -> &[NodeShore] {
        &self.shores
    }

    /// `h(S)`: membership of either orientation. Empty and full sets are
    /// never members.
    pub fn is_member(&self, s: &NodeShore) -> bool {
        if s.is_empty() || s.is_full() {
            return false;
        }
        self.index.contains(&s.canonical())
    }
}

/// Outcome of a pairwise family check. `Fail` carries the first offending
/// pair in scan order (shores sorted by size, then members), reported in the
/// orientation the scan used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairCheck {
    Pass,
    Fail { a: NodeShore, b: NodeShore },
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PairCheck::Pass)
    }
}

impl fmt::Display for PairCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairCheck::Pass => write!(f, "PASS"),
            PairCheck::Fail { a, b } => write!(f, "FAIL pair=(S={a},S={b})"),
        }
    }
}

/// Uncrossability: for every pair of members `A`, `B`, either both
/// differences or both the union and intersection are members. Complement
/// closure makes the condition invariant under reorienting either shore, so
/// scanning canonical pairs covers all orientations.
pub fn check_uncrossable(fam: &CutFamily) -> PairCheck {
    scan_pairs(fam, |fam, a, b| {
        (fam.is_member(&a.difference(b)) && fam.is_member(&b.difference(a)))
            || (fam.is_member(&a.intersection(b)) && fam.is_member(&a.union(b)))
    })
}

/// Weak uncrossability: for every pair of members, at least two of the four
/// derived sets (union, intersection, both differences) are members.
pub fn check_weakly_uncrossable(fam: &CutFamily) -> PairCheck {
    scan_pairs(fam, |fam, a, b| {
        let count = [
            a.union(b),
            a.intersection(b),
            a.difference(b),
            b.difference(a),
        ]
        .iter()
        .filter(|s| fam.is_member(s))
        .count();
        count >= 2
    })
}

fn scan_pairs(fam: &CutFamily, ok: impl Fn(&CutFamily, &NodeShore, &NodeShore) -> bool) -> PairCheck {
    let shores = fam.shores();
    for i in 0..shores.len() {
        for j in (i + 1)..shores.len() {
            if !ok(fam, &shores[i], &shores[j]) {
                return PairCheck::Fail {
                    a: shores[i].clone(),
                    b: shores[j].clone(),
                };
            }
        }
    }
    PairCheck::Pass
}

/// Literal-membership variant of the two-of-four condition, for a raw shore
/// list that is *not* complement closed: every pair of listed sets must have
/// at least two of its four derived sets appear in the list as exact sets.
/// This is the precondition under which complement closure of the list
/// produces a weakly uncrossable family.
pub fn check_derived_pair_closure(shores: &[NodeShore]) -> PairCheck {
    let index: HashSet<&NodeShore> = shores.iter().collect();
    let member = |s: &NodeShore| !s.is_empty() && index.contains(s);
    for i in 0..shores.len() {
        for j in (i + 1)..shores.len() {
            let (a, b) = (&shores[i], &shores[j]);
            let count = [
                a.union(b),
                a.intersection(b),
                a.difference(b),
                b.difference(a),
            ]
            .iter()
            .filter(|s| member(s))
            .count();
            if count < 2 {
                return PairCheck::Fail {
                    a: a.clone(),
                    b: b.clone(),
                };
            }
        }
    }
    PairCheck::Pass
}

/// The violated structure of a family against a partial cover `F`.
///
/// `violated` lists canonical shores with `h(S) = 1` and `δ(S) ∩ F = ∅`.
/// `minimal` lists the inclusion-minimal violated sets where minimality is
/// taken over *both orientations* of every violated shore; entries keep the
/// minimizing orientation, which is what makes the minimal sets of a weakly
/// uncrossable family pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatedCollections {
    pub violated: Vec<NodeShore>,
    pub minimal: Vec<NodeShore>,
}

pub fn violated_collections(
    fam: &CutFamily,
    g: &LabeledMultigraph,
    f: &EdgeSet,
) -> ViolatedCollections {
    let violated: Vec<NodeShore> = fam
        .shores()
        .iter()
        .filter(|s| !g.covers(s, f))
        .cloned()
        .collect();
    let minimal = minimal_over_orientations(&violated);
    ViolatedCollections { violated, minimal }
}

/// Inclusion-minimal sets among `{S, V∖S : S violated}`. Candidates are
/// scanned in ascending cardinality; a candidate is minimal exactly when no
/// smaller minimal set is strictly contained in it, because every violated
/// set contains a minimal one.
fn minimal_over_orientations(violated_canonical: &[NodeShore]) -> Vec<NodeShore> {
    let mut oriented: Vec<NodeShore> = violated_canonical
        .iter()
        .flat_map(|s| [s.clone(), s.complement()])
        .collect();
    oriented.sort();
    let mut minimal: Vec<NodeShore> = Vec::new();
    for cand in oriented {
        if !minimal.iter().any(|m| m.is_proper_subset_of(&cand)) {
            minimal.push(cand);
        }
    }
    minimal
}

/// Counterexample to the residual-violation property, if one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualCounterexample {
    pub sample_index: usize,
    pub s1: NodeShore,
    pub s2: NodeShore,
    pub crossing_minimal: NodeShore,
    pub residual: NodeShore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualCheck {
    Pass { pairs_checked: usize },
    Fail(ResidualCounterexample),
}

impl ResidualCheck {
    pub fn passed(&self) -> bool {
        matches!(self, ResidualCheck::Pass { .. })
    }
}

/// Residual-violation closure: for each sampled cover `F`, whenever violated
/// sets satisfy `S1 ⊊ S2` and some minimal violated set `C` crosses both,
/// the residual `S2 ∖ (S1 ∪ C)` must be empty or itself violated. This is
/// the structural property that caps how many output edges the charging
/// argument can assign to one active set.
///
/// Violated sets range over both orientations of every violated shore.
pub fn check_residual_closure(
    fam: &CutFamily,
    g: &LabeledMultigraph,
    f_samples: &[EdgeSet],
) -> ResidualCheck {
    let mut pairs_checked = 0;
    for (sample_index, f) in f_samples.iter().enumerate() {
        let collections = violated_collections(fam, g, f);
        let mut oriented: Vec<NodeShore> = collections
            .violated
            .iter()
            .flat_map(|s| [s.clone(), s.complement()])
            .collect();
        oriented.sort();
        for s1 in &oriented {
            for s2 in &oriented {
                if !s1.is_proper_subset_of(s2) {
                    continue;
                }
                for c in &collections.minimal {
                    if !c.crosses(s1) || !c.crosses(s2) {
                        continue;
                    }
                    pairs_checked += 1;
                    let residual = s2.difference(&s1.union(c));
                    let ok = residual.is_empty()
                        || (fam.is_member(&residual) && !g.covers(&residual, f));
                    if !ok {
                        return ResidualCheck::Fail(ResidualCounterexample {
                            sample_index,
                            s1: s1.clone(),
                            s2: s2.clone(),
                            crossing_minimal: c.clone(),
                            residual,
                        });
                    }
                }
            }
        }
    }
    ResidualCheck::Pass { pairs_checked }
}

/// Parity relations between the cuts of two crossing deficient shores.
///
/// For a `(p,1)`-feasible subgraph `F1`, two crossing shores whose cuts both
/// have exactly `p+1` edges with at least two unsafe satisfy, within `F1`:
///
/// * `|δ(A∪B)| ≡ |δ(A∩B)| (mod 2)` and `|δ(A∖B)| ≡ |δ(B∖A)| (mod 2)`;
/// * for even `p`: `|δ(A∩B)|` and `|δ(A∖B)|` have opposite parity;
/// * for odd `p`: they agree, and all four derived cuts have exactly `p+1`
///   edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub crossing: bool,
    pub a_deficient: bool,
    pub b_deficient: bool,
    pub applicable: bool,
    pub union_vs_intersection_parity: Option<bool>,
    pub difference_parity: Option<bool>,
    pub mixed_parity: Option<bool>,
    /// Odd `p` only: every derived cut has exactly `p+1` edges.
    pub derived_cuts_all_p_plus_one: Option<bool>,
    pub derived_cut_sizes: Option<[usize; 4]>,
}

impl ParityReport {
    pub fn all_hold(&self) -> bool {
        self.applicable
            && self.union_vs_intersection_parity.unwrap_or(false)
            && self.difference_parity.unwrap_or(false)
            && self.mixed_parity.unwrap_or(false)
            && self.derived_cuts_all_p_plus_one.unwrap_or(true)
    }
}

pub fn parity_check(
    g: &LabeledMultigraph,
    f1: &EdgeSet,
    p: u32,
    a: &NodeShore,
    b: &NodeShore,
) -> Result<ParityReport, FamilyError> {
    a.require_proper()?;
    b.require_proper()?;
    let deficient = |s: &NodeShore| {
        let total = g.cut_size_in(s, f1);
        let unsafe_count = f1
            .iter()
            .filter(|&&id| {
                let e = &g.edges()[id as usize];
                !e.is_safe() && e.crosses(s)
            })
            .count();
        total == (p + 1) as usize && unsafe_count >= 2
    };
    let crossing = a.crosses(b);
    let a_deficient = deficient(a);
    let b_deficient = deficient(b);
    let applicable = crossing && a_deficient && b_deficient;
    if !applicable {
        return Ok(ParityReport {
            crossing,
            a_deficient,
            b_deficient,
            applicable,
            union_vs_intersection_parity: None,
            difference_parity: None,
            mixed_parity: None,
            derived_cuts_all_p_plus_one: None,
            derived_cut_sizes: None,
        });
    }
    let union = g.cut_size_in(&a.union(b), f1);
    let inter = g.cut_size_in(&a.intersection(b), f1);
    let a_minus = g.cut_size_in(&a.difference(b), f1);
    let b_minus = g.cut_size_in(&b.difference(a), f1);
    let mixed = if p.is_multiple_of(2) {
        inter % 2 != a_minus % 2
    } else {
        inter % 2 == a_minus % 2
    };
    let all_p_plus_one = (p % 2 == 1).then(|| {
        [union, inter, a_minus, b_minus]
            .iter()
            .all(|&s| s == (p + 1) as usize)
    });
    Ok(ParityReport {
        crossing,
        a_deficient,
        b_deficient,
        applicable,
        union_vs_intersection_parity: Some(union % 2 == inter % 2),
        difference_parity: Some(a_minus % 2 == b_minus % 2),
        mixed_parity: Some(mixed),
        derived_cuts_all_p_plus_one: all_p_plus_one,
        derived_cut_sizes: Some([union, inter, a_minus, b_minus]),
    })
}

/// Parses a family file: one shore per line, `S={i,j,k}`. Blank lines and
/// `#` comments are ignored. Orientations are preserved as written.
pub fn parse_family(text: &str, ground_size: usize) -> Result<Vec<NodeShore>, FamilyError> {
    let mut shores = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let body = line
            .strip_prefix("S={")
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| FamilyError::Parse {
                line: line_no + 1,
                reason: format!("expected `S={{i,j,...}}`, got {line:?}"),
            })?;
        let mut members = Vec::new();
        for field in body.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let v = field.parse().map_err(|_| FamilyError::Parse {
                line: line_no + 1,
                reason: format!("bad node id {field:?}"),
            })?;
            members.push(v);
        }
        shores.push(NodeShore::proper(ground_size, members)?);
    }
    if shores.is_empty() {
        return Err(FamilyError::Empty);
    }
    Ok(shores)
}

pub fn format_family(shores: &[NodeShore]) -> String {
    let mut out = String::new();
    for s in shores {
        out.push_str(&format!("S={s}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgc;
    use crate::instances::doubled_four_cycle;

    fn shore(n: usize, members: &[u32]) -> NodeShore {
        NodeShore::from_members(n, members.iter().copied()).unwrap()
    }

    /// Deficient family of the doubled 4-cycle at p = 3: canonically
    /// {v4}, {v2,v3}, {v3,v4}, {v2,v3,v4} (for the cuts around v4, {v2,v3},
    /// {v1,v2}, and v1).
    fn sample_family() -> (CutFamily, LabeledMultigraph) {
        let g = doubled_four_cycle();
        let cuts = fgc::deficient_cuts(&g, 3, &g.all_edges(), 18).unwrap();
        let fam =
            CutFamily::close_complements(4, cuts.into_iter().map(|c| c.shore)).unwrap();
        (fam, g)
    }

    #[test]
    fn close_complements_dedups_orientations() {
        let fam = CutFamily::close_complements(
            4,
            vec![shore(4, &[0, 1]), shore(4, &[2, 3]), shore(4, &[1, 2])],
        )
        .unwrap();
        assert_eq!(fam.len(), 2);
        assert!(fam.is_member(&shore(4, &[0, 1])));
        assert!(fam.is_member(&shore(4, &[2, 3])));
        assert!(fam.is_member(&shore(4, &[0, 3])));
        assert!(!fam.is_member(&shore(4, &[0])));
        assert!(!fam.is_member(&NodeShore::empty(4)));
        assert!(!fam.is_member(&NodeShore::full(4)));
    }

    #[test]
    fn close_complements_rejects_improper_and_mismatched() {
        assert!(CutFamily::close_complements(4, vec![NodeShore::full(4)]).is_err());
        assert!(CutFamily::close_complements(4, vec![shore(5, &[1])]).is_err());
    }

    #[test]
    fn doubled_cycle_family_is_weakly_but_not_plainly_uncrossable() {
        let (fam, _) = sample_family();
        assert_eq!(fam.len(), 4);
        match check_uncrossable(&fam) {
            PairCheck::Fail { a, b } => {
                // First offending pair in scan order: the cuts around
                // {v2,v3} and {v1,v2}.
                assert_eq!((a, b), (shore(4, &[1, 2]), shore(4, &[2, 3])));
            }
            PairCheck::Pass => panic!("family must fail plain uncrossability"),
        }
        assert_eq!(check_weakly_uncrossable(&fam), PairCheck::Pass);
    }

    #[test]
    fn uncrossable_family_example() {
        // All singleton cuts of a 4-node graph: crossing pairs never occur,
        // and nested/disjoint pairs resolve through differences.
        let fam = CutFamily::close_complements(
            4,
            (0..4).map(|v| shore(4, &[v])),
        )
        .unwrap();
        assert_eq!(check_uncrossable(&fam), PairCheck::Pass);
        assert_eq!(check_weakly_uncrossable(&fam), PairCheck::Pass);
    }

    #[test]
    fn violated_collections_on_the_doubled_cycle() {
        let (fam, g) = sample_family();
        let empty = EdgeSet::new();
        let collections = violated_collections(&fam, &g, &empty);
        assert_eq!(collections.violated.len(), 4);
        // Minimal sets keep the small orientation and are pairwise disjoint:
        // {v1}, {v4}, {v2,v3}.
        assert_eq!(
            collections.minimal,
            vec![shore(4, &[0]), shore(4, &[3]), shore(4, &[1, 2])]
        );
        for a in &collections.minimal {
            for b in &collections.minimal {
                assert!(a == b || a.is_disjoint_from(b));
            }
        }
        // Covering the cut around v1 removes two canonical shores. The cut
        // around {v1,v2} stays violated, and its minimizing orientation
        // flips to {v1,v2} because {v4} ⊂ {v3,v4} is itself violated.
        let f = EdgeSet::from([0]); // a (v1,v2) edge
        let collections = violated_collections(&fam, &g, &f);
        assert_eq!(collections.violated.len(), 2);
        assert_eq!(collections.minimal, vec![shore(4, &[3]), shore(4, &[0, 1])]);
    }

    #[test]
    fn residual_closure_holds_on_the_sample() {
        let (fam, g) = sample_family();
        let samples = vec![EdgeSet::new(), EdgeSet::from([0]), EdgeSet::from([0, 4])];
        assert!(check_residual_closure(&fam, &g, &samples).passed());
    }

    #[test]
    fn residual_closure_rejects_a_broken_family() {
        // Six-node family {1,2}, {1,2,3,4}, {2,5}: with F = ∅ the minimal
        // violated set {2,5} crosses both {0,5} and {0,3,4,5} (complements
        // of the first two members), and the residual
        // {0,3,4,5} ∖ ({0,5} ∪ {2,5}) = {3,4} is not a member.
        let g = crate::graph::LabeledMultigraph::new(
            6,
            vec![crate::graph::Edge {
                u: 0,
                v: 5,
                cost: crate::rational::from_int(1),
                safety: crate::graph::Safety::Safe,
            }],
        )
        .unwrap();
        let fam = CutFamily::close_complements(
            6,
            vec![
                shore(6, &[1, 2]),
                shore(6, &[1, 2, 3, 4]),
                shore(6, &[2, 5]),
            ],
        )
        .unwrap();
        let check = check_residual_closure(&fam, &g, &[EdgeSet::new()]);
        match check {
            ResidualCheck::Fail(ce) => {
                assert_eq!(ce.residual, shore(6, &[3, 4]));
                assert_eq!(ce.crossing_minimal, shore(6, &[2, 5]));
            }
            ResidualCheck::Pass { .. } => panic!("expected a residual violation"),
        }
    }

    #[test]
    fn parity_check_on_a_crossing_deficient_pair() {
        let (_, g) = sample_family();
        let report = parity_check(&g, &g.all_edges(), 3, &shore(4, &[0, 1]), &shore(4, &[1, 2])).unwrap();
        assert!(report.applicable);
        assert!(report.all_hold());
        assert_eq!(report.derived_cut_sizes, Some([4, 4, 4, 4]));
    }

    #[test]
    fn parity_check_reports_inapplicable_pairs() {
        let (_, g) = sample_family();
        // Nested pair: not crossing.
        let report = parity_check(&g, &g.all_edges(), 3, &shore(4, &[1]), &shore(4, &[1, 2])).unwrap();
        assert!(!report.applicable && !report.crossing);
        // Crossing but not deficient (p = 2 makes 4-cuts nondeficient).
        let report = parity_check(&g, &g.all_edges(), 2, &shore(4, &[0, 1]), &shore(4, &[1, 2])).unwrap();
        assert!(!report.applicable && report.crossing && !report.a_deficient);
    }

    #[test]
    fn family_file_roundtrip() {
        let shores = vec![shore(5, &[1, 2]), shore(5, &[0, 3])];
        let text = format_family(&shores);
        assert_eq!(text, "S={1,2}\nS={0,3}\n");
        assert_eq!(parse_family(&text, 5).unwrap(), shores);
        assert!(parse_family("S={9}\n", 5).is_err());
        assert!(parse_family("T={1}\n", 5).is_err());
        assert!(parse_family("# only a comment\n", 5).is_err());
    }

    #[test]
    fn derived_pair_closure_is_literal() {
        // {0,1} and {1,2}: derived sets {0,1,2}, {1}, {0}, {2}.
        let ok = vec![shore(4, &[0, 1]), shore(4, &[1, 2]), shore(4, &[1]), shore(4, &[0])];
        assert!(check_derived_pair_closure(&ok).passed());
        // Dropping both small witnesses leaves only one derived member.
        let bad = vec![shore(4, &[0, 1]), shore(4, &[1, 2]), shore(4, &[0, 1, 2])];
        match check_derived_pair_closure(&bad) {
            PairCheck::Fail { a, b } => assert_eq!((a, b), (shore(4, &[0, 1]), shore(4, &[1, 2]))),
            PairCheck::Pass => panic!("literal check must not use complements"),
        }
    }
}
