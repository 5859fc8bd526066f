//! Decision procedures for covariate adjustment: applicability and
//! amenability preconditions, the conditional adjustment criterion for
//! MPDAGs and PAGs, the unconditional adjustment criterion, the conditional
//! back-door criterion for DAGs, and existence of a conditional adjustment
//! set via the closed-form Adjust construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{require_disjoint, GraphClass, MixedGraph, NodeSet};
use crate::paths::{self, CausalFilter, PathWitness};
use crate::reach;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Satisfied,
    Violated,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// The candidate set intersects the forbidden set.
    ForbiddenHit,
    /// Some proper non-causal definite-status path stays open.
    OpenPath,
    /// A proper possibly causal path starts with an undirected, circle, or
    /// invisible edge; no method identifies the effect here.
    NotAmenable,
    /// The conditioning set contains a possible descendant of the
    /// treatments; the criterion is silent.
    ZInPossDe,
}

/// Outcome of a criterion check. `Violated` and `Inapplicable` always carry
/// a witness: a node, a path, or both.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<Clause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_node: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<Vec<String>>,
}

impl CriterionReport {
    fn satisfied() -> Self {
        CriterionReport { verdict: Verdict::Satisfied, clause: None, witness_node: None, witness_path: None }
    }

    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }
}

/// Applicability: the criterion requires `z` to avoid possible descendants
/// of `x`. Returns an `Inapplicable` report naming an offending node, or
/// `None` when the check passes.
pub fn check_applicability(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<Option<CriterionReport>> {
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    let pd = reach::possible_descendants(g, x);
    let bad = z.intersect(&pd);
    let witness = bad.iter().next();
    Ok(witness.map(|v| CriterionReport {
        verdict: Verdict::Inapplicable,
        clause: Some(Clause::ZInPossDe),
        witness_node: Some(g.name(v).to_string()),
        witness_path: None,
    }))
}

/// First edge of a proper possibly causal path that disqualifies it:
/// undirected for MPDAGs, circle-marked or invisible-directed for PAGs.
fn first_edge_bad(g: &MixedGraph, a: u32, b: u32) -> bool {
    match g.class() {
        GraphClass::Dag => false,
        GraphClass::Mpdag => g.is_undirected(a, b),
        GraphClass::Pag => {
            if g.is_directed(a, b) {
                !paths::is_visible(g, a, b).expect("directed edge of a PAG")
            } else {
                // a possibly causal first edge without an arrowhead at `a`
                // that is not `a -> b` carries a circle somewhere
                true
            }
        }
    }
}

/// Amenability: every proper possibly causal path from `x` to `y` must
/// start with a directed (MPDAG) or visible directed (PAG) edge out of `x`.
/// Returns a `Violated`/`NotAmenable` report with the canonically first
/// offending path, or `None` when amenable.
pub fn check_amenability(g: &MixedGraph, x: &NodeSet, y: &NodeSet) -> Result<Option<CriterionReport>> {
    require_disjoint(g, &[("x", x), ("y", y)])?;
    let mut worst: Option<Vec<u32>> = None;
    reach::walk_proper_possibly_causal(g, x, y, &mut |p| {
        if first_edge_bad(g, p[0], p[1]) {
            match &worst {
                Some(w) if w.as_slice() <= p => {}
                _ => worst = Some(p.to_vec()),
            }
        }
    });
    Ok(worst.map(|p| CriterionReport {
        verdict: Verdict::Violated,
        clause: Some(Clause::NotAmenable),
        witness_node: None,
        witness_path: Some(g.name_seq(&p)),
    }))
}

/// Clause evaluation shared by the conditional and unconditional criteria:
/// (a) the candidate set must avoid the forbidden set, and (b) the blocking
/// set must close every proper non-causal definite-status path.
fn check_clauses(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    candidate: &NodeSet,
    blocking: &NodeSet,
) -> CriterionReport {
    let forb = reach::forbidden_set(g, x, y);
    if let Some(v) = candidate.intersect(&forb).iter().next() {
        return CriterionReport {
            verdict: Verdict::Violated,
            clause: Some(Clause::ForbiddenHit),
            witness_node: Some(g.name(v).to_string()),
            witness_path: None,
        };
    }
    for p in paths::proper_definite_status_paths(g, x, y, CausalFilter::NonCausal) {
        if !paths::is_blocked(g, &p, blocking).expect("enumerated paths are definite status") {
            return CriterionReport {
                verdict: Verdict::Violated,
                clause: Some(Clause::OpenPath),
                witness_node: None,
                witness_path: Some(g.name_seq(&p.nodes)),
            };
        }
    }
    CriterionReport::satisfied()
}

/// The conditional adjustment criterion: given pairwise disjoint sets with
/// `z` free of possible descendants of `x` and an amenable `(x, y)` pair,
/// `s` satisfies the criterion iff `s` avoids the forbidden set and
/// `s ∪ z` blocks all proper non-causal definite-status paths.
pub fn check_conditional_adjustment(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
) -> Result<CriterionReport> {
    require_disjoint(g, &[("x", x), ("y", y), ("z", z), ("s", s)])?;
    if let Some(r) = check_applicability(g, x, y, z)? {
        return Ok(r);
    }
    if let Some(r) = check_amenability(g, x, y)? {
        return Ok(r);
    }
    Ok(check_clauses(g, x, y, s, &s.union(z)))
}

/// The unconditional adjustment criterion: `w` itself must avoid the
/// forbidden set and block all proper non-causal definite-status paths.
pub fn check_unconditional_adjustment(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    w: &NodeSet,
) -> Result<CriterionReport> {
    require_disjoint(g, &[("x", x), ("y", y), ("w", w)])?;
    if let Some(r) = check_amenability(g, x, y)? {
        return Ok(r);
    }
    Ok(check_clauses(g, x, y, w, w))
}

/// The conditional back-door criterion for DAGs (sufficient only): `s`
/// avoids descendants of `x` and `s ∪ z` blocks all proper back-door paths.
pub fn check_conditional_backdoor(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
) -> Result<CriterionReport> {
    if g.class() != GraphClass::Dag {
        return Err(Error::ClassMismatch { expected: "dag".into(), found: g.class().to_string() });
    }
    require_disjoint(g, &[("x", x), ("y", y), ("z", z), ("s", s)])?;
    let de_x = reach::descendants(g, x);
    if let Some(v) = z.intersect(&de_x).iter().next() {
        return Err(Error::Precondition(format!(
            "conditioning set contains `{}`, a descendant of the treatments",
            g.name(v)
        )));
    }
    if let Some(v) = s.intersect(&de_x).iter().next() {
        return Ok(CriterionReport {
            verdict: Verdict::Violated,
            clause: Some(Clause::ForbiddenHit),
            witness_node: Some(g.name(v).to_string()),
            witness_path: None,
        });
    }
    let blocking = s.union(z);
    for p in paths::backdoor_paths(g, x, y, true)? {
        if !paths::is_blocked(g, &p, &blocking)? {
            return Ok(CriterionReport {
                verdict: Verdict::Violated,
                clause: Some(Clause::OpenPath),
                witness_node: None,
                witness_path: Some(g.name_seq(&p.nodes)),
            });
        }
    }
    Ok(CriterionReport::satisfied())
}

/// Existence decision: the Adjust set passes the criterion iff any
/// conditional adjustment set exists, so only that one candidate is tested.
#[derive(Debug, Clone, Serialize)]
pub struct ExistsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<CriterionReport>,
}

/// Decides whether any conditional adjustment set exists and returns the
/// Adjust set when one does. On failure the reason report carries the open
/// path, upgraded to `ForbiddenHit` when blocking it would require a
/// forbidden node.
pub fn exists_conditional_adjustment(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<ExistsReport> {
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    if let Some(r) = check_applicability(g, x, y, z)? {
        return Ok(ExistsReport { set: None, reason: Some(r) });
    }
    if let Some(r) = check_amenability(g, x, y)? {
        return Ok(ExistsReport { set: None, reason: Some(r) });
    }
    let adjust = adjust_candidate(g, x, y, z);
    let mut report = check_conditional_adjustment(g, x, y, z, &adjust)?;
    if report.is_satisfied() {
        return Ok(ExistsReport {
            set: Some(adjust.iter().map(|v| g.name(v).to_string()).collect()),
            reason: None,
        });
    }
    // Diagnose the open path: a definite non-collider outside z could only
    // have blocked it from inside the forbidden set.
    if let Some(path_names) = &report.witness_path {
        let forb = reach::forbidden_set(g, x, y);
        let ids = g
            .node_seq(&path_names.iter().map(|s| s.as_str()).collect::<Vec<_>>())
            .expect("witness nodes exist");
        let p = PathWitness::new(g, ids).expect("witness is a path");
        if let Some(v) = p.definite_non_colliders().into_iter().find(|&v| forb.contains(v)) {
            report.clause = Some(Clause::ForbiddenHit);
            report.witness_node = Some(g.name(v).to_string());
        }
    }
    Ok(ExistsReport { set: None, reason: Some(report) })
}

/// Eq.-style Adjust candidate for the graph's class:
/// `[PossAn(x ∪ y) ∪ An(z)] \ [Forb ∪ x ∪ y ∪ z]` for DAGs and MPDAGs,
/// with `PossAn(z)` replacing `An(z)` for PAGs.
pub(crate) fn adjust_candidate(g: &MixedGraph, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> NodeSet {
    let poss_an_xy = reach::possible_ancestors(g, &x.union(y));
    let z_part = match g.class() {
        GraphClass::Pag => reach::possible_ancestors(g, z),
        _ => reach::ancestors(g, z),
    };
    let forb = reach::forbidden_set(g, x, y);
    poss_an_xy.union(&z_part).minus(&forb).minus(x).minus(y).minus(z)
}

/// True iff every edge of a PAG-class `x -> y` pair on proper possibly
/// causal paths is visible; exposed for diagnostics.
pub fn amenable(g: &MixedGraph, x: &NodeSet, y: &NodeSet) -> Result<bool> {
    Ok(check_amenability(g, x, y)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_graph;

    fn set(g: &MixedGraph, names: &[&str]) -> NodeSet {
        g.node_set(names).unwrap()
    }

    #[test]
    fn applicability_fig3b_fails_on_w() {
        let g = parse_graph(fixtures::FIG3B).unwrap();
        let r = check_applicability(
            &g,
            &set(&g, &["X1", "X2"]),
            &set(&g, &["Y"]),
            &set(&g, &["W", "Z"]),
        )
        .unwrap()
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        assert_eq!(r.clause, Some(Clause::ZInPossDe));
        assert_eq!(r.witness_node.as_deref(), Some("W"));
    }

    #[test]
    fn applicability_fig3a_passes() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let r = check_applicability(&g, &set(&g, &["X"]), &set(&g, &["Y"]), &set(&g, &["V1", "V2"]))
            .unwrap();
        assert!(r.is_none());
        let r = check_applicability(&g, &set(&g, &["X"]), &set(&g, &["Y"]), &NodeSet::empty()).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn amenability_fig3c_witness() {
        let g = parse_graph(fixtures::FIG3C).unwrap();
        let r = check_amenability(&g, &set(&g, &["X"]), &set(&g, &["Y"])).unwrap().unwrap();
        assert_eq!(r.clause, Some(Clause::NotAmenable));
        assert_eq!(r.witness_path.as_deref().unwrap(), ["X", "V1", "V2", "Y"]);
    }

    #[test]
    fn amenability_fig3a_and_fig4_pass() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        assert!(check_amenability(&g, &set(&g, &["X"]), &set(&g, &["Y"])).unwrap().is_none());
        let g = parse_graph(fixtures::FIG4).unwrap();
        assert!(check_amenability(&g, &set(&g, &["X"]), &set(&g, &["Y"])).unwrap().is_none());
    }

    #[test]
    fn conditional_adjustment_examples_fig3a() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let (x, y) = (set(&g, &["X"]), set(&g, &["Y"]));
        // empty set suffices given {V1, V2}
        let r = check_conditional_adjustment(&g, &x, &y, &set(&g, &["V1", "V2"]), &NodeSet::empty())
            .unwrap();
        assert!(r.is_satisfied());
        // given {V1} alone the V2 back-door path stays open
        let r = check_conditional_adjustment(&g, &x, &y, &set(&g, &["V1"]), &NodeSet::empty()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.clause, Some(Clause::OpenPath));
        assert_eq!(r.witness_path.as_deref().unwrap(), ["X", "V2", "Y"]);
        // adding S = {V2} closes it
        let r = check_conditional_adjustment(&g, &x, &y, &set(&g, &["V1"]), &set(&g, &["V2"])).unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn conditional_adjustment_fig3b() {
        let g = parse_graph(fixtures::FIG3B).unwrap();
        let r = check_conditional_adjustment(
            &g,
            &set(&g, &["X1", "X2"]),
            &set(&g, &["Y"]),
            &set(&g, &["Z"]),
            &set(&g, &["S", "W"]),
        )
        .unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn conditional_adjustment_fig4_pag() {
        let g = parse_graph(fixtures::FIG4).unwrap();
        let r = check_conditional_adjustment(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            &set(&g, &["V1"]),
            &set(&g, &["V2", "V4"]),
        )
        .unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn unconditional_bridge_examples() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let (x, y) = (set(&g, &["X"]), set(&g, &["Y"]));
        let r = check_unconditional_adjustment(&g, &x, &y, &set(&g, &["V1", "V2"])).unwrap();
        assert!(r.is_satisfied());
        let g4 = parse_graph(fixtures::FIG4).unwrap();
        let r = check_unconditional_adjustment(
            &g4,
            &g4.node_set(&["X"]).unwrap(),
            &g4.node_set(&["Y"]).unwrap(),
            &g4.node_set(&["V1", "V2", "V4"]).unwrap(),
        )
        .unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn unconditional_forbidden_hit_fig5() {
        let g = parse_graph(fixtures::FIG5).unwrap();
        let r = check_unconditional_adjustment(
            &g,
            &set(&g, &["X1", "X2"]),
            &set(&g, &["Y"]),
            &set(&g, &["V1"]),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.clause, Some(Clause::ForbiddenHit));
        assert_eq!(r.witness_node.as_deref(), Some("V1"));
    }

    #[test]
    fn conditional_backdoor_fig1() {
        let g = parse_graph(fixtures::FIG1).unwrap();
        let r = check_conditional_backdoor(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            &set(&g, &["Age"]),
            &set(&g, &["Smoking"]),
        )
        .unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn conditional_backdoor_source_node() {
        let g = parse_graph("dag\nX -> A\nA -> Y\n").unwrap();
        let r = check_conditional_backdoor(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            &NodeSet::empty(),
            &NodeSet::empty(),
        )
        .unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn conditional_backdoor_fig3b() {
        let g = parse_graph(fixtures::FIG3B).unwrap();
        let (x, y) = (set(&g, &["X1", "X2"]), set(&g, &["Y"]));
        // {L} blocks the only proper back-door path X2 <- S <- L -> Y and
        // contains no descendant of the treatments
        let r = check_conditional_backdoor(&g, &x, &y, &set(&g, &["Z"]), &set(&g, &["L"])).unwrap();
        assert!(r.is_satisfied());
        // {S, W} is a conditional adjustment set but fails the stricter
        // back-door clause (a): both are descendants of X1
        let r = check_conditional_backdoor(&g, &x, &y, &set(&g, &["Z"]), &set(&g, &["S", "W"]))
            .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.clause, Some(Clause::ForbiddenHit));
        assert_eq!(r.witness_node.as_deref(), Some("S"));
    }

    #[test]
    fn conditional_backdoor_rejects_z_in_de() {
        let g = parse_graph(fixtures::FIG3B).unwrap();
        let r = check_conditional_backdoor(
            &g,
            &set(&g, &["X1", "X2"]),
            &set(&g, &["Y"]),
            &set(&g, &["W"]),
            &NodeSet::empty(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn exists_fig3a_z_v1() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let r = exists_conditional_adjustment(&g, &set(&g, &["X"]), &set(&g, &["Y"]), &set(&g, &["V1"]))
            .unwrap();
        assert_eq!(r.set.as_deref().unwrap(), ["V2", "V3", "V4"]);
    }

    #[test]
    fn exists_fig5_absent_with_forbidden_blocker() {
        let g = parse_graph(fixtures::FIG5).unwrap();
        let r = exists_conditional_adjustment(
            &g,
            &set(&g, &["X1", "X2"]),
            &set(&g, &["Y"]),
            &set(&g, &["V2"]),
        )
        .unwrap();
        assert!(r.set.is_none());
        let reason = r.reason.unwrap();
        assert_eq!(reason.clause, Some(Clause::ForbiddenHit));
        assert_eq!(reason.witness_node.as_deref(), Some("V1"));
        assert_eq!(reason.witness_path.as_deref().unwrap(), ["X2", "V1", "Y"]);
    }

    #[test]
    fn exists_fig3c_not_amenable() {
        let g = parse_graph(fixtures::FIG3C).unwrap();
        let r = exists_conditional_adjustment(&g, &set(&g, &["X"]), &set(&g, &["Y"]), &set(&g, &["V3"]))
            .unwrap();
        assert!(r.set.is_none());
        let reason = r.reason.unwrap();
        assert_eq!(reason.clause, Some(Clause::NotAmenable));
        assert_eq!(reason.witness_path.as_deref().unwrap(), ["X", "V1", "V2", "Y"]);
    }

    #[test]
    fn overlapping_sets_error() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let r = check_conditional_adjustment(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            &set(&g, &["V1"]),
            &set(&g, &["V1"]),
        );
        assert!(matches!(r, Err(Error::OverlappingSets(_))));
    }
}
