//! Closed-form conditional adjustment set constructions: the parent set,
//! the Adjust set, the O-set, and the PAG Adjust set.
//!
//! Hard preconditions (applicability, amenability, shape restrictions) are
//! errors. When a construction's validity rests on an existence hedge and
//! the built set fails the criterion, the set is still returned with
//! `preconditions_met = false` so callers can see what was computed.

use serde::Serialize;

use crate::criterion;
use crate::error::{Error, Result};
use crate::graph::{require_disjoint, GraphClass, MixedGraph, NodeSet};
use crate::reach;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    ParentSet,
    Adjust,
    OSet,
    AdjustPag,
}

#[derive(Debug, Clone)]
pub struct ConstructedSet {
    pub kind: SetKind,
    pub members: NodeSet,
    pub preconditions_met: bool,
    pub reason: Option<String>,
}

fn require_class(g: &MixedGraph, want_pag: bool) -> Result<()> {
    let ok = match g.class() {
        GraphClass::Dag | GraphClass::Mpdag => !want_pag,
        GraphClass::Pag => want_pag,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ClassMismatch {
            expected: if want_pag { "pag" } else { "dag or mpdag" }.into(),
            found: g.class().to_string(),
        })
    }
}

fn require_applicable_amenable(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<()> {
    if let Some(r) = criterion::check_applicability(g, x, y, z)? {
        return Err(Error::Precondition(format!(
            "conditioning set contains `{}`, a possible descendant of the treatments",
            r.witness_node.unwrap_or_default()
        )));
    }
    if criterion::check_amenability(g, x, y)?.is_some() {
        return Err(Error::Precondition(
            "a proper possibly causal path does not start with a directed (visible) edge".into(),
        ));
    }
    Ok(())
}

/// Attaches the criterion verdict for constructions that are only valid
/// when some conditional adjustment set exists.
fn with_existence_check(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    kind: SetKind,
    members: NodeSet,
) -> Result<ConstructedSet> {
    let report = criterion::check_conditional_adjustment(g, x, y, z, &members)?;
    if report.is_satisfied() {
        Ok(ConstructedSet { kind, members, preconditions_met: true, reason: None })
    } else {
        Ok(ConstructedSet {
            kind,
            members,
            preconditions_met: false,
            reason: Some("no conditional adjustment set exists".into()),
        })
    }
}

/// Parent adjustment for a single treatment: `Pa(x) \ z`. Valid without an
/// existence hedge whenever `y` contains no parent of `x`.
pub fn parent_adjustment(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<ConstructedSet> {
    require_class(g, false)?;
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    if x.len() != 1 {
        return Err(Error::Precondition("parent adjustment needs a single treatment".into()));
    }
    require_applicable_amenable(g, x, y, z)?;
    let pa = reach::parents(g, x);
    if let Some(v) = y.intersect(&pa).iter().next() {
        return Err(Error::Precondition(format!(
            "response `{}` is a parent of the treatment",
            g.name(v)
        )));
    }
    Ok(ConstructedSet {
        kind: SetKind::ParentSet,
        members: pa.minus(z),
        preconditions_met: true,
        reason: None,
    })
}

/// The Adjust set for DAGs and MPDAGs:
/// `[PossAn(x ∪ y) ∪ An(z)] \ [Forb ∪ x ∪ y ∪ z]`.
pub fn adjust_set_mpdag(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<ConstructedSet> {
    require_class(g, false)?;
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    require_applicable_amenable(g, x, y, z)?;
    let members = criterion::adjust_candidate(g, x, y, z);
    with_existence_check(g, x, y, z, SetKind::Adjust, members)
}

/// The O-set: `Pa(PossMediators(x, y)) \ [Forb ∪ x ∪ y ∪ z]`, defined when
/// every response is a possible descendant of the treatments.
pub fn o_set(g: &MixedGraph, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<ConstructedSet> {
    require_class(g, false)?;
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    require_applicable_amenable(g, x, y, z)?;
    let pd = reach::possible_descendants(g, x);
    if let Some(v) = y.minus(&pd).iter().next() {
        return Err(Error::Precondition(format!(
            "response `{}` is not a possible descendant of the treatments",
            g.name(v)
        )));
    }
    let med = reach::possible_mediators(g, x, y);
    let forb = reach::forbidden_set(g, x, y);
    let members = reach::parents(g, &med).minus(&forb).minus(x).minus(y).minus(z);
    with_existence_check(g, x, y, z, SetKind::OSet, members)
}

/// The Adjust set for PAGs:
/// `[PossAn(x ∪ y) ∪ PossAn(z)] \ [Forb ∪ x ∪ y ∪ z]`.
pub fn adjust_set_pag(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
) -> Result<ConstructedSet> {
    require_class(g, true)?;
    require_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    require_applicable_amenable(g, x, y, z)?;
    let members = criterion::adjust_candidate(g, x, y, z);
    with_existence_check(g, x, y, z, SetKind::AdjustPag, members)
}
