//! Independent brute-force verifiers: enumeration of the DAGs an MPDAG
//! represents, per-DAG criterion equivalence, moralization-based
//! d-separation, the proper-back-door reformulation of the adjustment
//! criterion, strict-definition path classification, and the canonical DAG
//! of a MAG.
//!
//! Everything here re-derives answers by a route disjoint from the
//! production code so the two can check each other.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::criterion::{self, Verdict};
use crate::error::{Error, Result};
use crate::graph::{GraphClass, Mark, MixedGraph, NodeSet};
use crate::reach;

/// The DAGs represented by an MPDAG.
#[derive(Debug)]
pub struct DagClass {
    pub source: MixedGraph,
    pub members: Vec<MixedGraph>,
}

/// Enumerates every orientation of the undirected edges that is acyclic
/// and, unless `literal` is set, introduces no unshielded collider absent
/// from the source graph. The literal variant drops the collider filter and
/// exists only for comparing against the bare textual definition of the
/// represented class.
pub fn enumerate_dag_extensions(g: &MixedGraph, cap: usize, literal: bool) -> Result<DagClass> {
    if g.class() == GraphClass::Pag {
        return Err(Error::ClassMismatch { expected: "dag or mpdag".into(), found: "pag".into() });
    }
    let undirected: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .filter(|e| e.mark_at_a == Mark::Tail && e.mark_at_b == Mark::Tail)
        .map(|e| (e.a, e.b))
        .collect();
    if undirected.len() > cap {
        return Err(Error::EnumerationCap { cap, found: undirected.len() });
    }

    let mut members = Vec::new();
    let mut work = g.clone();
    orient(&mut work, &undirected, 0, literal, &mut members);
    members.sort_by_key(|m| crate::parse::serialize_graph(m));
    return Ok(DagClass { source: g.clone(), members });

    fn orient(
        work: &mut MixedGraph,
        rest: &[(u32, u32)],
        i: usize,
        literal: bool,
        out: &mut Vec<MixedGraph>,
    ) {
        if i == rest.len() {
            let dag = MixedGraph::new_unchecked(GraphClass::Dag, work.names().to_vec(), &work.edges());
            debug_assert!(dag.validate().is_ok());
            out.push(dag);
            return;
        }
        let (a, b) = rest[i];
        for (from, to) in [(a, b), (b, a)] {
            if work.has_directed_path(to, from) {
                continue; // would close a directed cycle
            }
            if !literal && creates_new_collider(work, from, to) {
                continue;
            }
            work.set_edge(from, Mark::Tail, Mark::Arrow, to);
            orient(work, rest, i + 1, literal, out);
            work.set_edge(a, Mark::Tail, Mark::Tail, b);
        }
    }

    /// Orienting `from -> to` creates an unshielded collider absent from the
    /// source iff another directed edge already points at `to` from a node
    /// non-adjacent to `from` (the `from`-`to` edge was undirected in the
    /// source, so any collider through it is new).
    fn creates_new_collider(work: &MixedGraph, from: u32, to: u32) -> bool {
        work.parents_of(to).iter().any(|&c| c != from && !work.adjacent(c, from))
    }
}

/// Outcome of re-checking a criterion verdict in every represented DAG.
#[derive(Debug, Clone)]
pub struct ClassCheck {
    pub class_size: usize,
    pub verdict: Verdict,
    pub agree: bool,
}

fn member_agrees(
    member: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
    verdict: Verdict,
) -> bool {
    criterion::check_conditional_adjustment(member, x, y, z, s)
        .map(|r| r.verdict == verdict)
        .unwrap_or(false)
}

/// Checks that the MPDAG criterion verdict for `(x, y, z, s)` equals the
/// DAG-level verdict in every member of the represented class. Applicability
/// and amenability must hold in the MPDAG. Fans out over members when the
/// `parallel` feature is on.
pub fn verify_criterion_across_class(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
    cap: usize,
) -> Result<ClassCheck> {
    let (class, verdict) = class_and_verdict(g, x, y, z, s, cap)?;
    #[cfg(feature = "parallel")]
    let agree = class.members.par_iter().all(|m| member_agrees(m, x, y, z, s, verdict));
    #[cfg(not(feature = "parallel"))]
    let agree = class.members.iter().all(|m| member_agrees(m, x, y, z, s, verdict));
    Ok(ClassCheck { class_size: class.members.len(), verdict, agree })
}

/// Sequential variant of [`verify_criterion_across_class`], kept callable
/// with the parallel feature on so benchmarks can compare both.
pub fn verify_criterion_across_class_seq(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
    cap: usize,
) -> Result<ClassCheck> {
    let (class, verdict) = class_and_verdict(g, x, y, z, s, cap)?;
    let agree = class.members.iter().all(|m| member_agrees(m, x, y, z, s, verdict));
    Ok(ClassCheck { class_size: class.members.len(), verdict, agree })
}

fn class_and_verdict(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    z: &NodeSet,
    s: &NodeSet,
    cap: usize,
) -> Result<(DagClass, Verdict)> {
    let report = criterion::check_conditional_adjustment(g, x, y, z, s)?;
    if report.verdict == Verdict::Inapplicable || report.clause == Some(criterion::Clause::NotAmenable)
    {
        return Err(Error::Precondition(
            "class-level verification assumes applicability and amenability".into(),
        ));
    }
    Ok((enumerate_dag_extensions(g, cap, false)?, report.verdict))
}

/// d-separation decided by moralizing the ancestral induced subgraph of
/// `a ∪ b ∪ c` and testing undirected reachability while avoiding `c`.
pub fn dsep_moral(g: &MixedGraph, a: &NodeSet, b: &NodeSet, c: &NodeSet) -> Result<bool> {
    if g.class() != GraphClass::Dag {
        return Err(Error::ClassMismatch { expected: "dag".into(), found: g.class().to_string() });
    }
    let anc = reach::ancestors(g, &a.union(b).union(c));
    let sub = g.induced_subgraph(&anc)?;
    let moral = {
        let as_dag = MixedGraph::new_unchecked(GraphClass::Dag, sub.names().to_vec(), &sub.edges());
        as_dag.moral_graph()?
    };
    // node ids changed in the subgraph; map through names
    let map = |s: &NodeSet| -> NodeSet {
        s.iter().filter_map(|v| moral.node_id(g.name(v))).collect()
    };
    let (a, b, c) = (map(a), map(b), map(c));
    let mut seen = vec![false; moral.n() as usize];
    let mut stack: Vec<u32> = a.iter().filter(|&v| !c.contains(v)).collect();
    for &v in &stack {
        seen[v as usize] = true;
    }
    while let Some(v) = stack.pop() {
        if b.contains(v) {
            return Ok(false);
        }
        for u in moral.neighbors(v) {
            if !seen[u as usize] && !c.contains(u) {
                seen[u as usize] = true;
                stack.push(u);
            }
        }
    }
    Ok(true)
}

/// Alternate form of the unconditional adjustment criterion's blocking
/// clause for DAGs: `w` blocks all proper non-causal paths iff `w`
/// d-separates `x` and `y` in the proper back-door graph.
pub fn adjustment_via_pbd(g: &MixedGraph, x: &NodeSet, y: &NodeSet, w: &NodeSet) -> Result<bool> {
    let pbd = g.proper_backdoor_graph(x, y)?;
    dsep_moral(&pbd, x, y, w)
}

/// Strict pairwise oracle for possible descendants: endpoints of simple
/// paths that satisfy the possibly-directed definition over every node
/// pair. Exponential-path DFS, test use only.
pub fn strict_possible_descendants(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    let mut hit: Vec<bool> = (0..g.n()).map(|v| w.contains(v)).collect();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n() as usize];
    for start in w.iter() {
        path.push(start);
        on_path[start as usize] = true;
        extend(g, &mut path, &mut on_path, &mut hit);
        on_path[start as usize] = false;
        path.pop();
    }
    return (0..g.n()).filter(|&v| hit[v as usize]).collect();

    fn extend(g: &MixedGraph, path: &mut Vec<u32>, on_path: &mut Vec<bool>, hit: &mut Vec<bool>) {
        let last = *path.last().unwrap();
        for next in g.neighbors(last) {
            if on_path[next as usize] {
                continue;
            }
            if path.iter().any(|&u| g.mark_at(u, next) == Some(Mark::Arrow)) {
                continue;
            }
            path.push(next);
            on_path[next as usize] = true;
            hit[next as usize] = true;
            extend(g, path, on_path, hit);
            on_path[next as usize] = false;
            path.pop();
        }
    }
}

/// Canonical DAG of a MAG-shaped graph (edges `->` and `<->` only, no
/// directed or almost directed cycle): keeps directed edges and replaces
/// each `A <-> B` with a fresh latent node and edges `L_AB -> A`,
/// `L_AB -> B`.
pub fn canonical_dag(g: &MixedGraph) -> Result<MixedGraph> {
    let mut directed: Vec<(String, String)> = Vec::new();
    let mut bidirected: Vec<(String, String)> = Vec::new();
    for e in g.edges() {
        match (e.mark_at_a, e.mark_at_b) {
            (Mark::Tail, Mark::Arrow) => {
                directed.push((g.name(e.a).into(), g.name(e.b).into()))
            }
            (Mark::Arrow, Mark::Tail) => {
                directed.push((g.name(e.b).into(), g.name(e.a).into()))
            }
            (Mark::Arrow, Mark::Arrow) => {
                if g.has_directed_path(e.a, e.b) || g.has_directed_path(e.b, e.a) {
                    return Err(Error::Precondition(format!(
                        "not ancestral: almost directed cycle through `{}` <-> `{}`",
                        g.name(e.a),
                        g.name(e.b)
                    )));
                }
                bidirected.push((g.name(e.a).into(), g.name(e.b).into()));
            }
            _ => {
                return Err(Error::Precondition(
                    "canonical DAG input must contain only `->` and `<->` edges".into(),
                ))
            }
        }
    }
    let mut names: Vec<String> = g.names().to_vec();
    let mut edges: Vec<(String, Mark, Mark, String)> = directed
        .into_iter()
        .map(|(a, b)| (a, Mark::Tail, Mark::Arrow, b))
        .collect();
    for (a, b) in bidirected {
        let mut latent = format!("L_{a}{b}");
        while names.contains(&latent) {
            latent.push('_');
        }
        names.push(latent.clone());
        edges.push((latent.clone(), Mark::Tail, Mark::Arrow, a));
        edges.push((latent, Mark::Tail, Mark::Arrow, b));
    }
    MixedGraph::new(GraphClass::Dag, names, edges)
}
