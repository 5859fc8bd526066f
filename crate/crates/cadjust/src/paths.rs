//! Definite-status path enumeration, path classification, blocking and
//! m-connection tests, and edge visibility for PAGs.
//!
//! Enumeration is an exhaustive DFS over simple paths that abandons any
//! prefix whose last interior node is not of definite status; the criterion
//! only quantifies over definite-status paths. Separation verdicts come
//! from witness search, so every negative answer carries an open path. The
//! canonical order on paths is lexicographic on the node-name sequence,
//! which node indices mirror.

use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, NodeSet};
use crate::reach;

/// Status of an interior node on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Collider,
    DefiniteNonCollider,
    NonDefinite,
}

/// A path plus the derived status of each interior node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub nodes: Vec<u32>,
    /// One entry per interior node (`nodes.len() - 2` of them).
    pub statuses: Vec<NodeStatus>,
}

impl PathWitness {
    /// Validates that `nodes` is a path in `g` and derives statuses.
    pub fn new(g: &MixedGraph, nodes: Vec<u32>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::NotAPath("fewer than two nodes".into()));
        }
        let mut seen = vec![false; g.n() as usize];
        for (i, &v) in nodes.iter().enumerate() {
            if seen[v as usize] {
                return Err(Error::NotAPath(format!("repeated node `{}`", g.name(v))));
            }
            seen[v as usize] = true;
            if i > 0 && !g.adjacent(nodes[i - 1], v) {
                return Err(Error::NotAPath(format!(
                    "`{}` and `{}` are not adjacent",
                    g.name(nodes[i - 1]),
                    g.name(v)
                )));
            }
        }
        let statuses = (1..nodes.len() - 1)
            .map(|i| interior_status(g, nodes[i - 1], nodes[i], nodes[i + 1]))
            .collect();
        Ok(PathWitness { nodes, statuses })
    }

    pub fn is_definite_status(&self) -> bool {
        self.statuses.iter().all(|s| *s != NodeStatus::NonDefinite)
    }

    /// Interior nodes tagged collider.
    pub fn colliders(&self) -> Vec<u32> {
        self.statuses
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == NodeStatus::Collider)
            .map(|(i, _)| self.nodes[i + 1])
            .collect()
    }

    pub fn definite_non_colliders(&self) -> Vec<u32> {
        self.statuses
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == NodeStatus::DefiniteNonCollider)
            .map(|(i, _)| self.nodes[i + 1])
            .collect()
    }
}

/// Status of `b` between its path neighbors `a` and `c`.
pub fn interior_status(g: &MixedGraph, a: u32, b: u32, c: u32) -> NodeStatus {
    let into_from_a = g.mark_at(b, a) == Some(Mark::Arrow);
    let into_from_c = g.mark_at(b, c) == Some(Mark::Arrow);
    if into_from_a && into_from_c {
        return NodeStatus::Collider;
    }
    // b -> a or b -> c as a directed edge makes b a definite non-collider
    if g.is_directed(b, a) || g.is_directed(b, c) {
        return NodeStatus::DefiniteNonCollider;
    }
    // undirected subpath a *-* b *-* c (via -- or o-o) with a, c non-adjacent
    let undirected = |u: u32, v: u32| {
        matches!(
            (g.mark_at(u, v), g.mark_at(v, u)),
            (Some(Mark::Tail), Some(Mark::Tail)) | (Some(Mark::Circle), Some(Mark::Circle))
        )
    };
    if undirected(a, b) && undirected(b, c) && !g.adjacent(a, c) {
        return NodeStatus::DefiniteNonCollider;
    }
    NodeStatus::NonDefinite
}

/// Result of classifying a node sequence as a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathClass {
    pub possibly_causal: bool,
    pub definite_status: bool,
    pub proper: bool,
}

/// Classifies path `p` with respect to the treatment set `x`.
///
/// Causality uses the strict pairwise definition over all node pairs of the
/// path; properness means only the first node lies in `x`.
pub fn classify_path(g: &MixedGraph, p: &[u32], x: &NodeSet) -> Result<PathClass> {
    let w = PathWitness::new(g, p.to_vec())?;
    Ok(PathClass {
        possibly_causal: reach::is_possibly_directed_path(g, p),
        definite_status: w.is_definite_status(),
        proper: p.len() >= 2 && x.contains(p[0]) && p[1..].iter().all(|v| !x.contains(*v)),
    })
}

/// Filter for path enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalFilter {
    All,
    NonCausal,
    PossiblyCausal,
}

/// Enumerates proper definite-status paths from `x` to `y`, optionally
/// filtered by strict causal classification. Output is duplicate-free and
/// in canonical (lexicographic) order.
pub fn proper_definite_status_paths(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    filter: CausalFilter,
) -> Vec<PathWitness> {
    let mut out = Vec::new();
    let mut path: Vec<u32> = Vec::new();
    let mut on_path = vec![false; g.n() as usize];
    for start in x.iter() {
        path.push(start);
        on_path[start as usize] = true;
        extend(g, x, y, filter, &mut path, &mut on_path, &mut out);
        on_path[start as usize] = false;
        path.pop();
    }
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    return out;

    fn extend(
        g: &MixedGraph,
        x: &NodeSet,
        y: &NodeSet,
        filter: CausalFilter,
        path: &mut Vec<u32>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<PathWitness>,
    ) {
        let last = *path.last().unwrap();
        for next in g.neighbors(last) {
            if on_path[next as usize] || x.contains(next) {
                continue;
            }
            // the node before `last` now has both neighbors: prune
            // non-definite prefixes
            if path.len() >= 2 {
                let s = interior_status(g, path[path.len() - 2], last, next);
                if s == NodeStatus::NonDefinite {
                    continue;
                }
            }
            path.push(next);
            on_path[next as usize] = true;
            if y.contains(next) {
                let keep = match filter {
                    CausalFilter::All => true,
                    CausalFilter::NonCausal => !reach::is_possibly_directed_path(g, path),
                    CausalFilter::PossiblyCausal => reach::is_possibly_directed_path(g, path),
                };
                if keep {
                    out.push(PathWitness::new(g, path.clone()).expect("enumerated path is valid"));
                }
            }
            extend(g, x, y, filter, path, on_path, out);
            on_path[next as usize] = false;
            path.pop();
        }
    }
}

/// Blocking test for a definite-status path: open given `c` iff no definite
/// non-collider is in `c` and every collider has a descendant in `c`
/// (ancestry via directed edges in all graph classes).
pub fn is_blocked(g: &MixedGraph, p: &PathWitness, c: &NodeSet) -> Result<bool> {
    if !p.is_definite_status() {
        let i = p.statuses.iter().position(|s| *s == NodeStatus::NonDefinite).unwrap();
        return Err(Error::NonDefiniteStatus(g.name(p.nodes[i + 1]).to_string()));
    }
    let an_c = reach::ancestors(g, c);
    for v in p.definite_non_colliders() {
        if c.contains(v) {
            return Ok(true);
        }
    }
    for v in p.colliders() {
        if !an_c.contains(v) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Separation verdict with an open-path witness on the negative side.
#[derive(Debug, Clone)]
pub struct SeparationVerdict {
    pub separated: bool,
    pub witness: Option<PathWitness>,
}

/// m-separation (d-separation in DAGs): `a` and `b` are separated given `c`
/// iff every definite-status path between them is blocked by `c`. The
/// witness is the first open path in canonical order.
pub fn m_separated(g: &MixedGraph, a: &NodeSet, b: &NodeSet, c: &NodeSet) -> SeparationVerdict {
    let mut witness: Option<PathWitness> = None;
    for start in a.iter() {
        let from = NodeSet::singleton(start);
        // separation quantifies over all definite-status paths, so interior
        // nodes from `a` are allowed; enumerating per start node with a
        // singleton source imposes no extra properness restriction
        for p in proper_definite_status_paths(g, &from, b, CausalFilter::All) {
            if !is_blocked(g, &p, c).expect("enumerated paths are definite status") {
                match &witness {
                    Some(w) if w.nodes <= p.nodes => {}
                    _ => witness = Some(p),
                }
                break; // paths come in canonical order per start node
            }
        }
    }
    SeparationVerdict { separated: witness.is_none(), witness }
}

/// Visibility of a directed edge `x -> y` in a PAG: true iff some node `v`
/// outside `Adj(y)` has an edge into `x`, or reaches `x` through a
/// bidirected path whose nodes are all parents of `y`.
pub fn is_visible(g: &MixedGraph, x: u32, y: u32) -> Result<bool> {
    if g.class() != crate::graph::GraphClass::Pag {
        return Err(Error::ClassMismatch { expected: "pag".into(), found: g.class().to_string() });
    }
    if !g.is_directed(x, y) {
        return Err(Error::Precondition(format!(
            "`{}` -> `{}` is not a directed edge of the graph",
            g.name(x),
            g.name(y)
        )));
    }
    let pa_y = reach::parents(g, &NodeSet::singleton(y));
    for v in 0..g.n() {
        if v == x || v == y || g.adjacent(v, y) {
            continue;
        }
        // v *-> x directly
        if g.mark_at(x, v) == Some(Mark::Arrow) {
            return Ok(true);
        }
        // v *-> v1 <-> ... <-> vk <-> x with every vi in Pa(y) \ {v, x, y}
        let chain_ok = |u: u32| pa_y.contains(u) && u != v && u != x && u != y;
        let mut stack: Vec<u32> = (0..g.n())
            .filter(|&u| chain_ok(u) && g.mark_at(u, v) == Some(Mark::Arrow))
            .collect();
        let mut seen = vec![false; g.n() as usize];
        while let Some(u) = stack.pop() {
            if seen[u as usize] {
                continue;
            }
            seen[u as usize] = true;
            if g.is_bidirected(u, x) {
                return Ok(true);
            }
            for w in 0..g.n() {
                if chain_ok(w) && !seen[w as usize] && g.is_bidirected(u, w) {
                    stack.push(w);
                }
            }
        }
    }
    Ok(false)
}

/// Back-door paths from `x` to `y` in a DAG: paths whose first edge points
/// into the start node. With `proper`, only the first node may be in `x`.
pub fn backdoor_paths(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    proper: bool,
) -> Result<Vec<PathWitness>> {
    if g.class() != crate::graph::GraphClass::Dag {
        return Err(Error::ClassMismatch { expected: "dag".into(), found: g.class().to_string() });
    }
    let mut out = Vec::new();
    let mut path: Vec<u32> = Vec::new();
    let mut on_path = vec![false; g.n() as usize];
    for start in x.iter() {
        path.push(start);
        on_path[start as usize] = true;
        extend(g, x, y, proper, &mut path, &mut on_path, &mut out);
        on_path[start as usize] = false;
        path.pop();
    }
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    return Ok(out);

    fn extend(
        g: &MixedGraph,
        x: &NodeSet,
        y: &NodeSet,
        proper: bool,
        path: &mut Vec<u32>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<PathWitness>,
    ) {
        let last = *path.last().unwrap();
        for next in g.neighbors(last) {
            if on_path[next as usize] || (proper && x.contains(next)) {
                continue;
            }
            // first edge must be into the start node
            if path.len() == 1 && !g.is_directed(next, last) {
                continue;
            }
            path.push(next);
            on_path[next as usize] = true;
            if y.contains(next) {
                out.push(PathWitness::new(g, path.clone()).expect("enumerated path is valid"));
            }
            extend(g, x, y, proper, path, on_path, out);
            on_path[next as usize] = false;
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_graph;

    fn set(g: &MixedGraph, names: &[&str]) -> NodeSet {
        g.node_set(names).unwrap()
    }

    fn path_names(g: &MixedGraph, ps: &[PathWitness]) -> Vec<Vec<String>> {
        ps.iter().map(|p| g.name_seq(&p.nodes)).collect()
    }

    #[test]
    fn classify_fig3c_undirected_start() {
        let g = parse_graph(fixtures::FIG3C).unwrap();
        let p = g.node_seq(&["X", "V1", "V2", "Y"]).unwrap();
        let c = classify_path(&g, &p, &set(&g, &["X"])).unwrap();
        assert!(c.possibly_causal && c.definite_status && c.proper);
    }

    #[test]
    fn classify_fig3a_backdoor() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let p = g.node_seq(&["X", "V2", "Y"]).unwrap();
        let c = classify_path(&g, &p, &set(&g, &["X"])).unwrap();
        assert!(!c.possibly_causal);
        assert!(c.definite_status && c.proper);
    }

    #[test]
    fn classify_single_edge() {
        let g = parse_graph("dag\nA -> B\n").unwrap();
        let p = g.node_seq(&["A", "B"]).unwrap();
        let c = classify_path(&g, &p, &set(&g, &["A"])).unwrap();
        assert!(c.possibly_causal && c.definite_status && c.proper);
    }

    #[test]
    fn classify_rejects_non_path() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let p = g.node_seq(&["X", "V4"]).unwrap();
        assert!(classify_path(&g, &p, &set(&g, &["X"])).is_err());
    }

    #[test]
    fn enumerate_fig3a_noncausal() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let paths = proper_definite_status_paths(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            CausalFilter::NonCausal,
        );
        let expect: Vec<Vec<String>> = [
            vec!["X", "V1", "V2", "Y"],
            vec!["X", "V1", "Y"],
            vec!["X", "V2", "V1", "Y"],
            vec!["X", "V2", "Y"],
            vec!["X", "V3", "V1", "V2", "Y"],
            vec!["X", "V3", "V1", "Y"],
        ]
        .iter()
        .map(|p| p.iter().map(|s| s.to_string()).collect())
        .collect();
        assert_eq!(path_names(&g, &paths), expect);
    }

    #[test]
    fn enumerate_fig3a_possibly_causal() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let paths = proper_definite_status_paths(
            &g,
            &set(&g, &["X"]),
            &set(&g, &["Y"]),
            CausalFilter::PossiblyCausal,
        );
        assert_eq!(path_names(&g, &paths), vec![vec!["X".to_string(), "Y".to_string()]]);
    }

    #[test]
    fn enumerate_disconnected_empty() {
        let g = parse_graph("dag\nA -> B\nC -> D\n").unwrap();
        let paths =
            proper_definite_status_paths(&g, &set(&g, &["A"]), &set(&g, &["D"]), CausalFilter::All);
        assert!(paths.is_empty());
    }

    #[test]
    fn blocking_fig3a() {
        let g = parse_graph(fixtures::FIG3A).unwrap();
        let p = PathWitness::new(&g, g.node_seq(&["X", "V2", "Y"]).unwrap()).unwrap();
        assert!(!is_blocked(&g, &p, &set(&g, &["V1"])).unwrap());
        assert!(is_blocked(&g, &p, &set(&g, &["V1", "V2"])).unwrap());
    }

    #[test]
    fn blocking_collider_given_empty() {
        let g = parse_graph("dag\nA -> C\nB -> C\n").unwrap();
        let p = PathWitness::new(&g, g.node_seq(&["A", "C", "B"]).unwrap()).unwrap();
        assert_eq!(p.statuses, vec![NodeStatus::Collider]);
        assert!(is_blocked(&g, &p, &NodeSet::empty()).unwrap());
    }

    #[test]
    fn msep_fig5_after_deleting_into_x2() {
        let g = parse_graph(fixtures::FIG5).unwrap();
        let manipulated = g.delete_edges_into(&g.node_set(&["X2"]).unwrap()).unwrap();
        let v = m_separated(
            &manipulated,
            &g.node_set(&["Y"]).unwrap(),
            &g.node_set(&["X1"]).unwrap(),
            &g.node_set(&["V1", "V2", "X2"]).unwrap(),
        );
        assert!(v.separated);
        assert!(v.witness.is_none());
    }

    #[test]
    fn msep_disconnected() {
        let g = parse_graph("dag\nA -> B\nC -> D\n").unwrap();
        let v = m_separated(&g, &set(&g, &["A"]), &set(&g, &["D"]), &NodeSet::empty());
        assert!(v.separated);
    }

    #[test]
    fn msep_fig1_witness_is_smoking_path() {
        let g = parse_graph(fixtures::FIG1).unwrap();
        let v = m_separated(&g, &set(&g, &["X"]), &set(&g, &["Y"]), &set(&g, &["Age"]));
        assert!(!v.separated);
        let w = v.witness.unwrap();
        assert_eq!(g.name_seq(&w.nodes), ["X", "Smoking", "Y"]);
        // witness re-validates as open
        assert!(!is_blocked(&g, &w, &set(&g, &["Age"])).unwrap());
    }

    #[test]
    fn visibility_fig4() {
        let g = parse_graph(fixtures::FIG4).unwrap();
        let id = |n| g.node_id(n).unwrap();
        // X -> Y visible via V3 <-> X with V3 not adjacent to Y
        assert!(is_visible(&g, id("X"), id("Y")).unwrap());
        // V2 -> Y: no node outside Adj(Y) points into V2, and no bidirected
        // chain through Pa(Y) ends at V2, so the edge is invisible
        assert!(!is_visible(&g, id("V2"), id("Y")).unwrap());
        assert!(!is_visible(&g, id("V1"), id("Y")).unwrap());
        assert!(is_visible(&g, id("V2"), id("X")).is_err()); // not directed
    }

    #[test]
    fn visibility_two_node_pag() {
        let g = parse_graph("pag\nA -> B\n").unwrap();
        let id = |n| g.node_id(n).unwrap();
        assert!(!is_visible(&g, id("A"), id("B")).unwrap());
    }

    #[test]
    fn visibility_second_clause_chain() {
        // v *-> p1 <-> p2 <-> x with p1, p2 parents of y certifies x -> y
        let g = parse_graph(
            "pag\nV o-> P1\nP1 <-> P2\nP2 <-> X\nP1 -> Y\nP2 -> Y\nX -> Y\n",
        )
        .unwrap();
        let id = |n| g.node_id(n).unwrap();
        assert!(is_visible(&g, id("X"), id("Y")).unwrap());
    }

    #[test]
    fn backdoor_paths_fig1() {
        let g = parse_graph(fixtures::FIG1).unwrap();
        let ps = backdoor_paths(&g, &set(&g, &["X"]), &set(&g, &["Y"]), true).unwrap();
        assert_eq!(path_names(&g, &ps), vec![vec!["X", "Age", "Y"], vec!["X", "Smoking", "Y"]]);
    }

    #[test]
    fn backdoor_paths_source_node_empty() {
        let g = parse_graph("dag\nX -> A\nA -> Y\n").unwrap();
        let ps = backdoor_paths(&g, &set(&g, &["X"]), &set(&g, &["Y"]), true).unwrap();
        assert!(ps.is_empty());
    }

    #[test]
    fn backdoor_paths_fig3b_includes_l_route() {
        let g = parse_graph(fixtures::FIG3B).unwrap();
        let ps = backdoor_paths(&g, &set(&g, &["X1", "X2"]), &set(&g, &["Y"]), true).unwrap();
        let all = path_names(&g, &ps);
        assert!(all.contains(&vec![
            "X2".to_string(),
            "S".to_string(),
            "L".to_string(),
            "Y".to_string()
        ]));
    }

    #[test]
    fn non_definite_interior_errors_in_blocking() {
        let g = parse_graph(fixtures::FIG4).unwrap();
        // V1 o-o V2 o-> X leaves V2 without definite status
        let p = PathWitness::new(&g, g.node_seq(&["V1", "V2", "X"]).unwrap()).unwrap();
        assert_eq!(p.statuses, vec![NodeStatus::NonDefinite]);
        assert!(is_blocked(&g, &p, &NodeSet::empty()).is_err());
    }
}
