//! Ancestral relations: parents, (possible) ancestors and descendants,
//! (possible) mediators along proper causal paths, and the forbidden set.
//!
//! Possible descendants are computed by a breadth-first search over walk
//! states `(previous, current)` that traverses an edge only away from a
//! tail or circle mark and only onto a node non-adjacent to the previous
//! one. Every shortest subsequence of a possibly directed path is an
//! unshielded possibly directed path, so restricting the search to
//! unshielded steps loses nothing; requiring them is what keeps the search
//! sound, because two possibly directed paths do not generally concatenate
//! into one (an edge elsewhere in the graph can point back across the
//! junction). The strict pairwise definition is kept as a test oracle.

use crate::graph::{Mark, MixedGraph, NodeSet};

/// Union of directed-edge parents of `w`, with `w` itself removed.
pub fn parents(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    let mut out = Vec::new();
    for v in w.iter() {
        out.extend(g.parents_of(v));
    }
    NodeSet::new(out).minus(w)
}

/// Union of possible parents (neighbors over `--`, `o-o`, `o->`, `->` edges
/// with no arrowhead at the parent end), with `w` removed.
pub fn possible_parents(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    let mut out = Vec::new();
    for v in w.iter() {
        for u in g.neighbors(v) {
            if g.mark_at(u, v) != Some(Mark::Arrow) {
                out.push(u);
            }
        }
    }
    NodeSet::new(out).minus(w)
}

fn directed_closure(g: &MixedGraph, w: &NodeSet, down: bool) -> NodeSet {
    let mut seen = vec![false; g.n() as usize];
    let mut stack: Vec<u32> = w.iter().collect();
    for v in w.iter() {
        seen[v as usize] = true;
    }
    while let Some(v) = stack.pop() {
        let step = if down { g.children_of(v) } else { g.parents_of(v) };
        for u in step {
            if !seen[u as usize] {
                seen[u as usize] = true;
                stack.push(u);
            }
        }
    }
    (0..g.n()).filter(|&v| seen[v as usize]).collect()
}

/// Descendants of `w` via directed edges, including `w` (reflexive).
pub fn descendants(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    directed_closure(g, w, true)
}

/// Ancestors of `w` via directed edges, including `w` (reflexive).
pub fn ancestors(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    directed_closure(g, w, false)
}

/// Walk-state search for possibly directed paths; see module docs.
/// `down = true` finds possible descendants, `false` possible ancestors.
fn possible_closure(g: &MixedGraph, w: &NodeSet, down: bool) -> NodeSet {
    let n = g.n() as usize;
    let mut in_result = vec![false; n];
    for v in w.iter() {
        in_result[v as usize] = true;
    }
    // visited[(curr, next)] marks walk states already expanded
    let mut visited = vec![false; n * n];
    let mut queue: Vec<(Option<u32>, u32)> = w.iter().map(|v| (None, v)).collect();
    while let Some((prev, curr)) = queue.pop() {
        for next in g.neighbors(curr) {
            let forward = if down {
                g.mark_at(curr, next) != Some(Mark::Arrow)
            } else {
                g.mark_at(next, curr) != Some(Mark::Arrow)
            };
            if !forward {
                continue;
            }
            if let Some(p) = prev {
                if g.adjacent(p, next) {
                    continue;
                }
            }
            let state = curr as usize * n + next as usize;
            if visited[state] {
                continue;
            }
            visited[state] = true;
            in_result[next as usize] = true;
            queue.push((Some(curr), next));
        }
    }
    (0..g.n()).filter(|&v| in_result[v as usize]).collect()
}

/// Possible descendants of `w`, including `w` (reflexive).
pub fn possible_descendants(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    possible_closure(g, w, true)
}

/// Possible ancestors of `w`, including `w` (reflexive).
pub fn possible_ancestors(g: &MixedGraph, w: &NodeSet) -> NodeSet {
    possible_closure(g, w, false)
}

/// True if the node sequence `p` is a possibly directed path under the
/// strict definition: consecutive nodes adjacent, and no edge of `g`
/// between any `p[i]` and `p[j]`, `i < j`, carries an arrowhead at `p[i]`.
pub fn is_possibly_directed_path(g: &MixedGraph, p: &[u32]) -> bool {
    if p.len() < 2 {
        return false;
    }
    for (k, &v) in p.iter().enumerate().skip(1) {
        if !g.adjacent(p[k - 1], v) {
            return false;
        }
        for &u in &p[..k] {
            if g.mark_at(u, v) == Some(Mark::Arrow) {
                return false;
            }
        }
    }
    true
}

/// Visits every proper possibly causal path from `x` to `y` (strict
/// definition), calling `visit` with the node sequence each time the last
/// node lies in `y`. Paths may continue through `y` to later `y`-nodes.
pub(crate) fn walk_proper_possibly_causal<F: FnMut(&[u32])>(
    g: &MixedGraph,
    x: &NodeSet,
    y: &NodeSet,
    visit: &mut F,
) {
    let mut path: Vec<u32> = Vec::new();
    let mut on_path = vec![false; g.n() as usize];
    for start in x.iter() {
        path.push(start);
        on_path[start as usize] = true;
        extend(g, x, y, &mut path, &mut on_path, visit);
        on_path[start as usize] = false;
        path.pop();
    }

    fn extend<F: FnMut(&[u32])>(
        g: &MixedGraph,
        x: &NodeSet,
        y: &NodeSet,
        path: &mut Vec<u32>,
        on_path: &mut Vec<bool>,
        visit: &mut F,
    ) {
        let last = *path.last().unwrap();
        for next in g.neighbors(last) {
            if on_path[next as usize] || x.contains(next) {
                continue;
            }
            // strict check against every node already on the path
            if path.iter().any(|&u| g.mark_at(u, next) == Some(Mark::Arrow)) {
                continue;
            }
            path.push(next);
            on_path[next as usize] = true;
            if y.contains(next) {
                visit(path);
            }
            extend(g, x, y, path, on_path, visit);
            on_path[next as usize] = false;
            path.pop();
        }
    }
}

/// Nodes other than the first that lie on a proper possibly causal path
/// from `x` to `y`. By convention the `y`-endpoint itself is included.
pub fn possible_mediators(g: &MixedGraph, x: &NodeSet, y: &NodeSet) -> NodeSet {
    let mut hit = vec![false; g.n() as usize];
    walk_proper_possibly_causal(g, x, y, &mut |p| {
        for &v in &p[1..] {
            hit[v as usize] = true;
        }
    });
    (0..g.n()).filter(|&v| hit[v as usize]).collect()
}

/// Nodes other than the first on a proper causal (fully directed) path
/// from `x` to `y`.
pub fn mediators(g: &MixedGraph, x: &NodeSet, y: &NodeSet) -> NodeSet {
    let mut hit = vec![false; g.n() as usize];
    let mut path: Vec<u32> = Vec::new();
    let mut on_path = vec![false; g.n() as usize];
    for start in x.iter() {
        path.push(start);
        on_path[start as usize] = true;
        extend(g, x, y, &mut path, &mut on_path, &mut hit);
        on_path[start as usize] = false;
        path.pop();
    }
    return (0..g.n()).filter(|&v| hit[v as usize]).collect();

    fn extend(
        g: &MixedGraph,
        x: &NodeSet,
        y: &NodeSet,
        path: &mut Vec<u32>,
        on_path: &mut Vec<bool>,
        hit: &mut Vec<bool>,
    ) {
        let last = *path.last().unwrap();
        for next in g.children_of(last) {
            if on_path[next as usize] || x.contains(next) {
                continue;
            }
            path.push(next);
            on_path[next as usize] = true;
            if y.contains(next) {
                for &v in &path[1..] {
                    hit[v as usize] = true;
                }
            }
            extend(g, x, y, path, on_path, hit);
            on_path[next as usize] = false;
            path.pop();
        }
    }
}

/// Forbidden set relative to `(x, y)`: the possible descendants of the
/// possible mediators on proper possibly causal paths from `x` to `y`.
/// Nodes in here may never enter an adjustment set.
pub fn forbidden_set(g: &MixedGraph, x: &NodeSet, y: &NodeSet) -> NodeSet {
    let med = possible_mediators(g, x, y);
    possible_descendants(g, &med)
}
