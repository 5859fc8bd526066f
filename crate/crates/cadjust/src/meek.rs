//! Meek's orientation rules R1-R4 and their closure.

use crate::error::{Error, Result};
use crate::graph::{GraphClass, Mark, MixedGraph};

/// Repeatedly applies R1-R4 until fixpoint.
///
/// Input must contain only `->` and `--` edges with an acyclic directed
/// part. The result is tagged MPDAG-class. Errors if an orientation would
/// close a directed cycle, which signals inconsistent background knowledge.
///
/// Rules, orienting `a -- b` into `a -> b`:
///   R1: `c -> a -- b` with `c`, `b` non-adjacent.
///   R2: `a -> c -> b` with `a -- b`.
///   R3: `a -- c -> b`, `a -- d -> b`, `c`, `d` non-adjacent.
///   R4: `a -- d -> c -> b` with `d`, `b` non-adjacent.
pub fn meek_closure(input: &MixedGraph) -> Result<MixedGraph> {
    for e in input.edges() {
        if !matches!(
            (e.mark_at_a, e.mark_at_b),
            (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail) | (Mark::Tail, Mark::Tail)
        ) {
            return Err(Error::Validation(format!(
                "Meek closure input must be a partially directed graph, found mark pair on `{}`-`{}`",
                input.name(e.a),
                input.name(e.b)
            )));
        }
    }
    if input.directed_part_has_cycle() {
        return Err(Error::Validation("directed cycle".into()));
    }

    let mut g = input.clone();
    g = MixedGraph::new_unchecked(GraphClass::Mpdag, g.names().to_vec(), &g.edges());

    loop {
        let mut oriented: Option<(u32, u32)> = None;
        'scan: for a in 0..g.n() {
            for b in 0..g.n() {
                if a == b || !g.is_undirected(a, b) {
                    continue;
                }
                if r1(&g, a, b) || r2(&g, a, b) || r3(&g, a, b) || r4(&g, a, b) {
                    oriented = Some((a, b));
                    break 'scan;
                }
            }
        }
        match oriented {
            None => break,
            Some((a, b)) => {
                if g.has_directed_path(b, a) {
                    return Err(Error::Validation(format!(
                        "inconsistent background knowledge: orienting `{}` -> `{}` creates a directed cycle",
                        g.name(a),
                        g.name(b)
                    )));
                }
                g.set_edge(a, Mark::Tail, Mark::Arrow, b);
            }
        }
    }
    Ok(g)
}

fn r1(g: &MixedGraph, a: u32, b: u32) -> bool {
    g.parents_of(a).iter().any(|&c| !g.adjacent(c, b))
}

fn r2(g: &MixedGraph, a: u32, b: u32) -> bool {
    g.children_of(a).iter().any(|&c| g.is_directed(c, b))
}

fn r3(g: &MixedGraph, a: u32, b: u32) -> bool {
    let pa_b: Vec<u32> = g.parents_of(b).into_iter().filter(|&c| g.is_undirected(a, c)).collect();
    for (i, &c) in pa_b.iter().enumerate() {
        for &d in pa_b.iter().skip(i + 1) {
            if !g.adjacent(c, d) {
                return true;
            }
        }
    }
    false
}

fn r4(g: &MixedGraph, a: u32, b: u32) -> bool {
    for d in 0..g.n() {
        if d == a || d == b || !g.is_undirected(a, d) || g.adjacent(d, b) {
            continue;
        }
        if g.children_of(d).iter().any(|&c| g.is_directed(c, b)) {
            return true;
        }
    }
    false
}
