//! Seeded random generators for DAGs, MPDAGs, and queries. Used by the
//! verification suites and benchmarks; all draws go through a caller-owned
//! RNG so suites are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{GraphClass, Mark, MixedGraph, NodeSet};
use crate::meek::meek_closure;

fn node_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("N{i}")).collect()
}

/// Random DAG: a random topological order over `n` nodes with each forward
/// pair becoming an edge with probability `p`.
pub fn random_dag(n: usize, p: f64, rng: &mut impl Rng) -> MixedGraph {
    let names = node_names(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                edges.push((
                    names[order[i]].clone(),
                    Mark::Tail,
                    Mark::Arrow,
                    names[order[j]].clone(),
                ));
            }
        }
    }
    MixedGraph::new(GraphClass::Dag, names, edges).expect("construction is acyclic")
}

/// CPDAG of a DAG: skeleton plus unshielded colliders, closed under the
/// Meek rules.
pub fn cpdag_of(dag: &MixedGraph) -> MixedGraph {
    let n = dag.n();
    let mut pdag = MixedGraph::new_unchecked(GraphClass::Mpdag, dag.names().to_vec(), &[]);
    for e in dag.edges() {
        pdag.set_edge(e.a, Mark::Tail, Mark::Tail, e.b);
    }
    for v in 0..n {
        let pa = dag.parents_of(v);
        for (i, &p) in pa.iter().enumerate() {
            for &q in pa.iter().skip(i + 1) {
                if !dag.adjacent(p, q) {
                    pdag.set_edge(p, Mark::Tail, Mark::Arrow, v);
                    pdag.set_edge(q, Mark::Tail, Mark::Arrow, v);
                }
            }
        }
    }
    meek_closure(&pdag).expect("v-structures of a DAG are consistent")
}

/// Random MPDAG together with one DAG it represents: take a random DAG's
/// CPDAG and repeatedly orient undirected edges according to the DAG
/// (consistent background knowledge) until at most `max_undirected`
/// undirected edges remain.
pub fn random_mpdag(
    n: usize,
    p: f64,
    max_undirected: usize,
    rng: &mut impl Rng,
) -> (MixedGraph, MixedGraph) {
    let dag = random_dag(n, p, rng);
    let mut g = cpdag_of(&dag);
    loop {
        let undirected: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .filter(|e| e.mark_at_a == Mark::Tail && e.mark_at_b == Mark::Tail)
            .map(|e| (e.a, e.b))
            .collect();
        if undirected.len() <= max_undirected {
            let mpdag = MixedGraph::new(GraphClass::Mpdag, g.names().to_vec(), edge_tuples(&g))
                .expect("closure output validates");
            return (mpdag, dag);
        }
        let &(a, b) = undirected.choose(rng).unwrap();
        let (from, to) = if dag.is_directed(a, b) { (a, b) } else { (b, a) };
        g.set_edge(from, Mark::Tail, Mark::Arrow, to);
        g = meek_closure(&g).expect("knowledge from a represented DAG is consistent");
    }
}

fn edge_tuples(g: &MixedGraph) -> Vec<(String, Mark, Mark, String)> {
    g.edges()
        .iter()
        .map(|e| {
            (
                g.name(e.a).to_string(),
                e.mark_at_a,
                e.mark_at_b,
                g.name(e.b).to_string(),
            )
        })
        .collect()
}

/// Draws pairwise disjoint sets of the requested sizes from the graph's
/// nodes; `None` if the graph is too small.
pub fn random_disjoint_sets(
    g: &MixedGraph,
    sizes: &[usize],
    rng: &mut impl Rng,
) -> Option<Vec<NodeSet>> {
    let total: usize = sizes.iter().sum();
    if (g.n() as usize) < total {
        return None;
    }
    let mut pool: Vec<u32> = (0..g.n()).collect();
    pool.shuffle(rng);
    let mut out = Vec::new();
    let mut at = 0;
    for &k in sizes {
        out.push(NodeSet::new(pool[at..at + k].to_vec()));
        at += k;
    }
    Some(out)
}
