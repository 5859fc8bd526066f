//! Mixed-graph data model: nodes, per-endpoint edge marks, class validation,
//! and the structural transforms (induced subgraph, moral graph, proper
//! back-door graph, edge-deletion variants).
//!
//! Nodes are stored sorted by name, so node indices order lexicographically
//! and every set-valued result comes out in canonical order for free. All
//! graphs are immutable after construction; transforms return new graphs.

use std::fmt;

use crate::error::{Error, Result};

/// Edge mark at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

/// Graph class tag. DAGs are a special case of MPDAGs; the tag records what
/// the caller declared and which validation ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    Dag,
    Mpdag,
    Pag,
}

impl GraphClass {
    pub fn token(self) -> &'static str {
        match self {
            GraphClass::Dag => "dag",
            GraphClass::Mpdag => "mpdag",
            GraphClass::Pag => "pag",
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// An edge in canonical form: `a < b`, with the mark at each endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub mark_at_a: Mark,
    pub mark_at_b: Mark,
}

/// A set of node indices, kept sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet(Vec<u32>);

impl NodeSet {
    pub fn new(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }

    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn singleton(v: u32) -> Self {
        NodeSet(vec![v])
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        NodeSet::new(v)
    }

    pub fn minus(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn intersect(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

impl FromIterator<u32> for NodeSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        NodeSet::new(iter.into_iter().collect())
    }
}

/// Mixed graph over named nodes with a class tag.
///
/// Edge storage is a dense end-mark matrix: `end_mark[i][j]` is the mark at
/// `i`'s end of the edge between `i` and `j`, or `None` if they are not
/// adjacent. At most one edge per node pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedGraph {
    class: GraphClass,
    names: Vec<String>,
    end_mark: Vec<Option<Mark>>, // n*n, row-major
}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MixedGraph {
    /// Builds and validates a graph from node names and mark-annotated edges.
    ///
    /// Node names are sorted internally; edge endpoints are given by name.
    pub fn new(
        class: GraphClass,
        mut names: Vec<String>,
        edges: Vec<(String, Mark, Mark, String)>,
    ) -> Result<Self> {
        names.sort();
        names.dedup();
        for n in &names {
            if !valid_name(n) {
                return Err(Error::Validation(format!("invalid node name `{n}`")));
            }
        }
        let n = names.len();
        let idx = |name: &str| -> Result<u32> {
            names
                .binary_search_by(|x| x.as_str().cmp(name))
                .map(|i| i as u32)
                .map_err(|_| Error::UnknownNode(name.to_string()))
        };
        let mut g = MixedGraph {
            class,
            names: names.clone(),
            end_mark: vec![None; n * n],
        };
        for (a, ma, mb, b) in edges {
            let (ia, ib) = (idx(&a)?, idx(&b)?);
            if ia == ib {
                return Err(Error::Validation(format!("self loop at `{a}`")));
            }
            if g.mark_at(ia, ib).is_some() {
                return Err(Error::Validation(format!("duplicate edge between `{a}` and `{b}`")));
            }
            g.set_edge(ia, ma, mb, ib);
        }
        g.validate()?;
        Ok(g)
    }

    /// Internal constructor that skips class validation. Used by transforms
    /// whose output is structurally correct by construction but need not be
    /// re-closed (e.g. induced subgraphs of MPDAGs).
    pub(crate) fn new_unchecked(class: GraphClass, names: Vec<String>, n_edges: &[Edge]) -> Self {
        let n = names.len();
        let mut g = MixedGraph {
            class,
            names,
            end_mark: vec![None; n * n],
        };
        for e in n_edges {
            g.set_edge(e.a, e.mark_at_a, e.mark_at_b, e.b);
        }
        g
    }

    pub(crate) fn set_edge(&mut self, a: u32, ma: Mark, mb: Mark, b: u32) {
        let n = self.names.len();
        self.end_mark[a as usize * n + b as usize] = Some(ma);
        self.end_mark[b as usize * n + a as usize] = Some(mb);
    }

    pub(crate) fn remove_edge(&mut self, a: u32, b: u32) {
        let n = self.names.len();
        self.end_mark[a as usize * n + b as usize] = None;
        self.end_mark[b as usize * n + a as usize] = None;
    }

    pub fn class(&self) -> GraphClass {
        self.class
    }

    pub fn n(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_id(&self, name: &str) -> Option<u32> {
        self.names
            .binary_search_by(|x| x.as_str().cmp(name))
            .ok()
            .map(|i| i as u32)
    }

    /// Resolves a list of names into a `NodeSet`, erroring on unknown names.
    pub fn node_set(&self, names: &[&str]) -> Result<NodeSet> {
        names
            .iter()
            .map(|n| self.node_id(n).ok_or_else(|| Error::UnknownNode(n.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(NodeSet::new)
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet((0..self.n()).collect())
    }

    /// Mark at `at`'s end of the edge between `at` and `other`; `None` if not adjacent.
    #[inline]
    pub fn mark_at(&self, at: u32, other: u32) -> Option<Mark> {
        self.end_mark[at as usize * self.names.len() + other as usize]
    }

    #[inline]
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        a != b && self.mark_at(a, b).is_some()
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.n()).filter(move |&u| u != v && self.mark_at(v, u).is_some())
    }

    /// True iff the edge between `a` and `b` is the directed edge `a -> b`.
    #[inline]
    pub fn is_directed(&self, a: u32, b: u32) -> bool {
        self.mark_at(a, b) == Some(Mark::Tail) && self.mark_at(b, a) == Some(Mark::Arrow)
    }

    #[inline]
    pub fn is_undirected(&self, a: u32, b: u32) -> bool {
        self.mark_at(a, b) == Some(Mark::Tail) && self.mark_at(b, a) == Some(Mark::Tail)
    }

    #[inline]
    pub fn is_bidirected(&self, a: u32, b: u32) -> bool {
        self.mark_at(a, b) == Some(Mark::Arrow) && self.mark_at(b, a) == Some(Mark::Arrow)
    }

    /// Edges in canonical form (`a < b`), ordered by `(a, b)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in (a + 1)..self.n() {
                if let (Some(ma), Some(mb)) = (self.mark_at(a, b), self.mark_at(b, a)) {
                    out.push(Edge { a, b, mark_at_a: ma, mark_at_b: mb });
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Directed-edge parents of `v`: nodes `u` with `u -> v`.
    pub fn parents_of(&self, v: u32) -> Vec<u32> {
        (0..self.n()).filter(|&u| self.is_directed(u, v)).collect()
    }

    /// Directed-edge children of `v`: nodes `u` with `v -> u`.
    pub fn children_of(&self, v: u32) -> Vec<u32> {
        (0..self.n()).filter(|&u| self.is_directed(v, u)).collect()
    }

    /// True if the directed part (`->` edges only) has a cycle.
    pub fn directed_part_has_cycle(&self) -> bool {
        // Kahn's algorithm over directed edges.
        let n = self.n() as usize;
        let mut indeg = vec![0usize; n];
        for v in 0..self.n() {
            indeg[v as usize] = self.parents_of(v).len();
        }
        let mut queue: Vec<u32> = (0..self.n()).filter(|&v| indeg[v as usize] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = queue.pop() {
            seen += 1;
            for c in self.children_of(v) {
                indeg[c as usize] -= 1;
                if indeg[c as usize] == 0 {
                    queue.push(c);
                }
            }
        }
        seen != n
    }

    /// True if there is a directed path from `a` to `b` (reflexive).
    pub fn has_directed_path(&self, a: u32, b: u32) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.n() as usize];
        let mut stack = vec![a];
        seen[a as usize] = true;
        while let Some(v) = stack.pop() {
            for c in self.children_of(v) {
                if c == b {
                    return true;
                }
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Class validation. DAG: all edges directed, acyclic. MPDAG: edges `->`
    /// or `--`, acyclic directed part, fixpoint of the Meek closure. PAG:
    /// marks in the PAG alphabet, no directed or almost directed cycle over
    /// `->`/`<->` edges. Full Zhang-completeness of PAGs is not checked.
    pub fn validate(&self) -> Result<()> {
        for e in self.edges() {
            let pair = (e.mark_at_a, e.mark_at_b);
            let ok = match self.class {
                GraphClass::Dag => {
                    pair == (Mark::Tail, Mark::Arrow) || pair == (Mark::Arrow, Mark::Tail)
                }
                GraphClass::Mpdag => matches!(
                    pair,
                    (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail) | (Mark::Tail, Mark::Tail)
                ),
                GraphClass::Pag => matches!(
                    pair,
                    (Mark::Tail, Mark::Arrow)
                        | (Mark::Arrow, Mark::Tail)
                        | (Mark::Arrow, Mark::Arrow)
                        | (Mark::Circle, Mark::Arrow)
                        | (Mark::Arrow, Mark::Circle)
                        | (Mark::Circle, Mark::Circle)
                ),
            };
            if !ok {
                return Err(Error::Validation(format!(
                    "edge between `{}` and `{}` has marks illegal for class {}",
                    self.name(e.a),
                    self.name(e.b),
                    self.class
                )));
            }
        }
        if self.directed_part_has_cycle() {
            return Err(Error::Validation("directed cycle".into()));
        }
        match self.class {
            GraphClass::Dag => {}
            GraphClass::Mpdag => {
                // Theorems assume maximally oriented inputs, so reject any
                // graph the closure would orient further.
                let closed = crate::meek::meek_closure(self)?;
                if &closed != self {
                    return Err(Error::Validation(
                        "not closed under Meek rules R1-R4 (not a maximally oriented PDAG)".into(),
                    ));
                }
            }
            GraphClass::Pag => {
                // Almost directed cycle: a directed path between the
                // endpoints of a bidirected edge.
                for e in self.edges() {
                    if e.mark_at_a == Mark::Arrow && e.mark_at_b == Mark::Arrow {
                        if self.has_directed_path(e.a, e.b) || self.has_directed_path(e.b, e.a) {
                            return Err(Error::Validation(format!(
                                "almost directed cycle through `{}` <-> `{}`",
                                self.name(e.a),
                                self.name(e.b)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Induced subgraph on `keep`: retains exactly the edges with both
    /// endpoints in `keep`. Node indices are renumbered to the new graph.
    ///
    /// The class tag is carried over without re-running closure validation;
    /// a subgraph of an MPDAG need not be maximally oriented.
    pub fn induced_subgraph(&self, keep: &NodeSet) -> Result<MixedGraph> {
        for v in keep.iter() {
            if v >= self.n() {
                return Err(Error::UnknownNode(format!("#{v}")));
            }
        }
        let names: Vec<String> = keep.iter().map(|v| self.names[v as usize].clone()).collect();
        let old: Vec<u32> = keep.iter().collect();
        let mut edges = Vec::new();
        for (i, &a) in old.iter().enumerate() {
            for (j, &b) in old.iter().enumerate().skip(i + 1) {
                if let (Some(ma), Some(mb)) = (self.mark_at(a, b), self.mark_at(b, a)) {
                    edges.push(Edge { a: i as u32, b: j as u32, mark_at_a: ma, mark_at_b: mb });
                }
            }
        }
        Ok(MixedGraph::new_unchecked(self.class, names, &edges))
    }

    fn require_dag(&self) -> Result<()> {
        if self.class != GraphClass::Dag {
            return Err(Error::ClassMismatch {
                expected: "dag".into(),
                found: self.class.to_string(),
            });
        }
        Ok(())
    }

    /// Moral graph of a DAG: marry non-adjacent parents of every node, then
    /// drop all orientations. Returned as an all-undirected graph (tagged
    /// MPDAG, which is the class that admits `--` edges).
    pub fn moral_graph(&self) -> Result<MixedGraph> {
        self.require_dag()?;
        let mut out = MixedGraph {
            class: GraphClass::Mpdag,
            names: self.names.clone(),
            end_mark: vec![None; self.names.len() * self.names.len()],
        };
        for e in self.edges() {
            out.set_edge(e.a, Mark::Tail, Mark::Tail, e.b);
        }
        for v in 0..self.n() {
            let pa = self.parents_of(v);
            for (i, &p) in pa.iter().enumerate() {
                for &q in pa.iter().skip(i + 1) {
                    if !self.adjacent(p, q) {
                        out.set_edge(p, Mark::Tail, Mark::Tail, q);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Proper back-door graph of a DAG: removes the first edge of every
    /// proper causal path from `x` to `y`.
    ///
    /// An edge `u -> v` with `u` in `x` is on such a path iff `v` reaches `y`
    /// by a directed path avoiding further `x`-nodes.
    pub fn proper_backdoor_graph(&self, x: &NodeSet, y: &NodeSet) -> Result<MixedGraph> {
        self.require_dag()?;
        // Backward reachability to y over directed edges, not entering x.
        let n = self.n() as usize;
        let mut reach = vec![false; n];
        let mut stack: Vec<u32> = y.iter().collect();
        for v in y.iter() {
            reach[v as usize] = true;
        }
        while let Some(v) = stack.pop() {
            for p in self.parents_of(v) {
                if !x.contains(p) && !reach[p as usize] {
                    reach[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let mut out = self.clone();
        for e in self.edges() {
            let (from, to) = if e.mark_at_a == Mark::Tail { (e.a, e.b) } else { (e.b, e.a) };
            if x.contains(from) && (y.contains(to) || reach[to as usize]) {
                out.remove_edge(e.a, e.b);
            }
        }
        Ok(out)
    }

    /// The manipulated graph with all edges into `w` deleted.
    pub fn delete_edges_into(&self, w: &NodeSet) -> Result<MixedGraph> {
        self.require_dag()?;
        let mut out = self.clone();
        for e in self.edges() {
            let head = if e.mark_at_b == Mark::Arrow { e.b } else { e.a };
            if w.contains(head) {
                out.remove_edge(e.a, e.b);
            }
        }
        Ok(out)
    }

    /// The manipulated graph with all edges out of `w` deleted.
    pub fn delete_edges_out_of(&self, w: &NodeSet) -> Result<MixedGraph> {
        self.require_dag()?;
        let mut out = self.clone();
        for e in self.edges() {
            let tail = if e.mark_at_a == Mark::Tail { e.a } else { e.b };
            if w.contains(tail) {
                out.remove_edge(e.a, e.b);
            }
        }
        Ok(out)
    }

    /// Renders a node sequence with the actual edge glyphs, e.g. `X <- V2 -> Y`.
    pub fn render_path(&self, nodes: &[u32]) -> String {
        let mut s = String::new();
        for (i, &v) in nodes.iter().enumerate() {
            if i > 0 {
                let u = nodes[i - 1];
                let glyph = match (self.mark_at(u, v), self.mark_at(v, u)) {
                    (Some(Mark::Tail), Some(Mark::Arrow)) => "->",
                    (Some(Mark::Arrow), Some(Mark::Tail)) => "<-",
                    (Some(Mark::Tail), Some(Mark::Tail)) => "--",
                    (Some(Mark::Arrow), Some(Mark::Arrow)) => "<->",
                    (Some(Mark::Circle), Some(Mark::Arrow)) => "o->",
                    (Some(Mark::Arrow), Some(Mark::Circle)) => "<-o",
                    (Some(Mark::Circle), Some(Mark::Circle)) => "o-o",
                    (Some(Mark::Circle), Some(Mark::Tail)) => "o-",
                    (Some(Mark::Tail), Some(Mark::Circle)) => "-o",
                    _ => "~",
                };
                s.push(' ');
                s.push_str(glyph);
                s.push(' ');
            }
            s.push_str(self.name(v));
        }
        s
    }

    /// Resolves a name sequence to indices.
    pub fn node_seq(&self, names: &[&str]) -> Result<Vec<u32>> {
        names
            .iter()
            .map(|n| self.node_id(n).ok_or_else(|| Error::UnknownNode(n.to_string())))
            .collect()
    }

    /// Names for an index sequence.
    pub fn name_seq(&self, ids: &[u32]) -> Vec<String> {
        ids.iter().map(|&v| self.names[v as usize].clone()).collect()
    }
}

/// Checks that the given sets are pairwise disjoint, naming the first overlap.
pub fn require_disjoint(g: &MixedGraph, sets: &[(&str, &NodeSet)]) -> Result<()> {
    for (i, (_, a)) in sets.iter().enumerate() {
        for (_, b) in sets.iter().skip(i + 1) {
            for v in a.iter() {
                if b.contains(v) {
                    return Err(Error::OverlappingSets(g.name(v).to_string()));
                }
            }
        }
    }
    Ok(())
}
