//! Text format for mixed graphs.
//!
//! Line 1 is the class token (`dag`, `mpdag`, `pag`). Each following line is
//! either an edge `A TOKEN B` with TOKEN one of `->`, `--`, `<->`, `o->`,
//! `o-o`, an isolated-node declaration `node N`, a comment starting with
//! `#`, or blank. Serialization is canonical: isolated nodes sorted first,
//! then edges sorted by their canonical `(min, max)` endpoint pair, LF line
//! endings. `parse(serialize(g))` reproduces `g` exactly.

use crate::error::{Error, Result};
use crate::graph::{valid_name, GraphClass, Mark, MixedGraph};

fn edge_marks(token: &str) -> Option<(Mark, Mark)> {
    // (mark at left node, mark at right node)
    match token {
        "->" => Some((Mark::Tail, Mark::Arrow)),
        "--" => Some((Mark::Tail, Mark::Tail)),
        "<->" => Some((Mark::Arrow, Mark::Arrow)),
        "o->" => Some((Mark::Circle, Mark::Arrow)),
        "o-o" => Some((Mark::Circle, Mark::Circle)),
        _ => None,
    }
}

pub fn parse_graph(text: &str) -> Result<MixedGraph> {
    let (class, nodes, edges) = parse_raw(text)?;
    MixedGraph::new(class, nodes, edges)
}

/// Parses the `mpdag` format without the maximal-orientation check, for raw
/// partially directed inputs that are about to be closed under Meek rules.
pub fn parse_pdag(text: &str) -> Result<MixedGraph> {
    let (class, nodes, edges) = parse_raw(text)?;
    if class != GraphClass::Mpdag {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected an `mpdag` header for a raw PDAG, got `{class}`"),
        });
    }
    let mut names = nodes;
    names.sort();
    names.dedup();
    let idx = |name: &str| names.iter().position(|x| x == name).unwrap() as u32;
    let mut canon = Vec::new();
    for (a, ma, mb, b) in &edges {
        canon.push(crate::graph::Edge { a: idx(a), b: idx(b), mark_at_a: *ma, mark_at_b: *mb });
    }
    let g = MixedGraph::new_unchecked(GraphClass::Mpdag, names, &canon);
    for e in g.edges() {
        if !matches!(
            (e.mark_at_a, e.mark_at_b),
            (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail) | (Mark::Tail, Mark::Tail)
        ) {
            return Err(Error::Validation("PDAG edges must be `->` or `--`".into()));
        }
    }
    if g.directed_part_has_cycle() {
        return Err(Error::Validation("directed cycle".into()));
    }
    Ok(g)
}

type RawGraph = (GraphClass, Vec<String>, Vec<(String, Mark, Mark, String)>);

fn parse_raw(text: &str) -> Result<RawGraph> {
    let mut class: Option<GraphClass> = None;
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<(String, Mark, Mark, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if class.is_none() {
            class = Some(match line {
                "dag" => GraphClass::Dag,
                "mpdag" => GraphClass::Mpdag,
                "pag" => GraphClass::Pag,
                other => {
                    return Err(err(format!(
                        "expected class header `dag`, `mpdag`, or `pag`, got `{other}`"
                    )))
                }
            });
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", name] => {
                if !valid_name(name) {
                    return Err(err(format!("invalid node name `{name}` (column 6)")));
                }
                nodes.push((*name).to_string());
            }
            [a, tok, b] => {
                let (ma, mb) = edge_marks(tok).ok_or_else(|| {
                    let col = raw.find(tok).map(|c| c + 1).unwrap_or(1);
                    err(format!("unknown edge token `{tok}` (column {col})"))
                })?;
                for name in [a, b] {
                    if !valid_name(name) {
                        let col = raw.find(*name).map(|c| c + 1).unwrap_or(1);
                        return Err(err(format!("invalid node name `{name}` (column {col})")));
                    }
                }
                if a == b {
                    return Err(err(format!("self loop at `{a}`")));
                }
                nodes.push((*a).to_string());
                nodes.push((*b).to_string());
                edges.push(((*a).to_string(), ma, mb, (*b).to_string()));
            }
            _ => return Err(err(format!("cannot parse line `{line}`"))),
        }
    }

    let class = class.ok_or(Error::Parse { line: 1, msg: "missing class header".into() })?;
    Ok((class, nodes, edges))
}

/// Canonical serialization; see module docs.
pub fn serialize_graph(g: &MixedGraph) -> String {
    let mut out = String::new();
    out.push_str(g.class().token());
    out.push('\n');
    let mut isolated: Vec<&str> = (0..g.n())
        .filter(|&v| g.neighbors(v).next().is_none())
        .map(|v| g.name(v))
        .collect();
    isolated.sort_unstable();
    for name in isolated {
        out.push_str("node ");
        out.push_str(name);
        out.push('\n');
    }
    for e in g.edges() {
        let (na, nb) = (g.name(e.a), g.name(e.b));
        let line = match (e.mark_at_a, e.mark_at_b) {
            (Mark::Tail, Mark::Arrow) => format!("{na} -> {nb}"),
            (Mark::Arrow, Mark::Tail) => format!("{nb} -> {na}"),
            (Mark::Tail, Mark::Tail) => format!("{na} -- {nb}"),
            (Mark::Arrow, Mark::Arrow) => format!("{na} <-> {nb}"),
            (Mark::Circle, Mark::Arrow) => format!("{na} o-> {nb}"),
            (Mark::Arrow, Mark::Circle) => format!("{nb} o-> {na}"),
            (Mark::Circle, Mark::Circle) => format!("{na} o-o {nb}"),
            // tail-circle pairs are not in any class alphabet; render defensively
            (Mark::Circle, Mark::Tail) => format!("{na} o-o {nb}"),
            (Mark::Tail, Mark::Circle) => format!("{na} -- {nb}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
