//! Causal-graph toolkit for conditional covariate adjustment.
//!
//! Given a DAG, MPDAG, or PAG and disjoint node sets `(X, Y, Z, S)`, the
//! crate decides whether `S` identifies the effect of `X` on `Y` conditional
//! on `Z` by adjustment, constructs explicit adjustment sets, and provides
//! two independent verification routes: brute-force enumeration of the DAGs
//! an MPDAG represents, and exact linear-Gaussian SEM computation.

pub mod construct;
pub mod criterion;
pub mod error;
pub mod gen;
pub mod graph;
pub mod meek;
pub mod oracle;
pub mod parse;
pub mod paths;
pub mod reach;
pub mod sem;

pub mod cli;

pub use error::{Error, Result};
pub use graph::{GraphClass, Mark, MixedGraph, NodeSet};

/// Graph files for the worked examples, shipped in-repo and golden-tested.
pub mod fixtures {
    pub const FIG1: &str = include_str!("../fixtures/fig1.g");
    pub const FIG3A: &str = include_str!("../fixtures/fig3a.g");
    pub const FIG3B: &str = include_str!("../fixtures/fig3b.g");
    pub const FIG3C: &str = include_str!("../fixtures/fig3c.g");
    pub const FIG4: &str = include_str!("../fixtures/fig4.g");
    pub const FIG5: &str = include_str!("../fixtures/fig5.g");
}
