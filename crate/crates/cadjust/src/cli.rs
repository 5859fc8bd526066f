//! Command-line front-end.
//!
//! Exit codes: 0 = satisfied / constructed / verified / separated,
//! 1 = violated / absent / connected, 2 = inapplicable or not amenable
//! (including failed construction preconditions), 3 = input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::construct;
use crate::criterion::{self, Clause, Verdict};
use crate::error::Error;
use crate::graph::{MixedGraph, NodeSet};
use crate::oracle;
use crate::parse::{parse_graph, serialize_graph};
use crate::paths::{self, CausalFilter};
use crate::reach;
use crate::sem;

#[derive(Parser)]
#[command(
    name = "cadjust",
    about = "Conditional covariate adjustment in DAGs, MPDAGs, and PAGs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Graph file in the cadjust text format
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct QueryArgs {
    /// Treatment nodes, comma separated
    #[arg(long = "x", value_delimiter = ',', required = true)]
    x: Vec<String>,
    /// Response nodes, comma separated
    #[arg(long = "y", value_delimiter = ',', required = true)]
    y: Vec<String>,
    /// Conditioning nodes (defaults to none)
    #[arg(long = "z", value_delimiter = ',')]
    z: Vec<String>,
    /// Candidate adjustment nodes (defaults to none)
    #[arg(long = "s", value_delimiter = ',')]
    s: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Parent,
    Adjust,
    Oset,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Pa,
    Posspa,
    An,
    De,
    Possan,
    Possde,
    Mediators,
    Possmediators,
    Forb,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathFilter {
    All,
    NonCausal,
    PossiblyCausal,
}

#[derive(Subcommand)]
enum Command {
    /// Check the conditional adjustment criterion for (x, y, z, s)
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Decide whether any conditional adjustment set exists for (x, y, z)
    Exists {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Construct an explicit conditional adjustment set
    Construct {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value = "adjust")]
        method: Method,
        /// Drop these nodes from the constructed set, then re-check
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<String>,
    },
    /// Ancestral relations: parents, (possible) ancestors/descendants,
    /// mediators, forbidden set
    Relate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        rel: Relation,
        /// Source set for unary relations
        #[arg(long = "w", value_delimiter = ',')]
        w: Vec<String>,
        /// Treatments, for mediators and the forbidden set
        #[arg(long = "x", value_delimiter = ',')]
        x: Vec<String>,
        /// Responses, for mediators and the forbidden set
        #[arg(long = "y", value_delimiter = ',')]
        y: Vec<String>,
    },
    /// Enumerate proper definite-status paths from x to y
    Paths {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value = "all")]
        filter: PathFilter,
    },
    /// m-separation of x and y given z, with an open-path witness
    Sep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Re-check the criterion verdict in every DAG the MPDAG represents
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
        /// Cap on the number of undirected edges to enumerate over
        #[arg(long, default_value_t = 20)]
        cap: usize,
    },
    /// Emit the DAGs represented by an MPDAG, separated by `---` lines
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        cap: usize,
        /// Drop the no-new-unshielded-collider filter (textual class
        /// definition; for comparison only)
        #[arg(long)]
        literal: bool,
    },
    /// Certify or falsify the adjustment identity with exact linear-Gaussian
    /// SEM algebra over random coefficient draws
    Sem {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Secondary Monte Carlo mode (regression over simulated draws)
        #[arg(long)]
        mc: bool,
        /// Sample count for the Monte Carlo mode
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
    },
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Precondition(_) | Error::ClassMismatch { .. } => 2,
                _ => 3,
            }
        }
    }
}

fn load(common: &Common) -> crate::Result<MixedGraph> {
    let text = std::fs::read_to_string(&common.graph)?;
    parse_graph(&text)
}

fn resolve(g: &MixedGraph, names: &[String]) -> crate::Result<NodeSet> {
    g.node_set(&names.iter().map(|s| s.as_str()).collect::<Vec<_>>())
}

fn emit<T: Serialize>(common: &Common, body: &T, text: String) {
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(body).unwrap()),
        Format::Text => print!("{text}"),
    }
}

fn render_verdict(g: &MixedGraph, r: &criterion::CriterionReport) -> String {
    let mut out = format!("verdict: {}\n", verdict_str(r.verdict));
    if let Some(c) = r.clause {
        out.push_str(&format!("clause: {}\n", clause_str(c)));
    }
    if let Some(n) = &r.witness_node {
        out.push_str(&format!("witness-node: {n}\n"));
    }
    if let Some(p) = &r.witness_path {
        let ids = g.node_seq(&p.iter().map(|s| s.as_str()).collect::<Vec<_>>()).unwrap();
        out.push_str(&format!("witness-path: {}\n", g.render_path(&ids)));
    }
    out
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::Inapplicable => "inapplicable",
    }
}

fn clause_str(c: Clause) -> &'static str {
    match c {
        Clause::ForbiddenHit => "forbidden-hit",
        Clause::OpenPath => "open-path",
        Clause::NotAmenable => "not-amenable",
        Clause::ZInPossDe => "z-in-possde",
    }
}

fn exit_for_report(r: &criterion::CriterionReport) -> i32 {
    match r.clause {
        _ if r.verdict == Verdict::Satisfied => 0,
        Some(Clause::NotAmenable) | Some(Clause::ZInPossDe) => 2,
        _ => 1,
    }
}

fn dispatch(cmd: Command) -> crate::Result<i32> {
    match cmd {
        Command::Check { common, query } => {
            let g = load(&common)?;
            let (x, y, z, s) = (
                resolve(&g, &query.x)?,
                resolve(&g, &query.y)?,
                resolve(&g, &query.z)?,
                resolve(&g, &query.s)?,
            );
            let r = criterion::check_conditional_adjustment(&g, &x, &y, &z, &s)?;
            emit(&common, &r, render_verdict(&g, &r));
            Ok(exit_for_report(&r))
        }
        Command::Exists { common, query } => {
            let g = load(&common)?;
            let (x, y, z) =
                (resolve(&g, &query.x)?, resolve(&g, &query.y)?, resolve(&g, &query.z)?);
            let r = criterion::exists_conditional_adjustment(&g, &x, &y, &z)?;
            let text = match (&r.set, &r.reason) {
                (Some(set), _) => format!("set: {{{}}}\n", set.join(", ")),
                (None, Some(reason)) => format!("set: none\n{}", render_verdict(&g, reason)),
                _ => unreachable!("absent result always carries a reason"),
            };
            emit(&common, &r, text);
            Ok(match &r.reason {
                None => 0,
                Some(reason) => exit_for_report(reason).max(1),
            })
        }
        Command::Construct { common, query, method, exclude } => {
            let g = load(&common)?;
            let (x, y, z) =
                (resolve(&g, &query.x)?, resolve(&g, &query.y)?, resolve(&g, &query.z)?);
            let built = match (method, g.class()) {
                (Method::Parent, _) => construct::parent_adjustment(&g, &x, &y, &z)?,
                (Method::Oset, _) => construct::o_set(&g, &x, &y, &z)?,
                (Method::Adjust, crate::GraphClass::Pag) => {
                    construct::adjust_set_pag(&g, &x, &y, &z)?
                }
                (Method::Adjust, _) => construct::adjust_set_mpdag(&g, &x, &y, &z)?,
            };
            // user-level exclusions (e.g. unmeasured nodes) come out after
            // construction, then the reduced set is re-checked
            let excluded = resolve(&g, &exclude)?;
            let members = built.members.minus(&excluded);
            let mut ok = built.preconditions_met;
            let mut reason = built.reason.clone();
            if ok && !excluded.is_empty() {
                let r = criterion::check_conditional_adjustment(&g, &x, &y, &z, &members)?;
                if !r.is_satisfied() {
                    ok = false;
                    reason = Some("set no longer satisfies the criterion after exclusions".into());
                }
            }
            let names: Vec<String> = members.iter().map(|v| g.name(v).to_string()).collect();
            let body = json!({
                "kind": built.kind,
                "set": names,
                "preconditions_met": ok,
                "reason": reason,
            });
            let mut text = format!("set: {{{}}}\n", names.join(", "));
            if let Some(r) = &reason {
                text.push_str(&format!("warning: {r}\n"));
            }
            emit(&common, &body, text);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Relate { common, rel, w, x, y } => {
            let g = load(&common)?;
            let w = resolve(&g, &w)?;
            let x = resolve(&g, &x)?;
            let y = resolve(&g, &y)?;
            let result = match rel {
                Relation::Pa => reach::parents(&g, &w),
                Relation::Posspa => reach::possible_parents(&g, &w),
                Relation::An => reach::ancestors(&g, &w),
                Relation::De => reach::descendants(&g, &w),
                Relation::Possan => reach::possible_ancestors(&g, &w),
                Relation::Possde => reach::possible_descendants(&g, &w),
                Relation::Mediators => reach::mediators(&g, &x, &y),
                Relation::Possmediators => reach::possible_mediators(&g, &x, &y),
                Relation::Forb => reach::forbidden_set(&g, &x, &y),
            };
            let names: Vec<String> = result.iter().map(|v| g.name(v).to_string()).collect();
            emit(&common, &json!({ "set": names }), format!("{{{}}}\n", names.join(", ")));
            Ok(0)
        }
        Command::Paths { common, query, filter } => {
            let g = load(&common)?;
            let (x, y) = (resolve(&g, &query.x)?, resolve(&g, &query.y)?);
            let filter = match filter {
                PathFilter::All => CausalFilter::All,
                PathFilter::NonCausal => CausalFilter::NonCausal,
                PathFilter::PossiblyCausal => CausalFilter::PossiblyCausal,
            };
            let found = paths::proper_definite_status_paths(&g, &x, &y, filter);
            let mut text = String::new();
            let mut body = Vec::new();
            for p in &found {
                let cls = paths::classify_path(&g, &p.nodes, &x)?;
                text.push_str(&format!(
                    "{}  [{}]\n",
                    g.render_path(&p.nodes),
                    if cls.possibly_causal { "possibly-causal" } else { "non-causal" }
                ));
                body.push(json!({
                    "nodes": g.name_seq(&p.nodes),
                    "possibly_causal": cls.possibly_causal,
                }));
            }
            emit(&common, &body, text);
            Ok(0)
        }
        Command::Sep { common, query } => {
            let g = load(&common)?;
            let (x, y, z) =
                (resolve(&g, &query.x)?, resolve(&g, &query.y)?, resolve(&g, &query.z)?);
            let v = paths::m_separated(&g, &x, &y, &z);
            let witness = v.witness.as_ref().map(|w| g.name_seq(&w.nodes));
            let body = json!({ "separated": v.separated, "witness": witness });
            let text = match &v.witness {
                None => "separated: true\n".to_string(),
                Some(w) => {
                    format!("separated: false\nwitness-path: {}\n", g.render_path(&w.nodes))
                }
            };
            emit(&common, &body, text);
            Ok(if v.separated { 0 } else { 1 })
        }
        Command::Verify { common, query, cap } => {
            let g = load(&common)?;
            let (x, y, z, s) = (
                resolve(&g, &query.x)?,
                resolve(&g, &query.y)?,
                resolve(&g, &query.z)?,
                resolve(&g, &query.s)?,
            );
            let r = oracle::verify_criterion_across_class(&g, &x, &y, &z, &s, cap)?;
            let body = json!({
                "class_size": r.class_size,
                "verdict": verdict_str(r.verdict),
                "agree": r.agree,
            });
            let text = format!(
                "class-size: {}\nverdict: {}\nagree: {}\n",
                r.class_size,
                verdict_str(r.verdict),
                r.agree
            );
            emit(&common, &body, text);
            Ok(if r.agree { 0 } else { 1 })
        }
        Command::Enumerate { common, cap, literal } => {
            let g = load(&common)?;
            let class = oracle::enumerate_dag_extensions(&g, cap, literal)?;
            let rendered: Vec<String> =
                class.members.iter().map(serialize_graph).collect();
            emit(
                &common,
                &json!({ "count": rendered.len(), "members": rendered }),
                rendered.join("---\n"),
            );
            Ok(0)
        }
        Command::Sem { common, query, trials, seed, mc, samples } => {
            let g = load(&common)?;
            let (x, y, z, s) = (
                resolve(&g, &query.x)?,
                resolve(&g, &query.y)?,
                resolve(&g, &query.z)?,
                resolve(&g, &query.s)?,
            );
            if mc {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
                let model = sem::LinearSem::random(&g, &mut rng, (0.1, 0.9))?;
                let gap = sem::mc_adjustment_identity_gap(&model, &x, &y, &z, &s, samples, seed)?;
                let verdict = if gap < 1e-2 { "certified" } else { "falsified" };
                let body = json!({
                    "verdict": verdict, "mc_gap": gap, "samples": samples, "seed": seed,
                });
                emit(&common, &body, format!("verdict: {verdict}\nmc-gap: {gap:.6}\n"));
                return Ok(if verdict == "certified" { 0 } else { 1 });
            }
            let r = sem::verify_adjustment_identity(&g, &x, &y, &z, &s, trials, seed)?;
            let text = format!(
                "verdict: {}\nmax-mean-gap: {:.3e}\nmax-cov-gap: {:.3e}\ntrials: {}\nseed: {}\n",
                r.verdict, r.max_mean_gap, r.max_cov_gap, r.trials, r.seed
            );
            emit(&common, &r, text);
            Ok(if r.verdict == "certified" { 0 } else { 1 })
        }
    }
}
