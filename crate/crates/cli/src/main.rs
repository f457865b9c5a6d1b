use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crit2::builder::{build, build_by_tile_algebra};
use crit2::catalog::try_catalog;
use crit2::drawing::{build_drawing, verify_certificate};
use crit2::ecolor::{chromatic_index, construct_edge_coloring};
use crit2::graph::{from_edge_list, max_degree_raw, MultiGraph};
use crit2::oracle;
use crit2::props::{clique_number, hamiltonian_cycle_of, matching_and_cover_from_cycle, max_degree, order_size};
use crit2::recognizer::recognize_detailed;
use crit2::report::full_report;
use crit2::signature::{canonicalize, enumerate_signatures, sample_signatures, symbol_counts, Signature, TileName};
use crit2::treewidth::{
    build_tree_decomposition, hourglass_cubed_model, hourglass_minor_witness, messy_count, treewidth,
    validate_decomposition, validate_minor_witness,
};
use crit2::vcolor::{chromatic_number, construct_coloring, is_bipartite_by_characterization};
use crit2::Error;

#[derive(Parser)]
#[command(name = "crit2", version, about = "Large 2-crossing-critical graphs from tile signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a signature and print its canonical rotation and symbol counts.
    Parse { signature: String },
    /// Build the graph of a signature.
    Build {
        signature: String,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// Recognize an edge-list file (`-` for stdin) and print its signature.
    Recognize { file: String },
    /// Full property report.
    Props {
        signature: String,
        /// Include certificates for every field.
        #[arg(long)]
        witnesses: bool,
    },
    /// Vertex colouring with `k` colours (default: the chromatic number).
    Color {
        signature: String,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Edge colouring with the chromatic index many colours.
    EdgeColor { signature: String },
    /// Treewidth, optionally with a validated tree decomposition.
    Treewidth {
        signature: String,
        #[arg(long)]
        decomposition: bool,
    },
    /// Drawing with two crossings and its verified certificate.
    Draw {
        signature: String,
        #[arg(long, value_enum, default_value = "json")]
        format: DrawFormat,
    },
    /// List signatures with their invariants, sorted by canonical signature.
    Enumerate {
        #[arg(long)]
        tiles: usize,
        /// Comma-separated tile names; all 42 tiles if omitted.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        /// Sample this many random signatures instead of listing all of them.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check every invariant against the brute-force oracles where the size allows.
    Verify { signature: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum DrawFormat {
    Json,
    Dot,
}

/// Successful runs either answer positively (exit 0) or negatively (exit 1).
enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = try_catalog() {
        emit(&error_json(&e));
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => match e.downcast_ref::<Error>() {
            Some(inner) => {
                emit(&error_json(inner));
                ExitCode::from(if is_input_error(inner) { 2 } else { 1 })
            }
            None => {
                emit(&json!({ "error": { "kind": "io", "message": format!("{e:#}") } }));
                ExitCode::from(2)
            }
        },
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::EmptyInput
            | Error::Loop(_)
            | Error::InvalidVertex(_)
            | Error::UnknownPicture(_)
            | Error::Dangling(_)
            | Error::TileCount(_)
            | Error::UnknownTile(_)
            | Error::Catalog(_)
    )
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Parse(_) | Error::UnknownPicture(_) | Error::Dangling(_) | Error::UnknownTile(_) => "parse",
        Error::TileCount(_) => "tile_count",
        Error::EmptyInput | Error::Loop(_) | Error::InvalidVertex(_) => "graph",
        Error::Catalog(_) => "catalog",
        Error::SizeGuard { .. } => "size_guard",
        _ => "infeasible",
    };
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}

fn emit(v: &Value) {
    print_raw(&(serde_json::to_string_pretty(v).expect("JSON values always serialize") + "\n"));
}

/// A closed pipe downstream is not an error worth a panic.
fn print_raw(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn signature(text: &str) -> Result<Signature> {
    Ok(text.parse::<Signature>()?)
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Parse { signature: text } => {
            let s = signature(&text)?;
            let c = symbol_counts(&s).as_array();
            let names = ["L", "dL", "A", "V", "D", "H", "B", "I"];
            let counts: serde_json::Map<String, Value> =
                names.iter().zip(c).map(|(n, c)| (n.to_string(), json!(c))).collect();
            emit(&json!({
                "signature": s,
                "canonical_signature": canonicalize(&s),
                "tiles": s.tiles(),
                "symbol_counts": counts,
            }));
        }
        Command::Build { signature: text, format } => {
            let s = signature(&text)?;
            let b = build(&s);
            match format {
                GraphFormat::Json => {
                    let labels: Vec<Value> =
                        b.labeled.labels.iter().map(|l| json!({ "tile": l.tile_index, "role": l.role })).collect();
                    emit(&json!({
                        "signature": s,
                        "n": b.graph().vertex_count,
                        "edges": b.graph().edges,
                        "labels": labels,
                    }));
                }
                GraphFormat::Dot => print_raw(&b.graph().to_dot()),
                GraphFormat::Edgelist => print_raw(&b.graph().to_edge_list()),
            }
        }
        Command::Recognize { file } => {
            let g = read_graph(&file)?;
            return Ok(match recognize_detailed(&g) {
                Ok(r) => {
                    emit(&json!({
                        "accepted": true,
                        "signature": r.signature,
                        "canonical_signature": canonicalize(&r.signature),
                        "tiles": r.tiles,
                    }));
                    Outcome::Yes
                }
                Err(rej) => {
                    emit(&json!({ "accepted": false, "rejection": rej, "message": rej.to_string() }));
                    Outcome::No
                }
            });
        }
        Command::Props { signature: text, witnesses } => {
            let s = signature(&text)?;
            emit(&serde_json::to_value(full_report(&s, witnesses)?)?);
        }
        Command::Color { signature: text, k } => {
            let s = signature(&text)?;
            let chi = chromatic_number(&s)?;
            let k = k.unwrap_or(chi);
            if k < chi {
                emit(&json!({ "k": k, "colourable": false, "chromatic_number": chi }));
                return Ok(Outcome::No);
            }
            let colouring = construct_coloring(&s, k)?;
            emit(&json!({ "k": k, "colourable": true, "chromatic_number": chi, "coloring": colouring }));
        }
        Command::EdgeColor { signature: text } => {
            let s = signature(&text)?;
            let b = build(&s);
            let colouring = construct_edge_coloring(&s)?;
            let by_id: serde_json::Map<String, Value> =
                colouring.iter().enumerate().map(|(e, c)| (e.to_string(), json!(c))).collect();
            emit(&json!({
                "chromatic_index": chromatic_index(&s),
                "max_degree": max_degree(&s),
                "edges": b.graph().edges,
                "coloring": by_id,
            }));
        }
        Command::Treewidth { signature: text, decomposition } => {
            let s = signature(&text)?;
            let mut out = json!({ "treewidth": treewidth(&s), "messy_tiles": messy_count(&s) });
            if decomposition {
                let b = build(&s);
                let td = build_tree_decomposition(&s);
                let width = validate_decomposition(b.graph(), &td)?;
                out["decomposition"] = json!({ "width": width, "bags": td.bags, "tree": td.tree_edges });
                if let Ok(w) = hourglass_minor_witness(&s) {
                    validate_minor_witness(b.graph(), &hourglass_cubed_model(), &w)?;
                    out["hourglass_cubed_minor"] = serde_json::to_value(w)?;
                }
            }
            emit(&out);
        }
        Command::Draw { signature: text, format } => {
            let s = signature(&text)?;
            let b = build(&s);
            let cert = build_drawing(&s)?;
            verify_certificate(b.graph(), &cert)?;
            match format {
                DrawFormat::Json => emit(&json!({
                    "signature": s,
                    "crossing_count": cert.crossings.len(),
                    "certificate": cert.to_json(),
                })),
                DrawFormat::Dot => print_raw(&cert.to_dot(b.graph())?),
            }
        }
        Command::Enumerate { tiles, subset, count, seed } => {
            let subset: Vec<TileName> = if subset.is_empty() {
                TileName::all()
            } else {
                subset.iter().map(|t| t.trim().parse::<TileName>()).collect::<crit2::Result<_>>()?
            };
            let sigs: Vec<Signature> = match count {
                Some(c) => sample_signatures(tiles, &subset, c, seed)?.iter().map(canonicalize).collect(),
                None => enumerate_signatures(tiles, &subset, true)?.collect(),
            };
            let sorted: BTreeMap<String, Signature> = sigs.into_iter().map(|s| (s.to_string(), s)).collect();
            let rows = summarize_all(sorted.into_values().collect())?;
            emit(&json!({ "tiles": tiles, "count": rows.len(), "signatures": rows }));
        }
        Command::Verify { signature: text } => {
            let s = signature(&text)?;
            let checks = verify(&s)?;
            let failed = checks.iter().any(|c| c["status"] == "fail");
            emit(&json!({ "signature": s, "passed": !failed, "checks": checks }));
            return Ok(if failed { Outcome::No } else { Outcome::Yes });
        }
    }
    Ok(Outcome::Yes)
}

fn read_graph(file: &str) -> Result<MultiGraph> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
    }
    Ok(from_edge_list(&text)?)
}

fn summary(s: &Signature) -> Result<Value> {
    let (v, e) = order_size(s);
    Ok(json!({
        "signature": s,
        "vertices": v,
        "edges": e,
        "max_degree": max_degree(s),
        "clique_number": clique_number(s),
        "bipartite": is_bipartite_by_characterization(s),
        "chromatic_number": chromatic_number(s)?,
        "chromatic_index": chromatic_index(s),
        "treewidth": treewidth(s),
    }))
}

/// Summaries computed on a few worker threads; the input order is kept.
fn summarize_all(sigs: Vec<Signature>) -> Result<Vec<Value>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = sigs.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<Value>>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            sigs.chunks(chunk).map(|c| scope.spawn(move || c.iter().map(summary).collect())).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(sigs.len());
    for p in parts {
        rows.extend(p?);
    }
    Ok(rows)
}

fn check(name: &str, outcome: Result<Option<String>, String>) -> Value {
    match outcome {
        Ok(None) => json!({ "check": name, "status": "pass" }),
        Ok(Some(why)) => json!({ "check": name, "status": "skipped", "detail": why }),
        Err(why) => json!({ "check": name, "status": "fail", "detail": why }),
    }
}

fn agree<T: PartialEq + std::fmt::Debug>(ours: T, oracle: T) -> Result<Option<String>, String> {
    if ours == oracle {
        Ok(None)
    } else {
        Err(format!("module says {ours:?}, oracle says {oracle:?}"))
    }
}

/// Runs an oracle; a size-guard refusal turns into a skip.
fn guarded<T>(r: crit2::Result<T>, f: impl FnOnce(T) -> Result<Option<String>, String>) -> Result<Option<String>, String> {
    match r {
        Ok(x) => f(x),
        Err(e @ Error::SizeGuard { .. }) => Ok(Some(e.to_string())),
        Err(e) => Err(e.to_string()),
    }
}

fn verify(s: &Signature) -> Result<Vec<Value>> {
    let b = build(s);
    let g = b.graph();
    let mut out = Vec::new();

    let (v, e) = order_size(s);
    out.push(check("order_size", agree((v, e), (g.vertex_count, g.edges.len()))));
    out.push(check("max_degree", agree(max_degree(s), max_degree_raw(g))));
    out.push(check(
        "tile_algebra_build",
        match build_by_tile_algebra(s) {
            Ok(lg) if lg == b.labeled => Ok(None),
            Ok(_) => Err("the tile-algebra fold differs from the direct build".into()),
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(check("clique_number", guarded(oracle::max_clique(g), |m| agree(clique_number(s), m))));
    out.push(check("bipartite", agree(is_bipartite_by_characterization(s), oracle::is_bipartite(g))));

    let cycle = hamiltonian_cycle_of(&b);
    out.push(check(
        "hamiltonian_cycle",
        match &cycle {
            Ok(c) if oracle::has_hamiltonian_cycle_witness(g, c) => Ok(None),
            Ok(_) => Err("cycle rejected by the checker".into()),
            Err(e) => Err(e.to_string()),
        },
    ));
    if let Ok(c) = &cycle {
        let mc = matching_and_cover_from_cycle(&b, c);
        let ok = oracle::is_matching(g, &mc.matching)
            && oracle::is_edge_cover(g, &mc.cover)
            && mc.cover.len() == g.vertex_count.div_ceil(2);
        out.push(check("matching_and_cover", if ok { Ok(None) } else { Err("checker rejected".into()) }));
    }

    let chi = chromatic_number(s)?;
    out.push(check(
        "coloring",
        match construct_coloring(s, chi) {
            Ok(c) if oracle::is_proper_coloring(g, &c) && c.iter().collect::<BTreeSet<_>>().len() <= chi => Ok(None),
            Ok(_) => Err("colouring rejected by the checker".into()),
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(check("chromatic_number", guarded(oracle::brute_chromatic_number(g), |o| agree(chi, o))));

    let chi_e = chromatic_index(s);
    out.push(check(
        "edge_coloring",
        match construct_edge_coloring(s) {
            Ok(c) => {
                let c: Vec<usize> = c.into_iter().map(usize::from).collect();
                let used = c.iter().collect::<BTreeSet<_>>().len();
                if oracle::is_proper_edge_coloring(g, &c) && used == chi_e {
                    Ok(None)
                } else {
                    Err(format!("improper or uses {used} colours instead of {chi_e}"))
                }
            }
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(check("chromatic_index", guarded(oracle::brute_chromatic_index(g), |o| agree(chi_e, o))));

    let tw = treewidth(s);
    let td = build_tree_decomposition(s);
    out.push(check(
        "tree_decomposition",
        match validate_decomposition(g, &td) {
            Ok(w) => agree(w, tw),
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(check("treewidth", guarded(oracle::exact_treewidth(g), |o| agree(tw, o))));
    if messy_count(s) >= 3 {
        out.push(check(
            "hourglass_cubed_minor",
            match hourglass_minor_witness(s) {
                Ok(w) => validate_minor_witness(g, &hourglass_cubed_model(), &w).map(|_| None).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            },
        ));
    }

    out.push(check(
        "drawing",
        match build_drawing(s) {
            Ok(c) => match verify_certificate(g, &c) {
                Ok(_) if c.crossings.len() == 2 => Ok(None),
                Ok(_) => Err(format!("{} crossings", c.crossings.len())),
                Err(e) => Err(e.to_string()),
            },
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(check(
        "recognize_roundtrip",
        match recognize_detailed(g) {
            Ok(r) => agree(canonicalize(&r.signature), canonicalize(s)),
            Err(rej) => Err(format!("rejected: {rej}")),
        },
    ));
    Ok(out)
}
