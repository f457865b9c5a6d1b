//! One-shot property summary of a member, with optional witnesses.

use serde::Serialize;
use serde_json::{json, Value};

use crate::builder::build;
use crate::drawing::{build_drawing, verify_certificate};
use crate::ecolor::{chromatic_index, construct_edge_coloring};
use crate::error::{Error, Result};
use crate::graph::max_degree_raw;
use crate::props::{clique_number, hamiltonian_cycle_of, matching_and_cover_from_cycle, max_degree, order_size};
use crate::signature::{canonicalize, Signature};
use crate::treewidth::{build_tree_decomposition, messy_count, treewidth, validate_decomposition};
use crate::vcolor::{chromatic_number, construct_coloring, is_bipartite_by_characterization};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub schema: u32,
    pub signature: String,
    pub canonical_signature: String,
    pub tiles: usize,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub clique_number: usize,
    pub matching_number: usize,
    pub edge_cover_number: usize,
    pub simple_crossing_number: usize,
    pub bipartite: bool,
    pub chromatic_number: usize,
    pub chromatic_index: usize,
    pub treewidth: usize,
    pub messy_tiles: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Value>,
}

/// Every field comes from its own module; with `witnesses` the report also carries the
/// objects that certify them, each checked before it is emitted.
pub fn full_report(s: &Signature, witnesses: bool) -> Result<PropertyReport> {
    let built = build(s);
    let g = built.graph();
    let (v, e) = order_size(s);
    let cycle = hamiltonian_cycle_of(&built)?;
    let mc = matching_and_cover_from_cycle(&built, &cycle);
    let drawing = build_drawing(s)?;
    verify_certificate(g, &drawing).map_err(|x| Error::Infeasible(x.to_string()))?;
    let chi = chromatic_number(s)?;
    let report = PropertyReport {
        schema: SCHEMA,
        signature: s.to_string(),
        canonical_signature: canonicalize(s).to_string(),
        tiles: s.len(),
        vertices: v,
        edges: e,
        max_degree: max_degree(s),
        clique_number: clique_number(s),
        matching_number: mc.matching.len(),
        edge_cover_number: mc.cover.len(),
        simple_crossing_number: drawing.crossings.len(),
        bipartite: is_bipartite_by_characterization(s),
        chromatic_number: chi,
        chromatic_index: chromatic_index(s),
        treewidth: treewidth(s),
        messy_tiles: messy_count(s),
        witnesses: None,
    };
    if !witnesses {
        return Ok(report);
    }
    let colouring = construct_coloring(s, chi)?;
    let edge_colouring = construct_edge_coloring(s)?;
    let td = build_tree_decomposition(s);
    validate_decomposition(g, &td).map_err(|x| Error::Infeasible(x.to_string()))?;
    let w = json!({
        "edges": g.edges,
        "hamiltonian_cycle": cycle,
        "matching": mc.matching,
        "edge_cover": mc.cover,
        "drawing": drawing.to_json(),
        "coloring": colouring,
        "edge_coloring": edge_colouring,
        "tree_decomposition": td.to_json(),
        "max_degree_raw": max_degree_raw(g),
    });
    Ok(PropertyReport { witnesses: Some(w), ..report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::tokenize;

    #[test]
    fn example_report() {
        let r = full_report(&tokenize("VIAdLAALAALDBLHdL").unwrap(), false).unwrap();
        assert_eq!(
            (r.vertices, r.edges, r.max_degree, r.clique_number, r.edge_cover_number),
            (26, 48, 6, 3, 13)
        );
        assert_eq!((r.simple_crossing_number, r.chromatic_number, r.chromatic_index, r.treewidth), (2, 3, 6, 4));
        assert_eq!(r.messy_tiles, 2);
    }

    #[test]
    fn fields_are_consistent() {
        for seed in 0..10 {
            let s = crate::signature::random_signature(3 + 2 * (seed % 4) as usize, seed).unwrap();
            let r = full_report(&s, true).unwrap();
            assert_eq!(r.edge_cover_number, r.vertices.div_ceil(2));
            assert!((2..=4).contains(&r.chromatic_number));
            assert!(r.chromatic_index >= r.max_degree);
            assert!((3..=5).contains(&r.treewidth));
            assert_eq!(r.bipartite, r.chromatic_number == 2);
        }
    }
}
