//! Two-crossing drawings as planarization certificates.
//!
//! Tiles are laid out around the cycle with every second one flipped, which draws the whole
//! strip without crossings except where the cycle closes with the wrong orientation. One tile
//! is drawn twisted from its catalog template instead: the predecessor's single edge crosses
//! the tile's single edge, and one more crossing inside the tile reverses its right wall.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::builder::{build, Built};
use crate::catalog::{catalog, Segment};
use crate::catalog_check::twist_planarization;
use crate::embedding::{self, Dart, Planarization, Rotation};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};
use crate::signature::{canonicalize, Signature};

/// Crossing edge pairs of the drawing and the rotation system of its planarization, where
/// crossing `k` is vertex `n + k` and darts follow [`Planarization`] numbering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingCertificate {
    pub crossings: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<Dart>>,
}

impl DrawingCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let rot: BTreeMap<String, &Vec<Dart>> = self.rotation.iter().enumerate().map(|(v, d)| (v.to_string(), d)).collect();
        serde_json::json!({ "crossings": self.crossings, "rotation": rot })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<DrawingCertificate> {
        let bad = |what: &str| Error::Parse(format!("certificate: {what}"));
        let crossings: Vec<(usize, usize)> =
            serde_json::from_value(v.get("crossings").cloned().ok_or_else(|| bad("missing crossings"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let rot: BTreeMap<String, Vec<Dart>> =
            serde_json::from_value(v.get("rotation").cloned().ok_or_else(|| bad("missing rotation"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let mut rotation = vec![Vec::new(); rot.len()];
        for (k, ds) in rot {
            let i: usize = k.parse().map_err(|_| bad("vertex key"))?;
            *rotation.get_mut(i).ok_or_else(|| bad("vertex keys are not 0..n"))? = ds;
        }
        Ok(DrawingCertificate { crossings, rotation })
    }

    /// DOT of the planarization; crossing vertices are drawn as points.
    pub fn to_dot(&self, g: &MultiGraph) -> Result<String> {
        let p = Planarization::new(g, &self.crossings).map_err(Error::Infeasible)?;
        let mut out = String::from("graph drawing {\n");
        for c in 0..self.crossings.len() {
            out += &format!("  {} [shape=point];\n", g.vertex_count + c);
        }
        for (u, v) in &p.graph.edges {
            out += &format!("  {u} -- {v};\n");
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// Why a certificate fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum DrawingViolation {
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("edge {0} is crossed more than once")]
    CrossedTwice(usize),
    #[error("crossing edges {0} and {1} share an endpoint")]
    AdjacentCrossing(usize, usize),
    #[error("crossing vertex {0} does not alternate the two strands")]
    NotAlternating(Vertex),
    #[error("rotation system: {0}")]
    Rotation(String),
    #[error("not a sphere embedding: {0}")]
    Euler(String),
}

/// Checks a certificate against `g`; returns the face count of the planarization.
pub fn verify_certificate(g: &MultiGraph, c: &DrawingCertificate) -> std::result::Result<usize, DrawingViolation> {
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in &c.crossings {
        for e in [a, b] {
            if e >= g.edges.len() {
                return Err(DrawingViolation::UnknownEdge(e));
            }
            if !seen.insert(e) {
                return Err(DrawingViolation::CrossedTwice(e));
            }
        }
        let (u, v) = g.edges[a];
        let (x, y) = g.edges[b];
        if u == x || u == y || v == x || v == y {
            return Err(DrawingViolation::AdjacentCrossing(a, b));
        }
    }
    let p = Planarization::new(g, &c.crossings).map_err(DrawingViolation::Rotation)?;
    embedding::check_rotation(&p.graph, &c.rotation).map_err(DrawingViolation::Rotation)?;
    for (k, &(a, _)) in c.crossings.iter().enumerate() {
        let v = g.vertex_count + k;
        let ds = &c.rotation[v];
        let i = ds.iter().position(|&d| Some(d) == p.towards_first(a));
        let j = ds.iter().position(|&d| Some(d) == p.towards_second(a));
        match (i, j) {
            (Some(i), Some(j)) if ds.len() == 4 && (i + 2) % 4 == j => {}
            _ => return Err(DrawingViolation::NotAlternating(v)),
        }
    }
    embedding::euler_check(&p.graph, &c.rotation).map_err(DrawingViolation::Euler)
}

/// Position of the gap where `face` passes `v` in the rotation `rot[v]`: the index of the
/// dart after which the face turns. `None` unless the face passes `v` exactly once.
fn outer_gap(g: &MultiGraph, rot: &Rotation, face: &[Dart], v: Vertex) -> Option<usize> {
    let mut hits = face.iter().filter(|&&d| embedding::dart_head(g, d) == v);
    let d = *hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    rot[v].iter().position(|&x| x == d ^ 1)
}

/// The face carrying `order`, and whether it carries it in the given direction.
fn outer_face(g: &MultiGraph, rot: &Rotation, order: &[Vertex]) -> Option<(Vec<Dart>, bool)> {
    embedding::trace_faces(g, rot).into_iter().find_map(|f| {
        let dir = embedding::cyclic_order(&embedding::face_vertices(g, &f), order)?;
        Some((f, dir))
    })
}

/// Darts of one tile at a vertex, in drawing order starting after the outer face.
fn piece<T: Copy>(list: &[T], gap: usize, mirrored: bool) -> Vec<T> {
    let k = list.len();
    let mut out: Vec<T> = (1..=k).map(|i| list[(gap + i) % k]).collect();
    if mirrored {
        out.reverse();
    }
    out
}

/// The tile drawn twisted: the first tile of the canonical rotation without an identification
/// in its picture, else the first tile of that rotation.
pub fn twist_tile(s: &Signature) -> usize {
    let c = canonicalize(s);
    let n = s.len();
    let off = (0..n).find(|&r| s.rotate(r) == c).unwrap_or(0);
    (0..n)
        .map(|i| (off + i) % n)
        .find(|&i| !s.tile(i).picture.has_identification())
        .unwrap_or(off)
}

/// A 2-crossing 1-planar drawing of `build(s)`.
pub fn build_drawing(s: &Signature) -> Result<DrawingCertificate> {
    let built = build(s);
    let y = twist_tile(s);
    let mut last = None;
    for twist_mirrored in [false, true] {
        for parity in [0, 1] {
            let c = compose(&built, y, twist_mirrored, parity)?;
            match verify_certificate(built.graph(), &c) {
                Ok(_) => return Ok(c),
                Err(v) => last = Some(v),
            }
        }
    }
    Err(Error::Infeasible(format!("no orientation of the twisted layout verifies: {}", last.expect("tried"))))
}

fn compose(built: &Built, y: usize, twist_mirrored: bool, parity: usize) -> Result<DrawingCertificate> {
    let s = &built.signature;
    let n = s.len();
    let g = built.graph();
    let cat = catalog();
    let prev = (y + n - 1) % n;
    let ye = cat.entry(s.tile(y));
    let pe = cat.entry(s.tile(prev));
    let p_single = built.edge(prev, pe.single_edge);
    let gmap = |x: usize| if x == ye.edges().len() { p_single } else { built.edge(y, x) };
    let crossings: Vec<(usize, usize)> = ye.twist.crossings.iter().map(|&(a, b)| (gmap(a), gmap(b))).collect();
    let pl = Planarization::new(g, &crossings).map_err(Error::Infeasible)?;
    let mut rot: Rotation = vec![Vec::new(); pl.graph.vertex_count];

    // pieces[v]: darts of each tile at v, each already in drawing order
    let mut pieces: Vec<Vec<Vec<Dart>>> = vec![Vec::new(); g.vertex_count];
    let local = |t: usize, v: Vertex, d: Dart| -> Dart {
        pl.end_dart(built.edge(t, d / 2), built.tile_vertices[t][v])
    };
    for t in (0..n).filter(|&t| t != y) {
        let e = cat.entry(s.tile(t));
        let lr = e.rotation();
        let [x1, x2] = e.tile.left_wall;
        let [y1, y2] = e.tile.right_wall;
        let (face, dir) = outer_face(&e.tile.graph, &lr, &[x1, x2, y2, y1])
            .ok_or_else(|| Error::Catalog(format!("tile {} has no outer face", e.name)))?;
        // stored embeddings may have either handedness
        let mirrored = (((t + n - y) % n) % 2 == parity) != dir;
        for v in 0..e.vertex_count() {
            let darts: Vec<Dart> = lr[v].iter().map(|&d| local(t, v, d)).collect();
            let gv = built.tile_vertices[t][v];
            let wall = v == x1 || v == x2 || v == y1 || v == y2;
            if t == prev && v == y2 {
                // the twisted tile's template draws this vertex
                continue;
            }
            if wall {
                let gap = outer_gap(&e.tile.graph, &lr, &face, v)
                    .ok_or_else(|| Error::Catalog(format!("tile {}: outer face meets a wall twice", e.name)))?;
                pieces[gv].push(piece(&darts, gap, mirrored));
            } else {
                rot[gv] = piece(&darts, 0, mirrored);
            }
        }
    }

    // the twisted tile
    let (tp, trot) = twist_planarization(ye)?;
    let ny = ye.vertex_count();
    let x2 = ye.tile.left_wall[1];
    let [y1, y2] = ye.tile.right_wall;
    let (face, dir) = outer_face(&tp.graph, &trot, &[ny, y2, y1, x2])
        .ok_or_else(|| Error::Catalog(format!("tile {}: twist has no outer face", ye.name)))?;
    let twist_mirrored = twist_mirrored != dir;
    let vmap = |v: usize| -> Vertex {
        if v < ny {
            built.tile_vertices[y][v]
        } else if v == ny {
            built.tile_vertices[prev][pe.vertex("z").expect("frame vertex z")]
        } else {
            g.vertex_count + (v - ny - 1)
        }
    };
    for (v, toks) in ye.twist.rotation.iter().enumerate() {
        if v == ny {
            // p keeps the predecessor's own rotation
            continue;
        }
        let gv = vmap(v);
        let darts = toks
            .iter()
            .map(|&t| match t {
                Segment::End(x) => Some(pl.end_dart(gmap(x), gv)),
                Segment::TowardsFirst(x) => pl.towards_first(gmap(x)),
                Segment::TowardsSecond(x) => pl.towards_second(gmap(x)),
            })
            .collect::<Option<Vec<Dart>>>()
            .ok_or_else(|| Error::Catalog(format!("tile {}: twist token on an uncrossed edge", ye.name)))?;
        if v == x2 || v == y1 || v == y2 {
            let gap = outer_gap(&tp.graph, &trot, &face, v)
                .ok_or_else(|| Error::Catalog(format!("tile {}: twist face meets a wall twice", ye.name)))?;
            pieces[gv].push(piece(&darts, gap, twist_mirrored));
        } else {
            rot[gv] = piece(&darts, 0, twist_mirrored);
        }
    }
    for (v, ps) in pieces.into_iter().enumerate() {
        if !ps.is_empty() {
            rot[v] = ps.concat();
        }
    }
    Ok(DrawingCertificate { crossings, rotation: rot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::tokenize;

    /// Twisting at an explicit tile, for choice-independence checks.
    fn drawing_at(s: &Signature, y: usize) -> Option<DrawingCertificate> {
        let built = build(s);
        [(false, 0), (false, 1), (true, 0), (true, 1)]
            .into_iter()
            .filter_map(|(m, p)| compose(&built, y, m, p).ok())
            .find(|c| verify_certificate(built.graph(), c).is_ok())
    }

    #[test]
    fn any_tile_can_be_twisted() {
        for sig in ["VIAdLAALAALDBLHdL", "DDdLDDLDDL", "AIVLBIAdLHL", "HdLVVdLBBLAIBdLDAL"] {
            let s = tokenize(sig).unwrap();
            for y in 0..s.len() {
                assert!(drawing_at(&s, y).is_some(), "{sig} at {y}");
            }
        }
    }

    #[test]
    fn rejects_broken_certificates() {
        let s = tokenize("DDLDDLDDL").unwrap();
        let g = build(&s);
        let good = build_drawing(&s).unwrap();
        let (a, _) = good.crossings[0];
        let (u, _) = g.graph().edges[a];
        let adjacent = g.graph().edges.iter().position(|&(x, y)| (x == u || y == u) && (x, y) != g.graph().edges[a]).unwrap();
        let bad = DrawingCertificate { crossings: vec![(a, adjacent), good.crossings[1]], rotation: good.rotation.clone() };
        assert!(matches!(verify_certificate(g.graph(), &bad), Err(DrawingViolation::AdjacentCrossing(..))));
        let mut swapped = good.clone();
        let v = (0..9).find(|&v| swapped.rotation[v].len() >= 3).unwrap();
        swapped.rotation[v].swap(0, 1);
        assert!(matches!(verify_certificate(g.graph(), &swapped), Err(DrawingViolation::Euler(_))));
        let json = good.to_json();
        assert_eq!(DrawingCertificate::from_json(&json).unwrap(), good);
    }

    #[test]
    fn example_has_two_crossings() {
        for sig in ["VIAdLAALAALDBLHdL", "AIVLAIVLAIVL", "DDLDDLDDL", "HdLHdLHdLHdLHdL"] {
            let s = tokenize(sig).unwrap();
            let c = build_drawing(&s).unwrap_or_else(|e| panic!("{sig}: {e}"));
            assert_eq!(c.crossings.len(), 2);
            let g = build(&s);
            verify_certificate(g.graph(), &c).unwrap();
        }
    }
}
