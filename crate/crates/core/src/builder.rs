//! Materializes the cyclic join of right-inverted tiles described by a signature.
//!
//! Consecutive tiles `T, T'` are glued as `T.y2 = T'.x1` and `T.y1 = T'.x2` (the right wall of
//! `T` is inverted before the join), and the last tile closes onto the first the same way.

use crate::catalog::{self, cyclize, invert_right, join, LabeledGraph, VertexLabel, WallRole};
use crate::error::Result;
use crate::graph::{MultiGraph, Vertex};
use crate::signature::Signature;

/// A built member together with the position of every tile inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Built {
    pub signature: Signature,
    pub labeled: LabeledGraph,
    /// For tile `i`, the graph vertex of every catalog vertex of that tile.
    pub tile_vertices: Vec<Vec<Vertex>>,
    /// For tile `i`, the id of its first edge; its edges follow in catalog order.
    pub tile_edge_offset: Vec<usize>,
}

impl Built {
    pub fn graph(&self) -> &MultiGraph {
        &self.labeled.graph
    }

    /// Graph edge id of catalog edge `e` of tile `i`.
    pub fn edge(&self, tile: usize, e: usize) -> usize {
        self.tile_edge_offset[tile] + e
    }

    pub fn tile_count(&self) -> usize {
        self.tile_vertices.len()
    }
}

/// Linear-time construction. Vertex ids follow the order of the literal fold
/// `cyclize(T0^ ⊗ T1^ ⊗ ... )`: every tile contributes its vertices in catalog order,
/// skipping those already created by the previous tile (or, for the last tile, by the first).
pub fn build(s: &Signature) -> Built {
    let cat = catalog::catalog();
    let k = s.len();
    let mut tile_vertices: Vec<Vec<Vertex>> = Vec::with_capacity(k);
    let mut tile_edge_offset = Vec::with_capacity(k);
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut next = 0usize;
    for i in 0..k {
        let entry = cat.entry(s.tile(i));
        let [x1, x2] = entry.tile.left_wall;
        let [y1, y2] = entry.tile.right_wall;
        let mut map = vec![usize::MAX; entry.vertex_count()];
        if i > 0 {
            let prev_entry = cat.entry(s.tile(i - 1));
            let prev = &tile_vertices[i - 1];
            map[x1] = prev[prev_entry.tile.right_wall[1]];
            map[x2] = prev[prev_entry.tile.right_wall[0]];
            labels[map[x1]] = VertexLabel { tile_index: i, role: WallRole::LeftWall1 };
            labels[map[x2]] = VertexLabel { tile_index: i, role: WallRole::LeftWall2 };
        }
        if i == k - 1 {
            let first = &tile_vertices[0];
            let first_entry = cat.entry(s.tile(0));
            map[y2] = first[first_entry.tile.left_wall[0]];
            map[y1] = first[first_entry.tile.left_wall[1]];
        }
        for (v, slot) in map.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
                let role = if v == x1 {
                    WallRole::LeftWall1
                } else if v == x2 {
                    WallRole::LeftWall2
                } else {
                    WallRole::Interior
                };
                labels.push(VertexLabel { tile_index: i, role });
            }
        }
        tile_edge_offset.push(edges.len());
        edges.extend(entry.edges().iter().map(|&(u, v)| (map[u], map[v])));
        tile_vertices.push(map);
    }
    let graph = MultiGraph { vertex_count: next, edges };
    Built {
        signature: s.clone(),
        labeled: LabeledGraph { graph, labels },
        tile_vertices,
        tile_edge_offset,
    }
}

/// Reference construction through the tile operations: right-invert every tile, join in
/// order, cyclize. Quadratic; used to cross-check [`build`].
pub fn build_by_tile_algebra(s: &Signature) -> Result<LabeledGraph> {
    let cat = catalog::catalog();
    let tile_labels = |t: &crate::catalog::Tile, i: usize| -> Vec<VertexLabel> {
        (0..t.graph.vertex_count)
            .map(|v| {
                let role = if v == t.left_wall[0] {
                    WallRole::LeftWall1
                } else if v == t.left_wall[1] {
                    WallRole::LeftWall2
                } else {
                    WallRole::Interior
                };
                VertexLabel { tile_index: i, role }
            })
            .collect()
    };
    let first = &cat.entry(s.tile(0)).tile;
    let mut chain = invert_right(first);
    let mut labels = tile_labels(first, 0);
    for i in 1..s.len() {
        let t = invert_right(&cat.entry(s.tile(i)).tile);
        let fresh = tile_labels(&t, i);
        let joined = join(&chain, &t)?;
        labels[chain.right_wall[0]] = fresh[t.left_wall[0]];
        labels[chain.right_wall[1]] = fresh[t.left_wall[1]];
        labels.extend(
            (0..t.graph.vertex_count).filter(|&v| v != t.left_wall[0] && v != t.left_wall[1]).map(|v| fresh[v]),
        );
        chain = joined;
    }
    cyclize(&chain, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::tokenize;

    #[test]
    fn anchor_counts() {
        for (sig, v, e) in [
            ("VIAdLAALAALDBLHdL", 26, 48),
            ("AIVLAIVLAIVL", 12, 24),
            ("HdLHdLHdLHdLHdL", 30, 50),
            ("DDLDDLDDL", 9, 21),
            ("AALAALAAL", 15, 27),
        ] {
            let b = build(&tokenize(sig).unwrap());
            assert_eq!((b.graph().vertex_count, b.graph().edges.len()), (v, e), "{sig}");
        }
    }

    #[test]
    fn fast_build_matches_tile_algebra() {
        for sig in ["VIAdLAALAALDBLHdL", "DDLDDLDDL", "HLDDLHdL", "BIAdLAIBLVVdLDALHL"] {
            let s = tokenize(sig).unwrap();
            let fast = build(&s);
            let slow = build_by_tile_algebra(&s).unwrap();
            assert_eq!(fast.labeled, slow, "{sig}");
        }
    }
}
