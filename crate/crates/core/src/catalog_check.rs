//! Startup validation of the tile catalog.

use crate::catalog::{Catalog, Segment, TileCatalogEntry};
use crate::embedding::{self, Planarization, Rotation};
use crate::error::{Error, Result};
use crate::graph::{simplify, MultiGraph};
use crate::signature::Picture;

/// Pictures listed as messy by the treewidth lemma; each must contain an hourglass minor.
pub const LISTED_MESSY: [&str; 5] = ["VA", "VIA", "BA", "BIA", "H"];

/// Vertex and edge contribution of every symbol, as in the count matrix.
pub fn contribution(symbol: char) -> (i64, i64) {
    match symbol {
        'L' => (3, 5),
        'd' => (1, 2),
        'A' | 'V' => (1, 2),
        'D' => (0, 1),
        'H' => (2, 3),
        'B' => (2, 4),
        'I' => (-1, -1),
        _ => (0, 0),
    }
}

pub fn expected_tile_counts(e: &TileCatalogEntry) -> (usize, usize) {
    let (v, m) = e
        .name
        .to_string()
        .chars()
        .map(contribution)
        .fold((2, 0), |(a, b), (x, y)| (a + x, b + y));
    (v as usize, m as usize)
}

pub fn has_triangle(g: &MultiGraph) -> bool {
    let adj = simplify(g).simple_adjacency();
    (0..adj.len()).any(|u| {
        adj[u].iter().any(|&v| v > u && adj[v].iter().any(|&w| w > v && adj[u].binary_search(&w).is_ok()))
    })
}

fn check_embedding(e: &TileCatalogEntry) -> Result<()> {
    let g = &e.tile.graph;
    let rot = e.rotation();
    embedding::euler_check(g, &rot).map_err(Error::Catalog)?;
    let [x1, x2] = e.tile.left_wall;
    let [y1, y2] = e.tile.right_wall;
    let outer = embedding::trace_faces(g, &rot)
        .iter()
        .filter(|f| embedding::cyclic_order(&embedding::face_vertices(g, f), &[x1, x2, y2, y1]).is_some())
        .count();
    if outer != 1 {
        return Err(Error::Catalog(format!("{outer} faces carry the walls in order x1 x2 y2 y1")));
    }
    Ok(())
}

/// The twist template as a planarized graph and its rotation.
pub fn twist_planarization(e: &TileCatalogEntry) -> Result<(Planarization, Rotation)> {
    let n = e.vertex_count();
    let m = e.edges().len();
    let mut base = e.tile.graph.clone();
    base.vertex_count = n + 1;
    base.edges.push((n, e.tile.left_wall[0]));
    let p = Planarization::new(&base, &e.twist.crossings).map_err(Error::Catalog)?;
    if e.twist.crossings[0] != (m, e.single_edge) {
        return Err(Error::Catalog("first twist crossing must pair the incoming edge with the single edge".into()));
    }
    let mut rot: Rotation = vec![Vec::new(); n + 3];
    for (v, toks) in e.twist.rotation.iter().enumerate() {
        for &t in toks {
            let d = match t {
                Segment::End(x) => Some(p.end_dart(x, v)),
                Segment::TowardsFirst(x) => p.towards_first(x),
                Segment::TowardsSecond(x) => p.towards_second(x),
            };
            rot[v].push(d.ok_or_else(|| Error::Catalog(format!("token {t:?} at {v} names an uncrossed edge")))?);
        }
    }
    Ok((p, rot))
}

fn check_twist(e: &TileCatalogEntry) -> Result<()> {
    let (p, rot) = twist_planarization(e)?;
    let g = &p.graph;
    embedding::euler_check(g, &rot).map_err(Error::Catalog)?;
    for (k, &(a, b)) in p.crossings.iter().enumerate() {
        let c = p.base_vertices + k;
        let ds = &rot[c];
        let first = [p.towards_first(a), p.towards_second(a)];
        if ds.len() != 4 || first.iter().any(|d| d.is_none()) {
            return Err(Error::Catalog("crossing vertex must have degree 4".into()));
        }
        let i = ds.iter().position(|d| Some(*d) == first[0]).unwrap_or(9);
        let j = ds.iter().position(|d| Some(*d) == first[1]).unwrap_or(9);
        if i > 3 || j > 3 || (i + 2) % 4 != j {
            return Err(Error::Catalog(format!("strands of edges {a} and {b} do not alternate")));
        }
    }
    let n = e.vertex_count();
    let [_, x2] = e.tile.left_wall;
    let [y1, y2] = e.tile.right_wall;
    let outer = embedding::trace_faces(g, &rot)
        .iter()
        .filter(|f| embedding::cyclic_order(&embedding::face_vertices(g, f), &[n, y2, y1, x2]).is_some())
        .count();
    if outer != 1 {
        return Err(Error::Catalog(format!("{outer} faces carry p y2 y1 x2 in twisted order")));
    }
    Ok(())
}

pub fn validate(cat: &Catalog) -> Result<()> {
    for e in cat.entries() {
        let ctx = |err: Error| Error::Catalog(format!("tile {}: {err}", e.name));
        let g = &e.tile.graph;
        let (ev, ee) = expected_tile_counts(e);
        if (g.vertex_count, g.edges.len()) != (ev, ee) {
            return Err(ctx(Error::Catalog(format!(
                "has {} vertices and {} edges, count matrix says {ev} and {ee}",
                g.vertex_count,
                g.edges.len()
            ))));
        }
        let letters = e.name.picture.name();
        let want_triangle = letters.contains(['A', 'V', 'B']);
        if has_triangle(g) != want_triangle {
            return Err(ctx(Error::Catalog(format!("triangle census violated (expected {want_triangle})"))));
        }
        if !g.is_connected() {
            return Err(ctx(Error::Catalog("tile graph is disconnected".into())));
        }
        check_embedding(e).map_err(ctx)?;
        check_twist(e).map_err(ctx)?;
    }
    // The listed pictures are read up to mirroring, which exchanges top and bottom.
    let mut expected = Vec::new();
    for name in LISTED_MESSY {
        let p = Picture::from_name(name).ok_or_else(|| Error::Catalog(format!("unknown picture {name}")))?;
        expected.extend([p, p.swapped()]);
    }
    for e in cat.entries() {
        if e.messy != expected.contains(&e.name.picture) {
            return Err(Error::Catalog(format!(
                "tile {}: hourglass minor search says messy={}, the listed set disagrees",
                e.name, e.messy
            )));
        }
    }
    Ok(())
}
