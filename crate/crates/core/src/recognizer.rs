//! Linear-time recognition: find one tile, then walk around the cycle matching tile after
//! tile at the reversed right wall of the previous one.

use std::collections::HashSet;

use serde::Serialize;

use crate::builder::build;
use crate::catalog::{catalog, TileCatalogEntry};
use crate::graph::{ball_vertices, max_degree_raw, MultiGraph, Vertex};
use crate::signature::{Frame, Signature, TileName};

/// Search radius around a seed vertex; every tile fits in a ball of this radius.
pub const BALL_RADIUS: usize = 8;

/// An embedding of a catalog tile: `vertex_map[u]` is the image of catalog vertex `u`.
/// Non-wall vertices keep exactly their tile edges; two wall vertices may share more edges
/// than in the tile, since the neighbouring tiles can join them too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TileMatch {
    pub tile_name: TileName,
    pub vertex_map: Vec<Vertex>,
}

impl TileMatch {
    fn entry(&self) -> &'static TileCatalogEntry {
        catalog().entry(self.tile_name)
    }

    pub fn left_wall(&self) -> [Vertex; 2] {
        self.entry().tile.left_wall.map(|u| self.vertex_map[u])
    }

    pub fn right_wall(&self) -> [Vertex; 2] {
        self.entry().tile.right_wall.map(|u| self.vertex_map[u])
    }
}

/// Why a graph was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum Rejection {
    #[error("maximum degree {0} is outside 4..=6")]
    DegreeBound(usize),
    #[error("too small or disconnected")]
    TooSmall,
    #[error("no tile matches around the seed vertex")]
    NoSeedTile,
    #[error("no walk of tile matches closes up")]
    WalkFailure,
    #[error("the tile walk closes after an even number of tiles")]
    ParityFailure,
}

/// A recognized member: its signature and where each tile sits in the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recognition {
    pub signature: Signature,
    pub tiles: Vec<TileMatch>,
}

/// Input adjacency with multiplicities.
struct Host {
    adj: Vec<Vec<(Vertex, usize)>>,
    degree: Vec<usize>,
}

impl Host {
    fn new(g: &MultiGraph) -> Host {
        let mut adj: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); g.vertex_count];
        let mut degree = vec![0; g.vertex_count];
        for &(u, v) in &g.edges {
            for (a, b) in [(u, v), (v, u)] {
                degree[a] += 1;
                match adj[a].iter_mut().find(|(w, _)| *w == b) {
                    Some((_, m)) => *m += 1,
                    None => adj[a].push((b, 1)),
                }
            }
        }
        Host { adj, degree }
    }

    fn mult(&self, u: Vertex, v: Vertex) -> usize {
        self.adj[u].iter().find(|(w, _)| *w == v).map_or(0, |&(_, m)| m)
    }
}

/// Catalog tile shape used by the matcher.
struct Shape {
    name: TileName,
    n: usize,
    mult: Vec<Vec<usize>>,
    degree: Vec<usize>,
    wall: Vec<bool>,
}

fn shapes() -> &'static [Shape] {
    static CACHE: std::sync::OnceLock<Vec<Shape>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| {
        // dL frames first: the walk prefers them
        let mut names = TileName::all();
        names.sort_by_key(|t| (t.frame != Frame::DL, t.index()));
        names
            .into_iter()
            .map(|name| {
                let e = catalog().entry(name);
                let n = e.vertex_count();
                let mut mult = vec![vec![0; n]; n];
                let mut degree = vec![0; n];
                for &(u, v) in e.edges() {
                    mult[u][v] += 1;
                    mult[v][u] += 1;
                    degree[u] += 1;
                    degree[v] += 1;
                }
                let mut wall = vec![false; n];
                for w in e.tile.left_wall.iter().chain(&e.tile.right_wall) {
                    wall[*w] = true;
                }
                Shape { name, n, mult, degree, wall }
            })
            .collect()
    })
}

/// Placement order starting from `roots`: every later vertex has an earlier neighbour,
/// recorded as its parent.
fn order_from(shape: &Shape, roots: &[Vertex]) -> Vec<(Vertex, Option<Vertex>)> {
    let mut out: Vec<(Vertex, Option<Vertex>)> = roots.iter().map(|&r| (r, None)).collect();
    let mut placed = vec![false; shape.n];
    for &r in roots {
        placed[r] = true;
    }
    let mut i = 0;
    while i < out.len() {
        let u = out[i].0;
        for w in 0..shape.n {
            if !placed[w] && shape.mult[u][w] > 0 {
                placed[w] = true;
                out.push((w, Some(u)));
            }
        }
        i += 1;
    }
    out
}

/// All tile-isomorphic embeddings of `shape` with `fixed` tile vertices pinned, each image
/// accepted by `allowed`.
fn embed(
    host: &Host,
    shape: &Shape,
    fixed: &[(Vertex, Vertex)],
    allowed: &dyn Fn(Vertex, Vertex) -> bool,
    first_only: bool,
) -> Vec<Vec<Vertex>> {
    let roots: Vec<Vertex> = fixed.iter().map(|&(u, _)| u).collect();
    let order = order_from(shape, &roots);
    if order.len() != shape.n {
        return Vec::new();
    }
    let mut map = vec![usize::MAX; shape.n];
    let mut out = Vec::new();
    extend(host, shape, &order, fixed, allowed, 0, &mut map, &mut out, first_only);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    host: &Host,
    shape: &Shape,
    order: &[(Vertex, Option<Vertex>)],
    fixed: &[(Vertex, Vertex)],
    allowed: &dyn Fn(Vertex, Vertex) -> bool,
    i: usize,
    map: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
    first_only: bool,
) {
    if first_only && !out.is_empty() {
        return;
    }
    if i == order.len() {
        out.push(map.clone());
        return;
    }
    let (u, parent) = order[i];
    let candidates: Vec<Vertex> = match parent {
        None => vec![fixed[i].1],
        Some(p) => host.adj[map[p]].iter().map(|&(w, _)| w).collect(),
    };
    for g in candidates {
        if map.contains(&g) || !allowed(u, g) {
            continue;
        }
        let d = host.degree[g];
        if (shape.wall[u] && d < shape.degree[u]) || (!shape.wall[u] && d != shape.degree[u]) {
            continue;
        }
        // between two wall vertices a neighbouring tile may add edges of its own
        let consistent = order[..i].iter().all(|&(t, _)| {
            let m = host.mult(g, map[t]);
            if shape.wall[u] && shape.wall[t] {
                m >= shape.mult[u][t]
            } else {
                m == shape.mult[u][t]
            }
        });
        if !consistent {
            continue;
        }
        map[u] = g;
        extend(host, shape, order, fixed, allowed, i + 1, map, out, first_only);
        map[u] = usize::MAX;
    }
}

/// Every tile-isomorphic embedding of a catalog tile inside the radius-8 ball around `v`.
pub fn find_tile_matches(g: &MultiGraph, v: Vertex) -> Vec<TileMatch> {
    if v >= g.vertex_count || max_degree_raw(g) > 6 {
        return Vec::new();
    }
    let host = Host::new(g);
    let adj: Vec<Vec<Vertex>> = host.adj.iter().map(|a| a.iter().map(|&(w, _)| w).collect()).collect();
    let ball: HashSet<Vertex> = ball_vertices(&adj, &[v], BALL_RADIUS, &|_| true).into_iter().collect();
    let mut found: Vec<TileMatch> = Vec::new();
    let mut seen = HashSet::new();
    for &w in &ball {
        for m in matches_containing(&host, w, &|x| ball.contains(&x)) {
            if seen.insert((m.tile_name, m.vertex_map.clone())) {
                found.push(m);
            }
        }
    }
    found.sort_by(|a, b| (a.tile_name.index(), &a.vertex_map).cmp(&(b.tile_name.index(), &b.vertex_map)));
    found
}

fn matches_containing(host: &Host, v: Vertex, inside: &dyn Fn(Vertex) -> bool) -> Vec<TileMatch> {
    let mut out = Vec::new();
    for shape in shapes() {
        for u in 0..shape.n {
            for map in embed(host, shape, &[(u, v)], &|_, x| inside(x), false) {
                out.push(TileMatch { tile_name: shape.name, vertex_map: map });
            }
        }
    }
    out
}

/// Signature of `g` if it is a member, with the tile positions.
pub fn recognize_detailed(g: &MultiGraph) -> Result<Recognition, Rejection> {
    let delta = max_degree_raw(g);
    if !(4..=6).contains(&delta) {
        return Err(Rejection::DegreeBound(delta));
    }
    if g.vertex_count < 9 || !g.is_connected() {
        return Err(Rejection::TooSmall);
    }
    let host = Host::new(g);
    let seed = 0;
    let mut candidates = matches_containing(&host, seed, &|_| true);
    // dedupe, dL-framed candidates first (shapes are already in that order)
    let mut seen = HashSet::new();
    candidates.retain(|m| seen.insert((m.tile_name, m.vertex_map.clone())));
    // a member reads the same in both directions around the cycle (see `mirror_reading`);
    // tiles with the seed as top-left wall vertex go first, which makes the choice follow the
    // vertex numbering of `build`
    candidates.sort_by_key(|m| m.left_wall()[0] != seed);
    if candidates.is_empty() {
        return Err(Rejection::NoSeedTile);
    }
    let mut parity_failure = false;
    for x in candidates {
        match walk(g, &host, x) {
            Ok(r) => return Ok(r),
            Err(Rejection::ParityFailure) => parity_failure = true,
            Err(_) => {}
        }
    }
    Err(if parity_failure { Rejection::ParityFailure } else { Rejection::WalkFailure })
}

pub fn recognize(g: &MultiGraph) -> Option<Signature> {
    recognize_detailed(g).ok().map(|r| r.signature)
}

/// Greedy rightward walk from `x`: the next tile's left wall is the current right wall
/// reversed, its other vertices unused; dL-framed matches are tried first.
fn walk(g: &MultiGraph, host: &Host, x: TileMatch) -> Result<Recognition, Rejection> {
    let mut used = vec![false; g.vertex_count];
    for &v in &x.vertex_map {
        used[v] = true;
    }
    let start = x.left_wall();
    let mut tiles = vec![x];
    let mut edges = tiles[0].entry().edges().len();
    loop {
        if edges > g.edges.len() || tiles.len() > g.vertex_count {
            return Err(Rejection::WalkFailure);
        }
        let [y1, y2] = tiles.last().expect("nonempty").right_wall();
        let closing = [y2, y1] == start;
        if closing {
            break;
        }
        let mut next = None;
        for shape in shapes() {
            let e = catalog().entry(shape.name);
            let [x1, x2] = e.tile.left_wall;
            let [r1, r2] = e.tile.right_wall;
            let fixed = [(x1, y2), (x2, y1)];
            // fresh vertices, except that the right wall may close onto the start
            let allowed = |u: Vertex, v: Vertex| {
                if u == x1 || u == x2 {
                    return true;
                }
                if u == r2 && v == start[0] || u == r1 && v == start[1] {
                    return true;
                }
                !used[v]
            };
            if let Some(map) = embed(host, shape, &fixed, &allowed, true).into_iter().next() {
                next = Some(TileMatch { tile_name: shape.name, vertex_map: map });
                break;
            }
        }
        let Some(m) = next else {
            return Err(Rejection::WalkFailure);
        };
        for &v in &m.vertex_map {
            used[v] = true;
        }
        edges += m.entry().edges().len();
        tiles.push(m);
    }
    if edges != g.edges.len() || used.iter().any(|u| !u) {
        return Err(Rejection::WalkFailure);
    }
    if tiles.len() % 2 == 0 || tiles.len() < 3 {
        return Err(Rejection::ParityFailure);
    }
    let signature = Signature::new(tiles.iter().map(|t| t.tile_name).collect()).map_err(|_| Rejection::ParityFailure)?;
    if !maps_onto(g, &signature, &tiles) {
        return Err(Rejection::WalkFailure);
    }
    Ok(Recognition { signature, tiles })
}

/// Whether the tile maps compose to an isomorphism from `build(s)` onto `g`.
fn maps_onto(g: &MultiGraph, s: &Signature, tiles: &[TileMatch]) -> bool {
    let b = build(s);
    let mut to_g = vec![usize::MAX; b.graph().vertex_count];
    for (i, t) in tiles.iter().enumerate() {
        for (u, &gv) in t.vertex_map.iter().enumerate() {
            let bv = b.tile_vertices[i][u];
            if to_g[bv] != usize::MAX && to_g[bv] != gv {
                return false;
            }
            to_g[bv] = gv;
        }
    }
    let mut hit = vec![false; g.vertex_count];
    for &v in &to_g {
        if v == usize::MAX || std::mem::replace(&mut hit[v], true) {
            return false;
        }
    }
    let key = |u: Vertex, v: Vertex| (u.min(v), u.max(v));
    let mut want: Vec<(Vertex, Vertex)> = g.edges.iter().map(|&(u, v)| key(u, v)).collect();
    let mut have: Vec<(Vertex, Vertex)> = b.graph().edges.iter().map(|&(u, v)| key(to_g[u], to_g[v])).collect();
    want.sort_unstable();
    have.sort_unstable();
    want == have
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{canonicalize, tokenize};

    #[test]
    fn example_roundtrip() {
        for sig in ["VIAdLAALAALDBLHdL", "DDLDDLDDL", "HdLHdLHdLHdLHdL", "AIVLAIVLAIVL", "DDdLDDLDDL"] {
            let s = tokenize(sig).unwrap();
            let r = recognize(build(&s).graph()).unwrap_or_else(|| panic!("{sig}"));
            assert_eq!(canonicalize(&r), canonicalize(&s), "{sig}");
        }
    }

    #[test]
    fn mirror_reading_builds_the_same_graph() {
        use crate::signature::mirror_reading;
        for sig in ["DBLDALABdL", "VDdLAIVLBDdL", "VIAdLAALAALDBLHdL"] {
            let s = tokenize(sig).unwrap();
            let m = mirror_reading(&s);
            assert_eq!(mirror_reading(&m), s);
            let g = build(&s);
            let r = recognize_detailed(g.graph()).unwrap();
            assert!(maps_onto(g.graph(), &r.signature, &r.tiles));
            let gm = build(&m);
            if g.graph().vertex_count <= 18 {
                assert!(crate::oracle::are_isomorphic(g.graph(), gm.graph()).unwrap(), "{sig}");
            }
            let rm = recognize(gm.graph()).unwrap();
            assert!([canonicalize(&s), canonicalize(&m)].contains(&canonicalize(&rm)), "{sig}");
        }
    }

    #[test]
    fn rejects_small_classics() {
        use crate::graph::from_edge_list;
        let k5 = from_edge_list("0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4").unwrap();
        assert_eq!(recognize_detailed(&k5), Err(Rejection::TooSmall));
        assert!(find_tile_matches(&k5, 0).is_empty());
        let k33 = from_edge_list("0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5").unwrap();
        assert_eq!(recognize_detailed(&k33), Err(Rejection::DegreeBound(3)));
    }

    #[test]
    fn seed_matches() {
        let g = build(&tokenize("DDLDDLDDL").unwrap());
        let ms = find_tile_matches(g.graph(), 0);
        assert!(ms.iter().any(|m| m.tile_name.to_string() == "DDL"));
    }
}
