//! Closed-form invariants of members and constructive Hamiltonian cycles, matchings and
//! edge covers.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::builder::{build, Built};
use crate::catalog::{catalog, TileCatalogEntry};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::signature::{symbol_counts, Frame, Signature, TileName};

/// Per-symbol contribution to `(|V|, |E|)`, in the order of [`crate::signature::SymbolCounts::as_array`].
pub const COUNT_MATRIX: [(i64, i64); 8] = [(3, 5), (1, 2), (1, 2), (1, 2), (0, 1), (2, 3), (2, 4), (-1, -1)];

pub fn order_size(s: &Signature) -> (usize, usize) {
    let counts = symbol_counts(s).as_array();
    let (v, e) = counts
        .iter()
        .zip(COUNT_MATRIX)
        .fold((0i64, 0i64), |(v, e), (&c, (dv, de))| (v + c as i64 * dv, e + c as i64 * de));
    (v as usize, e as usize)
}

/// 6 if an L-framed tile with an A/D top path precedes a tile with an A/D bottom path,
/// otherwise 5 if any A or D occurs, otherwise 4.
pub fn max_degree(s: &Signature) -> usize {
    let ad = |c: char| c == 'A' || c == 'D';
    let n = s.len();
    let six = (0..n).any(|i| {
        let (t1, t2) = (s.tile(i), s.tile(i + 1));
        t1.frame == Frame::L && ad(t1.picture.top_letter()) && ad(t2.picture.bottom_letter())
    });
    let c = symbol_counts(s);
    if six {
        6
    } else if c.a + c.d > 0 {
        5
    } else {
        4
    }
}

/// 2 exactly when every tile is DD or H (either frame) and no DD·L tile is followed by a DD tile.
pub fn clique_number(s: &Signature) -> usize {
    let dd = |t: TileName| t.picture.name() == "DD";
    let allowed = s.tiles().iter().all(|&t| dd(t) || t.picture.is_h());
    let pattern = (0..s.len()).any(|i| dd(s.tile(i)) && s.tile(i).frame == Frame::L && dd(s.tile(i + 1)));
    if allowed && !pattern {
        2
    } else {
        3
    }
}

/// Tracked wall positions of a tile in catalog terms: `x1, x2, y1, y2`.
fn walls(e: &TileCatalogEntry) -> [Vertex; 4] {
    [e.tile.left_wall[0], e.tile.left_wall[1], e.tile.right_wall[0], e.tile.right_wall[1]]
}

const NONE: u8 = u8::MAX;

/// How a set of vertex-disjoint paths meets four tracked vertices: the degree of each and,
/// for degree-one vertices, the tracked vertex at the other end of its path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Frontier {
    deg: [u8; 4],
    partner: [u8; 4],
}

/// Path systems inside one tile: every non-wall vertex has degree 2, wall vertices at most 2,
/// no cycle. One representative edge set per frontier pattern.
fn tile_path_systems(name: TileName) -> &'static [(Frontier, Vec<usize>)] {
    static CACHE: OnceLock<Vec<Vec<(Frontier, Vec<usize>)>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| TileName::all().into_iter().map(|t| enumerate_path_systems(catalog().entry(t))).collect());
    &all[name.index()]
}

fn enumerate_path_systems(e: &TileCatalogEntry) -> Vec<(Frontier, Vec<usize>)> {
    let g = &e.tile.graph;
    let w = walls(e);
    let m = g.edges.len();
    assert!(m < 24, "tile too large for subset enumeration");
    let mut found: HashMap<Frontier, Vec<usize>> = HashMap::new();
    'subsets: for mask in 0u32..1 << m {
        let mut deg = vec![0u8; g.vertex_count];
        let mut uf: Vec<usize> = (0..g.vertex_count).collect();
        fn root(uf: &mut [usize], mut v: usize) -> usize {
            while uf[v] != v {
                uf[v] = uf[uf[v]];
                v = uf[v];
            }
            v
        }
        let mut adj = vec![Vec::new(); g.vertex_count];
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            if mask & 1 << i == 0 {
                continue;
            }
            deg[u] += 1;
            deg[v] += 1;
            if deg[u] > 2 || deg[v] > 2 {
                continue 'subsets;
            }
            let (ru, rv) = (root(&mut uf, u), root(&mut uf, v));
            if ru == rv {
                continue 'subsets;
            }
            uf[ru] = rv;
            adj[u].push(v);
            adj[v].push(u);
        }
        if (0..g.vertex_count).any(|v| !w.contains(&v) && deg[v] != 2) {
            continue;
        }
        let mut f = Frontier { deg: [0; 4], partner: [NONE; 4] };
        for (i, &v) in w.iter().enumerate() {
            f.deg[i] = deg[v];
            if deg[v] == 1 {
                let end = walk_to_end(&adj, v);
                f.partner[i] = w.iter().position(|&x| x == end).expect("path ends are walls") as u8;
            }
        }
        found.entry(f).or_insert_with(|| (0..m).filter(|i| mask & 1 << i != 0).collect());
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by_key(|(f, _)| (f.deg, f.partner));
    out
}

fn walk_to_end(adj: &[Vec<Vertex>], start: Vertex) -> Vertex {
    let (mut prev, mut cur) = (start, adj[start][0]);
    while adj[cur].len() == 2 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
    }
    cur
}

/// Glues a frontier over `(u1, u2, a, b)` (nodes 0..4) with a tile pattern whose walls map to
/// `nodes` among 0..6. Returns combined degrees and the path-end graph.
fn glue(state: &Frontier, tile: &Frontier, nodes: [usize; 4]) -> Option<([u8; 6], Vec<(usize, usize)>)> {
    let mut deg = [0u8; 6];
    let mut links = Vec::new();
    for i in 0..4 {
        deg[i] += state.deg[i];
        if state.deg[i] == 1 && (state.partner[i] as usize) > i {
            links.push((i, state.partner[i] as usize));
        }
        deg[nodes[i]] += tile.deg[i];
        if tile.deg[i] == 1 && (tile.partner[i] as usize) > i {
            links.push((nodes[i], nodes[tile.partner[i] as usize]));
        }
    }
    deg.iter().all(|&d| d <= 2).then_some((deg, links))
}

/// Components of the path-end graph: `(vertices in walk order, closed)`.
fn link_components(links: &[(usize, usize)]) -> Vec<(Vec<usize>, bool)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 6];
    for (k, &(a, b)) in links.iter().enumerate() {
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let mut used = vec![false; links.len()];
    let mut out = Vec::new();
    // open paths start at nodes with one link
    let starts: Vec<usize> = (0..6).filter(|&v| adj[v].len() == 1).chain((0..6).filter(|&v| adj[v].len() == 2)).collect();
    for s in starts {
        let Some(&(_, first)) = adj[s].iter().find(|&&(_, k)| !used[k]) else {
            continue;
        };
        let mut walk = vec![s];
        let mut k = first;
        let mut cur = s;
        loop {
            used[k] = true;
            let (a, b) = links[k];
            cur = if a == cur { b } else { a };
            if cur == s {
                break;
            }
            walk.push(cur);
            match adj[cur].iter().find(|&&(_, j)| !used[j]) {
                Some(&(_, j)) => k = j,
                None => break,
            }
        }
        let closed = cur == s;
        out.push((walk, closed));
    }
    out
}

/// Step to the next frontier; `nodes` 2 and 3 (the old wall) must be saturated.
fn advance(state: &Frontier, tile: &Frontier) -> Option<Frontier> {
    // tile x1 is the previous y2 (node 3), x2 the previous y1 (node 2)
    let (deg, links) = glue(state, tile, [3, 2, 4, 5])?;
    if deg[2] != 2 || deg[3] != 2 {
        return None;
    }
    let mut next = Frontier { deg: [deg[0], deg[1], deg[4], deg[5]], partner: [NONE; 4] };
    let slot = |v: usize| match v {
        0 => 0,
        1 => 1,
        4 => 2,
        5 => 3,
        _ => unreachable!("saturated nodes are never path ends"),
    };
    for (walk, closed) in link_components(&links) {
        if closed {
            return None;
        }
        let (a, b) = (slot(walk[0]), slot(*walk.last().expect("nonempty walk")));
        next.partner[a] = b as u8;
        next.partner[b] = a as u8;
    }
    Some(next)
}

/// Final step: the last tile's right wall closes onto the first tile's left wall.
fn closes(state: &Frontier, tile: &Frontier) -> bool {
    let Some((deg, links)) = glue(state, tile, [3, 2, 1, 0]) else {
        return false;
    };
    if deg[..4].iter().any(|&d| d != 2) {
        return false;
    }
    let comps = link_components(&links);
    comps.len() == 1 && comps[0].1
}

/// A Hamiltonian cycle of `build(s)` by a boundary dynamic programme over the tiles.
pub fn hamiltonian_cycle(s: &Signature) -> Result<Vec<Vertex>> {
    hamiltonian_cycle_of(&build(s))
}

pub fn hamiltonian_cycle_of(built: &Built) -> Result<Vec<Vertex>> {
    let s = &built.signature;
    let k = s.len();
    // layer i: reachable frontier after tile i -> (previous frontier, pattern index)
    let mut layers: Vec<HashMap<Frontier, (Option<Frontier>, usize)>> = Vec::with_capacity(k);
    let mut first = HashMap::new();
    for (p, (f, _)) in tile_path_systems(s.tile(0)).iter().enumerate() {
        first.entry(*f).or_insert((None, p));
    }
    layers.push(first);
    for i in 1..k - 1 {
        let mut next = HashMap::new();
        let mut prev: Vec<&Frontier> = layers[i - 1].keys().collect();
        prev.sort_by_key(|f| (f.deg, f.partner));
        for st in prev {
            for (p, (f, _)) in tile_path_systems(s.tile(i)).iter().enumerate() {
                if let Some(n) = advance(st, f) {
                    next.entry(n).or_insert((Some(*st), p));
                }
            }
        }
        layers.push(next);
    }
    let mut prev: Vec<&Frontier> = layers[k - 2].keys().collect();
    prev.sort_by_key(|f| (f.deg, f.partner));
    let last = tile_path_systems(s.tile(k - 1));
    let closing = prev
        .into_iter()
        .find_map(|st| last.iter().position(|(f, _)| closes(st, f)).map(|p| (*st, p)))
        .ok_or_else(|| Error::Infeasible(format!("no Hamiltonian cycle found for {s}")))?;
    let mut chosen = vec![(k - 1, closing.1)];
    let mut cur = closing.0;
    for i in (0..k - 1).rev() {
        let (back, p) = layers[i][&cur];
        chosen.push((i, p));
        if let Some(b) = back {
            cur = b;
        }
    }
    let mut edges = Vec::with_capacity(built.graph().vertex_count);
    for (i, p) in chosen {
        let (_, es) = &tile_path_systems(s.tile(i))[p];
        edges.extend(es.iter().map(|&e| built.edge(i, e)));
    }
    order_cycle(built, &edges)
}

fn order_cycle(built: &Built, edges: &[usize]) -> Result<Vec<Vertex>> {
    let g = built.graph();
    let n = g.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for &e in edges {
        let (u, v) = g.edges[e];
        adj[u].push(v);
        adj[v].push(u);
    }
    if edges.len() != n || adj.iter().any(|a| a.len() != 2) {
        return Err(Error::Infeasible("selected edges do not form a 2-factor".into()));
    }
    let mut cycle = vec![0];
    let (mut prev, mut cur) = (0, adj[0][0]);
    while cur != 0 {
        cycle.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != n {
        return Err(Error::Infeasible("selected edges form several cycles".into()));
    }
    Ok(cycle)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingAndCover {
    pub matching: Vec<usize>,
    pub cover: Vec<usize>,
}

/// Every second edge of the Hamiltonian cycle, plus one more edge when `|V|` is odd.
pub fn matching_and_cover(s: &Signature) -> Result<MatchingAndCover> {
    let built = build(s);
    let cycle = hamiltonian_cycle_of(&built)?;
    Ok(matching_and_cover_from_cycle(&built, &cycle))
}

pub fn matching_and_cover_from_cycle(built: &Built, cycle: &[Vertex]) -> MatchingAndCover {
    let g = built.graph();
    let n = cycle.len();
    let mut lookup = HashMap::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        lookup.entry((u.min(v), u.max(v))).or_insert(e);
    }
    let edge = |i: usize| {
        let (u, v) = (cycle[i], cycle[(i + 1) % n]);
        lookup[&(u.min(v), u.max(v))]
    };
    let matching: Vec<usize> = (0..n / 2).map(|j| edge(2 * j)).collect();
    let mut cover = matching.clone();
    if n % 2 == 1 {
        // the last vertex is unmatched; the closing edge of the cycle covers it
        cover.push(edge(n - 1));
    }
    MatchingAndCover { matching, cover }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::signature::tokenize;

    #[test]
    fn anchors() {
        let ex = tokenize("VIAdLAALAALDBLHdL").unwrap();
        assert_eq!(order_size(&ex), (26, 48));
        assert_eq!(max_degree(&ex), 6);
        assert_eq!(clique_number(&ex), 3);
        assert_eq!(max_degree(&Signature::power("VVL", 3).unwrap()), 4);
        assert_eq!(max_degree(&Signature::power("DBdL", 3).unwrap()), 5);
        assert_eq!(clique_number(&Signature::power("DDdL", 3).unwrap()), 2);
        assert_eq!(clique_number(&Signature::power("DDL", 3).unwrap()), 3);
    }

    #[test]
    fn hamiltonian_examples() {
        for (sig, n) in [("DDLDDLDDL", 9), ("VIAdLAALAALDBLHdL", 26), ("HdLHdLHdL", 18)] {
            let s = tokenize(sig).unwrap();
            let built = build(&s);
            let c = hamiltonian_cycle_of(&built).unwrap();
            assert_eq!(c.len(), n);
            assert!(oracle::has_hamiltonian_cycle_witness(built.graph(), &c), "{sig}");
        }
    }

    #[test]
    fn matching_sizes() {
        let m = matching_and_cover(&tokenize("VIAdLAALAALDBLHdL").unwrap()).unwrap();
        assert_eq!((m.matching.len(), m.cover.len()), (13, 13));
        let s = tokenize("DDLDDLDDL").unwrap();
        let m = matching_and_cover(&s).unwrap();
        assert_eq!((m.matching.len(), m.cover.len()), (4, 5));
        let g = build(&s);
        assert!(oracle::is_matching(g.graph(), &m.matching));
        assert!(oracle::is_edge_cover(g.graph(), &m.cover));
    }
}
