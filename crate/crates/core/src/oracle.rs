//! Brute-force ground truth for desk-scale instances. Every oracle has a hard size guard and
//! shares no code with the structural modules beyond the graph type.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{simplify, MultiGraph, Vertex};

pub const CHROMATIC_GUARD: usize = 30;
pub const EDGE_GUARD: usize = 30;
pub const TREEWIDTH_GUARD: usize = 18;
pub const CLIQUE_GUARD: usize = 2000;
pub const ISOMORPHISM_GUARD: usize = 64;

fn guard(what: &'static str, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeGuard { what, limit, actual })
    } else {
        Ok(())
    }
}

/// Least `k` admitting a proper vertex colouring.
pub fn brute_chromatic_number(g: &MultiGraph) -> Result<usize> {
    guard("chromatic number oracle", CHROMATIC_GUARD, g.vertex_count)?;
    if g.vertex_count == 0 {
        return Ok(0);
    }
    if g.edges.is_empty() {
        return Ok(1);
    }
    let adj = g.simple_adjacency();
    // colour in BFS order so that most vertices see a coloured neighbour early
    let order = bfs_order(&adj);
    let mut k = 2;
    loop {
        let mut colour = vec![0usize; g.vertex_count];
        if colour_rec(&adj, &order, 0, k, 0, &mut colour) {
            return Ok(k);
        }
        k += 1;
    }
}

fn bfs_order(adj: &[Vec<Vertex>]) -> Vec<Vertex> {
    let mut seen = vec![false; adj.len()];
    let mut order = Vec::with_capacity(adj.len());
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Colours are 1-based, 0 means uncoloured. A new colour is opened only as `used + 1`,
/// which removes the colour-permutation symmetry (the first vertex always gets colour 1).
fn colour_rec(adj: &[Vec<Vertex>], order: &[Vertex], i: usize, k: usize, used: usize, colour: &mut [usize]) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for c in 1..=k.min(used + 1) {
        if adj[v].iter().all(|&w| colour[w] != c) {
            colour[v] = c;
            if colour_rec(adj, order, i + 1, k, used.max(c), colour) {
                return true;
            }
            colour[v] = 0;
        }
    }
    false
}

/// Least `k` admitting a proper edge colouring; parallel edges must differ.
pub fn brute_chromatic_index(g: &MultiGraph) -> Result<usize> {
    guard("chromatic index oracle", EDGE_GUARD, g.edges.len())?;
    if g.edges.is_empty() {
        return Ok(0);
    }
    let inc = g.incidence();
    let delta = inc.iter().map(Vec::len).max().unwrap_or(0);
    // edges in an order that keeps each new edge adjacent to coloured ones
    let mut order: Vec<usize> = Vec::with_capacity(g.edges.len());
    let mut placed = vec![false; g.edges.len()];
    for v in bfs_order(&g.simple_adjacency()) {
        for &(_, e) in &inc[v] {
            if !std::mem::replace(&mut placed[e], true) {
                order.push(e);
            }
        }
    }
    let mut k = delta;
    loop {
        let mut colour = vec![0usize; g.edges.len()];
        if edge_colour_rec(g, &inc, &order, 0, k, 0, &mut colour) {
            return Ok(k);
        }
        k += 1;
    }
}

fn edge_colour_rec(
    g: &MultiGraph,
    inc: &[Vec<(Vertex, usize)>],
    order: &[usize],
    i: usize,
    k: usize,
    used: usize,
    colour: &mut [usize],
) -> bool {
    if i == order.len() {
        return true;
    }
    let e = order[i];
    let (u, v) = g.edges[e];
    for c in 1..=k.min(used + 1) {
        let clash = inc[u].iter().chain(&inc[v]).any(|&(_, f)| f != e && colour[f] == c);
        if !clash {
            colour[e] = c;
            if edge_colour_rec(g, inc, order, i + 1, k, used.max(c), colour) {
                return true;
            }
            colour[e] = 0;
        }
    }
    false
}

/// Exact treewidth by branch and bound over elimination orderings. Parallel edges are
/// collapsed first. Lower bound: minimum degree of the remaining elimination graph
/// (a vertex of minimum degree must be eliminated at some point, with at least that many
/// neighbours); upper bound: greedy min-degree ordering.
pub fn exact_treewidth(g: &MultiGraph) -> Result<usize> {
    guard("treewidth oracle", TREEWIDTH_GUARD, g.vertex_count)?;
    let h = simplify(g);
    let n = h.vertex_count;
    if n <= 1 {
        return Ok(0);
    }
    let adj: Vec<u32> = h.simple_adjacency().iter().map(|ns| ns.iter().fold(0, |m, &w| m | 1 << w)).collect();
    let full: u32 = (1 << n) - 1;
    let mut search = TwSearch { adj: &adj, n, best: greedy_width(&adj, n), memo: HashMap::new() };
    search.run(0, 0, full);
    Ok(search.best)
}

/// Neighbours of `v` in the graph obtained by eliminating the vertex set `gone`:
/// vertices outside `gone` reachable from `v` through `gone`.
fn elim_neighbours(adj: &[u32], gone: u32, v: usize) -> u32 {
    let mut reach = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut out = 0u32;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[u] & !reach;
        out |= nb & !gone;
        let inner = nb & gone;
        reach |= nb;
        frontier |= inner;
    }
    out
}

fn greedy_width(adj: &[u32], n: usize) -> usize {
    let mut gone = 0u32;
    let mut width = 0;
    for _ in 0..n {
        let (v, d) = (0..n)
            .filter(|&v| gone & 1 << v == 0)
            .map(|v| (v, elim_neighbours(adj, gone, v).count_ones() as usize))
            .min_by_key(|&(_, d)| d)
            .expect("a vertex remains");
        width = width.max(d);
        gone |= 1 << v;
    }
    width
}

struct TwSearch<'a> {
    adj: &'a [u32],
    n: usize,
    best: usize,
    /// smallest width-so-far with which an eliminated set was already explored
    memo: HashMap<u32, usize>,
}

impl TwSearch<'_> {
    fn run(&mut self, gone: u32, so_far: usize, full: u32) {
        if so_far >= self.best {
            return;
        }
        let left = (full & !gone).count_ones() as usize;
        if left <= so_far + 1 {
            // the rest forms at most a clique of size so_far + 1
            self.best = so_far;
            return;
        }
        match self.memo.get(&gone) {
            Some(&w) if w <= so_far => return,
            _ => {
                self.memo.insert(gone, so_far);
            }
        }
        let degs: Vec<(usize, usize)> = (0..self.n)
            .filter(|&v| gone & 1 << v == 0)
            .map(|v| (v, elim_neighbours(self.adj, gone, v).count_ones() as usize))
            .collect();
        let min_deg = degs.iter().map(|&(_, d)| d).min().unwrap_or(0);
        if so_far.max(min_deg) >= self.best {
            return;
        }
        let mut cand = degs;
        cand.sort_by_key(|&(v, d)| (d, v));
        for (v, d) in cand {
            self.run(gone | 1 << v, so_far.max(d), full);
        }
    }
}

/// Size of a maximum clique (Bron-Kerbosch with pivoting).
pub fn max_clique(g: &MultiGraph) -> Result<usize> {
    guard("clique oracle", CLIQUE_GUARD, g.vertex_count)?;
    let adj: Vec<Vec<Vertex>> = g.simple_adjacency();
    let mut best = 0;
    bron_kerbosch(&adj, 0, (0..g.vertex_count).collect(), Vec::new(), &mut best);
    Ok(best)
}

fn bron_kerbosch(adj: &[Vec<Vertex>], size: usize, p: Vec<Vertex>, x: Vec<Vertex>, best: &mut usize) {
    if p.is_empty() {
        if x.is_empty() {
            *best = (*best).max(size);
        }
        return;
    }
    if size + p.len() <= *best {
        return;
    }
    let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|w| adj[u].contains(w)).count());
    let pivot = pivot.expect("p is nonempty");
    let mut p = p;
    let mut x = x;
    let todo: Vec<Vertex> = p.iter().copied().filter(|w| !adj[pivot].contains(w)).collect();
    for v in todo {
        let np = p.iter().copied().filter(|w| adj[v].contains(w)).collect();
        let nx = x.iter().copied().filter(|w| adj[v].contains(w)).collect();
        bron_kerbosch(adj, size + 1, np, nx, best);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Two-colourability by breadth-first search.
pub fn is_bipartite(g: &MultiGraph) -> bool {
    let adj = g.simple_adjacency();
    let mut side = vec![usize::MAX; g.vertex_count];
    for v in bfs_order(&adj) {
        if side[v] == usize::MAX {
            side[v] = 0;
        }
        for &w in &adj[v] {
            if side[w] == usize::MAX {
                side[w] = 1 - side[v];
            } else if side[w] == side[v] {
                return false;
            }
        }
    }
    true
}

/// Whether `cycle` lists every vertex exactly once and consecutive vertices (cyclically) are adjacent.
pub fn has_hamiltonian_cycle_witness(g: &MultiGraph, cycle: &[Vertex]) -> bool {
    let n = g.vertex_count;
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    if cycle.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return false;
    }
    let adj = g.simple_adjacency();
    (0..n).all(|i| adj[cycle[i]].binary_search(&cycle[(i + 1) % n]).is_ok())
}

/// Every vertex has a colour in `1..` and no edge is monochromatic.
pub fn is_proper_coloring(g: &MultiGraph, colour: &[usize]) -> bool {
    colour.len() == g.vertex_count
        && colour.iter().all(|&c| c > 0)
        && g.edges.iter().all(|&(u, v)| colour[u] != colour[v])
}

/// Every edge has a colour in `1..` and edges sharing an endpoint differ.
pub fn is_proper_edge_coloring(g: &MultiGraph, colour: &[usize]) -> bool {
    if colour.len() != g.edges.len() || colour.contains(&0) {
        return false;
    }
    g.incidence().iter().all(|es| {
        let mut cs: Vec<usize> = es.iter().map(|&(_, e)| colour[e]).collect();
        cs.sort_unstable();
        cs.windows(2).all(|w| w[0] != w[1])
    })
}

/// Whether the edges in `matching` are pairwise vertex-disjoint.
pub fn is_matching(g: &MultiGraph, matching: &[usize]) -> bool {
    let mut used = vec![false; g.vertex_count];
    matching.iter().all(|&e| {
        e < g.edges.len() && {
            let (u, v) = g.edges[e];
            !std::mem::replace(&mut used[u], true) && !std::mem::replace(&mut used[v], true)
        }
    })
}

/// Whether the edges in `cover` touch every vertex.
pub fn is_edge_cover(g: &MultiGraph, cover: &[usize]) -> bool {
    let mut hit = vec![false; g.vertex_count];
    for &e in cover {
        if e >= g.edges.len() {
            return false;
        }
        let (u, v) = g.edges[e];
        hit[u] = true;
        hit[v] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Multigraph isomorphism by backtracking with degree and neighbourhood refinement.
pub fn are_isomorphic(g: &MultiGraph, h: &MultiGraph) -> Result<bool> {
    guard("isomorphism oracle", ISOMORPHISM_GUARD, g.vertex_count.max(h.vertex_count))?;
    if g.vertex_count != h.vertex_count || g.edges.len() != h.edges.len() {
        return Ok(false);
    }
    let n = g.vertex_count;
    let mult = |m: &MultiGraph| {
        let mut t = vec![vec![0u8; n]; n];
        for &(u, v) in &m.edges {
            t[u][v] += 1;
            t[v][u] += 1;
        }
        t
    };
    let (mg, mh) = (mult(g), mult(h));
    let invariant = |t: &Vec<Vec<u8>>, v: usize| {
        let deg: usize = t[v].iter().map(|&c| c as usize).sum();
        let mut nd: Vec<usize> = (0..n)
            .filter(|&w| t[v][w] > 0)
            .map(|w| t[w].iter().map(|&c| c as usize).sum::<usize>() * 8 + t[v][w] as usize)
            .collect();
        nd.sort_unstable();
        (deg, nd)
    };
    let ig: Vec<_> = (0..n).map(|v| invariant(&mg, v)).collect();
    let ih: Vec<_> = (0..n).map(|v| invariant(&mh, v)).collect();
    let mut sg = ig.clone();
    let mut sh = ih.clone();
    sg.sort();
    sh.sort();
    if sg != sh {
        return Ok(false);
    }
    let order = bfs_order(&g.simple_adjacency());
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(iso_rec(&mg, &mh, &ig, &ih, &order, 0, &mut map, &mut used))
}

#[allow(clippy::too_many_arguments)]
fn iso_rec<I: PartialEq>(
    mg: &[Vec<u8>],
    mh: &[Vec<u8>],
    ig: &[I],
    ih: &[I],
    order: &[usize],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for w in 0..mh.len() {
        if used[w] || ig[v] != ih[w] {
            continue;
        }
        let consistent = order[..i].iter().all(|&u| mg[v][u] == mh[w][map[u]]);
        if consistent {
            map[v] = w;
            used[w] = true;
            if iso_rec(mg, mh, ig, ih, order, i + 1, map, used) {
                return true;
            }
            used[w] = false;
        }
    }
    map[v] = usize::MAX;
    false
}

/// Vertex connectivity is at least 3: connected, and no removal of one or two vertices disconnects.
pub fn is_three_connected(g: &MultiGraph) -> bool {
    let n = g.vertex_count;
    if n < 4 {
        return false;
    }
    let adj = g.simple_adjacency();
    let connected_without = |a: usize, b: usize| {
        let start = (0..n).find(|&v| v != a && v != b).expect("n >= 4");
        let mut seen = vec![false; n];
        seen[a] = true;
        seen[b] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - if a == b { 1 } else { 2 }
    };
    (0..n).all(|a| (a..n).all(|b| connected_without(a, b)))
}

/// Hourglass cubed: three hourglasses (two triangles sharing a vertex) joined cyclically.
/// Vertices `3i, 3i+1, 3i+2` are the left, centre and right vertex of copy `i`; the right
/// vertex of copy `i` is identified with the left vertex of copy `i+1`, leaving 9 vertices.
/// Each copy's triangles use the centre and a pair of wall vertices.
pub fn hourglass_cubed() -> MultiGraph {
    crate::treewidth::hourglass_cubed_model()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_edge_list;

    fn cycle(n: usize) -> MultiGraph {
        let text: String = (0..n).map(|i| format!("{} {}\n", i, (i + 1) % n)).collect();
        from_edge_list(&text).unwrap()
    }

    fn complete(n: usize) -> MultiGraph {
        let mut g = MultiGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn chromatic_number_small() {
        assert_eq!(brute_chromatic_number(&cycle(3)).unwrap(), 3);
        assert_eq!(brute_chromatic_number(&cycle(6)).unwrap(), 2);
        assert_eq!(brute_chromatic_number(&complete(5)).unwrap(), 5);
        assert!(brute_chromatic_number(&cycle(31)).is_err());
    }

    #[test]
    fn chromatic_index_small() {
        assert_eq!(brute_chromatic_index(&from_edge_list("0 1\n0 1").unwrap()).unwrap(), 2);
        assert_eq!(brute_chromatic_index(&from_edge_list("0 1\n0 2\n0 3\n0 4").unwrap()).unwrap(), 4);
        assert_eq!(brute_chromatic_index(&cycle(5)).unwrap(), 3);
        assert_eq!(brute_chromatic_index(&complete(4)).unwrap(), 3);
        // Petersen graph is class two
        let petersen = from_edge_list(
            "0 1\n1 2\n2 3\n3 4\n4 0\n0 5\n1 6\n2 7\n3 8\n4 9\n5 7\n7 9\n9 6\n6 8\n8 5",
        )
        .unwrap();
        assert_eq!(brute_chromatic_index(&petersen).unwrap(), 4);
    }

    #[test]
    fn treewidth_small() {
        assert_eq!(exact_treewidth(&from_edge_list("0 1\n1 2\n1 3\n3 4").unwrap()).unwrap(), 1);
        assert_eq!(exact_treewidth(&complete(4)).unwrap(), 3);
        assert_eq!(exact_treewidth(&cycle(7)).unwrap(), 2);
        let mut grid = MultiGraph::new(9);
        for r in 0..3 {
            for c in 0..3 {
                if c < 2 {
                    grid.add_edge(3 * r + c, 3 * r + c + 1).unwrap();
                }
                if r < 2 {
                    grid.add_edge(3 * r + c, 3 * r + c + 3).unwrap();
                }
            }
        }
        assert_eq!(exact_treewidth(&grid).unwrap(), 3);
        assert_eq!(exact_treewidth(&complete(7)).unwrap(), 6);
    }

    #[test]
    fn clique_and_bipartite() {
        assert_eq!(max_clique(&cycle(3)).unwrap(), 3);
        assert_eq!(max_clique(&cycle(8)).unwrap(), 2);
        assert_eq!(max_clique(&complete(6)).unwrap(), 6);
        assert!(!is_bipartite(&cycle(7)));
        assert!(is_bipartite(&cycle(8)));
    }

    #[test]
    fn checkers() {
        let c = cycle(4);
        assert!(is_proper_coloring(&c, &[1, 2, 1, 2]));
        assert!(!is_proper_coloring(&c, &[1, 1, 2, 2]));
        assert!(has_hamiltonian_cycle_witness(&c, &[0, 1, 2, 3]));
        assert!(!has_hamiltonian_cycle_witness(&c, &[0, 2, 1, 3]));
        assert!(is_proper_edge_coloring(&c, &[1, 2, 1, 2]));
        assert!(!is_proper_edge_coloring(&c, &[1, 1, 2, 2]));
        assert!(is_matching(&c, &[0, 2]));
        assert!(!is_matching(&c, &[0, 1]));
        assert!(is_edge_cover(&c, &[0, 2]));
    }

    #[test]
    fn hourglass_cubed_has_treewidth_five() {
        let h = hourglass_cubed();
        assert_eq!((h.vertex_count, h.edges.len()), (9, 18));
        assert_eq!(exact_treewidth(&h).unwrap(), 5);
    }

    #[test]
    fn isomorphism() {
        let a = from_edge_list("0 1\n1 2\n2 0\n0 3").unwrap();
        let b = from_edge_list("3 2\n2 1\n1 3\n1 0").unwrap();
        assert!(are_isomorphic(&a, &b).unwrap());
        let c = from_edge_list("0 1\n1 2\n2 3\n3 0").unwrap();
        assert!(!are_isomorphic(&a, &c).unwrap());
        let d = from_edge_list("0 1\n0 1\n1 2").unwrap();
        let e = from_edge_list("0 1\n1 2\n1 2").unwrap();
        assert!(are_isomorphic(&d, &e).unwrap());
        assert!(is_three_connected(&complete(4)));
        assert!(!is_three_connected(&cycle(5)));
    }
}
