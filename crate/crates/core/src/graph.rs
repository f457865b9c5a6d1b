//! Loopless multigraph with stable edge ids.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Undirected multigraph. The position of an edge in `edges` is its id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    #[serde(rename = "n")]
    pub vertex_count: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize) -> Self {
        MultiGraph { vertex_count, edges: Vec::new() }
    }

    pub fn from_edges(vertex_count: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut g = MultiGraph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        if u == v {
            return Err(Error::Loop(u));
        }
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidVertex(u.max(v)));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incidence lists: for every vertex the (neighbour, edge id) pairs in edge order.
    pub fn incidence(&self) -> Vec<Vec<(Vertex, EdgeId)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((v, e));
            inc[v].push((u, e));
        }
        inc
    }

    /// Sorted, deduplicated neighbour lists.
    pub fn simple_adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.simple_adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
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
        count == self.vertex_count
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(s, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.vertex_count, "edges": self.edges })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: MultiGraph =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        MultiGraph::from_edges(raw.vertex_count, raw.edges)
    }
}

/// Parses lines of the form `u v`; blank lines and `#` comments are skipped.
pub fn from_edge_list(text: &str) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {}: expected \"u v\", got {line:?}", lineno + 1));
        if parts.len() != 2 {
            return Err(bad());
        }
        let u: usize = parts[0].parse().map_err(|_| bad())?;
        let v: usize = parts[1].parse().map_err(|_| bad())?;
        if u == v {
            return Err(Error::Loop(u));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = max_id.ok_or(Error::EmptyInput)? + 1;
    MultiGraph::from_edges(n, edges)
}

pub fn max_degree_raw(g: &MultiGraph) -> usize {
    g.degrees().into_iter().max().unwrap_or(0)
}

/// Induced subgraph on the vertices within distance `r` of `v`.
/// Returns the subgraph and the map from its vertex ids back to `g`.
pub fn bfs_ball(g: &MultiGraph, v: Vertex, r: usize) -> Result<(MultiGraph, Vec<Vertex>)> {
    if v >= g.vertex_count {
        return Err(Error::InvalidVertex(v));
    }
    let adj = g.simple_adjacency();
    let ball = ball_vertices(&adj, &[v], r, &|_| true);
    Ok(induced(g, &ball))
}

/// Vertices within distance `r` of any source, walking only through vertices accepted by `keep`.
pub fn ball_vertices(
    adj: &[Vec<Vertex>],
    sources: &[Vertex],
    r: usize,
    keep: &dyn Fn(Vertex) -> bool,
) -> Vec<Vertex> {
    let mut dist = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if keep(s) && !dist.contains_key(&s) {
            dist.insert(s, 0usize);
            queue.push_back(s);
        }
    }
    let mut order = Vec::new();
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let d = dist[&u];
        if d == r {
            continue;
        }
        for &w in &adj[u] {
            if keep(w) && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    order
}

/// Induced subgraph on `vertices` (in the given order) plus the back-map.
pub fn induced(g: &MultiGraph, vertices: &[Vertex]) -> (MultiGraph, Vec<Vertex>) {
    let mut local = std::collections::HashMap::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        local.insert(v, i);
    }
    let mut h = MultiGraph::new(vertices.len());
    for &(u, v) in &g.edges {
        if let (Some(&a), Some(&b)) = (local.get(&u), local.get(&v)) {
            h.edges.push((a, b));
        }
    }
    (h, vertices.to_vec())
}

/// Collapses parallel edges.
pub fn simplify(g: &MultiGraph) -> MultiGraph {
    let mut seen = std::collections::HashSet::new();
    let mut h = MultiGraph::new(g.vertex_count);
    for &(u, v) in &g.edges {
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            h.edges.push(key);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_parallel_edges() {
        let g = from_edge_list("0 1\n1 2\n0 1").unwrap();
        assert_eq!(g.vertex_count, 3);
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn rejects_empty_and_loops() {
        assert!(matches!(from_edge_list(""), Err(Error::EmptyInput)));
        assert!(matches!(from_edge_list("0 0"), Err(Error::Loop(0))));
        assert!(matches!(from_edge_list("0 x"), Err(Error::Parse(_))));
    }

    #[test]
    fn ball_on_path_and_cycle() {
        let path = from_edge_list("0 1\n1 2\n2 3").unwrap();
        let (b, map) = bfs_ball(&path, 0, 1).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(b.edges.len(), 1);
        let (b, _) = bfs_ball(&path, 2, 0).unwrap();
        assert_eq!((b.vertex_count, b.edges.len()), (1, 0));
        let cyc: String = (0..8).map(|i| format!("{} {}\n", i, (i + 1) % 8)).collect();
        let cyc = from_edge_list(&cyc).unwrap();
        let (b, _) = bfs_ball(&cyc, 0, 8).unwrap();
        assert_eq!((b.vertex_count, b.edges.len()), (8, 8));
        assert!(bfs_ball(&cyc, 9, 1).is_err());
    }

    #[test]
    fn degrees_count_parallels() {
        let g = from_edge_list("0 1\n0 1").unwrap();
        assert_eq!(max_degree_raw(&g), 2);
        let tri = from_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!(max_degree_raw(&tri), 2);
        assert_eq!(max_degree_raw(&MultiGraph::new(0)), 0);
    }

    #[test]
    fn edge_list_roundtrip() {
        let text = "0 1\n1 2\n0 1\n";
        assert_eq!(from_edge_list(text).unwrap().to_edge_list(), text);
        let g = from_edge_list(text).unwrap();
        assert_eq!(MultiGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
