//! Rotation systems on multigraphs and face tracing.
//!
//! A dart is `2 * edge + side`: side 0 leaves the edge's first endpoint, side 1 its second.

use crate::graph::{MultiGraph, Vertex};

pub type Dart = usize;
/// Cyclic order of outgoing darts at every vertex.
pub type Rotation = Vec<Vec<Dart>>;

pub fn dart_from(g: &MultiGraph, e: usize, v: Vertex) -> Dart {
    if g.edges[e].0 == v {
        2 * e
    } else {
        2 * e + 1
    }
}

pub fn dart_tail(g: &MultiGraph, d: Dart) -> Vertex {
    let (a, b) = g.edges[d / 2];
    if d.is_multiple_of(2) {
        a
    } else {
        b
    }
}

pub fn dart_head(g: &MultiGraph, d: Dart) -> Vertex {
    dart_tail(g, d ^ 1)
}

pub fn rotation_from_edge_orders(g: &MultiGraph, orders: &[Vec<usize>]) -> Rotation {
    orders
        .iter()
        .enumerate()
        .map(|(v, es)| es.iter().map(|&e| dart_from(g, e, v)).collect())
        .collect()
}

/// Checks that every dart appears exactly once, at its tail.
pub fn check_rotation(g: &MultiGraph, rot: &Rotation) -> Result<(), String> {
    if rot.len() != g.vertex_count {
        return Err(format!("rotation has {} vertices, graph {}", rot.len(), g.vertex_count));
    }
    let mut seen = vec![false; 2 * g.edges.len()];
    for (v, ds) in rot.iter().enumerate() {
        for &d in ds {
            if d >= seen.len() {
                return Err(format!("dart {d} out of range"));
            }
            if dart_tail(g, d) != v {
                return Err(format!("dart {d} listed at {v} but leaves {}", dart_tail(g, d)));
            }
            if std::mem::replace(&mut seen[d], true) {
                return Err(format!("dart {d} listed twice"));
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(d) => Err(format!("dart {d} missing")),
        None => Ok(()),
    }
}

/// Faces as dart cycles. The dart after `d` is the successor of `d`'s reverse in the
/// rotation at `d`'s head. Assumes `check_rotation` passed.
pub fn trace_faces(g: &MultiGraph, rot: &Rotation) -> Vec<Vec<Dart>> {
    let nd = 2 * g.edges.len();
    let mut succ = vec![0; nd];
    for ds in rot {
        for (i, &d) in ds.iter().enumerate() {
            succ[d] = ds[(i + 1) % ds.len()];
        }
    }
    let mut done = vec![false; nd];
    let mut faces = Vec::new();
    for start in 0..nd {
        if done[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !done[d] {
            done[d] = true;
            face.push(d);
            d = succ[d ^ 1];
        }
        faces.push(face);
    }
    faces
}

pub fn component_count(g: &MultiGraph) -> usize {
    let adj = g.simple_adjacency();
    let mut seen = vec![false; g.vertex_count];
    let mut count = 0;
    for s in 0..g.vertex_count {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Euler check for a connected graph: `V - E + F = 2`. Returns the face count.
pub fn euler_check(g: &MultiGraph, rot: &Rotation) -> Result<usize, String> {
    check_rotation(g, rot)?;
    if component_count(g) != 1 {
        return Err("graph is not connected".into());
    }
    let f = trace_faces(g, rot).len();
    let lhs = g.vertex_count as i64 - g.edges.len() as i64 + f as i64;
    if lhs == 2 {
        Ok(f)
    } else {
        Err(format!("V - E + F = {lhs}, not 2 (F = {f})"))
    }
}

/// Vertex sequence of a face: the tail of every dart.
pub fn face_vertices(g: &MultiGraph, face: &[Dart]) -> Vec<Vertex> {
    face.iter().map(|&d| dart_tail(g, d)).collect()
}

/// Whether `want` appears in `cycle` (each exactly once) in this cyclic order or its reverse.
/// Returns `Some(true)` for the given order, `Some(false)` for the reverse.
pub fn cyclic_order(cycle: &[Vertex], want: &[Vertex]) -> Option<bool> {
    let pos: Vec<usize> = want
        .iter()
        .map(|w| {
            let hits: Vec<usize> = cycle.iter().enumerate().filter(|(_, c)| *c == w).map(|(i, _)| i).collect();
            if hits.len() == 1 {
                Some(hits[0])
            } else {
                None
            }
        })
        .collect::<Option<_>>()?;
    let k = pos.len();
    let rank = |p: &[usize]| -> bool {
        // p is in cyclic increasing order iff at most one descent, counting the wrap-around
        (0..k).filter(|&i| p[i] > p[(i + 1) % k]).count() <= 1
    };
    let forward = rank(&pos);
    let rev: Vec<usize> = pos.iter().rev().copied().collect();
    if forward {
        Some(true)
    } else if rank(&rev) {
        Some(false)
    } else {
        None
    }
}

/// A graph with some edge pairs replaced by a crossing vertex. Crossing `k` becomes vertex
/// `n + k`. A crossed edge `e = (u, w)` keeps id `e` for its half `(u, c)` and gets a
/// fresh id for the half `(c, w)`.
#[derive(Clone, Debug)]
pub struct Planarization {
    pub graph: MultiGraph,
    pub base_vertices: usize,
    pub base_edges: usize,
    pub crossings: Vec<(usize, usize)>,
    second_half: std::collections::HashMap<usize, usize>,
}

impl Planarization {
    pub fn new(base: &MultiGraph, crossings: &[(usize, usize)]) -> Result<Planarization, String> {
        let n = base.vertex_count;
        let mut graph = MultiGraph::new(n + crossings.len());
        graph.edges = base.edges.clone();
        let mut second_half = std::collections::HashMap::new();
        for (k, &(e, f)) in crossings.iter().enumerate() {
            let c = n + k;
            for x in [e, f] {
                if x >= base.edges.len() {
                    return Err(format!("edge {x} out of range"));
                }
                if second_half.contains_key(&x) {
                    return Err(format!("edge {x} crossed twice"));
                }
                let (u, w) = base.edges[x];
                graph.edges[x] = (u, c);
                graph.edges.push((c, w));
                second_half.insert(x, graph.edges.len() - 1);
            }
        }
        Ok(Planarization {
            graph,
            base_vertices: n,
            base_edges: base.edges.len(),
            crossings: crossings.to_vec(),
            second_half,
        })
    }

    pub fn second_half(&self, e: usize) -> Option<usize> {
        self.second_half.get(&e).copied()
    }

    /// Dart leaving original endpoint `v` along base edge `e` (first half if crossed).
    pub fn end_dart(&self, e: usize, v: Vertex) -> Dart {
        match self.second_half.get(&e) {
            Some(&s) if self.graph.edges[e].0 != v => 2 * s + 1,
            _ => dart_from(&self.graph, e, v),
        }
    }

    /// Dart leaving the crossing vertex of `e` towards `e`'s first endpoint.
    pub fn towards_first(&self, e: usize) -> Option<Dart> {
        self.second_half.contains_key(&e).then_some(2 * e + 1)
    }

    pub fn towards_second(&self, e: usize) -> Option<Dart> {
        self.second_half.get(&e).map(|&s| 2 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_edge_list;

    #[test]
    fn triangle_has_two_faces() {
        let g = from_edge_list("0 1\n1 2\n2 0").unwrap();
        let rot = rotation_from_edge_orders(&g, &[vec![0, 2], vec![1, 0], vec![2, 1]]);
        assert_eq!(euler_check(&g, &rot), Ok(2));
    }

    #[test]
    fn k4_bad_rotation_fails() {
        let g = from_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        // planar: around 0 ccw 1,2,3 ; 1: 0,3,2 ; 2: 0,1,3 ; 3: 0,2,1
        let good = vec![vec![0, 1, 2], vec![0, 4, 3], vec![1, 3, 5], vec![2, 5, 4]];
        let rot = rotation_from_edge_orders(&g, &good);
        assert_eq!(euler_check(&g, &rot), Ok(4));
        let bad = vec![vec![0, 2, 1], vec![0, 4, 3], vec![1, 3, 5], vec![2, 5, 4]];
        let rot = rotation_from_edge_orders(&g, &bad);
        assert!(euler_check(&g, &rot).is_err());
    }

    #[test]
    fn cyclic_order_detects_direction() {
        assert_eq!(cyclic_order(&[5, 1, 7, 2, 9], &[1, 2, 9]), Some(true));
        assert_eq!(cyclic_order(&[5, 1, 7, 2, 9], &[9, 2, 1]), Some(false));
        assert_eq!(cyclic_order(&[1, 2, 3, 4], &[1, 3, 2, 4]), None);
        assert_eq!(cyclic_order(&[1, 2, 1, 3], &[1, 2, 3]), None);
    }
}
