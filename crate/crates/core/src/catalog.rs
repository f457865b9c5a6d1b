//! The 42 elementary tiles, loaded from a checked-in data file, and the tile operations
//! (join, wall inversion, cyclization).

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::embedding::{self, Rotation};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};
use crate::signature::{Frame, Picture, TileName};

pub const CATALOG_ENV: &str = "CRIT2_CATALOG";
const BUILTIN: &str = include_str!("../data/catalog.txt");

/// A 2-tile: a graph with an ordered left wall `(x1, x2)` and right wall `(y1, y2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub graph: MultiGraph,
    pub left_wall: [Vertex; 2],
    pub right_wall: [Vertex; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum WallRole {
    LeftWall1,
    LeftWall2,
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct VertexLabel {
    pub tile_index: usize,
    pub role: WallRole,
}

/// A cyclized graph with per-vertex provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: MultiGraph,
    pub labels: Vec<VertexLabel>,
}

impl Tile {
    pub fn validate(&self) -> Result<()> {
        let w = [self.left_wall[0], self.left_wall[1], self.right_wall[0], self.right_wall[1]];
        for (i, a) in w.iter().enumerate() {
            if *a >= self.graph.vertex_count {
                return Err(Error::InvalidVertex(*a));
            }
            if w[i + 1..].contains(a) {
                return Err(Error::Walls(format!("wall vertex {a} repeated")));
            }
        }
        Ok(())
    }
}

/// Disjoint union with `t1.y_i` identified with `t2.x_i`; `t1`'s vertices and edges come first.
pub fn join(t1: &Tile, t2: &Tile) -> Result<Tile> {
    t1.validate()?;
    t2.validate()?;
    let n1 = t1.graph.vertex_count;
    let mut map = vec![usize::MAX; t2.graph.vertex_count];
    map[t2.left_wall[0]] = t1.right_wall[0];
    map[t2.left_wall[1]] = t1.right_wall[1];
    let mut next = n1;
    for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut graph = MultiGraph::new(next);
    graph.edges.extend_from_slice(&t1.graph.edges);
    graph.edges.extend(t2.graph.edges.iter().map(|&(u, v)| (map[u], map[v])));
    Ok(Tile {
        graph,
        left_wall: t1.left_wall,
        right_wall: [map[t2.right_wall[0]], map[t2.right_wall[1]]],
    })
}

pub fn invert_right(t: &Tile) -> Tile {
    Tile { right_wall: [t.right_wall[1], t.right_wall[0]], ..t.clone() }
}

pub fn invert_left(t: &Tile) -> Tile {
    Tile { left_wall: [t.left_wall[1], t.left_wall[0]], ..t.clone() }
}

/// Identifies `x_i` with `y_i`. `labels` annotate the vertices of `t`; right-wall vertices
/// disappear and the rest are renumbered in order, keeping their labels.
pub fn cyclize(t: &Tile, labels: &[VertexLabel]) -> Result<LabeledGraph> {
    t.validate()?;
    let n = t.graph.vertex_count;
    if labels.len() != n {
        return Err(Error::Walls(format!("{} labels for {n} vertices", labels.len())));
    }
    let mut map = vec![usize::MAX; n];
    let mut kept = Vec::with_capacity(n);
    for v in 0..n {
        if v != t.right_wall[0] && v != t.right_wall[1] {
            map[v] = kept.len();
            kept.push(labels[v]);
        }
    }
    map[t.right_wall[0]] = map[t.left_wall[0]];
    map[t.right_wall[1]] = map[t.left_wall[1]];
    let mut graph = MultiGraph::new(kept.len());
    for &(u, v) in &t.graph.edges {
        graph.add_edge(map[u], map[v])?;
    }
    Ok(LabeledGraph { graph, labels: kept })
}

/// Token of a rotation system in a twist template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    /// The edge (or the segment of a crossed edge) at one of its original endpoints.
    End(usize),
    /// At a crossing vertex: the segment leading to the first endpoint of the edge.
    TowardsFirst(usize),
    /// At a crossing vertex: the segment leading to the second endpoint of the edge.
    TowardsSecond(usize),
}

/// Planarized drawing of a tile plus the preceding tile's single edge, with the
/// right wall order reversed. Vertex `n` is the foreign endpoint `p` of that edge,
/// `n + 1` and `n + 2` are the crossing vertices; edge `m` is the incoming edge `p x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistTemplate {
    pub crossings: [(usize, usize); 2],
    pub rotation: Vec<Vec<Segment>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileCatalogEntry {
    pub name: TileName,
    pub tile: Tile,
    pub vertex_names: Vec<String>,
    /// Cyclic order of incident edge ids at each vertex; walls lie on the outer face.
    pub planar_embedding: Vec<Vec<usize>>,
    pub top_path_letter: char,
    pub bottom_path_letter: char,
    pub has_double_edge_in_picture: bool,
    /// Corners of the picture area: top-left, top-right, bottom-left, bottom-right.
    pub corners: [Vertex; 4],
    /// Degree-one frame vertex (`y2`) and its edge, the single edge of the tile.
    pub single_edge: usize,
    pub twist: TwistTemplate,
    pub messy: bool,
}

impl TileCatalogEntry {
    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn vertex_count(&self) -> usize {
        self.tile.graph.vertex_count
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.tile.graph.edges
    }

    pub fn rotation(&self) -> Rotation {
        embedding::rotation_from_edge_orders(&self.tile.graph, &self.planar_embedding)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<TileCatalogEntry>,
}

impl Catalog {
    pub fn entry(&self, name: TileName) -> &TileCatalogEntry {
        &self.entries[name.index()]
    }

    pub fn entries(&self) -> &[TileCatalogEntry] {
        &self.entries
    }

    pub fn messy_pictures(&self) -> Vec<&'static str> {
        Picture::all()
            .filter(|&p| {
                self.entry(TileName { picture: p, frame: Frame::L }).messy
                    || self.entry(TileName { picture: p, frame: Frame::DL }).messy
            })
            .map(|p| p.name())
            .collect()
    }
}

static CATALOG: OnceLock<Catalog> = OnceLock::new();

fn load() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => std::fs::read_to_string(&path)
            .map_err(|e| Error::Catalog(format!("{}: {e}", path.to_string_lossy())))
            .and_then(|text| Catalog::parse(&text)),
        None => Catalog::parse(BUILTIN),
    }
}

/// Loads and validates the catalog up front so callers can report a bad override
/// instead of panicking later.
pub fn try_catalog() -> Result<&'static Catalog> {
    if let Some(c) = CATALOG.get() {
        return Ok(c);
    }
    let c = load()?;
    Ok(CATALOG.get_or_init(|| c))
}

/// The process-wide catalog: the file named by `CRIT2_CATALOG` if set, else the built-in data.
/// Panics if the catalog fails validation, since every computation depends on it.
pub fn catalog() -> &'static Catalog {
    CATALOG.get_or_init(|| {
        match load() {
            Ok(c) => c,
            Err(e) => panic!("tile catalog failed validation: {e}"),
        }
    })
}

pub fn builtin_catalog_text() -> &'static str {
    BUILTIN
}

pub fn elementary_tile(name: TileName) -> &'static TileCatalogEntry {
    catalog().entry(name)
}

struct FrameRecord {
    vertices: Vec<String>,
    black: HashMap<String, String>,
    edges: Vec<(String, String)>,
}

struct PictureRecord {
    letters: (char, char),
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

type Block = (String, String, Vec<String>);

fn blocks(text: &str) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "end" {
            let b = current.take().ok_or_else(|| Error::Catalog(format!("line {}: stray end", no + 1)))?;
            out.push(b);
            continue;
        }
        match current.as_mut() {
            Some(b) => b.2.push(line.to_string()),
            None => {
                let mut it = line.split_whitespace();
                let kind = it.next().unwrap_or_default().to_string();
                let name = it.next().ok_or_else(|| Error::Catalog(format!("line {}: missing name", no + 1)))?;
                current = Some((kind, name.to_string(), Vec::new()));
            }
        }
    }
    if let Some(b) = current {
        return Err(Error::Catalog(format!("record {} {} not terminated", b.0, b.1)));
    }
    Ok(out)
}

fn field<'a>(lines: &'a [String], key: &str) -> Result<Vec<&'a str>> {
    lines
        .iter()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.collect())
        })
        .ok_or_else(|| Error::Catalog(format!("missing field {key}")))
}

fn parse_edges(items: &[&str]) -> Result<Vec<(String, String)>> {
    items
        .iter()
        .map(|e| {
            e.split_once('-')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| Error::Catalog(format!("bad edge {e:?}")))
        })
        .collect()
}

fn rotation_lines(lines: &[String]) -> HashMap<String, Vec<String>> {
    lines
        .iter()
        .filter_map(|l| l.split_once(':'))
        .map(|(v, rest)| (v.trim().to_string(), rest.split_whitespace().map(str::to_string).collect()))
        .collect()
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let mut frames = HashMap::new();
        let mut pictures = HashMap::new();
        let mut embeddings = HashMap::new();
        let mut twists = HashMap::new();
        for (kind, name, lines) in blocks(text)? {
            let ctx = |e: Error| Error::Catalog(format!("{kind} {name}: {e}"));
            match kind.as_str() {
                "frame" => {
                    let vertices = field(&lines, "vertices").map_err(ctx)?.iter().map(|s| s.to_string()).collect();
                    let black = field(&lines, "black")
                        .map_err(ctx)?
                        .iter()
                        .filter_map(|kv| kv.split_once('='))
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .collect();
                    let walls = field(&lines, "walls").map_err(ctx)?;
                    if walls != ["x1", "x2", "y1", "y2"] {
                        return Err(Error::Catalog(format!("frame {name}: walls must be x1 x2 y1 y2")));
                    }
                    let edges = parse_edges(&field(&lines, "edges").map_err(ctx)?).map_err(ctx)?;
                    frames.insert(name, FrameRecord { vertices, black, edges });
                }
                "picture" => {
                    let letters = field(&lines, "letters").map_err(ctx)?;
                    let letter = |i: usize| letters.get(i).and_then(|s| s.chars().next()).unwrap_or('?');
                    let vertices = lines
                        .iter()
                        .find_map(|l| l.strip_prefix("vertices"))
                        .map(|r| r.split_whitespace().map(str::to_string).collect())
                        .unwrap_or_default();
                    let edges = parse_edges(&field(&lines, "edges").map_err(ctx)?).map_err(ctx)?;
                    pictures.insert(name, PictureRecord { letters: (letter(0), letter(1)), vertices, edges });
                }
                "embedding" => {
                    embeddings.insert(name, rotation_lines(&lines));
                }
                "twist" => {
                    let cross = field(&lines, "cross").map_err(ctx)?.iter().map(|s| s.to_string()).collect::<Vec<_>>();
                    twists.insert(name, (cross, rotation_lines(&lines)));
                }
                other => return Err(Error::Catalog(format!("unknown record kind {other:?}"))),
            }
        }
        let mut entries = Vec::with_capacity(42);
        for name in TileName::all() {
            let key = name.to_string();
            let frame = frames
                .get(name.frame.name())
                .ok_or_else(|| Error::Catalog(format!("missing frame {}", name.frame.name())))?;
            let picture = pictures
                .get(name.picture.name())
                .ok_or_else(|| Error::Catalog(format!("missing picture {}", name.picture.name())))?;
            let emb = embeddings.get(&key).ok_or_else(|| Error::Catalog(format!("missing embedding {key}")))?;
            let twist = twists.get(&key).ok_or_else(|| Error::Catalog(format!("missing twist {key}")))?;
            let entry = compose(name, frame, picture, emb, twist)
                .map_err(|e| Error::Catalog(format!("tile {key}: {e}")))?;
            entries.push(entry);
        }
        for e in &mut entries {
            e.messy = crate::treewidth::has_rooted_hourglass(
                &e.tile.graph,
                [e.tile.left_wall[0], e.tile.left_wall[1], e.tile.right_wall[0], e.tile.right_wall[1]],
            );
        }
        let cat = Catalog { entries };
        crate::catalog_check::validate(&cat)?;
        Ok(cat)
    }
}

fn compose(
    name: TileName,
    frame: &FrameRecord,
    picture: &PictureRecord,
    emb: &HashMap<String, Vec<String>>,
    twist: &(Vec<String>, HashMap<String, Vec<String>>),
) -> Result<TileCatalogEntry> {
    let mut names: Vec<String> = frame.vertices.clone();
    names.extend(picture.vertices.iter().cloned());
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != names.len() {
        return Err(Error::Catalog("duplicate vertex name".into()));
    }
    let resolve = |v: &str| -> Result<usize> {
        let v = frame.black.get(v).map(String::as_str).unwrap_or(v);
        index.get(v).copied().ok_or_else(|| Error::Catalog(format!("unknown vertex {v:?}")))
    };
    let mut graph = MultiGraph::new(names.len());
    for (a, b) in frame.edges.iter().chain(picture.edges.iter()) {
        graph.add_edge(resolve(a)?, resolve(b)?)?;
    }
    let w = |n: &str| resolve(n);
    let tile = Tile { graph, left_wall: [w("x1")?, w("x2")?], right_wall: [w("y1")?, w("y2")?] };
    tile.validate()?;
    let corners = [resolve("tl")?, resolve("tr")?, resolve("bl")?, resolve("br")?];

    let parse_edge = |tok: &str| -> Result<usize> {
        tok.parse::<usize>()
            .ok()
            .filter(|&e| e < tile.graph.edges.len())
            .ok_or_else(|| Error::Catalog(format!("bad edge token {tok:?}")))
    };
    let mut planar_embedding = vec![Vec::new(); names.len()];
    for (v, toks) in emb {
        let vi = index.get(v.as_str()).copied().ok_or_else(|| Error::Catalog(format!("unknown vertex {v:?}")))?;
        planar_embedding[vi] = toks.iter().map(|t| parse_edge(t)).collect::<Result<_>>()?;
    }

    let y2 = tile.right_wall[1];
    let incident: Vec<usize> =
        (0..tile.graph.edges.len()).filter(|&e| tile.graph.edges[e].0 == y2 || tile.graph.edges[e].1 == y2).collect();
    let single_edge = match incident.as_slice() {
        [e] => *e,
        _ => return Err(Error::Catalog("y2 must have exactly one incident edge".into())),
    };

    // Twist template: vertices 0..n, p = n, c0 = n + 1, c1 = n + 2; edge m is `in`.
    let n = names.len();
    let m = tile.graph.edges.len();
    let tw_vertex = |v: &str| -> Result<usize> {
        match v {
            "p" => Ok(n),
            "c0" => Ok(n + 1),
            "c1" => Ok(n + 2),
            _ => index.get(v).copied().ok_or_else(|| Error::Catalog(format!("unknown vertex {v:?}"))),
        }
    };
    let tw_edge = |t: &str| -> Result<usize> { if t == "in" { Ok(m) } else { parse_edge(t) } };
    let tw_token = |t: &str| -> Result<Segment> {
        if let Some(e) = t.strip_suffix('-') {
            Ok(Segment::TowardsFirst(tw_edge(e)?))
        } else if let Some(e) = t.strip_suffix('+') {
            Ok(Segment::TowardsSecond(tw_edge(e)?))
        } else {
            Ok(Segment::End(tw_edge(t)?))
        }
    };
    let (cross, rot) = twist;
    if cross.len() != 4 {
        return Err(Error::Catalog("twist needs two crossing pairs".into()));
    }
    let crossings = [(tw_edge(&cross[0])?, tw_edge(&cross[1])?), (tw_edge(&cross[2])?, tw_edge(&cross[3])?)];
    let mut rotation = vec![Vec::new(); n + 3];
    for (v, toks) in rot {
        rotation[tw_vertex(v)?] = toks.iter().map(|t| tw_token(t)).collect::<Result<_>>()?;
    }

    Ok(TileCatalogEntry {
        name,
        tile,
        vertex_names: names,
        planar_embedding,
        top_path_letter: picture.letters.0,
        bottom_path_letter: picture.letters.1,
        has_double_edge_in_picture: name.picture.name().contains('B'),
        corners,
        single_edge,
        twist: TwistTemplate { crossings, rotation },
        messy: false,
    })
}
