//! Edge colouring through edge propagations.
//!
//! Cutting a member between two tiles separates the single edge `z-y2` of the left tile (it
//! meets the next tile at `x1`) and the edges of the left tile at `y1` (they meet the next tile
//! at `x2`). A boundary state is therefore a colour and a set of colours, written `1/12`: the
//! single edge has colour 1 and the `y1` edges use {1, 2}. A tile propagates an input state
//! (from its predecessor) to an output state whenever some proper colouring of its own edges
//! avoids the input colours at its left wall and shows the output at its right wall.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::builder::{build, Built};
use crate::catalog::{catalog, TileCatalogEntry};
use crate::error::{Error, Result};
use crate::graph::max_degree_raw;
use crate::signature::{Frame, Signature, TileName};

/// Largest palette the tables support.
pub const MAX_COLOURS: usize = 7;

/// Colour of the single edge and the colour set at the other wall vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Boundary {
    pub single: u8,
    pub set: u16,
}

impl Boundary {
    pub fn arity(self) -> usize {
        self.set.count_ones() as usize
    }

    fn colours(self) -> u16 {
        self.set | 1 << self.single
    }

    fn map(self, perm: &[u8]) -> Boundary {
        let set = (0..16).filter(|&c| self.set & 1 << c != 0).fold(0u16, |m, c| m | 1 << perm[c]);
        Boundary { single: perm[self.single as usize], set }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/", self.single)?;
        for c in (0..16).filter(|&c| self.set & 1 << c != 0) {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Boundary> {
        let bad = || Error::Parse(format!("boundary {s:?}"));
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let single = a.trim().parse::<u8>().map_err(|_| bad())?;
        let mut set = 0u16;
        for ch in b.trim().chars() {
            let c = ch.to_digit(10).ok_or_else(bad)?;
            set |= 1 << c;
        }
        if single > 9 || set == 0 {
            return Err(bad());
        }
        Ok(Boundary { single, set })
    }
}

/// Relabels colours so that colours with the same role in every boundary coincide, ordered by
/// role (single edge before set membership, earlier boundaries first). Returns the relabelled
/// boundaries and the map old colour -> new colour.
fn canonical(parts: &[Boundary]) -> (Vec<Boundary>, [u8; 16]) {
    let used = parts.iter().fold(0u16, |m, b| m | b.colours());
    let key = |c: usize| -> Vec<bool> {
        parts.iter().flat_map(|b| [b.single as usize == c, b.set & 1 << c != 0]).collect()
    };
    let mut cols: Vec<usize> = (0..16).filter(|&c| used & 1 << c != 0).collect();
    cols.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));
    let mut perm = [0u8; 16];
    for (i, &c) in cols.iter().enumerate() {
        perm[c] = i as u8 + 1;
    }
    (parts.iter().map(|b| b.map(&perm)).collect(), perm)
}

/// A propagation `input -> output` in canonical colours, e.g. `1/12->2/123`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePattern {
    pub input: Boundary,
    pub output: Boundary,
}

impl EdgePattern {
    pub fn of(input: Boundary, output: Boundary) -> EdgePattern {
        let (c, _) = canonical(&[input, output]);
        EdgePattern { input: c[0], output: c[1] }
    }
}

impl fmt::Display for EdgePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.input, self.output)
    }
}

impl FromStr for EdgePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<EdgePattern> {
        let (a, b) = s
            .split_once("->")
            .or_else(|| s.split_once('→'))
            .ok_or_else(|| Error::Parse(format!("edge propagation {s:?}")))?;
        Ok(EdgePattern::of(a.parse()?, b.parse()?))
    }
}

/// Named propagations.
pub const P2: &str = "1/12->1/12";
pub const P23: &str = "1/12->2/123";
pub const P3: &str = "1/123->2/123";
pub const P32A: &str = "1/123->1/12";
pub const P32B: &str = "1/123->2/12";
pub const PW: &str = "1/12->3/13";
pub const PS: &str = "1/12->1/13";

/// Number of edges at `y1` inside the tile: the arity of its output.
pub fn right_arity(name: TileName) -> usize {
    if name.frame == Frame::L && matches!(name.picture.top_letter(), 'A' | 'D') {
        3
    } else {
        2
    }
}

/// Feasible propagations of one tile with `k` colours when its predecessor shows
/// `left_arity` colours at the shared wall.
#[derive(Clone, Debug)]
pub struct EdgePropagationTable {
    pub tile: TileName,
    pub k: usize,
    pub left_arity: usize,
    pub right_arity: usize,
    pub patterns: BTreeSet<EdgePattern>,
    /// For each pattern, a colouring of the tile's catalog edges in the pattern's colours.
    witness: HashMap<EdgePattern, Vec<u8>>,
}

impl EdgePropagationTable {
    pub fn contains(&self, p: &str) -> bool {
        p.parse::<EdgePattern>().is_ok_and(|p| self.patterns.contains(&p))
    }

    pub fn witness(&self, p: &EdgePattern) -> Option<&[u8]> {
        self.witness.get(p).map(Vec::as_slice)
    }

    /// Patterns whose input is `input` (canonical colours).
    fn from_input(&self, input: Boundary) -> impl Iterator<Item = &EdgePattern> {
        self.patterns.iter().filter(move |p| p.input == input)
    }
}

struct TileEdges<'a> {
    e: &'a TileCatalogEntry,
    x1: usize,
    x2: usize,
    y1: usize,
}

impl<'a> TileEdges<'a> {
    fn new(e: &'a TileCatalogEntry) -> Self {
        let [x1, x2] = e.tile.left_wall;
        TileEdges { e, x1, x2, y1: e.tile.right_wall[0] }
    }

    /// A proper colouring of the tile's edges with colours `1..=k` that avoids the input at the
    /// left wall and shows exactly `output` at the right wall.
    fn solve(&self, k: usize, input: Boundary, output: Boundary) -> Option<Vec<u8>> {
        let edges = self.e.edges();
        let n = self.e.vertex_count();
        let mut forbid = vec![0u16; n];
        forbid[self.x1] |= 1 << input.single;
        forbid[self.x2] |= input.set;
        let mut allowed = vec![(1u16 << (k + 1)) - 2; edges.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            allowed[i] &= !(forbid[u] | forbid[v]);
            if i == self.e.single_edge {
                allowed[i] &= 1 << output.single;
            }
            if u == self.y1 || v == self.y1 {
                allowed[i] &= output.set;
            }
        }
        let y1_edges = edges.iter().filter(|&&(u, v)| u == self.y1 || v == self.y1).count();
        if y1_edges != output.arity() {
            return None;
        }
        let mut colour = vec![0u8; edges.len()];
        let mut at = vec![0u16; n];
        self.search(0, &allowed, &mut colour, &mut at).then_some(colour)
    }

    fn search(&self, i: usize, allowed: &[u16], colour: &mut [u8], at: &mut [u16]) -> bool {
        let edges = self.e.edges();
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        let free = allowed[i] & !at[u] & !at[v];
        for c in (1..16).filter(|&c| free & 1 << c != 0) {
            colour[i] = c as u8;
            at[u] |= 1 << c;
            at[v] |= 1 << c;
            if self.search(i + 1, allowed, colour, at) {
                return true;
            }
            at[u] &= !(1 << c);
            at[v] &= !(1 << c);
        }
        false
    }
}

fn subsets(k: usize, size: usize) -> Vec<u16> {
    (0u16..1 << (k + 1)).filter(|m| m & 1 == 0 && m.count_ones() as usize == size).collect()
}

fn compute_table(tile: TileName, k: usize, left_arity: usize) -> EdgePropagationTable {
    let e = catalog().entry(tile);
    let te = TileEdges::new(e);
    let ra = right_arity(tile);
    let mut patterns = BTreeSet::new();
    let mut witness = HashMap::new();
    // canonical inputs: single colour inside or outside the set
    let inputs = [
        Boundary { single: 1, set: (1..=left_arity).fold(0, |m, c| m | 1 << c) },
        Boundary { single: 1, set: (2..=left_arity + 1).fold(0, |m, c| m | 1 << c) },
    ];
    for input in inputs {
        if input.colours() >> (k + 1) != 0 {
            continue;
        }
        let mut tried = BTreeSet::new();
        for single in 1..=k as u8 {
            for set in subsets(k, ra) {
                let output = Boundary { single, set };
                let p = EdgePattern::of(input, output);
                if p.input != input || !tried.insert(p) {
                    continue;
                }
                if let Some(c) = te.solve(k, p.input, p.output) {
                    patterns.insert(p);
                    witness.insert(p, c);
                }
            }
        }
    }
    EdgePropagationTable { tile, k, left_arity, right_arity: ra, patterns, witness }
}

type TableKey = (TileName, usize, usize);

fn table(tile: TileName, k: usize, left_arity: usize) -> &'static EdgePropagationTable {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, &'static EdgePropagationTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache").get(&(tile, k, left_arity)) {
        return t;
    }
    // computed outside the lock; a racing duplicate is harmless
    let t: &'static EdgePropagationTable = Box::leak(Box::new(compute_table(tile, k, left_arity)));
    cache.lock().expect("table cache").entry((tile, k, left_arity)).or_insert(t)
}

/// Exact propagation table of `name` with `k` colours and the given wall arities.
pub fn tile_edge_propagations(
    name: TileName,
    k: usize,
    left_arity: usize,
    right: usize,
) -> Result<&'static EdgePropagationTable> {
    if !(1..=MAX_COLOURS).contains(&k) {
        return Err(Error::Arity(format!("k = {k} is outside 1..={MAX_COLOURS}")));
    }
    if !(2..=3).contains(&left_arity) {
        return Err(Error::Arity(format!("left arity {left_arity} is not 2 or 3")));
    }
    if right != right_arity(name) {
        return Err(Error::Arity(format!("{name} has right arity {}, not {right}", right_arity(name))));
    }
    Ok(table(name, k, left_arity))
}

/// Boundary DP around the cycle with `k` colours. The state is the canonical form of the
/// (start boundary, current boundary) pair; the cycle closes when they coincide.
fn edge_dp(built: &Built, k: usize) -> Option<Vec<u8>> {
    let s = &built.signature;
    let n = s.len();
    if k > MAX_COLOURS {
        return None;
    }
    let arity = |i: usize| right_arity(s.tile(i));
    let a0 = arity(n - 1);
    for start in [
        Boundary { single: 1, set: (1..=a0).fold(0, |m, c| m | 1 << c) },
        Boundary { single: 1, set: (2..=a0 + 1).fold(0, |m, c| m | 1 << c) },
    ] {
        if start.colours() >> (k + 1) != 0 {
            continue;
        }
        // layers[i]: reachable (start, current) classes after tile i, with predecessor
        let mut layers: Vec<BTreeMap<(Boundary, Boundary), ((Boundary, Boundary), EdgePattern)>> = Vec::with_capacity(n);
        let mut frontier: BTreeSet<(Boundary, Boundary)> = BTreeSet::from([(start, start)]);
        for i in 0..n {
            let t = table(s.tile(i), k, arity((i + n - 1) % n));
            let mut next = BTreeMap::new();
            for &(b0, cur) in &frontier {
                for (out, p) in successors(t, b0, cur, k) {
                    let (c, _) = canonical(&[b0, out]);
                    next.entry((c[0], c[1])).or_insert(((b0, cur), p));
                }
            }
            frontier = next.keys().copied().collect();
            layers.push(next);
        }
        let (c, _) = canonical(&[start, start]);
        let goal = (c[0], c[1]);
        if !layers[n - 1].contains_key(&goal) {
            continue;
        }
        // walk back to the chosen class sequence
        let mut classes = vec![goal; n + 1];
        let mut pats = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let (prev, p) = layers[i][&classes[i + 1]];
            classes[i] = prev;
            pats.push(p);
        }
        pats.reverse();
        return Some(replay(built, k, start, &classes, &pats));
    }
    None
}

/// Concrete outputs reachable from `cur`, given start boundary `b0`, with the pattern used.
/// Colours new to the pattern are tried on unused colours up to symmetry: colours absent
/// from both `b0` and `cur` are interchangeable, so only the smallest few are offered.
fn successors(t: &EdgePropagationTable, b0: Boundary, cur: Boundary, k: usize) -> Vec<(Boundary, EdgePattern)> {
    let (ci, perm) = canonical(&[cur]);
    let mut inv = [0u8; 16];
    for (c, &p) in perm.iter().enumerate() {
        if p != 0 {
            inv[p as usize] = c as u8;
        }
    }
    let taken = cur.colours();
    let reserved = b0.colours() & !taken;
    let fresh: Vec<u8> = (1..=k as u8).filter(|&c| (taken | reserved) & 1 << c == 0).collect();
    let mut out = Vec::new();
    for p in t.from_input(ci[0]) {
        let extra: Vec<u8> = (1..16u8).filter(|&c| p.output.colours() & !p.input.colours() & 1 << c != 0).collect();
        let mut pool: Vec<u8> = (1..=k as u8).filter(|&c| reserved & 1 << c != 0).collect();
        pool.extend(fresh.iter().take(extra.len()));
        let mut choice = vec![0u8; extra.len()];
        assign(&extra, &pool, 0, &mut choice, &mut |choice| {
            let mut m = inv;
            for (j, &c) in extra.iter().enumerate() {
                m[c as usize] = choice[j];
            }
            out.push((p.output.map(&m), *p));
        });
    }
    out
}

fn assign(extra: &[u8], pool: &[u8], i: usize, choice: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
    if i == extra.len() {
        f(choice);
        return;
    }
    for &c in pool {
        if !choice[..i].contains(&c) {
            choice[i] = c;
            assign(extra, pool, i + 1, choice, f);
        }
    }
}

/// Turns a class sequence into concrete colours, tile by tile, from the fixed start boundary.
fn replay(built: &Built, k: usize, start: Boundary, classes: &[(Boundary, Boundary)], pats: &[EdgePattern]) -> Vec<u8> {
    let s = &built.signature;
    let n = s.len();
    let mut colours = vec![0u8; built.graph().edge_count()];
    let mut cur = start;
    for i in 0..n {
        let t = table(s.tile(i), k, right_arity(s.tile((i + n - 1) % n)));
        let want = classes[i + 1];
        let (out, p) = successors(t, start, cur, k)
            .into_iter()
            .find(|(out, p)| {
                let (c, _) = canonical(&[start, *out]);
                *p == pats[i] && (c[0], c[1]) == want
            })
            .expect("recorded transition is reproducible");
        // pattern colour -> concrete colour
        let (_, perm) = canonical(&[cur, out]);
        let mut m = [0u8; 16];
        for c in 0..16 {
            if perm[c] != 0 {
                m[perm[c] as usize] = c as u8;
            }
        }
        let unused: Vec<u8> = (1..=k as u8).filter(|&c| !m.contains(&c)).collect();
        // colours the witness uses beyond the pattern take any remaining colour
        let w = t.witness(&p).expect("pattern has a witness");
        let mut spare = unused.into_iter();
        for (j, &c) in w.iter().enumerate() {
            if m[c as usize] == 0 {
                m[c as usize] = spare.next().expect("enough colours");
            }
            colours[built.edge(i, j)] = m[c as usize];
        }
        cur = out;
    }
    colours
}

/// Chromatic index of `build(s)`: the maximum degree when the DP finds a colouring with that
/// many colours (always, from five tiles on), else one more.
pub fn chromatic_index(s: &Signature) -> usize {
    let built = build(s);
    let delta = max_degree_raw(built.graph());
    if s.len() >= 5 || edge_dp(&built, delta).is_some() {
        delta
    } else {
        delta + 1
    }
}

/// A proper edge colouring of `build(s)` (colours from 1, indexed by edge id) with
/// `chromatic_index(s)` colours.
pub fn construct_edge_coloring(s: &Signature) -> Result<Vec<u8>> {
    let built = build(s);
    let delta = max_degree_raw(built.graph());
    if let Some(c) = edge_dp(&built, delta) {
        return Ok(c);
    }
    if s.len() >= 5 {
        return Err(Error::Infeasible(format!("no {delta}-edge-colouring found for {s}")));
    }
    edge_dp(&built, delta + 1).ok_or_else(|| Error::Infeasible(format!("no {}-edge-colouring found for {s}", delta + 1)))
}

/// Colouring with exactly `k` colours, if the DP finds one.
pub fn edge_coloring_with(s: &Signature, k: usize) -> Option<Vec<u8>> {
    edge_dp(&build(s), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_proper_edge_coloring;
    use crate::signature::tokenize;

    fn name(s: &str) -> TileName {
        tokenize(&format!("{s}{s}{s}")).unwrap().tile(0)
    }

    #[test]
    fn pattern_text_roundtrip() {
        for p in [P2, P23, P3, P32A, P32B, PW, PS] {
            assert_eq!(p.parse::<EdgePattern>().unwrap().to_string(), p);
        }
        assert_eq!("2/21→2/12".parse::<EdgePattern>().unwrap().to_string(), P2);
    }

    fn t(n: &str, k: usize, la: usize) -> &'static EdgePropagationTable {
        tile_edge_propagations(name(n), k, la, right_arity(name(n))).unwrap()
    }

    #[test]
    fn named_propagations() {
        assert!(t("DDdL", 5, 2).contains(P2));
        assert!(t("DDL", 5, 2).contains(P23));
        assert!(t("DVL", 5, 3).contains(P3));
        assert!(t("VVL", 5, 3).contains(P32A));
        assert!(t("VVL", 5, 3).contains(P32B));
        assert!(t("BVL", 4, 2).contains(PW));
        assert!(t("HL", 4, 2).contains(PS));
    }

    #[test]
    fn degree_four_exceptions_and_whimsical_tiles() {
        for n in ["VVL", "BBL", "VBdL", "BVdL"] {
            assert!(!t(n, 4, 2).contains(P2), "{n}");
            assert!(t(n, 5, 2).contains(P2), "{n}");
        }
        for n in ["BVL", "VVdL"] {
            assert!(t(n, 4, 2).contains(PW) && !t(n, 4, 2).contains(PS), "{n}");
        }
        for n in ["VBL", "BBL", "HL", "VBdL", "BVdL", "BBdL", "HdL"] {
            assert!(t(n, 4, 2).contains(PS), "{n}");
        }
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(tile_edge_propagations(name("DDL"), 5, 2, 2), Err(Error::Arity(_))));
        assert!(matches!(tile_edge_propagations(name("DDL"), 8, 2, 3), Err(Error::Arity(_))));
    }

    #[test]
    fn example_coloring() {
        let s = tokenize("VIAdLAALAALDBLHdL").unwrap();
        let c = construct_edge_coloring(&s).unwrap();
        let g = build(&s);
        let cu: Vec<usize> = c.iter().map(|&x| x as usize).collect();
        assert!(is_proper_edge_coloring(g.graph(), &cu));
        assert_eq!(c.iter().max().copied(), Some(6));
        assert_eq!(chromatic_index(&s), 6);
    }
}
