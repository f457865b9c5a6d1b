//! Tile names and signatures.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const PICTURES: [&str; 21] = [
    "DD", "DV", "DB", "DA", "VD", "VV", "VB", "VA", "BD", "BV", "BB", "BA", "AD", "AV", "AB", "AA",
    "VIA", "AIV", "BIA", "AIB", "H",
];

/// One of the 21 pictures, stored as an index into [`PICTURES`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Picture(u8);

impl Picture {
    pub fn from_name(name: &str) -> Option<Picture> {
        PICTURES.iter().position(|p| *p == name).map(|i| Picture(i as u8))
    }

    pub fn all() -> impl Iterator<Item = Picture> {
        (0..PICTURES.len() as u8).map(Picture)
    }

    pub fn name(self) -> &'static str {
        PICTURES[self.0 as usize]
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn has_identification(self) -> bool {
        self.name().contains('I')
    }

    pub fn is_h(self) -> bool {
        self.name() == "H"
    }

    /// The picture with its top and bottom paths exchanged.
    pub fn swapped(self) -> Picture {
        let reversed: String = self.name().chars().rev().collect();
        Picture::from_name(&reversed).expect("every picture has a swapped counterpart")
    }

    /// Letter of the top path; `H` is its own top and bottom letter.
    pub fn top_letter(self) -> char {
        self.name().chars().next().unwrap()
    }

    pub fn bottom_letter(self) -> char {
        self.name().chars().last().unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    L,
    DL,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::L => "L",
            Frame::DL => "dL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TileName {
    pub picture: Picture,
    pub frame: Frame,
}

impl TileName {
    pub fn new(picture: &str, frame: Frame) -> Result<TileName> {
        let picture =
            Picture::from_name(picture).ok_or_else(|| Error::UnknownPicture(picture.to_string()))?;
        Ok(TileName { picture, frame })
    }

    /// All 42 tiles, L-frames first, pictures in catalog order.
    pub fn all() -> Vec<TileName> {
        [Frame::L, Frame::DL]
            .into_iter()
            .flat_map(|frame| Picture::all().map(move |picture| TileName { picture, frame }))
            .collect()
    }

    /// Dense index in `0..42` matching the order of [`TileName::all`].
    pub fn index(self) -> usize {
        (self.frame as usize) * PICTURES.len() + self.picture.index()
    }

    pub fn from_index(i: usize) -> TileName {
        let frame = if i < PICTURES.len() { Frame::L } else { Frame::DL };
        TileName { picture: Picture((i % PICTURES.len()) as u8), frame }
    }
}

impl Serialize for TileName {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl fmt::Display for TileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.picture.name(), self.frame.name())
    }
}

impl Ord for TileName {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.picture.name(), self.frame.name()).cmp(&(other.picture.name(), other.frame.name()))
    }
}

impl PartialOrd for TileName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for TileName {
    type Err = Error;

    fn from_str(s: &str) -> Result<TileName> {
        if let Some(p) = s.strip_suffix("dL") {
            TileName::new(p, Frame::DL)
        } else if let Some(p) = s.strip_suffix('L') {
            TileName::new(p, Frame::L)
        } else {
            Err(Error::UnknownTile(s.to_string()))
        }
    }
}

/// Odd-length (at least 3) cyclic sequence of tile names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    tiles: Vec<TileName>,
}

impl Signature {
    pub fn new(tiles: Vec<TileName>) -> Result<Signature> {
        if tiles.len() < 3 || tiles.len().is_multiple_of(2) {
            return Err(Error::TileCount(tiles.len()));
        }
        Ok(Signature { tiles })
    }

    pub fn tiles(&self) -> &[TileName] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Tile `i` taken cyclically.
    pub fn tile(&self, i: usize) -> TileName {
        self.tiles[i % self.tiles.len()]
    }

    pub fn rotate(&self, k: usize) -> Signature {
        let mut tiles = self.tiles.clone();
        tiles.rotate_left(k % self.tiles.len());
        Signature { tiles }
    }

    /// `n` copies of `unit` concatenated; `n * unit.len()` must be odd and at least 3.
    pub fn power(unit: &str, n: usize) -> Result<Signature> {
        tokenize(&unit.repeat(n))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tiles {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Signature> {
        tokenize(s)
    }
}

/// Splits `text` after every `L`; whitespace is ignored.
pub fn tokenize(text: &str) -> Result<Signature> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut tiles = Vec::new();
    let mut rest = compact.as_str();
    while let Some(pos) = rest.find('L') {
        let (chunk, tail) = rest.split_at(pos + 1);
        let (picture, frame) = match chunk.strip_suffix("dL") {
            Some(p) => (p, Frame::DL),
            None => (&chunk[..chunk.len() - 1], Frame::L),
        };
        tiles.push(TileName::new(picture, frame)?);
        rest = tail;
    }
    if !rest.is_empty() {
        return Err(Error::Dangling(rest.to_string()));
    }
    Signature::new(tiles)
}

/// The reading of the same graph in the opposite direction around the cycle: pictures in
/// reverse order with top and bottom exchanged, each taking the frame of the tile that
/// preceded it. `build(s)` and `build(mirror_reading(s))` are isomorphic.
pub fn mirror_reading(s: &Signature) -> Signature {
    let n = s.len();
    let tiles = (0..n)
        .map(|j| {
            let i = (n - j) % n;
            TileName { picture: s.tile(i).picture.swapped(), frame: s.tile(i + n - 1).frame }
        })
        .collect();
    Signature { tiles }
}

/// Least rotation under the (picture, frame) string order.
pub fn canonicalize(s: &Signature) -> Signature {
    let n = s.tiles.len();
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|i| s.tiles[(a + i) % n].cmp(&s.tiles[(b + i) % n]))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
        .unwrap_or(0);
    s.rotate(best)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymbolCounts {
    pub l: usize,
    pub dl: usize,
    pub a: usize,
    pub v: usize,
    pub d: usize,
    pub h: usize,
    pub b: usize,
    pub i: usize,
}

impl SymbolCounts {
    pub fn as_array(&self) -> [usize; 8] {
        [self.l, self.dl, self.a, self.v, self.d, self.h, self.b, self.i]
    }
}

/// Every frame counts towards `l`; only doubled frames count towards `dl`.
pub fn symbol_counts(s: &Signature) -> SymbolCounts {
    let mut c = SymbolCounts::default();
    for t in s.tiles() {
        c.l += 1;
        if t.frame == Frame::DL {
            c.dl += 1;
        }
        for ch in t.picture.name().chars() {
            match ch {
                'A' => c.a += 1,
                'V' => c.v += 1,
                'D' => c.d += 1,
                'H' => c.h += 1,
                'B' => c.b += 1,
                'I' => c.i += 1,
                _ => unreachable!("picture names use only A, V, D, H, B, I"),
            }
        }
    }
    c
}

pub fn random_signature(n_tiles: usize, seed: u64) -> Result<Signature> {
    if n_tiles < 3 || n_tiles.is_multiple_of(2) {
        return Err(Error::TileCount(n_tiles));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_signature_with(n_tiles, &mut rng)
}

pub fn random_signature_with<R: Rng>(n_tiles: usize, rng: &mut R) -> Result<Signature> {
    let tiles = (0..n_tiles).map(|_| TileName::from_index(rng.gen_range(0..42))).collect();
    Signature::new(tiles)
}

/// `count` seeded draws of `n_tiles` tiles from `subset`, in draw order.
pub fn sample_signatures(n_tiles: usize, subset: &[TileName], count: usize, seed: u64) -> Result<Vec<Signature>> {
    if subset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Signature::new((0..n_tiles).map(|_| subset[rng.gen_range(0..subset.len())]).collect()))
        .collect()
}

/// Every sequence over `subset` of length `n_tiles`, in odometer order.
/// With `dedup`, only the canonical representative of each rotation class is kept.
pub fn enumerate_signatures(
    n_tiles: usize,
    subset: &[TileName],
    dedup: bool,
) -> Result<impl Iterator<Item = Signature>> {
    if n_tiles < 3 || n_tiles.is_multiple_of(2) {
        return Err(Error::TileCount(n_tiles));
    }
    if subset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let subset = subset.to_vec();
    let total = subset.len().checked_pow(n_tiles as u32).unwrap_or(usize::MAX);
    Ok((0..total).filter_map(move |mut code| {
        let mut tiles = vec![subset[0]; n_tiles];
        for slot in tiles.iter_mut().rev() {
            *slot = subset[code % subset.len()];
            code /= subset.len();
        }
        let s = Signature { tiles };
        if dedup && canonicalize(&s) != s {
            None
        } else {
            Some(s)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_worked_example() {
        let s = tokenize("VIAdLAALAALDBLHdL").unwrap();
        let names: Vec<String> = s.tiles().iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["VIAdL", "AAL", "AAL", "DBL", "HdL"]);
        assert_eq!(s.to_string(), "VIAdLAALAALDBLHdL");
        assert_eq!(tokenize("VIAdL AAL\tAAL DBL HdL").unwrap(), s);
    }

    #[test]
    fn tokenize_errors() {
        assert_eq!(tokenize("AALAAL"), Err(Error::TileCount(2)));
        assert_eq!(tokenize("XXL"), Err(Error::UnknownPicture("XX".into())));
        assert_eq!(tokenize("AALAALAALD"), Err(Error::Dangling("D".into())));
        assert_eq!(tokenize("AAL"), Err(Error::TileCount(1)));
    }

    #[test]
    fn canonical_rotation() {
        let s = tokenize("AALDBLAAL").unwrap();
        assert_eq!(canonicalize(&s).to_string(), "AALAALDBL");
        let h = tokenize("HdLHdLHdL").unwrap();
        assert_eq!(canonicalize(&h), h);
        let c = canonicalize(&s);
        assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn counts() {
        let s = tokenize("VIAdLAALAALDBLHdL").unwrap();
        assert_eq!(symbol_counts(&s).as_array(), [5, 2, 5, 1, 1, 1, 1, 1]);
        let s = Signature::power("DDL", 3).unwrap();
        assert_eq!(symbol_counts(&s).as_array(), [3, 0, 0, 0, 6, 0, 0, 0]);
        let s = Signature::power("HdL", 5).unwrap();
        assert_eq!(symbol_counts(&s).as_array(), [5, 5, 0, 0, 0, 5, 0, 0]);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_signature(3, 1).unwrap(), random_signature(3, 1).unwrap());
        assert!(random_signature(4, 1).is_err());
        assert_eq!(random_signature(5, 7).unwrap().len(), 5);
    }

    #[test]
    fn enumeration_counts() {
        let ddl: TileName = "DDL".parse().unwrap();
        let hdl: TileName = "HdL".parse().unwrap();
        let one: Vec<_> = enumerate_signatures(3, &[ddl], false).unwrap().collect();
        assert_eq!(one, vec![Signature::power("DDL", 3).unwrap()]);
        assert_eq!(enumerate_signatures(3, &[ddl, hdl], false).unwrap().count(), 8);
        assert_eq!(enumerate_signatures(3, &[ddl, hdl], true).unwrap().count(), 4);
    }

    #[test]
    fn tile_index_roundtrip() {
        for (i, t) in TileName::all().into_iter().enumerate() {
            assert_eq!(t.index(), i);
            assert_eq!(TileName::from_index(i), t);
            assert_eq!(t.to_string().parse::<TileName>().unwrap(), t);
        }
    }
}
