use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty input")]
    EmptyInput,
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("invalid vertex id {0}")]
    InvalidVertex(usize),
    #[error("unknown picture {0:?}")]
    UnknownPicture(String),
    #[error("dangling characters {0:?} after the last frame")]
    Dangling(String),
    #[error("signature needs an odd number of at least 3 tiles, got {0}")]
    TileCount(usize),
    #[error("unknown tile name {0:?}")]
    UnknownTile(String),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("incompatible walls: {0}")]
    Walls(String),
    #[error("{k} colours are fewer than the chromatic number {chi}")]
    BelowChromaticNumber { k: usize, chi: usize },
    #[error("{what}: size {actual} exceeds guard {limit}")]
    SizeGuard { what: &'static str, limit: usize, actual: usize },
    #[error("only {0} messy tiles, at least 3 are needed")]
    TooFewMessy(usize),
    #[error("inconsistent arity: {0}")]
    Arity(String),
    #[error("no feasible solution: {0}")]
    Infeasible(String),
}
