//! Large 2-crossing-critical graphs: construction from tile signatures, recognition,
//! and exact invariants with verifiable witnesses.

pub mod builder;
pub mod catalog;
mod catalog_check;
pub mod embedding;
pub mod drawing;
pub mod ecolor;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod props;
pub mod recognizer;
pub mod report;
pub mod signature;
pub mod treewidth;
pub mod vcolor;

pub use catalog_check::{contribution, has_triangle, twist_planarization, LISTED_MESSY};
pub use error::{Error, Result};
