//! Separation-constrained list coloring on complete graphs.
//!
//! List assignments are handled through their proper-intersection vectors
//! ([`setsys::PIVector`]): for every nonempty vertex subset `S`, the number
//! of colors lying in exactly the lists of `S`. On `K_n` colorability is the
//! amplitude (Hall-type) condition, which makes exact separation numbers a
//! search over integer vectors.

pub mod choosability;
pub mod colorsym;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod exec;
pub mod kernel;
pub mod lattice;
pub mod search;
pub mod setsys;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use setsys::{ColorSet, ListAssignment, PIVector, SubsetKey};
