//! Triangle designs and group divisible triangle designs over GF(2).

pub mod cli;
pub mod construct;
pub mod datasets;
pub mod designs;
pub mod error;
pub mod format;
pub mod gf2n;
pub mod linalg;
pub mod orbits;
pub mod search;
pub mod xcover;

pub use error::{Error, Result};
