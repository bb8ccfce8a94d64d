//! Combinatorics and exact algebra for modular branching of spin
//! representations of symmetric groups.

pub mod base;
pub mod crystal;
pub mod error;
pub mod indices;
pub mod poly;
pub mod raising;
pub mod sigseq;
pub mod verify;

pub use error::{Error, Result};
