//! Decision procedures for IBN and graded IBN of Leavitt path algebras of
//! finite directed multigraphs, with certificates, a talented monoid
//! equality test, and builders for graph families coming from groups.

pub mod cli;
pub mod constructions;
pub mod deciders;
pub mod error;
pub mod exactmat;
pub mod graph;
pub mod monoid;

pub use error::{Error, Result};
