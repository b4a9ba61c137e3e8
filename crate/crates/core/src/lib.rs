//! A finite-model workbench for a unified algebra of sets and heterogeneous
//! relations, the unfolding of set statements into pointwise first-order
//! formulas, and relational denotational semantics of a small imperative
//! language.

pub mod error;
pub mod finrel;
pub mod gen;
pub mod imp;
pub mod laws;
pub mod lattice;
pub mod par;
pub mod rels;
pub mod symbolic;
pub mod universe;

pub use error::{Error, Result};
