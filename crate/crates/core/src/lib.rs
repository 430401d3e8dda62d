//! Regular forests, finitary forest algebras presented by parity automata,
//! and equational decision procedures for bisimulation invariance and for
//! definability in EF and counting EF.

pub mod algebra;
pub mod equations;
pub mod error;
pub mod forest;
pub mod logic;
pub mod parity;
pub mod testkit;

pub use error::{Error, Result};
