//! Counting EF: formulas, model checking, types and counting bisimulation.

mod count;
pub mod formula;
pub mod game;
pub mod modelcheck;
pub mod types;

pub use formula::Formula;
pub use game::{game_equiv, GameOracle};
pub use modelcheck::{modelcheck, modelcheck_all, Semantics};
pub use types::{chi, equiv, tree_equiv, TypeId, TypeKey, TypeTable, TypeUniverse, TypeValue};
