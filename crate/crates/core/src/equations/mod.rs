//! Equational characterisations: terms over algebra elements compiled to
//! regular forests, marked reachability for the counting absorption
//! equations, and the checks built from them.

mod checks;
mod marked;
mod report;
mod term;

pub use checks::{
    check_bisim_invariance, check_cef, check_cefk, check_ef, check_g1_direct, compute_k, g8_loops,
    g8_terms, invariance_level, BisimMode, G12_GRAPH_LIMIT,
};
pub use marked::{marked_reach, MarkedReach};
pub use report::{EquationReport, EquationResult, Failure, Verdict, MAX_WITNESSES};
pub use term::{compile, evaluate_term, AlgebraTerm};
