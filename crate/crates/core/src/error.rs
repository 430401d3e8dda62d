use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: symbol `{symbol}` has arity {left} and {right}")]
    AlphabetMismatch {
        symbol: String,
        left: usize,
        right: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("variable x{index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("forest contains variables")]
    VariablesPresent,
    #[error("forest is cyclic")]
    Cyclic,
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("label arity mismatch at node {node}: edge label {edge} but arity {arity}")]
    LabelArity {
        node: usize,
        edge: usize,
        arity: usize,
    },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no automaton of arity {arity} accepts forest {forest}")]
    NoAccept { arity: usize, forest: String },
    #[error("automata {elements:?} of arity {arity} all accept forest {forest}")]
    MultiAccept {
        arity: usize,
        elements: Vec<String>,
        forest: String,
    },
    #[error("presentation lists no elements of arity {0}")]
    MissingArity(usize),
    #[error("presentation is not generated by arities 0 and 1")]
    NotGeneratedByLowArities,
    #[error("ill-defined omega power: {0}")]
    IllDefinedOmega(String),
    #[error("game error: {0}")]
    Game(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
