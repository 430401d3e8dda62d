//! Parity forest automata, parity games and the membership test.

pub mod automaton;
pub mod game;
pub mod membership;
pub mod nfa;

pub use automaton::{ParityForestAutomaton, TransitionItem};
pub use game::{solve, ParityGame, Player, Solution};
pub use membership::{accepts, accepts_via_game, membership_game, MembershipGame};
pub use nfa::Nfa;
