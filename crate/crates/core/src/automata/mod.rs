//! Ground asymmetric unification modulo ACUNh by automata over bit tracks.

mod dfa;
mod guess;
mod standard;

pub use dfa::{encode, explore_product, intersect_and_check, strip, track_values, BitSymbol, EqAutomaton, Machine, Witness, MAX_WIDTH};
pub use guess::{
    build_automaton, build_machine, component_guesses, decode, ground_asym_unify_acunh, values_by_var, AcunhConfig,
    AcunhRun, ComponentGuess,
};
pub use standard::{standardize_acunh, Shape, StandardAcunh};
