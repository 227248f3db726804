pub mod acunh_ground;
pub mod algebra;
pub mod asym;
pub mod automata;
pub mod crosscheck;
pub mod decision;
pub mod error;
pub mod parse;
pub mod problem;
pub mod reductions;
pub mod rewrite;
pub mod signature;
pub mod subst;
pub mod term;
pub mod theory;
pub mod xor;
