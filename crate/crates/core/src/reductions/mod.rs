//! The hardness reductions, independent brute-force oracles and the bounded
//! solvers for the NP-side theories.

mod generators;
mod instances;
mod oracles;
pub mod random;
mod solvers;

pub use generators::{coloring_to_acun_asym, nae3sat_to_r4_asym, sat3_to_r1_disunif, x_var, y_var, z_var};
pub use instances::{Clause3, CnfFormula, Graph, Literal, NaeInstance};
pub use oracles::{
    acun_oracle, acunh_oracle, brute_coloring, brute_nae, brute_sat, decode_assignment, decode_coloring,
    MAX_COLOR_VERTICES, MAX_SAT_VARS,
};
pub use solvers::{
    bounded_ground_solution, decide_asym_r4, decide_disunif_r1, is_r1_reduction_shaped, is_r4_reduction_shaped,
    normal_ground_terms, GroundSearch, DEFAULT_DEPTH, DEFAULT_NODE_CAP,
};
