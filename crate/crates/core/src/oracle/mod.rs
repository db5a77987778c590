//! Exact and closed-form quantities used to check the simulators.

pub mod bounds;
pub mod chernoff;
pub mod combinatorics;
pub mod lemma2;
pub mod markov;
pub mod monotone;

pub use bounds::{min_population, theorem1_bound, theorem2_bound, theorem3_bound, Bound};
pub use chernoff::{chernoff_additive, chernoff_geometric, chernoff_lower, Tail};
pub use lemma2::{lemma2, lemma2_bruteforce, lemma2_exact, Precision};
pub use markov::{
    markov_full_absorption, markov_lumped_absorption, AbsorptionResult, Aggregate, LumpedState,
};
pub use monotone::{aux_ineq, g_fn, h1, h2};
