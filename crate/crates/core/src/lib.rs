//! Simulation and exact analysis of evolutionary algorithms on the
//! time-linkage function `OneMax_(0,1^n)`.
//!
//! The fitness of a pair `(b, x)` is `|x|_1 - n b`, where `b` is the first bit
//! of the previously accepted string. The unique optimum is `(0, 1^n)`.

pub mod algorithms;
pub mod bitstring;
pub mod detection;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod mutation;
pub mod oracle;
pub mod rng;

pub use algorithms::{OutcomeKind, RunOptions, TrialOutcome};
pub use bitstring::BitString;
pub use error::{Error, Result};
pub use fitness::TimePair;
pub use mutation::MutationKind;
pub use rng::RandomStream;
