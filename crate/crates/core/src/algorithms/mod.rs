//! The modified RLS / (1+1) EA, the (mu+1) EA, and the online driver.

mod online;
mod population;
mod single;

pub use online::{
    run_online, run_online_with, OnlineParams, OnlineRecord, OnlineStop, OnlineSummary, OnlineTrace,
};
pub use population::{alg2_step, run_alg2, run_alg2_from, Alg2Step, Population};
pub use single::{alg1_step, run_alg1, run_alg1_from, Alg1State};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    OptimumFound,
    StagnatedEventI,
    StagnatedEventII,
    BudgetExhausted,
}

/// Terminal classification of one run.
///
/// `generation` counts mutation-selection iterations executed when the
/// condition was first observed; a condition already true of the initial
/// state reports 0. `BudgetExhausted` reports the budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub kind: OutcomeKind,
    pub generation: u64,
}

impl TrialOutcome {
    pub fn new(kind: OutcomeKind, generation: u64) -> Self {
        Self { kind, generation }
    }

    pub fn is_success(&self) -> bool {
        self.kind == OutcomeKind::OptimumFound
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub budget: u64,
    /// Stop as soon as a stagnation event is detected. Both events are
    /// absorbing, so this only changes the reported generation.
    pub early_exit: bool,
}

impl RunOptions {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            early_exit: true,
        }
    }

    pub fn without_early_exit(mut self) -> Self {
        self.early_exit = false;
        self
    }
}

/// `100 n^2` generations.
pub fn default_budget_single(n: usize) -> u64 {
    100u64.saturating_mul(n as u64).saturating_mul(n as u64)
}

/// `100 mu n` generations.
pub fn default_budget_population(n: usize, mu: usize) -> u64 {
    100u64.saturating_mul(mu as u64).saturating_mul(n as u64)
}

/// Tracks the first generation at which a stagnation event was seen when
/// running without early exit.
#[derive(Default)]
pub(crate) struct EventLatch {
    first: Option<(OutcomeKind, u64)>,
}

impl EventLatch {
    pub(crate) fn observe(&mut self, kind: Option<OutcomeKind>, generation: u64) {
        if let (None, Some(k)) = (self.first, kind) {
            self.first = Some((k, generation));
        }
    }

    /// Outcome once the budget runs out: the latched event if it still holds.
    pub(crate) fn finish(&self, holds_now: Option<OutcomeKind>, budget: u64) -> TrialOutcome {
        match (self.first, holds_now) {
            (Some((k, g)), Some(now)) if k == now => TrialOutcome::new(k, g),
            (_, Some(now)) => TrialOutcome::new(now, budget),
            _ => TrialOutcome::new(OutcomeKind::BudgetExhausted, budget),
        }
    }
}
