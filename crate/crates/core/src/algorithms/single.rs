use crate::bitstring::BitString;
use crate::detection::{event_i, event_ii};
use crate::error::{Error, Result};
use crate::fitness::{is_optimum, onemax01, onemax01_value, TimePair};
use crate::mutation::MutationKind;
use crate::rng::RandomStream;

use super::{EventLatch, OutcomeKind, RunOptions, TrialOutcome};

/// State of the single-individual algorithm: the incumbent pair and the
/// number of generations run so far.
#[derive(Clone, Debug)]
pub struct Alg1State {
    pair: TimePair,
    fitness: i64,
    generation: u64,
    kind: MutationKind,
    flips: Vec<usize>,
}

impl Alg1State {
    pub fn new(pair: TimePair, kind: MutationKind) -> Self {
        let fitness = onemax01(&pair);
        Self {
            pair,
            fitness,
            generation: 0,
            kind,
            flips: Vec::new(),
        }
    }

    /// Draws `X^0` and `X^1` uniformly; the incumbent pair is `(X^0_1, X^1)`.
    pub fn random(n: usize, kind: MutationKind, rng: &mut RandomStream) -> Result<Self> {
        let x0 = BitString::random(n, rng)?;
        let x1 = BitString::random(n, rng)?;
        Ok(Self::new(TimePair::new(x0.first(), x1), kind))
    }

    pub fn pair(&self) -> &TimePair {
        &self.pair
    }

    pub fn fitness(&self) -> i64 {
        self.fitness
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn kind(&self) -> MutationKind {
        self.kind
    }

    /// One mutation-selection iteration. Returns whether the offspring was
    /// accepted.
    ///
    /// The old pair survives only if its fitness is strictly greater than
    /// that of `(current first bit, offspring)`; ties go to the offspring.
    pub fn step(&mut self, rng: &mut RandomStream) -> bool {
        let n = self.pair.dimension();
        self.kind.sample_flips(n, rng, &mut self.flips);
        self.generation += 1;
        let parent_first = self.pair.current.first();
        let child_ones = self.pair.current.ones_after_flips(&self.flips);
        let child_fitness = onemax01_value(n, parent_first, child_ones);
        if self.fitness > child_fitness {
            return false;
        }
        let child = self.pair.current.with_flips(&self.flips);
        self.pair = TimePair::new(parent_first, child);
        self.fitness = child_fitness;
        true
    }

    pub(crate) fn terminal(&self) -> Option<OutcomeKind> {
        if is_optimum(&self.pair) {
            Some(OutcomeKind::OptimumFound)
        } else {
            self.stagnation()
        }
    }

    pub(crate) fn stagnation(&self) -> Option<OutcomeKind> {
        if event_i(&self.pair) {
            Some(OutcomeKind::StagnatedEventI)
        } else if event_ii(&self.pair) {
            Some(OutcomeKind::StagnatedEventII)
        } else {
            None
        }
    }
}

/// Functional form of [`Alg1State::step`].
pub fn alg1_step(state: &Alg1State, rng: &mut RandomStream) -> Alg1State {
    let mut next = state.clone();
    next.step(rng);
    next
}

pub fn run_alg1(
    n: usize,
    kind: MutationKind,
    opts: RunOptions,
    rng: &mut RandomStream,
) -> Result<TrialOutcome> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if opts.budget < 1 {
        return Err(Error::domain("budget", opts.budget, "budget >= 1"));
    }
    let mut state = Alg1State::random(n, kind, rng)?;
    Ok(run_alg1_from(&mut state, opts, rng))
}

/// Runs from an existing state until a terminal condition or until
/// `opts.budget` total generations have been executed.
pub fn run_alg1_from(state: &mut Alg1State, opts: RunOptions, rng: &mut RandomStream) -> TrialOutcome {
    let mut latch = EventLatch::default();
    let check = |state: &Alg1State, latch: &mut EventLatch| -> Option<TrialOutcome> {
        match state.terminal() {
            Some(OutcomeKind::OptimumFound) => {
                Some(TrialOutcome::new(OutcomeKind::OptimumFound, state.generation()))
            }
            Some(k) if opts.early_exit => Some(TrialOutcome::new(k, state.generation())),
            other => {
                latch.observe(other, state.generation());
                None
            }
        }
    };
    if let Some(done) = check(state, &mut latch) {
        return done;
    }
    while state.generation() < opts.budget {
        if state.step(rng) {
            if let Some(done) = check(state, &mut latch) {
                return done;
            }
        }
    }
    latch.finish(state.stagnation(), opts.budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(prev: u8, s: &str) -> TimePair {
        TimePair::new(prev == 1, s.parse().unwrap())
    }

    #[test]
    fn optimum_is_absorbing() {
        for kind in [MutationKind::OneBit, MutationKind::Bitwise] {
            let mut s = Alg1State::new(pair(0, "11111"), kind);
            let mut rng = RandomStream::new(1, 0);
            for _ in 0..2000 {
                s.step(&mut rng);
                assert_eq!(s.pair(), &pair(0, "11111"));
            }
        }
    }

    #[test]
    fn prev_one_current_first_zero_always_accepts() {
        // (1, 0 1^{n-1}): every offspring carries stored bit 0, fitness >= 0 > 1 - n.
        let mut rng = RandomStream::new(2, 0);
        for kind in [MutationKind::OneBit, MutationKind::Bitwise] {
            for _ in 0..500 {
                let mut s = Alg1State::new(pair(1, "01111"), kind);
                assert!(s.step(&mut rng));
                assert!(!s.pair().prev_first);
            }
        }
    }

    #[test]
    fn losing_first_bit_progress_is_rejected() {
        // (0, 1 0^{n-1}) has fitness 1; flipping bit 2 only gives (1, 110..0) with 2 - n < 1.
        for n in 2..10 {
            let mut x = BitString::zeros(n).unwrap();
            x.set(0, true);
            let parent = TimePair::new(false, x.clone());
            let child = TimePair::new(x.first(), x.with_flips(&[1.min(n - 1)]));
            assert!(onemax01(&parent) > onemax01(&child), "n = {n}");
        }
    }

    #[test]
    fn initial_event_i_is_reported_immediately() {
        let mut s = Alg1State::new(pair(0, "10101"), MutationKind::Bitwise);
        let out = run_alg1_from(&mut s, RunOptions::new(100), &mut RandomStream::new(3, 0));
        assert_eq!(out, TrialOutcome::new(OutcomeKind::StagnatedEventI, 0));
    }

    #[test]
    fn n2_runs_reach_optimum_sometimes() {
        let mut found = 0;
        for t in 0..200 {
            let out = run_alg1(2, MutationKind::Bitwise, RunOptions::new(400), &mut RandomStream::new(4, t))
                .unwrap();
            found += usize::from(out.is_success());
        }
        assert!(found > 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = RandomStream::new(0, 0);
        assert!(run_alg1(1, MutationKind::OneBit, RunOptions::new(10), &mut rng).is_err());
        assert!(run_alg1(5, MutationKind::OneBit, RunOptions::new(0), &mut rng).is_err());
    }

    #[test]
    fn fitness_never_decreases() {
        for t in 0..50 {
            let mut rng = RandomStream::new(5, t);
            let mut s = Alg1State::random(12, MutationKind::Bitwise, &mut rng).unwrap();
            let mut last = s.fitness();
            for _ in 0..2000 {
                s.step(&mut rng);
                assert!(s.fitness() >= last);
                assert_eq!(s.fitness(), onemax01(s.pair()));
                last = s.fitness();
            }
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let trace = |seed| {
            let mut rng = RandomStream::new(seed, 17);
            let mut s = Alg1State::random(30, MutationKind::Bitwise, &mut rng).unwrap();
            (0..500)
                .map(|_| {
                    s.step(&mut rng);
                    s.pair().clone()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(trace(99), trace(99));
    }

    #[test]
    fn without_early_exit_latches_first_event() {
        let mut s = Alg1State::new(pair(1, "11111"), MutationKind::Bitwise);
        let out = run_alg1_from(
            &mut s,
            RunOptions::new(500).without_early_exit(),
            &mut RandomStream::new(6, 0),
        );
        assert_eq!(out, TrialOutcome::new(OutcomeKind::StagnatedEventII, 0));
        assert_eq!(s.generation(), 500);
    }
}
