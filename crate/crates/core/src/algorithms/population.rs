use rand::Rng;

use crate::bitstring::BitString;
use crate::detection::{classify, event_i, event_ii, FirstBitPattern};
use crate::error::{Error, Result};
use crate::fitness::{is_optimum, onemax01, onemax01_value, TimePair};
use crate::mutation::MutationKind;
use crate::rng::RandomStream;

use super::{EventLatch, OutcomeKind, RunOptions, TrialOutcome};

/// The (mu+1) EA population: `mu` pairs, each with its own stored previous
/// first bit.
///
/// Slots are bucketed by fitness so the minimum, the lowest-fitness ties,
/// the pattern census and the event counts are all maintained in O(1) per
/// replacement.
#[derive(Clone, Debug)]
pub struct Population {
    n: usize,
    slots: Vec<TimePair>,
    fitness: Vec<i64>,
    // bucket k holds the slots with fitness k - n
    buckets: Vec<Vec<usize>>,
    bucket_pos: Vec<usize>,
    min_fitness: i64,
    patterns: [usize; 4],
    event_i: usize,
    event_ii: usize,
    generation: u64,
    audit: bool,
    flips: Vec<usize>,
}

/// What one generation did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alg2Step {
    /// Offspring fitness was at least the population minimum.
    pub accepted: bool,
    /// The offspring pair is the optimum (parent first bit 0, offspring all ones).
    pub optimum_created: bool,
    /// Slot overwritten by the offspring; `None` if the offspring itself was
    /// the pair removed, or if it was rejected.
    pub replaced: Option<usize>,
    pub offspring_fitness: i64,
}

impl Population {
    pub fn new(slots: Vec<TimePair>) -> Result<Self> {
        let Some(first) = slots.first() else {
            return Err(Error::domain("mu", 0, "mu >= 1"));
        };
        let n = first.dimension();
        if let Some(bad) = slots.iter().find(|p| p.dimension() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dimension(),
            });
        }
        let mu = slots.len();
        let mut pop = Self {
            n,
            slots,
            fitness: vec![0; mu],
            buckets: vec![Vec::new(); 2 * n + 1],
            bucket_pos: vec![0; mu],
            min_fitness: n as i64,
            patterns: [0; 4],
            event_i: 0,
            event_ii: 0,
            generation: 0,
            audit: false,
            flips: Vec::new(),
        };
        for i in 0..mu {
            pop.index_slot(i);
        }
        pop.min_fitness = *pop.fitness.iter().min().expect("mu >= 1");
        Ok(pop)
    }

    /// Draws `P^0` and `P^1` uniformly: slot `i` is `(X_i^0 first bit, X_i^1)`.
    pub fn random(n: usize, mu: usize, rng: &mut RandomStream) -> Result<Self> {
        if mu == 0 {
            return Err(Error::domain("mu", mu, "mu >= 1"));
        }
        let x0: Vec<BitString> = (0..mu).map(|_| BitString::random(n, rng)).collect::<Result<_>>()?;
        let x1: Vec<BitString> = (0..mu).map(|_| BitString::random(n, rng)).collect::<Result<_>>()?;
        Self::new(
            x0.iter()
                .zip(x1)
                .map(|(a, b)| TimePair::new(a.first(), b))
                .collect(),
        )
    }

    /// Re-verify every cached quantity against a full scan after each step.
    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[TimePair] {
        &self.slots
    }

    pub fn fitness_of(&self, i: usize) -> i64 {
        self.fitness[i]
    }

    pub fn min_fitness(&self) -> i64 {
        self.min_fitness
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn pattern_count(&self, p: FirstBitPattern) -> usize {
        self.patterns[p.index()]
    }

    pub fn patterns(&self) -> [usize; 4] {
        self.patterns
    }

    pub fn event_i_count(&self) -> usize {
        self.event_i
    }

    pub fn event_ii_count(&self) -> usize {
        self.event_ii
    }

    pub fn contains_optimum(&self) -> bool {
        self.buckets[2 * self.n].iter().any(|&i| is_optimum(&self.slots[i]))
    }

    fn index_slot(&mut self, i: usize) {
        let p = &self.slots[i];
        let f = onemax01(p);
        self.fitness[i] = f;
        self.patterns[classify(p).index()] += 1;
        self.event_i += usize::from(event_i(p));
        self.event_ii += usize::from(event_ii(p));
        let b = &mut self.buckets[(f + self.n as i64) as usize];
        self.bucket_pos[i] = b.len();
        b.push(i);
    }

    fn unindex_slot(&mut self, i: usize) {
        let p = &self.slots[i];
        self.patterns[classify(p).index()] -= 1;
        self.event_i -= usize::from(event_i(p));
        self.event_ii -= usize::from(event_ii(p));
        let b = &mut self.buckets[(self.fitness[i] + self.n as i64) as usize];
        let pos = self.bucket_pos[i];
        b.swap_remove(pos);
        if let Some(&moved) = b.get(pos) {
            self.bucket_pos[moved] = pos;
        }
    }

    fn replace(&mut self, i: usize, pair: TimePair) {
        self.unindex_slot(i);
        self.slots[i] = pair;
        self.index_slot(i);
        // the newcomer is never below the old minimum
        while self.buckets[(self.min_fitness + self.n as i64) as usize].is_empty() {
            self.min_fitness += 1;
        }
    }

    /// One generation: uniform parent, bit-wise mutation, and if the
    /// offspring pair reaches the population minimum, removal of a uniformly
    /// chosen lowest-fitness pair among the `mu + 1`.
    pub fn step(&mut self, rng: &mut RandomStream) -> Alg2Step {
        let n = self.n;
        let parent = rng.random_range(0..self.mu());
        MutationKind::Bitwise.sample_flips(n, rng, &mut self.flips);
        self.generation += 1;

        let parent_x = &self.slots[parent].current;
        let prev = parent_x.first();
        let ones = parent_x.ones_after_flips(&self.flips);
        let f = onemax01_value(n, prev, ones);
        if f < self.min_fitness {
            return Alg2Step {
                accepted: false,
                optimum_created: false,
                replaced: None,
                offspring_fitness: f,
            };
        }
        let optimum_created = !prev && ones == n;

        let lowest = &self.buckets[(self.min_fitness + n as i64) as usize];
        let ties = lowest.len() + usize::from(f == self.min_fitness);
        let pick = rng.random_range(0..ties);
        let replaced = lowest.get(pick).copied();
        if let Some(victim) = replaced {
            let child = TimePair::new(prev, self.slots[parent].current.with_flips(&self.flips));
            self.replace(victim, child);
        }
        if self.audit {
            if let Err(msg) = self.verify() {
                panic!("population cache diverged at generation {}: {msg}", self.generation);
            }
        }
        Alg2Step {
            accepted: true,
            optimum_created,
            replaced,
            offspring_fitness: f,
        }
    }

    /// Recomputes all cached quantities by a full scan and compares.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let fits: Vec<i64> = self.slots.iter().map(onemax01).collect();
        if fits != self.fitness {
            return Err("fitness cache".into());
        }
        let min = *fits.iter().min().expect("mu >= 1");
        if min != self.min_fitness {
            return Err(format!("min {} vs cached {}", min, self.min_fitness));
        }
        let mut patterns = [0; 4];
        for p in &self.slots {
            patterns[classify(p).index()] += 1;
        }
        if patterns != self.patterns {
            return Err(format!("patterns {patterns:?} vs cached {:?}", self.patterns));
        }
        let ei = self.slots.iter().filter(|p| event_i(p)).count();
        let eii = self.slots.iter().filter(|p| event_ii(p)).count();
        if (ei, eii) != (self.event_i, self.event_ii) {
            return Err("event counts".into());
        }
        for (k, b) in self.buckets.iter().enumerate() {
            for (pos, &i) in b.iter().enumerate() {
                if self.fitness[i] + self.n as i64 != k as i64 || self.bucket_pos[i] != pos {
                    return Err(format!("bucket {k} slot {i}"));
                }
            }
        }
        if self.buckets.iter().map(Vec::len).sum::<usize>() != self.mu() {
            return Err("bucket sizes".into());
        }
        Ok(())
    }

    fn stagnation(&self) -> Option<OutcomeKind> {
        if self.event_i == self.mu() {
            Some(OutcomeKind::StagnatedEventI)
        } else if self.event_ii == self.mu() {
            Some(OutcomeKind::StagnatedEventII)
        } else {
            None
        }
    }
}

/// Functional form of [`Population::step`].
pub fn alg2_step(pop: &Population, rng: &mut RandomStream) -> Population {
    let mut next = pop.clone();
    next.step(rng);
    next
}

pub fn run_alg2(n: usize, mu: usize, opts: RunOptions, rng: &mut RandomStream) -> Result<TrialOutcome> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    let mut pop = Population::random(n, mu, rng)?;
    Ok(run_alg2_from(&mut pop, opts, rng))
}

pub fn run_alg2_from(pop: &mut Population, opts: RunOptions, rng: &mut RandomStream) -> TrialOutcome {
    if pop.contains_optimum() {
        return TrialOutcome::new(OutcomeKind::OptimumFound, pop.generation());
    }
    let mut latch = EventLatch::default();
    let stagnation = pop.stagnation();
    if opts.early_exit {
        if let Some(k) = stagnation {
            return TrialOutcome::new(k, pop.generation());
        }
    }
    latch.observe(stagnation, pop.generation());
    while pop.generation() < opts.budget {
        let step = pop.step(rng);
        if step.optimum_created {
            return TrialOutcome::new(OutcomeKind::OptimumFound, pop.generation());
        }
        if step.replaced.is_some() {
            let s = pop.stagnation();
            if opts.early_exit {
                if let Some(k) = s {
                    return TrialOutcome::new(k, pop.generation());
                }
            }
            latch.observe(s, pop.generation());
        }
    }
    latch.finish(pop.stagnation(), opts.budget)
}
