//! First-bit patterns and the stagnation events of both algorithms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algorithms::Population;
use crate::fitness::{onemax01, TimePair};

/// `(previous first bit, current first bit)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FirstBitPattern {
    P00,
    P01,
    P10,
    P11,
}

impl FirstBitPattern {
    pub const ALL: [FirstBitPattern; 4] = [Self::P00, Self::P01, Self::P10, Self::P11];

    pub fn from_bits(prev: bool, current: bool) -> Self {
        match (prev, current) {
            (false, false) => Self::P00,
            (false, true) => Self::P01,
            (true, false) => Self::P10,
            (true, true) => Self::P11,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn bits(self) -> (bool, bool) {
        let i = self as usize;
        (i & 2 != 0, i & 1 != 0)
    }
}

impl std::fmt::Display for FirstBitPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (p, c) = self.bits();
        write!(f, "({},{})", u8::from(p), u8::from(c))
    }
}

pub fn classify(pair: &TimePair) -> FirstBitPattern {
    FirstBitPattern::from_bits(pair.prev_first, pair.current.first())
}

/// Pattern (0,1) with `x_2..x_n` not all ones.
#[inline]
pub fn event_i(pair: &TimePair) -> bool {
    !pair.prev_first && pair.current.first() && !pair.current.rest_all_ones()
}

/// Stored first bit 1 with the current string all ones.
#[inline]
pub fn event_ii(pair: &TimePair) -> bool {
    pair.prev_first && pair.current.is_all_ones()
}

/// Event I holds for every slot.
pub fn event_i_prime(pop: &Population) -> bool {
    pop.event_i_count() == pop.mu()
}

/// Event II holds for every slot.
pub fn event_ii_prime(pop: &Population) -> bool {
    pop.event_ii_count() == pop.mu()
}

/// Counts of the three individual classes relative to the best (0,0) fitness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub temporarily_undefeated: usize,
    pub current_front: usize,
    pub interior: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Indexed by [`FirstBitPattern::index`].
    pub patterns: [usize; 4],
    /// Best fitness among (0,0) slots.
    pub best_00: Option<i64>,
    /// Zeros in a current front individual (`n - best_00`).
    pub front_zeros: Option<usize>,
    /// (0,0) slots keyed by `zeros - front_zeros`.
    pub offsets: BTreeMap<usize, usize>,
    /// `None` when there is no (0,0) slot and the classes are undefined.
    pub classes: Option<ClassCounts>,
}

impl Census {
    pub fn count(&self, p: FirstBitPattern) -> usize {
        self.patterns[p.index()]
    }

    pub fn total(&self) -> usize {
        self.patterns.iter().sum()
    }
}

pub fn census_of<'a>(pairs: impl IntoIterator<Item = &'a TimePair> + Clone) -> Census {
    let mut patterns = [0usize; 4];
    let mut best_00: Option<i64> = None;
    for p in pairs.clone() {
        let pat = classify(p);
        patterns[pat.index()] += 1;
        if pat == FirstBitPattern::P00 {
            let f = onemax01(p);
            best_00 = Some(best_00.map_or(f, |b| b.max(f)));
        }
    }
    let Some(l) = best_00 else {
        return Census {
            patterns,
            best_00: None,
            front_zeros: None,
            offsets: BTreeMap::new(),
            classes: None,
        };
    };
    let mut offsets = BTreeMap::new();
    let mut classes = ClassCounts {
        temporarily_undefeated: 0,
        current_front: 0,
        interior: 0,
    };
    let mut front_zeros = 0;
    for p in pairs {
        let pat = classify(p);
        let f = onemax01(p);
        match pat {
            FirstBitPattern::P00 => {
                let zeros = p.current.count_zeros();
                if f == l {
                    front_zeros = zeros;
                    classes.current_front += 1;
                } else {
                    classes.interior += 1;
                }
                // a (0,0) slot has fitness = ones, so zeros - front_zeros = l - f
                *offsets.entry((l - f) as usize).or_insert(0) += 1;
            }
            FirstBitPattern::P01 if f > l => classes.temporarily_undefeated += 1,
            _ => classes.interior += 1,
        }
    }
    Census {
        patterns,
        best_00: Some(l),
        front_zeros: Some(front_zeros),
        offsets,
        classes: Some(classes),
    }
}

pub fn population_census(pop: &Population) -> Census {
    census_of(pop.slots())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::BitString;
    use crate::rng::RandomStream;
    use proptest::prelude::*;

    fn pair(prev: u8, s: &str) -> TimePair {
        TimePair::new(prev == 1, s.parse().unwrap())
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&pair(0, "1000")), FirstBitPattern::P01);
        assert_eq!(classify(&pair(1, "0000")), FirstBitPattern::P10);
        assert_eq!(classify(&pair(0, "0111")), FirstBitPattern::P00);
        assert_eq!(classify(&pair(1, "1000")), FirstBitPattern::P11);
    }

    #[test]
    fn event_i_examples() {
        assert!(!event_i(&pair(0, "1111")));
        assert!(event_i(&pair(0, "1011")));
        assert!(!event_i(&pair(1, "1000")));
    }

    #[test]
    fn event_ii_examples() {
        assert!(event_ii(&pair(1, "1111")));
        assert!(!event_ii(&pair(0, "1111")));
        assert!(!event_ii(&pair(1, "1110")));
    }

    #[test]
    fn single_front_slot_census() {
        let c = census_of([&pair(0, "01111")]);
        assert_eq!(c.best_00, Some(4));
        assert_eq!(c.front_zeros, Some(1));
        assert_eq!(c.offsets.get(&0), Some(&1));
        assert_eq!(c.classes.unwrap().current_front, 1);
    }

    #[test]
    fn census_without_00_slots_is_flagged() {
        let pairs = [pair(0, "1000"), pair(1, "1111"), pair(1, "0101")];
        let c = census_of(&pairs);
        assert_eq!(c.best_00, None);
        assert_eq!(c.classes, None);
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn mixed_census_classes() {
        let pairs = [
            pair(0, "0110"), // (0,0) fitness 2 -> front
            pair(0, "0100"), // (0,0) fitness 1 -> interior, offset 1
            pair(0, "1110"), // (0,1) fitness 3 > 2 -> undefeated
            pair(0, "1000"), // (0,1) fitness 1 -> interior
            pair(1, "1111"), // (1,1) -> interior
        ];
        let c = census_of(&pairs);
        assert_eq!(c.best_00, Some(2));
        assert_eq!(c.front_zeros, Some(2));
        let k = c.classes.unwrap();
        assert_eq!(k.current_front, 1);
        assert_eq!(k.temporarily_undefeated, 1);
        assert_eq!(k.interior, 3);
        assert_eq!(c.offsets.get(&1), Some(&1));
    }

    proptest! {
        #[test]
        fn events_are_exclusive(seed in any::<u64>(), n in 2usize..12) {
            let mut rng = RandomStream::new(seed, 0);
            let mut x = BitString::random(n, &mut rng).unwrap();
            // bias toward near-all-ones strings so the events actually occur
            if rand::Rng::random::<bool>(&mut rng) {
                for i in 1..n { x.set(i, true); }
            }
            let p = TimePair::new(rand::Rng::random(&mut rng), x);
            prop_assert!(!(event_i(&p) && event_ii(&p)));
            if crate::fitness::is_optimum(&p) {
                prop_assert!(!event_i(&p) && !event_ii(&p));
            }
            if event_i(&p) { prop_assert!(onemax01(&p) >= 1); }
            if event_ii(&p) { prop_assert_eq!(onemax01(&p), 0); }
        }

        #[test]
        fn census_partitions(seed in any::<u64>(), n in 2usize..10, mu in 1usize..20) {
            let mut rng = RandomStream::new(seed, 1);
            let pairs: Vec<TimePair> = (0..mu)
                .map(|_| TimePair::new(
                    rand::Rng::random(&mut rng),
                    BitString::random(n, &mut rng).unwrap(),
                ))
                .collect();
            let c = census_of(&pairs);
            prop_assert_eq!(c.total(), mu);
            if let Some(k) = c.classes {
                prop_assert_eq!(k.temporarily_undefeated + k.current_front + k.interior, mu);
                prop_assert_eq!(c.offsets.values().sum::<usize>(), c.count(FirstBitPattern::P00));
            }
        }
    }
}
