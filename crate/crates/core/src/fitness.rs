//! Time-linkage objectives.
//!
//! [`onemax01`] is OneMax on the current string minus `n` times the stored
//! previous first bit. [`TimeLinkageFunction`] is the windowed family it belongs
//! to, and [`OnlineHistory`] evaluates the exponentially discounted online
//! objective built from it.

use std::f64::consts::E;
use std::fmt;

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// Stored previous first bit plus the current string: everything the
/// objective needs from two consecutive time steps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TimePair {
    pub prev_first: bool,
    pub current: BitString,
}

impl TimePair {
    pub fn new(prev_first: bool, current: BitString) -> Self {
        Self {
            prev_first,
            current,
        }
    }

    pub fn dimension(&self) -> usize {
        self.current.len()
    }

    pub fn fitness(&self) -> i64 {
        onemax01(self)
    }
}

impl fmt::Debug for TimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", u8::from(self.prev_first), self.current)
    }
}

/// Value for a would-be pair `(prev_first, x)` with `ones` ones in `x`.
#[inline]
pub fn onemax01_value(n: usize, prev_first: bool, ones: usize) -> i64 {
    ones as i64 - if prev_first { n as i64 } else { 0 }
}

/// `sum_i x_i^t - n * x_1^{t-1}`, in `[-n, n]`.
#[inline]
pub fn onemax01(pair: &TimePair) -> i64 {
    onemax01_value(pair.dimension(), pair.prev_first, pair.current.count_ones())
}

/// The unique maximizer: stored first bit 0 and current string all ones.
#[inline]
pub fn is_optimum(pair: &TimePair) -> bool {
    !pair.prev_first && pair.current.is_all_ones()
}

/// An objective `h(x^{t0}, ..., x^{t0+l}) = sum_t h_t(x^{t0+t}; x^{t0}, ..., x^{t0+t-1})`
/// over a fixed window of `l` historical solutions.
pub trait TimeLinkageFunction {
    fn window(&self) -> usize;

    fn dimension(&self) -> usize;

    /// The `t`-th summand, given the current solution and the `t` before it.
    fn component(&self, t: usize, current: &BitString, earlier: &[BitString]) -> f64;

    /// Sums all components over exactly `window() + 1` consecutive solutions.
    fn evaluate(&self, solutions: &[BitString]) -> Result<f64> {
        if solutions.len() != self.window() + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.window() + 1,
                found: solutions.len(),
            });
        }
        for s in solutions {
            if s.len() != self.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension(),
                    found: s.len(),
                });
            }
        }
        Ok((0..solutions.len())
            .map(|t| self.component(t, &solutions[t], &solutions[..t]))
            .sum())
    }
}

/// The `l = 1` instance: `h_0 = -n x_1^{t0}`, `h_1 = sum_i x_i^{t0+1}`.
#[derive(Clone, Copy, Debug)]
pub struct OneMax01 {
    n: usize,
}

impl OneMax01 {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self { n })
    }
}

impl TimeLinkageFunction for OneMax01 {
    fn window(&self) -> usize {
        1
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn component(&self, t: usize, current: &BitString, _earlier: &[BitString]) -> f64 {
        match t {
            0 => -(self.n as f64) * f64::from(u8::from(current.first())),
            1 => current.count_ones() as f64,
            _ => 0.0,
        }
    }
}

/// History `x^0, ..., x^t` of the online problem.
///
/// Only first bits of earlier steps enter the objective, so those are kept
/// for every step while full strings are kept for the last two. The discounted
/// historical term is maintained incrementally.
#[derive(Clone, Debug)]
pub struct OnlineHistory {
    first_bits: Vec<bool>,
    prev: BitString,
    current: BitString,
    // sum_{tau=2}^{t} e^{-t+tau-1} x_1^{tau-2}
    residual: f64,
}

impl OnlineHistory {
    /// Starts from the two given solutions `x^0` and `x^1`; current time is 1.
    pub fn new(x0: BitString, x1: BitString) -> Result<Self> {
        if x0.len() != x1.len() {
            return Err(Error::DimensionMismatch {
                expected: x0.len(),
                found: x1.len(),
            });
        }
        Ok(Self {
            first_bits: vec![x0.first(), x1.first()],
            prev: x0,
            current: x1,
            residual: 0.0,
        })
    }

    pub fn from_solutions(solutions: Vec<BitString>) -> Result<Self> {
        let mut it = solutions.into_iter();
        let (Some(x0), Some(x1)) = (it.next(), it.next()) else {
            return Err(Error::domain("history length", "< 2", "at least x^0 and x^1"));
        };
        let mut h = Self::new(x0, x1)?;
        for x in it {
            h.push(x)?;
        }
        Ok(h)
    }

    /// Advances time by one.
    pub fn push(&mut self, x: BitString) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        // R(t) = e^{-1} (R(t-1) + x_1^{t-2}); the new t-2 is the old t-1.
        self.residual = (self.residual + f64::from(u8::from(self.prev.first()))) / E;
        self.first_bits.push(x.first());
        self.prev = std::mem::replace(&mut self.current, x);
        Ok(())
    }

    pub fn time(&self) -> usize {
        self.first_bits.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.current.len()
    }

    /// `x_1^tau` for `tau = 0..=t`.
    pub fn first_bits(&self) -> &[bool] {
        &self.first_bits
    }

    pub fn current(&self) -> &BitString {
        &self.current
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// The pair formed by the last two time steps.
    pub fn last_pair(&self) -> TimePair {
        TimePair::new(self.prev.first(), self.current.clone())
    }

    pub fn last_pair_value(&self) -> i64 {
        onemax01_value(self.dimension(), self.prev.first(), self.current.count_ones())
    }
}

/// Discounted residual plus OneMax01 of the last two steps; requires `t >= 2`.
pub fn online_objective(history: &OnlineHistory) -> Result<f64> {
    if history.time() < 2 {
        return Err(Error::domain("t", history.time(), "t >= 2"));
    }
    Ok(history.residual + history.last_pair_value() as f64)
}
