//! Fixed-length packed bit strings with a cached ones-count.
//!
//! Position 0 holds the first bit `x_1`; the rest of the string is `x_2..x_n`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
    ones: usize,
}

impl BitString {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self {
            words: vec![0; n.div_ceil(WORD)],
            len: n,
            ones: 0,
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_tail();
        s.ones = n;
        Ok(s)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    /// Each bit independently 0 or 1 with probability 1/2.
    pub fn random(n: usize, rng: &mut RandomStream) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        for w in s.words.iter_mut() {
            *w = rng.random::<u64>();
        }
        s.clear_tail();
        s.ones = s.words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(s)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: zero-length strings cannot be constructed.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        let w = &mut self.words[i / WORD];
        if *w & mask == 0 {
            self.ones += 1;
        } else {
            self.ones -= 1;
        }
        *w ^= mask;
    }

    /// The first bit `x_1`.
    #[inline]
    pub fn first(&self) -> bool {
        self.words[0] & 1 == 1
    }

    #[inline]
    pub fn is_all_ones(&self) -> bool {
        self.ones == self.len
    }

    /// Whether `x_2..x_n` are all ones (vacuously true for n = 1).
    #[inline]
    pub fn rest_all_ones(&self) -> bool {
        self.ones - usize::from(self.first()) == self.len - 1
    }

    /// Number of ones among `x_2..x_n`.
    #[inline]
    pub fn rest_ones(&self) -> usize {
        self.ones - usize::from(self.first())
    }

    /// Copy with the listed positions flipped. Positions must be distinct.
    pub fn with_flips(&self, positions: &[usize]) -> Self {
        let mut out = self.clone();
        for &p in positions {
            out.flip(p);
        }
        out
    }

    /// Ones-count after flipping the listed distinct positions, without copying.
    pub fn ones_after_flips(&self, positions: &[usize]) -> usize {
        let mut ones = self.ones;
        for &p in positions {
            if self.get(p) {
                ones -= 1;
            } else {
                ones += 1;
            }
        }
        ones
    }

    pub fn hamming(&self, other: &Self) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, first character = `x_1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(BitString::zeros(0), Err(Error::InvalidDimension(0))));
        assert!("".parse::<BitString>().is_err());
    }

    #[test]
    fn parse_and_display() {
        let s: BitString = "1011".parse().unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.count_ones(), 3);
        assert!(s.first());
        assert!(!s.get(1));
        assert_eq!(s.to_string(), "1011");
        assert!("10a1".parse::<BitString>().is_err());
    }

    #[test]
    fn ones_across_word_boundary() {
        for n in [1, 63, 64, 65, 130] {
            let s = BitString::ones(n).unwrap();
            assert_eq!(s.count_ones(), n);
            assert!(s.is_all_ones());
            assert!(s.rest_all_ones());
        }
    }

    #[test]
    fn flip_keeps_count() {
        let mut s = BitString::zeros(70).unwrap();
        s.flip(0);
        s.flip(69);
        assert_eq!(s.count_ones(), 2);
        s.flip(69);
        assert_eq!(s.count_ones(), 1);
        assert_eq!(s.rest_ones(), 0);
    }

    #[test]
    fn rest_all_ones_ignores_first_bit() {
        let s: BitString = "0111".parse().unwrap();
        assert!(s.rest_all_ones());
        assert!(!s.is_all_ones());
        let t: BitString = "1101".parse().unwrap();
        assert!(!t.rest_all_ones());
    }

    #[test]
    fn random_strings_have_clean_tail() {
        let mut rng = RandomStream::new(7, 0);
        for n in [1, 5, 64, 100] {
            let s = BitString::random(n, &mut rng).unwrap();
            assert_eq!(s.iter().filter(|&b| b).count(), s.count_ones());
        }
    }
}
