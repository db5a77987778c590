//! One-bit and standard bit-wise mutation.
//!
//! Both operators are expressed as a list of positions to flip so callers can
//! evaluate an offspring's ones-count before materializing it.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::rng::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationKind {
    /// Flip exactly one uniformly chosen bit (RLS).
    OneBit,
    /// Flip every bit independently with probability 1/n ((1+1) EA).
    Bitwise,
}

impl MutationKind {
    pub fn sample_flips(self, n: usize, rng: &mut RandomStream, out: &mut Vec<usize>) {
        match self {
            MutationKind::OneBit => one_bit_flips(n, rng, out),
            MutationKind::Bitwise => bitwise_flips(n, 1.0 / n as f64, rng, out),
        }
    }

    pub fn apply(self, x: &BitString, rng: &mut RandomStream) -> BitString {
        let mut flips = Vec::new();
        self.sample_flips(x.len(), rng, &mut flips);
        x.with_flips(&flips)
    }
}

pub fn one_bit_flips(n: usize, rng: &mut RandomStream, out: &mut Vec<usize>) {
    out.clear();
    out.push(rng.random_range(0..n));
}

/// Positions flipped when each of `n` bits flips independently with probability `rate`.
///
/// Gaps between flipped positions are geometric, so the cost is proportional to
/// the number of flips rather than to `n`.
pub fn bitwise_flips(n: usize, rate: f64, rng: &mut RandomStream, out: &mut Vec<usize>) {
    out.clear();
    if rate <= 0.0 {
        return;
    }
    if rate >= 1.0 {
        out.extend(0..n);
        return;
    }
    let gap = Geometric::new(rate).expect("rate in (0, 1)");
    let mut pos: u64 = 0;
    loop {
        pos = pos.saturating_add(gap.sample(rng));
        if pos >= n as u64 {
            break;
        }
        out.push(pos as usize);
        pos += 1;
    }
}

pub fn one_bit_mutation(x: &BitString, rng: &mut RandomStream) -> BitString {
    MutationKind::OneBit.apply(x, rng)
}

pub fn bitwise_mutation(x: &BitString, rng: &mut RandomStream) -> BitString {
    MutationKind::Bitwise.apply(x, rng)
}

pub fn bitwise_mutation_with_rate(x: &BitString, rate: f64, rng: &mut RandomStream) -> BitString {
    let mut flips = Vec::new();
    bitwise_flips(x.len(), rate, rng, &mut flips);
    x.with_flips(&flips)
}

pub fn uniform_random_bitstring(n: usize, rng: &mut RandomStream) -> crate::Result<BitString> {
    BitString::random(n, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DRAWS: usize = 100_000;

    #[test]
    fn uniform_bits_are_balanced() {
        let mut rng = RandomStream::new(1, 0);
        let mut counts = [0usize; 4];
        for _ in 0..DRAWS {
            let s = uniform_random_bitstring(4, &mut rng).unwrap();
            for (i, c) in counts.iter_mut().enumerate() {
                *c += usize::from(s.get(i));
            }
        }
        for c in counts {
            let mean = c as f64 / DRAWS as f64;
            assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        }
    }

    #[test]
    fn uniform_single_bit_and_zero_dimension() {
        let mut rng = RandomStream::new(2, 0);
        let s = uniform_random_bitstring(1, &mut rng).unwrap();
        assert_eq!(s.len(), 1);
        assert!(uniform_random_bitstring(0, &mut rng).is_err());
    }

    #[test]
    fn uniform_is_reproducible() {
        let a = uniform_random_bitstring(100, &mut RandomStream::new(5, 9)).unwrap();
        let b = uniform_random_bitstring(100, &mut RandomStream::new(5, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_bit_on_single_bit() {
        let x: BitString = "0".parse().unwrap();
        let y = one_bit_mutation(&x, &mut RandomStream::new(0, 0));
        assert_eq!(y.to_string(), "1");
    }

    #[test]
    fn one_bit_chooses_uniformly() {
        let x: BitString = "00".parse().unwrap();
        let mut rng = RandomStream::new(3, 0);
        let mut first = 0usize;
        for _ in 0..DRAWS {
            let y = one_bit_mutation(&x, &mut rng);
            assert_eq!(x.hamming(&y).unwrap(), 1);
            if y.to_string() == "10" {
                first += 1;
            }
        }
        let freq = first as f64 / DRAWS as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn bitwise_on_single_bit_always_flips() {
        let x: BitString = "0".parse().unwrap();
        let mut rng = RandomStream::new(4, 0);
        for _ in 0..100 {
            assert_eq!(bitwise_mutation(&x, &mut rng).to_string(), "1");
        }
    }

    #[test]
    fn bitwise_flip_count_matches_binomial() {
        let n = 100;
        let x = BitString::zeros(n).unwrap();
        let mut rng = RandomStream::new(5, 0);
        let counts: Vec<f64> = (0..DRAWS)
            .map(|_| bitwise_mutation(&x, &mut rng).count_ones() as f64)
            .collect();
        let m = DRAWS as f64;
        let mean = counts.iter().sum::<f64>() / m;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0);
        // Binomial(100, 1/100): mean 1, variance 0.99.
        let p = 1.0 / n as f64;
        let (mu, sigma2) = (1.0, n as f64 * p * (1.0 - p));
        assert!((mean - 1.0).abs() < 0.05);
        assert!((mean - mu).abs() < 3.0 * (sigma2 / m).sqrt(), "mean {mean}");
        // Var of the sample variance ~ (mu4 - sigma^4) / m.
        let mu4 = sigma2 * (1.0 + 3.0 * (n as f64 - 2.0) * p * (1.0 - p));
        let se_var = ((mu4 - sigma2 * sigma2) / m).sqrt();
        // the normal approximation to the sample variance is rough, so 4 se
        assert!((var - sigma2).abs() < 4.0 * se_var, "var {var}");
    }

    #[test]
    fn bitwise_keeps_parent_with_expected_probability() {
        // (1 - 1/10)^10 = 0.3486784401
        let x = BitString::zeros(10).unwrap();
        let mut rng = RandomStream::new(6, 0);
        let same = (0..DRAWS)
            .filter(|_| bitwise_mutation(&x, &mut rng) == x)
            .count();
        let freq = same as f64 / DRAWS as f64;
        assert!((freq - 0.348_678_440_1).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn flips_are_sorted_and_distinct() {
        let mut rng = RandomStream::new(8, 0);
        let mut out = Vec::new();
        for _ in 0..1000 {
            bitwise_flips(20, 0.3, &mut rng, &mut out);
            assert!(out.windows(2).all(|w| w[0] < w[1]));
            assert!(out.iter().all(|&p| p < 20));
        }
    }
}
