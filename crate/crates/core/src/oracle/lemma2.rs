//! Probability that an improving bit-wise mutation gains exactly one 1-bit.
//!
//! For a parent with `a` zeros among `n` bits and mutation rate `1/n`, the
//! closed form is a ratio of double sums. Every term carries the factor
//! `(1/n)^{i+j} (1-1/n)^{n-i-j} = (n-1)^{n-i-j} / n^n`, so after clearing the
//! common `n^n` both sums are integers and the ratio is exact.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::combinatorics::{binomial_big, ln_binomial, log_sum_exp};
use crate::error::{Error, Result};

/// Largest `n` accepted by the mask enumeration.
pub const BRUTEFORCE_MAX_N: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    /// Integer sums with one final rounding.
    #[default]
    Exact,
    /// Log-space accumulation in `f64`; for large `n`.
    LogSpace,
}

fn check_domain(n: usize, a: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if a < 1 || a > n {
        return Err(Error::domain("a", a, "1 <= a <= n"));
    }
    Ok(())
}

/// `Pr[|Y| - |X| = 1 | |Y| > |X|]` from the closed-form ratio.
pub fn lemma2_exact(n: usize, a: usize) -> Result<f64> {
    lemma2(n, a, Precision::Exact)
}

pub fn lemma2(n: usize, a: usize, precision: Precision) -> Result<f64> {
    check_domain(n, a)?;
    Ok(match precision {
        Precision::Exact => {
            let (num, den) = lemma2_integer_sums(n, a);
            BigRational::new(num.into(), den.into())
                .to_f64()
                .expect("ratio in (0, 1]")
        }
        Precision::LogSpace => lemma2_log_space(n, a),
    })
}

/// Numerator and denominator sums scaled by `n^n`.
pub fn lemma2_integer_sums(n: usize, a: usize) -> (BigUint, BigUint) {
    let q = BigUint::from(n - 1);
    let mut num = BigUint::ZERO;
    let mut den = BigUint::ZERO;
    for i in 1..=a {
        let ca = binomial_big(a, i);
        if i - 1 <= n - a {
            num += &ca * binomial_big(n - a, i - 1) * q.pow((n + 1 - 2 * i) as u32);
        }
        for j in 0..i.min(n - a + 1) {
            den += &ca * binomial_big(n - a, j) * q.pow((n - i - j) as u32);
        }
    }
    (num, den)
}

fn lemma2_log_space(n: usize, a: usize) -> f64 {
    let ln_q = ((n - 1) as f64).ln();
    let num = log_sum_exp((1..=a).filter(|&i| i - 1 <= n - a).map(|i| {
        ln_binomial(a, i) + ln_binomial(n - a, i - 1) + (n + 1 - 2 * i) as f64 * ln_q
    }));
    let den = log_sum_exp((1..=a).flat_map(|i| {
        (0..i.min(n - a + 1))
            .map(move |j| ln_binomial(a, i) + ln_binomial(n - a, j) + (n - i - j) as f64 * ln_q)
    }));
    (num - den).exp()
}

/// The same probability by enumerating all `2^n` mutation masks of a fixed
/// parent with `a` zeros.
pub fn lemma2_bruteforce(n: usize, a: usize) -> Result<f64> {
    check_domain(n, a)?;
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge {
            what: "mask enumeration dimension",
            size: n,
            limit: BRUTEFORCE_MAX_N,
        });
    }
    // parent: zeros in positions 0..a, ones elsewhere
    let parent: u32 = ((1u32 << n) - 1) & !((1u32 << a) - 1);
    let parent_ones = parent.count_ones();
    let q = (n - 1) as u128;
    let weights: Vec<u128> = (0..=n).map(|k| q.pow((n - k) as u32)).collect();
    let mut gain_one: u128 = 0;
    let mut gain_any: u128 = 0;
    for mask in 0u32..(1u32 << n) {
        let child_ones = (parent ^ mask).count_ones();
        if child_ones > parent_ones {
            let w = weights[mask.count_ones() as usize];
            gain_any += w;
            if child_ones == parent_ones + 1 {
                gain_one += w;
            }
        }
    }
    Ok(gain_one as f64 / gain_any as f64)
}

/// The lower bound `1 - e a / n`.
pub fn lemma2_lower_bound(n: usize, a: usize) -> f64 {
    1.0 - std::f64::consts::E * a as f64 / n as f64
}
