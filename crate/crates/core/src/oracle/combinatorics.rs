//! Log-factorials and binomial coefficients.

use std::sync::OnceLock;

use num_bigint::BigUint;

/// `ln k!` for `k = 0..=LIMIT`, built once.
const LIMIT: usize = 4096;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LIMIT + 1);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..=LIMIT {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

pub fn ln_factorial(k: usize) -> f64 {
    assert!(k <= LIMIT, "ln_factorial table covers k <= {LIMIT}");
    table()[k]
}

/// `ln C(n, k)`, or `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Numerically stable `ln(sum exp(x_i))`.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial_big(5, 2), BigUint::from(10u32));
        assert_eq!(binomial_big(5, 6), BigUint::ZERO);
        assert_eq!(binomial_big(0, 0), BigUint::from(1u32));
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial(3, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn large_binomial_in_log_space() {
        // C(1000, 500) ~ 2.7028824094543656e299
        let ln = ln_binomial(1000, 500);
        assert!((ln - 2.702_882_409_454_365_6e299f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn lse() {
        let v = log_sum_exp([1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp([]), f64::NEG_INFINITY);
    }
}
