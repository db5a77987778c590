//! The auxiliary functions whose monotonicity drives the population analysis.
//!
//! Each function has a `ln_` twin; the plain versions underflow for moderate
//! `n`, so comparisons should use the logarithms.

use super::combinatorics::ln_binomial;
use crate::error::{Error, Result};

fn check_a_n(a: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if a < 1 || a >= n {
        return Err(Error::domain("a", a, "1 <= a < n"));
    }
    Ok(())
}

/// `ln h1 = ln C(a+d-1, d) - (d+1) ln n` for `d` in `[0, n-a-1]`.
pub fn ln_h1(a: usize, n: usize, d: usize) -> Result<f64> {
    check_a_n(a, n)?;
    if d > n - a - 1 {
        return Err(Error::domain("d", d, "0 <= d <= n-a-1"));
    }
    Ok(ln_binomial(a + d - 1, d) - (d + 1) as f64 * (n as f64).ln())
}

/// `C(a+d-1, d) / n^{d+1}`.
pub fn h1(a: usize, n: usize, d: usize) -> Result<f64> {
    ln_h1(a, n, d).map(f64::exp)
}

/// `ln h2 = ln C(a+d-1, d-1) - d ln n` for `d` in `[1, n-a]`.
pub fn ln_h2(a: usize, n: usize, d: usize) -> Result<f64> {
    check_a_n(a, n)?;
    if d < 1 || d > n - a {
        return Err(Error::domain("d", d, "1 <= d <= n-a"));
    }
    Ok(ln_binomial(a + d - 1, d - 1) - d as f64 * (n as f64).ln())
}

/// `C(a+d-1, d-1) / n^d`.
pub fn h2(a: usize, n: usize, d: usize) -> Result<f64> {
    ln_h2(a, n, d).map(f64::exp)
}

/// `ln g = a ln a - a^2 ln n` for real `a` in `[1, sqrt n]`.
pub fn ln_g(a: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    let nf = n as f64;
    if !(a >= 1.0 && a <= nf.sqrt()) {
        return Err(Error::domain("a", a, "1 <= a <= sqrt(n)"));
    }
    Ok(a * a.ln() - a * a * nf.ln())
}

/// `a^a / n^{a^2}`.
pub fn g_fn(a: f64, n: usize) -> Result<f64> {
    ln_g(a, n).map(f64::exp)
}

/// `(4e)^2`, the lower end of the range where the inequality is claimed.
pub fn aux_threshold() -> f64 {
    (4.0 * std::f64::consts::E).powi(2)
}

/// Whether `(3/4)^{sqrt(n) - 1} <= n^{-1/2}`, compared in log space.
pub fn aux_ineq(n: f64) -> Result<bool> {
    if !(n > aux_threshold() && n.is_finite()) {
        return Err(Error::domain("n", n, "n > (4e)^2"));
    }
    Ok((n.sqrt() - 1.0) * 0.75f64.ln() <= -0.5 * n.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h1_small_values() {
        assert!((h1(2, 10, 0).unwrap() - 0.1).abs() < 1e-15);
        assert!((h1(2, 10, 1).unwrap() - 0.02).abs() < 1e-15);
        assert!(h1(2, 10, 8).is_err());
        assert!(h1(10, 10, 0).is_err());
    }

    #[test]
    fn h2_small_values() {
        // C(2,0)/10 and C(3,1)/100
        assert!((h2(2, 10, 1).unwrap() - 0.1).abs() < 1e-15);
        assert!((h2(2, 10, 2).unwrap() - 0.03).abs() < 1e-15);
        assert!(h2(2, 10, 0).is_err());
        assert!(h2(2, 10, 9).is_err());
    }

    #[test]
    fn g_at_one() {
        for n in [1, 4, 100, 12345] {
            assert!((g_fn(1.0, n).unwrap() - 1.0 / n as f64).abs() < 1e-15);
        }
        assert!(g_fn(0.5, 4).is_err());
        assert!(g_fn(2.5, 4).is_err());
    }

    #[test]
    fn aux_near_threshold() {
        assert!(aux_threshold() < 119.0 && aux_threshold() > 118.0);
        assert!(aux_ineq(119.0).unwrap());
        assert!(aux_ineq(118.0).is_err());
    }
}
