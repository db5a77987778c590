//! Tail bounds for sums of independent random variables.

use crate::error::{Error, Result};

/// `Pr[X <= (1 - delta) E[X]] <= exp(-delta^2 E[X] / 2)` for variables in `[0, 1]`.
pub fn chernoff_lower(expectation: f64, delta: f64) -> Result<f64> {
    if !(expectation >= 0.0 && expectation.is_finite()) {
        return Err(Error::domain("expectation", expectation, "finite and >= 0"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain("delta", delta, "[0, 1]"));
    }
    Ok((-delta * delta * expectation / 2.0).exp())
}

/// `Pr[X >= E[X] + lambda] <= exp(-2 lambda^2 / sum c_i)` for variables with
/// ranges of length `c_i`.
pub fn chernoff_additive(ranges: &[f64], lambda: f64) -> Result<f64> {
    if ranges.iter().any(|&c| !(c > 0.0 && c.is_finite())) || ranges.is_empty() {
        return Err(Error::domain("ranges", format!("{ranges:?}"), "non-empty, each c_i > 0"));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "lambda >= 0"));
    }
    let total: f64 = ranges.iter().sum();
    Ok((-2.0 * lambda * lambda / total).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    Upper,
    Lower,
}

/// Bounds for a sum of `m` geometric variables with success probability `p`.
///
/// Upper: `Pr[X >= (1 + delta) E[X]] <= exp(-delta^2 (m - 1) / (2 (1 + delta)))`, `delta >= 0`.
/// Lower: `Pr[X <= (1 - delta) E[X]] <= exp(-delta^2 m / (2 - 4 delta / 3))`, `delta` in `[0, 1]`.
pub fn chernoff_geometric(m: usize, p: f64, delta: f64, tail: Tail) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("m", m, "m >= 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain("p", p, "(0, 1]"));
    }
    let m = m as f64;
    match tail {
        Tail::Upper => {
            if !(delta >= 0.0 && delta.is_finite()) {
                return Err(Error::domain("delta", delta, "delta >= 0"));
            }
            Ok((-delta * delta * (m - 1.0) / (2.0 * (1.0 + delta))).exp())
        }
        Tail::Lower => {
            if !(0.0..=1.0).contains(&delta) {
                return Err(Error::domain("delta", delta, "[0, 1]"));
            }
            Ok((-delta * delta * m / (2.0 - 4.0 * delta / 3.0)).exp())
        }
    }
}
