//! Probability bounds from the main theorems and the population-size rule.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lower bound on a probability, unclamped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    /// The value is not positive, so it says nothing.
    pub vacuous: bool,
    /// The theorem's hypotheses on `n` (and `mu`) hold.
    pub preconditions_met: bool,
}

impl Bound {
    fn new(value: f64, preconditions_met: bool) -> Self {
        Self {
            value,
            vacuous: value <= 0.0,
            preconditions_met,
        }
    }
}

/// Probability that RLS or the (1+1) EA never finds the optimum:
/// `1 - (n+1) exp(-n^{1/3}/e) - (e+1)/n^{1/3}`; stated for `n >= 6`.
pub fn theorem1_bound(n: usize) -> Result<Bound> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    let nf = n as f64;
    let c = nf.cbrt();
    let v = 1.0 - (nf + 1.0) * (-c / E).exp() - (E + 1.0) / c;
    Ok(Bound::new(v, n >= 6))
}

fn population_bound(n: usize, mu: usize, delta: f64, front_factor: f64) -> Result<Bound> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if mu < 1 {
        return Err(Error::domain("mu", mu, "mu >= 1"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("delta", delta, "delta > 0"));
    }
    let nf = n as f64;
    let v = 1.0
        - (mu as f64 + 2.0) * (-nf / 8.0).exp()
        - (-delta * delta * (nf - 1.0) / (2.0 * (1.0 + delta))).exp()
        - front_factor * nf * (-nf.sqrt() / 20.0).exp();
    let n_ok = nf > (4.0 * (1.0 + delta) * E).powi(2);
    let mu_ok = mu >= min_population(n, delta)?;
    Ok(Bound::new(v, n_ok && mu_ok))
}

/// Success probability of the (mu+1) EA.
pub fn theorem2_bound(n: usize, mu: usize, delta: f64) -> Result<Bound> {
    population_bound(n, mu, delta, 2.0)
}

/// Probability of the event under which the runtime is `O(mu n)`.
pub fn theorem3_bound(n: usize, mu: usize, delta: f64) -> Result<Bound> {
    population_bound(n, mu, delta, 3.0)
}

/// Smallest integer `mu >= 4 (1 + delta) (3e + 1) (n + 1)`.
pub fn min_population(n: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("delta", delta, "delta > 0"));
    }
    let raw = 4.0 * (1.0 + delta) * (3.0 * E + 1.0) * (n as f64 + 1.0);
    Ok(raw.ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem1_large_and_small() {
        let big = theorem1_bound(1_000_000).unwrap();
        assert!(big.value > 0.0 && big.value < 1.0 && !big.vacuous);
        assert!((big.value - (1.0 - (E + 1.0) / 100.0)).abs() < 1e-9);
        let small = theorem1_bound(100).unwrap();
        assert!(small.value < 0.0 && small.vacuous);
        assert!(!theorem1_bound(5).unwrap().preconditions_met);
    }

    #[test]
    fn min_population_values() {
        // 4 (3e + 1) * 21 = 769.007...
        assert_eq!(min_population(20, 1e-9).unwrap(), 770);
        assert_eq!(min_population(10, 1e-9).unwrap(), 403);
        assert_eq!(min_population(40, 1e-9).unwrap(), 1502);
        assert!(min_population(20, 0.0).is_err());
    }

    #[test]
    fn theorem3_below_theorem2() {
        for n in [200, 1000, 100_000] {
            let mu = min_population(n, 0.5).unwrap();
            let b2 = theorem2_bound(n, mu, 0.5).unwrap();
            let b3 = theorem3_bound(n, mu, 0.5).unwrap();
            assert!(b3.value < b2.value);
        }
    }

    #[test]
    fn preconditions() {
        let b = theorem2_bound(20, 770, 1e-9).unwrap();
        assert!(!b.preconditions_met && b.vacuous);
        let n = 200_000;
        let mu = min_population(n, 1.0).unwrap();
        let b = theorem2_bound(n, mu, 1.0).unwrap();
        assert!(b.preconditions_met && !b.vacuous);
        assert!(!theorem2_bound(n, mu - 1, 1.0).unwrap().preconditions_met);
    }
}
