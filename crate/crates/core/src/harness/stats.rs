use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials < 1 {
        return Err(Error::domain("trials", trials, "trials >= 1"));
    }
    if successes > trials {
        return Err(Error::domain("successes", successes, "successes <= trials"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain("confidence", confidence, "(0, 1)"));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Mean and unbiased variance; `None` where undefined.
pub fn mean_and_variance(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (Some(mean), None);
    }
    let ss = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    (Some(mean), Some(ss / (n - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundaries() {
        assert_eq!(wilson_interval(0, 10, 0.95).unwrap().0, 0.0);
        assert_eq!(wilson_interval(10, 10, 0.95).unwrap().1, 1.0);
        let (lo, hi) = wilson_interval(5, 10, 0.95).unwrap();
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!(lo > 0.2 && hi < 0.8);
    }

    #[test]
    fn reference_value() {
        // 95%: z = 1.959964; 8/10 gives (0.4901625, 0.9433178)
        let (lo, hi) = wilson_interval(8, 10, 0.95).unwrap();
        assert!((lo - 0.490_162_5).abs() < 1e-6, "{lo}");
        assert!((hi - 0.943_317_8).abs() < 1e-6, "{hi}");
    }

    #[test]
    fn domain_errors() {
        assert!(wilson_interval(1, 0, 0.95).is_err());
        assert!(wilson_interval(3, 2, 0.95).is_err());
        assert!(wilson_interval(1, 2, 1.0).is_err());
    }

    #[test]
    fn moments() {
        assert_eq!(mean_and_variance(&[]), (None, None));
        assert_eq!(mean_and_variance(&[3.0]), (Some(3.0), None));
        assert_eq!(mean_and_variance(&[1.0, 3.0]), (Some(2.0), Some(2.0)));
    }

    proptest! {
        #[test]
        fn interval_contains_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0, conf in 0.5f64..0.999) {
            let s = (frac * trials as f64).floor() as u64;
            let (lo, hi) = wilson_interval(s, trials, conf).unwrap();
            let p = s as f64 / trials as f64;
            prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
            let (lo99, hi99) = wilson_interval(s, trials, 0.99).unwrap();
            if conf < 0.99 {
                prop_assert!(lo99 <= lo + 1e-15 && hi <= hi99 + 1e-15);
            }
        }
    }
}
