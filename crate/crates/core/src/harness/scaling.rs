use std::fmt;

use super::report::ExperimentReport;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingEntry {
    pub n: usize,
    pub mu: usize,
    pub successes: u64,
    pub cond_mean_gens: Option<f64>,
    /// `cond_mean_gens / (mu n)`; absent when the point has fewer than two
    /// successful trials.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingTable {
    pub entries: Vec<ScalingEntry>,
    /// Points whose ratio was omitted.
    pub flagged: Vec<usize>,
    /// Largest ratio over smallest, over the points that have one.
    pub spread: Option<f64>,
}

impl ScalingTable {
    /// All points have a ratio and they agree within `factor`.
    pub fn within(&self, factor: f64) -> bool {
        self.flagged.is_empty() && self.spread.is_some_and(|s| s <= factor)
    }
}

impl fmt::Display for ScalingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n,mu,successes,cond_mean_gens,ratio")?;
        for e in &self.entries {
            let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
            writeln!(
                f,
                "{},{},{},{},{}",
                e.n,
                e.mu,
                e.successes,
                opt(e.cond_mean_gens),
                opt(e.ratio)
            )?;
        }
        Ok(())
    }
}

/// Conditional mean generations over `mu n`, per point of a sweep.
pub fn runtime_scaling_check(report: &ExperimentReport) -> Result<ScalingTable> {
    if report.rows.len() < 2 {
        return Err(Error::Scaling(format!(
            "need at least 2 points, got {}",
            report.rows.len()
        )));
    }
    let mut entries = Vec::new();
    let mut flagged = Vec::new();
    for row in &report.rows {
        let ratio = match row.cond_mean_gens {
            Some(m) if row.opt_count >= 2 => Some(m / (row.mu as f64 * row.n as f64)),
            _ => {
                flagged.push(row.n);
                None
            }
        };
        entries.push(ScalingEntry {
            n: row.n,
            mu: row.mu,
            successes: row.opt_count,
            cond_mean_gens: row.cond_mean_gens,
            ratio,
        });
    }
    let ratios: Vec<f64> = entries.iter().filter_map(|e| e.ratio).collect();
    let spread = (ratios.len() >= 2).then(|| {
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        max / min
    });
    Ok(ScalingTable {
        entries,
        flagged,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{OutcomeKind, TrialOutcome};
    use crate::harness::report::ReportRow;
    use crate::harness::Algorithm;

    fn row(n: usize, mu: usize, gens: &[u64]) -> ReportRow {
        let mut outcomes: Vec<_> = gens
            .iter()
            .map(|&g| Some(TrialOutcome::new(OutcomeKind::OptimumFound, g)))
            .collect();
        outcomes.push(Some(TrialOutcome::new(OutcomeKind::StagnatedEventI, 3)));
        ReportRow::aggregate(Algorithm::MuEa, n, mu, 0, &outcomes, 0.0).unwrap()
    }

    fn report(rows: Vec<ReportRow>) -> ExperimentReport {
        ExperimentReport {
            rows,
            timing: Vec::new(),
        }
    }

    #[test]
    fn ratios() {
        let t = runtime_scaling_check(&report(vec![row(10, 5, &[40, 60]), row(20, 5, &[150, 250])])).unwrap();
        assert_eq!(t.entries[0].ratio, Some(1.0));
        assert_eq!(t.entries[1].ratio, Some(2.0));
        assert_eq!(t.spread, Some(2.0));
        assert!(t.within(2.0) && !t.within(1.5));
    }

    #[test]
    fn single_point_is_an_error() {
        assert!(matches!(
            runtime_scaling_check(&report(vec![row(10, 5, &[40, 60])])),
            Err(Error::Scaling(_))
        ));
    }

    #[test]
    fn no_successes_flagged() {
        let t = runtime_scaling_check(&report(vec![row(10, 5, &[40, 60]), row(20, 5, &[])])).unwrap();
        assert_eq!(t.flagged, vec![20]);
        assert_eq!(t.entries[1].ratio, None);
        assert!(!t.within(100.0));
    }
}
