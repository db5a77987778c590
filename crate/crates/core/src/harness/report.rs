use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use super::stats::{mean_and_variance, wilson_interval};
use crate::algorithms::{OutcomeKind, TrialOutcome};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "algorithm,n,mu,trials,opt_count,eventI_count,eventII_count,budget_count,\
success_rate,wilson95_lo,wilson95_hi,cond_mean_gens,cond_var_gens,theorem_bound,seed";

/// Rounds to 6 significant digits. Reports store the rounded value, so what
/// is written is exactly what is read back.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

/// One aggregated sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub mu: usize,
    pub trials: u64,
    pub opt_count: u64,
    #[serde(rename = "eventI_count")]
    pub event_i_count: u64,
    #[serde(rename = "eventII_count")]
    pub event_ii_count: u64,
    pub budget_count: u64,
    pub success_rate: f64,
    pub wilson95_lo: f64,
    pub wilson95_hi: f64,
    /// Over `OptimumFound` trials only.
    pub cond_mean_gens: Option<f64>,
    pub cond_var_gens: Option<f64>,
    pub theorem_bound: f64,
    pub seed: u64,
}

impl ReportRow {
    /// Builds a row from per-trial outcomes in trial order; `None` marks a
    /// trial that panicked.
    pub fn aggregate(
        algorithm: Algorithm,
        n: usize,
        mu: usize,
        seed: u64,
        outcomes: &[Option<TrialOutcome>],
        theorem_bound: f64,
    ) -> Result<Self> {
        let trials = outcomes.len() as u64;
        let count = |k: OutcomeKind| outcomes.iter().flatten().filter(|o| o.kind == k).count() as u64;
        let opt_count = count(OutcomeKind::OptimumFound);
        let gens: Vec<f64> = outcomes
            .iter()
            .flatten()
            .filter(|o| o.is_success())
            .map(|o| o.generation as f64)
            .collect();
        let (mean, var) = mean_and_variance(&gens);
        let (lo, hi) = wilson_interval(opt_count, trials, 0.95)?;
        Ok(Self {
            algorithm,
            n,
            mu,
            trials,
            opt_count,
            event_i_count: count(OutcomeKind::StagnatedEventI),
            event_ii_count: count(OutcomeKind::StagnatedEventII),
            budget_count: count(OutcomeKind::BudgetExhausted),
            success_rate: round_sig6(opt_count as f64 / trials as f64),
            wilson95_lo: round_sig6(lo),
            wilson95_hi: round_sig6(hi),
            cond_mean_gens: mean.map(round_sig6),
            cond_var_gens: var.map(round_sig6),
            theorem_bound: round_sig6(theorem_bound),
            seed,
        })
    }

    /// Trials that panicked; not a column, recovered from the counts.
    pub fn failed_count(&self) -> u64 {
        self.trials - self.opt_count - self.event_i_count - self.event_ii_count - self.budget_count
    }

    pub fn failure_rate(&self) -> f64 {
        1.0 - self.opt_count as f64 / self.trials as f64
    }

    /// Fraction of trials left out of the conditional runtime statistics.
    pub fn excluded_fraction(&self) -> f64 {
        self.failure_rate()
    }

    pub fn wilson(&self, confidence: f64) -> Result<(f64, f64)> {
        wilson_interval(self.opt_count, self.trials, confidence)
    }

    fn check(&self) -> Result<()> {
        let counted = [self.event_i_count, self.event_ii_count, self.budget_count]
            .into_iter()
            .try_fold(self.opt_count, |acc, c| acc.checked_add(c));
        if self.trials < 1 || counted.is_none_or(|c| c > self.trials) {
            let counted = counted.map_or_else(|| "overflowing".to_string(), |c| c.to_string());
            return Err(Error::Parse(format!(
                "row n={} mu={}: outcome counts {counted} exceed trials {}",
                self.n, self.mu, self.trials
            )));
        }
        let rate = |x: f64| (0.0..=1.0).contains(&x);
        if !(rate(self.success_rate) && rate(self.wilson95_lo) && rate(self.wilson95_hi)) {
            return Err(Error::Parse(format!("row n={} mu={}: rate outside [0, 1]", self.n, self.mu)));
        }
        Ok(())
    }
}

/// Mean wall-clock seconds per trial. Kept out of the files so that output
/// bytes are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTiming {
    pub n: usize,
    pub mu: usize,
    pub mean_trial_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    #[serde(skip)]
    pub timing: Vec<PointTiming>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("row serializes");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8");
        format!("{CSV_HEADER}\n{body}")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end_matches('\r') == CSV_HEADER => {}
            Some(h) => return Err(Error::Parse(format!("unexpected CSV header `{h}`"))),
            None => return Err(Error::Parse("empty CSV".into())),
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in r.deserialize::<ReportRow>() {
            let row = rec.map_err(|e| Error::Parse(e.to_string()))?;
            row.check()?;
            rows.push(row);
        }
        Ok(Self {
            rows,
            timing: Vec::new(),
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        for row in &report.rows {
            row.check()?;
        }
        Ok(report)
    }
}

pub fn write_report(report: &ExperimentReport, path: &Path, format: ReportFormat) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(report.render(format).as_bytes()).map_err(io)
}

pub fn read_report(path: &Path, format: ReportFormat) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        ReportFormat::Csv => ExperimentReport::parse_csv(&text),
        ReportFormat::Json => ExperimentReport::parse_json(&text),
    }
}
