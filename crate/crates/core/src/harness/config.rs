use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::{default_budget_population, default_budget_single};
use crate::error::{Error, Result};
use crate::mutation::MutationKind;
use crate::oracle::min_population;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rls,
    Oea,
    MuEa,
    /// RLS or (1+1) EA driven in online mode.
    Online,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Rls, Algorithm::Oea, Algorithm::MuEa, Algorithm::Online];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rls => "rls",
            Algorithm::Oea => "oea",
            Algorithm::MuEa => "muea",
            Algorithm::Online => "online",
        }
    }

    pub fn code(self) -> u64 {
        match self {
            Algorithm::Rls => 1,
            Algorithm::Oea => 2,
            Algorithm::MuEa => 3,
            Algorithm::Online => 4,
        }
    }

    pub fn uses_population(self) -> bool {
        self == Algorithm::MuEa
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rls" => Ok(Algorithm::Rls),
            "oea" | "1+1" | "(1+1)" => Ok(Algorithm::Oea),
            "muea" | "mu+1" | "(mu+1)" => Ok(Algorithm::MuEa),
            "online" => Ok(Algorithm::Online),
            other => Err(Error::Parse(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuRule {
    Explicit(Vec<usize>),
    /// `min_population(n, delta)` for each `n`.
    TheoremMinimum { delta: f64 },
}

impl Default for MuRule {
    fn default() -> Self {
        MuRule::Explicit(vec![1])
    }
}

fn default_trials() -> u64 {
    100
}

fn default_one() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_delta() -> f64 {
    1e-9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub mu_rule: MuRule,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Multiplier over the default generation budget.
    #[serde(default = "default_one")]
    pub budget_mult: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub early_exit: bool,
    /// Worker threads; `None` uses every core. Never affects results.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Mutation used by the online driver.
    #[serde(default = "default_online_mutation")]
    pub online_mutation: MutationKind,
    /// `delta` used for the population bound when `mu_rule` is explicit.
    #[serde(default = "default_delta")]
    pub bound_delta: f64,
}

fn default_online_mutation() -> MutationKind {
    MutationKind::Bitwise
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, n_values: Vec<usize>) -> Self {
        Self {
            algorithm,
            n_values,
            mu_rule: MuRule::default(),
            trials: default_trials(),
            budget_mult: 1.0,
            seed: 0,
            early_exit: true,
            threads: None,
            online_mutation: default_online_mutation(),
            bound_delta: default_delta(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::config("n_values", "must not be empty"));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(Error::config("n_values", format!("n = {n} is below 2")));
        }
        if self.trials < 1 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if !(self.budget_mult > 0.0 && self.budget_mult.is_finite()) {
            return Err(Error::config("budget_mult", "must be positive and finite"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        if !(self.bound_delta > 0.0 && self.bound_delta.is_finite()) {
            return Err(Error::config("bound_delta", "must be positive and finite"));
        }
        match &self.mu_rule {
            MuRule::Explicit(mus) => {
                if mus.is_empty() {
                    return Err(Error::config("mu_rule", "explicit list must not be empty"));
                }
                if mus.contains(&0) {
                    return Err(Error::config("mu_rule", "mu must be at least 1"));
                }
            }
            MuRule::TheoremMinimum { delta } => {
                if !(*delta > 0.0 && delta.is_finite()) {
                    return Err(Error::config("mu_rule", "delta must be positive and finite"));
                }
            }
        }
        for (_, _, budget) in self.points()? {
            if budget < 1 {
                return Err(Error::config("budget_mult", "budget rounds to zero generations"));
            }
        }
        Ok(())
    }

    /// `delta` used for the theorem bound column.
    pub fn delta(&self) -> f64 {
        match self.mu_rule {
            MuRule::TheoremMinimum { delta } => delta,
            MuRule::Explicit(_) => self.bound_delta,
        }
    }

    /// Every `(n, mu, budget)` point in sweep order. Single-individual
    /// algorithms report `mu = 1`.
    pub fn points(&self) -> Result<Vec<(usize, usize, u64)>> {
        let mut out = Vec::new();
        for &n in &self.n_values {
            if !self.algorithm.uses_population() {
                out.push((n, 1, self.scaled(default_budget_single(n))));
                continue;
            }
            let mus = match &self.mu_rule {
                MuRule::Explicit(mus) => mus.clone(),
                MuRule::TheoremMinimum { delta } => vec![min_population(n, *delta)?],
            };
            for mu in mus {
                out.push((n, mu, self.scaled(default_budget_population(n, mu))));
            }
        }
        Ok(out)
    }

    fn scaled(&self, base: u64) -> u64 {
        (base as f64 * self.budget_mult).round() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json() {
        let c = ExperimentConfig::from_json(r#"{"algorithm":"oea","n_values":[6,8]}"#).unwrap();
        assert_eq!(c.trials, 100);
        assert!(c.early_exit);
        assert_eq!(c.points().unwrap(), vec![(6, 1, 3600), (8, 1, 6400)]);
    }

    #[test]
    fn theorem_minimum_rule() {
        let c = ExperimentConfig::from_json(
            r#"{"algorithm":"muea","n_values":[20],"mu_rule":{"theorem_minimum":{"delta":1e-9}},"trials":3}"#,
        )
        .unwrap();
        assert_eq!(c.points().unwrap(), vec![(20, 770, 100 * 770 * 20)]);
    }

    #[test]
    fn field_level_errors() {
        let bad = |s: &str| match ExperimentConfig::from_json(s) {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        };
        assert_eq!(bad(r#"{"algorithm":"oea","n_values":[1]}"#), "n_values");
        assert_eq!(bad(r#"{"algorithm":"oea","n_values":[]}"#), "n_values");
        assert_eq!(bad(r#"{"algorithm":"oea","n_values":[4],"trials":0}"#), "trials");
        assert_eq!(bad(r#"{"algorithm":"oea","n_values":[4],"budget_mult":-1}"#), "budget_mult");
        assert_eq!(bad(r#"{"algorithm":"muea","n_values":[4],"mu_rule":{"explicit":[0]}}"#), "mu_rule");
        assert_eq!(bad(r#"{"algorithm":"oea","n_values":[4],"threads":0}"#), "threads");
        assert!(matches!(
            ExperimentConfig::from_json(r#"{"algorithm":"oea","n_values":[4],"bogus":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut c = ExperimentConfig::new(Algorithm::MuEa, vec![10, 20]);
        c.mu_rule = MuRule::Explicit(vec![5, 7]);
        let back = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("ga".parse::<Algorithm>().is_err());
    }
}
