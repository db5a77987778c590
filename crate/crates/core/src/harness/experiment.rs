use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig};
use super::report::{ExperimentReport, PointTiming, ReportRow};
use crate::algorithms::{run_alg1, run_alg2, run_online_with, OnlineParams, OnlineStop};
use crate::algorithms::{OutcomeKind, RunOptions, TrialOutcome};
use crate::detection::{event_i, event_ii};
use crate::error::{Error, Result};
use crate::mutation::MutationKind;
use crate::oracle::{theorem1_bound, theorem2_bound};
use crate::rng::{splitmix64, RandomStream};

/// Stream domain for one sweep point, so that points never share streams.
pub fn point_domain(algorithm: Algorithm, n: usize, mu: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(algorithm.code()) ^ n as u64) ^ mu as u64)
}

/// Runs trial `trial` of the point `(n, mu)` with its own random stream.
pub fn run_trial(
    cfg: &ExperimentConfig,
    n: usize,
    mu: usize,
    budget: u64,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng = RandomStream::for_trial(cfg.seed, point_domain(cfg.algorithm, n, mu), trial);
    let opts = RunOptions {
        budget,
        early_exit: cfg.early_exit,
    };
    match cfg.algorithm {
        Algorithm::Rls => run_alg1(n, MutationKind::OneBit, opts, &mut rng),
        Algorithm::Oea => run_alg1(n, MutationKind::Bitwise, opts, &mut rng),
        Algorithm::MuEa => run_alg2(n, mu, opts, &mut rng),
        Algorithm::Online => online_trial(n, cfg.online_mutation, opts, &mut rng),
    }
}

/// The online driver with horizon and idle limit both set to the budget.
fn online_trial(
    n: usize,
    kind: MutationKind,
    opts: RunOptions,
    rng: &mut RandomStream,
) -> Result<TrialOutcome> {
    let params = OnlineParams {
        time_horizon: usize::try_from(opts.budget).unwrap_or(usize::MAX),
        budget_per_step: opts.budget,
        stop_on_stagnation: opts.early_exit,
    };
    let s = run_online_with(n, kind, params, rng, |_| {})?;
    let kind = if s.stop == OnlineStop::Goal {
        OutcomeKind::OptimumFound
    } else if event_i(&s.final_pair) {
        OutcomeKind::StagnatedEventI
    } else if event_ii(&s.final_pair) {
        OutcomeKind::StagnatedEventII
    } else {
        OutcomeKind::BudgetExhausted
    };
    Ok(TrialOutcome::new(kind, s.generations))
}

fn theorem_bound(cfg: &ExperimentConfig, n: usize, mu: usize) -> Result<f64> {
    Ok(match cfg.algorithm {
        Algorithm::MuEa => theorem2_bound(n, mu, cfg.delta())?.value,
        _ => theorem1_bound(n)?.value,
    })
}

/// Runs every point of the sweep. Trials fan out over a worker pool; their
/// outcomes are put back in trial order before aggregation, so the report
/// does not depend on the number of workers.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::config("threads", e.to_string()))?;
    let mut rows = Vec::new();
    let mut timing = Vec::new();
    for (n, mu, budget) in cfg.points()? {
        let results: Vec<(Option<TrialOutcome>, f64)> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let start = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(|| run_trial(cfg, n, mu, budget, t)));
                    (r.ok().and_then(|r| r.ok()), start.elapsed().as_secs_f64())
                })
                .collect()
        });
        let outcomes: Vec<Option<TrialOutcome>> = results.iter().map(|r| r.0).collect();
        let secs: f64 = results.iter().map(|r| r.1).sum();
        rows.push(ReportRow::aggregate(
            cfg.algorithm,
            n,
            mu,
            cfg.seed,
            &outcomes,
            theorem_bound(cfg, n, mu)?,
        )?);
        timing.push(PointTiming {
            n,
            mu,
            mean_trial_seconds: secs / cfg.trials as f64,
        });
    }
    Ok(ExperimentReport { rows, timing })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_rows() {
        let mut cfg = ExperimentConfig::new(Algorithm::Oea, vec![5, 8]);
        cfg.trials = 300;
        cfg.seed = 11;
        cfg.threads = Some(1);
        let a = run_experiment(&cfg).unwrap();
        cfg.threads = Some(4);
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn partition_holds() {
        for alg in Algorithm::ALL {
            let mut cfg = ExperimentConfig::new(alg, vec![6]);
            cfg.trials = 50;
            cfg.mu_rule = super::super::MuRule::Explicit(vec![3]);
            let r = run_experiment(&cfg).unwrap();
            let row = &r.rows[0];
            assert_eq!(
                row.opt_count + row.event_i_count + row.event_ii_count + row.budget_count,
                row.trials,
                "{alg}"
            );
        }
    }

    #[test]
    fn distinct_points_use_distinct_streams() {
        assert_ne!(point_domain(Algorithm::Oea, 6, 1), point_domain(Algorithm::Rls, 6, 1));
        assert_ne!(point_domain(Algorithm::MuEa, 6, 2), point_domain(Algorithm::MuEa, 2, 6));
    }
}
