//! Online "optimize the present" driver.
//!
//! The objective's time step advances exactly when a generation produces an
//! accepted offspring, so one time step may take many generations.

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::fitness::{online_objective, OnlineHistory, TimePair};
use crate::mutation::MutationKind;
use crate::rng::RandomStream;

use super::Alg1State;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OnlineParams {
    /// Stop once the objective's time reaches this value.
    pub time_horizon: usize,
    /// Stop when this many consecutive generations produce no acceptance.
    pub budget_per_step: u64,
    /// Stop as soon as the incumbent pair is in a stagnation event.
    pub stop_on_stagnation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnlineStop {
    /// The last two steps form the optimum pair (component value `n`).
    Goal,
    Horizon,
    /// `budget_per_step` generations without an acceptance.
    Stalled,
    /// Event I or II detected with `stop_on_stagnation` set.
    Stagnated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnlineRecord {
    pub t: usize,
    pub generation: u64,
    pub pair: TimePair,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct OnlineTrace {
    pub records: Vec<OnlineRecord>,
    pub stop: OnlineStop,
    pub generations: u64,
    pub final_pair: TimePair,
}

/// Summary of a run driven through [`run_online_with`].
#[derive(Clone, Debug)]
pub struct OnlineSummary {
    pub stop: OnlineStop,
    pub time: usize,
    pub generations: u64,
    pub final_pair: TimePair,
}

pub fn run_online(
    n: usize,
    kind: MutationKind,
    params: OnlineParams,
    rng: &mut RandomStream,
) -> Result<OnlineTrace> {
    let mut records = Vec::new();
    let summary = run_online_with(n, kind, params, rng, |r| records.push(r.clone()))?;
    Ok(OnlineTrace {
        records,
        stop: summary.stop,
        generations: summary.generations,
        final_pair: summary.final_pair,
    })
}

/// Streams one record per accepted offspring to `sink` instead of collecting.
pub fn run_online_with(
    n: usize,
    kind: MutationKind,
    params: OnlineParams,
    rng: &mut RandomStream,
    mut sink: impl FnMut(&OnlineRecord),
) -> Result<OnlineSummary> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if params.time_horizon < 1 || params.budget_per_step < 1 {
        return Err(Error::domain(
            "horizon",
            format!("{}/{}", params.time_horizon, params.budget_per_step),
            "time_horizon >= 1 and budget_per_step >= 1",
        ));
    }
    let x0 = BitString::random(n, rng)?;
    let x1 = BitString::random(n, rng)?;
    let mut history = OnlineHistory::new(x0.clone(), x1.clone())?;
    let mut state = Alg1State::new(TimePair::new(x0.first(), x1), kind);

    let finish = |stop, history: &OnlineHistory, state: &Alg1State| OnlineSummary {
        stop,
        time: history.time(),
        generations: state.generation(),
        final_pair: state.pair().clone(),
    };
    let check = |history: &OnlineHistory, state: &Alg1State| -> Option<OnlineStop> {
        if history.last_pair_value() == n as i64 {
            Some(OnlineStop::Goal)
        } else if params.stop_on_stagnation && state.stagnation().is_some() {
            Some(OnlineStop::Stagnated)
        } else if history.time() >= params.time_horizon {
            Some(OnlineStop::Horizon)
        } else {
            None
        }
    };

    if let Some(stop) = check(&history, &state) {
        return Ok(finish(stop, &history, &state));
    }
    let mut idle = 0u64;
    loop {
        if state.step(rng) {
            idle = 0;
            history.push(state.pair().current.clone())?;
            sink(&OnlineRecord {
                t: history.time(),
                generation: state.generation(),
                pair: state.pair().clone(),
                objective: online_objective(&history)?,
            });
            if let Some(stop) = check(&history, &state) {
                return Ok(finish(stop, &history, &state));
            }
        } else {
            idle += 1;
            if idle >= params.budget_per_step {
                return Ok(finish(OnlineStop::Stalled, &history, &state));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::event_i;
    use crate::fitness::onemax01;

    fn params(h: usize, b: u64) -> OnlineParams {
        OnlineParams {
            time_horizon: h,
            budget_per_step: b,
            stop_on_stagnation: false,
        }
    }

    #[test]
    fn goal_implies_value_above_n_minus_one() {
        let n = 3;
        let mut goals = 0;
        for t in 0..300 {
            let trace = run_online(n, MutationKind::OneBit, params(200, 200), &mut RandomStream::new(1, t))
                .unwrap();
            if trace.stop == OnlineStop::Goal {
                if let Some(last) = trace.records.last() {
                    goals += 1;
                    assert_eq!(onemax01(&last.pair), n as i64);
                    assert!(last.objective > n as f64 - 1.0);
                }
            }
        }
        assert!(goals > 0);
    }

    #[test]
    fn event_i_stalls_the_driver() {
        let mut stalled = 0;
        for t in 0..200 {
            let trace = run_online(8, MutationKind::Bitwise, params(10_000, 300), &mut RandomStream::new(2, t))
                .unwrap();
            if event_i(&trace.final_pair) {
                assert_eq!(trace.stop, OnlineStop::Stalled);
                stalled += 1;
            }
        }
        assert!(stalled > 0);
    }

    #[test]
    fn time_never_outruns_generations() {
        for t in 0..50 {
            let trace = run_online(10, MutationKind::Bitwise, params(500, 100), &mut RandomStream::new(3, t))
                .unwrap();
            let mut last_t = 1;
            for r in &trace.records {
                assert_eq!(r.t, last_t + 1);
                assert!(r.t as u64 <= r.generation + 1);
                last_t = r.t;
            }
        }
    }

    #[test]
    fn stop_on_stagnation() {
        let p = OnlineParams {
            stop_on_stagnation: true,
            ..params(100_000, 100_000)
        };
        for t in 0..50 {
            let trace = run_online(10, MutationKind::OneBit, p, &mut RandomStream::new(4, t)).unwrap();
            assert!(matches!(trace.stop, OnlineStop::Goal | OnlineStop::Stagnated));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RandomStream::new(0, 0);
        assert!(run_online(1, MutationKind::OneBit, params(5, 5), &mut rng).is_err());
        assert!(run_online(4, MutationKind::OneBit, params(0, 5), &mut rng).is_err());
        assert!(run_online(4, MutationKind::OneBit, params(5, 0), &mut rng).is_err());
    }
}
