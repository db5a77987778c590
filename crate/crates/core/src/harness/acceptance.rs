//! The built-in acceptance suite: exact-oracle agreement, oracle-versus-
//! simulation checks, absorption persistence, scaling and determinism.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig, MuRule};
use super::experiment::run_experiment;
use super::scaling::runtime_scaling_check;
use super::stats::wilson_interval;
use crate::algorithms::{Alg1State, Population};
use crate::bitstring::BitString;
use crate::detection::{event_i, event_i_prime, event_ii, event_ii_prime};
use crate::error::Result;
use crate::fitness::{is_optimum, TimePair};
use crate::mutation::MutationKind;
use crate::oracle::chernoff::{chernoff_additive, chernoff_geometric, chernoff_lower, Tail};
use crate::oracle::lemma2::{lemma2_bruteforce, lemma2_exact, lemma2_lower_bound};
use crate::oracle::markov::{full_index, markov_full_absorption, markov_lumped_absorption, LumpedState};
use crate::oracle::monotone::{aux_ineq, aux_threshold, ln_g, ln_h1, ln_h2};
use crate::rng::RandomStream;

pub const DEFAULT_SEED: u64 = 0x7469_6d65_6c69_6e6b;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "lemma2 exact vs enumeration"),
    (2, "markov vs monte carlo, n=6"),
    (3, "lumped vs full chain"),
    (4, "(1+1) EA failure trend"),
    (5, "(mu+1) EA success, n=20"),
    (6, "(mu+1) EA runtime scaling"),
    (7, "absorption persistence"),
    (8, "monotonicity suite"),
    (9, "chernoff evaluators"),
    (10, "determinism across workers"),
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Shared state: the seed, and CSV bytes of the runs that criterion 10
/// repeats.
pub struct Suite {
    pub seed: u64,
    csv_2: Option<String>,
    csv_5: Option<String>,
}

impl Suite {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            csv_2: None,
            csv_5: None,
        }
    }

    pub fn run(&mut self, id: u8) -> CriterionResult {
        let name = CRITERIA
            .iter()
            .find(|c| c.0 == id)
            .map(|c| c.1)
            .unwrap_or("unknown");
        let start = Instant::now();
        let outcome = match id {
            1 => lemma2_equivalence(),
            2 => self.markov_monte_carlo(),
            3 => lumped_validity(),
            4 => self.theorem1_trend(),
            5 => self.theorem2_success(),
            6 => self.theorem3_scaling(),
            7 => self.absorption_persistence(),
            8 => monotonicity(),
            9 => chernoff_suite(),
            10 => self.determinism(),
            _ => Ok((false, format!("no criterion {id}"))),
        };
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        CriterionResult {
            id,
            name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    pub fn run_all(&mut self) -> Vec<CriterionResult> {
        (1..=10).map(|id| self.run(id)).collect()
    }

    fn config_2(&self, alg: Algorithm, threads: Option<usize>) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(alg, vec![6]);
        cfg.trials = 100_000;
        cfg.seed = self.seed;
        cfg.threads = threads;
        cfg
    }

    fn config_5(&self, threads: Option<usize>) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(Algorithm::MuEa, vec![20]);
        cfg.mu_rule = MuRule::TheoremMinimum { delta: 1e-9 };
        cfg.trials = 100;
        cfg.seed = self.seed;
        cfg.threads = threads;
        cfg
    }

    fn csv_2(&self, threads: Option<usize>) -> Result<String> {
        let mut out = String::new();
        for alg in [Algorithm::Rls, Algorithm::Oea] {
            out.push_str(&run_experiment(&self.config_2(alg, threads))?.to_csv());
        }
        Ok(out)
    }

    fn markov_monte_carlo(&mut self) -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        let mut csv = String::new();
        for (alg, kind) in [(Algorithm::Rls, MutationKind::OneBit), (Algorithm::Oea, MutationKind::Bitwise)] {
            let report = run_experiment(&self.config_2(alg, None))?;
            csv.push_str(&report.to_csv());
            let row = &report.rows[0];
            let failures = row.trials - row.opt_count;
            let (lo, hi) = wilson_interval(failures, row.trials, 0.99)?;
            let predicted = markov_full_absorption(6, kind)?.failure_probability();
            let hit = (lo..=hi).contains(&predicted);
            ok &= hit;
            parts.push(format!(
                "{alg}: empirical {:.5} 99% [{lo:.5}, {hi:.5}] markov {predicted:.5}",
                failures as f64 / row.trials as f64
            ));
        }
        self.csv_2 = Some(csv);
        Ok((ok, parts.join("; ")))
    }

    fn theorem1_trend(&self) -> Result<(bool, String)> {
        let ns = [20, 50, 100, 200];
        let mut cfg = ExperimentConfig::new(Algorithm::Oea, ns.to_vec());
        cfg.trials = 1000;
        cfg.seed = self.seed;
        let report = run_experiment(&cfg)?;
        let mut ok = true;
        let mut parts = Vec::new();
        for (row, &n) in report.rows.iter().zip(&ns) {
            let pred = markov_lumped_absorption(n, MutationKind::Bitwise)?.failure_probability();
            let se = (pred * (1.0 - pred) / row.trials as f64).sqrt();
            let emp = row.failure_rate();
            let hit = (emp - pred).abs() <= 3.0 * se;
            ok &= hit;
            parts.push(format!("n={n} emp {emp:.4} pred {pred:.4} ({:.1} se)", (emp - pred).abs() / se));
            if n == 200 {
                ok &= pred >= 0.9;
            }
        }
        Ok((ok, parts.join("; ")))
    }

    fn theorem2_success(&mut self) -> Result<(bool, String)> {
        let report = run_experiment(&self.config_5(None))?;
        self.csv_5 = Some(report.to_csv());
        let row = &report.rows[0];
        Ok((
            row.success_rate >= 0.95,
            format!(
                "mu={} success {}/{} = {} (event I {}, event II {}, budget {})",
                row.mu,
                row.opt_count,
                row.trials,
                row.success_rate,
                row.event_i_count,
                row.event_ii_count,
                row.budget_count
            ),
        ))
    }

    fn theorem3_scaling(&self) -> Result<(bool, String)> {
        let mut cfg = ExperimentConfig::new(Algorithm::MuEa, vec![10, 20, 40]);
        cfg.mu_rule = MuRule::TheoremMinimum { delta: 1e-9 };
        cfg.trials = 100;
        cfg.seed = self.seed;
        let table = runtime_scaling_check(&run_experiment(&cfg)?)?;
        let ratios: Vec<String> = table
            .entries
            .iter()
            .map(|e| match e.ratio {
                Some(r) => format!("n={} mu={} ratio {r:.4} ({} ok)", e.n, e.mu, e.successes),
                None => format!("n={} mu={} ratio - ({} ok)", e.n, e.mu, e.successes),
            })
            .collect();
        let spread = table.spread.map_or("-".into(), |s| format!("{s:.3}"));
        Ok((table.within(2.0), format!("{}; spread {spread}", ratios.join("; "))))
    }

    fn absorption_persistence(&self) -> Result<(bool, String)> {
        const TRIALS: u64 = 1000;
        const STEPS: u64 = 10_000;
        let seed = self.seed;
        let single = |event_ii_case: bool| -> Vec<bool> {
            (0..TRIALS)
                .into_par_iter()
                .map(|t| {
                    let mut rng = RandomStream::for_trial(seed, 70 + event_ii_case as u64, t);
                    let n = rng.random_range(3..=30);
                    let kind = if rng.random_bool(0.5) { MutationKind::OneBit } else { MutationKind::Bitwise };
                    let pair = if event_ii_case { event_ii_pair(n) } else { event_i_pair(n, &mut rng) };
                    let holds = |p: &TimePair| if event_ii_case { event_ii(p) } else { event_i(p) };
                    let mut s = Alg1State::new(pair, kind);
                    (0..STEPS).all(|_| {
                        s.step(&mut rng);
                        holds(s.pair()) && !is_optimum(s.pair())
                    })
                })
                .collect()
        };
        let population = |event_ii_case: bool| -> Vec<bool> {
            (0..TRIALS)
                .into_par_iter()
                .map(|t| {
                    let mut rng = RandomStream::for_trial(seed, 72 + event_ii_case as u64, t);
                    let n = rng.random_range(3..=30);
                    let mu = rng.random_range(1..=8);
                    let slots = (0..mu)
                        .map(|_| if event_ii_case { event_ii_pair(n) } else { event_i_pair(n, &mut rng) })
                        .collect();
                    let mut pop = Population::new(slots).expect("valid population");
                    let holds = |p: &Population| if event_ii_case { event_ii_prime(p) } else { event_i_prime(p) };
                    (0..STEPS).all(|_| {
                        let step = pop.step(&mut rng);
                        !step.optimum_created && !pop.contains_optimum() && holds(&pop)
                    })
                })
                .collect()
        };
        let results = [
            ("I", single(false)),
            ("II", single(true)),
            ("I'", population(false)),
            ("II'", population(true)),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, r) in &results {
            let kept = r.iter().filter(|&&b| b).count();
            ok &= kept == r.len();
            parts.push(format!("event {name}: {kept}/{} kept", r.len()));
        }
        Ok((ok, format!("{} over {STEPS} generations", parts.join(", "))))
    }

    fn determinism(&mut self) -> Result<(bool, String)> {
        if self.csv_2.is_none() {
            self.markov_monte_carlo()?;
        }
        if self.csv_5.is_none() {
            self.theorem2_success()?;
        }
        let mut ok = true;
        let mut parts = Vec::new();
        for threads in [1, 3] {
            let same_2 = self.csv_2(Some(threads))? == *self.csv_2.as_ref().expect("set above");
            let same_5 = run_experiment(&self.config_5(Some(threads)))?.to_csv()
                == *self.csv_5.as_ref().expect("set above");
            ok &= same_2 && same_5;
            parts.push(format!("threads={threads}: crit2 {same_2}, crit5 {same_5}"));
        }
        Ok((ok, format!("byte-identical vs default pool: {}", parts.join("; "))))
    }
}

fn event_i_pair(n: usize, rng: &mut RandomStream) -> TimePair {
    let mut x = BitString::random(n, rng).expect("n >= 1");
    x.set(0, true);
    if x.rest_all_ones() {
        let i = rng.random_range(1..n);
        x.set(i, false);
    }
    TimePair::new(false, x)
}

fn event_ii_pair(n: usize) -> TimePair {
    TimePair::new(true, BitString::ones(n).expect("n >= 1"))
}

fn lemma2_equivalence() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut min_margin = f64::INFINITY;
    let mut ok = true;
    for n in 2..=12 {
        for a in 1..=n {
            let exact = lemma2_exact(n, a)?;
            let brute = lemma2_bruteforce(n, a)?;
            worst = worst.max((exact - brute).abs());
            let margin = exact - lemma2_lower_bound(n, a);
            min_margin = min_margin.min(margin);
            ok &= margin > 0.0;
        }
    }
    ok &= worst <= 1e-12;
    Ok((ok, format!("max |exact - brute| = {worst:.2e}, min margin over 1 - ea/n = {min_margin:.4}")))
}

fn lumped_validity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for kind in [MutationKind::OneBit, MutationKind::Bitwise] {
        for n in 2..=10 {
            let full = markov_full_absorption(n, kind)?;
            let lumped = markov_lumped_absorption(n, kind)?;
            for b in [false, true] {
                for x in 0u32..(1 << n) {
                    let i = full_index(n, b, x);
                    let j = LumpedState::of_full(b, x).index(n);
                    for (f, l) in [
                        (&full.p_optimum, &lumped.p_optimum),
                        (&full.p_event_i, &lumped.p_event_i),
                        (&full.p_event_ii, &lumped.p_event_ii),
                    ] {
                        worst = worst.max((f[i] - l[j]).abs());
                    }
                }
            }
            let (fs, ls) = (full.from_start(), lumped.from_start());
            worst = worst
                .max((fs.p_optimum - ls.p_optimum).abs())
                .max((fs.p_event_i - ls.p_event_i).abs())
                .max((fs.p_event_ii - ls.p_event_ii).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max per-state difference {worst:.2e} over n in 2..=10, both mutations")))
}

fn monotonicity() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 2..=500usize {
        for a in 1..n {
            let h1: Vec<f64> = (0..n - a).map(|d| ln_h1(a, n, d)).collect::<Result<_>>()?;
            if h1.windows(2).any(|w| w[1] >= w[0]) {
                bad.push(format!("h1 a={a} n={n}"));
            }
            let h2: Vec<f64> = (1..=n - a).map(|d| ln_h2(a, n, d)).collect::<Result<_>>()?;
            if h2.windows(2).any(|w| w[1] >= w[0]) {
                bad.push(format!("h2 a={a} n={n}"));
            }
        }
    }
    for n in 1..=10_000usize {
        let top = (n as f64).sqrt().floor() as usize;
        let g: Vec<f64> = (1..=top).map(|a| ln_g(a as f64, n)).collect::<Result<_>>()?;
        if g.windows(2).any(|w| w[1] >= w[0]) {
            bad.push(format!("g n={n}"));
        }
    }
    let lo = aux_threshold().ceil().ln();
    let hi = 1e6f64.ln();
    let samples = 1000;
    for i in 0..samples {
        let n = (lo + (hi - lo) * i as f64 / (samples - 1) as f64).exp().round();
        if !aux_ineq(n)? {
            bad.push(format!("aux n={n}"));
        }
    }
    let detail = if bad.is_empty() {
        "h1, h2 on n <= 500; g on n <= 10^4; aux at 1000 log-spaced n".to_string()
    } else {
        format!("{} violations, first: {}", bad.len(), bad[0])
    };
    Ok((bad.is_empty(), detail))
}

fn chernoff_suite() -> Result<(bool, String)> {
    let mut ok = chernoff_lower(25.0, 0.0)? == 1.0
        && chernoff_additive(&[1.0, 2.0, 0.5], 0.0)? == 1.0
        && chernoff_geometric(10, 0.2, 0.0, Tail::Upper)? == 1.0
        && chernoff_geometric(10, 0.2, 0.0, Tail::Lower)? == 1.0;
    let boundary_ok = ok;
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let grid = |hi: f64| (0..=100).map(move |i| hi * i as f64 / 100.0);
    for e in [1.0, 10.0, 50.0] {
        let v: Vec<f64> = grid(1.0).map(|d| chernoff_lower(e, d)).collect::<Result<_>>()?;
        ok &= decreasing(&v);
    }
    for ranges in [vec![1.0; 10], vec![0.5, 2.0, 3.0], vec![4.0; 50]] {
        let v: Vec<f64> = grid(10.0).map(|l| chernoff_additive(&ranges, l)).collect::<Result<_>>()?;
        ok &= decreasing(&v);
    }
    for m in [2, 10, 50] {
        let up: Vec<f64> = grid(5.0)
            .map(|d| chernoff_geometric(m, 0.3, d, Tail::Upper))
            .collect::<Result<_>>()?;
        let down: Vec<f64> = grid(1.0)
            .map(|d| chernoff_geometric(m, 0.3, d, Tail::Lower))
            .collect::<Result<_>>()?;
        ok &= decreasing(&up) && decreasing(&down);
    }
    Ok((
        ok,
        format!("boundary values {boundary_ok}; strictly decreasing on 101-point grids"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let mut suite = Suite::new(DEFAULT_SEED);
        for id in [1, 3, 9] {
            let r = suite.run(id);
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn event_pairs_are_in_their_events() {
        let mut rng = RandomStream::new(3, 3);
        for n in 2..20 {
            assert!(event_i(&event_i_pair(n, &mut rng)));
            assert!(event_ii(&event_ii_pair(n)));
        }
    }
}
