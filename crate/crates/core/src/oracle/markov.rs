//! Absorption probabilities of the single-individual algorithm.
//!
//! The full chain runs over all pairs `(b, x)`, with `b` the stored previous
//! first bit. The lumped chain keeps only `(b, x_1, k)`, `k` the number of
//! ones in positions `2..n`; fitness and both mutation operators are
//! exchangeable over those positions, so the lumping is exact.
//!
//! Accepted moves never lower the fitness, so states are solved one fitness
//! level at a time from the top down: within a level only same-level moves
//! are unknown, and everything else points at states already solved.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::combinatorics::ln_binomial;
use crate::error::{Error, Result};
use crate::fitness::onemax01_value;
use crate::mutation::MutationKind;

pub const FULL_MAX_N: usize = 10;
pub const LUMPED_MAX_N: usize = 1000;

/// Flips beyond this many among positions `2..n` are dropped from the
/// lumped bit-wise kernel; their total mass is below `1/41!`.
pub const LUMPED_FLIP_CAP: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Absorbing {
    Optimum,
    EventI,
    EventII,
}

impl Absorbing {
    fn column(self) -> usize {
        match self {
            Absorbing::Optimum => 0,
            Absorbing::EventI => 1,
            Absorbing::EventII => 2,
        }
    }
}

fn classify(b: bool, x1: bool, rest_all_ones: bool) -> Option<Absorbing> {
    match (b, x1, rest_all_ones) {
        (false, true, true) => Some(Absorbing::Optimum),
        (false, true, false) => Some(Absorbing::EventI),
        (true, true, true) => Some(Absorbing::EventII),
        _ => None,
    }
}

/// Sparse row-stochastic transition kernel.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(_, p)| p).sum()).collect()
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.row_sums().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn successors(&self, state: usize) -> usize {
        self.rows[state].len()
    }
}

/// Absorption probabilities for every state plus the start distribution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbsorptionResult {
    pub n: usize,
    pub kind: MutationKind,
    pub p_optimum: Vec<f64>,
    pub p_event_i: Vec<f64>,
    pub p_event_ii: Vec<f64>,
    /// `1 - (p_optimum + p_event_i + p_event_ii)` per state.
    pub residual: Vec<f64>,
    pub start: Vec<f64>,
}

/// Probabilities aggregated over the start distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub p_optimum: f64,
    pub p_event_i: f64,
    pub p_event_ii: f64,
    pub residual: f64,
}

impl Aggregate {
    pub fn failure(&self) -> f64 {
        self.p_event_i + self.p_event_ii
    }
}

impl AbsorptionResult {
    pub fn len(&self) -> usize {
        self.p_optimum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_optimum.is_empty()
    }

    pub fn from_start(&self) -> Aggregate {
        let dot = |v: &[f64]| v.iter().zip(&self.start).map(|(a, b)| a * b).sum::<f64>();
        Aggregate {
            p_optimum: dot(&self.p_optimum),
            p_event_i: dot(&self.p_event_i),
            p_event_ii: dot(&self.p_event_ii),
            residual: dot(&self.residual),
        }
    }

    /// Failure probability from the start distribution.
    pub fn failure_probability(&self) -> f64 {
        1.0 - self.from_start().p_optimum
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }
}

/// Solves absorption given per-state fitness and absorbing class.
fn solve(kernel: &Kernel, fitness: &[i64], class: &[Option<Absorbing>]) -> [Vec<f64>; 3] {
    let s = kernel.len();
    let mut h = [vec![0.0; s], vec![0.0; s], vec![0.0; s]];
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..s {
        match class[i] {
            Some(a) => h[a.column()][i] = 1.0,
            None => levels.entry(fitness[i]).or_default().push(i),
        }
    }
    let mut local = vec![usize::MAX; s];
    for (&f, states) in levels.iter().rev() {
        let m = states.len();
        for (li, &i) in states.iter().enumerate() {
            local[i] = li;
        }
        let mut a = DMatrix::<f64>::identity(m, m);
        let mut rhs = DMatrix::<f64>::zeros(m, 3);
        for (li, &i) in states.iter().enumerate() {
            for &(j, p) in &kernel.rows[i] {
                debug_assert!(fitness[j] >= f, "accepted move lowered fitness");
                if class[j].is_none() && fitness[j] == f {
                    a[(li, local[j])] -= p;
                } else {
                    for c in 0..3 {
                        rhs[(li, c)] += p * h[c][j];
                    }
                }
            }
        }
        let x = a
            .lu()
            .solve(&rhs)
            .expect("every transient level leaks to higher fitness or absorption");
        for (li, &i) in states.iter().enumerate() {
            for c in 0..3 {
                h[c][i] = x[(li, c)];
            }
            local[i] = usize::MAX;
        }
    }
    h
}

fn assemble(
    n: usize,
    kind: MutationKind,
    kernel: &Kernel,
    fitness: &[i64],
    class: &[Option<Absorbing>],
    start: Vec<f64>,
) -> AbsorptionResult {
    let [p_optimum, p_event_i, p_event_ii] = solve(kernel, fitness, class);
    let residual = (0..kernel.len())
        .map(|i| 1.0 - (p_optimum[i] + p_event_i[i] + p_event_ii[i]))
        .collect();
    AbsorptionResult {
        n,
        kind,
        p_optimum,
        p_event_i,
        p_event_ii,
        residual,
        start,
    }
}

// ----- full chain -----

/// State index `b * 2^n + x`, where bit `i` of `x` is position `i + 1`.
pub fn full_index(n: usize, b: bool, x: u32) -> usize {
    ((b as usize) << n) | x as usize
}

fn full_decode(n: usize, i: usize) -> (bool, u32) {
    ((i >> n) & 1 == 1, (i & ((1 << n) - 1)) as u32)
}

fn check_full(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if n > FULL_MAX_N {
        return Err(Error::TooLarge {
            what: "full chain dimension",
            size: n,
            limit: FULL_MAX_N,
        });
    }
    Ok(())
}

/// Exact kernel over all `2^{n+1}` states.
pub fn full_kernel(n: usize, kind: MutationKind) -> Result<Kernel> {
    check_full(n)?;
    let size = 2usize << n;
    let all = (1u32 << n) - 1;
    let nf = n as f64;
    let masks: Vec<(u32, f64)> = match kind {
        MutationKind::OneBit => (0..n).map(|i| (1u32 << i, 1.0 / nf)).collect(),
        MutationKind::Bitwise => (0..=all)
            .map(|m| {
                let k = m.count_ones() as i32;
                (m, nf.powi(-k) * (1.0 - 1.0 / nf).powi(n as i32 - k))
            })
            .collect(),
    };
    let mut dense = vec![0.0f64; size];
    let mut rows = Vec::with_capacity(size);
    for i in 0..size {
        let (b, x) = full_decode(n, i);
        let x1 = x & 1 == 1;
        let f = onemax01_value(n, b, x.count_ones() as usize);
        let mut touched = Vec::new();
        for &(m, p) in &masks {
            let y = x ^ m;
            let fy = onemax01_value(n, x1, y.count_ones() as usize);
            let j = if f > fy { i } else { full_index(n, x1, y) };
            if dense[j] == 0.0 {
                touched.push(j);
            }
            dense[j] += p;
        }
        touched.sort_unstable();
        rows.push(touched.iter().map(|&j| (j, std::mem::take(&mut dense[j]))).collect());
    }
    Ok(Kernel { rows })
}

/// Absorption over all `2^{n+1}` states from the uniform start.
pub fn markov_full_absorption(n: usize, kind: MutationKind) -> Result<AbsorptionResult> {
    let kernel = full_kernel(n, kind)?;
    let size = kernel.len();
    let all = (1u32 << n) - 1;
    let mut fitness = Vec::with_capacity(size);
    let mut class = Vec::with_capacity(size);
    for i in 0..size {
        let (b, x) = full_decode(n, i);
        fitness.push(onemax01_value(n, b, x.count_ones() as usize));
        class.push(classify(b, x & 1 == 1, x | 1 == all));
    }
    let start = vec![1.0 / size as f64; size];
    Ok(assemble(n, kind, &kernel, &fitness, &class, start))
}

// ----- lumped chain -----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LumpedState {
    pub b: bool,
    pub x1: bool,
    /// Ones among positions `2..n`.
    pub k: usize,
}

impl LumpedState {
    pub fn index(self, n: usize) -> usize {
        ((self.b as usize) * 2 + self.x1 as usize) * n + self.k
    }

    pub fn from_index(n: usize, i: usize) -> Self {
        let hi = i / n;
        Self {
            b: hi >= 2,
            x1: hi % 2 == 1,
            k: i % n,
        }
    }

    /// The lump containing a full-chain state.
    pub fn of_full(b: bool, x: u32) -> Self {
        Self {
            b,
            x1: x & 1 == 1,
            k: (x >> 1).count_ones() as usize,
        }
    }

    pub fn fitness(self, n: usize) -> i64 {
        onemax01_value(n, self.b, self.k + self.x1 as usize)
    }
}

fn binomial_pmf(trials: usize, p: f64, cap: usize) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    (0..=trials.min(cap))
        .map(|i| {
            let miss = (trials - i) as f64;
            let lq_term = if miss == 0.0 { 0.0 } else { miss * lq };
            (ln_binomial(trials, i) + i as f64 * lp + lq_term).exp()
        })
        .collect()
}

pub fn lumped_kernel(n: usize, kind: MutationKind) -> Result<Kernel> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    if n > LUMPED_MAX_N {
        return Err(Error::TooLarge {
            what: "lumped chain dimension",
            size: n,
            limit: LUMPED_MAX_N,
        });
    }
    let size = 4 * n;
    let nf = n as f64;
    let mut rows = Vec::with_capacity(size);
    let mut moves: Vec<(bool, usize, f64)> = Vec::new();
    for i in 0..size {
        let s = LumpedState::from_index(n, i);
        let f = s.fitness(n);
        let zeros = n - 1 - s.k;
        moves.clear();
        match kind {
            MutationKind::OneBit => {
                moves.push((true, s.k, 1.0 / nf));
                if s.k > 0 {
                    moves.push((false, s.k - 1, s.k as f64 / nf));
                }
                if zeros > 0 {
                    moves.push((false, s.k + 1, zeros as f64 / nf));
                }
            }
            MutationKind::Bitwise => {
                let ones_pmf = binomial_pmf(s.k, 1.0 / nf, LUMPED_FLIP_CAP);
                let zeros_pmf = binomial_pmf(zeros, 1.0 / nf, LUMPED_FLIP_CAP);
                for (flip_first, pf) in [(false, 1.0 - 1.0 / nf), (true, 1.0 / nf)] {
                    for (oi, po) in ones_pmf.iter().enumerate() {
                        for (zj, pz) in zeros_pmf.iter().enumerate() {
                            if oi + zj > LUMPED_FLIP_CAP {
                                break;
                            }
                            moves.push((flip_first, s.k - oi + zj, pf * po * pz));
                        }
                    }
                }
            }
        }
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        for &(flip_first, k2, p) in &moves {
            let child = LumpedState {
                b: s.x1,
                x1: s.x1 ^ flip_first,
                k: k2,
            };
            let j = if f > child.fitness(n) { i } else { child.index(n) };
            *row.entry(j).or_default() += p;
        }
        rows.push(row.into_iter().collect());
    }
    Ok(Kernel { rows })
}

/// Start distribution of the lumps under a uniform `(b, x)`.
pub fn lumped_start(n: usize) -> Vec<f64> {
    let rest = binomial_pmf(n - 1, 0.5, n);
    (0..4 * n)
        .map(|i| 0.25 * rest[LumpedState::from_index(n, i).k])
        .collect()
}

/// Absorption over the `4n` lumps from the projected uniform start.
pub fn markov_lumped_absorption(n: usize, kind: MutationKind) -> Result<AbsorptionResult> {
    let kernel = lumped_kernel(n, kind)?;
    let size = kernel.len();
    let mut fitness = Vec::with_capacity(size);
    let mut class = Vec::with_capacity(size);
    for i in 0..size {
        let s = LumpedState::from_index(n, i);
        fitness.push(s.fitness(n));
        class.push(classify(s.b, s.x1, s.k == n - 1));
    }
    Ok(assemble(n, kind, &kernel, &fitness, &class, lumped_start(n)))
}
