use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use timelink::harness::acceptance::{Suite, DEFAULT_SEED};
use timelink::harness::{run_experiment, write_report, Algorithm, ExperimentConfig, MuRule, ReportFormat};
use timelink::oracle::markov::{full_index, LumpedState};
use timelink::oracle::{
    lemma2_bruteforce, lemma2_exact, markov_full_absorption, markov_lumped_absorption, min_population,
    theorem1_bound, theorem2_bound, theorem3_bound, AbsorptionResult,
};
use timelink::{Error, MutationKind};

const OUT_DIR_ENV: &str = "TIMELINK_OUT_DIR";

#[derive(Parser)]
#[command(name = "timelink", version, about = "Experiments and exact analysis for OneMax_(0,1^n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment point.
    Run(ExperimentArgs),
    /// Run a grid over n (and mu).
    Sweep(ExperimentArgs),
    /// Probability that an improving bit-wise mutation gains exactly one 1-bit, by a.
    Oracle(OracleArgs),
    /// Absorption probabilities of RLS / (1+1) EA.
    Markov(MarkovArgs),
    /// Success and stagnation bound tables.
    Bounds(BoundsArgs),
    /// Run the acceptance suite; exits 2 if a criterion fails.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// rls, oea, muea or online.
    #[arg(long)]
    alg: Option<String>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Explicit population sizes.
    #[arg(long, value_delimiter = ',')]
    mu: Vec<usize>,
    /// Use mu = min_population(n, delta) when no --mu is given.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    budget_mult: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_early_exit: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; defaults to $TIMELINK_OUT_DIR/report.<format>, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8,9,10,11,12")]
    n: Vec<usize>,
    /// Add the mask-enumeration value for n <= 14.
    #[arg(long)]
    bruteforce: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct MarkovArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// rls or oea.
    #[arg(long, default_value = "oea")]
    alg: String,
    /// Use the 4n-state lumped chain.
    #[arg(long)]
    lumped: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000,100000,1000000")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
    /// Population size for the (mu+1) bounds; defaults to min_population(n, delta).
    #[arg(long)]
    mu: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Criterion numbers to run; all when empty.
    ids: Vec<u8>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => experiment(a, true),
        Command::Sweep(a) => experiment(a, false),
        Command::Oracle(a) => oracle(a),
        Command::Markov(a) => markov(a),
        Command::Bounds(a) => bounds(a),
        Command::Check(a) => return check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn build_config(a: &ExperimentArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => {
            let alg = a.alg.as_deref().ok_or_else(|| Error::Config {
                field: "algorithm".into(),
                message: "--alg or --config is required".into(),
            })?;
            ExperimentConfig::new(alg.parse()?, Vec::new())
        }
    };
    if let Some(alg) = &a.alg {
        cfg.algorithm = alg.parse()?;
    }
    if !a.n.is_empty() {
        cfg.n_values = a.n.clone();
    }
    if !a.mu.is_empty() {
        cfg.mu_rule = MuRule::Explicit(a.mu.clone());
    } else if let Some(delta) = a.delta {
        cfg.mu_rule = MuRule::TheoremMinimum { delta };
    }
    if let Some(delta) = a.delta {
        cfg.bound_delta = delta;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(m) = a.budget_mult {
        cfg.budget_mult = m;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.no_early_exit {
        cfg.early_exit = false;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn experiment(a: ExperimentArgs, single: bool) -> Result<(), Error> {
    let cfg = build_config(&a)?;
    if single && cfg.points()?.len() != 1 {
        return Err(Error::Config {
            field: "n_values".into(),
            message: "`run` takes one (n, mu) point; use `sweep` for grids".into(),
        });
    }
    let report = run_experiment(&cfg)?;
    for (row, t) in report.rows.iter().zip(&report.timing) {
        eprintln!(
            "{} n={} mu={}: success {}/{} ({:.4} excluded from runtime stats), {:.3} ms/trial",
            row.algorithm,
            row.n,
            row.mu,
            row.opt_count,
            row.trials,
            row.excluded_fraction(),
            t.mean_trial_seconds * 1e3
        );
    }
    let format: ReportFormat = a.format.into();
    let out = a
        .out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("report.{format}"))));
    match out {
        Some(path) => {
            write_report(&report, &path, format)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", report.render(format)),
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<(), Error> {
    let mut rows = Vec::new();
    for &n in &a.n {
        for k in 1..=n {
            let brute = if a.bruteforce { Some(lemma2_bruteforce(n, k)?) } else { None };
            rows.push((n, k, lemma2_exact(n, k)?, brute));
        }
    }
    match a.format {
        Format::Csv => {
            println!("n,a,value{}", if a.bruteforce { ",bruteforce" } else { "" });
            for (n, k, v, b) in rows {
                match b {
                    Some(b) => println!("{n},{k},{v:e},{b:e}"),
                    None => println!("{n},{k},{v:e}"),
                }
            }
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (n, k, v, _) in rows {
                map.entry(n.to_string())
                    .or_insert_with(|| serde_json::Value::Object(Default::default()))
                    .as_object_mut()
                    .expect("object")
                    .insert(k.to_string(), v.into());
            }
            println!("{}", serde_json::to_string_pretty(&map).expect("json"));
        }
    }
    Ok(())
}

fn markov(a: MarkovArgs) -> Result<(), Error> {
    let kind = match a.alg.parse::<Algorithm>()? {
        Algorithm::Rls => MutationKind::OneBit,
        Algorithm::Oea => MutationKind::Bitwise,
        other => {
            return Err(Error::Config {
                field: "alg".into(),
                message: format!("no chain for `{other}`; use rls or oea"),
            })
        }
    };
    let n = a.n;
    let (result, labels): (AbsorptionResult, Vec<String>) = if a.lumped {
        let r = markov_lumped_absorption(n, kind)?;
        let labels = (0..r.len())
            .map(|i| {
                let s = LumpedState::from_index(n, i);
                format!("({},{},{})", s.b as u8, s.x1 as u8, s.k)
            })
            .collect();
        (r, labels)
    } else {
        let r = markov_full_absorption(n, kind)?;
        let mut labels = vec![String::new(); r.len()];
        for b in [false, true] {
            for x in 0u32..(1 << n) {
                let bits: String = (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect();
                labels[full_index(n, b, x)] = format!("({},{bits})", b as u8);
            }
        }
        (r, labels)
    };
    let agg = result.from_start();
    match a.format {
        Format::Csv => {
            println!("n,state,p_optimum,p_eventI,p_eventII");
            for (i, label) in labels.iter().enumerate() {
                println!(
                    "{n},{label},{:e},{:e},{:e}",
                    result.p_optimum[i], result.p_event_i[i], result.p_event_ii[i]
                );
            }
            println!("{n},start,{:e},{:e},{:e}", agg.p_optimum, agg.p_event_i, agg.p_event_ii);
        }
        Format::Json => {
            let mut states = serde_json::Map::new();
            for (i, label) in labels.iter().enumerate() {
                states.insert(
                    label.clone(),
                    serde_json::json!({
                        "p_optimum": result.p_optimum[i],
                        "p_eventI": result.p_event_i[i],
                        "p_eventII": result.p_event_ii[i],
                    }),
                );
            }
            let doc = serde_json::json!({ "n": n, "start": agg, "states": states });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(())
}

fn bounds(a: BoundsArgs) -> Result<(), Error> {
    println!("n,mu,theorem1,theorem1_vacuous,theorem2,theorem2_vacuous,theorem3,theorem3_vacuous,preconditions_met");
    for &n in &a.n {
        let mu = match a.mu {
            Some(mu) => mu,
            None => min_population(n, a.delta)?,
        };
        let t1 = theorem1_bound(n)?;
        let t2 = theorem2_bound(n, mu, a.delta)?;
        let t3 = theorem3_bound(n, mu, a.delta)?;
        println!(
            "{n},{mu},{:e},{},{:e},{},{:e},{},{}",
            t1.value, t1.vacuous, t2.value, t2.vacuous, t3.value, t3.vacuous, t2.preconditions_met
        );
    }
    Ok(())
}

fn check(a: CheckArgs) -> ExitCode {
    let ids = if a.ids.is_empty() { (1..=10).collect() } else { a.ids };
    let mut suite = Suite::new(a.seed);
    let mut failed = false;
    for id in ids {
        let r = suite.run(id);
        println!("{r}");
        failed |= !r.passed;
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
