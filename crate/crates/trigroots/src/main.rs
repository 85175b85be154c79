use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use trigroots::config::{echo, threads_from_env, ConfigFile, CountConfig, GaussianConfig};
use trigroots::experiments::{
    estimate_event_probability, estimate_small_ball, run_chf_comparison, run_convergence, run_gap_experiment,
    ChfConfig, ConvergenceConfig, EventConfig, GapConfig, SmallBallConfig,
};
use trigroots::output::{csv_string, fmt_f64};
use trigroots::report::{count_report, count_tally, crossing_rows, orthant_rows};
use trigroots::trigroots_core::CoefficientFamily;
use trigroots::{Error, Result};

/// Real roots of random trigonometric polynomials: Monte Carlo suites and
/// Gaussian comparison formulas.
#[derive(Debug, Parser)]
#[command(name = "trigroots", version)]
struct Cli {
    /// TOML file with one table per subcommand; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the roots of one seeded sample.
    Count(CountArgs),
    /// Mean roots per degree against the limit, for several n.
    Converge(ConvergeArgs),
    /// Root count minus lattice sign changes for several lattice spacings.
    Gap(GapArgs),
    /// Probability of at least m roots of the j-th derivative in a short interval.
    Events(EventArgs),
    /// Small-ball probabilities of the scaled j-th derivative.
    Smallball(SmallBallArgs),
    /// Empirical characteristic function of (X(α), X(α+δ/n)) against its limit.
    Chf(ChfArgs),
    /// Crossing and orthant probabilities of the limiting Gaussian process.
    Gaussian(GaussianArgs),
}

/// Flags shared by the Monte Carlo subcommands.
#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    family: Option<CoefficientFamily>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores); TRIGROOTS_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
    /// Base path for `<PATH>.csv` and `<PATH>.json`.
    #[arg(long, value_name = "PATH")]
    output: Option<String>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    family: Option<CoefficientFamily>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    oversample: Option<usize>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    oversample: Option<usize>,
}

#[derive(Debug, Args)]
struct GapArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    delta_list: Option<Vec<f64>>,
    #[arg(long)]
    oversample: Option<usize>,
}

#[derive(Debug, Args)]
struct EventArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Debug, Args)]
struct SmallBallArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    j: Option<u32>,
    /// Evaluation point.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct ChfArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Debug, Args)]
struct GaussianArgs {
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    delta_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rho_list: Option<Vec<f64>>,
}

macro_rules! set {
    ($($dst:expr => $src:expr),* $(,)?) => {
        $(if let Some(v) = $src { $dst = v; })*
    };
}

impl RunArgs {
    fn apply(
        self,
        family: &mut CoefficientFamily,
        u: &mut f64,
        trials: &mut u64,
        seed: &mut u64,
        threads: &mut usize,
        output: &mut Option<String>,
    ) -> Result<()> {
        set!(*family => self.family, *u => self.u, *trials => self.trials, *seed => self.seed, *threads => self.threads);
        if let Some(t) = threads_from_env()? {
            *threads = t;
        }
        if self.output.is_some() {
            *output = self.output;
        }
        Ok(())
    }
}

macro_rules! apply_run {
    ($run:expr, $cfg:expr) => {
        $run.apply(
            &mut $cfg.family,
            &mut $cfg.u,
            &mut $cfg.trials,
            &mut $cfg.master_seed,
            &mut $cfg.threads,
            &mut $cfg.output_path,
        )?
    };
}

fn print_config<T: serde::Serialize>(name: &str, config: &T) -> Result<()> {
    println!("# resolved configuration");
    print!("{}", echo(name, config)?);
    println!();
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let start = Instant::now();
    match cli.command {
        Command::Count(args) => {
            let mut cfg: CountConfig = file.section("count")?;
            set!(cfg.family => args.family, cfg.n => args.n, cfg.u => args.u, cfg.a => args.a,
                 cfg.b => args.b, cfg.seed => args.seed, cfg.oversample => args.oversample);
            cfg.validate()?;
            print_config("count", &cfg)?;
            let tally = count_tally(&cfg)?;
            print!("{}", count_report(&tally));
        }
        Command::Converge(args) => {
            let mut cfg: ConvergenceConfig = file.section("converge")?;
            apply_run!(args.run, cfg);
            set!(cfg.n_values => args.n_values, cfg.a => args.a, cfg.b => args.b,
                 cfg.delta => args.delta, cfg.oversample => args.oversample);
            cfg.validate()?;
            print_config("converge", &cfg)?;
            let result = run_convergence(&cfg)?;
            print!("{}", csv_string(&result.rows)?);
            if let Some(last) = result.rows.last() {
                let rel = (last.mean_roots_per_n - last.limit) / last.limit;
                println!(
                    "final n = {}: mean_roots_per_n = {}, limit = {}, relative_deviation = {}",
                    last.n,
                    fmt_f64(last.mean_roots_per_n),
                    fmt_f64(last.limit),
                    fmt_f64(rel)
                );
            }
        }
        Command::Gap(args) => {
            let mut cfg: GapConfig = file.section("gap")?;
            apply_run!(args.run, cfg);
            set!(cfg.n => args.n, cfg.a => args.a, cfg.b => args.b,
                 cfg.delta_values => args.delta_list, cfg.oversample => args.oversample);
            cfg.validate()?;
            print_config("gap", &cfg)?;
            print!("{}", csv_string(&run_gap_experiment(&cfg)?.rows)?);
        }
        Command::Events(args) => {
            let mut cfg: EventConfig = file.section("events")?;
            apply_run!(args.run, cfg);
            set!(cfg.n => args.n, cfg.delta => args.delta, cfg.j => args.j, cfg.m => args.m);
            cfg.validate()?;
            print_config("events", &cfg)?;
            let est = estimate_event_probability(&cfg)?;
            print!("{}", csv_string(std::slice::from_ref(&est))?);
        }
        Command::Smallball(args) => {
            let mut cfg: SmallBallConfig = file.section("smallball")?;
            apply_run!(args.run, cfg);
            set!(cfg.n => args.n, cfg.j => args.j, cfg.beta => args.beta, cfg.t_values => args.t_list);
            cfg.validate()?;
            print_config("smallball", &cfg)?;
            let result = estimate_small_ball(&cfg)?;
            println!("scaled_variance = {}", fmt_f64(result.scaled_variance));
            print!("{}", csv_string(&result.rows)?);
        }
        Command::Chf(args) => {
            let mut cfg: ChfConfig = file.section("chf")?;
            apply_run!(args.run, cfg);
            set!(cfg.n => args.n, cfg.delta => args.delta);
            cfg.validate()?;
            print_config("chf", &cfg)?;
            let result = run_chf_comparison(&cfg)?;
            print!("{}", csv_string(&result.rows)?);
            println!("sup_deviation = {}", fmt_f64(result.sup_deviation()));
        }
        Command::Gaussian(args) => {
            let mut cfg: GaussianConfig = file.section("gaussian")?;
            set!(cfg.u => args.u, cfg.delta_list => args.delta_list, cfg.rho_list => args.rho_list);
            cfg.validate()?;
            print_config("gaussian", &cfg)?;
            let crossing = crossing_rows(&cfg)?;
            if !crossing.is_empty() {
                print!("{}", csv_string(&crossing)?);
            }
            let orthant = orthant_rows(&cfg)?;
            if !orthant.is_empty() {
                if !crossing.is_empty() {
                    println!();
                }
                print!("{}", csv_string(&orthant)?);
            }
        }
    }
    eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> ExitCode {
    if e.is_usage() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}
