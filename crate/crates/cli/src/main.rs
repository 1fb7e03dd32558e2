use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treelaws::discretesnake::sample_stats;
use treelaws::exactlaws as ex;
use treelaws::harness::stats::laplace_estimate;
use treelaws::harness::suite::{exact_group, summary_lines};
use treelaws::harness::{run_suite, Group, RunConfig};
use treelaws::levycsbp::{hitting_batch, PathConfig};
use treelaws::samplers::{
    batch, lt_given_sigma_plus_batch, sample_lt_given_sigma, sample_u, stable_two_thirds_batch,
    LawTag, SampleBatch,
};
use treelaws::series::{self, format_rational};
use treelaws::{Error, RngStream};

#[derive(Parser)]
#[command(name = "treelaws", version, about = "Exact laws, series identities and Monte Carlo checks for the local time of tree-indexed Brownian motion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form laws.
    Laws {
        #[command(subcommand)]
        cmd: LawsCmd,
    },
    /// Exact power-series identities.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Monte Carlo draws as CSV.
    Mc(McArgs),
    /// Run test groups and write CSV/JSON reports.
    Run(RunArgs),
}

#[derive(Subcommand)]
enum LawsCmd {
    /// Evaluate one law at the given arguments.
    Eval {
        #[arg(value_enum)]
        law: Law,
        /// Positional real arguments, in the order listed by `--help`.
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    /// lambda
    DurationLaplace,
    /// lambda
    LocalTimeLaplace,
    /// ell
    LocalTimeDensity,
    /// lambda mu_plus mu_minus
    SolveTriple,
    /// v mu1 mu2
    HMu,
    /// lambda mu
    LtSigmaLaplace,
    /// mu1 mu2
    PairLaplace,
    /// s1 s2
    PairDensity,
    /// lambda d
    ExitLaplace,
    /// d
    HittingProb,
    /// lambda a
    LtLevelLaplace,
    /// lambda a alpha
    SbmLocalTimeLaplace,
    /// mu1 mu2 alpha
    SbmPairLaplace,
    /// x mu theta
    Y0Z0Laplace,
    /// x lambda mu
    LtSigmaLaplaceFromX,
    /// mu1 mu2 x
    ExcursionSignKernel,
    /// v mu1 mu2
    VerifyHIntegral,
}

impl Law {
    fn arity(self) -> usize {
        use Law::*;
        match self {
            DurationLaplace | LocalTimeLaplace | LocalTimeDensity | HittingProb => 1,
            LtSigmaLaplace | PairLaplace | PairDensity | ExitLaplace | LtLevelLaplace => 2,
            _ => 3,
        }
    }

    fn eval(self, a: &[f64]) -> treelaws::Result<(f64, f64)> {
        use Law::*;
        let v = |x: treelaws::Result<f64>| x.map(|v| (v, 0.0));
        match self {
            DurationLaplace => v(ex::duration_laplace(a[0])),
            LocalTimeLaplace => v(ex::local_time_laplace(a[0])),
            LocalTimeDensity => v(ex::local_time_density(a[0])),
            SolveTriple => {
                let r = ex::solve_triple(ex::RatePoint::new(a[0], a[1], a[2])?)?;
                Ok((r.value, r.residual))
            }
            HMu => v(ex::h_mu(a[0], a[1], a[2])),
            LtSigmaLaplace => v(ex::lt_sigma_laplace(a[0], a[1])),
            PairLaplace => v(ex::pair_laplace(a[0], a[1])),
            PairDensity => v(ex::pair_density(a[0], a[1])),
            ExitLaplace => v(ex::exit_laplace(a[0], a[1])),
            HittingProb => v(ex::hitting_prob(a[0])),
            LtLevelLaplace => v(ex::lt_level_laplace(a[0], a[1])),
            SbmLocalTimeLaplace => v(ex::sbm_local_time_laplace(a[0], a[1], a[2])),
            SbmPairLaplace => v(ex::sbm_pair_laplace(a[0], a[1], a[2])),
            Y0Z0Laplace => v(ex::y0_z0_laplace(a[0], a[1], a[2])),
            LtSigmaLaplaceFromX => v(ex::lt_sigma_laplace_from_x(a[0], a[1], a[2])),
            ExcursionSignKernel => v(ex::excursion_sign_kernel(a[0], a[1], a[2])),
            VerifyHIntegral => v(ex::verify_h_integral(a[0], a[1], a[2])),
        }
    }
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Check every exact identity; exit 1 on any mismatch.
    Check {
        #[arg(long, default_value_t = series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 30)]
        product_max: u64,
    },
    /// Print the coefficients of F and F_+ as exact strings (CSV).
    Dump {
        #[arg(long, default_value_t = series::DEFAULT_ORDER)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum McKind {
    Stable,
    UKernel,
    LtSigma,
    LtSigmaPlus,
    Snake,
    Csbp,
}

#[derive(Args)]
struct McArgs {
    #[arg(value_enum)]
    kind: McKind,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Edges per tree (snake).
    #[arg(long, default_value_t = 5000)]
    n_edges: usize,
    /// Euler step floor (csbp).
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Largest Euler step (csbp); equal to dt for a uniform grid.
    #[arg(long, default_value_t = 1.0)]
    max_step: f64,
    #[arg(long, default_value_t = 100.0)]
    t_max: f64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Group(s) to run: exact, closed-form, mc-fast, mc-slow, or all.
    #[arg(long, value_delimiter = ',')]
    group: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra key=value overrides.
    #[arg(long = "set")]
    overrides: Vec<String>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> treelaws::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn batch_csv(b: &SampleBatch) -> String {
    let mut s = String::from("value,law,seed\n");
    let law = b.law_tag;
    for x in &b.values {
        s.push_str(&format!("{x:e},{law},{}\n", b.seed_info));
    }
    s
}

fn laplace_note(b: &SampleBatch, theory: impl Fn(f64) -> f64) -> treelaws::Result<()> {
    for l in [0.5, 1.0, 2.0] {
        let e = laplace_estimate(&b.values, l)?;
        eprintln!(
            "lambda={l}: mean exp(-lambda x) = {:.6} +- {:.6} (theory {:.6})",
            e.mean,
            e.se,
            theory(l)
        );
    }
    Ok(())
}

fn mc(a: &McArgs) -> treelaws::Result<bool> {
    let mut rng = RngStream::new(a.seed, 0);
    match a.kind {
        McKind::Stable => {
            let b = stable_two_thirds_batch(a.n, &mut rng);
            laplace_note(&b, |l| (-l.powf(2.0 / 3.0)).exp())?;
            emit(&a.out, &batch_csv(&b))?;
        }
        McKind::UKernel => {
            let b = batch(a.n, LawTag::ExcursionU, &mut rng, sample_u);
            laplace_note(&b, |x| (1.0 + (2.0 * x).sqrt()) * (-(2.0 * x).sqrt()).exp())?;
            emit(&a.out, &batch_csv(&b))?;
        }
        McKind::LtSigma => {
            let b = batch(a.n, LawTag::LtGivenSigma, &mut rng, |r| {
                sample_lt_given_sigma(1.0, r).expect("s = 1")
            });
            emit(&a.out, &batch_csv(&b))?;
        }
        McKind::LtSigmaPlus => {
            let b = lt_given_sigma_plus_batch(1.0, a.n, &rng)?;
            emit(&a.out, &batch_csv(&b))?;
        }
        McKind::Snake => {
            let mut s = String::from("n,zero_count,pos_count,neg_count,seed\n");
            for i in 0..a.n as u64 {
                let mut r = rng.substream(i);
                let info = r.info();
                let st = sample_stats(a.n_edges, &mut r)?;
                s.push_str(&format!(
                    "{},{},{},{},{info}\n",
                    st.n_edges, st.zero_count, st.pos_count, st.neg_count
                ));
            }
            emit(&a.out, &s)?;
        }
        McKind::Csbp => {
            let cfg = PathConfig::new(a.dt, a.t_max, 1.0)?.adaptive(a.max_step)?;
            let b = hitting_batch(&cfg, a.n, &rng)?;
            eprintln!("censored: {} of {}", b.censored(), a.n);
            emit(&a.out, &b.to_csv())?;
        }
    }
    Ok(true)
}

fn run(a: &RunArgs) -> treelaws::Result<bool> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_env();
    if !a.group.is_empty() {
        cfg.groups = if a.group.iter().any(|g| g == "all") {
            Group::ALL.to_vec()
        } else {
            a.group.iter().map(|g| g.parse()).collect::<treelaws::Result<_>>()?
        };
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(o) = &a.out {
        cfg.out_dir = o.clone();
    }
    cfg.apply_overrides(&a.overrides)?;
    let outcome = run_suite(&cfg)?;
    for line in summary_lines(&outcome.reports) {
        println!("{line}");
    }
    println!(
        "{} checks, {} failed; reports in {}",
        outcome.reports.len(),
        outcome.failures,
        cfg.out_dir.display()
    );
    Ok(outcome.failures == 0)
}

fn dispatch(cli: &Cli) -> treelaws::Result<bool> {
    match &cli.cmd {
        Cmd::Laws {
            cmd: LawsCmd::Eval { law, args },
        } => {
            if args.len() != law.arity() {
                return Err(Error::Input(format!(
                    "expected {} argument(s), got {}",
                    law.arity(),
                    args.len()
                )));
            }
            let (value, residual) = law.eval(args)?;
            println!("{value:.17e}");
            if residual != 0.0 {
                eprintln!("residual {residual:e}");
            }
            Ok(true)
        }
        Cmd::Series {
            cmd: SeriesCmd::Check { order, product_max },
        } => {
            let cfg = RunConfig {
                series_order: *order,
                product_max: *product_max,
                ..RunConfig::default()
            };
            let reports = exact_group(&cfg)?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            for line in summary_lines(&reports) {
                println!("{line}");
            }
            println!("{} checks, {failed} failed", reports.len());
            Ok(failed == 0)
        }
        Cmd::Series {
            cmd: SeriesCmd::Dump { order },
        } => {
            let f = series::series_solve_f(*order)?;
            let fp = series::series_solve_fplus(*order)?;
            let mut s = String::from("n,coef_f,coef_fplus\n");
            for n in 0..=*order {
                s.push_str(&format!("{n},{},{}\n", format_rational(f.coeff(n)), fp.coeff(n)));
            }
            emit(&None, &s)?;
            Ok(true)
        }
        Cmd::Mc(a) => mc(a),
        Cmd::Run(a) => run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
