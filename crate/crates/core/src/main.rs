use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use agm::algorithms::ScParams;
use agm::bench::{self, FigureId, FigureSuite, FstarFixture};
use agm::conditions::{self, Verdict};
use agm::config::{self, RunConfig};
use agm::ode::{self, OdeKind, OdeParams, OdeSystem};
use agm::problems::ProblemSpec;
use agm::sequence::Sequence;
use agm::series::{SqrtQSeries, DEFAULT_ORDER, ZERO_THRESHOLD};
use agm::{Error, Result, Vector};

#[derive(Parser)]
#[command(name = "agm", version, about = "Generalized accelerated gradient methods")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a config file and write its trajectory CSV.
    Run { cfg: PathBuf },
    /// Evaluate the acceleration conditions for a parameter choice.
    Check(CheckArgs),
    /// Run a config with its Lyapunov monitor and print the monitor CSV.
    Monitor { cfg: PathBuf },
    /// Integrate a limiting ODE and print `t,f_gap,V,rate_check`.
    Ode(OdeArgs),
    /// Print the three-variable and single-variable forms of a config's algorithm.
    Convert { cfg: PathBuf },
    /// Run one figure suite and write per-cell CSVs and summary.csv.
    Bench(BenchArgs),
    /// Compute the reference f* fixture for the log-sum-exp suite.
    Fstar {
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = bench::FSTAR_ITERS)]
        iterations: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    ScConst,
    ScSeries,
    CSeq,
    Cor1,
}

/// Series arguments are comma-separated coefficients of 1, √q, q, ...
#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tau: Vec<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// c-seq: αₖ = (k + r)/r.
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// c-seq: use the FISTA sequence instead of (k + r)/r.
    #[arg(long)]
    fista: bool,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 100_000)]
    k_max: usize,
    /// Leading-coefficient sign threshold for the series classification.
    #[arg(long, default_value_t = ZERO_THRESHOLD)]
    zero_threshold: f64,
}

#[derive(clap::Args)]
struct OdeArgs {
    #[arg(long)]
    kind: OdeKind,
    /// Objective; defaults to the scalar quadratic with curvature --mu.
    #[arg(long)]
    problem: Option<String>,
    /// Starting point, comma-separated; defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    #[arg(long, default_value_t = 2.0)]
    c1: f64,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    #[arg(long = "beta-gamma", default_value_t = 1.0)]
    beta_gamma: f64,
    #[arg(long, default_value_t = 0.01)]
    s: f64,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-max", default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

#[derive(clap::Args)]
struct BenchArgs {
    figure: FigureId,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    outdir: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config { line: 0, msg: format!("{}: {e}", path.display()) })?;
    RunConfig::parse(&text)
}

fn series(coeffs: &[f64], name: &str) -> Result<SqrtQSeries> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter(format!("--{name} is required for this family")));
    }
    Ok(SqrtQSeries::new(coeffs, DEFAULT_ORDER.max(coeffs.len() - 1)))
}

fn need(x: Option<f64>, name: &str) -> Result<f64> {
    x.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this family")))
}

fn check(a: &CheckArgs) -> Result<Vec<Verdict>> {
    Ok(match a.family {
        Family::ScConst => {
            let (eta, nu, tau) = (series(&a.eta, "eta")?, series(&a.nu, "nu")?, series(&a.tau, "tau")?);
            if [&eta, &nu, &tau].iter().any(|s| s.coeffs()[1..].iter().any(|&c| c != 0.0)) {
                return Err(Error::InvalidParameter("sc-const takes one value per parameter; use sc-series".into()));
            }
            let p = ScParams::new(eta, nu, tau);
            let (i, ii) = conditions::series_i_ii(&p);
            vec![
                conditions::check_thm1(p.eta.coeff(0), p.nu.coeff(0), p.tau.coeff(0)),
                conditions::classify_lemma_s2_with(&i, &ii, a.zero_threshold),
            ]
        }
        Family::ScSeries => {
            let p = ScParams::new(series(&a.eta, "eta")?, series(&a.nu, "nu")?, series(&a.tau, "tau")?);
            let (i, ii) = conditions::series_i_ii(&p);
            vec![conditions::check_thm2(&p), conditions::check_thm3(&p), conditions::classify_lemma_s2_with(&i, &ii, a.zero_threshold)]
        }
        Family::CSeq => {
            let mut p = config::nag_c_family(a.r, a.beta, a.gamma)?;
            if a.fista {
                p.alpha = Sequence::fista();
            }
            vec![conditions::check_thm4(&p, a.k_max)]
        }
        Family::Cor1 => vec![conditions::check_cor1(need(a.c0, "c0")?, need(a.c1, "c1")?, need(a.c2, "c2")?)],
    })
}

fn ode_csv(a: &OdeArgs) -> Result<String> {
    let obj = match &a.problem {
        Some(text) => ProblemSpec::parse(text).map_err(Error::InvalidParameter)?.build()?,
        None => ProblemSpec::ScalarQuadratic { mu: a.mu.unwrap_or(1.0) }.build()?,
    };
    let x0 = if a.x0.is_empty() { Vector::from_element(obj.dim(), 1.0) } else { Vector::from_vec(a.x0.clone()) };
    let params = OdeParams {
        c0: a.c0,
        c1: a.c1,
        r: a.r,
        beta_over_gamma: a.beta_gamma,
        s: a.s,
        mu: a.mu.unwrap_or(obj.mu),
        t_eps: None,
    };
    let sys = OdeSystem::new(a.kind, obj, x0, params)?;
    let dt = a.dt.unwrap_or_else(|| sys.default_dt());
    Ok(ode::integrate(&sys, dt, a.t_max, a.stride.max(1))?.to_csv_string())
}

fn bench_cmd(a: &BenchArgs) -> Result<()> {
    let mut suite = FigureSuite::new(a.figure, a.seed);
    if let Some(k) = a.k {
        suite.k_max = k;
    }
    suite.workers = a.workers;
    let f_star = match a.figure {
        FigureId::S3 => {
            // reuse a fixture from an earlier `agm fstar` run when present
            let path = a.outdir.join(FstarFixture::file_name(a.seed));
            let fx = match fs::read_to_string(&path) {
                Ok(text) => FstarFixture::parse(&text)?,
                Err(_) => bench::reference_fstar(a.seed, &a.outdir, bench::FSTAR_ITERS)?.0,
            };
            Some(fx.f_star)
        }
        _ => None,
    };
    let summaries = bench::run_figure(&suite, &a.outdir, f_star)?;
    for (what, holds) in bench::orderings(&summaries) {
        println!("{} {what}", if holds { "holds" } else { "fails" });
    }
    println!("{}", a.outdir.join("summary.csv").display());
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Run { cfg } => {
            let out = config::run_config(&read_config(&cfg)?)?;
            match out.csv_written {
                Some(path) => println!("{path}"),
                None => print!("{}", out.trajectory.to_csv_string()),
            }
        }
        Cmd::Check(a) => {
            for v in check(&a)? {
                println!("{v}");
            }
        }
        Cmd::Monitor { cfg } => print!("{}", config::monitor_csv(&read_config(&cfg)?)?),
        Cmd::Ode(a) => print!("{}", ode_csv(&a)?),
        Cmd::Convert { cfg } => print!("{}", config::convert(&read_config(&cfg)?.algo)?),
        Cmd::Bench(a) => bench_cmd(&a)?,
        Cmd::Fstar { outdir, seed, iterations } => {
            let (fx, path) = bench::reference_fstar(seed, &outdir, iterations)?;
            print!("{}", fx.to_text());
            println!("# written to {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("agm: {e}");
            ExitCode::from(config::exit_code(&e) as u8)
        }
    }
}
