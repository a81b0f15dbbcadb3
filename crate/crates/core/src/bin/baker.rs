use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use baker_core::contfrac::expand;
use baker_core::lattice::{linear_form_lower_bound, FormBoundQuery};
use baker_core::linforms::{matveev_lower_bound, DBound, MatveevInput};
use baker_core::numerics::{log_of_int, with_precision_retry, PrecisionContext};
use baker_core::pipeline::config::StageToggles;
use baker_core::pipeline::{prove, special, stages, PipelineConfig, ProofReport};
use baker_core::reduction::bd_reduce_with;
use baker_core::search::{Equation, SearchBox};
use baker_core::sieve::{carmichael, power_period};
use baker_core::{Error, Result};

#[derive(Parser)]
#[command(name = "baker", about = "Staged Baker-method proof for (3^x1-1)(3^x2-1) = (5^y1-1)(5^y2-1)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run only up to this stage (matveev, lll, bd, pairwise, search, special).
    #[arg(long, global = true)]
    stage: Option<String>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the whole pipeline; exit status 0 iff PROVED.
    Prove {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Lower bound for a linear form in the logarithms of the given integers.
    Matveev {
        #[arg(long, value_delimiter = ',', default_value = "3,5")]
        bases: Vec<u64>,
    },
    /// Lattice lower bound for |sum x_i log b_i + log c|.
    LllBound {
        #[arg(long, value_delimiter = ',', default_value = "3,5")]
        bases: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<String>,
        /// Rational constant `p/q`.
        #[arg(long)]
        constant: Option<String>,
    },
    /// Baker-Davenport reduction for one member of a case family.
    BdReduce {
        /// 1: fixed x1, bounds y1. 2: fixed y1, bounds x1.
        #[arg(long, default_value_t = 1)]
        case: u8,
        #[arg(long)]
        value: u64,
        /// Bound M on the unknown coefficient; defaults to the stage-1 bound.
        #[arg(long)]
        m: Option<String>,
    },
    /// Continued fraction of log a / log b.
    Contfrac {
        #[arg(long, default_value_t = 5)]
        a: u64,
        #[arg(long, default_value_t = 3)]
        b: u64,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        /// Print the first convergent with denominator above this.
        #[arg(long)]
        exceed: Option<String>,
    },
    /// The x1 = 2 modular sieve.
    Sieve {
        #[arg(long, default_value_t = 819)]
        modulus: u64,
    },
    /// Exhaustive search over a box, ranges written `lo..hi` (inclusive).
    Search {
        #[arg(long, default_value = "1..20")]
        x1: String,
        #[arg(long, default_value = "1..20")]
        x2: String,
        #[arg(long, default_value = "1..20")]
        y1: String,
        #[arg(long, default_value = "1..20")]
        y2: String,
        #[arg(long)]
        filters: bool,
    },
    /// Render a saved JSON report as text.
    Report { path: PathBuf },
}

fn big(s: &str) -> Result<BigInt> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once('e') {
        let m: BigInt = m.parse().map_err(|_| Error::Config(format!("bad integer {s:?}")))?;
        let e: u32 = e.parse().map_err(|_| Error::Config(format!("bad exponent in {s:?}")))?;
        return Ok(m * num_traits::Pow::pow(BigInt::from(10), e));
    }
    s.parse().map_err(|_| Error::Config(format!("bad integer {s:?}")))
}

fn ratio(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => Ok(BigRational::new(big(p)?, big(q)?)),
        None => Ok(BigRational::from_integer(big(s)?)),
    }
}

fn range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Config(format!("bad range {s:?}, expected lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.trim_start_matches('=');
    Ok(lo.parse().map_err(|_| bad())?..=hi.parse().map_err(|_| bad())?)
}

fn config(g: &Global) -> Result<PipelineConfig> {
    let mut cfg = match &g.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = g.precision {
        cfg.precision.working = p;
        cfg.precision.max = cfg.precision.max.max(p);
    }
    if let Some(s) = &g.stage {
        cfg.stages = StageToggles::only_through(s)?;
    }
    if g.out.is_some() {
        cfg.report = g.out.clone();
    }
    if g.threads.is_some() {
        cfg.threads = g.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = config(&cli.global)?;
    let ctx: PrecisionContext = cfg.precision_context()?;
    match cli.cmd {
        Cmd::Prove { cache } => {
            if cache.is_some() {
                cfg.cache_dir = cache;
            }
            let run = prove(&cfg)?;
            print!("{}", run.report.render_text());
            return Ok(run.report.is_proved());
        }
        Cmd::Matveev { bases } => {
            let c = with_precision_retry(&ctx, |c| {
                matveev_lower_bound(&MatveevInput::for_bases(&bases, DBound::Symbolic, c)?, c)
            })?;
            println!("log|Gamma| > -{c}   (Z = 1 + log D)");
        }
        Cmd::LllBound { bases, bounds, constant } => {
            let bounds = bounds.iter().map(|b| big(b)).collect::<Result<Vec<_>>>()?;
            let constant = constant.as_deref().map(ratio).transpose()?;
            let q = FormBoundQuery::new(bases.into_iter().map(BigInt::from).collect(), constant, bounds)?;
            let lb = linear_form_lower_bound(&q, &ctx)?;
            println!("lower bound {:.6e} (scaling 10^{})", lb.lower.to_f64(), lb.scaling.to_string().len() - 1);
        }
        Cmd::BdReduce { case, value, m } => {
            let m = match m {
                Some(m) => big(&m)?,
                None => {
                    let s1 = with_precision_retry(&ctx, stages::stage1)?;
                    if case == 1 { s1.z_max } else { s1.ysum_max }
                }
            };
            let out = bd_reduce_with(&ctx, |c| match case {
                1 => stages::case1_problem(value, &m, c),
                2 => stages::case2_problem(value, &m, c),
                _ => Err(Error::Config("case must be 1 or 2".into())),
            })?;
            println!(
                "q_{} = {}\nxi = {:.6e}\nbound k <= {}",
                out.convergent.index,
                out.convergent.q,
                out.xi.to_f64(),
                out.k_bound
            );
        }
        Cmd::Contfrac { a, b, depth, exceed } => {
            let cf = with_precision_retry(&ctx, |c| {
                expand(&log_of_int(&a.into(), c)?.checked_div(&log_of_int(&b.into(), c)?)?, depth)
            })?;
            match exceed {
                Some(n) => match cf.first_denominator_exceeding(&big(&n)?) {
                    Some(c) => println!("q_{} = {}\np_{} = {}", c.index, c.q, c.index, c.p),
                    None => println!("not reached within {} certified terms", cf.certified_depth()),
                },
                None => {
                    for c in cf.convergents() {
                        println!("{}: {}/{}", c.index, c.p, c.q);
                    }
                }
            }
        }
        Cmd::Sieve { modulus } => {
            println!("carmichael({modulus}) = {}", carmichael(modulus));
            for base in [3, 5] {
                let (s, t) = power_period(base, modulus)?;
                println!("{base}^k mod {modulus}: preperiod {s}, period {t}");
            }
            let r = special::x1_two(modulus)?;
            println!("x1 = 2: {} classes, {} survivors", r.grid_size, r.survivors.len());
            for s in &r.survivors {
                println!("  {s:?}");
            }
        }
        Cmd::Search { x1, x2, y1, y2, filters } => {
            let bx = SearchBox::new(range(&x1)?, range(&x2)?, range(&y1)?, range(&y2)?)?.with_filters(filters);
            let out = Equation::new(cfg.equation.a, cfg.equation.b)?.enumerate(&bx)?;
            println!("{} pairs, {} candidates", out.pairs, out.candidates);
            for s in out.solutions.as_slice() {
                println!("{s:?}");
            }
        }
        Cmd::Report { path } => {
            let r = ProofReport::load(&path)?;
            print!("{}", r.render_text());
            return Ok(r.is_proved());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
