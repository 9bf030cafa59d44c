//! `floorsum`: batch driver over `floorsum-core`. JSON is the canonical output;
//! errors go to stderr as `{"error": {"kind", "message"}}` with a nonzero exit.

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floorsum_core::arith::{self, Budget, FunctionKind};
use floorsum_core::expsum::{self, BoundCase};
use floorsum_core::floorsum::{self as fs, Method};
use floorsum_core::identities::{self, IdentityKind, PhaseFunction};
use floorsum_core::pairs_opt::{self as po, ExponentOutcome, ExponentPair, Seed, Target};
use floorsum_core::{psi, Error};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "floorsum", version, about = "Floor-quotient sums S_f(x) = Σ_{n≤x} f(⌊x/n⌋) and their error exponents")]
struct Cli {
    /// `key = value` file whose keys mirror the long flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Largest materialized sieve table.
    #[arg(long, global = true, env = "FLOORSUM_MAX_TABLE_LEN")]
    max_table_len: Option<u64>,
    /// Largest x or n accepted anywhere.
    #[arg(long, global = true, env = "FLOORSUM_MAX_POINT")]
    max_point: Option<u64>,
    /// Largest r for τ_r.
    #[arg(long, global = true, env = "FLOORSUM_MAX_TAU_R")]
    max_tau_r: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate f(n) on [lo, hi] by segmented sieve (CSV `n,value`).
    Sieve(SieveArgs),
    /// S_f(x) exactly, with x·C_f and the residual E(x) = S_f(x) − x·C_f.
    Sum(SumArgs),
    /// E(x) on a log-spaced grid and the fitted slope of log|E| against log x.
    Scan(ScanArgs),
    /// C_f = Σ f(n)/(n(n+1)): partial sum and tail bound.
    Constant(ConstantArgs),
    /// Vaaler's degree-H approximation of ψ(x) = x − ⌊x⌋ − 1/2 and its Fejér envelope.
    Psi(PsiArgs),
    /// Seeded random checks of the Vaughan and hyperbola identities.
    Verify(VerifyArgs),
    /// Exponential sums Σ f(n) e(z/n) and measured-versus-claimed bound ratios.
    Expsum {
        #[command(subcommand)]
        command: ExpsumCommand,
    },
    /// Exponent pairs under the A and B processes, and exponent optimization.
    Pairs {
        #[command(subcommand)]
        command: PairsCommand,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SieveArgs {
    #[arg(long)]
    function: FunctionKind,
    #[arg(long)]
    lo: u64,
    #[arg(long)]
    hi: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SumArgs {
    #[arg(long)]
    function: FunctionKind,
    #[arg(long)]
    x: u64,
    #[arg(long, default_value = "fast")]
    method: Method,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cutoff for the partial sum of C_f.
    #[arg(long, default_value_t = 1_000_000)]
    cutoff: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    function: FunctionKind,
    /// `lo:hi:points`
    #[arg(long)]
    grid: String,
    #[arg(long)]
    cutoff: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    #[arg(long)]
    function: FunctionKind,
    #[arg(long, default_value_t = 1_000_000)]
    cutoff: u64,
}

#[derive(Args, Debug)]
struct PsiArgs {
    /// Degree H of the trigonometric polynomial.
    #[arg(long = "H")]
    h: u64,
    /// Number of grid points in [0, 1).
    #[arg(long, default_value_t = 10_000)]
    grid: u64,
    /// Include envelope statistics.
    #[arg(long)]
    report: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// vaughan-lambda | vaughan-mu | hyperbola | hyperbola-exp
    identity: IdentityKind,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum ExpsumCommand {
    /// |S| against z^ε times the claimed bound; cases lambda, bilinear:<r>,
    /// tau:<r>, mu-squares, mu2, 2omega, omega.
    Check(CheckArgs),
    /// Σ_{R<n≤R1} f(n) e(z/n).
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    case: BoundCase,
    #[arg(long)]
    z: f64,
    #[arg(long = "R")]
    r: u64,
    /// Defaults to 2R.
    #[arg(long = "R1")]
    r1: Option<u64>,
    /// `k,l` or a seed name.
    #[arg(long, default_value = "classic")]
    pair: String,
    #[arg(long, default_value_t = expsum::EPSILON)]
    eps: f64,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    function: FunctionKind,
    #[arg(long)]
    z: f64,
    #[arg(long = "R")]
    r: u64,
    #[arg(long = "R1")]
    r1: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum PairsCommand {
    /// Apply an A/B word (composition order, BA = B∘A) to a seed pair.
    Derive {
        #[arg(long)]
        word: String,
        /// trivial | vdc | classic | bourgain | hb:<m>
        #[arg(long)]
        seed: Seed,
    },
    /// Closed-form error exponent: lambda 14(k+1)/(29k−ℓ+30), tau:<r>, 2omega 2(k+1)/(3k−ℓ+5).
    Exponent {
        #[arg(long)]
        target: Target,
        /// `k,l` or a seed name.
        #[arg(long)]
        pair: String,
        /// Treat the pair as (k + ε, ℓ + ε).
        #[arg(long)]
        eps_carrier: bool,
    },
    /// Smallest exponent over all words of length ≤ depth from the seeds.
    Search {
        #[arg(long)]
        target: Target,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Comma-separated; hb:a..b expands.
        #[arg(long, default_value = "trivial,classic,bourgain")]
        seeds: String,
    },
    /// Exact minimax of max_i (a_i + b_i ν) from a JSON problem file.
    Balance {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn budget(cli: &Cli) -> Budget {
    let d = Budget::default();
    Budget {
        max_table_len: cli.max_table_len.unwrap_or(d.max_table_len),
        max_point: cli.max_point.unwrap_or(d.max_point),
        max_tau_r: cli.max_tau_r.unwrap_or(d.max_tau_r),
    }
}

fn check_budget(b: &Budget, kind: FunctionKind, x: u64) -> CliResult<()> {
    if x > b.max_point {
        return Err(Error::Budget {
            what: "x",
            requested: x,
            limit: b.max_point,
        }
        .into());
    }
    if let FunctionKind::TauR(r) = kind {
        if r > b.max_tau_r {
            return Err(Error::Budget {
                what: "tau order r",
                requested: u64::from(r),
                limit: u64::from(b.max_tau_r),
            }
            .into());
        }
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&PathBuf>, text: String) -> CliResult<String> {
    match out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn parse_pair(s: &str, eps_carrier: bool) -> CliResult<ExponentPair> {
    if s.contains(',') {
        Ok(ExponentPair::parse_coordinates(s, eps_carrier)?)
    } else {
        Ok(s.parse::<Seed>()?.pair()?)
    }
}

fn parse_grid(s: &str) -> CliResult<Vec<u64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, points] = parts[..] else {
        return Err(Error::Parse(format!("grid '{s}' should read lo:hi:points")).into());
    };
    let num = |t: &str| -> CliResult<u64> {
        let v: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad grid value '{t}'")))?;
        if !(v.is_finite() && v >= 1.0 && v.fract() == 0.0) {
            return Err(Error::Parse(format!("grid value '{t}' is not a positive integer")).into());
        }
        Ok(v as u64)
    };
    Ok(fs::log_grid(num(lo)?, num(hi)?, num(points)? as usize)?)
}

fn run(cli: &Cli) -> CliResult<String> {
    let b = budget(cli);
    match &cli.command {
        Command::Sieve(a) => {
            check_budget(&b, a.function, a.hi)?;
            let table = arith::build_sieve_with(a.function, a.lo, a.hi, &b)?;
            let mut out = String::from("n,value\n");
            for n in a.lo..=a.hi {
                let v = table.get(n).expect("table covers its range");
                writeln!(out, "{n},{v}").expect("string write");
            }
            emit(a.out.as_ref(), out)
        }
        Command::Sum(a) => {
            check_budget(&b, a.function, a.x)?;
            let rep = fs::floor_sum_report(a.function, a.x, a.method, a.cutoff)?;
            let text = match a.format {
                Format::Json => json(&rep)?,
                Format::Csv => format!(
                    "x,sum,main_term,residual\n{},{},{},{}\n",
                    rep.x,
                    rep.sum,
                    rep.x as f64 * rep.constant,
                    rep.residual
                ),
            };
            emit(a.out.as_ref(), text)
        }
        Command::Scan(a) => {
            let grid = parse_grid(&a.grid)?;
            check_budget(&b, a.function, grid.last().copied().unwrap_or(0))?;
            let rep = match a.cutoff {
                Some(c) => fs::error_scan_with_cutoff(a.function, &grid, c)?,
                None => fs::error_scan(a.function, &grid)?,
            };
            let text = match a.format {
                Format::Json => json(&rep)?,
                Format::Csv => {
                    let mut s = String::from("x,sum,main_term,residual\n");
                    for i in 0..rep.grid.len() {
                        writeln!(s, "{},{},{},{}", rep.grid[i], rep.sums[i], rep.main_terms[i], rep.residuals[i])
                            .expect("string write");
                    }
                    s
                }
            };
            emit(a.out.as_ref(), text)
        }
        Command::Constant(a) => {
            check_budget(&b, a.function, a.cutoff)?;
            #[derive(Serialize)]
            struct Out {
                kind: FunctionKind,
                #[serde(flatten)]
                constant: fs::MainTermConstant,
                completed: f64,
            }
            let c = fs::main_term_constant(a.function, a.cutoff)?;
            json(&Out {
                kind: a.function,
                completed: c.completed(),
                constant: c,
            })
        }
        Command::Psi(a) => {
            if a.report {
                json(&psi::pointwise_report(a.h, a.grid)?)
            } else {
                #[derive(Serialize)]
                struct Out {
                    degree: u64,
                    grid_size: u64,
                    max_violation: f64,
                }
                json(&Out {
                    degree: a.h,
                    grid_size: a.grid,
                    max_violation: psi::verify_pointwise_bound(a.h, a.grid)?,
                })
            }
        }
        Command::Verify(a) => json(&identities::random_suite(a.identity, a.trials, a.seed)?),
        Command::Expsum { command } => match command {
            ExpsumCommand::Check(a) => {
                let pair = parse_pair(&a.pair, false)?;
                check_budget(&b, FunctionKind::One, a.r1.unwrap_or(2 * a.r))?;
                let rep = expsum::check_bound_with(a.case, a.z, a.r, a.r1.unwrap_or(2 * a.r), &pair, a.eps)?;
                json(&rep)
            }
            ExpsumCommand::Eval(a) => {
                let r1 = a.r1.unwrap_or(2 * a.r);
                check_budget(&b, a.function, r1)?;
                let s = expsum::exp_sum(a.function, a.r, r1, &PhaseFunction::Reciprocal { z: a.z })?;
                #[derive(Serialize)]
                struct Out {
                    kind: FunctionKind,
                    z: f64,
                    #[serde(rename = "R")]
                    r: u64,
                    #[serde(rename = "R1")]
                    r1: u64,
                    re: f64,
                    im: f64,
                    abs: f64,
                }
                json(&Out {
                    kind: a.function,
                    z: a.z,
                    r: a.r,
                    r1,
                    re: s.re,
                    im: s.im,
                    abs: s.norm(),
                })
            }
        },
        Command::Pairs { command } => run_pairs(command),
    }
}

fn run_pairs(command: &PairsCommand) -> CliResult<String> {
    match command {
        PairsCommand::Derive { word, seed } => json(&seed.pair()?.apply_word(word)?),
        PairsCommand::Exponent {
            target,
            pair,
            eps_carrier,
        } => {
            #[derive(Serialize)]
            struct Out {
                target: Target,
                pair: ExponentPair,
                #[serde(flatten)]
                outcome: ExponentOutcome,
            }
            let pair = parse_pair(pair, *eps_carrier)?;
            let outcome = po::theorem_exponent(*target, &pair);
            json(&Out {
                target: *target,
                pair,
                outcome,
            })
        }
        PairsCommand::Search { target, depth, seeds } => {
            let seeds = Seed::parse_list(seeds)?
                .into_iter()
                .map(Seed::pair)
                .collect::<floorsum_core::Result<Vec<_>>>()?;
            if seeds.is_empty() {
                return Err(CliError::Usage("no seeds given".into()));
            }
            let (pair, exponent) = po::minimize_over_pairs(*target, &seeds, *depth)?;
            #[derive(Serialize)]
            struct Out {
                target: Target,
                depth: u32,
                pair: ExponentPair,
                exponent: po::Rational,
            }
            json(&Out {
                target: *target,
                depth: *depth,
                pair,
                exponent,
            })
        }
        PairsCommand::Balance { spec } => {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", spec.display())))?;
            let problem: po::BalanceProblem =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("balance problem: {e}")))?;
            json(&po::balance_auto(&problem)?)
        }
    }
}

/// A closed pipe (`floorsum ... | head`) is not an error.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn fail(err: &CliError) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": err.kind(), "message": err.message() } });
    eprintln!("{body}");
    ExitCode::from(if matches!(err, CliError::Usage(_)) { 2 } else { 1 })
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(config::ConfigError(m)) => return fail(&CliError::Usage(m)),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write_stdout(&e.to_string());
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail(&CliError::Usage(first.to_string()));
        }
    };
    match run(&cli) {
        Ok(text) => {
            write_stdout(&text);
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
