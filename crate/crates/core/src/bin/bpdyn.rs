//! `bpdyn`: generate planted problems, solve them, run sweeps, verify against
//! oracles.
//!
//! Exit status: 0 success, 1 invalid argument, 2 usage error, 3 solve did not
//! converge, 4 solve diverged, 5 verification failure, 6 I/O or parse error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bpdyn::experiment::{self, RunSpec, VerifySettings, DEFAULT_AMPLITUDE};
use bpdyn::metrics::{mse, relative_error};
use bpdyn::model::{gen_instance, read_problem};
use bpdyn::solver::write_trace;
use bpdyn::{Error, Problem, RngSpec, SolveError, SolverConfig, TraceFlags, Variant};

const EXIT_INVALID: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_DIVERGED: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;
const EXIT_IO: u8 = 6;

#[derive(Parser)]
#[command(name = "bpdyn", version, about = "Neural-dynamics solvers for Basis Pursuit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write planted problem files and print their SHA-256
    Generate(GenerateArgs),
    /// Solve one problem, from a file or generated on the fly
    Solve(SolveArgs),
    /// Run a parameter sweep and emit the metrics CSV
    Sweep(SweepArgs),
    /// Compare the solver against the reference oracles
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    omega: usize,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = DEFAULT_AMPLITUDE)]
    amplitude: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "improved-augmented")]
    variant: Variant,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Tolerance on both the primal residual and the state change
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem file; if absent one is generated from --n/--m/--omega
    #[arg(long, conflicts_with_all = ["n", "m", "omega"])]
    problem: Option<PathBuf>,
    #[arg(long, requires_all = ["m", "omega"])]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write a per-iteration trace (residuals, Lyapunov value, relative error)
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the recovered signal, one value per line
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with RunSpec fields; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    id: Option<String>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    variant: Option<Vec<Variant>>,
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory; the CSV goes to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit mean relative error per iteration
    #[arg(long)]
    trace: bool,
    /// Measure wall time per trial (makes the CSV non-reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Problem widths, comma separated; up to 16 uses the exhaustive search
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    sizes: Vec<usize>,
    /// Judged instances per width
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "improved-augmented")]
    variant: Variant,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
        Error::Diverged { .. } => EXIT_DIVERGED,
        _ => EXIT_INVALID,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(&e))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode, Error> {
    let files = experiment::generate(a.n, a.m, a.omega, a.sigma, a.amplitude, a.seed, a.count, &a.out)?;
    for f in files {
        println!("{}  {}", f.sha256, f.path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn load_or_generate(a: &SolveArgs) -> Result<Problem, Error> {
    match (&a.problem, a.n, a.m, a.omega) {
        (Some(path), ..) => read_problem(path),
        (None, Some(n), Some(m), Some(omega)) => {
            if omega >= m {
                return Err(Error::InvalidArgument(format!(
                    "need 0 < omega < m, got omega={omega}, m={m}"
                )));
            }
            let stream = experiment::trial_stream(n, m, omega, a.sigma, 0);
            gen_instance(n, m, omega, DEFAULT_AMPLITUDE, a.sigma, RngSpec::new(a.seed, stream))
        }
        _ => Err(Error::InvalidArgument(
            "give --problem or all of --n, --m, --omega".into(),
        )),
    }
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode, Error> {
    let problem = load_or_generate(&a)?;
    let s = &a.solver;
    let flags = TraceFlags {
        state: false,
        lyapunov: a.trace.is_some(),
        residual: a.trace.is_some(),
        error: a.trace.is_some() && problem.truth.is_some(),
    };
    let cfg = SolverConfig::new(s.variant, s.mu)
        .with_kappa(s.kappa)
        .with_tol(s.tol)
        .with_max_iters(s.max_iters)
        .with_trace(flags);
    println!("n={} m={} variant={} mu={}", problem.n(), problem.m(), s.variant, s.mu);
    match bpdyn::solve(&problem, &cfg, None) {
        Ok(r) => {
            println!("converged={}", r.converged);
            println!("iterations={}", r.iters_used);
            println!("primal_residual={:e}", r.final_residual);
            println!("stationarity={:e}", r.final_station);
            if let Some(t) = &problem.truth {
                let truth = t.dense();
                println!("mse={:e}", mse(&r.x_hat, &truth)?);
                if t.omega() > 0 {
                    println!("relative_error={:e}", relative_error(&r.x_hat, &truth)?);
                }
            }
            if let (Some(path), Some(tr)) = (&a.trace, &r.traces) {
                let mut w = create(path)?;
                write_trace(&mut w, &tr.records)
                    .and_then(|_| w.flush())
                    .map_err(io_at(path))?;
            }
            if let Some(path) = &a.out {
                let mut w = create(path)?;
                for v in &r.x_hat {
                    writeln!(w, "{v:.16e}").map_err(io_at(path))?;
                }
                w.flush().map_err(io_at(path))?;
            }
            Ok(if r.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NOT_CONVERGED)
            })
        }
        Err(SolveError::Diverged(d)) => {
            println!("converged=false");
            println!("diverged_at={}", d.iter);
            if let (Some(path), Some(tr)) = (&a.trace, &d.traces) {
                let mut w = create(path)?;
                write_trace(&mut w, &tr.records)
                    .and_then(|_| w.flush())
                    .map_err(io_at(path))?;
            }
            eprintln!("error: diverged: non-finite state at iteration {}", d.iter);
            Ok(ExitCode::from(EXIT_DIVERGED))
        }
        Err(SolveError::Invalid(e)) => Err(e),
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode, Error> {
    let mut spec = match &a.config {
        Some(path) => RunSpec::load(path)?,
        None => RunSpec::default(),
    };
    macro_rules! take {
        ($($field:ident),*) => { $( if let Some(v) = a.$field { spec.$field = v; } )* };
    }
    take!(id, n, m, omega, sigma, variant, mu, kappa, max_iters, tol, trials, seed, jobs);
    if a.out.is_some() {
        spec.out = a.out;
    }
    spec.curves |= a.trace;
    spec.timing |= a.timing;

    match spec.out.clone() {
        Some(dir) => {
            for path in experiment::write_sweep(&spec, &dir)? {
                println!("{}", path.display());
            }
        }
        None => {
            let out = experiment::run_sweep(&spec)?;
            print!("{}", experiment::sweep_csv(&out));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, Error> {
    let settings = VerifySettings {
        seed: a.seed,
        cases: a.cases,
        variant: a.variant,
        mu: a.mu,
        ..VerifySettings::default()
    };
    let reports = experiment::verify(&a.sizes, &settings)?;
    let stdout = io::stdout();
    let mut w = stdout.lock();
    experiment::write_verify_report(&mut w, &reports).map_err(io_at(Path::new("<stdout>")))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    let skipped = reports
        .iter()
        .filter(|r| r.kind == experiment::CaseKind::Ambiguous)
        .count();
    writeln!(
        w,
        "{} cases, {} failed, {} ambiguous skipped",
        reports.len(),
        failed,
        skipped
    )
    .map_err(io_at(Path::new("<stdout>")))?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    result.unwrap_or_else(fail)
}
