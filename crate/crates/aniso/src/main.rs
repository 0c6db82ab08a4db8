use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aniso::dsl::{self, Env, Query, QueryLine, Report};
use aniso::normlab::{dilation_scaling, LAMBDAS};
use aniso_core::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Decide embeddings, multiplications and parameter ranges for anisotropic function spaces.
#[derive(Parser, Debug)]
#[command(name = "aniso", version)]
struct Cli {
    /// Emit one JSON report per query.
    #[arg(long, global = true)]
    machine: bool,
    /// Declarations evaluated before the queries (repeatable). J, Sigma and Rdot are always bound.
    #[arg(long, global = true, value_name = "FILE")]
    prelude: Vec<PathBuf>,
    /// Concrete p for queries without `at p = ...`.
    #[arg(long, global = true, value_name = "P")]
    p: Option<Rational>,
    /// Evaluate queries concurrently (output order is preserved).
    #[arg(long, global = true)]
    batch: bool,
    /// Omit wall-clock timing from reports.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every query of a file, one per line.
    Run { file: PathBuf },
    /// Run a single query, e.g. "algebra W^{1}_p(R^1) ?".
    Query { text: String },
    /// Sobolev index of a space.
    Index { space: String },
    /// Is SRC continuously embedded in DST?
    Embed { src: String, dst: String },
    /// Pointwise multiplication X_1 * ... * X_m -> X (the target is the last space).
    Mult {
        #[arg(num_args = 3.., required = true)]
        spaces: Vec<String>,
    },
    /// Multiplier property with ELL distinguished factors (the target is the last space).
    Multiplier {
        #[arg(long)]
        ell: usize,
        #[arg(num_args = 3.., required = true)]
        spaces: Vec<String>,
    },
    /// Is the space a multiplication algebra?
    Algebra { space: String },
    /// Analyticity of a Nemytskij operator (the target is the last space).
    Nemytskij {
        /// Convergence radius.
        #[arg(long, default_value = "1")]
        r: Rational,
        /// phi(0) != 0.
        #[arg(long)]
        non_vanishing: bool,
        #[arg(num_args = 2.., required = true)]
        spaces: Vec<String>,
    },
    /// Exact set of p for which a decision query holds, e.g. "A -> B".
    SolveP { query: String },
    /// Complex or real interpolation of two spaces.
    Interp {
        method: InterpMethod,
        #[arg(long)]
        theta: Rational,
        /// Real method only: p, inf, or a number.
        #[arg(long, default_value = "p")]
        q: String,
        a: String,
        b: String,
    },
    /// Realize exponents rho_j for a weighted sum.
    Realize(Lemma<Rational>),
    /// Minimize phi over multi-indices of length at most n.
    Minimize(Lemma<u32>),
    /// Difference-quotient seminorm of a Gaussian test function.
    Seminorm {
        #[arg(long)]
        space: String,
        /// One width, or one per slice separated by commas.
        #[arg(long, default_value = "1")]
        width: String,
        #[arg(long, default_value = "1")]
        amp: Rational,
        #[arg(long, default_value = "0")]
        freq: Rational,
        #[arg(long, default_value = "0")]
        phase: Rational,
        /// Grid points per width.
        #[arg(long, default_value_t = 16)]
        ppw: u32,
        /// Print the (lambda, seminorm) dilation table as CSV instead.
        #[arg(long)]
        csv: bool,
    },
    /// Check every nonlinear term of a free-boundary problem.
    App {
        problem: AppProblem,
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Solve for the admissible p (the default without --p).
        #[arg(long, conflicts_with = "p")]
        solve_p: bool,
    },
}

#[derive(Args, Debug)]
struct Lemma<T: Clone + Send + Sync + std::str::FromStr + 'static>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    /// Comma-separated rationals.
    #[arg(long)]
    sigma: String,
    /// Comma-separated rationals.
    #[arg(long)]
    pi: String,
    /// rho for realize, n for minimize.
    #[arg(long, alias = "rho", alias = "n")]
    value: T,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InterpMethod {
    Complex,
    Real,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AppProblem {
    Stefan,
    Nvs,
}

fn tuple(list: &str) -> String {
    format!("({})", list)
}

/// Query text for the shorthand subcommands; `run` and `query` carry their own.
fn query_text(cmd: &Command) -> Option<String> {
    let product = |s: &[String]| {
        let (target, factors) = s.split_last().expect("clap enforces arity");
        format!("{} -> {}", factors.join(" * "), target)
    };
    Some(match cmd {
        Command::Run { .. } | Command::Query { .. } => return None,
        Command::Index { space } => format!("index {}", space),
        Command::Embed { src, dst } => format!("{} -> {}", src, dst),
        Command::Mult { spaces } => product(spaces),
        Command::Multiplier { ell, spaces } => format!("multiplier(ell={}) {}", ell, product(spaces)),
        Command::Algebra { space } => format!("algebra {}", space),
        Command::Nemytskij { r, non_vanishing, spaces } => {
            let (target, args) = spaces.split_last().expect("clap enforces arity");
            format!("nemytskij(r={}, vanishing={}) {} -> {}", r, if *non_vanishing { "no" } else { "yes" }, args.join(", "), target)
        }
        Command::SolveP { query } => format!("solve p: {}", query.trim_end_matches(['?', ' '])),
        Command::Interp { method: InterpMethod::Complex, theta, a, b, .. } => format!("interp complex(theta={}) {}, {}", theta, a, b),
        Command::Interp { method: InterpMethod::Real, theta, q, a, b } => format!("interp real(theta={}, q={}) {}, {}", theta, q, a, b),
        Command::Realize(l) => format!("realize(sigma={}, pi={}, rho={})", tuple(&l.sigma), tuple(&l.pi), l.value),
        Command::Minimize(l) => format!("minimize(sigma={}, pi={}, n={})", tuple(&l.sigma), tuple(&l.pi), l.value),
        Command::Seminorm { space, width, amp, freq, phase, ppw, .. } => {
            let width = if width.contains(',') { tuple(width) } else { width.clone() };
            format!("seminorm gaussian(width={}, amp={}, freq={}, phase={}, ppw={}) in {}", width, amp, freq, phase, ppw, space)
        }
        Command::App { problem, n, .. } => {
            format!("app {}(n={})", if matches!(problem, AppProblem::Stefan) { "stefan" } else { "nvs" }, n)
        }
    } + " ?")
}

fn load_env(cli: &Cli) -> Result<Env, String> {
    let mut env = Env::default();
    dsl::load_prelude(&mut env, dsl::FREE_BOUNDARY_PRELUDE).map_err(|e| e.to_string())?;
    for path in &cli.prelude {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
        dsl::load_prelude(&mut env, &src).map_err(|e| format!("{}:{}", path.display(), e))?;
    }
    Ok(env)
}

fn parse_queries(cli: &Cli, env: &mut Env) -> Result<Vec<QueryLine>, String> {
    let mut lines = match &cli.command {
        Command::Run { file } => {
            let src = std::fs::read_to_string(file).map_err(|e| format!("{}: {}", file.display(), e))?;
            dsl::parse_program(env, &src).map_err(|e| format!("{}:{}", file.display(), e))?.into_iter().map(|(_, q)| q).collect()
        }
        Command::Query { text } => vec![dsl::parse_query(env, text).map_err(|e| e.to_string())?],
        cmd => vec![dsl::parse_query(env, &query_text(cmd).expect("shorthand command")).map_err(|e| e.to_string())?],
    };
    if let Some(p) = &cli.p {
        for l in lines.iter_mut().filter(|l| l.at_p.is_none() && !matches!(l.query, Query::SolveP(_))) {
            l.at_p = Some(p.clone());
        }
    }
    Ok(lines)
}

fn emit(cli: &Cli, reports: &[Report]) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    for (i, r) in reports.iter().enumerate() {
        if cli.machine {
            writeln!(out, "{}", serde_json::to_string(r).expect("reports serialize"))?;
        } else {
            if i > 0 {
                writeln!(out)?;
            }
            write!(out, "{}", r)?;
        }
    }
    out.flush()
}

fn csv(line: &QueryLine) -> Result<(), String> {
    let Query::Seminorm { func, space } = &line.query else { unreachable!("seminorm subcommand") };
    let space = match &line.at_p {
        Some(p) => space.at(&(Rational::one() / p.clone())),
        None => space.clone(),
    };
    let g = dsl::gaussian(func, &space).map_err(|e| e.to_string())?;
    let fit = dilation_scaling(&g, &space, func.ppw as usize, &LAMBDAS).map_err(|e| e.to_string())?;
    println!("lambda,seminorm");
    for (l, v) in &fit.table {
        println!("{},{:.10e}", l, v);
    }
    eprintln!("slope {:.6} (expected {:.6})", fit.slope, fit.expected);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let parsed = load_env(&cli).and_then(|mut env| parse_queries(&cli, &mut env));
    let lines = match parsed {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    if let Command::Seminorm { csv: true, .. } = cli.command {
        return match csv(&lines[0]) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(3)
            }
        };
    }
    let timing = !cli.no_timing;
    let reports: Vec<Report> = if cli.batch {
        dsl::run_batch(&lines, timing)
    } else {
        lines.iter().map(|l| if timing { dsl::run_timed(l) } else { dsl::run(l) }).collect()
    };
    if let Err(e) = emit(&cli, &reports) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {}", e);
        }
    }
    ExitCode::from(reports.iter().map(Report::exit_code).max().unwrap_or(0) as u8)
}
