use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mdsdvrp::instance::{check_solution, generate_instance, parse_instance, write_instance, FleetPolicy, GenSpec};
use mdsdvrp::mdtsp::MdTspChoice;
use mdsdvrp::rational::{format_rational, parse_rational};
use mdsdvrp::report::{Format, Report};
use mdsdvrp::solvers::{solve, SolveOptions};
use mdsdvrp::{Error, Instance, Rational, Solution, SolverKind};

mod bench;

/// Exit status for an instance or file that cannot be used.
const EXIT_INPUT: u8 = 1;
/// Exit status for a solver diagnostic.
const EXIT_SOLVER: u8 = 2;
/// Exit status for a solution failing the feasibility check.
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "mdsdvrp", version, about = "Approximation algorithms for the multiple-depot split delivery VRP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print a report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Include wall-clock time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run solvers over every instance file in a directory; CSV on stdout.
    Bench {
        dir: PathBuf,
        /// Solvers to run (repeatable); defaults to all, sdvrp only on one-depot instances.
        #[arg(long = "solver", value_name = "SOLVER")]
        solvers: Vec<SolverKind>,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        timing: bool,
    },
    /// Check a solution (bare or inside a solve report) against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        /// Capacity factor; defaults to the report's gamma, else 1.
        #[arg(long, value_parser = rational_arg)]
        gamma: Option<Rational>,
    },
    /// Generate random instances.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "alg3")]
    solver: SolverKind,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args, Clone)]
struct Tuning {
    /// Capacity slack of the bi-factor solvers, e.g. `0.5` or `1/4`.
    #[arg(long, default_value = "1", value_parser = rational_arg)]
    eps: Rational,
    #[arg(long, default_value = "forest2")]
    mdtsp: MdTspChoice,
    /// Stop after this many candidates (voids the ratio guarantee).
    #[arg(long)]
    max_iters: Option<u64>,
}

impl Tuning {
    fn options(&self) -> SolveOptions {
        SolveOptions { eps: self.eps, mdtsp: self.mdtsp, max_iters: self.max_iters }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long = "capacity", short = 'Q')]
    capacity: u64,
    /// Inclusive demand range `lo:hi`; defaults to `1:Q`.
    #[arg(long, value_parser = range_arg)]
    demand: Option<(u64, u64)>,
    /// `tight`, `slack:<s>` or `extra:<e>`.
    #[arg(long, default_value = "extra:0")]
    fleet: FleetPolicy,
    /// Number of instances, seeded `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Output file (single instance) or directory (several); stdout otherwise.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn range_arg(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected `lo:hi`")?;
    let p = |v: &str| v.trim().parse::<u64>().map_err(|_| format!("invalid bound `{v}`"));
    Ok((p(lo)?, p(hi)?))
}

/// Reads and validates an instance; the error string is ready for stderr.
pub(crate) fn load_instance(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let inst = parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let violations = inst.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(format!("{}: invalid instance\n{}", path.display(), list.join("\n")));
    }
    Ok(inst)
}

fn is_solver_diagnostic(e: &Error) -> bool {
    !matches!(e, Error::Syntax { .. } | Error::InvalidInstance(_) | Error::Json(_))
}

fn cmd_solve(path: &Path, args: &SolverArgs, format: Format, timing: bool) -> ExitCode {
    let inst = match load_instance(path) {
        Ok(i) => i,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let opts = args.tuning.options();
    let start = Instant::now();
    let result = match solve(&inst, args.solver, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_solver_diagnostic(&e) { EXIT_SOLVER } else { EXIT_INPUT });
        }
    };
    let elapsed = start.elapsed();
    let mut report = match Report::new(&inst, &result) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SOLVER);
        }
    };
    if timing {
        report.wall_ms = Some(elapsed.as_millis());
    }
    print!("{}", report.render(format));
    if report.audit.feasible {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: solver output failed its own feasibility check");
        ExitCode::from(EXIT_SOLVER)
    }
}

fn cmd_verify(inst_path: &Path, sol_path: &Path, gamma: Option<Rational>) -> ExitCode {
    let inst = match load_instance(inst_path) {
        Ok(i) => i,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let text = match fs::read_to_string(sol_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", sol_path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let solution = match Solution::from_json_str(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", sol_path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let gamma = gamma.or_else(|| report_gamma(&text)).unwrap_or_else(|| Rational::from_integer(1));
    let audit = match check_solution(&inst, &solution, &gamma) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    println!(
        "gamma {} cost {} tours {} vehicles {}",
        format_rational(&gamma),
        audit.total_cost,
        solution.tours.len(),
        audit.vehicles_used
    );
    if audit.feasible {
        println!("feasible");
        return ExitCode::SUCCESS;
    }
    for v in &audit.violations {
        println!("{}: {}", v.condition, v.detail);
    }
    println!("infeasible ({} violations)", audit.violations.len());
    ExitCode::from(EXIT_INFEASIBLE)
}

/// The `gamma` field of a solve report, if the text is one.
fn report_gamma(text: &str) -> Option<Rational> {
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    parse_rational(value.get("gamma")?.as_str()?)
}

fn cmd_gen(args: &GenArgs) -> ExitCode {
    let demand_range = args.demand.unwrap_or((1, args.capacity.max(1)));
    let make = |seed: u64| {
        generate_instance(&GenSpec {
            seed,
            n: args.n,
            k: args.k,
            capacity: args.capacity,
            demand_range,
            fleet: args.fleet.clone(),
        })
    };
    let fail = |e: String| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_INPUT)
    };
    if args.count <= 1 {
        let text = match make(args.seed) {
            Ok(inst) => write_instance(&inst),
            Err(e) => return fail(e.to_string()),
        };
        return match &args.out {
            Some(path) => match fs::write(path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(format!("{}: {e}", path.display())),
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        };
    }
    let Some(dir) = &args.out else {
        return fail("--count above 1 needs --out <directory>".into());
    };
    if let Err(e) = fs::create_dir_all(dir) {
        return fail(format!("{}: {e}", dir.display()));
    }
    for seed in args.seed..args.seed + args.count {
        let inst = match make(seed) {
            Ok(inst) => inst,
            Err(e) => return fail(format!("seed {seed}: {e}")),
        };
        let path = dir.join(format!("inst_{seed:06}.txt"));
        if let Err(e) = fs::write(&path, write_instance(&inst)) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { instance, solver, format, timing } => cmd_solve(&instance, &solver, format, timing),
        Command::Bench { dir, solvers, tuning, timing } => bench::cmd_bench(&dir, &solvers, &tuning.options(), timing),
        Command::Verify { instance, solution, gamma } => cmd_verify(&instance, &solution, gamma),
        Command::Gen(args) => cmd_gen(&args),
    }
}
