//! Batch runs over a directory. Instances are solved concurrently, rows are
//! written in file-name order, and a failing file becomes an error row.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use mdsdvrp::oracle::{audit_ratio, solve_exact, OracleLimits};
use mdsdvrp::rational::format_rational;
use mdsdvrp::solvers::{solve, SolveOptions};
use mdsdvrp::SolverKind;
use rayon::prelude::*;

use crate::{load_instance, EXIT_INPUT};

const HEADER: [&str; 13] = [
    "instance",
    "solver",
    "status",
    "cost",
    "opt",
    "ratio",
    "claimed_ratio",
    "within_claim",
    "feasible",
    "iterations_run",
    "iterations_enumerated",
    "time_ms",
    "error",
];

type Row = Vec<String>;

fn error_row(name: &str, solver: &str, msg: String) -> Row {
    let mut row = vec![String::new(); HEADER.len()];
    row[0] = name.into();
    row[1] = solver.into();
    row[2] = "error".into();
    row[12] = msg.replace('\n', "; ");
    row
}

fn instance_rows(path: &Path, solvers: &[SolverKind], opts: &SolveOptions, limits: &OracleLimits, timing: bool) -> Vec<Row> {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let inst = match load_instance(path) {
        Ok(i) => i,
        Err(msg) => return vec![error_row(&name, "", msg)],
    };
    let opt = if limits.admits(&inst) { solve_exact(&inst, limits).ok() } else { None };
    let chosen: Vec<SolverKind> = if solvers.is_empty() {
        SolverKind::ALL.into_iter().filter(|&k| k != SolverKind::Sdvrp || inst.k() == 1).collect()
    } else {
        solvers.to_vec()
    };
    chosen
        .into_iter()
        .map(|kind| {
            let start = Instant::now();
            let r = match solve(&inst, kind, opts) {
                Ok(r) => r,
                Err(e) => return error_row(&name, kind.name(), e.to_string()),
            };
            let ms = start.elapsed().as_millis();
            let audit = opt.as_ref().map(|o| audit_ratio(&inst, &r, o));
            let feasible = mdsdvrp::instance::check_solution(&inst, &r.solution, &r.gamma)
                .map(|a| a.feasible)
                .unwrap_or(false);
            let (opt_s, ratio_s, within_s) = match (&opt, audit) {
                (Some(o), Some(Ok(a))) => (
                    o.opt_cost.to_string(),
                    a.ratio.as_ref().map(format_rational).unwrap_or_else(|| "inf".into()),
                    a.within_claim.map(|w| w.to_string()).unwrap_or_default(),
                ),
                _ => Default::default(),
            };
            vec![
                name.clone(),
                kind.name().into(),
                "ok".into(),
                r.cost.to_string(),
                opt_s,
                ratio_s,
                r.claimed_ratio.as_ref().map(format_rational).unwrap_or_default(),
                within_s,
                feasible.to_string(),
                r.iterations_run.to_string(),
                r.iterations_enumerated.to_string(),
                if timing { ms.to_string() } else { String::new() },
                String::new(),
            ]
        })
        .collect()
}

pub fn cmd_bench(dir: &Path, solvers: &[SolverKind], opts: &SolveOptions, timing: bool) -> ExitCode {
    let limits = match OracleLimits::from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect(),
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    files.sort();
    let rows: Vec<Vec<Row>> =
        files.par_iter().map(|p| instance_rows(p, solvers, opts, &limits, timing)).collect();

    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let written = out
        .write_record(HEADER)
        .and_then(|_| rows.iter().flatten().try_for_each(|r| out.write_record(r)))
        .and_then(|_| out.flush().map_err(csv::Error::from));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
