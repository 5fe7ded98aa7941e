use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use permuta::bench::{self, RunReport, RunSpec, VerifyOutcome};
use permuta::lab::lattice::seed_from_env;
use permuta::lab::LatticeMode;
use permuta::model::ModelSpec;
use permuta::problems::InstanceKind;
use permuta::search::{Algorithm, Goal, Heuristic};

const EXIT_BAD_ARGS: u8 = 2;
const EXIT_ABORTED: u8 = 3;
const EXIT_VIOLATION: u8 = 1;

#[derive(Parser)]
#[command(name = "permuta", version, about = "Permutation and injection models: solver runs and checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance and print a CSV row.
    Solve {
        /// e.g. langford:3,9, golomb:8,34, qg3:6, sport:8, magic:3
        #[arg(long)]
        instance: InstanceKind,
        /// Permutation model tag (neq, c, all-diff, neq-c, ...).
        #[arg(long, conflicts_with = "mode")]
        model: Option<ModelSpec>,
        /// Injection model (injection-c1, injection-c2, ...).
        #[arg(long)]
        mode: Option<ModelSpec>,
        #[arg(long, default_value = "lex")]
        heuristic: Heuristic,
        /// fc, mac or mgac; defaults to mgac when the model has an all-different.
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[arg(long, default_value = "first")]
        goal: Goal,
        /// Seconds before the search is abandoned.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Run every embedded reference cell (optionally one table).
    Table {
        #[arg(long)]
        table: Option<u8>,
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Consistency and search checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Replay the stored counterexamples.
    Fixtures,
    /// Check the consistency lattice over all domain configurations.
    Lattice {
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Sample this many configurations instead of enumerating (seed from PERMUTA_SEED).
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Compare DP and FC branch by branch.
    Lockstep,
    /// Fail-count ordering across models and fixpoint equalities.
    Dominance {
        #[arg(long, default_value = "langford:2,4")]
        instance: InstanceKind,
        #[arg(long, default_value = "all")]
        goal: Goal,
        #[arg(long, default_value_t = 1000)]
        sweep: usize,
    },
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, String> {
    match s {
        Some(v) if !(v.is_finite() && v >= 0.0) => Err(format!("invalid time limit {v}")),
        Some(v) => Ok(Some(Duration::from_secs_f64(v))),
        None => Ok(None),
    }
}

fn bad_args(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_BAD_ARGS)
}

fn report(out: VerifyOutcome) -> ExitCode {
    print!("{}", out.csv);
    if out.ok() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} violation(s)", out.violations);
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn finish(rep: &RunReport) -> ExitCode {
    print!("{}", rep.to_csv());
    if rep.aborted() {
        eprintln!("time limit reached; statistics are partial");
        ExitCode::from(EXIT_ABORTED)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Solve { instance, model, mode, heuristic, algorithm, goal, time_limit } => {
            let Some(model) = model.or(mode) else {
                return bad_args("one of --model or --mode is required");
            };
            let time_limit = match seconds(time_limit) {
                Ok(t) => t,
                Err(e) => return bad_args(e),
            };
            let mut spec = RunSpec::new(instance, model, heuristic, goal);
            spec.algorithm = algorithm.unwrap_or(spec.algorithm);
            spec.time_limit = time_limit;
            match bench::run_one(&spec) {
                Ok(row) => finish(&RunReport { rows: vec![row] }),
                Err(e) => bad_args(e),
            }
        }
        Cmd::Table { table, time_limit } => {
            let time_limit = match seconds(time_limit) {
                Ok(t) => t,
                Err(e) => return bad_args(e),
            };
            // rows stream out as they finish; whole tables take a while
            println!("{}", bench::CSV_HEADER);
            let mut seen = Vec::new();
            let mut aborted = false;
            for c in bench::reference_cells().iter().filter(|c| table.map_or(true, |t| c.table == t)) {
                let mut spec = RunSpec::from_cell(c);
                spec.time_limit = time_limit;
                if seen.contains(&spec) {
                    continue;
                }
                seen.push(spec);
                match bench::run_one(&spec) {
                    Ok(row) => {
                        aborted |= row.stats.aborted;
                        println!("{}", row.csv_line());
                    }
                    Err(e) => return bad_args(e),
                }
            }
            if aborted {
                eprintln!("time limit reached on some rows; their statistics are partial");
                ExitCode::from(EXIT_ABORTED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Cmd::Verify { what } => {
            let out = match what {
                Verify::Fixtures => bench::verify_fixtures(),
                Verify::Lattice { n, sample } => {
                    if !(1..=6).contains(&n) {
                        return bad_args(format!("lattice size {n} out of range 1..=6"));
                    }
                    let mode = match sample {
                        Some(count) => LatticeMode::Sample { count, seed: seed_from_env(0) },
                        None => LatticeMode::Exhaustive,
                    };
                    Ok(bench::verify_lattice(n, mode))
                }
                Verify::Lockstep => bench::verify_lockstep(),
                Verify::Dominance { instance, goal, sweep } => {
                    bench::verify_dominance(instance, goal, sweep, seed_from_env(0))
                }
            };
            match out {
                Ok(o) => report(o),
                Err(e) => bad_args(e),
            }
        }
    }
}
