//! `oscillo`: command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or format
//! error, 3 precondition rejected (cover of a set larger than |Q0|/2),
//! 4 internal inconsistency.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oscillo_core::functionals::summarize;
use oscillo_core::io::{parse_cell_set, parse_step_function};
use oscillo_core::{
    dyadic_cover, garo_norm_dyadic, jn_norm_dyadic, run_suite, tensor_distribution,
    tensor_infinity_check, verify_cover, Error, Exponent, StepFunction, SuiteConfig,
    SuiteConstants,
};

#[derive(Parser)]
#[command(
    name = "oscillo",
    version,
    about = "Rearrangement-invariant functionals, dyadic packings and covers of step functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Functional {
    Jn,
    Garo,
}

#[derive(Subcommand)]
enum Command {
    /// Every functional of a step function at one exponent.
    Norms {
        #[arg(long)]
        input: PathBuf,
        /// Exponent in (1, inf) or `inf`.
        #[arg(long)]
        p: Exponent,
    },
    /// Optimal dyadic packing for the John–Nirenberg or Garsia–Rodemich functional.
    Pack {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Exponent,
        #[arg(long, value_enum)]
        functional: Functional,
    },
    /// Whitney-type dyadic cover of a cell set (nonzero values are members).
    Cover {
        #[arg(long)]
        input: PathBuf,
    },
    /// Distribution function of f⊗g and the L(∞,∞) tensor inequality.
    Tensor {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        level: u32,
        /// Comma-separated exponents, e.g. `1.5,2,3,10,inf`.
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,3,10,inf")]
        p_list: Vec<Exponent>,
        /// Relative tolerance of the equality checks.
        #[arg(long, default_value_t = 1e-9)]
        tolerance_eq: f64,
        /// Constant of the GaRo ≤ C·JN checks (negative control: 1.9).
        #[arg(long, default_value_t = 2.0)]
        garo_jn_constant: f64,
        /// Shift s in ‖f‖_{L(p,∞)} ≤ (p − s)‖f‖^# (negative control: 0.4).
        #[arg(long, default_value_t = 0.0)]
        sandwich_shift: f64,
        #[arg(long, default_value_t = 100_000)]
        enumeration_limit: u64,
        /// Leave out the fixed-level convergence targets.
        #[arg(long)]
        skip_convergence: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CoverPrecondition { .. }) => 3,
        Some(Error::Inconsistency(_)) => 4,
        _ => 2,
    }
}

fn read_function(path: &Path) -> anyhow::Result<StepFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_step_function(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print(value: &Value) {
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(
        std::io::stdout(),
        "{}",
        serde_json::to_string_pretty(value).expect("values serialize")
    );
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Norms { input, p } => {
            let f = read_function(&input)?;
            print(&serde_json::to_value(summarize(&f, p)?)?);
            Ok(Outcome::Pass)
        }
        Command::Pack {
            input,
            p,
            functional,
        } => {
            let f = read_function(&input)?;
            let (name, opt) = match functional {
                Functional::Jn => ("jn", jn_norm_dyadic(&f, p.finite()?)?),
                Functional::Garo => ("garo", garo_norm_dyadic(&f, p)?),
            };
            print(&json!({
                "functional": name,
                "p": p,
                "value": opt.value,
                "packing": opt.packing.cubes(),
                "contributions": opt.contributions,
            }));
            Ok(Outcome::Pass)
        }
        Command::Cover { input } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let omega =
                parse_cell_set(&text).with_context(|| format!("parsing {}", input.display()))?;
            let report = dyadic_cover(&omega)?;
            let check = verify_cover(&omega, &report);
            print(&json!({ "report": report, "check": check }));
            Ok(if check.all() {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
        Command::Tensor { f, g } => {
            let (f, g) = (read_function(&f)?, read_function(&g)?);
            let lambda = tensor_distribution(&f, &g);
            let check = tensor_infinity_check(&f, &g)?;
            print(&json!({ "distribution": lambda, "check": check }));
            Ok(if check.pass {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
        Command::Verify {
            seed,
            cases,
            dim,
            level,
            p_list,
            tolerance_eq,
            garo_jn_constant,
            sandwich_shift,
            enumeration_limit,
            skip_convergence,
            out,
        } => {
            let config = SuiteConfig {
                seed,
                cases,
                dims: vec![dim],
                levels: vec![level],
                p_values: p_list,
                tolerance_eq,
                constants: SuiteConstants {
                    garo_jn: garo_jn_constant,
                    sandwich_shift,
                },
                enumeration_limit,
                convergence: !skip_convergence,
                output: out,
            };
            let report = run_suite(&config)?;
            let failures: Vec<Value> = report
                .failures()
                .map(|r| json!({ "check": r.check, "case": r.label, "p": r.p, "lhs": r.lhs, "rhs": r.rhs, "constant": r.constant }))
                .collect();
            print(&json!({ "summary": report.summary, "failures": failures }));
            Ok(if report.summary.failed == 0 {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
    }
}
