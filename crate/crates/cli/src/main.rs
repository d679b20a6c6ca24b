//! `qdp`: runs the named experiments and certifies maps and states stored as
//! JSON files.
//!
//! Exit codes: 0 pass, 3 fail, 2 invalid input, 1 internal error. Errors are
//! reported on stderr as one line of JSON `{"error": ..., "detail": ...}`.

use std::fs;
use std::io::Write;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdp_core::correlations::{zero_discord_test_with, DiscordOptions, DEFAULT_DISCORD_TOL};
use qdp_core::experiments::{Experiment, Params};
use qdp_core::formats::{canonical_json, cp_verdict_json, discord_verdict_json, parse_bipartite, parse_superop};
use qdp_core::qdp::{cp_verdict, DEFAULT_CP_TOL};
use qdp_core::states::DEFAULT_GAP_TOL;
use qdp_core::Error;

const PASS: u8 = 0;
const INTERNAL: u8 = 1;
const INVALID: u8 = 2;
const FAIL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qdp", version, about = "Correlated initial states and induced system maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment and write its JSON report
    Run(RunArgs),
    /// Certify complete positivity of a superoperator file
    CheckCp {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CP_TOL)]
        cp_tol: f64,
    },
    /// Test a bipartite state file for zero discord
    Discord {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DISCORD_TOL)]
        discord_tol: f64,
        #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
        gap_tol: f64,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// folklore-cp, property1-witness, hadamard-constraint, theorem2-pipeline,
    /// commuting-gap or sl-necessity
    experiment: String,
    #[arg(long, default_value_t = 2)]
    dim_s: usize,
    #[arg(long, default_value_t = 2)]
    dim_b: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// correlation strength for sl-necessity
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// objective evaluations for the sl-necessity search
    #[arg(long, default_value_t = 500)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_CP_TOL)]
    cp_tol: f64,
    #[arg(long, default_value_t = DEFAULT_DISCORD_TOL)]
    discord_tol: f64,
    #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
    gap_tol: f64,
    /// report path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    kind: &'static str,
    detail: String,
}

impl Failure {
    fn invalid(detail: impl ToString) -> Self {
        Self { code: INVALID, kind: "invalid-input", detail: detail.to_string() }
    }

    fn internal(detail: impl ToString) -> Self {
        Self { code: INTERNAL, kind: "internal", detail: detail.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::DimensionMismatch(_)
            | Error::InvalidState(_)
            | Error::NotHermitian { .. }
            | Error::PreconditionViolated(_) => Failure::invalid(e),
            other => Failure::internal(other),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::internal(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(Failure::internal)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn check_tol(name: &str, t: f64) -> Result<(), Failure> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Failure::invalid(format!("{name} must be finite and non-negative")))
    }
}

fn cmd_run(args: RunArgs) -> Result<u8, Failure> {
    let experiment: Experiment = args.experiment.parse()?;
    let params = Params {
        dim_s: args.dim_s,
        dim_b: args.dim_b,
        trials: args.trials,
        seed: args.seed,
        eps: args.eps,
        budget: args.budget,
        cp_tol: args.cp_tol,
        discord_tol: args.discord_tol,
        gap_tol: args.gap_tol,
    };
    params.validate()?;
    let report = experiment.run(&params)?;
    emit(&canonical_json(&report.to_json()), args.out.as_deref())?;
    Ok(if report.passed() { PASS } else { FAIL })
}

fn cmd_check_cp(path: &Path, cp_tol: f64) -> Result<u8, Failure> {
    check_tol("cp-tol", cp_tol)?;
    let map = parse_superop(&read(path)?)?;
    let verdict = cp_verdict(&map, cp_tol);
    emit(&canonical_json(&cp_verdict_json(&verdict)), None)?;
    Ok(if verdict.is_cp { PASS } else { FAIL })
}

fn cmd_discord(path: &Path, discord_tol: f64, gap_tol: f64) -> Result<u8, Failure> {
    check_tol("discord-tol", discord_tol)?;
    check_tol("gap-tol", gap_tol)?;
    let state = parse_bipartite(&read(path)?)?;
    let opts = DiscordOptions { tol: discord_tol, gap_tol, ..DiscordOptions::default() };
    let verdict = zero_discord_test_with(&state, &opts);
    emit(&canonical_json(&discord_verdict_json(&verdict)), None)?;
    Ok(if verdict.is_zero { PASS } else { FAIL })
}

fn report_failure(f: &Failure) {
    let line = serde_json::json!({"error": f.kind, "detail": f.detail.replace('\n', " ")});
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::from(PASS);
        }
        Err(e) => {
            report_failure(&Failure::invalid(e.to_string().trim()));
            return ExitCode::from(INVALID);
        }
    };

    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(|| match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::CheckCp { path, cp_tol } => cmd_check_cp(&path, cp_tol),
        Command::Discord { path, discord_tol, gap_tol } => cmd_discord(&path, discord_tol, gap_tol),
    });
    let result = outcome.unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure::internal(msg))
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            report_failure(&f);
            ExitCode::from(f.code)
        }
    }
}
