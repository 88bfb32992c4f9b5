use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holospin_core::document::{parse_realify, parse_sign_mode, run, Command, PipelineError, Report, RunOptions};
use holospin_core::superalgebra::{Realify, SignMode};

#[derive(Parser)]
#[command(name = "holospin", version, about = "Holonomy of invariant spinor connections on homogeneous spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the algebraic data of a homogeneous space.
    Validate(Common),
    /// Curvature map, holonomy algebra and parallel spinors.
    Holonomy {
        #[command(flatten)]
        common: Common,
        /// Run the twistor connection instead.
        #[arg(long)]
        twistor: bool,
    },
    /// Killing superalgebra with the graded Jacobi report.
    Superalgebra(Common),
    /// Holonomy of the twistor connection.
    Twistor(Common),
}

#[derive(Args)]
struct Common {
    file: PathBuf,
    /// Relative singular value cutoff for every rank decision.
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long, value_parser = sign_mode, allow_hyphen_values = true)]
    sign_mode: Option<SignMode>,
    #[arg(long, value_parser = realify)]
    realify: Option<RealifyArg>,
    /// Compact single-line output (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    #[arg(long)]
    pretty: bool,
    /// On symmetric data, bracket only with α(𝔫) during the closure.
    #[arg(long)]
    symmetric_fast_path: bool,
    /// Add per-stage timings to the report.
    #[arg(long)]
    timing: bool,
    /// Override a document parameter, `name=value`.
    #[arg(long, value_parser = param)]
    param: Vec<(String, f64)>,
}

fn sign_mode(s: &str) -> Result<SignMode, String> {
    parse_sign_mode(s).ok_or_else(|| format!("expected auto, ++, +-, -+ or --, got {s:?}"))
}

/// `None` inside is an explicit `auto`.
#[derive(Clone, Copy)]
struct RealifyArg(Option<Realify>);

fn realify(s: &str) -> Result<RealifyArg, String> {
    parse_realify(s).map(RealifyArg).ok_or_else(|| format!("expected auto, re, im or id, got {s:?}"))
}

fn param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((k.trim().to_owned(), v))
}

fn emit(report: &Report, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(report) } else { serde_json::to_string(report) };
    println!("{}", text.expect("report serializes"));
}

fn main() -> ExitCode {
    // usage errors share the parse exit code; 2 is reserved for validation
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, c) = match cli.cmd {
        Cmd::Validate(c) => (Command::Validate, c),
        Cmd::Holonomy { common, twistor } => (if twistor { Command::Twistor } else { Command::Holonomy }, common),
        Cmd::Superalgebra(c) => (Command::Superalgebra, c),
        Cmd::Twistor(c) => (Command::Twistor, c),
    };
    let text = match std::fs::read_to_string(&c.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("holospin: {}: {e}", c.file.display());
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        rank_tol: c.rank_tol,
        sign_mode: c.sign_mode,
        realify: c.realify.map(|r| r.0),
        symmetric_fast_path: c.symmetric_fast_path,
        timing: c.timing,
        params: c.param,
    };
    match run(cmd, &text, &opts) {
        Ok(report) => {
            emit(&report, c.pretty);
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let PipelineError::Validation { report, .. } = &err {
                emit(report, c.pretty);
            }
            eprintln!("holospin: {}: {err}", c.file.display());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
