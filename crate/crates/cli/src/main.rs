//! `posfix`: runs the verification suites, demos and the small evaluators
//! from the command line.
//!
//! Exit codes: 0 everything passed (or a definite verdict), 1 a definite
//! failure, 2 unknowns but no failures, 3 a usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use posfix::verify::{
    cmd_compile, cmd_decode, cmd_eval, cmd_lfp, lfp_text, parse_oracle, run_demo, verify_claims,
    CommandError, Demo, Format, QuantifierMode, RunConfig, EXIT_PASS, EXIT_USAGE,
};

#[derive(Parser, Debug)]
#[command(
    name = "posfix",
    version,
    about = "Positive fixed points, hyperarithmetical codes and their checks"
)]
struct Cli {
    /// Step budget for every program evaluation.
    #[arg(long, global = true, env = "POSFIX_FUEL", default_value_t = 100_000)]
    fuel: u64,
    /// Quantifier bound B.
    #[arg(long, global = true, env = "POSFIX_BOUND", default_value_t = 64)]
    bound: u64,
    /// Universe size N of the operator checks.
    #[arg(long, global = true, env = "POSFIX_UNIVERSE", default_value_t = 32)]
    universe: u64,
    /// Horizon X of the membership checks.
    #[arg(long, global = true, env = "POSFIX_HORIZON", default_value_t = 64)]
    horizon: u64,
    #[arg(long, global = true, env = "POSFIX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "POSFIX_FORMAT", value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, env = "POSFIX_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every suite.
    VerifyClaims,
    /// union, complement, reduction-identity or diagonal.
    Demo { name: String },
    /// Evaluate a formula (or `builtin:<name>`) under an oracle for R.
    Eval {
        formula: String,
        /// Bindings `name=term`, evaluated left to right.
        bindings: Vec<String>,
        #[arg(long = "set", value_name = "NAME=TERM")]
        set: Vec<String>,
        /// `empty`, `{n,...}`, `program:<index>` or `certificates`.
        #[arg(long, default_value = "empty")]
        oracle: String,
        #[arg(long, default_value = "conservative")]
        mode: QuantifierMode,
    },
    /// Stages of the least fixed point of a positive formula over [0, N).
    Lfp {
        formula: String,
        /// Universe size; defaults to --universe.
        #[arg(short = 'n', long = "size")]
        n: Option<u64>,
    },
    /// Assemble a program (`-` reads standard input) or decode an index.
    Compile {
        #[arg(required_unless_present = "decode")]
        file: Option<String>,
        #[arg(long, value_name = "INDEX", conflicts_with = "file")]
        decode: Option<String>,
    },
}

/// Anything that stops a command before it produces a report.
struct Failure(String);

impl From<CommandError> for Failure {
    fn from(e: CommandError) -> Self {
        Failure(e.to_string())
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn read_source(file: &str) -> Result<String, Failure> {
    if file == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(file).map_err(|e| Failure(format!("{file}: {e}")))
    }
}

/// The rendered output and the exit code.
fn run(cli: &Cli) -> Result<(String, i32), Failure> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let cfg = RunConfig {
        fuel: cli.fuel,
        bound: cli.bound,
        universe: cli.universe,
        horizon: cli.horizon,
        seed: cli.seed,
        format,
    };
    cfg.validate().map_err(CommandError::from)?;
    let as_json = format == Format::Json;
    Ok(match &cli.command {
        Command::VerifyClaims => {
            let r = verify_claims(&cfg);
            (r.render(format), r.exit_code())
        }
        Command::Demo { name } => {
            let demo: Demo = name.parse().map_err(CommandError::from)?;
            let r = run_demo(demo, &cfg);
            (r.render(format), r.exit_code())
        }
        Command::Eval {
            formula,
            bindings,
            set,
            oracle,
            mode,
        } => {
            let all: Vec<String> = bindings.iter().chain(set).cloned().collect();
            let oracle = parse_oracle(oracle)?;
            let r = cmd_eval(
                formula,
                &all,
                &oracle,
                *mode,
                cfg.bound,
                cfg.fuel,
                cfg.horizon,
            )?;
            (if as_json { json(&r) } else { r.to_text() }, r.exit_code())
        }
        Command::Lfp { formula, n } => {
            let t = cmd_lfp(formula, n.unwrap_or(cfg.universe), cfg.fuel)?;
            (if as_json { json(&t) } else { lfp_text(&t) }, EXIT_PASS)
        }
        Command::Compile { file, decode } => {
            let r = match (file, decode) {
                (_, Some(i)) => cmd_decode(i)?,
                (Some(f), None) => cmd_compile(&read_source(f)?)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            (if as_json { json(&r) } else { r.to_text() }, EXIT_PASS)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    let (text, code) = match run(&cli) {
        Ok(r) => r,
        Err(Failure(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(code as u8)
}
