//! `dstar`: run problem files and verify certificates.
//!
//! Exit codes: 0 when a verdict is produced or a certificate checks out
//! (negative verdicts included), 1 when a certificate fails verification,
//! 2 for malformed input, usage errors and internal inconsistencies.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dstar_core::cert::{run_text, verify_text, RunOptions};
use dstar_core::BaseOrder;

#[derive(Parser)]
#[command(name = "dstar", version, about = "Nagata rings of blowups: certified computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Monomial order; overrides the one named in the problem file.
    #[arg(long, global = true, value_enum)]
    order: Option<OrderArg>,

    /// Worker threads for per-chart work.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Cross-check verdicts with the bounded brute-force multiplier search.
    #[arg(long, global = true)]
    oracle: bool,

    /// Degree bound for `--oracle`.
    #[arg(long, global = true, default_value_t = 4, value_name = "D")]
    deg_bound: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Answer a problem file and print its certificate.
    Run { file: PathBuf },
    /// Re-check a certificate.
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

impl From<OrderArg> for BaseOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => BaseOrder::Lex,
            OrderArg::Grevlex => BaseOrder::Grevlex,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Run { file } => {
            let opts = RunOptions {
                order: cli.order.map(Into::into),
                oracle: cli.oracle.then_some(cli.deg_bound),
            };
            let out = run_text(&read(file)?, &opts).map_err(|e| e.to_string())?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => match verify_text(&read(file)?).map_err(|e| e.to_string())? {
            Ok(()) => {
                println!("valid");
                Ok(ExitCode::SUCCESS)
            }
            Err(reason) => {
                println!("invalid: {reason}");
                Ok(ExitCode::from(1))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
