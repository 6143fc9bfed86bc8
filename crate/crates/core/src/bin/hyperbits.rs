use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperbits::cli::{self, Command, Exit, Format, RunConfig};

#[derive(Parser)]
#[command(name = "hyperbits", version, about = "Seeded, reproducible hyperbit experiments")]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// Seed for sweep mode.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of random instances when no input files are given.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,

    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert an e-bit protocol to a hyperbit protocol or back.
    Convert { paths: Vec<PathBuf> },
    /// Check the bias identity: ENCODING [QUERIES] [MEASUREMENTS].
    Identity { paths: Vec<PathBuf> },
    /// Audit mutual information: ENSEMBLE ENCODING [MEASUREMENTS].
    Ic { paths: Vec<PathBuf> },
    /// Compare success sums with squared biases for a two-bit encoding.
    Koenig { paths: Vec<PathBuf> },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (command, inputs) = match args.command {
        Cmd::Convert { paths } => (Command::Convert, paths),
        Cmd::Identity { paths } => (Command::Identity, paths),
        Cmd::Ic { paths } => (Command::Ic, paths),
        Cmd::Koenig { paths } => (Command::Koenig, paths),
    };
    let config = RunConfig {
        command,
        inputs,
        seed: args.seed,
        trials: args.trials,
        tol: args.tol,
        format: match args.format {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        },
        out: args.out,
    };
    match cli::run(&config) {
        Ok((exit, text)) => {
            if config.out.is_none() {
                print!("{text}");
            }
            ExitCode::from(exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::InvalidInput.code() as u8)
        }
    }
}
