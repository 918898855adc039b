mod audit;
mod eval;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes: 0 ok, 1 audit failure, 2 usage or malformed input, 3 invalid state.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    BadState(String),
    Audit,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Audit => 1,
            Failure::Usage(_) => 2,
            Failure::BadState(_) => 3,
        }
    }
}

impl From<entbound::Error> for Failure {
    fn from(e: entbound::Error) -> Self {
        match e {
            entbound::Error::InvalidState(_) => Failure::BadState(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

/// Prints to stdout, treating a closed pipe as success.
pub fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "entbound", version, about = "Measurable bounds on concurrence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every applicable bound and check on a state file.
    Eval {
        state: PathBuf,
        /// Seed for the transposition-bound unitary search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan the rotationally invariant 4x4 family over the (p, q, r) simplex.
    ScanRot4 {
        #[arg(long, default_value_t = entbound::scan::DEFAULT_STEP)]
        step: f64,
        /// Output directory for the full grid and the p=0 and q=0 slices.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run randomized invariant checks on seeded states.
    Audit {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Local dimensions, comma separated.
        #[arg(long, default_value = "2,2", value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("ENTBOUND_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Usage(format!("ENTBOUND_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Eval { state, seed, format } => eval::run(&state, seed, format),
        Command::ScanRot4 { step, out, format } => scan::run(step, &out, format),
        Command::Audit { seed, n, dims, format } => audit::run(seed, n, &dims, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::BadState(m) => eprintln!("error: {m}"),
                Failure::Audit => eprintln!("audit failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
