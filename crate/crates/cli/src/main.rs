//! `ttchow`: Chow groups, Bloch formula checks and intersection products
//! from the command line.

mod backend;
mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ttchow_core::gersten::GerstenError;
use ttchow_core::intersect::IntersectError;
use ttchow_core::klocal::{KError, KLocalData};
use ttchow_core::space::SpaceError;
use ttchow_core::varieties::VarietyError;

use backend::{load_backend, Loaded};

#[derive(Parser, Debug)]
#[command(name = "ttchow", version, about = "Chow groups of spectral spaces with K-local data")]
struct Cli {
    /// p1, p2 or toy:<path> (a bundled fixture name also works)
    #[arg(long, global = true, default_value = "p1")]
    backend: String,
    /// Field size for the variety backends
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,
    /// Degree bound for enumerated points (p1: 3, p2: 1 by default)
    #[arg(long, global = true)]
    bound: Option<u32>,
    #[arg(long, global = true, env = "TTCHOW_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cycle group, CH and ∩CH in one or all codimensions
    Chow {
        #[arg(long, conflicts_with = "all")]
        codim: Option<i64>,
        #[arg(long)]
        all: bool,
    },
    /// Checks the Gersten rectangle, then compares H^p with ∩CH^p
    VerifyBloch {
        #[arg(long, conflicts_with = "all")]
        codim: Option<i64>,
        #[arg(long)]
        all: bool,
    },
    /// Intersection product of two class expressions such as "2[x] - [y]"
    Product {
        left: String,
        right: String,
        /// Move the right-hand representative if it meets the left improperly
        #[arg(long = "move")]
        allow_move: bool,
    },
}

/// Failure modes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Precondition(String),
    Improper(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) | CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Improper(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Validation(m)
            | CliError::Precondition(m)
            | CliError::Improper(m)
            | CliError::Other(m) => m,
        }
    }
}

impl From<GerstenError> for CliError {
    fn from(e: GerstenError) -> Self {
        match e {
            GerstenError::MissingData { .. } | GerstenError::Violation(_) | GerstenError::Unverifiable(_) => {
                CliError::Precondition(e.to_string())
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<IntersectError> for CliError {
    fn from(e: IntersectError) -> Self {
        match e {
            IntersectError::ImproperIntersection { .. } | IntersectError::MovingFailed { .. } => {
                CliError::Improper(e.to_string())
            }
            IntersectError::Gersten(g) => g.into(),
            IntersectError::Grading(_) | IntersectError::WrongStratum { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Other(e.to_string())
    }
}

/// Fields shared by every report.
#[derive(Serialize)]
pub struct Header {
    pub command: &'static str,
    pub backend: String,
    pub model: String,
    pub q: Option<u64>,
    pub bound: Option<u32>,
    pub seed: u64,
}

/// A rendered report: JSON value plus its text form.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let loaded = load_backend(&cli.backend, cli.q, cli.bound)?;
    let header = |command| {
        let (model, q, bound) = match &loaded {
            Loaded::P1(m) => (m.model_name(), Some(cli.q), Some(m.inner().bound())),
            Loaded::P2(m) => (m.model_name(), Some(cli.q), Some(m.inner().bound())),
            Loaded::Toy(m) => (m.model_name(), None, None),
        };
        Header {
            command,
            backend: cli.backend.clone(),
            model,
            q,
            bound,
            seed: cli.seed,
        }
    };
    macro_rules! dispatch {
        ($f:path, $name:expr, $($arg:expr),*) => {
            match &loaded {
                Loaded::P1(m) => $f(m, header($name), $($arg),*),
                Loaded::P2(m) => $f(m, header($name), $($arg),*),
                Loaded::Toy(m) => $f(m, header($name), $($arg),*),
            }
        };
    }
    match &cli.command {
        Command::Chow { codim, all } => dispatch!(commands::chow, "chow", *codim, *all),
        Command::VerifyBloch { codim, all } => dispatch!(commands::verify_bloch, "verify-bloch", *codim, *all),
        Command::Product {
            left,
            right,
            allow_move,
        } => dispatch!(commands::product, "product", left, right, *allow_move, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("reports serialize")),
            }
            let failed = out.json.get("exit_code").and_then(|c| c.as_u64()).unwrap_or(0);
            ExitCode::from(failed as u8)
        }
        Err(e) => {
            if cli.format == Format::Json {
                let v = serde_json::json!({ "error": e.message(), "exit_code": e.code() });
                println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
            }
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
