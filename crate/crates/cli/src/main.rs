//! `minunc` — claim suites, saturation analysis, (σ, Ω) sweeps, constrained
//! gap searches, and mixed-state bound certificates, emitted as JSON or CSV.
//!
//! Exit codes: 0 when everything asked for holds, 1 for usage or I/O
//! problems, 2 when a claim or certificate fails.

mod actions;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use minunc::uncertainty::BoundKind;

/// Exit code for a failed claim or an unsatisfied certificate.
pub const EXIT_CLAIM_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "minunc",
    version,
    about = "Numerical certificates for uncertainty-bound saturation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Report format; defaults to JSON everywhere except `sweep` (CSV).
    /// `analyze`, `search`, and `bounds` are JSON-only.
    #[arg(long, global = true, value_enum, value_name = "FMT")]
    format: Option<Format>,

    /// Residual-tolerance override for verdicts and suite checks.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<f64>,

    /// Seed for randomized suites and searches.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,

    /// Planck constant ħ.
    #[arg(long, global = true, value_name = "HBAR")]
    hbar: Option<f64>,

    /// Points per axis for grid-based numerics.
    #[arg(long, global = true, value_name = "N")]
    grid_points: Option<usize>,

    /// Fock-space truncation for oscillator numerics.
    #[arg(long, global = true, value_name = "N")]
    fock_cutoff: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named claim suite and report every residual.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Judge whether a bipartite state saturates the chosen bound.
    Analyze {
        /// Bipartite state file: {"dimA", "dimB", "amplitudes": [[re, im], ...]}.
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
        /// Observable X as nested rows of [re, im] pairs.
        #[arg(long, value_name = "FILE")]
        x: PathBuf,
        /// Observable Y, same schema as X.
        #[arg(long, value_name = "FILE")]
        y: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Sr)]
        mode: ModeArg,
    },
    /// Tabulate closed-form and grid moments over a (σ, Ω) rectangle.
    Sweep {
        #[arg(long, value_enum, default_value_t = ModelArg::Epr)]
        model: ModelArg,
        /// σ range as lo:hi.
        #[arg(long, value_name = "LO:HI")]
        sigma_range: String,
        /// Ω range as lo:hi.
        #[arg(long, value_name = "LO:HI")]
        omega_range: String,
        /// Points per axis (1 evaluates the lower corner only).
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Minimize the bound gap over constrained entangled states.
    Search(SearchArgs),
    /// Certify the purity- and entropy-corrected bounds for a density matrix.
    Bounds {
        /// Density-matrix file: {"model": {...}, "matrix": [[[re, im], ...], ...]}.
        #[arg(long, value_name = "FILE")]
        rho: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Spin,
    Oscillator,
    Epr,
    Rank,
    Mixed,
}

impl SuiteArg {
    pub fn name(self) -> &'static str {
        match self {
            SuiteArg::Spin => "spin",
            SuiteArg::Oscillator => "oscillator",
            SuiteArg::Epr => "epr",
            SuiteArg::Rank => "rank",
            SuiteArg::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Hur,
    Sr,
}

impl From<ModeArg> for BoundKind {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Hur => BoundKind::Hur,
            ModeArg::Sr => BoundKind::Sr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Epr,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Whole-problem JSON file; replaces the structural flags below.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = ["dim_a", "dim_b", "x", "y", "mode", "min_schmidt"]
    )]
    problem: Option<PathBuf>,
    #[arg(long, value_name = "N", required_unless_present = "problem")]
    dim_a: Option<usize>,
    #[arg(long, value_name = "N", required_unless_present = "problem")]
    dim_b: Option<usize>,
    /// Observable X as nested rows of [re, im] pairs.
    #[arg(long, value_name = "FILE", required_unless_present = "problem")]
    x: Option<PathBuf>,
    #[arg(long, value_name = "FILE", required_unless_present = "problem")]
    y: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Sr)]
    mode: ModeArg,
    /// Schmidt-coefficient floor δ.
    #[arg(long, value_name = "DELTA", default_value_t = 0.0)]
    min_schmidt: f64,
    #[arg(long, value_name = "N")]
    restarts: Option<usize>,
    #[arg(long, value_name = "N")]
    max_iters: Option<usize>,
    /// Hunt for a saturating state of exactly this Schmidt rank instead of
    /// minimizing over full-rank states.
    #[arg(long, value_name = "S")]
    rank: Option<usize>,
}

/// Physical constants stamped into every report header.
#[derive(Clone, Copy, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

/// Resolved global options shared by every subcommand.
pub struct Ctx {
    pub constants: Constants,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub grid_points: usize,
    pub fock_cutoff: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's exit 0 for --help/--version, but map genuine usage
            // errors to 1: this tool reserves 2 for failed claims.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let hbar = cli.common.hbar.unwrap_or(1.0);
    if !(hbar > 0.0) || !hbar.is_finite() {
        anyhow::bail!("--hbar must be positive, got {hbar}");
    }
    let ctx = Ctx {
        constants: Constants {
            hbar,
            mass: 1.0,
            omega: 1.0,
        },
        seed: cli.common.seed,
        tol: cli.common.tol,
        grid_points: cli.common.grid_points.unwrap_or(512),
        fock_cutoff: cli.common.fock_cutoff.unwrap_or(60),
        out: cli.common.out,
        format: cli.common.format,
    };
    match cli.command {
        Command::Verify { suite } => verify::run(suite, &ctx),
        Command::Analyze { state, x, y, mode } => {
            actions::analyze(&ctx, &state, &x, &y, mode.into())
        }
        Command::Sweep {
            model: ModelArg::Epr,
            sigma_range,
            omega_range,
            steps,
        } => actions::sweep(&ctx, &sigma_range, &omega_range, steps),
        Command::Search(args) => actions::search(&ctx, args),
        Command::Bounds { rho } => actions::bounds(&ctx, &rho),
    }
}

/// Fixed 12-significant-digit scientific formatting. Locale-independent, so
/// equal configs produce byte-identical reports.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

/// Send a finished report to --out, or to standard output when unset.
pub fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
