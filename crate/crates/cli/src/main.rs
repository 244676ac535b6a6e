mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modlab_core::Error;

#[derive(Parser)]
#[command(
    name = "modlab",
    version,
    about = "Finite model theory workbench for monotone modal logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Clone)]
pub struct Options {
    /// Seed for sampled modes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of samples in sampled modes.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Size bound for synthesis.
    #[arg(long, global = true, default_value_t = 7)]
    pub max_size: usize,
    /// Exhaustive sweeps may take at most 2^bits steps.
    #[arg(long, global = true, env = "MODLAB_GUARD_BITS", default_value_t = 24,
          value_parser = clap::value_parser!(u32).range(1..=63))]
    pub guard_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    /// Write the JSON certificate to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Structures are read from a JSON file, or inline when the argument starts
/// with `{`.
#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse { formula: String },
    /// Truth set of a formula in a model.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// Assert that the formula holds at this world.
        #[arg(long)]
        world: Option<usize>,
    },
    /// Frame validity of a formula.
    Validity {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
    },
    /// Monotonicity of a formula in the given variables on a frame.
    Monotone {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
        #[arg(long = "p", value_delimiter = ',', required = true)]
        pvars: Vec<String>,
    },
    /// Check a τ-bisimulation, or re-check a witness certificate.
    BisimCheck {
        #[arg(long, required_unless_present = "cert")]
        m1: Option<String>,
        #[arg(long, required_unless_present = "cert")]
        m2: Option<String>,
        #[arg(long, required_unless_present = "cert")]
        z: Option<String>,
        #[arg(long, required_unless_present = "cert")]
        tau: Option<String>,
        #[arg(long, conflicts_with_all = ["m1", "m2", "z", "tau"])]
        cert: Option<String>,
    },
    /// Greatest τ-bisimulation between two models.
    BisimGreatest {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        #[arg(long)]
        tau: String,
    },
    /// Zigzag-free full subrelation of a full relation.
    ZigzagSplit {
        #[arg(long)]
        z: String,
    },
    /// Check that a total function is a morphism between frames or models.
    MorphismCheck {
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        map: String,
        /// Transport only the literals directed by these variables.
        #[arg(long = "p", value_delimiter = ',')]
        pvars: Vec<String>,
    },
    /// Search for model pairs refuting a positive equivalent.
    PositiveSearch {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
        #[arg(long = "p", value_delimiter = ',', required = true)]
        pvars: Vec<String>,
    },
    /// Synthesize a positive equivalent up to --max-size.
    PositiveSynth {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
        #[arg(long = "p", value_delimiter = ',', required = true)]
        pvars: Vec<String>,
    },
    /// Search for a refutation of a τ-interpolant, then synthesize one.
    Interpolant {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        tau: String,
    },
    /// Maximal bisimulation product with its checks.
    Product {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        z: String,
        /// Axioms by name; defaults to the whole table.
        #[arg(long = "axiom", value_delimiter = ',')]
        axioms: Vec<String>,
        /// Positive formulas in one variable for the bound check.
        #[arg(long = "alpha")]
        alphas: Vec<String>,
    },
    /// Run a registered case.
    Repro {
        #[arg(required_unless_present_any = ["list", "all"])]
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        list: bool,
        #[arg(long, conflicts_with_all = ["id", "list"])]
        all: bool,
    },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::GuardExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, &cli.opts) {
        Ok(ok) => ExitCode::from(if ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
