//! `egw`: constructions, verifiers, the game solver, the SAT bridge and
//! coloring as subcommands over files.
//!
//! Exit codes: 0 the property holds or the artifact was produced, 2 the
//! property fails, 1 usage, input or limit error.

mod commands;
mod input;
mod limits;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use limits::{Limits, LIMITS_ENV};

#[derive(Parser, Debug)]
#[command(name = "egw", version, about = "Maker/Breaker pairing constructions, SAT bridge and verifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the artifact here; the report then goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest board for the exhaustive solver.
    #[arg(long, global = true)]
    pub limit_vertices: Option<usize>,
    /// Largest number of occurring variables for DPLL.
    #[arg(long, global = true)]
    pub limit_vars: Option<usize>,
    /// Largest tree the plan executor may materialise.
    #[arg(long, global = true)]
    pub limit_nodes: Option<u64>,
    /// Seed for randomized strategies.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Tree JSON, or the natural JSON of the artifact.
    Json,
    /// Hypergraph JSON with its pairing strategy.
    Board,
    Dimacs,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Neighborhood,
    RegularWeak,
    RegularStrong,
    CompleteGame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MakerArg {
    Pairing,
    Descent,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BreakerArg {
    Random,
    ErdosSelfridge,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family member and verify it in the same run.
    Construct {
        #[arg(value_enum)]
        family_pos: Option<FamilyArg>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        n: usize,
        /// `1` or `64/63`.
        #[arg(long, default_value = "1")]
        c: String,
        /// Plan and check symbolically without materialising the tree.
        #[arg(long)]
        symbolic: bool,
    },
    /// Check a tree against (n, s), or a board's pairing strategy.
    Verify {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Degree budget: an integer or `2^k`.
        #[arg(long)]
        s: Option<String>,
    },
    /// Decide a small board exactly (Maker moves first).
    Solve {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Let Breaker move first.
        #[arg(long)]
        breaker_first: bool,
    },
    /// Translate a board with a pure pairing into CNF.
    ToCnf {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Double a non-pure pairing strategy into a pure one first.
        #[arg(long)]
        double: bool,
        #[arg(long)]
        allow_tautologies: bool,
    },
    /// Translate a CNF into its literal board with the pure pairing.
    FromCnf { input: PathBuf },
    /// Run DPLL; the property checked is unsatisfiability.
    Sat { input: PathBuf },
    /// Decide membership in MU(1).
    Mu1 { input: PathBuf },
    /// Search for a proper 2-coloring respecting the board's pairing.
    Color {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Color classes differ in size by at most one.
        #[arg(long)]
        halving: bool,
        /// Ignore the board's pairing.
        #[arg(long)]
        no_pairing: bool,
    },
    /// Degree, neighborhood and occurrence statistics.
    Stats {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// With `--s`, check the `(k, s)` and balance predicates of a CNF.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: Option<String>,
    },
    /// Plan the strong family and check the plan symbolically.
    Plan {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "1")]
        c: String,
        /// Every power of two up to 2^12 (or 63·2^k up to 4032 for c = 64/63).
        #[arg(long)]
        sweep: bool,
        /// The hand-sized exact plans, materialised and verified.
        #[arg(long)]
        toy: bool,
    },
    /// Exact table of the occurrence and neighborhood bounds.
    Bounds {
        #[arg(long)]
        k: u32,
        /// An unsatisfiable k-CNF whose statistics witness upper bounds.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Play one game and write its transcript; exit 0 when Maker wins.
    Play {
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "pairing")]
        maker: MakerArg,
        #[arg(long, value_enum, default_value = "erdos-selfridge")]
        breaker: BreakerArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let env = std::env::var(LIMITS_ENV).ok();
    let run = Limits::resolve(
        env.as_deref(),
        cli.common.limit_vertices,
        cli.common.limit_vars,
        cli.common.limit_nodes,
    )
    .and_then(|limits| commands::run(&cli.command, &cli.common, &limits));
    match run {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
