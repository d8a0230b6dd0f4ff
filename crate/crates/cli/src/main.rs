//! `ci`: closures, self-adhesion, catalogues and screening of
//! conditional-independence models from the command line.
//!
//! Data goes to stdout (or `--out`), progress and witnesses to stderr.
//! Exit status: 0 success, 2 malformed input, 3 backend or resource guard,
//! 4 enumeration cap reached.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ci_core::frames::FrameKind;
use ci_core::selfadhesion::LPolicy;

#[derive(Parser, Debug)]
#[command(name = "ci", version, about = "Conditional-independence models: closures, self-adhesion, catalogues")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// semigraphoid, graphoid, comp-semigraphoid, comp-graphoid or structural.
    #[arg(long, global = true, default_value = "semigraphoid", value_parser = parse_frame)]
    pub frame: FrameKind,
    /// Structural frame only: `sat` uses the four-variable axioms, `lp` the
    /// supermodular cone. Required for structural inputs away from four variables.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<Backend>,
    /// External DIMACS solver; overrides CI_SAT_SOLVER.
    #[arg(long, global = true)]
    pub solver_exe: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (directory for `catalogue`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Sat,
    Lp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Reduced,
    Full,
}

impl From<Policy> for LPolicy {
    fn from(p: Policy) -> LPolicy {
        match p {
            Policy::Reduced => LPolicy::Reduced,
            Policy::Full => LPolicy::Full,
        }
    }
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Ground-set size; the standard labels a, b, c, ... are used.
    #[arg(long)]
    pub n: usize,
    /// Keep only the self-adhesive members.
    #[arg(long)]
    pub selfadhesive: bool,
    #[arg(long, value_enum, default_value = "reduced")]
    pub policy: Policy,
    /// Stop enumerating after this many models.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frame closure of a model file.
    Closure {
        #[arg(long = "in")]
        input: PathBuf,
        /// List every candidate as `<statement> : IN|OUT` on stderr.
        #[arg(long)]
        transcript: bool,
    },
    /// Self-adhesion closure, at one set `--at` or over the whole policy.
    SaClosure {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        at: Option<String>,
        #[arg(long, value_enum, default_value = "reduced")]
        policy: Policy,
    },
    /// Closure under self-adhesion relative to the self-adhesive family (four variables).
    Sa2Closure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Closure under k-fold self-adhesion at `--at`.
    Kfold {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Whether a model file is closed in the frame.
    Member {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Validity of each implication in a file.
    Implication {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Summary row of a family, plus full listings with `--out DIR`.
    Catalogue {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Canonical implication basis of a family.
    Basis {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Self-adhesion screening of coatom records, or of the family's own
    /// coatoms with `--n`.
    Screen {
        #[arg(long = "in", conflicts_with = "n", required_unless_present = "n")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "reduced")]
        policy: Policy,
    },
    /// Elementary statements of a global statement `I,J|K`.
    Expand {
        #[arg(long)]
        ground: String,
        /// For example `ab,c|d` or `a b , c | -`.
        statement: String,
    },
    /// Dual model.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lift to a larger ground set with the new variables independent.
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ground: String,
    },
    /// Tight replication of `--var` by a new variable `--as`.
    Replicate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long = "as")]
        new: String,
    },
    /// Separation model of an undirected graph.
    GraphModel {
        #[arg(long)]
        ground: String,
        /// Edges such as `a-b,b-c`.
        #[arg(long, default_value = "")]
        edges: String,
    },
}

fn parse_frame(s: &str) -> Result<FrameKind, String> {
    s.parse().map_err(|e: ci_core::CiError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(exe) = &cli.common.solver_exe {
        std::env::set_var("CI_SAT_SOLVER", exe);
    }
    if let Some(w) = cli.common.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("resource error: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}
