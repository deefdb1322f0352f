//! `ekr`: spectra, weightings, LP bounds, constructions, searches and
//! certificate checks for the 2-dimensional linear groups.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ekr_core::certificate::VERIFY_SEED;
use ekr_core::reproduce::TRANSLATE_SEED;
use ekr_core::{Family, Target};

use render::Format;

#[derive(Parser, Debug)]
#[command(name = "ekr", version, about = "Intersecting sets in GL, SL, AGL, PGL and PSL of degree 2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format. JSON is canonical; csv and text are derived views.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightsSource {
    /// Weight 1 on every derangement class.
    Unit,
    /// The published category weighting (GL and SL only).
    Table,
    /// Optimal weights from the linear program.
    Lp,
    /// A JSON array with one weight per conjugacy class.
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchTarget {
    Clique,
    Coclique,
    TwoIntersecting,
}

impl From<SearchTarget> for Target {
    fn from(t: SearchTarget) -> Self {
        match t {
            SearchTarget::Clique => Target::Clique,
            SearchTarget::Coclique => Target::Coclique,
            SearchTarget::TwoIntersecting => Target::TwoIntersecting,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Cyclic subgroup of order q^2-1 in GL (a clique).
    Singer,
    /// Matrices moving every vector along a fixed line (GL coclique).
    LineStabilizer,
    /// Powers of a block-cycling element (AGL clique).
    AglCycle,
    /// Scalar linear part with any translation (AGL coclique).
    BlockStabilizer,
    /// 2-intersecting set of PGL built from a three-cycle.
    PglTwoIntersecting,
    /// The PGL set lifted to an intersecting set of AGL.
    AglLift,
    /// Stabilizer of {0, inf} in PSL, q = 1 mod 4.
    PslStabilizer,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: ekr_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of the (weighted) derangement graph from characters.
    Spectrum {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = WeightsSource::Unit)]
        weights: WeightsSource,
        /// Class weights for `--weights file`.
        #[arg(long)]
        weights_file: Option<PathBuf>,
        /// Also diagonalize the dense adjacency matrix (at most 500 vertices).
        #[arg(long)]
        dense: bool,
    },
    /// The published category weighting spread onto derangement classes.
    Weights {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
    },
    /// Best class weighting for the ratio bound, by linear programming.
    Lp {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
        /// One variable per class instead of per inverse pair.
        #[arg(long)]
        untied: bool,
        /// Re-solve with constraint rows shuffled by this seed and compare.
        #[arg(long)]
        permute_seed: Option<u64>,
    },
    /// Ratio bounds (unit and LP weights) and the clique-coclique bound.
    Bounds {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
        /// Seconds for the clique search when no explicit clique is known.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
    },
    /// Build and verify an explicit set; prints the certificate.
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        #[arg(long)]
        q: u32,
        /// Projective index of the line direction for `line-stabilizer`.
        #[arg(long, default_value_t = 0)]
        direction: usize,
        /// Number of random left translates to re-verify.
        #[arg(long, default_value_t = 5)]
        translates: usize,
        #[arg(long, default_value_t = TRANSLATE_SEED)]
        seed: u64,
    },
    /// Exact maximum clique / coclique / 2-intersecting set. Exit 3 when the
    /// budget runs out (the set is then only a lower bound).
    Search {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = SearchTarget::Coclique)]
        target: SearchTarget,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
        /// Stop after this many branch nodes (deterministic budget).
        #[arg(long)]
        node_limit: Option<u64>,
        /// Search the whole group instead of fixing the identity.
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Gram spectra of canonical characteristic vectors (GL or SL).
    Gram {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        q: u32,
    },
    /// Re-check a certificate file from group data alone. Exit 2 on mismatch.
    Verify {
        file: PathBuf,
        /// Number of random left translates to re-verify as well.
        #[arg(long, default_value_t = 0)]
        translates: usize,
        #[arg(long, default_value_t = TRANSLATE_SEED)]
        seed: u64,
        /// Seed for sampled pair checks on large certificates.
        #[arg(long, default_value_t = VERIFY_SEED)]
        sample_seed: u64,
    },
    /// Run the acceptance checks; exit 2 if any fails.
    Reproduce {
        /// Field sizes to include; pass `--q` with no values for none.
        #[arg(long, num_args = 0.., value_delimiter = ',', default_values_t = [3u32, 4, 5, 7])]
        q: Vec<u32>,
        /// Run every field size each check lists (overrides --q).
        #[arg(long)]
        all: bool,
        /// Criteria to run (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli, &outcome.report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
