//! Command-line front end for `necklace-core`.
//!
//! Every command produces a JSON document and a plain-text table; the
//! `--format` flag picks one. Exit status is 0 on success, 1 when a checked
//! identity fails and 2 on bad input.

pub mod commands;
pub mod parse;
pub mod table;

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome};
pub use parse::{parse_element, Element};

#[derive(Parser, Debug)]
#[command(name = "necklace", version, about = "Exact computations in the necklace Lie bialgebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized suites and choices; echoed in reports.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct GenusArg {
    /// Genus of the surface.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..))]
    pub g: u8,
}

#[derive(Args, Debug, Clone)]
pub struct Handles {
    /// Cobracket: `alg` or `deformed:<file>` with a JSON chain `A` in Λ².
    #[arg(long, default_value = "alg")]
    pub delta: String,

    /// Coaction: `alg` or `deformed:<file>` with a JSON chain `B` in Λ².
    #[arg(long, default_value = "alg")]
    pub mu: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket of two derivation elements.
    Bracket {
        #[command(flatten)]
        genus: GenusArg,
        x: String,
        y: String,
    },
    /// Cobracket of a derivation element.
    Cobracket {
        #[command(flatten)]
        genus: GenusArg,
        x: String,
        #[command(flatten)]
        handles: Handles,
    },
    /// Coaction of a tensor.
    Mu {
        #[command(flatten)]
        genus: GenusArg,
        m: String,
        #[command(flatten)]
        handles: Handles,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        genus: GenusArg,
        /// Largest weight (or weight sum) covered by the basis sweep.
        #[arg(long, default_value_t = 6)]
        w: usize,
        /// Largest exterior degree for the complex and deformation suites.
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Random samples of each kind.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Deformation element for the deformation suite.
        #[arg(long = "A", default_value = "N(a1)^N(b1)")]
        a: String,
        /// Module deformation element; defaults to `A`.
        #[arg(long = "B")]
        b: Option<String>,
    },
    /// Homology of the Chevalley–Eilenberg complex and the induced coboundary.
    Homology {
        #[command(flatten)]
        genus: GenusArg,
        /// Exterior degrees, `lo..hi` or a single number.
        #[arg(long, default_value = "0..3", value_parser = parse_range)]
        p: RangeInclusive<usize>,
        /// Weights, `lo..hi` or a single number.
        #[arg(long, default_value = "0..6", value_parser = parse_range)]
        w: RangeInclusive<usize>,
        /// Use the complex with coefficients in the tensor algebra.
        #[arg(long)]
        module: bool,
        #[command(flatten)]
        handles: Handles,
    },
    /// Drinfel'd deformation by an element `A` of Λ².
    Deform {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long = "A")]
        a: String,
        /// Module deformation element; defaults to `A`.
        #[arg(long = "B")]
        b: Option<String>,
        /// Check the homotopy identity relating d(δ′) and d(δ) as matrices.
        #[arg(long = "check-lemma31")]
        check_lemma31: bool,
        /// Largest exterior degree compared.
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Largest weight compared.
        #[arg(long, default_value_t = 6)]
        w: usize,
        /// Also compare the coefficient complex up to this `p,w`, e.g. `1,4`.
        #[arg(long)]
        module: Option<String>,
        /// Write `A` as a handle file usable with `--delta deformed:<file>`.
        #[arg(long)]
        save_handle: Option<PathBuf>,
    },
    /// Solve for a symplectic expansion up to the given degree.
    Expand {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long)]
        degree: usize,
        /// Add seeded random kernel elements at each degree.
        #[arg(long)]
        random: bool,
    },
    /// Find `u` with `θ′ = e^u ∘ θ` for two expansion files.
    Compare { theta: PathBuf, theta_prime: PathBuf },
    /// `−N(θ(w))` for a group word such as `x1 x2 x1^-1`.
    Loop {
        theta: PathBuf,
        word: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bialgebra,
    Bracket,
    Bimodule,
    Complex,
    Deformation,
}

/// `"a..b"`, `"a..=b"` or `"a"`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range bound `{t}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}
