use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyroots::Tolerances;

use crate::app::{CliConfig, Command, InputSource, OutputFormat};

/// Polynomial root finder.
///
/// Polynomials are given as ascending coefficient lists such as
/// `[-6, 11, -6, 1]` or as expressions such as `3x^2y - 1.5y^4 + 2`.
/// Without an inline polynomial or `--file`, input is read from stdin.
#[derive(Debug, Parser)]
#[command(name = "solve", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Bisection width, relative to max(1, |root|)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Coefficients below this fraction of the largest are treated as zero
    #[arg(long, global = true)]
    zero_eps: Option<f64>,

    /// Distance under which candidate solutions are merged
    #[arg(long, global = true)]
    cluster_tol: Option<f64>,

    /// Iteration cap for bisection and polishing
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Real roots of a real polynomial in x
    RealRoots(Single),
    /// All complex roots of a polynomial in z
    ComplexRoots(Single),
    /// Real solutions of two equations in x and y
    SolveSystem(Pair),
    /// Positive n-th root of a
    NthRoot {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long)]
        n: u32,
    },
    /// Radius outside which the polynomial keeps the sign of its leading term
    Bound(Single),
    /// Multiplicity of a known root
    Multiplicity {
        #[command(flatten)]
        input: Single,
        /// The root, real or complex (`1.5`, `2-3i`)
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Debug, Args)]
struct Single {
    #[arg(allow_hyphen_values = true)]
    poly: Option<String>,
    /// Read the polynomial from a file
    #[arg(long, conflicts_with = "poly")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Pair {
    /// First equation
    #[arg(allow_hyphen_values = true)]
    first: Option<String>,
    /// Second equation
    #[arg(allow_hyphen_values = true, requires = "first")]
    second: Option<String>,
    /// Read the equations from a file, one per line
    #[arg(long, conflicts_with_all = ["first", "second"])]
    file: Option<PathBuf>,
}

fn source(inline: Vec<String>, file: Option<PathBuf>) -> InputSource {
    match file {
        Some(path) => InputSource::File(path),
        None if inline.is_empty() => InputSource::Stdin,
        None => InputSource::Inline(inline),
    }
}

impl Cli {
    pub fn into_config(self) -> CliConfig {
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            zero_eps: self.zero_eps.unwrap_or(defaults.zero_eps),
            root_tol: self.tol.unwrap_or(defaults.root_tol),
            cluster_tol: self.cluster_tol.unwrap_or(defaults.cluster_tol),
            max_iter: self.max_iter.unwrap_or(defaults.max_iter),
        };
        let (command, input) = match self.command {
            Cmd::RealRoots(s) => (Command::RealRoots, source(s.poly.into_iter().collect(), s.file)),
            Cmd::ComplexRoots(s) => (Command::ComplexRoots, source(s.poly.into_iter().collect(), s.file)),
            Cmd::Bound(s) => (Command::Bound, source(s.poly.into_iter().collect(), s.file)),
            Cmd::SolveSystem(p) => (
                Command::SolveSystem,
                source(p.first.into_iter().chain(p.second).collect(), p.file),
            ),
            Cmd::NthRoot { a, n } => (Command::NthRoot { a, n }, InputSource::Inline(Vec::new())),
            Cmd::Multiplicity { input, at } => (
                Command::Multiplicity { at },
                source(input.poly.into_iter().collect(), input.file),
            ),
        };
        let format = match self.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        };
        CliConfig {
            command,
            tolerances,
            format,
            input,
        }
    }
}
