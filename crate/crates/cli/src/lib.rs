//! Command-line front end for `polyroots`: the input grammar, argument
//! handling and output formatting behind the `solve` binary.

mod app;
mod args;
pub mod parse;

pub use app::{fmt_num, run, CliConfig, Command, InputSource, OutputFormat};
pub use args::Cli;
pub use parse::{parse_complex, parse_poly, render, ParseError, ParsedPoly};
