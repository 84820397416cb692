use std::io;
use std::process::ExitCode;

use clap::Parser;
use polyroots_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version go to stdout and are not failures.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = run(
        &cli.into_config(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
