//! The `graphalg` command line: argument handling, report rendering and
//! the corpus runner. `main.rs` only forwards to [`run`].

pub mod commands;
pub mod corpus;
pub mod reports;

use clap::Parser;

pub use commands::Cli;

/// What a command produced: the text for stdout and stderr, and the exit
/// code (0 ok, 1 parse or usage error, 2 resource cap, 3 failed check).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    pub fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => commands::dispatch(&cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::fail(1, String::new(), text),
            }
        }
    }
}
