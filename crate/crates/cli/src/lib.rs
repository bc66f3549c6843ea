//! Command-line front end: configure, run and export evolutions of the
//! two-sector example model.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, Command, IntegratorKind, RunConfig};
pub use error::{CliError, Result};

/// Parses `argv`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stderr = std::io::stderr();
    let mut diag = stderr.lock();
    let cfg = match config::parse_config(argv) {
        Ok(cfg) => cfg,
        Err(CliError::Args(e)) => {
            // Help and version go to stdout with status 0, errors to stderr.
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            let _ = std::io::Write::write_fmt(&mut diag, format_args!("error: {e}\n"));
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run::run(&cfg, &mut out, &mut diag) {
        Ok(()) => 0,
        Err(e) => {
            let _ = std::io::Write::write_fmt(&mut diag, format_args!("error: {e}\n"));
            e.exit_code()
        }
    }
}
