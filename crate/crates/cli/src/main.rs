mod cli;
mod commands;
mod output;
mod settings;
mod values;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command, Format};
use settings::{CliError, Settings};

fn threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("KVN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("KVN_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    threads()?;
    let name = cli.command.name();
    let s = Settings::load(cli.config.as_deref(), name)?;
    let format = s.global(cli.format, "format")?.unwrap_or(Format::Csv);
    let out: Option<PathBuf> = s.global(cli.out, "out")?;
    let outcome = match cli.command {
        Command::Oscillator(a) => commands::oscillator(a, &s),
        Command::Landau(a) => commands::landau(a, &s),
        Command::Ab(a) => commands::ab(a, &s),
        Command::GaugeCheck(a) => commands::gauge_check(a, &s),
        Command::Evolve(a) => commands::evolve(a, &s),
        Command::BesselZeros(a) => commands::bessel_zeros(a, &s),
    }?;
    output::emit(name, &outcome, format, out.as_deref())?;
    match outcome.failure {
        Some(f) => Err(CliError::Tolerance(f)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
