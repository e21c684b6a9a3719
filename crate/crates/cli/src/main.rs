mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Format};
use commands::Failure;
use report::Report;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CAPACITY: u8 = 65;

fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => report.to_json().map_err(|e| e.to_string()),
        Format::Csv => report.to_csv().map_err(|e| e.to_string()),
        Format::Table => Ok(report.to_table()),
    }
}

fn emit(text: &str, cli: &Cli) -> std::io::Result<()> {
    match &cli.output.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let report = match commands::run(&cli.command, &cli.output) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CAPACITY);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };

    let text = match render(&report, cli.output.format) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    if let Err(e) = emit(&text, &cli) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }

    let mismatches = report.mismatches();
    if mismatches > 0 {
        eprintln!(
            "{mismatches} quantities differ from their reference by more than {:e}",
            report::MATCH_TOL
        );
        return ExitCode::from(EXIT_MISMATCH);
    }
    ExitCode::SUCCESS
}
