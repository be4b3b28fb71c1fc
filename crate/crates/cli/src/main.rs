mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Format};
use coxcell::Error;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn wants_json(argv: &[String]) -> bool {
    argv.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || argv.iter().any(|a| a == "--format=json")
}

fn report_error(json_errors: bool, kind: &str, message: &str) {
    if json_errors {
        eprintln!("{}", json!({"error": {"kind": kind, "message": message}}));
    } else {
        eprintln!("error: {message}");
    }
}

fn classify_error(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Resource { .. } | Error::OutOfBall { .. } => ("resource", EXIT_RESOURCE),
        Error::Invariant(_) => ("invariant", EXIT_FAILED),
        Error::Config(_) | Error::Word(_) => ("config", EXIT_USAGE),
        Error::Domain(_) => ("domain", EXIT_USAGE),
        Error::Cache(_) | Error::Io(_) | Error::Json(_) => ("io", EXIT_USAGE),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if wants_json(&argv) {
                report_error(true, "usage", e.to_string().trim());
            } else {
                let _ = e.print();
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let json_out = cli.format == Format::Json;
    let threads = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    if let Err(e) = threads {
        report_error(json_out, "usage", &e.to_string());
        return ExitCode::from(EXIT_USAGE);
    }
    match commands::run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n",
                Format::Table => out.table,
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if out.failed {
                ExitCode::from(EXIT_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let (kind, code) = classify_error(&e);
            report_error(json_out, kind, &e.to_string());
            ExitCode::from(code)
        }
    }
}
