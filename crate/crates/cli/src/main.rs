use std::process::ExitCode;

use clap::Parser;

use durrmeyer_cli::{run, Args, CliError, ExperimentConfig, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::from(EXIT_OK as u8)
            };
        }
    };
    let result = ExperimentConfig::from_args(args).and_then(|c| run(&c));
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            if !report.pass {
                eprintln!("check failed; see the JSON summary");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
