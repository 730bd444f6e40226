mod args;
mod commands;
mod inputs;

use std::process::ExitCode;

use clap::Parser;
use lidarfill::ErrorKind;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("lidarfill: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Project(a) => commands::project(a),
        Command::Fit(a) => commands::fit(a),
        Command::Inpaint(a) => commands::inpaint(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Evaluate(a) => commands::evaluate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = match e.kind() {
                ErrorKind::Validation => (2, "validation"),
                ErrorKind::Numerical => (3, "numerical"),
                ErrorKind::Io => (4, "io"),
            };
            let diag = serde_json::json!({ "error": kind, "message": e.to_string() });
            eprintln!("{diag}");
            ExitCode::from(code)
        }
    }
}
