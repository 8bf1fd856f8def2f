use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use displace_cli::{emit, run, ExperimentConfig};

fn main() -> ExitCode {
    let cfg = ExperimentConfig::parse();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(t) = report.wall_clock_seconds {
        eprintln!("wall clock: {t:.3} s");
    }
    match emit(&cfg, &report) {
        Ok(Some(text)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} {}", c.name, c.detail);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
