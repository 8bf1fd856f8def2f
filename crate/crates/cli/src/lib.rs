//! Experiment harness over `displace-core`: exhaustive scans, seeded
//! sampling and certificate batches, each producing a deterministic report.

use displace_core::freewords::FreeGroupError;
use displace_core::hypcore::HypError;
use displace_core::matgeo::MatGeoError;
use displace_core::matrix_text::ParseError;
use displace_core::zlattice::ZlatticeError;
use thiserror::Error;

pub mod config;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use report::{ExperimentReport, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Word(#[from] FreeGroupError),
    #[error(transparent)]
    Lattice(#[from] ZlatticeError),
    #[error(transparent)]
    MatGeo(#[from] MatGeoError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Runs the configured experiment. Wall-clock time is attached only when
/// `--timing` is set.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let start = std::time::Instant::now();
    let mut report = experiments::dispatch(cfg)?;
    if cfg.common.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Renders the report and writes it to `--out` (atomically) or returns it
/// for standard output. With CSV output to a file, the summary document is
/// written next to it as `<out>.summary`.
pub fn emit(cfg: &ExperimentConfig, report: &ExperimentReport) -> Result<Option<String>, CliError> {
    let text = report.render(cfg.common.format)?;
    match &cfg.common.out {
        None => Ok(Some(text)),
        Some(path) => {
            report::write_atomic(path, &text)?;
            if cfg.common.format == Format::Csv {
                let mut summary = path.clone().into_os_string();
                summary.push(".summary");
                report::write_atomic(summary.as_ref(), &report.to_kv().to_string())?;
            }
            Ok(None)
        }
    }
}
