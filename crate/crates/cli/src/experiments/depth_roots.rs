//! Root-depth certificates for a batch of matrices, each cross-checked by
//! the brute-force search recorded inside the certificate.

use std::path::Path;

use displace_core::intmat::IntMatrix;
use displace_core::matrix_text::parse_int_matrix_list;
use displace_core::zlattice::{depth_root_bound, DepthBranch, ZlatticeError};

use super::{pairs, real};
use crate::report::ExperimentReport;
use crate::CliError;

const COLUMNS: &[&str] = &[
    "index",
    "matrix",
    "status",
    "branch",
    "K_upper",
    "K1",
    "b",
    "q",
    "depth",
    "box_bound",
    "search_exponents",
    "candidates",
    "roots_found",
    "consistent",
];

pub fn run_file(path: &Path, box_bound: Option<i64>, max_candidates: u128) -> Result<ExperimentReport, CliError> {
    let text = std::fs::read_to_string(path)?;
    let matrices = parse_int_matrix_list(&text)?;
    let mut report = run(&matrices, box_bound, max_candidates)?;
    report.config.insert(0, ("matrix_file".into(), path.display().to_string()));
    Ok(report)
}

/// Identity and other torsion inputs give a `TorsionInput` row; any other
/// failure to certify fails the run.
pub fn run(matrices: &[IntMatrix], box_bound: Option<i64>, max_candidates: u128) -> Result<ExperimentReport, CliError> {
    if box_bound.is_some_and(|b| !(0..=64).contains(&b)) {
        return Err(CliError::Config("box_bound must lie in 0..=64".into()));
    }
    let config = pairs(&[
        ("matrices", matrices.len().to_string()),
        ("box_bound", box_bound.map_or("auto".into(), |b| b.to_string())),
        ("max_candidates", max_candidates.to_string()),
    ]);
    let mut report = ExperimentReport::new("depth_roots", config, COLUMNS);
    let (mut certified, mut torsion, mut failed, mut inconsistent) = (0u64, 0u64, 0u64, 0u64);
    let mut certificates = Vec::new();
    for (i, a) in matrices.iter().enumerate() {
        let mut row = vec![i.to_string(), a.to_string()];
        match depth_root_bound(a, box_bound, max_candidates) {
            Ok(cert) => {
                certified += 1;
                let consistent = cert.is_consistent();
                if !consistent {
                    inconsistent += 1;
                }
                let s = &cert.search;
                let branch = match cert.branch {
                    DepthBranch::Hyperbolic => "hyperbolic",
                    DepthBranch::TrivialHyperbolicPart { .. } => "trivial_hyperbolic_part",
                };
                for (k, v) in cert.to_kv().entries() {
                    certificates.push((format!("certificate.{i}.{k}"), v.clone()));
                }
                row.extend([
                    "certificate".to_string(),
                    branch.to_string(),
                    real(cert.k_upper),
                    cert.k1.to_string(),
                    cert.b.map_or("none".into(), real),
                    cert.q.map_or("none".into(), |q| q.to_string()),
                    cert.depth.to_string(),
                    s.box_bound.to_string(),
                    format!("{}..{}", s.exponents.start(), s.exponents.end()),
                    s.candidates.to_string(),
                    s.roots.len().to_string(),
                    consistent.to_string(),
                ]);
            }
            Err(e) => {
                let status = match e {
                    ZlatticeError::TorsionInput => {
                        torsion += 1;
                        "TorsionInput".to_string()
                    }
                    other => {
                        failed += 1;
                        format!("error: {other}")
                    }
                };
                row.push(status);
                row.extend(std::iter::repeat_n(String::new(), COLUMNS.len() - 3));
            }
        }
        report.push_row(row);
    }
    report.summarize("certified", certified);
    report.summarize("torsion", torsion);
    report.summarize("errors", failed);
    report.summarize("inconsistent", inconsistent);
    for (k, v) in certificates {
        report.summarize(&k, v);
    }
    report.check("certified_or_torsion", failed == 0, format!("{failed} errors"));
    report.check("brute_force_consistent", inconsistent == 0, format!("{inconsistent} inconsistent"));
    Ok(report)
}
