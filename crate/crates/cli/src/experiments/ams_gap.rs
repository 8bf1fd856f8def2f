//! Sampled `(r, ε)`-proximal matrices and the gap `|μ(g) − λ(g)|` between
//! their Cartan and Jordan projections, asserted against a fixed bound.

use displace_core::matgeo::sampling::{random_diagonal, random_kak, random_sl};
use displace_core::matgeo::{benoist_gap, certify_proximal, MatGeoError, RealMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{pairs, real};
use crate::config::{check_dimension, check_grid, check_samples, Sampler};
use crate::report::ExperimentReport;
use crate::CliError;

/// Calibrated on dimension 2, 10³ KAK samples, `(r, ε) = (0.5, 0.05)`,
/// seed 42: observed maximum 0.970. Seeds 0..100 give at most 0.978.
pub const DEFAULT_GAP_BOUND: f64 = 1.0;
/// Same sweep in dimensions 3 to 5: observed maximum 2.59.
pub const DEFAULT_GAP_BOUND_HIGHER: f64 = 3.0;

/// The calibrated bound for `(0.5, 0.05)` and the default KAK sampler, if any.
pub fn default_gap_bound(dimension: usize) -> Option<f64> {
    match dimension {
        2 => Some(DEFAULT_GAP_BOUND),
        3..=5 => Some(DEFAULT_GAP_BOUND_HIGHER),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct Params {
    pub dimension: usize,
    pub samples: usize,
    pub r: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub sampler: Sampler,
    /// Spread of log singular values; the entry bound for the uniform sampler.
    pub max_log: f64,
    pub grid: usize,
    pub gap_bound: f64,
}

enum Outcome {
    Proximal { gap: f64, separation: f64, margin: f64 },
    Rejected(&'static str),
}

fn classify(g: &RealMatrix, p: &Params) -> Result<Outcome, CliError> {
    match certify_proximal(g, p.r, p.epsilon, p.grid) {
        Ok(cert) => match benoist_gap(g) {
            Ok(gap) => Ok(Outcome::Proximal { gap, separation: cert.separation, margin: cert.contraction_margin }),
            Err(MatGeoError::SingularInput | MatGeoError::EigenFailure) => Ok(Outcome::Rejected("numerical")),
            Err(e) => Err(e.into()),
        },
        Err(MatGeoError::NoDominantEigenvalue) => Ok(Outcome::Rejected("no_dominant_eigenvalue")),
        Err(MatGeoError::SeparationFailed { .. }) => Ok(Outcome::Rejected("separation")),
        Err(MatGeoError::ContractionFailed { .. }) => Ok(Outcome::Rejected("contraction")),
        // Large singular-value spreads lose the determinant to rounding.
        Err(MatGeoError::SingularInput | MatGeoError::EigenFailure) => Ok(Outcome::Rejected("numerical")),
        Err(e) => Err(e.into()),
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

pub fn run(p: &Params) -> Result<ExperimentReport, CliError> {
    check_dimension(p.dimension, 2)?;
    check_samples(p.samples)?;
    check_grid(p.grid)?;
    if !(p.epsilon > 0.0 && p.r > 2.0 * p.epsilon && p.r <= 1.0) {
        return Err(CliError::Config("need 0 < 2·epsilon < r ≤ 1".into()));
    }
    if !(p.max_log > 0.0 && p.max_log <= 50.0) {
        return Err(CliError::Config("max_log must lie in (0, 50]".into()));
    }
    if p.gap_bound.is_nan() || p.gap_bound < 0.0 {
        return Err(CliError::Config("gap_bound must be non-negative".into()));
    }
    let config = pairs(&[
        ("dimension", p.dimension.to_string()),
        ("samples", p.samples.to_string()),
        ("r", real(p.r)),
        ("epsilon", real(p.epsilon)),
        ("seed", p.seed.to_string()),
        ("prng", "ChaCha8".into()),
        ("sampler", format!("{:?}", p.sampler).to_lowercase()),
        ("max_log", real(p.max_log)),
        ("grid", p.grid.to_string()),
        ("gap_bound", real(p.gap_bound)),
    ]);
    let mut report =
        ExperimentReport::new("ams_gap", config, &["index", "proximal", "gap", "separation", "contraction_margin"]);

    // Sampling stays sequential so the stream depends only on the seed.
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mats: Vec<RealMatrix> = (0..p.samples)
        .map(|_| match p.sampler {
            Sampler::Kak => random_kak(p.dimension, p.max_log, &mut rng),
            Sampler::Diagonal => random_diagonal(p.dimension, p.max_log, &mut rng),
            Sampler::Uniform => random_sl(p.dimension, p.max_log, &mut rng),
        })
        .collect();
    let outcomes: Vec<Outcome> = mats.par_iter().map(|g| classify(g, p)).collect::<Result<_, _>>()?;

    let mut gaps = Vec::new();
    let mut rejected = [0u64; 4];
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Outcome::Proximal { gap, separation, margin } => {
                gaps.push(*gap);
                report.push_row(vec![i.to_string(), "true".into(), real(*gap), real(*separation), real(*margin)]);
            }
            Outcome::Rejected(why) => {
                let k = match *why {
                    "no_dominant_eigenvalue" => 0,
                    "separation" => 1,
                    "contraction" => 2,
                    _ => 3,
                };
                rejected[k] += 1;
                report.push_row(vec![
                    i.to_string(),
                    format!("false:{why}"),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
        }
    }

    report.summarize("samples", p.samples);
    report.summarize("proximal", gaps.len());
    report.summarize("rejected_no_dominant_eigenvalue", rejected[0]);
    report.summarize("rejected_separation", rejected[1]);
    report.summarize("rejected_contraction", rejected[2]);
    report.summarize("rejected_numerical", rejected[3]);
    let max = gaps.iter().copied().fold(0.0, f64::max);
    if !gaps.is_empty() {
        let mut sorted = gaps.clone();
        sorted.sort_by(f64::total_cmp);
        report.summarize("gap_min", real(sorted[0]));
        report.summarize("gap_median", real(quantile(&sorted, 0.5)));
        report.summarize("gap_p90", real(quantile(&sorted, 0.9)));
        report.summarize("gap_p99", real(quantile(&sorted, 0.99)));
        report.summarize("gap_mean", real(sorted.iter().sum::<f64>() / sorted.len() as f64));
        report.summarize("gap_max", real(max));
    }
    report.check(
        "gap_bound",
        max <= p.gap_bound,
        format!("max {} over {} proximal samples, bound {}", real(max), gaps.len(), real(p.gap_bound)),
    );
    Ok(report)
}
