//! Powers `γ^p`, `p = 2^j`, of the unipotent `E₁ₙ(1)`: the symmetric-space
//! displacement stays exactly zero while the word-metric translation length
//! is bounded below by `log_c gcd(γ^p − I) = log_c p`, which diverges.

use displace_core::intmat::IntMatrix;
use displace_core::matgeo::symmetric_space_displacement_int;
use displace_core::zlattice::{enumerate_ball, translation_length_lower, GeneratorSet};

use super::{pairs, real};
use crate::config::{check_dimension, MAX_POWER_LOG2};
use crate::report::ExperimentReport;
use crate::CliError;

pub const DEFAULT_RADIUS: usize = 4;
/// Hyperbolic powers grow like φ^{2p}; gcds of such entries get slow beyond this.
pub const CONTROL_MAX_POWER_LOG2: u32 = 16;
/// Largest power whose displacement is also computed directly in the control.
const CROSS_CHECK_POWER: u64 = 8;

#[derive(Debug, Clone)]
pub struct Params {
    pub n: usize,
    pub power_max: u64,
    /// Radius of the Cayley ball used for exact word lengths.
    pub radius: usize,
    pub max_ball: usize,
    /// Replace `γ` by `[[2,1],[1,1]]` padded to dimension `n`.
    pub control: bool,
}

/// Keeps long integers readable in the table: leading digits and a digit count.
fn abbreviate(digits: String) -> String {
    if digits.len() <= 40 {
        digits
    } else {
        format!("{}...({} digits)", &digits[..12], digits.len())
    }
}

pub fn run(p: &Params) -> Result<ExperimentReport, CliError> {
    check_dimension(p.n, 2)?;
    if p.power_max == 0 {
        return Err(CliError::Config("power_max must be at least 1".into()));
    }
    let log_cap = if p.control { CONTROL_MAX_POWER_LOG2 } else { MAX_POWER_LOG2 };
    if p.power_max > 1 << log_cap {
        return Err(CliError::Config(format!("power_max exceeds 2^{log_cap}")));
    }
    if p.radius > 8 {
        return Err(CliError::Config("word-length radius capped at 8".into()));
    }
    let gamma = if p.control {
        IntMatrix::from_i64(&[[2, 1], [1, 1]]).expect("unimodular").pad_to(p.n)
    } else {
        IntMatrix::elementary(p.n, 1, p.n, 1)
    };
    let gens = GeneratorSet::elementary(p.n);
    let c = gens.norm_bound();
    let ball = enumerate_ball(&gens, p.radius as u32, p.max_ball)?;

    let config = pairs(&[
        ("n", p.n.to_string()),
        ("gamma", gamma.to_string()),
        ("power_max", p.power_max.to_string()),
        ("powers", "geometric 2^j".into()),
        ("radius", p.radius.to_string()),
        ("max_ball", p.max_ball.to_string()),
        ("control", p.control.to_string()),
    ]);
    let mut report = ExperimentReport::new(
        "prop507",
        config,
        &["p", "log2_p", "gcd_minus_identity", "displacement", "translation_length_lower", "word_length"],
    );

    let base_displacement = symmetric_space_displacement_int(&gamma)?;
    let mut cross_check_err: f64 = 0.0;
    let mut lower_prev: Option<f64> = None;
    let mut increasing = true;
    let mut all_zero = true;
    let mut all_positive = true;
    let mut gp = gamma.clone();
    let mut power: u64 = 1;
    let mut j = 0u32;
    loop {
        let displacement = if p.control {
            // λ is homogeneous, so d(γ^p) = p·d(γ); entries of γ^p overflow f64.
            let d = power as f64 * base_displacement;
            if power <= CROSS_CHECK_POWER {
                let direct = symmetric_space_displacement_int(&gp)?;
                cross_check_err = cross_check_err.max((direct - d).abs() / d);
            }
            d
        } else {
            symmetric_space_displacement_int(&gp)?
        };
        all_zero &= displacement == 0.0;
        all_positive &= displacement > 0.0;
        let lower = translation_length_lower(&gp, &gens)?;
        if let Some(prev) = lower_prev {
            increasing &= lower > prev;
        }
        lower_prev = Some(lower);
        let word = match ball.length(&gp) {
            Some(l) => l.to_string(),
            None => format!("> {}", p.radius),
        };
        report.push_row(vec![
            power.to_string(),
            j.to_string(),
            abbreviate(gp.gcd_minus_identity().to_string()),
            real(displacement),
            real(lower),
            word,
        ]);
        if power > p.power_max / 2 {
            break;
        }
        gp = &gp * &gp;
        power *= 2;
        j += 1;
    }

    let lower_max = lower_prev.expect("at least one row");
    report.summarize("c", real(c));
    report.summarize("ball_size", ball.len());
    report.summarize("translation_length_lower_max", real(lower_max));
    report.check("generator_norm", c <= 1.62, format!("c = {}", real(c)));
    if p.control {
        report.summarize("displacement_of_gamma", real(base_displacement));
        report.summarize("cross_check_relative_error", real(cross_check_err));
        report.check("displacement_positive", all_positive, "");
        report.check("control_cross_check", cross_check_err <= 1e-9, real(cross_check_err));
    } else {
        // d ≥ A·ℓ − B with d ≡ 0 forces B ≥ A·ℓ for every ℓ in the column.
        report.summarize("well_displacing_refuted", increasing && all_zero);
        report.summarize("required_b_over_a_at_least", real(lower_max));
        report.check("displacement_zero", all_zero, "");
        report.check("lower_bound_increasing", increasing, "");
    }
    Ok(report)
}
