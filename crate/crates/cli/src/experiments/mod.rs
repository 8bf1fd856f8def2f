//! One module per experiment; each takes its arguments plus the shared
//! flags and returns a report whose checks decide the exit code.

use displace_core::Rational;

use crate::config::{Command, ExperimentConfig};
use crate::report::ExperimentReport;
use crate::CliError;

pub mod adhoc;
pub mod ams_gap;
pub mod depth_roots;
pub mod prop422;
pub mod prop507;

pub fn dispatch(cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let c = &cfg.common;
    match &cfg.command {
        Command::Prop422(a) => {
            c.reject("prop422", &["seed", "max-ball", "box-bound"])?;
            prop422::run(&prop422::Params {
                radius: c.radius_or(prop422::DEFAULT_RADIUS)?,
                u: a.u.clone(),
                v: a.v.clone(),
                delta: c.delta_or_zero()?,
                alpha_override: a.alpha_override,
            })
        }
        Command::Prop507(a) => {
            c.reject("prop507", &["seed", "delta", "box-bound"])?;
            prop507::run(&prop507::Params {
                n: a.n,
                power_max: a.power_max,
                radius: c.radius.unwrap_or(prop507::DEFAULT_RADIUS),
                max_ball: c.max_ball.unwrap_or(displace_core::zlattice::DEFAULT_MAX_BALL),
                control: a.control,
            })
        }
        Command::AmsGap(a) => {
            c.reject("ams-gap", &["radius", "delta", "max-ball", "box-bound"])?;
            ams_gap::run(&ams_gap::Params {
                dimension: a.dimension,
                samples: a.samples,
                r: a.r,
                epsilon: a.epsilon,
                seed: c.require_seed()?,
                sampler: a.sampler,
                max_log: a.max_log,
                grid: a.grid,
                gap_bound: match a.gap_bound.or_else(|| ams_gap::default_gap_bound(a.dimension)) {
                    Some(b) => b,
                    None => {
                        return Err(CliError::Config(format!(
                            "no calibrated gap bound in dimension {}; pass --gap-bound",
                            a.dimension
                        )))
                    }
                },
            })
        }
        Command::DepthRoots(a) => {
            c.reject("depth-roots", &["radius", "delta", "seed", "max-ball"])?;
            depth_roots::run_file(&a.matrix_file, c.box_bound, a.max_candidates)
        }
        Command::Pingpong(a) => {
            c.reject("pingpong", &["radius", "seed", "max-ball", "box-bound"])?;
            adhoc::pingpong(a, c.delta_or_zero()?)
        }
        Command::Contortion(a) => {
            c.reject("contortion", &["radius", "delta", "seed", "max-ball", "box-bound"])?;
            adhoc::contortion(a)
        }
        Command::Word(a) => {
            c.reject("word", &["radius", "seed", "max-ball", "box-bound"])?;
            adhoc::word(a, c.delta_or_zero()?)
        }
        Command::Matgeo(a) => {
            c.reject("matgeo", &["radius", "delta", "seed", "max-ball", "box-bound"])?;
            adhoc::matgeo(a)
        }
    }
}

pub(crate) fn rat(r: &Rational) -> String {
    displace_core::fmt_rational(r)
}

pub(crate) fn real(x: f64) -> String {
    displace_core::fmt_real(x)
}

pub(crate) fn pairs(items: &[(&str, String)]) -> Vec<(String, String)> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
