//! Single-query commands. They produce the same report shape as the scans,
//! with results in the summary and failed certifications as failed checks.

use displace_core::freewords::{
    cyclic_reduce, gromov_product, gromov_product_e, stable_norm_free, translation_length_free, Word,
};
use displace_core::hypcore::{
    certify_ping_pong, find_ping_pong_pair, is_almost_cyclically_reduced, HypError, HyperbolicityParam,
    PingPongCertificate,
};
use displace_core::kv::KvDoc;
use displace_core::matgeo::{
    benoist_gap, cartan_projection, cartan_projection_of_power, certify_proximal, jordan_projection,
    symmetric_space_displacement, symmetric_space_norm,
};
use displace_core::matrix_text::{parse_int_matrix, parse_int_matrix_array, parse_real_matrix};
use displace_core::zlattice::contortion_witness;
use displace_core::Rational;

use super::{pairs, rat, real};
use crate::config::{check_grid, ContortionArgs, MatGeoArgs, PingPongArgs, WordArgs, WordOp};
use crate::report::ExperimentReport;
use crate::CliError;

fn absorb(report: &mut ExperimentReport, prefix: &str, kv: &KvDoc) {
    for (k, v) in kv.entries() {
        report.summarize(&format!("{prefix}.{k}"), v);
    }
}

/// `e` stands for the empty word.
fn parse_word(text: &str, rank: u8) -> Result<Word, CliError> {
    let t = text.trim();
    Ok(Word::parse(if t == "e" { "" } else { t }, rank)?)
}

fn record_pair(report: &mut ExperimentReport, result: Result<PingPongCertificate, HypError>) -> Result<(), CliError> {
    match result {
        Ok(cert) => {
            absorb(report, "certificate", &cert.to_kv());
            report.check("ping_pong", true, "");
        }
        Err(e @ (HypError::NotPingPong { .. } | HypError::NotFound(_))) => report.check("ping_pong", false, e),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn pingpong(a: &PingPongArgs, delta: Rational) -> Result<ExperimentReport, CliError> {
    let d = HyperbolicityParam::new(delta)?;
    match (&a.find, &a.u, &a.v) {
        (Some(f), None, None) => {
            let f = parse_word(f, 2)?;
            let gen = parse_word(&a.a, 2)?;
            let config = pairs(&[
                ("f", f.to_string()),
                ("a", gen.to_string()),
                ("delta", rat(&delta)),
                ("n_max", a.n_max.to_string()),
            ]);
            let mut report = ExperimentReport::new("pingpong_find", config, &[]);
            let found = find_ping_pong_pair(&f, &gen, d, a.n_max);
            if let Ok((n, _)) = &found {
                report.summarize("N", n);
            }
            record_pair(&mut report, found.map(|(_, c)| c))?;
            Ok(report)
        }
        (None, Some(u), Some(v)) => {
            let (u, v) = (parse_word(u, 2)?, parse_word(v, 2)?);
            let config = pairs(&[("u", u.to_string()), ("v", v.to_string()), ("delta", rat(&delta))]);
            let mut report = ExperimentReport::new("pingpong", config, &[]);
            record_pair(&mut report, certify_ping_pong(&u, &v, d))?;
            Ok(report)
        }
        _ => Err(CliError::Config("give either --u and --v, or --find".into())),
    }
}

pub fn contortion(a: &ContortionArgs) -> Result<ExperimentReport, CliError> {
    let gamma = parse_int_matrix(&a.gamma)?;
    let reps = parse_int_matrix_array(&a.reps)?;
    let config = pairs(&[
        ("gamma", gamma.to_string()),
        ("reps", reps.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")),
        ("prime_cap", a.prime_cap.to_string()),
    ]);
    let mut report = ExperimentReport::new("contortion", config, &[]);
    let w = contortion_witness(&gamma, &reps, a.prime_cap)?;
    absorb(&mut report, "witness", &w.to_kv());
    report.check("gamma_k_trivial", w.gamma_k_mod.is_identity(), "");
    report.check("reps_nontrivial", w.reps_mod.iter().all(|r| !r.is_identity()), "");
    Ok(report)
}

pub fn word(a: &WordArgs, delta: Rational) -> Result<ExperimentReport, CliError> {
    let d = HyperbolicityParam::new(delta)?;
    let want = |n: usize| -> Result<(), CliError> {
        if a.args.len() == n {
            Ok(())
        } else {
            Err(CliError::Config(format!("{:?} takes {n} arguments", a.op).to_lowercase()))
        }
    };
    let config = pairs(&[
        ("op", format!("{:?}", a.op).to_lowercase()),
        ("args", a.args.join(" ")),
        ("rank", a.rank.to_string()),
        ("delta", rat(&delta)),
    ]);
    let mut report = ExperimentReport::new("word", config, &[]);
    let w = |i: usize| parse_word(&a.args[i], a.rank);
    match a.op {
        WordOp::Reduce => {
            want(1)?;
            let g = w(0)?;
            report.summarize("reduced", &g);
            report.summarize("length", g.len());
        }
        WordOp::Inverse => {
            want(1)?;
            report.summarize("inverse", w(0)?.inverse());
        }
        WordOp::Multiply => {
            want(2)?;
            let gh = w(0)?.multiply(&w(1)?)?;
            report.summarize("product", &gh);
            report.summarize("length", gh.len());
        }
        WordOp::Power => {
            want(2)?;
            let n: i64 = a.args[1].parse().map_err(|_| CliError::Config("power needs an integer exponent".into()))?;
            if n.unsigned_abs() > 1 << 20 {
                return Err(CliError::Config("exponent capped at 2^20".into()));
            }
            let g = w(0)?.pow(n);
            report.summarize("power", &g);
            report.summarize("length", g.len());
        }
        WordOp::Cyclic => {
            want(1)?;
            let g = w(0)?;
            let c = cyclic_reduce(&g);
            report.summarize("core", &c.core);
            report.summarize("conjugator", &c.conjugator);
            report.summarize("translation_length", translation_length_free(&g));
            report.summarize("stable_norm", stable_norm_free(&g));
        }
        WordOp::Gromov => {
            if a.args.len() != 2 && a.args.len() != 3 {
                return Err(CliError::Config("gromov takes g h [base]".into()));
            }
            let p = match a.args.get(2) {
                Some(_) => gromov_product(&w(0)?, &w(1)?, &w(2)?)?,
                None => gromov_product_e(&w(0)?, &w(1)?)?,
            };
            report.summarize("gromov_product", rat(&p.value()));
        }
        WordOp::Acr => {
            want(1)?;
            let v = is_almost_cyclically_reduced(&w(0)?, d);
            report.summarize("product", rat(&v.product));
            report.summarize("threshold", rat(&v.threshold));
            report.summarize("acr", v.is_acr);
        }
    }
    Ok(report)
}

pub fn matgeo(a: &MatGeoArgs) -> Result<ExperimentReport, CliError> {
    check_grid(a.grid)?;
    let g = parse_real_matrix(&a.matrix)?;
    let mut config = pairs(&[("matrix", a.matrix.clone())]);
    if let Some(m) = a.power {
        config.push(("power".into(), m.to_string()));
    }
    if let (Some(r), Some(e)) = (a.r, a.epsilon) {
        config.extend(pairs(&[("r", real(r)), ("epsilon", real(e)), ("grid", a.grid.to_string())]));
    }
    let mut report = ExperimentReport::new("matgeo", config, &[]);
    let mut doc = KvDoc::new("projections");
    doc.push_reals("cartan", cartan_projection(&g)?.values());
    doc.push_reals("jordan", jordan_projection(&g)?.values());
    doc.push_real("norm", symmetric_space_norm(&g)?);
    doc.push_real("displacement", symmetric_space_displacement(&g)?);
    doc.push_real("benoist_gap", benoist_gap(&g)?);
    if let Some(m) = a.power {
        if m == 0 {
            return Err(CliError::Config("power must be positive".into()));
        }
        let mu: Vec<f64> = cartan_projection_of_power(&g, m)?.values().iter().map(|x| x / m as f64).collect();
        doc.push_reals("cartan_of_power_over_m", &mu);
    }
    absorb(&mut report, "g", &doc);
    if let (Some(r), Some(e)) = (a.r, a.epsilon) {
        match certify_proximal(&g, r, e, a.grid) {
            Ok(cert) => {
                absorb(&mut report, "proximal", &cert.to_kv());
                report.check("proximal", true, "");
            }
            Err(err) => report.check("proximal", false, err),
        }
    }
    Ok(report)
}
