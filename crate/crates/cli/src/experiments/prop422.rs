//! Exhaustive scan of `||g|| ≤ 3·max([g]∞, [gu]∞, [gv]∞) + α` over a ball of
//! F₂, together with the ACR selector on `||g|| ≥ α` and the stable-norm
//! lower bound for every ACR element.

use displace_core::freewords::{alphabet, stable_norm_free, Letter, Word, WordsOfLength};
use displace_core::hypcore::{
    certify_ping_pong, is_almost_cyclically_reduced, prop422_bound_with_alpha, select_acr_choice, AcrChoice, HypError,
    HyperbolicityParam, PingPongCertificate,
};
use displace_core::Rational;
use rayon::prelude::*;

use super::{pairs, rat};
use crate::report::ExperimentReport;
use crate::CliError;

pub const DEFAULT_RADIUS: usize = 12;
const RANK: u8 = 2;
/// Lengths above this are split by 3-letter prefix for parallel scanning.
const PREFIX_LEN: usize = 3;
const MAX_EXAMPLES: usize = 20;

#[derive(Debug, Clone)]
pub struct Params {
    pub radius: usize,
    pub u: String,
    pub v: String,
    pub delta: Rational,
    /// Negative-control hook; `None` uses the certificate's α.
    pub alpha_override: Option<Rational>,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    count: u64,
    violations: u64,
    min_slack: Option<Rational>,
    selector_checked: u64,
    chose: [u64; 3],
    falsified: u64,
    acr: u64,
    acr_violations: u64,
    examples: Vec<String>,
}

impl Tally {
    fn merge(&mut self, o: Tally) {
        self.count += o.count;
        self.violations += o.violations;
        self.min_slack = match (self.min_slack, o.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.selector_checked += o.selector_checked;
        for i in 0..3 {
            self.chose[i] += o.chose[i];
        }
        self.falsified += o.falsified;
        self.acr += o.acr;
        self.acr_violations += o.acr_violations;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(o.examples.into_iter().take(room));
    }

    fn example(&mut self, text: String) {
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(text);
        }
    }
}

fn scan(
    words: impl Iterator<Item = Word>,
    pair: &PingPongCertificate,
    alpha: Rational,
    delta: HyperbolicityParam,
) -> Result<Tally, CliError> {
    let mut t = Tally::default();
    let selector_floor = pair.alpha();
    for g in words {
        t.count += 1;
        let out = prop422_bound_with_alpha(&g, pair, alpha)?;
        let slack = out.rhs - Rational::from(out.lhs as i64);
        t.min_slack = Some(t.min_slack.map_or(slack, |m| m.min(slack)));
        if !out.holds {
            t.violations += 1;
            t.example(format!("prop422 {g}: {} > {}", out.lhs, rat(&out.rhs)));
        }
        // The selector's hypothesis is about the true α, not the override.
        if Rational::from(g.len() as i64) >= selector_floor {
            t.selector_checked += 1;
            match select_acr_choice(&g, pair) {
                Ok(choice) => {
                    let (idx, w) = match choice {
                        AcrChoice::G => (0, g.clone()),
                        AcrChoice::GU => (1, g.multiply(&pair.u)?),
                        AcrChoice::GV => (2, g.multiply(&pair.v)?),
                    };
                    if is_almost_cyclically_reduced(&w, delta).is_acr {
                        t.chose[idx] += 1;
                    } else {
                        t.falsified += 1;
                        t.example(format!("selector {g}: {w} fails the ACR verdict"));
                    }
                }
                Err(HypError::LemmaFalsified(_)) => {
                    t.falsified += 1;
                    t.example(format!("selector {g}: none of g, gu, gv is ACR"));
                }
                Err(e) => return Err(e.into()),
            }
        }
        if is_almost_cyclically_reduced(&g, delta).is_acr {
            t.acr += 1;
            if 3 * stable_norm_free(&g) < g.len() {
                t.acr_violations += 1;
                t.example(format!("acr {g}: 3·[g]∞ = {} < {}", 3 * stable_norm_free(&g), g.len()));
            }
        }
    }
    Ok(t)
}

fn reduced_prefixes(len: usize) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                alphabet(RANK).into_iter().filter_map(move |l| {
                    if p.last().is_some_and(|&x| x == l.inverse()) {
                        None
                    } else {
                        let mut q = p.clone();
                        q.push(l);
                        Some(q)
                    }
                })
            })
            .collect();
    }
    out
}

pub fn run(p: &Params) -> Result<ExperimentReport, CliError> {
    let delta = HyperbolicityParam::new(p.delta)?;
    let u = Word::parse(&p.u, RANK)?;
    let v = Word::parse(&p.v, RANK)?;
    let pair = certify_ping_pong(&u, &v, delta)?;
    let alpha = p.alpha_override.unwrap_or_else(|| pair.alpha());

    let mut config = pairs(&[
        ("radius", p.radius.to_string()),
        ("u", u.to_string()),
        ("v", v.to_string()),
        ("delta", rat(&p.delta)),
    ]);
    if let Some(a) = p.alpha_override {
        config.push(("alpha_override".into(), rat(&a)));
    }
    let mut report = ExperimentReport::new(
        "prop422",
        config,
        &[
            "length",
            "words",
            "prop422_violations",
            "min_slack",
            "selector_checked",
            "selected_g",
            "selected_gu",
            "selected_gv",
            "selector_falsified",
            "acr_words",
            "acr_bound_violations",
        ],
    );

    let prefixes = reduced_prefixes(PREFIX_LEN);
    let mut tasks: Vec<(usize, Option<&[Letter]>)> = Vec::new();
    for len in 0..=p.radius {
        if len <= PREFIX_LEN {
            tasks.push((len, None));
        } else {
            tasks.extend(prefixes.iter().map(|pre| (len, Some(pre.as_slice()))));
        }
    }
    // Collected in task order, so the merge is independent of scheduling.
    let tallies: Vec<(usize, Tally)> = tasks
        .par_iter()
        .map(|&(len, pre)| {
            let words = WordsOfLength::with_prefix(pre.unwrap_or(&[]), RANK, len);
            scan(words, &pair, alpha, delta).map(|t| (len, t))
        })
        .collect::<Result<_, _>>()?;

    let mut per_length = vec![Tally::default(); p.radius + 1];
    for (len, t) in tallies {
        per_length[len].merge(t);
    }
    let mut total = Tally::default();
    for (len, t) in per_length.into_iter().enumerate() {
        report.push_row(vec![
            len.to_string(),
            t.count.to_string(),
            t.violations.to_string(),
            t.min_slack.map_or(String::new(), |s| rat(&s)),
            t.selector_checked.to_string(),
            t.chose[0].to_string(),
            t.chose[1].to_string(),
            t.chose[2].to_string(),
            t.falsified.to_string(),
            t.acr.to_string(),
            t.acr_violations.to_string(),
        ]);
        total.merge(t);
    }

    for (k, v) in pair.to_kv().entries() {
        report.summarize(&format!("pair.{k}"), v);
    }
    report.summarize("alpha_used", rat(&alpha));
    report.summarize("words_scanned", total.count);
    report.summarize("prop422_violations", total.violations);
    report.summarize("min_slack", total.min_slack.map_or(String::new(), |s| rat(&s)));
    report.summarize("selector_checked", total.selector_checked);
    report.summarize("selector_falsified", total.falsified);
    report.summarize("acr_words", total.acr);
    report.summarize("acr_bound_violations", total.acr_violations);
    for (i, e) in total.examples.iter().enumerate() {
        report.summarize(&format!("example.{i}"), e);
    }
    report.check("prop422", total.violations == 0, format!("{} violations", total.violations));
    report.check("selector", total.falsified == 0, format!("{} falsified", total.falsified));
    report.check("acr_stable_norm", total.acr_violations == 0, format!("{} violations", total.acr_violations));
    Ok(report)
}
