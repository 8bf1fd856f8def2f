//! Almost cyclically reduced elements, ping-pong pairs and the U-property
//! bound `||g|| ≤ 3·sup([g]∞, [gu]∞, [gv]∞) + α` for hyperbolic groups,
//! evaluated exactly on free groups.
//!
//! The hyperbolicity constant δ is a parameter. It is never inferred from the
//! group; on free groups the statements hold at δ = 0.

use thiserror::Error;

use crate::freewords::{
    cyclic_length, gromov_product_e, stable_norm_free, translation_length_free, FreeGroupError, GromovProduct, Word,
};
use crate::kv::KvDoc;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypError {
    #[error(transparent)]
    Word(#[from] FreeGroupError),
    #[error("delta must be non-negative, got {0}")]
    NegativeDelta(Rational),
    #[error("{0} is not almost cyclically reduced")]
    NotAcr(String),
    #[error("chain hypothesis fails at index {0}")]
    ChainHypothesisViolated(usize),
    #[error("not a ping-pong pair: condition {condition} has margin {margin}")]
    NotPingPong { condition: u8, margin: Rational },
    #[error("no ping-pong pair (f^N, a f^N a^-1) with N <= {0}")]
    NotFound(u32),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("hypothesis ||g|| >= 3 sup(||u||, ||v||) + 100 delta fails: {lhs} < {rhs}")]
    LengthHypothesisViolated { lhs: usize, rhs: Rational },
    #[error("none of g, gu, gv is almost cyclically reduced for g = {0}")]
    LemmaFalsified(String),
    #[error("U-property constants need A > 0 and B >= 0")]
    InvalidConstants,
}

/// The δ of the four-point condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HyperbolicityParam(Rational);

impl HyperbolicityParam {
    pub fn new(delta: Rational) -> Result<Self, HypError> {
        if delta < Rational::from(0) {
            Err(HypError::NegativeDelta(delta))
        } else {
            Ok(HyperbolicityParam(delta))
        }
    }

    pub fn zero() -> Self {
        HyperbolicityParam(Rational::from(0))
    }

    pub fn value(self) -> Rational {
        self.0
    }
}

fn int(n: usize) -> Rational {
    Rational::from(n as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcrVerdict {
    pub element: Word,
    /// `⟨g, g⁻¹⟩`
    pub product: Rational,
    /// `||g||/3 − δ`
    pub threshold: Rational,
    pub is_acr: bool,
}

/// `⟨g, g⁻¹⟩ = ½(2||g|| − ||g²||)`, computed from the cyclic structure.
fn self_product(g: &Word) -> GromovProduct {
    // ||g²|| = ||g|| + cyclic_len(g) when the conjugator is peeled twice.
    let n = g.len();
    let doubled = 2 * n - (n + cyclic_length(g.letters()));
    GromovProduct::from_doubled(doubled as u64)
}

/// ACR test: `⟨g, g⁻¹⟩ ≤ ||g||/3 − δ`. Equality counts as ACR.
pub fn is_almost_cyclically_reduced(g: &Word, delta: HyperbolicityParam) -> AcrVerdict {
    let product = gromov_product_e(g, &g.inverse()).expect("same rank").value();
    let threshold = int(g.len()) / 3 - delta.value();
    AcrVerdict { element: g.clone(), product, threshold, is_acr: product <= threshold }
}

fn acr_fast(g: &Word, delta: Rational) -> bool {
    self_product(g).value() <= int(g.len()) / 3 - delta
}

/// Lower bound `[g]∞ ≥ ||g||/3` valid for almost cyclically reduced `g`.
pub fn stable_length_lower_bound(g: &Word, delta: HyperbolicityParam) -> Result<Rational, HypError> {
    if !is_almost_cyclically_reduced(g, delta).is_acr {
        return Err(HypError::NotAcr(g.to_string()));
    }
    Ok(int(g.len()) / 3)
}

/// Checks the chain lemma on a finite sequence: under the step hypothesis
/// `d(x_{n+2}, x_n) ≥ max(d(x_{n+2}, x_{n+1}), d(x_{n+1}, x_n)) + a + 2δ`,
/// returns whether `d(x_n, x_p) ≥ |n − p|·a` holds for every pair.
pub fn check_chain_lemma(points: &[Word], a: Rational, delta: HyperbolicityParam) -> Result<bool, HypError> {
    let two_delta = delta.value() * 2;
    for n in 0..points.len().saturating_sub(2) {
        let far = int(points[n + 2].distance(&points[n])?);
        let s1 = points[n + 2].distance(&points[n + 1])?;
        let s2 = points[n + 1].distance(&points[n])?;
        if far < int(s1.max(s2)) + a + two_delta {
            return Err(HypError::ChainHypothesisViolated(n));
        }
    }
    for n in 0..points.len() {
        for p in n + 1..points.len() {
            if int(points[n].distance(&points[p])?) < int(p - n) * a {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A certified ping-pong pair with the slack in each defining inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PingPongCertificate {
    pub u: Word,
    pub v: Word,
    pub delta: Rational,
    /// `min(||u||, ||v||) − 100δ`
    pub margin1: Rational,
    /// `½ min(||u||, ||v||) − 20δ − max ⟨u^±1, v^±1⟩`
    pub margin2: Rational,
    /// `min over w ∈ {u, v} of ||w||/2 − 20δ − ⟨w, w⁻¹⟩`
    pub margin3: Rational,
}

impl PingPongCertificate {
    /// `α = 3·max(||u||, ||v||) + 100δ`.
    pub fn alpha(&self) -> Rational {
        int(3 * self.u.len().max(self.v.len())) + self.delta * 100
    }

    pub fn to_kv(&self) -> KvDoc {
        let mut doc = KvDoc::new("ping_pong_certificate");
        doc.push("u", self.u.to_string());
        doc.push("v", self.v.to_string());
        doc.push("rank", self.u.rank());
        doc.push_rational("delta", &self.delta);
        doc.push_rational("margin1", &self.margin1);
        doc.push_rational("margin2", &self.margin2);
        doc.push_rational("margin3", &self.margin3);
        doc.push_rational("alpha", &self.alpha());
        doc
    }
}

pub fn certify_ping_pong(u: &Word, v: &Word, delta: HyperbolicityParam) -> Result<PingPongCertificate, HypError> {
    let d = delta.value();
    let short = int(u.len().min(v.len()));
    let margin1 = short - d * 100;
    if margin1 < Rational::from(0) {
        return Err(HypError::NotPingPong { condition: 1, margin: margin1 });
    }
    let (ui, vi) = (u.inverse(), v.inverse());
    let mut worst = GromovProduct::from_doubled(0);
    for x in [u, &ui] {
        for y in [v, &vi] {
            worst = worst.max(gromov_product_e(x, y)?);
        }
    }
    let margin2 = short / 2 - d * 20 - worst.value();
    if margin2 < Rational::from(0) {
        return Err(HypError::NotPingPong { condition: 2, margin: margin2 });
    }
    let slack = |w: &Word, wi: &Word| -> Result<Rational, HypError> {
        Ok(int(w.len()) / 2 - d * 20 - gromov_product_e(w, wi)?.value())
    };
    let margin3 = slack(u, &ui)?.min(slack(v, &vi)?);
    if margin3 < Rational::from(0) {
        return Err(HypError::NotPingPong { condition: 3, margin: margin3 });
    }
    Ok(PingPongCertificate { u: u.clone(), v: v.clone(), delta: d, margin1, margin2, margin3 })
}

/// Smallest `N ≤ n_max` with `(f^N, a·f^N·a⁻¹)` a ping-pong pair.
pub fn find_ping_pong_pair(
    f: &Word,
    a: &Word,
    delta: HyperbolicityParam,
    n_max: u32,
) -> Result<(u32, PingPongCertificate), HypError> {
    if f.rank() != a.rank() {
        return Err(FreeGroupError::RankMismatch(f.rank(), a.rank()).into());
    }
    if f.is_identity() {
        return Err(HypError::Precondition("f must be non-trivial"));
    }
    if translation_length_free(f) != f.len() {
        return Err(HypError::Precondition("f must be cyclically reduced"));
    }
    if a.len() != 1 {
        return Err(HypError::Precondition("a must be a single generator letter"));
    }
    if a.conjugate(f)? == *f {
        return Err(HypError::Precondition("a commutes with f"));
    }
    for n in 1..=n_max {
        let u = f.pow(n as i64);
        let v = a.conjugate(&u)?;
        if let Ok(cert) = certify_ping_pong(&u, &v, delta) {
            return Ok((n, cert));
        }
    }
    Err(HypError::NotFound(n_max))
}

fn check_length_hypothesis(g: &Word, pair: &PingPongCertificate) -> Result<(), HypError> {
    let rhs = pair.alpha();
    if int(g.len()) < rhs {
        return Err(HypError::LengthHypothesisViolated { lhs: g.len(), rhs });
    }
    Ok(())
}

/// Returns the first of `g, gu, gv` that is almost cyclically reduced.
pub fn select_acr(g: &Word, pair: &PingPongCertificate) -> Result<Word, HypError> {
    check_length_hypothesis(g, pair)?;
    if acr_fast(g, pair.delta) {
        return Ok(g.clone());
    }
    for w in [&pair.u, &pair.v] {
        let candidate = g.multiply(w)?;
        if acr_fast(&candidate, pair.delta) {
            return Ok(candidate);
        }
    }
    Err(HypError::LemmaFalsified(g.to_string()))
}

/// Which of the three candidates the selector picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AcrChoice {
    G,
    GU,
    GV,
}

/// Like [`select_acr`] but only reports which candidate was chosen.
pub fn select_acr_choice(g: &Word, pair: &PingPongCertificate) -> Result<AcrChoice, HypError> {
    check_length_hypothesis(g, pair)?;
    if acr_fast(g, pair.delta) {
        return Ok(AcrChoice::G);
    }
    if acr_fast(&g.multiply(&pair.u)?, pair.delta) {
        return Ok(AcrChoice::GU);
    }
    if acr_fast(&g.multiply(&pair.v)?, pair.delta) {
        return Ok(AcrChoice::GV);
    }
    Err(HypError::LemmaFalsified(g.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop422Outcome {
    /// `||g||`
    pub lhs: usize,
    /// `3·max([g]∞, [gu]∞, [gv]∞) + α`
    pub rhs: Rational,
    pub holds: bool,
    pub stable_norms: [usize; 3],
}

pub fn prop422_bound(g: &Word, pair: &PingPongCertificate) -> Result<Prop422Outcome, HypError> {
    prop422_bound_with_alpha(g, pair, pair.alpha())
}

/// Same bound with an explicit α; only for negative-control runs.
pub fn prop422_bound_with_alpha(
    g: &Word,
    pair: &PingPongCertificate,
    alpha: Rational,
) -> Result<Prop422Outcome, HypError> {
    let norms = [stable_norm_free(g), stable_norm_free(&g.multiply(&pair.u)?), stable_norm_free(&g.multiply(&pair.v)?)];
    let top = *norms.iter().max().unwrap();
    let rhs = int(3 * top) + alpha;
    let lhs = g.len();
    Ok(Prop422Outcome { lhs, rhs, holds: int(lhs) <= rhs, stable_norms: norms })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPropertyCheck {
    pub holds: bool,
    pub first_violation: Option<Word>,
    pub checked: u64,
}

/// Checks `||γ|| ≤ A·max_i ℓ(g_i γ) + B` over the whole ball of `radius`.
pub fn uproperty_witness_check(
    gens: &[Word],
    a: Rational,
    b: Rational,
    radius: usize,
) -> Result<UPropertyCheck, HypError> {
    if a <= Rational::from(0) || b < Rational::from(0) || gens.is_empty() {
        return Err(HypError::InvalidConstants);
    }
    let rank = gens[0].rank();
    let mut checked = 0;
    for gamma in crate::freewords::ball(rank, radius)? {
        checked += 1;
        let mut top = 0;
        for g in gens {
            top = top.max(translation_length_free(&g.multiply(&gamma)?));
        }
        if int(gamma.len()) > a * int(top) + b {
            return Ok(UPropertyCheck { holds: false, first_violation: Some(gamma), checked });
        }
    }
    Ok(UPropertyCheck { holds: true, first_violation: None, checked })
}
