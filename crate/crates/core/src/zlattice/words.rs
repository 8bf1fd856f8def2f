//! Word metric on `SL(n, Z)` by breadth-first search of the Cayley graph.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{require_sl, ZlatticeError};
use crate::intmat::IntMatrix;
use crate::matgeo::RealMatrix;

pub const DEFAULT_MAX_BALL: usize = 2_000_000;

/// Finite symmetric generating set with a certified bound `c` on the
/// operator norm of every generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    n: usize,
    elements: Vec<IntMatrix>,
    norm_bound: f64,
}

/// Rounds up to 12 decimals after a relative safety margin.
fn round_up(x: f64) -> f64 {
    (x * (1.0 + 1e-12) * 1e12).ceil() / 1e12
}

impl GeneratorSet {
    /// All `E_ij(±1)`, `i ≠ j`, ordered by `(i, j)` then `+1` before `−1`.
    pub fn elementary(n: usize) -> GeneratorSet {
        assert!(n >= 2);
        let mut elements = Vec::with_capacity(2 * n * (n - 1));
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                elements.push(IntMatrix::elementary(n, i, j, 1));
                elements.push(IntMatrix::elementary(n, i, j, -1));
            }
        }
        // top singular value of [[1, t], [0, 1]] is (|t| + √(t² + 4)) / 2
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        GeneratorSet { n, elements, norm_bound: round_up(golden) }
    }

    /// Arbitrary generators; the norm bound comes from an SVD of each one.
    pub fn new(elements: Vec<IntMatrix>) -> Result<GeneratorSet, ZlatticeError> {
        let n = elements.first().ok_or(ZlatticeError::InvalidGenerators("empty"))?.n();
        let mut norm = 0f64;
        for g in &elements {
            if g.n() != n {
                return Err(ZlatticeError::DimensionMismatch);
            }
            require_sl(g)?;
            if g.is_identity() {
                return Err(ZlatticeError::InvalidGenerators("identity included"));
            }
            let inv = g.inverse().expect("det 1");
            if !elements.contains(&inv) {
                return Err(ZlatticeError::InvalidGenerators("not closed under inversion"));
            }
            let real = RealMatrix::from_int(g).map_err(|_| ZlatticeError::CoefficientOverflow)?;
            norm = norm.max(real.singular_values()[0]);
        }
        Ok(GeneratorSet { n, elements, norm_bound: round_up(norm) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    /// `c` with `‖s‖ ≤ c` for every generator `s`.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn has_diagonal(&self) -> bool {
        self.elements.iter().any(IntMatrix::is_diagonal)
    }
}

/// Exact word lengths of every element of the ball of radius `R`, in BFS
/// order (generators applied on the right in generator order).
#[derive(Debug, Clone)]
pub struct BallTable {
    radius: u32,
    index: HashMap<IntMatrix, u32>,
    order: Vec<IntMatrix>,
}

impl BallTable {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn length(&self, m: &IntMatrix) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// Elements in BFS order, so lengths are non-decreasing.
    pub fn elements(&self) -> impl Iterator<Item = (&IntMatrix, u32)> {
        self.order.iter().map(|m| (m, self.index[m]))
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for l in self.index.values() {
            sizes[*l as usize] += 1;
        }
        sizes
    }
}

/// BFS from the identity; stops early once `target` is reached.
fn bfs(
    gens: &GeneratorSet,
    radius: u32,
    cap: usize,
    target: Option<&IntMatrix>,
) -> Result<(BallTable, Option<u32>), ZlatticeError> {
    let id = IntMatrix::identity(gens.n);
    let mut index = HashMap::from([(id.clone(), 0)]);
    let mut order = vec![id];
    if target.is_some_and(IntMatrix::is_identity) {
        return Ok((BallTable { radius, index, order }, Some(0)));
    }
    let mut start = 0;
    for l in 1..=radius {
        let end = order.len();
        for i in start..end {
            for s in &gens.elements {
                let next = &order[i] * s;
                if index.contains_key(&next) {
                    continue;
                }
                if target == Some(&next) {
                    return Ok((BallTable { radius, index, order }, Some(l)));
                }
                index.insert(next.clone(), l);
                order.push(next);
                if order.len() > cap {
                    return Err(ZlatticeError::ResourceExceeded(order.len() as u128));
                }
            }
        }
        start = end;
    }
    Ok((BallTable { radius, index, order }, None))
}

pub fn enumerate_ball(gens: &GeneratorSet, radius: u32, cap: usize) -> Result<BallTable, ZlatticeError> {
    bfs(gens, radius, cap, None).map(|(t, _)| t)
}

/// Exact `‖m‖_S` when it is at most `radius`, `None` otherwise.
pub fn word_length_bfs(
    m: &IntMatrix,
    gens: &GeneratorSet,
    radius: u32,
    cap: usize,
) -> Result<Option<u32>, ZlatticeError> {
    require_sl(m)?;
    if m.n() != gens.n {
        return Err(ZlatticeError::DimensionMismatch);
    }
    bfs(gens, radius, cap, Some(m)).map(|(_, l)| l)
}

/// `min ‖h m h⁻¹‖_S` over `h` in the ball of radius `r_conj`, looking
/// conjugates up in the ball of radius `r_word`. `None` when every conjugate
/// escapes the word ball.
pub fn translation_length_upper(
    m: &IntMatrix,
    gens: &GeneratorSet,
    r_conj: u32,
    r_word: u32,
    cap: usize,
) -> Result<Option<u32>, ZlatticeError> {
    require_sl(m)?;
    if m.n() != gens.n {
        return Err(ZlatticeError::DimensionMismatch);
    }
    let conj = enumerate_ball(gens, r_conj, cap)?;
    let words = enumerate_ball(gens, r_word, cap)?;
    Ok(translation_length_upper_with(m, &conj, &words))
}

/// [`translation_length_upper`] against precomputed tables.
pub fn translation_length_upper_with(m: &IntMatrix, conj: &BallTable, words: &BallTable) -> Option<u32> {
    let mut best: Option<u32> = None;
    for (h, _) in conj.elements() {
        let hinv = h.inverse().expect("table entries are unimodular");
        if let Some(l) = words.length(&(&(h * m) * &hinv)) {
            best = Some(best.map_or(l, |b| b.min(l)));
            if l == 0 {
                break;
            }
        }
    }
    best
}

/// `log_c(d₁)` with `d₁` the gcd of the entries of `m − I`.
///
/// Every conjugate `N` has `N − I ≡ 0 mod d₁`. A non-diagonal `N` then has
/// an off-diagonal entry of modulus at least `d₁`, hence `‖N‖ ≥ d₁ ≥ c^L`
/// fails for `L < log_c d₁`. A diagonal `N ≠ I` is `±1` on the diagonal and
/// forces `d₁ = 2`; it is not a generator unless the set has a diagonal
/// element, in which case the bound is capped at one.
pub fn translation_length_lower(m: &IntMatrix, gens: &GeneratorSet) -> Result<f64, ZlatticeError> {
    require_sl(m)?;
    if m.n() != gens.n {
        return Err(ZlatticeError::DimensionMismatch);
    }
    let d1 = m.gcd_minus_identity();
    if d1.is_zero() {
        return Err(ZlatticeError::IdentityInput);
    }
    let bound = ln_big(&d1) / gens.norm_bound().ln();
    if d1 == BigInt::from(2) && gens.has_diagonal() {
        return Ok(bound.min(1.0));
    }
    Ok(bound)
}

/// Natural log of a positive big integer without overflowing `f64`.
fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    if x.is_one() {
        return 0.0;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}
