//! Exact arithmetic on `SL(n, Z)`.
//!
//! Word metrics over a finite symmetric generating set, translation-length
//! bounds, root-depth certificates, contortion witnesses through finite
//! quotients, and the conjugation identity in `SL(2, Z[1/p])`.

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::intmat::{IntMatrix, IntMatrixError};

mod contortion;
mod depth;
mod localized;
pub mod poly;
mod words;

pub use contortion::{contortion_witness, sl_order, ContortionWitness, DEFAULT_PRIME_CAP};
pub use depth::{
    centralizer_root_search, depth_root_bound, DepthBound, DepthBranch, RootSearch, DEFAULT_ROOT_CANDIDATES,
};
pub use localized::{zp_conjugation_identity, zp_power_conjugation, ZpConjugation, ZpRational};
pub use words::{
    enumerate_ball, translation_length_lower, translation_length_upper, translation_length_upper_with, word_length_bfs,
    BallTable, GeneratorSet, DEFAULT_MAX_BALL,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZlatticeError {
    #[error(transparent)]
    Matrix(#[from] IntMatrixError),
    #[error("matrices have different dimensions")]
    DimensionMismatch,
    #[error("input is a torsion element")]
    TorsionInput,
    #[error("dimension {0} unsupported")]
    DimensionUnsupported(usize),
    #[error("input is the identity")]
    IdentityInput,
    #[error("resource cap exceeded at {0} elements")]
    ResourceExceeded(u128),
    #[error("no prime modulus up to {0} separates the class representatives")]
    NoModulusFound(u64),
    #[error("t must be non-zero")]
    ZeroT,
    #[error("{0} is not in Z[1/{1}]")]
    NotLocalized(String, u64),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("invalid generating set: {0}")]
    InvalidGenerators(&'static str),
    #[error("root isolation ambiguous near the unit circle")]
    PrecisionExhausted,
    #[error("coefficient exceeds 64-bit range")]
    CoefficientOverflow,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub(crate) fn require_sl(m: &IntMatrix) -> Result<(), ZlatticeError> {
    let d = m.det();
    if d != BigInt::from(1) {
        return Err(IntMatrixError::NotSpecialLinear(d).into());
    }
    Ok(())
}

/// Euler's totient by trial division.
pub fn totient(mut m: u64) -> u64 {
    let mut phi = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Orders `m` of the roots of unity of degree at most `n`, i.e. `φ(m) ≤ n`.
///
/// `φ(m) ≥ √(m/2)`, so the search stops at `2n²`.
pub fn root_of_unity_orders(n: usize) -> Vec<u64> {
    let n = n as u64;
    (1..=2 * n * n).filter(|&m| totient(m) <= n).collect()
}

/// lcm of all `m` with `φ(m) ≤ n`: the `M` for which `C^M` is unipotent
/// whenever every eigenvalue of `C ∈ SL(n, Z)` has modulus one.
pub fn unipotence_exponent(n: usize) -> u64 {
    assert!((2..=20).contains(&n), "unipotence exponent supported for 2 ≤ n ≤ 20");
    root_of_unity_orders(n).into_iter().fold(1, |acc, m| acc.lcm(&m))
}

/// Every eigenvalue of `a` has modulus one, decided exactly via `a^M`
/// unipotent.
pub fn has_trivial_hyperbolic_part(a: &IntMatrix) -> bool {
    a.pow(unipotence_exponent(a.n())).is_unipotent()
}

/// `a^M = I` for the unipotence exponent `M`: the exact torsion test.
pub fn is_torsion(a: &IntMatrix) -> bool {
    a.pow(unipotence_exponent(a.n())).is_identity()
}
