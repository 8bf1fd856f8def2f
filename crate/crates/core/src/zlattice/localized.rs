//! `SL(2, Z[1/p])`: conjugating `u(1) = [[1, 1], [0, 1]]` by a diagonal
//! element gives `u(t²)`, so `u(1)^{p^{2k}}` is conjugate to `u(1)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ZlatticeError;
use crate::kv::KvDoc;

/// Element of `Z[1/p]`: a rational whose reduced denominator is a power of
/// `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpRational {
    value: BigRational,
    p: u64,
}

impl ZpRational {
    pub fn new(value: BigRational, p: u64) -> Result<ZpRational, ZlatticeError> {
        if p < 2 {
            return Err(ZlatticeError::Precondition("p must be at least 2"));
        }
        let mut d = value.denom().clone();
        let pb = BigInt::from(p);
        while (&d % &pb).is_zero() {
            d /= &pb;
        }
        if !d.is_one() {
            return Err(ZlatticeError::NotLocalized(value.to_string(), p));
        }
        Ok(ZpRational { value, p })
    }

    /// `p^k` for any integer `k`.
    pub fn power_of_p(p: u64, k: i32) -> Result<ZpRational, ZlatticeError> {
        let base = BigRational::from_integer(BigInt::from(p));
        let v = if k >= 0 { num_traits::pow(base, k as usize) } else { num_traits::pow(base.recip(), (-k) as usize) };
        Self::new(v, p)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

pub type Mat2 = [[BigRational; 2]; 2];

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn fmt2(m: &Mat2) -> String {
    format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpConjugation {
    pub t: BigRational,
    pub conjugator: Mat2,
    pub result: Mat2,
    /// `result = [[1, t²], [0, 1]]`, checked exactly.
    pub verified: bool,
}

impl ZpConjugation {
    pub fn to_kv(&self) -> KvDoc {
        let mut kv = KvDoc::new("zp_conjugation");
        kv.push("t", &self.t);
        kv.push("conjugator", fmt2(&self.conjugator));
        kv.push("result", fmt2(&self.result));
        kv.push("verified", self.verified);
        kv
    }
}

impl fmt::Display for ZpConjugation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} u(1) {}^-1 = {}", fmt2(&self.conjugator), fmt2(&self.conjugator), fmt2(&self.result))
    }
}

/// `diag(t, t⁻¹) · u(1) · diag(t⁻¹, t)`, computed and compared exactly.
pub fn zp_conjugation_identity(t: &BigRational) -> Result<ZpConjugation, ZlatticeError> {
    if t.is_zero() {
        return Err(ZlatticeError::ZeroT);
    }
    let zero = BigRational::zero;
    let one = BigRational::one;
    let d = [[t.clone(), zero()], [zero(), t.recip()]];
    let d_inv = [[t.recip(), zero()], [zero(), t.clone()]];
    let u = [[one(), one()], [zero(), one()]];
    let result = mul2(&mul2(&d, &u), &d_inv);
    let expected = [[one(), t * t], [zero(), one()]];
    Ok(ZpConjugation { t: t.clone(), verified: result == expected, conjugator: d, result })
}

/// The identity at `t = p^k` with every entry checked to lie in `Z[1/p]`:
/// `u(1)^{p^{2k}}` is conjugate to `u(1)` in `SL(2, Z[1/p])`.
pub fn zp_power_conjugation(p: u64, k: i32) -> Result<ZpConjugation, ZlatticeError> {
    let t = ZpRational::power_of_p(p, k)?;
    let c = zp_conjugation_identity(t.value())?;
    for x in c.conjugator.iter().chain(c.result.iter()).flatten() {
        ZpRational::new(x.clone(), p)?;
    }
    Ok(c)
}
