//! Contortion witnesses: a power of `γ` that is trivial in a finite quotient
//! `SL(n, F_m)` avoids every conjugacy class whose image there is non-trivial.

use num_bigint::BigInt;

use super::{is_torsion, require_sl, ZlatticeError};
use crate::intmat::IntMatrix;
use crate::kv::KvDoc;

pub const DEFAULT_PRIME_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContortionWitness {
    pub gamma: IntMatrix,
    pub class_reps: Vec<IntMatrix>,
    pub modulus: u64,
    /// `|SL(n, F_m)|`.
    pub k: BigInt,
    pub gamma_k_mod: IntMatrix,
    pub reps_mod: Vec<IntMatrix>,
}

impl ContortionWitness {
    pub fn to_kv(&self) -> KvDoc {
        let mut kv = KvDoc::new("contortion_witness");
        kv.push("gamma", &self.gamma);
        for (i, (r, rm)) in self.class_reps.iter().zip(&self.reps_mod).enumerate() {
            kv.push(&format!("rep.{i}"), r);
            kv.push(&format!("rep.{i}.mod_m"), rm);
        }
        kv.push("modulus", self.modulus);
        kv.push("k", &self.k);
        kv.push("gamma_k_mod_m", &self.gamma_k_mod);
        kv.push("gamma_k_trivial_mod_m", self.gamma_k_mod.is_identity());
        kv
    }
}

/// `|SL(n, F_p)| = p^{n(n−1)/2} ∏_{j=2}^{n} (p^j − 1)` for a prime `p`.
pub fn sl_order(n: usize, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut order = p.pow((n * (n - 1) / 2) as u32);
    for j in 2..=n {
        order *= p.pow(j as u32) - 1;
    }
    order
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

pub fn contortion_witness(
    gamma: &IntMatrix,
    class_reps: &[IntMatrix],
    prime_cap: u64,
) -> Result<ContortionWitness, ZlatticeError> {
    require_sl(gamma)?;
    for r in class_reps {
        if r.n() != gamma.n() {
            return Err(ZlatticeError::DimensionMismatch);
        }
        require_sl(r)?;
        if r.is_identity() {
            return Err(ZlatticeError::Precondition("class representative is the identity"));
        }
    }
    if is_torsion(gamma) {
        return Err(ZlatticeError::TorsionInput);
    }
    let modulus = (2..=prime_cap)
        .filter(|&m| is_prime(m))
        .find(|&m| class_reps.iter().all(|r| !r.is_identity_mod(m)))
        .ok_or(ZlatticeError::NoModulusFound(prime_cap))?;
    let k = sl_order(gamma.n(), modulus);
    let gamma_k_mod = gamma.pow_mod_big(&k, modulus);
    if !gamma_k_mod.is_identity() {
        return Err(ZlatticeError::VerificationFailed(format!("γ^k ≢ I mod {modulus}")));
    }
    Ok(ContortionWitness {
        gamma: gamma.clone(),
        class_reps: class_reps.to_vec(),
        modulus,
        reps_mod: class_reps.iter().map(|r| r.reduce_mod(modulus)).collect(),
        k,
        gamma_k_mod,
    })
}
