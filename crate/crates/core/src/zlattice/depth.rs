//! Root-depth certificates for non-torsion elements of `SL(n, Z)`, `n ≤ 3`.
//!
//! Hyperbolic elements: a `k`-th root `B` (`k ≥ 2`) has spectral radius at
//! most `K^{1/2}`, so its characteristic coefficients obey `|a_m| ≤ K1` and
//! its eigenvalue of modulus above one is at least `b`, the least such
//! modulus over that finite polynomial family. `b^k ≤ K` then bounds `k`.
//!
//! Elements with every eigenvalue on the unit circle: with `X = A^M − I`
//! and `j` the largest power with `X^j ≠ 0`, any root `B^k = A` gives the
//! unipotent root `B^M = exp(log(A^M)/k)` whose `j`-th log power
//! `X^j/k^j` is integral, so `k^j` divides every entry of `X^j`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{
    bounded_family, characteristic_polynomial, isolate_roots, max_modulus_upper, min_modulus_above_one,
    strip_cyclotomic,
};
use super::{require_sl, unipotence_exponent, ZlatticeError};
use crate::fmt_real;
use crate::intmat::IntMatrix;
use crate::kv::KvDoc;

pub const DEFAULT_ROOT_CANDIDATES: u128 = 5_000_000;

/// Beyond this the divisibility scan for the unipotent branch falls back to
/// the plain `k^j ≤ g` bound.
const DIVISOR_SCAN_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthBranch {
    Hyperbolic,
    /// `nilpotency` is `j`, `gcd` the gcd of the entries of `X^j`, and
    /// `max_root` the largest `k` with `k^j | gcd`.
    TrivialHyperbolicPart {
        nilpotency: u32,
        gcd: BigInt,
        max_root: u64,
    },
}

/// Exhaustive search for `B ∈ SL(n, Z)` with `|b_ij| ≤ box_bound` and
/// `B^k = A`, restricted to the centralizer of `A` (which every root lies in).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSearch {
    pub box_bound: i64,
    pub exponents: RangeInclusive<u32>,
    pub centralizer_dim: usize,
    pub candidates: u128,
    pub unimodular_candidates: u64,
    pub roots: Vec<(u32, IntMatrix)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthBound {
    pub a: IntMatrix,
    /// Largest eigenvalue modulus, and a certified upper bound on it.
    pub k: f64,
    pub k_upper: f64,
    pub k1: i64,
    pub family_size: u64,
    /// Certified lower bound on the least root modulus above one over the
    /// family; `None` when no polynomial in it has such a root.
    pub b: Option<f64>,
    pub q: Option<u32>,
    pub m: u64,
    pub depth: u32,
    pub branch: DepthBranch,
    pub search: RootSearch,
}

impl DepthBound {
    /// No root found by the box search contradicts the certified depth.
    pub fn is_consistent(&self) -> bool {
        self.search.roots.iter().all(|(k, _)| *k < self.depth)
    }

    pub fn to_kv(&self) -> KvDoc {
        let mut kv = KvDoc::new("depth_bound");
        kv.push("matrix", &self.a);
        kv.push("n", self.a.n());
        match &self.branch {
            DepthBranch::Hyperbolic => kv.push("branch", "hyperbolic"),
            DepthBranch::TrivialHyperbolicPart { nilpotency, gcd, max_root } => {
                kv.push("branch", "trivial_hyperbolic_part");
                kv.push("nilpotency", nilpotency);
                kv.push("log_power_gcd", gcd);
                kv.push("max_root_index", max_root);
            }
        }
        kv.push_real("K", self.k);
        kv.push_real("K_upper", self.k_upper);
        kv.push("K1", self.k1);
        kv.push("family_size", self.family_size);
        kv.push("b", self.b.map_or("none".to_string(), fmt_real));
        kv.push("q", self.q.map_or("none".to_string(), |q| q.to_string()));
        kv.push("M", self.m);
        kv.push("depth", self.depth);
        let s = &self.search;
        kv.push("box_bound", s.box_bound);
        kv.push("search_exponents", format!("{}..{}", s.exponents.start(), s.exponents.end()));
        kv.push("centralizer_dim", s.centralizer_dim);
        kv.push("candidates", s.candidates);
        kv.push("unimodular_candidates", s.unimodular_candidates);
        kv.push("roots_found", s.roots.len());
        let roots: Vec<String> = s.roots.iter().map(|(k, b)| format!("{k}:{b}")).collect();
        kv.push("roots", roots.join("; "));
        kv.push("consistent", self.is_consistent());
        kv
    }
}

/// `max_{1≤m<n} ⌊C(n,m)·ρ^m⌋` with `ρ = √K`: bounds every non-constant,
/// non-leading characteristic coefficient of a `k`-th root, `k ≥ 2`.
pub fn coefficient_bound(n: usize, k_upper: f64) -> i64 {
    let rho = k_upper.sqrt();
    (1..n).map(|m| (binomial(n, m) as f64 * rho.powi(m as i32) * (1.0 + 1e-9)).floor() as i64).max().unwrap_or(0)
}

fn binomial(n: usize, m: usize) -> u64 {
    (0..m).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

pub fn depth_root_bound(
    a: &IntMatrix,
    box_bound: Option<i64>,
    max_candidates: u128,
) -> Result<DepthBound, ZlatticeError> {
    let n = a.n();
    if !(2..=3).contains(&n) {
        return Err(ZlatticeError::DimensionUnsupported(n));
    }
    require_sl(a)?;
    let m = unipotence_exponent(n);
    let am = a.pow(m);
    if am.is_identity() {
        return Err(ZlatticeError::TorsionInput);
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };

    let (k, k_upper, branch) = if am.is_unipotent() {
        (1.0, 1.0, unipotent_branch(&am))
    } else {
        let (rest, _) = strip_cyclotomic(&characteristic_polynomial(a)?, n);
        let k = isolate_roots(&rest)?.iter().map(|r| r.center.norm()).fold(0.0, f64::max);
        (k, max_modulus_upper(&rest)?.max(k), DepthBranch::Hyperbolic)
    };

    let k1 = coefficient_bound(n, k_upper);
    let mut b: Option<f64> = None;
    let mut family_size = 0u64;
    for p in bounded_family(n, k1, sign) {
        family_size += 1;
        let (rest, _) = strip_cyclotomic(&p, n);
        if let Some(lo) = min_modulus_above_one(&rest)? {
            b = Some(b.map_or(lo, |x| x.min(lo)));
        }
    }
    let q = b.map(|b| (1..).find(|&q| b.powi(q as i32) > k_upper).expect("b > 1"));

    let depth = match &branch {
        DepthBranch::Hyperbolic => q.unwrap_or(2).max(2),
        DepthBranch::TrivialHyperbolicPart { max_root, .. } => {
            u32::try_from(max_root + 1).map_err(|_| ZlatticeError::CoefficientOverflow)?.max(2)
        }
    };
    let box_bound = box_bound.unwrap_or(k.ceil() as i64 + 1);
    let search = centralizer_root_search(a, box_bound, 2..=depth + 1, max_candidates)?;
    Ok(DepthBound { a: a.clone(), k, k_upper, k1, family_size, b, q, m, depth, branch, search })
}

fn unipotent_branch(am: &IntMatrix) -> DepthBranch {
    let x = am.sub_identity();
    let mut power = x.clone();
    let mut j = 1u32;
    loop {
        let next = &power * &x;
        if next.is_zero() {
            break;
        }
        power = next;
        j += 1;
    }
    let gcd = power.entries().iter().fold(BigInt::zero(), |g, e| g.gcd(e));
    let root = gcd.nth_root(j);
    let max_root = match root.to_u64() {
        Some(r) if r <= DIVISOR_SCAN_LIMIT => {
            (1..=r).rev().find(|&k| (&gcd % BigInt::from(k).pow(j)).is_zero()).expect("k = 1 divides")
        }
        Some(r) => r,
        None => u64::MAX,
    };
    DepthBranch::TrivialHyperbolicPart { nilpotency: j, gcd, max_root }
}

/// Reduced row echelon form of the map `B ↦ BA − AB`: for each pivot
/// variable, an integer denominator and integer coefficients on the free
/// variables.
struct Centralizer {
    free: Vec<usize>,
    pivots: Vec<(usize, i128, Vec<i128>)>,
}

fn centralizer(a: &IntMatrix) -> Result<Centralizer, ZlatticeError> {
    let n = a.n();
    let v = n * n;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(v);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![BigRational::zero(); v];
            for k in 0..n {
                row[i * n + k] += BigRational::from_integer(a.get(k, j).clone());
                row[k * n + j] -= BigRational::from_integer(a.get(i, k).clone());
            }
            rows.push(row);
        }
    }
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..v {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..v).filter(|c| !pivot_cols.contains(c)).collect();
    let mut pivots = Vec::with_capacity(pivot_cols.len());
    for (row, &pc) in rows.iter().zip(&pivot_cols) {
        let den = free.iter().fold(BigInt::one(), |l, &f| l.lcm(row[f].denom()));
        let coeffs: Option<Vec<i128>> =
            free.iter().map(|&f| (-(row[f].numer() * (&den / row[f].denom()))).to_i128()).collect();
        let coeffs = coeffs.ok_or(ZlatticeError::CoefficientOverflow)?;
        pivots.push((pc, den.to_i128().ok_or(ZlatticeError::CoefficientOverflow)?, coeffs));
    }
    Ok(Centralizer { free, pivots })
}

/// All `B` in the box with `det B = 1` and `B^k = A` for `k` in `exponents`,
/// one `(k, B)` entry per matching exponent.
pub fn centralizer_root_search(
    a: &IntMatrix,
    box_bound: i64,
    exponents: RangeInclusive<u32>,
    max_candidates: u128,
) -> Result<RootSearch, ZlatticeError> {
    if box_bound < 0 {
        return Err(ZlatticeError::Precondition("box bound must be non-negative"));
    }
    let n = a.n();
    let cz = centralizer(a)?;
    let width = 2 * box_bound as u128 + 1;
    let candidates = (0..cz.free.len()).try_fold(1u128, |acc, _| acc.checked_mul(width)).unwrap_or(u128::MAX);
    if candidates > max_candidates {
        return Err(ZlatticeError::ResourceExceeded(candidates));
    }
    let mut vals = vec![0i64; n * n];
    let mut free_vals = vec![-box_bound; cz.free.len()];
    let mut roots = Vec::new();
    let mut unimodular = 0u64;
    for _ in 0..candidates {
        if fill(&cz, &free_vals, box_bound, &mut vals) {
            let rows: Vec<&[i64]> = vals.chunks(n).collect();
            let b = IntMatrix::from_i64(&rows).expect("square");
            if b.det().is_one() {
                unimodular += 1;
                let mut p = b.clone();
                for k in 2..=*exponents.end() {
                    p = &p * &b;
                    if k >= *exponents.start() && p == *a {
                        roots.push((k, b.clone()));
                    }
                }
            }
        }
        for x in free_vals.iter_mut() {
            if *x < box_bound {
                *x += 1;
                break;
            }
            *x = -box_bound;
        }
    }
    Ok(RootSearch {
        box_bound,
        exponents,
        centralizer_dim: cz.free.len(),
        candidates,
        unimodular_candidates: unimodular,
        roots,
    })
}

/// Writes the candidate into `vals`; false when a pivot entry is not an
/// integer or leaves the box.
fn fill(cz: &Centralizer, free_vals: &[i64], box_bound: i64, vals: &mut [i64]) -> bool {
    for (&f, &x) in cz.free.iter().zip(free_vals) {
        vals[f] = x;
    }
    for (pc, den, coeffs) in &cz.pivots {
        let num: i128 = coeffs.iter().zip(free_vals).map(|(c, &x)| c * x as i128).sum();
        if num % den != 0 {
            return false;
        }
        let v = num / den;
        if v.abs() > box_bound as i128 {
            return false;
        }
        vals[*pc] = v as i64;
    }
    true
}
