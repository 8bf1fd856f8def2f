//! Integer polynomials: characteristic polynomials, cyclotomic factors and
//! certified root moduli.

use nalgebra::linalg::Schur;
use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{root_of_unity_orders, ZlatticeError};
use crate::intmat::IntMatrix;

/// Integer polynomial, coefficients from the constant term up. No trailing
/// zeros; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last() == Some(&1)
    }

    /// Exact division by a monic divisor, `None` when the remainder is
    /// non-zero.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(d.is_monic());
        let dd = d.degree().unwrap();
        let Some(pd) = self.degree() else { return Some(IntPoly(Vec::new())) };
        if pd < dd {
            return None;
        }
        let mut rem: Vec<i128> = self.0.iter().map(|&c| c as i128).collect();
        let mut quo = vec![0i128; pd - dd + 1];
        for k in (0..=pd - dd).rev() {
            let c = rem[k + dd];
            quo[k] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                rem[k + i] -= c * dc as i128;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return None;
        }
        let q: Option<Vec<i64>> = quo.into_iter().map(|c| i64::try_from(c).ok()).collect();
        q.map(IntPoly::new)
    }

    pub fn eval(&self, z: Complex<f64>) -> Complex<f64> {
        self.0.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.0.iter().enumerate().skip(1).map(|(k, &c)| c * k as i64).collect())
    }

    /// `Σ |a_k| r^k`, which bounds Horner's rounding error at `|z| = r`.
    fn abs_eval(&self, r: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * r + (c as f64).abs())
    }
}

/// `Φ_m`, built from `x^m − 1 = ∏_{d | m} Φ_d`.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1);
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    let mut p = IntPoly::new(p);
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        p = p.div_exact(&cyclotomic(d)).expect("Φ_d divides x^m − 1");
    }
    p
}

/// Divides out every `Φ_m` with `φ(m) ≤ n` as often as it divides `p`.
pub fn strip_cyclotomic(p: &IntPoly, n: usize) -> (IntPoly, Vec<u64>) {
    let mut rest = p.clone();
    let mut removed = Vec::new();
    for m in root_of_unity_orders(n) {
        let phi = cyclotomic(m);
        while rest.degree().is_some_and(|d| d >= phi.degree().unwrap()) {
            match rest.div_exact(&phi) {
                Some(q) => {
                    rest = q;
                    removed.push(m);
                }
                None => break,
            }
        }
    }
    (rest, removed)
}

/// `det(xI − A)` by Faddeev–LeVerrier (all divisions exact).
pub fn characteristic_polynomial(a: &IntMatrix) -> Result<IntPoly, ZlatticeError> {
    let n = a.n();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut mk = IntMatrix::identity(n).sub_identity();
    for k in 1..=n {
        let next = add_scaled(&(a * &mk), &IntMatrix::identity(n), &coeffs[n - k + 1]);
        let tr = (a * &next).trace();
        coeffs[n - k] = -tr / BigInt::from(k);
        mk = next;
    }
    let c: Option<Vec<i64>> = coeffs.iter().map(ToPrimitive::to_i64).collect();
    c.map(IntPoly::new).ok_or(ZlatticeError::CoefficientOverflow)
}

fn add_scaled(a: &IntMatrix, b: &IntMatrix, s: &BigInt) -> IntMatrix {
    let rows = a
        .rows()
        .into_iter()
        .zip(b.rows())
        .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(x, y)| x + y * s).collect())
        .collect();
    IntMatrix::new(rows).expect("square")
}

/// A root approximation and a radius whose closed disk holds exactly one
/// root (counted with multiplicity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedRoot {
    pub center: Complex<f64>,
    pub radius: f64,
}

impl IsolatedRoot {
    pub fn modulus_lower(&self) -> f64 {
        (self.center.norm() - self.radius) * (1.0 - 4.0 * f64::EPSILON)
    }

    pub fn modulus_upper(&self) -> f64 {
        (self.center.norm() + self.radius) * (1.0 + 4.0 * f64::EPSILON)
    }
}

/// Isolates every root of `p` in pairwise disjoint disks.
///
/// Centers come from the companion matrix and Newton polishing. Each disk
/// has radius `d·|p(z)|/|p'(z)|` with rounding error folded in, which always
/// contains a root; `d` disjoint such disks therefore hold one root each.
pub fn isolate_roots(p: &IntPoly) -> Result<Vec<IsolatedRoot>, ZlatticeError> {
    let d = p.degree().ok_or(ZlatticeError::Precondition("zero polynomial"))?;
    if !p.is_monic() {
        return Err(ZlatticeError::Precondition("polynomial must be monic"));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -(p.0[i] as f64);
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000).ok_or(ZlatticeError::PrecisionExhausted)?;
    let dp = p.derivative();
    let u = 4.0 * (d as f64 + 1.0) * f64::EPSILON;
    let mut roots = Vec::with_capacity(d);
    for mut z in schur.complex_eigenvalues().iter().copied() {
        for _ in 0..60 {
            let step = p.eval(z) / dp.eval(z);
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
                break;
            }
        }
        let r = z.norm();
        let num = p.eval(z).norm() + u * p.abs_eval(r);
        let den = dp.eval(z).norm() - u * dp.abs_eval(r);
        if den.is_nan() || den <= 0.0 {
            return Err(ZlatticeError::PrecisionExhausted);
        }
        roots.push(IsolatedRoot { center: z, radius: d as f64 * num / den * (1.0 + 8.0 * f64::EPSILON) });
    }
    for i in 0..d {
        for j in i + 1..d {
            if (roots[i].center - roots[j].center).norm() <= roots[i].radius + roots[j].radius {
                return Err(ZlatticeError::PrecisionExhausted);
            }
        }
    }
    Ok(roots)
}

/// Certified lower bound on the smallest root modulus strictly above one,
/// `None` when every root lies inside or on the unit circle. A disk that
/// meets the unit circle is an error.
pub fn min_modulus_above_one(p: &IntPoly) -> Result<Option<f64>, ZlatticeError> {
    let mut best: Option<f64> = None;
    for root in isolate_roots(p)? {
        let lo = root.modulus_lower();
        if lo > 1.0 {
            best = Some(best.map_or(lo, |b| b.min(lo)));
        } else if root.modulus_upper() >= 1.0 {
            return Err(ZlatticeError::PrecisionExhausted);
        }
    }
    Ok(best)
}

/// Certified upper bound on the spectral radius of `p`'s roots.
pub fn max_modulus_upper(p: &IntPoly) -> Result<f64, ZlatticeError> {
    Ok(isolate_roots(p)?.iter().map(IsolatedRoot::modulus_upper).fold(0.0, f64::max))
}

/// Every monic degree-`n` polynomial with constant term `constant` and the
/// other coefficients bounded by `bound` in absolute value, in lex order of
/// `(a_1, …, a_{n−1})`.
pub fn bounded_family(n: usize, bound: i64, constant: i64) -> impl Iterator<Item = IntPoly> {
    let free = n - 1;
    let width = (2 * bound + 1) as u64;
    let total = width.pow(free as u32);
    (0..total).map(move |mut idx| {
        let mut c = vec![0i64; n + 1];
        c[0] = constant;
        c[n] = 1;
        for slot in c.iter_mut().take(n).skip(1) {
            *slot = (idx % width) as i64 - bound;
            idx /= width;
        }
        IntPoly::new(c)
    })
}
