//! Exact square integer matrices.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntMatrixError {
    #[error("matrix must be square and non-empty")]
    NotSquare,
    #[error("determinant is {0}, expected 1")]
    NotSpecialLinear(BigInt),
}

/// Row-major `n×n` matrix over `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix, IntMatrixError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(IntMatrixError::NotSquare);
        }
        Ok(IntMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Like [`IntMatrix::new`] but also requires `det = 1`.
    pub fn new_sl(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix, IntMatrixError> {
        let m = Self::new(rows)?;
        let d = m.det();
        if !d.is_one() {
            return Err(IntMatrixError::NotSpecialLinear(d));
        }
        Ok(m)
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<IntMatrix, IntMatrixError> {
        Self::new(rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    /// Elementary matrix `E_ij(t)`: identity plus `t` at row `i`, column `j`
    /// (1-based, `i ≠ j`).
    pub fn elementary(n: usize, i: usize, j: usize, t: impl Into<BigInt>) -> IntMatrix {
        assert!(i != j && (1..=n).contains(&i) && (1..=n).contains(&j));
        let mut m = Self::identity(n);
        m.entries[(i - 1) * n + (j - 1)] = t.into();
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn sub_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.entries[i * self.n + i] -= 1;
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        IntMatrix { n, entries }
    }

    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.n;
        let entries = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        IntMatrix { n: n - 1, entries }
    }

    /// Inverse of a unimodular matrix (`det = ±1`), `None` otherwise.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let d = self.det();
        if !d.abs().is_one() {
            return None;
        }
        let n = self.n;
        if n == 1 {
            return Some(self.clone());
        }
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det();
                let c = if (i + j) % 2 == 0 { c } else { -c };
                entries[i * n + j] = c * &d;
            }
        }
        Some(IntMatrix { n, entries })
    }

    /// `(A − I)ⁿ = 0`, decided exactly.
    pub fn is_unipotent(&self) -> bool {
        self.sub_identity().pow(self.n as u64).is_zero()
    }

    /// gcd of the entries of `A − I`; zero for the identity.
    pub fn gcd_minus_identity(&self) -> BigInt {
        self.sub_identity().entries.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn reduce_mod(&self, m: u64) -> IntMatrix {
        let m = BigInt::from(m);
        IntMatrix { n: self.n, entries: self.entries.iter().map(|x| x.mod_floor(&m)).collect() }
    }

    pub fn is_identity_mod(&self, m: u64) -> bool {
        self.reduce_mod(m).is_identity()
    }

    pub fn mul_mod(&self, other: &IntMatrix, m: u64) -> IntMatrix {
        (self * other).reduce_mod(m)
    }

    pub fn pow_mod(&self, mut k: u64, m: u64) -> IntMatrix {
        let mut base = self.reduce_mod(m);
        let mut acc = Self::identity(self.n).reduce_mod(m);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn pow_mod_big(&self, k: &BigInt, m: u64) -> IntMatrix {
        assert!(!k.is_negative(), "negative exponent");
        let mut acc = Self::identity(self.n).reduce_mod(m);
        for i in (0..k.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if k.bit(i) {
                acc = acc.mul_mod(self, m);
            }
        }
        acc
    }

    /// Block-diagonal embedding `diag(self, I)` into dimension `n`.
    pub fn pad_to(&self, n: usize) -> IntMatrix {
        assert!(n >= self.n);
        let mut m = Self::identity(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.get(i, j).clone();
            }
        }
        m
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * &rhs.entries[k * n + j];
                }
            }
        }
        IntMatrix { n, entries }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
