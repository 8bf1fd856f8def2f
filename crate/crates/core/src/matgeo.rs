//! Geometry of `SL(n, R)` acting on its symmetric space `SL(n, R)/SO(n)`.
//!
//! The Cartan projection `μ(g)` is the sorted vector of log singular values
//! and the Jordan projection `λ(g)` the sorted vector of log eigenvalue
//! moduli. Their Euclidean norms are the symmetric-space norm of `g` and its
//! displacement (translation length).

use nalgebra::linalg::Schur;
use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::intmat::IntMatrix;
use crate::kv::KvDoc;

pub mod sampling;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatGeoError {
    #[error("matrix must be square with n >= 2")]
    BadShape,
    #[error("determinant {0} is not 1 within tolerance")]
    NotSpecialLinear(f64),
    #[error("matrix is numerically singular")]
    SingularInput,
    #[error("eigenvalue solver did not converge")]
    EigenFailure,
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParameters(&'static str),
    #[error("no simple real eigenvalue of strictly largest modulus")]
    NoDominantEigenvalue,
    #[error("separation {separation} is below r = {r}")]
    SeparationFailed { separation: f64, r: f64 },
    #[error("contraction fails at {witness:?}: d(gx, x+) = {distance} > epsilon")]
    ContractionFailed { witness: Vec<f64>, distance: f64 },
}

/// A real `n×n` matrix, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<RealMatrix, MatGeoError> {
        if n < 2 || data.len() != n * n {
            return Err(MatGeoError::BadShape);
        }
        Ok(RealMatrix(DMatrix::from_row_slice(n, n, data)))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<RealMatrix, MatGeoError> {
        let n = rows.len();
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(MatGeoError::BadShape);
        }
        let data: Vec<f64> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_row_slice(n, &data)
    }

    /// Builds an element of `SL(n, R)`: `|det − 1| ≤ 1e-9·scaleⁿ`.
    pub fn special_linear<R: AsRef<[f64]>>(rows: &[R]) -> Result<RealMatrix, MatGeoError> {
        let m = Self::from_rows(rows)?;
        m.check_special_linear()?;
        Ok(m)
    }

    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<RealMatrix, MatGeoError> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(MatGeoError::BadShape);
        }
        Ok(RealMatrix(m))
    }

    pub fn from_int(m: &IntMatrix) -> Result<RealMatrix, MatGeoError> {
        Self::from_row_slice(m.n(), &m.to_f64())
    }

    pub fn identity(n: usize) -> RealMatrix {
        RealMatrix(DMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Result<RealMatrix, MatGeoError> {
        if values.len() < 2 {
            return Err(MatGeoError::BadShape);
        }
        Ok(RealMatrix(DMatrix::from_diagonal(&DVector::from_row_slice(values))))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    fn scale(&self) -> f64 {
        self.0.amax().max(1.0)
    }

    pub fn check_special_linear(&self) -> Result<(), MatGeoError> {
        let det = self.det();
        if (det - 1.0).abs() > 1e-9 * self.scale().powi(self.n() as i32) {
            return Err(MatGeoError::NotSpecialLinear(det));
        }
        Ok(())
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 * &other.0)
    }

    pub fn inverse(&self) -> Result<RealMatrix, MatGeoError> {
        self.0.clone().try_inverse().map(RealMatrix).ok_or(MatGeoError::SingularInput)
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix(self.0.transpose())
    }

    /// `(g − I)ⁿ = 0` within `1e-8·scaleⁿ`.
    pub fn is_unipotent(&self) -> bool {
        let n = self.n();
        let x = &self.0 - DMatrix::identity(n, n);
        let mut p = x.clone();
        for _ in 1..n {
            p = &p * &x;
        }
        p.amax() <= 1e-8 * self.scale().powi(n as i32)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.0 * DVector::from_row_slice(x)).iter().copied().collect()
    }

    /// Eigenvalues from the real Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex<f64>>, MatGeoError> {
        let schur = Schur::try_new(self.0.clone(), f64::EPSILON, 10_000).ok_or(MatGeoError::EigenFailure)?;
        Ok(schur.complex_eigenvalues().iter().copied().collect())
    }

    pub fn spectral_radius(&self) -> Result<f64, MatGeoError> {
        Ok(self.eigenvalues()?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Log singular values, non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanVector(Vec<f64>);

/// Log eigenvalue moduli, non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanVector(Vec<f64>);

impl CartanVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        euclid(&self.0)
    }
}

impl JordanVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        euclid(&self.0)
    }
}

pub fn cartan_projection(g: &RealMatrix) -> Result<CartanVector, MatGeoError> {
    let s = g.singular_values();
    let smin = *s.last().unwrap();
    if smin <= 0.0 || !smin.is_finite() || g.det().abs() <= 1e-12 * s[0].max(1.0).powi(g.n() as i32) {
        return Err(MatGeoError::SingularInput);
    }
    Ok(CartanVector(s.iter().map(|x| x.ln()).collect()))
}

pub fn jordan_projection(g: &RealMatrix) -> Result<JordanVector, MatGeoError> {
    if g.det().abs() <= 1e-12 * g.scale().powi(g.n() as i32) {
        return Err(MatGeoError::SingularInput);
    }
    if g.is_unipotent() {
        return Ok(JordanVector(vec![0.0; g.n()]));
    }
    let logs = g.eigenvalues()?.iter().map(|z| z.norm().ln()).collect();
    Ok(JordanVector(sorted_desc(logs)))
}

/// Matrix of `k×k` minors indexed by `k`-subsets in lexicographic order: the
/// action of `g` on the exterior power `Λᵏ Rⁿ`.
pub fn compound_matrix(g: &RealMatrix, k: usize) -> DMatrix<f64> {
    let subsets = k_subsets(g.n(), k);
    let m = subsets.len();
    DMatrix::from_fn(m, m, |r, c| {
        let rows = &subsets[r];
        let cols = &subsets[c];
        DMatrix::from_fn(k, k, |i, j| g.0[(rows[i], cols[j])]).determinant()
    })
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `log ||a^m||₂`, by repeated squaring with the scale tracked in log form.
fn log_norm_of_power(a: &DMatrix<f64>, mut m: u64) -> f64 {
    fn normalize(x: DMatrix<f64>, log: f64) -> (DMatrix<f64>, f64) {
        let s = x.amax();
        if s == 0.0 {
            return (x, f64::NEG_INFINITY);
        }
        (x / s, log + s.ln())
    }
    let (mut base, mut base_log) = normalize(a.clone(), 0.0);
    let n = a.nrows();
    let (mut acc, mut acc_log) = (DMatrix::<f64>::identity(n, n), 0.0);
    while m > 0 {
        if m & 1 == 1 {
            (acc, acc_log) = normalize(&acc * &base, acc_log + base_log);
        }
        m >>= 1;
        if m > 0 {
            (base, base_log) = normalize(&base * &base, 2.0 * base_log);
        }
    }
    let top = acc.svd(false, false).singular_values.max();
    acc_log + top.ln()
}

/// `μ(g^m)` without forming `g^m`: the sum of the top `k` log singular values
/// of `g^m` is the log norm of the `k`-th compound of `g` raised to `m`.
pub fn cartan_projection_of_power(g: &RealMatrix, m: u64) -> Result<CartanVector, MatGeoError> {
    if m == 0 {
        return Err(MatGeoError::InvalidParameters("power must be positive"));
    }
    cartan_projection(g)?;
    let n = g.n();
    let mut partial = vec![0.0; n + 1];
    for (k, slot) in partial.iter_mut().enumerate().take(n).skip(1) {
        *slot = log_norm_of_power(&compound_matrix(g, k), m);
    }
    partial[n] = m as f64 * g.det().abs().ln();
    Ok(CartanVector((1..=n).map(|k| partial[k] - partial[k - 1]).collect()))
}

/// `||g||_G = |μ(g)|`.
pub fn symmetric_space_norm(g: &RealMatrix) -> Result<f64, MatGeoError> {
    Ok(cartan_projection(g)?.norm())
}

/// `d_X(g) = |λ(g)|`; exactly zero for unipotent `g`.
pub fn symmetric_space_displacement(g: &RealMatrix) -> Result<f64, MatGeoError> {
    Ok(jordan_projection(g)?.norm())
}

/// Displacement of an integer matrix; unipotency is decided exactly first.
pub fn symmetric_space_displacement_int(g: &IntMatrix) -> Result<f64, MatGeoError> {
    if g.is_unipotent() {
        return Ok(0.0);
    }
    symmetric_space_displacement(&RealMatrix::from_int(g)?)
}

/// `|μ(g) − λ(g)|`.
pub fn benoist_gap(g: &RealMatrix) -> Result<f64, MatGeoError> {
    let mu = cartan_projection(g)?;
    let lambda = jordan_projection(g)?;
    let diff: Vec<f64> = mu.0.iter().zip(&lambda.0).map(|(a, b)| a - b).collect();
    Ok(euclid(&diff))
}

fn unit(x: &[f64]) -> Result<Vec<f64>, MatGeoError> {
    let n = euclid(x);
    if n == 0.0 || !n.is_finite() {
        return Err(MatGeoError::ZeroVector);
    }
    Ok(x.iter().map(|v| v / n).collect())
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Sine of the angle between the lines `Rx` and `Ry`.
pub fn projective_metric(x: &[f64], y: &[f64]) -> Result<f64, MatGeoError> {
    if x.len() != y.len() {
        return Err(MatGeoError::DimensionMismatch);
    }
    let (a, b) = (unit(x)?, unit(y)?);
    let c = dot(&a, &b);
    let r: Vec<f64> = a.iter().zip(&b).map(|(ai, bi)| ai - c * bi).collect();
    Ok(euclid(&r).min(1.0))
}

/// Distance from `[x]` to the projectivized hyperplane `normal^⊥`.
pub fn point_hyperplane_distance(x: &[f64], normal: &[f64]) -> Result<f64, MatGeoError> {
    if x.len() != normal.len() {
        return Err(MatGeoError::DimensionMismatch);
    }
    let (a, b) = (unit(x)?, unit(normal)?);
    Ok(dot(&a, &b).abs().min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProximalityCertificate {
    pub r: f64,
    pub epsilon: f64,
    pub attracting_point: Vec<f64>,
    pub repelling_hyperplane: Vec<f64>,
    pub separation: f64,
    pub contraction_margin: f64,
    pub samples_tested: usize,
}

impl ProximalityCertificate {
    pub fn to_kv(&self) -> KvDoc {
        let mut doc = KvDoc::new("proximality_certificate");
        doc.push_real("r", self.r);
        doc.push_real("epsilon", self.epsilon);
        doc.push_reals("attracting_point", &self.attracting_point);
        doc.push_reals("repelling_hyperplane_normal", &self.repelling_hyperplane);
        doc.push_real("separation", self.separation);
        doc.push_real("contraction_margin", self.contraction_margin);
        doc.push("samples_tested", self.samples_tested);
        doc
    }
}

/// Unit vector spanning the (numerically) one-dimensional kernel of `m`.
fn null_vector(m: DMatrix<f64>) -> Vec<f64> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let idx = svd.singular_values.imin();
    let v: Vec<f64> = v_t.row(idx).iter().copied().collect();
    // fix the sign so the representative is deterministic
    let pivot = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    v.iter().map(|x| if pivot < 0.0 { -x } else { *x }).collect()
}

/// Dominant eigenvalue when it is real, simple and strictly largest in modulus.
pub fn dominant_eigenvalue(g: &RealMatrix) -> Result<f64, MatGeoError> {
    let mut eig = g.eigenvalues()?;
    eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let rho = eig[0].norm();
    let tol = 1e-9 * rho;
    if eig[0].im.abs() > tol || eig[0].norm() - eig[1].norm() <= tol {
        return Err(MatGeoError::NoDominantEigenvalue);
    }
    Ok(eig[0].re)
}

/// Certifies `(r, ε)`-proximality: the attracting line `x₊` is the top
/// eigenvector, the repelling hyperplane `H` is the sum of the other
/// generalized eigenspaces (the kernel of the top left eigenvector), and the
/// contraction `d(x, P(H)) ≥ ε ⟹ d(gx, x₊) ≤ ε` is checked on a deterministic
/// quasi-uniform sample of `P(V)`.
pub fn certify_proximal(
    g: &RealMatrix,
    r: f64,
    epsilon: f64,
    samples: usize,
) -> Result<ProximalityCertificate, MatGeoError> {
    if !(epsilon > 0.0 && r > 2.0 * epsilon) {
        return Err(MatGeoError::InvalidParameters("need r > 2 epsilon > 0"));
    }
    if samples == 0 {
        return Err(MatGeoError::InvalidParameters("samples must be positive"));
    }
    let n = g.n();
    let lambda = dominant_eigenvalue(g)?;
    let shift = DMatrix::<f64>::identity(n, n) * lambda;
    let x_plus = null_vector(&g.0 - &shift);
    let normal = null_vector(g.0.transpose() - &shift);
    let separation = point_hyperplane_distance(&x_plus, &normal)?;
    if separation < r {
        return Err(MatGeoError::SeparationFailed { separation, r });
    }
    let mut margin = epsilon;
    let mut tested = 0;
    let mut worst: Option<(Vec<f64>, f64)> = None;
    for x in sampling::projective_grid(n, samples) {
        if point_hyperplane_distance(&x, &normal)? < epsilon {
            continue;
        }
        tested += 1;
        let d = projective_metric(&g.apply(&x), &x_plus)?;
        if epsilon - d < margin {
            margin = epsilon - d;
            worst = Some((x, d));
        }
    }
    if margin < 0.0 {
        let (witness, distance) = worst.unwrap();
        return Err(MatGeoError::ContractionFailed { witness, distance });
    }
    Ok(ProximalityCertificate {
        r,
        epsilon,
        attracting_point: x_plus,
        repelling_hyperplane: normal,
        separation,
        contraction_margin: margin,
        samples_tested: tested,
    })
}
