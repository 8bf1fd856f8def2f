//! Deterministic point sets on `P(Rⁿ)` and seeded random matrices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::RealMatrix;

/// Quasi-uniform unit vectors representing `count` points of `P(Rⁿ)`.
///
/// `n = 2`: equally spaced angles in `[0, π)`. `n = 3`: a Fibonacci lattice on
/// the upper hemisphere. `n ≥ 4`: a Kronecker sequence pushed through
/// Box-Muller and normalized. Antipodes are identified by making the last
/// non-zero coordinate positive.
pub fn projective_grid(n: usize, count: usize) -> Vec<Vec<f64>> {
    let pts: Vec<Vec<f64>> = match n {
        2 => (0..count)
            .map(|i| {
                let t = std::f64::consts::PI * (i as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * i as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => kronecker_sphere(n, count),
    };
    pts.into_iter().map(canonical_sign).collect()
}

fn canonical_sign(mut v: Vec<f64>) -> Vec<f64> {
    if let Some(&last) = v.iter().rev().find(|x| **x != 0.0) {
        if last < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}

fn kronecker_sphere(n: usize, count: usize) -> Vec<Vec<f64>> {
    // generalized golden ratio: the positive root of x^(d+1) = x + 1
    let d = 2 * n.div_ceil(2);
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=d).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
    (0..count)
        .map(|i| {
            let u: Vec<f64> = alpha.iter().map(|a| (0.5 + a * (i as f64 + 1.0)).fract()).collect();
            let mut v = Vec::with_capacity(d);
            for pair in u.chunks(2) {
                let r = (-2.0 * (1.0 - pair[0]).ln()).sqrt();
                let t = 2.0 * std::f64::consts::PI * pair[1];
                v.push(r * t.cos());
                v.push(r * t.sin());
            }
            v.truncate(n);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / norm).collect()
        })
        .collect()
}

/// Entries uniform in `[-bound, bound]`, rescaled to determinant one.
pub fn random_sl<R: Rng>(n: usize, bound: f64, rng: &mut R) -> RealMatrix {
    loop {
        let mut m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-bound..=bound));
        let det = m.determinant();
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            m.row_mut(0).neg_mut();
        }
        m /= det.abs().powf(1.0 / n as f64);
        return RealMatrix(m);
    }
}

/// Haar-random element of `SO(n)`.
pub fn random_rotation<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// `k₁·exp(a)·k₂` with `k₁, k₂` Haar-random rotations and `a` a random
/// trace-zero diagonal with entries in `[-max_log, max_log]`.
pub fn random_kak<R: Rng>(n: usize, max_log: f64, rng: &mut R) -> RealMatrix {
    let a = random_log_diagonal(n, max_log, rng);
    let k1 = random_rotation(n, rng);
    let k2 = random_rotation(n, rng);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, a.iter().map(|x| x.exp())));
    RealMatrix(k1 * d * k2)
}

/// Positive diagonal element of `SL(n, R)`.
pub fn random_diagonal<R: Rng>(n: usize, max_log: f64, rng: &mut R) -> RealMatrix {
    let a = random_log_diagonal(n, max_log, rng);
    RealMatrix::diagonal(&a.iter().map(|x| x.exp()).collect::<Vec<_>>()).expect("n >= 2")
}

fn random_log_diagonal<R: Rng>(n: usize, max_log: f64, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-max_log..=max_log)).collect();
    let mean = raw.iter().sum::<f64>() / n as f64;
    raw.iter().map(|x| x - mean).collect()
}
