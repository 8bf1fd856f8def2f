//! Displacement geometry toolkit.
//!
//! Exact word algebra in free groups, the ping-pong machinery behind the
//! U-property for hyperbolic groups, real matrix projections on the symmetric
//! space of `SL(n, R)`, and exact arithmetic on `SL(n, Z)`: BFS word metrics,
//! root-depth bounds and contortion witnesses.

pub mod freewords;
pub mod hypcore;
pub mod intmat;
pub mod kv;
pub mod matgeo;
pub mod matrix_text;
pub mod zlattice;

/// Exact rational used for hyperbolicity constants and certificate margins.
pub type Rational = num_rational::Ratio<i64>;

/// Renders a rational as `p/q` (or `p` when integral).
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Renders a real with 12 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{:.11e}", x)
}
