//! Tanh-sinh (double-exponential) quadrature on (0, 1).
//!
//! The substitution t = 1/(1 + e^{−π sinh u}) clusters nodes at both ends
//! doubly exponentially, which absorbs algebraic endpoint singularities.
//! Nodes carry both t and 1 − t, each computed without cancellation, so
//! integrands singular at t = 1 can be evaluated accurately near it.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_LEVEL: u32 = 4;
pub const MAX_LEVEL: u32 = 14;
const U_MAX: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub level: u32,
    pub abs_tol: f64,
}

impl QuadratureSpec {
    pub fn new(level: u32, abs_tol: f64) -> Result<Self> {
        if !(MIN_LEVEL..=MAX_LEVEL).contains(&level) {
            return Err(Error::Domain(format!(
                "quadrature level {level} outside {MIN_LEVEL}..={MAX_LEVEL}"
            )));
        }
        if !(abs_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerance must be positive, got {abs_tol}"
            )));
        }
        Ok(Self {
            scheme: Scheme::TanhSinh,
            level,
            abs_tol,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::TanhSinh,
            level: 10,
            abs_tol: 1e-8,
        }
    }
}

/// One quadrature node: abscissa t, its complement 1 − t, and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub one_minus_t: f64,
    pub weight: f64,
    /// Index on the finest grid of this level; even indices form level − 1.
    pub k: i64,
}

/// Node spacing at `level`: h = 2^{3−level}.
pub fn step(level: u32) -> f64 {
    (2.0f64).powi(3 - level as i32)
}

fn build(level: u32) -> Vec<Node> {
    let h = step(level);
    let kmax = (U_MAX / h).round() as i64;
    let mut out = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let u = k as f64 * h;
        let y = 0.5 * PI * u.sinh();
        // t = 1/(1+e^{−2y}), 1−t = 1/(1+e^{2y})
        let (t, omt) = if y >= 0.0 {
            let e = (-2.0 * y).exp();
            (1.0 / (1.0 + e), e / (1.0 + e))
        } else {
            let e = (2.0 * y).exp();
            (e / (1.0 + e), 1.0 / (1.0 + e))
        };
        if t <= 0.0 || omt <= 0.0 {
            continue;
        }
        let weight = h * PI * u.cosh() * t * omt;
        out.push(Node {
            t,
            one_minus_t: omt,
            weight,
            k,
        });
    }
    out
}

/// Nodes for `level`, built once and shared.
pub fn nodes(level: u32) -> Arc<Vec<Node>> {
    static CACHE: [OnceLock<Arc<Vec<Node>>>; (MAX_LEVEL + 1) as usize] =
        [const { OnceLock::new() }; (MAX_LEVEL + 1) as usize];
    let level = level.clamp(MIN_LEVEL, MAX_LEVEL);
    CACHE[level as usize]
        .get_or_init(|| Arc::new(build(level)))
        .clone()
}

/// Sums at `level` and `level − 1` from one set of integrand values.
fn paired_sums(values: &[Complex64], nodes: &[Node]) -> (Complex64, Complex64) {
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    for (v, n) in values.iter().zip(nodes) {
        let term = *v * n.weight;
        fine += term;
        if n.k % 2 == 0 {
            coarse += 2.0 * term;
        }
    }
    (fine, coarse)
}

/// Integrand values at the nodes of a level; produced by callers that
/// reuse one set of density values for many integrals.
pub fn integrate_values(values: &[Complex64], level: u32, abs_tol: f64) -> Result<Complex64> {
    let ns = nodes(level);
    debug_assert_eq!(values.len(), ns.len());
    let (fine, coarse) = paired_sums(values, &ns);
    let difference = (fine - coarse).norm();
    if difference > abs_tol || !fine.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            difference,
            tolerance: abs_tol,
        });
    }
    Ok(fine)
}

/// ∫₀¹ f(t, 1−t) dt at `spec.level`, checked against `spec.level − 1`.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    let ns = nodes(spec.level);
    let values: Vec<Complex64> = ns.iter().map(|n| f(n.t, n.one_minus_t)).collect();
    integrate_values(&values, spec.level, spec.abs_tol)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    integrate(|t, s| Complex64::new(f(t, s), 0.0), spec).map(|v| v.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(level: u32) -> QuadratureSpec {
        QuadratureSpec::new(level, 1e-9).unwrap()
    }

    #[test]
    fn polynomials_and_total_weight() {
        let one = integrate_real(|_, _| 1.0, &spec(8)).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let cube = integrate_real(|t, _| t * t * t, &spec(8)).unwrap();
        assert!((cube - 0.25).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫ t^{−1/2}(1−t)^{−1/2} dt = π
        let v = integrate_real(|t, s| 1.0 / (t * s).sqrt(), &spec(10)).unwrap();
        assert!((v - PI).abs() < 1e-12, "{v}");
        // ∫ t^{−0.9} dt = 10
        let v =
            integrate_real(|t, _| t.powf(-0.9), &QuadratureSpec::new(12, 1e-6).unwrap()).unwrap();
        assert!((v - 10.0).abs() < 1e-8, "{v}");
        // ∫ log t dt = −1
        let v = integrate_real(|t, _| t.ln(), &spec(10)).unwrap();
        assert!((v + 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_integrand() {
        // ∫ dt/(1 − t z) = −log(1−z)/z
        let z = Complex64::new(-2.0, 3.0);
        let v = integrate(|t, _| 1.0 / (1.0 - t * z), &spec(9)).unwrap();
        let exact = -(1.0 - z).ln() / z;
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = QuadratureSpec::new(4, 1e-15).unwrap();
        let r = integrate_real(|t, _| t.powf(-0.99), &tight);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn coarse_level_is_a_subset() {
        let fine = nodes(7);
        let coarse = nodes(6);
        let evens: Vec<f64> = fine.iter().filter(|n| n.k % 2 == 0).map(|n| n.t).collect();
        let c: Vec<f64> = coarse.iter().map(|n| n.t).collect();
        assert_eq!(evens, c);
    }

    #[test]
    fn rejects_bad_level_and_tolerance() {
        assert!(QuadratureSpec::new(2, 1e-8).is_err());
        assert!(QuadratureSpec::new(8, 0.0).is_err());
    }
}
