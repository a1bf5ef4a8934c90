//! Gauss hypergeometric function ₂F₁(a,b;c;z) on the slit plane
//! Λ = ℂ ∖ [1, +∞), its boundary values from above on (1, +∞), and its
//! behaviour as z → 1.
//!
//! Evaluation picks, for each point, the Kummer variable with the smallest
//! modulus among z, z/(z−1), 1/z, 1−z and 1/(1−z), and sums the
//! corresponding hypergeometric series:
//!
//! | variable   | formula                                              |
//! |------------|------------------------------------------------------|
//! | z          | defining power series                                |
//! | z/(z−1)    | Pfaff transformation                                 |
//! | 1/z        | connection at infinity, or its logarithmic form when b−a ∈ ℕ₀ |
//! | 1−z        | connection at one                                    |
//! | 1/(1−z)    | connection at infinity composed with Pfaff           |
//!
//! Near e^{±iπ/3} every variable has modulus close to one; there the
//! hypergeometric ODE is integrated by Taylor steps from |z| = 1/2.
//! Parameter triples where a connection coefficient has a Γ pole that the
//! logarithmic formula does not cover are evaluated as the symmetric
//! Richardson limit in the offending parameter.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{
    cos_pi, digamma, gamma, is_near_integer, is_nonpositive_integer, nearest_integer, rgamma,
    ComplexValue, POLE_TOLERANCE,
};

const EPS: f64 = f64::EPSILON;
const SERIES_MAX_TERMS: usize = 5000;
/// Preferred radius: any variable with modulus below this is used first.
const PREFERRED_RADIUS: f64 = 0.5;
/// Largest modulus for which a transformed series is accepted.
const MAX_RADIUS: f64 = 0.8;
/// Distance to an integer below which a connection coefficient is considered
/// too close to a Γ pole for direct evaluation.
pub const NON_GENERIC_GUARD: f64 = 1e-6;
const PERTURBATION: f64 = 1e-3;
const MAX_PERTURBATION_DEPTH: u8 = 3;
/// Relative accuracy assumed for one Γ or ψ evaluation.
const GAMMA_REL_ERR: f64 = 1e-14;

/// Parameters (a, b, c) of ₂F₁(a,b;c;·).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGParams {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
}

impl HGParams {
    /// Rejects c within [`POLE_TOLERANCE`] of a non-positive integer.
    pub fn new(a: ComplexValue, b: ComplexValue, c: ComplexValue) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::Parameter(format!(
                "c = {c} is a non-positive integer"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
        )
    }

    /// Same function with a and b exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    pub fn is_real(&self) -> bool {
        [self.a, self.b, self.c]
            .iter()
            .all(|v| v.im.abs() <= POLE_TOLERANCE)
    }

    /// Δ = c − a − b.
    pub fn delta(&self) -> ComplexValue {
        self.c - self.a - self.b
    }

    fn with(&self, a: ComplexValue, b: ComplexValue, c: ComplexValue) -> Self {
        Self { a, b, c }
    }
}

/// Which formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Pfaff,
    ConnectionInfinity,
    ConnectionOne,
    LogDegenerate,
    EpsilonLimit,
    TaylorContinuation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: ComplexValue,
    pub abs_error_estimate: f64,
    pub method: Method,
}

impl EvalResult {
    fn new(value: ComplexValue, err: f64, method: Method) -> Self {
        Self {
            value,
            abs_error_estimate: err.max(0.0),
            method,
        }
    }
}

/// Behaviour of F(z) as z → 1 inside Λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneLimitKind {
    /// F(1⁻) = coefficient.
    Finite,
    /// F ≈ coefficient · log(1/(1−z)).
    LogDivergent,
    /// F ≈ coefficient · (1−z)^exponent with exponent = Δ < 0.
    PowerDivergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneLimitClass {
    pub kind: OneLimitKind,
    pub coefficient: ComplexValue,
    /// Δ for [`OneLimitKind::PowerDivergent`], otherwise 0.
    pub exponent: f64,
}

/// A point of Λ (or of the upper edge of the cut) together with an
/// accurately known 1 − z.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Point {
    z: Complex64,
    omz: Complex64,
    upper_edge: bool,
}

impl Point {
    pub(crate) fn new(z: Complex64) -> Result<Self> {
        Self::with_complement(z, Complex64::one() - z)
    }

    pub(crate) fn with_complement(z: Complex64, omz: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument {z}")));
        }
        if omz.re <= 0.0 && z.im.abs() < 1e-300 {
            return Err(Error::Slit(format!("{z}")));
        }
        Ok(Self {
            z,
            omz,
            upper_edge: false,
        })
    }

    /// x + i0⁺ with x > 1, given x − 1.
    pub(crate) fn upper_edge(x: f64, x_minus_1: f64) -> Self {
        Self {
            z: Complex64::new(x, 0.0),
            omz: Complex64::new(-x_minus_1, 0.0),
            upper_edge: true,
        }
    }

    fn log_omz(&self) -> Complex64 {
        if self.upper_edge {
            Complex64::new((-self.omz.re).ln(), -PI)
        } else {
            self.omz.ln()
        }
    }

    fn log_negz(&self) -> Complex64 {
        if self.upper_edge {
            Complex64::new(self.z.re.ln(), -PI)
        } else {
            (-self.z).ln()
        }
    }
}

/// Value with an absolute error bound.
#[derive(Debug, Clone, Copy)]
struct Approx {
    value: Complex64,
    err: f64,
}

impl Approx {
    fn scaled(self, k: Complex64, k_rel_err: f64) -> Self {
        let v = self.value * k;
        Self {
            value: v,
            err: self.err * k.norm() + v.norm() * k_rel_err,
        }
    }
}

impl std::ops::Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        let v = self.value + o.value;
        Approx {
            value: v,
            err: self.err + o.err + EPS * (self.value.norm() + o.value.norm()),
        }
    }
}

/// Partial sums of the defining series, stopped once three consecutive
/// terms fall below 1e−16 of the running sum.
fn hyp_series(a: Complex64, b: Complex64, c: Complex64, w: Complex64) -> Result<Approx> {
    let mut term = Complex64::one();
    let mut sum = Complex64::one();
    let mut abs_sum = 1.0;
    let mut small = 0;
    let wn = w.norm();
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= ratio * w;
        sum += term;
        let tn = term.norm();
        abs_sum += tn;
        if !sum.is_finite() {
            return Err(Error::Pole(format!(
                "series coefficient at c + {n} = {}",
                c + nf
            )));
        }
        if tn == 0.0 {
            return Ok(Approx {
                value: sum,
                err: 4.0 * EPS * abs_sum,
            });
        }
        if tn <= 1e-16 * sum.norm() || tn <= 1e-17 * abs_sum {
            small += 1;
            if small >= 3 {
                let r = (ratio.norm() * wn).min(0.99).max(wn.min(0.99));
                let tail = tn * r / (1.0 - r);
                return Ok(Approx {
                    value: sum,
                    err: tail + 4.0 * EPS * abs_sum,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// Degree of the polynomial when a or b is a non-positive integer.
fn terminating_degree(a: Complex64, b: Complex64) -> Option<usize> {
    let deg = |x: Complex64| is_nonpositive_integer(x).then(|| (-x.re).round() as usize);
    match (deg(a), deg(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (d, None) | (None, d) => d,
    }
}

fn polynomial(a: Complex64, b: Complex64, c: Complex64, z: Complex64, degree: usize) -> Approx {
    let mut term = Complex64::one();
    let mut sum = Complex64::one();
    let mut abs_sum = 1.0;
    for n in 0..degree {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        abs_sum += term.norm();
    }
    Approx {
        value: sum,
        err: 4.0 * EPS * abs_sum * (degree as f64 + 1.0),
    }
}

/// ₂F₁ by the defining series; requires |z| ≤ 0.8.
pub fn f21_series(p: &HGParams, z: ComplexValue) -> Result<EvalResult> {
    if z.norm() > 0.8 {
        return Err(Error::Domain(format!(
            "|z| = {} exceeds the series radius 0.8",
            z.norm()
        )));
    }
    let s = hyp_series(p.a, p.b, p.c, z)?;
    Ok(EvalResult::new(s.value, s.err, Method::Series))
}

/// ₂F₁ continued to the slit plane Λ with principal branches.
pub fn f21_lambda(p: &HGParams, z: ComplexValue) -> Result<EvalResult> {
    let pt = Point::new(z)?;
    eval_point(p, &pt, 0)
}

/// ₂F₁ at z with a separately supplied 1 − z, for points where 1 − z is
/// far more accurate than z (e.g. near the branch point).
pub(crate) fn f21_with_complement(
    p: &HGParams,
    z: Complex64,
    omz: Complex64,
) -> Result<EvalResult> {
    let pt = Point::with_complement(z, omz)?;
    eval_point(p, &pt, 0)
}

/// Real ₂F₁ at t ∈ (0, 1) given t and 1 − t.
pub(crate) fn f21_unit_interval(p: &HGParams, t: f64, one_minus_t: f64) -> Result<f64> {
    f21_with_complement(p, Complex64::new(t, 0.0), Complex64::new(one_minus_t, 0.0))
        .map(|r| r.value.re)
}

/// Boundary value F⁺(x) = lim_{ε→0⁺} F(x + iε) on the cut, x > 1.
pub fn f21_upper_boundary(p: &HGParams, x: f64) -> Result<EvalResult> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "boundary value needs x > 1, got {x}"
        )));
    }
    eval_point(p, &Point::upper_edge(x, x - 1.0), 0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    Series,
    Pfaff,
    Infinity,
    One,
    InfinityPfaff,
    Taylor,
}

fn choose_region(p: &HGParams, pt: &Point) -> Region {
    let rz = pt.z.norm();
    let romz = pt.omz.norm();
    let tr2_ok = !is_near_integer(p.b - p.a, NON_GENERIC_GUARD);
    let candidates: Vec<(Region, f64)> = if pt.upper_edge {
        vec![(Region::Infinity, 1.0 / rz), (Region::One, romz)]
    } else {
        let mut v = vec![
            (Region::Series, rz),
            (Region::Pfaff, rz / romz),
            (Region::Infinity, 1.0 / rz),
            (Region::One, romz),
        ];
        if tr2_ok {
            v.push((Region::InfinityPfaff, 1.0 / romz));
        }
        v
    };
    if let Some(&(r, _)) = candidates.iter().find(|(_, rho)| *rho <= PREFERRED_RADIUS) {
        return r;
    }
    let (best, rho) = candidates
        .iter()
        .copied()
        .fold((Region::Taylor, f64::INFINITY), |acc, c| {
            if c.1 < acc.1 {
                c
            } else {
                acc
            }
        });
    if rho <= MAX_RADIUS {
        best
    } else {
        Region::Taylor
    }
}

fn eval_point(p: &HGParams, pt: &Point, depth: u8) -> Result<EvalResult> {
    if pt.z == Complex64::zero() {
        return Ok(EvalResult::new(Complex64::one(), 0.0, Method::Series));
    }
    if let Some(deg) = terminating_degree(p.a, p.b) {
        let s = polynomial(p.a, p.b, p.c, pt.z, deg);
        return Ok(EvalResult::new(s.value, s.err, Method::Series));
    }
    // Euler: F = (1−z)^{c−a−b} F(c−a, c−b; c; z) with a terminating right side.
    if let Some(deg) = terminating_degree(p.c - p.a, p.c - p.b) {
        let s = polynomial(p.c - p.a, p.c - p.b, p.c, pt.z, deg);
        let k = (p.delta() * pt.log_omz()).exp();
        let r = s.scaled(
            k,
            8.0 * EPS * (1.0 + p.delta().norm() * pt.log_omz().norm()),
        );
        return Ok(EvalResult::new(r.value, r.err, Method::Pfaff));
    }
    let region = choose_region(p, pt);
    let first = eval_region(p, pt, region, depth);
    // Large-parameter cancellation: retry along the ODE when the transform is poor.
    let poor = match &first {
        Ok(r) => r.abs_error_estimate > 1e-10 * r.value.norm().max(1e-300),
        Err(e) => e.is_numerical(),
    };
    if poor && region != Region::Taylor && !pt.upper_edge && depth == 0 {
        if let Ok(t) = eval_region(p, pt, Region::Taylor, depth) {
            match &first {
                Ok(r) if r.abs_error_estimate <= t.abs_error_estimate => {}
                _ => return Ok(t),
            }
        }
    }
    first
}

fn eval_region(p: &HGParams, pt: &Point, region: Region, depth: u8) -> Result<EvalResult> {
    match region {
        Region::Series => {
            let s = hyp_series(p.a, p.b, p.c, pt.z)?;
            Ok(EvalResult::new(s.value, s.err, Method::Series))
        }
        Region::Pfaff => {
            let w = -pt.z / pt.omz;
            let s = hyp_series(p.a, p.c - p.b, p.c, w)?;
            let k = (-p.a * pt.log_omz()).exp();
            let r = s.scaled(k, 8.0 * EPS * (1.0 + p.a.norm() * pt.log_omz().norm()));
            Ok(EvalResult::new(r.value, r.err, Method::Pfaff))
        }
        Region::Infinity => eval_infinity(p, pt, depth),
        Region::One => {
            if is_near_integer(p.delta(), POLE_TOLERANCE) {
                let r = connection_one_log(p, pt)?;
                Ok(EvalResult::new(r.value, r.err, Method::LogDegenerate))
            } else if is_near_integer(p.delta(), NON_GENERIC_GUARD) {
                epsilon_limit(p, pt, Perturb::C, depth)
            } else {
                let r = connection_one(p, pt)?;
                Ok(EvalResult::new(r.value, r.err, Method::ConnectionOne))
            }
        }
        Region::InfinityPfaff => {
            let r = connection_infinity_pfaff(p, pt)?;
            Ok(EvalResult::new(r.value, r.err, Method::ConnectionInfinity))
        }
        Region::Taylor => {
            let r = taylor_continuation(p, pt)?;
            Ok(EvalResult::new(r.value, r.err, Method::TaylorContinuation))
        }
    }
}

fn eval_infinity(p: &HGParams, pt: &Point, depth: u8) -> Result<EvalResult> {
    let d = p.b - p.a;
    if is_near_integer(d, POLE_TOLERANCE) {
        let q = if d.re >= 0.0 { *p } else { p.swapped() };
        if is_near_integer(q.c - q.a, NON_GENERIC_GUARD) {
            return epsilon_limit(p, pt, Perturb::C, depth);
        }
        let m = (q.b - q.a).re.round() as usize;
        let r = log_degenerate(q.a, m, q.c, pt)?;
        Ok(EvalResult::new(r.value, r.err, Method::LogDegenerate))
    } else if is_near_integer(d, NON_GENERIC_GUARD) {
        epsilon_limit(p, pt, Perturb::A, depth)
    } else {
        let r = connection_infinity(p, pt)?;
        Ok(EvalResult::new(r.value, r.err, Method::ConnectionInfinity))
    }
}

/// F = Γ(c)Γ(b−a)/(Γ(b)Γ(c−a)) (−z)^{−a} F(a, 1−c+a; 1−b+a; 1/z) + (a ↔ b).
fn connection_infinity(p: &HGParams, pt: &Point) -> Result<Approx> {
    let (a, b, c) = (p.a, p.b, p.c);
    let w = 1.0 / pt.z;
    let lz = pt.log_negz();
    let gc = gamma(c)?;
    let term = |a: Complex64, b: Complex64| -> Result<Approx> {
        let coef = gc * gamma(b - a)? * rgamma(b) * rgamma(c - a);
        if coef == Complex64::zero() {
            return Ok(Approx {
                value: Complex64::zero(),
                err: 0.0,
            });
        }
        let s = hyp_series(a, 1.0 - c + a, 1.0 - b + a, w)?;
        let k = coef * (-a * lz).exp();
        Ok(s.scaled(k, 4.0 * GAMMA_REL_ERR + 8.0 * EPS * a.norm() * lz.norm()))
    };
    Ok(term(a, b)? + term(b, a)?)
}

/// Same as [`connection_infinity`] after a Pfaff step; the series variable is 1/(1−z).
fn connection_infinity_pfaff(p: &HGParams, pt: &Point) -> Result<Approx> {
    let (a, b, c) = (p.a, p.b, p.c);
    let w = 1.0 / pt.omz;
    let lo = pt.log_omz();
    let gc = gamma(c)?;
    let term = |a: Complex64, b: Complex64| -> Result<Approx> {
        let coef = gc * gamma(b - a)? * rgamma(b) * rgamma(c - a);
        if coef == Complex64::zero() {
            return Ok(Approx {
                value: Complex64::zero(),
                err: 0.0,
            });
        }
        let s = hyp_series(a, c - b, 1.0 + a - b, w)?;
        let k = coef * (-a * lo).exp();
        Ok(s.scaled(k, 4.0 * GAMMA_REL_ERR + 8.0 * EPS * a.norm() * lo.norm()))
    };
    Ok(term(a, b)? + term(b, a)?)
}

/// F = Γ(c)Γ(Δ)/(Γ(c−a)Γ(c−b)) F(a,b;1−Δ;1−z)
///   + (1−z)^Δ Γ(c)Γ(−Δ)/(Γ(a)Γ(b)) F(c−a,c−b;1+Δ;1−z).
fn connection_one(p: &HGParams, pt: &Point) -> Result<Approx> {
    let (a, b, c) = (p.a, p.b, p.c);
    let d = p.delta();
    let w = pt.omz;
    let gc = gamma(c)?;
    let mut total = Approx {
        value: Complex64::zero(),
        err: 0.0,
    };
    let k1 = gc * gamma(d)? * rgamma(c - a) * rgamma(c - b);
    if k1 != Complex64::zero() {
        let s = hyp_series(a, b, 1.0 - d, w)?;
        total = total + s.scaled(k1, 4.0 * GAMMA_REL_ERR);
    }
    let k2 = gc * gamma(-d)? * rgamma(a) * rgamma(b);
    if k2 != Complex64::zero() {
        let lo = pt.log_omz();
        let s = hyp_series(c - a, c - b, 1.0 + d, w)?;
        let k = k2 * (d * lo).exp();
        total = total + s.scaled(k, 4.0 * GAMMA_REL_ERR + 8.0 * EPS * d.norm() * lo.norm());
    }
    Ok(total)
}

/// Logarithmic connection at one for c − a − b = m ∈ ℤ. For m < 0 Euler's
/// transformation F = (1−z)^m F(c−a, c−b; c; z) reduces to m ≥ 0, where
///
/// F(a,b;a+b+m;z) = Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n(b)_n/(n!(1−m)_n) (1−z)^n
///   − (−1)^m Γ(c)/(Γ(a)Γ(b)) (1−z)^m Σ_n (a+m)_n(b+m)_n/(n!(n+m)!) (1−z)^n
///     [log(1−z) − ψ(n+1) − ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)].
fn connection_one_log(p: &HGParams, pt: &Point) -> Result<Approx> {
    let d = p.delta().re.round();
    if d < 0.0 {
        let q = p.with(p.c - p.a, p.c - p.b, p.c);
        // polar form: 1/omz underflows through norm_sqr for |omz| < 1e−154
        let k = Complex64::from_polar(pt.omz.norm().powi(d as i32), pt.omz.arg() * d);
        return Ok(connection_one_log(&q, pt)?.scaled(k, 4.0 * EPS * (-d)));
    }
    let m = d as usize;
    let mf = d;
    let (a, b, c) = (p.a, p.b, p.c);
    let w = pt.omz;
    let gc = gamma(c)?;

    let mut finite = Complex64::zero();
    let mut finite_abs = 0.0;
    if m > 0 {
        let k = gc * factorial(m - 1) * rgamma(a + mf) * rgamma(b + mf);
        let mut t = Complex64::one();
        for n in 0..m {
            let nf = n as f64;
            finite += t;
            finite_abs += t.norm();
            t *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
        }
        finite *= k;
        finite_abs *= k.norm();
    }
    let finite = Approx {
        value: finite,
        err: 4.0 * (EPS + GAMMA_REL_ERR) * finite_abs,
    };

    let lo = pt.log_omz();
    let mut coef = Complex64::new(1.0 / factorial(m), 0.0);
    let mut psi_n1 = digamma(Complex64::one())?;
    let mut psi_nm1 = digamma(Complex64::new(mf + 1.0, 0.0))?;
    let mut psi_anm = digamma(a + mf)?;
    let mut psi_bnm = digamma(b + mf)?;
    let mut sum = Complex64::zero();
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut converged = false;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let bracket = lo - psi_n1 - psi_nm1 + psi_anm + psi_bnm;
        let t = coef * bracket;
        sum += t;
        let tn = t.norm();
        abs_sum += coef.norm()
            * (lo.norm() + psi_n1.norm() + psi_nm1.norm() + psi_anm.norm() + psi_bnm.norm());
        if (tn == 0.0 && coef == Complex64::zero())
            || tn <= 1e-16 * sum.norm()
            || tn <= 1e-17 * abs_sum
        {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_anm += 1.0 / (a + mf + nf);
        psi_bnm += 1.0 / (b + mf + nf);
    }
    if !converged {
        return Err(Error::NonConvergence {
            terms: SERIES_MAX_TERMS,
        });
    }
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
    let k = sign * gc * rgamma(a) * rgamma(b) * w.powi(m as i32);
    let log_part = Approx {
        value: sum * k,
        err: 8.0 * (EPS + GAMMA_REL_ERR) * abs_sum * k.norm(),
    };
    Ok(finite + log_part)
}

/// Logarithmic connection at infinity for b = a + m, m ∈ ℕ₀, c − a ∉ ℤ.
fn log_degenerate(a: Complex64, m: usize, c: Complex64, pt: &Point) -> Result<Approx> {
    let w = 1.0 / pt.z;
    let lz = pt.log_negz();
    let mf = m as f64;
    let pref = gamma(c)? * rgamma(a + mf);

    // Finite part: Σ_{n<m} (m−n−1)! (a)_n / (n! Γ(c−a−n)) z^{−n}.
    let mut finite = Complex64::zero();
    let mut finite_abs = 0.0;
    let mut poch = Complex64::one();
    let mut wn = Complex64::one();
    let mut n_fact = 1.0;
    for n in 0..m {
        let nf = n as f64;
        let fact = factorial(m - n - 1);
        let t = fact * poch / n_fact * rgamma(c - a - nf) * wn;
        finite += t;
        finite_abs += t.norm();
        poch *= a + nf;
        n_fact *= nf + 1.0;
        wn *= w;
    }
    let k_finite = pref * (-a * lz).exp();
    let finite = Approx {
        value: finite * k_finite,
        err: 4.0 * (EPS + GAMMA_REL_ERR) * finite_abs * k_finite.norm(),
    };

    // Logarithmic part.
    let mut coef =
        crate::scalar::pochhammer(a, m) * crate::scalar::pochhammer(1.0 - c + a, m) / factorial(m);
    let mut psi_1mn = digamma(Complex64::new(1.0 + mf, 0.0))?;
    let mut psi_1n = digamma(Complex64::one())?;
    let mut psi_amn = digamma(a + mf)?;
    let mut psi_camn = digamma(c - a - mf)?;
    let mut sum = Complex64::zero();
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut converged = false;
    let mut wpow = Complex64::one();
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let cn = psi_1mn + psi_1n - psi_amn - psi_camn;
        let t = coef * (lz + cn) * wpow;
        sum += t;
        let tn = t.norm();
        abs_sum += tn * (1.0 + 4.0 * cn.norm());
        if tn == 0.0 && n > 0 {
            converged = true;
            break;
        }
        if tn <= 1e-16 * sum.norm() || tn <= 1e-17 * abs_sum {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
        coef *= (a + mf + nf) * (1.0 - c + a + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0));
        wpow *= w;
        psi_1mn += 1.0 / (1.0 + mf + nf);
        psi_1n += 1.0 / (1.0 + nf);
        psi_amn += 1.0 / (a + mf + nf);
        psi_camn -= 1.0 / (c - a - mf - nf - 1.0);
    }
    if !converged {
        return Err(Error::NonConvergence {
            terms: SERIES_MAX_TERMS,
        });
    }
    let k_log = pref * rgamma(c - a) * (-(a + mf) * lz).exp();
    let log_part = Approx {
        value: sum * k_log,
        err: 8.0 * (EPS + GAMMA_REL_ERR) * abs_sum * k_log.norm(),
    };
    Ok(finite + log_part)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Integrates the hypergeometric ODE by Taylor steps along the ray from
/// 0.5·z/|z| to z.
///
/// The fundamental matrix Φ of the linear system is carried along so that
/// the initial and per-step rounding errors can be propagated to the end:
/// err ≤ |Φ_end|·(e₀ + Σ_k |Φ_k⁻¹|·ℓ_k), first row.
fn taylor_continuation(p: &HGParams, pt: &Point) -> Result<Approx> {
    let (a, b, c) = (p.a, p.b, p.c);
    let z = pt.z;
    let mut zc = z * (0.5 / z.norm());
    let f0 = hyp_series(a, b, c, zc)?;
    let d0 = hyp_series(a + 1.0, b + 1.0, c + 1.0, zc)?.scaled(a * b / c, EPS);
    let mut state = [f0.value, d0.value];
    // columns of Φ: solutions started from (1, 0) and (0, 1)
    let mut phi = [
        [Complex64::one(), Complex64::zero()],
        [Complex64::zero(), Complex64::one()],
    ];
    let mut acc = [f0.err, d0.err];
    for _ in 0..200 {
        let remaining = z - zc;
        if remaining.norm() <= 1e-15 * z.norm() {
            let err = phi[0][0].norm() * acc[0] + phi[0][1].norm() * acc[1];
            return Ok(Approx {
                value: state[0],
                err: err + 4.0 * EPS * state[0].norm(),
            });
        }
        let radius = 0.5 * zc.norm().min((1.0 - zc).norm());
        let h = if remaining.norm() <= radius {
            remaining
        } else {
            remaining * (radius / remaining.norm())
        };
        let step = taylor_step(a, b, c, zc, state[0], state[1], h)?;
        let s1 = taylor_step(a, b, c, zc, phi[0][0], phi[1][0], h)?;
        let s2 = taylor_step(a, b, c, zc, phi[0][1], phi[1][1], h)?;
        state = [step.value, step.derivative];
        phi = [[s1.value, s2.value], [s1.derivative, s2.derivative]];
        let det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0];
        let local = [8.0 * EPS * step.abs_value, 8.0 * EPS * step.abs_derivative];
        // |Φ⁻¹| = |adj Φ| / |det Φ|
        let inv_det = 1.0 / det.norm();
        acc[0] += inv_det * (phi[1][1].norm() * local[0] + phi[0][1].norm() * local[1]);
        acc[1] += inv_det * (phi[1][0].norm() * local[0] + phi[0][0].norm() * local[1]);
        zc += h;
    }
    Err(Error::NonConvergence { terms: 200 })
}

struct TaylorStep {
    value: Complex64,
    derivative: Complex64,
    abs_value: f64,
    abs_derivative: f64,
}

fn taylor_step(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z0: Complex64,
    f: Complex64,
    df: Complex64,
    h: Complex64,
) -> Result<TaylorStep> {
    let q = z0 * (1.0 - z0);
    let lin = c - (a + b + 1.0) * z0;
    let (mut dk, mut dk1) = (f, df);
    let mut hk = Complex64::one();
    let mut val = f + df * h;
    let mut der = df;
    let mut abs_value = f.norm() + (df * h).norm();
    let mut abs_derivative = df.norm();
    let scale = f.norm() + df.norm() * h.norm();
    let mut small = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let dk2 = ((kf + a) * (kf + b) * dk - ((1.0 - 2.0 * z0) * kf + lin) * (kf + 1.0) * dk1)
            / (q * (kf + 1.0) * (kf + 2.0));
        hk *= h;
        // order k+2
        let t = dk2 * hk * h;
        let td = dk2 * (kf + 2.0) * hk;
        val += t;
        der += td;
        abs_value += t.norm();
        abs_derivative += td.norm();
        if t.norm() <= 1e-17 * scale.max(val.norm())
            && td.norm() * h.norm() <= 1e-17 * scale.max(val.norm())
        {
            small += 1;
            if small >= 3 {
                return Ok(TaylorStep {
                    value: val,
                    derivative: der,
                    abs_value,
                    abs_derivative,
                });
            }
        } else {
            small = 0;
        }
        dk = dk1;
        dk1 = dk2;
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

#[derive(Debug, Clone, Copy)]
enum Perturb {
    A,
    C,
}

/// Symmetric four-point Richardson limit in one parameter:
/// [4(f(+ε)+f(−ε)) − (f(+2ε)+f(−2ε))]/6 = f(0) + O(ε⁴).
fn epsilon_limit(p: &HGParams, pt: &Point, which: Perturb, depth: u8) -> Result<EvalResult> {
    if depth >= MAX_PERTURBATION_DEPTH {
        return Err(Error::NonConvergence {
            terms: depth as usize,
        });
    }
    // The ε⁴ remainder grows like (ε·log)⁴ through (1−z)^{±ε} and (−z)^{±ε}.
    let logs = 1.0 + pt.log_omz().norm().max(pt.log_negz().norm());
    let mut eps = PERTURBATION.min(0.02 / logs);
    if let Perturb::C = which {
        // keep c±2ε off the poles of Γ(c)
        let dist = if p.c.re < 0.5 {
            nearest_integer(p.c.re).0.abs().max(p.c.im.abs())
        } else {
            1.0
        };
        eps = eps.min(dist / 4.0);
    }
    let shifted = |delta: f64| -> Result<EvalResult> {
        let d = Complex64::new(delta, 0.0);
        let q = match which {
            Perturb::A => p.with(p.a + d, p.b, p.c),
            Perturb::C => p.with(p.a, p.b, p.c + d),
        };
        eval_point(&q, pt, depth + 1)
    };
    let f1 = shifted(eps)?;
    let fm1 = shifted(-eps)?;
    let f2 = shifted(2.0 * eps)?;
    let fm2 = shifted(-2.0 * eps)?;
    let s1 = (f1.value + fm1.value) * 0.5;
    let s2 = (f2.value + fm2.value) * 0.5;
    let value = (4.0 * s1 - s2) / 3.0;
    // s2 − s1 ≈ 3ε²F''/2 and the remainder is ε⁴F''''/6 with |F''''| ≲ log²·|F''|.
    let truncation = (s2 - s1).norm() * (eps * logs).powi(2);
    let inner = (4.0 * (f1.abs_error_estimate + fm1.abs_error_estimate)
        + f2.abs_error_estimate
        + fm2.abs_error_estimate)
        / 6.0;
    Ok(EvalResult::new(
        value,
        inner + truncation,
        Method::EpsilonLimit,
    ))
}

/// Im F⁺(x) for real parameters and x > 1.
///
/// b − a ∉ ℤ: A x^{−a} F(a,1−c+a;1−b+a;1/x) + B x^{−b} F(b,1−c+b;1−a+b;1/x)
/// with A = Γ(c)Γ(b−a) sin(aπ)/(Γ(b)Γ(c−a)) and B symmetric (zero at Γ poles).
/// b − a = m ∈ ℕ₀ and c − a ∉ ℤ: the logarithmic boundary series for large x,
/// the boundary value of the connection at one for x < 5/3.
/// Otherwise: Richardson limit of Im F(x + iε) as ε → 0⁺.
pub fn f21_boundary_im(p: &HGParams, x: f64) -> Result<f64> {
    if !p.is_real() {
        return Err(Error::Parameter(
            "boundary imaginary part needs real parameters".into(),
        ));
    }
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "boundary value needs x > 1, got {x}"
        )));
    }
    boundary_im(p.a.re, p.b.re, p.c.re, x, x - 1.0)
}

/// Same as [`f21_boundary_im`] with x − 1 supplied separately.
pub(crate) fn boundary_im(a: f64, b: f64, c: f64, x: f64, x_minus_1: f64) -> Result<f64> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let p = HGParams::real(a, b, c)?;
    let gap = nearest_integer(b - a).0.abs();
    if gap > NON_GENERIC_GUARD {
        return boundary_im_generic(a, b, c, x, x_minus_1);
    }
    let m = (b - a).round() as usize;
    let ca_gap = nearest_integer(c - a).0.abs();
    if gap <= POLE_TOLERANCE && ca_gap > NON_GENERIC_GUARD {
        if x >= 5.0 / 3.0 {
            return boundary_im_integer_gap(a, m, c, x);
        }
        return Ok(eval_point(&p, &Point::upper_edge(x, x_minus_1), 0)?
            .value
            .im);
    }
    boundary_im_eps_limit(&p, x, x_minus_1)
}

fn boundary_im_generic(a: f64, b: f64, c: f64, x: f64, x_minus_1: f64) -> Result<f64> {
    let gc = crate::scalar::gamma_real(c)?;
    let inv = 1.0 / x;
    let inv_complement = x_minus_1 / x;
    let part = |a: f64, b: f64| -> Result<f64> {
        let coef = gc
            * crate::scalar::gamma_real(b - a)?
            * crate::scalar::rgamma_real(b)
            * crate::scalar::rgamma_real(c - a)
            * crate::scalar::sin_pi_real(a);
        if coef == 0.0 {
            return Ok(0.0);
        }
        let inner = HGParams::real(a, 1.0 - c + a, 1.0 - b + a)?;
        let f = f21_unit_interval(&inner, inv, inv_complement)?;
        Ok(coef * (-a * x.ln()).exp() * f)
    };
    Ok(part(a, b)? + part(b, a)?)
}

/// Logarithmic boundary series, b = a + m:
/// Γ(c)/Γ(a+m) x^{−a} sin(aπ) Σ_{n<m} (m−n−1)!(a)_n/(n!Γ(c−a−n)) x^{−n}
/// + (−1)^m Γ(c)/(Γ(a+m)Γ(c−a)) Σ_n (a)_{n+m}(1−c+a)_{n+m}/(n!(n+m)!)
///   ((log x + C_n) sin aπ − π cos aπ) x^{−a−m−n}.
pub(crate) fn boundary_im_integer_gap(a: f64, m: usize, c: f64, x: f64) -> Result<f64> {
    use crate::scalar::{gamma_real, rgamma_real, sin_pi_real};
    let mf = m as f64;
    let s = sin_pi_real(a);
    let co = cos_pi(Complex64::new(a, 0.0)).re;
    let lx = x.ln();
    let inv = 1.0 / x;
    let pref = gamma_real(c)? * rgamma_real(a + mf);

    let mut finite = 0.0;
    let mut poch = 1.0;
    let mut n_fact = 1.0;
    let mut xn = 1.0;
    for n in 0..m {
        let nf = n as f64;
        finite += factorial(m - n - 1) * poch / n_fact * rgamma_real(c - a - nf) * xn;
        poch *= a + nf;
        n_fact *= nf + 1.0;
        xn *= inv;
    }
    let finite = pref * (-a * lx).exp() * s * finite;

    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut coef = crate::scalar::pochhammer(Complex64::new(a, 0.0), m).re
        * crate::scalar::pochhammer(Complex64::new(1.0 - c + a, 0.0), m).re
        / factorial(m);
    let mut psi_1mn = crate::scalar::digamma_real(1.0 + mf)?;
    let mut psi_1n = crate::scalar::digamma_real(1.0)?;
    let mut psi_amn = crate::scalar::digamma_real(a + mf)?;
    let mut psi_camn = crate::scalar::digamma_real(c - a - mf)?;
    let mut sum = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut xn = 1.0;
    let mut small = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let cn = psi_1mn + psi_1n - psi_amn - psi_camn;
        let t = coef * ((lx + cn) * s - PI * co) * xn;
        sum += t;
        abs_sum += t.abs();
        if (t == 0.0 && coef == 0.0) || t.abs() <= 1e-16 * sum.abs() || t.abs() <= 1e-17 * abs_sum {
            small += 1;
            if small >= 3 {
                let log_part = sign * pref * rgamma_real(c - a) * (-(a + mf) * lx).exp() * sum;
                return Ok(finite + log_part);
            }
        } else {
            small = 0;
        }
        coef *= (a + mf + nf) * (1.0 - c + a + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0));
        xn *= inv;
        psi_1mn += 1.0 / (1.0 + mf + nf);
        psi_1n += 1.0 / (1.0 + nf);
        psi_amn += 1.0 / (a + mf + nf);
        psi_camn -= 1.0 / (c - a - mf - nf - 1.0);
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// Im F⁺(x) as the limit of Im F(x + iε): quadratic extrapolation through
/// ε = (x−1)·{1e−4, 1e−5, 1e−6}.
pub fn boundary_im_eps_limit(p: &HGParams, x: f64, x_minus_1: f64) -> Result<f64> {
    const STEPS: [f64; 3] = [1e-4, 1e-5, 1e-6];
    let scale = x_minus_1;
    let mut v = [0.0; 3];
    for (vi, s) in v.iter_mut().zip(STEPS) {
        let eps = s * scale;
        let pt = Point::with_complement(Complex64::new(x, eps), Complex64::new(-x_minus_1, -eps))?;
        *vi = eval_point(p, &pt, 0)?.value.im;
    }
    // Lagrange weights at 0 for nodes STEPS.
    let mut out = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= STEPS[j] / (STEPS[j] - STEPS[i]);
            }
        }
        out += w * v[i];
    }
    Ok(out)
}

/// Classification of F(z) as z → 1 for real parameters.
pub fn limit_at_one(p: &HGParams) -> Result<OneLimitClass> {
    if !p.is_real() {
        return Err(Error::Parameter(
            "limit at one needs real parameters".into(),
        ));
    }
    let (a, b, c) = (p.a, p.b, p.c);
    let d = p.delta().re;
    let gc = gamma(c)?;
    if d.abs() <= POLE_TOLERANCE {
        return Ok(OneLimitClass {
            kind: OneLimitKind::LogDivergent,
            coefficient: gc * rgamma(a) * rgamma(b),
            exponent: 0.0,
        });
    }
    if d > 0.0 {
        let coef = gc * gamma(Complex64::new(d, 0.0))? * rgamma(c - a) * rgamma(c - b);
        Ok(OneLimitClass {
            kind: OneLimitKind::Finite,
            coefficient: coef,
            exponent: 0.0,
        })
    } else {
        let coef = gc * gamma(Complex64::new(-d, 0.0))? * rgamma(a) * rgamma(b);
        Ok(OneLimitClass {
            kind: OneLimitKind::PowerDivergent,
            coefficient: coef,
            exponent: d,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(a: f64, b: f64, cc: f64) -> HGParams {
        HGParams::real(a, b, cc).unwrap()
    }

    #[test]
    fn series_trivial_cases() {
        let r = f21_series(&params(0.3, 0.0, 1.7), c(0.7, 0.0)).unwrap();
        assert_eq!(r.value, Complex64::one());
        let r = f21_series(&params(1.0, 1.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!((r.value - 2.0).norm() < 1e-15);
        assert!(matches!(
            f21_series(&params(1.0, 1.0, 1.0), c(0.9, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn series_matches_exact_rational_partial_sum() {
        // Σ_{n<200} (1/2)_n² / (n!)² 2^{−n}, summed exactly.
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut term = BigRational::one();
        let mut total = BigRational::zero();
        for n in 0..200 {
            total += &term;
            let k = &half + BigRational::from_integer(BigInt::from(n));
            let n1 = BigRational::from_integer(BigInt::from(n + 1));
            term = term * &k * &k / (&n1 * &n1) * &half;
        }
        let oracle = crate::scalar::rational_to_f64(&total);
        let r = f21_series(&params(0.5, 0.5, 1.0), c(0.5, 0.0)).unwrap();
        assert!(
            (r.value.re - oracle).abs() < 1e-15,
            "{} vs {}",
            r.value.re,
            oracle
        );
        assert!(r.abs_error_estimate < 1e-14);
    }

    #[test]
    fn power_case_on_negative_axis() {
        let r = f21_lambda(&params(0.5, 3.0, 3.0), c(-3.0, 0.0)).unwrap();
        assert!((r.value - 0.5).norm() < 1e-13);
        let r = f21_lambda(&params(1.3, -0.2, 2.0), Complex64::zero()).unwrap();
        assert_eq!(r.value, Complex64::one());
    }

    #[test]
    fn slit_and_pole_errors() {
        assert!(matches!(
            f21_lambda(&params(0.5, 0.5, 1.0), c(2.0, 0.0)),
            Err(Error::Slit(_))
        ));
        assert!(matches!(
            f21_lambda(&params(0.5, 0.5, 1.0), c(1.0, 0.0)),
            Err(Error::Slit(_))
        ));
        assert!(matches!(
            HGParams::real(1.0, 1.0, -2.0),
            Err(Error::Parameter(_))
        ));
        assert!(f21_lambda(&params(0.5, 0.5, 1.0), c(2.0, 1e-12)).is_ok());
    }

    #[test]
    fn log_closed_forms() {
        // F(1,1;2;z) = −log(1−z)/z; c−a ∈ ℤ and b−a = 0 → perturbed logarithmic case.
        let p = params(1.0, 1.0, 2.0);
        for z in [
            c(-10.0, 0.0),
            c(-1000.0, 0.0),
            c(0.9, 0.0),
            c(3.0, 2.0),
            c(0.5, 0.85),
            c(1.5, -0.1),
        ] {
            let r = f21_lambda(&p, z).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!(
                (r.value - exact).norm() < 1e-10 * exact.norm().max(1.0),
                "z={z}: {} vs {exact} ({:?})",
                r.value,
                r.method
            );
        }
    }

    #[test]
    fn limit_at_one_examples() {
        let l = limit_at_one(&params(1.0, 1.0, 2.0)).unwrap();
        assert_eq!(l.kind, OneLimitKind::LogDivergent);
        assert!((l.coefficient - 1.0).norm() < 1e-13);
        let l = limit_at_one(&params(0.5, 0.5, 2.0)).unwrap();
        assert_eq!(l.kind, OneLimitKind::Finite);
        assert!((l.coefficient.re - 4.0 / PI).abs() < 1e-13);
        let l = limit_at_one(&params(0.5, 1.0, 1.0)).unwrap();
        assert_eq!(l.kind, OneLimitKind::PowerDivergent);
        assert!((l.exponent + 0.5).abs() < 1e-15);
        assert!((l.coefficient - 1.0).norm() < 1e-13);
    }

    #[test]
    fn finite_limit_matches_extrapolated_series() {
        // Oracle: series at 1 − 10^{−k}, k = 3..6, F(1⁻) − F(1−δ) = O(δ^{1}) for Δ = 1.
        let p = params(0.5, 0.5, 2.0);
        let vals: Vec<f64> = (3..=6)
            .map(|k| {
                let d = 10f64.powi(-k);
                f21_with_complement(&p, c(1.0 - d, 0.0), c(d, 0.0))
                    .unwrap()
                    .value
                    .re
            })
            .collect();
        // Richardson with ratio 10 on the last two probes.
        let extrap = vals[3] + (vals[3] - vals[2]) / 9.0;
        assert!((extrap - 4.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn boundary_im_power_function() {
        // F = (1−z)^{−1/2} → Im F⁺(x) = (x−1)^{−1/2}
        let p = params(0.5, 1.0, 1.0);
        for x in [1.01, 2.0, 7.5, 1e4] {
            let v = f21_boundary_im(&p, x).unwrap();
            assert!(
                (v - (x - 1.0).powf(-0.5)).abs() < 1e-12 * (x - 1.0).powf(-0.5),
                "x={x}: {v}"
            );
        }
    }

    #[test]
    fn boundary_im_log_growth_coefficient() {
        // x^{1/2} Im F⁺(x) / log x → 1/π for (1/2, 1/2, 1).
        let p = params(0.5, 0.5, 1.0);
        let probe = |x: f64| x.sqrt() * f21_boundary_im(&p, x).unwrap() / x.ln();
        let (x1, x2): (f64, f64) = (1e12, 1e14);
        // O(1/log x) correction: extrapolate in 1/log x.
        let (l1, l2) = (1.0 / x1.ln(), 1.0 / x2.ln());
        let limit = (probe(x2) * l1 - probe(x1) * l2) / (l1 - l2);
        assert!((limit - 1.0 / PI).abs() < 1e-6, "{limit}");
    }

    #[test]
    fn boundary_im_matches_eps_limit_oracle() {
        let p = params(0.5, 1.5, 2.5);
        let direct = f21_boundary_im(&p, 4.0).unwrap();
        let oracle = boundary_im_eps_limit(&p, 4.0, 3.0).unwrap();
        assert!((direct - oracle).abs() < 1e-9, "{direct} vs {oracle}");
    }
}
