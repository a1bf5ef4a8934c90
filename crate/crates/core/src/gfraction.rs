//! Wall g-fractions
//!
//! F(z) = 1/(1 − (1−g₀)g₁z/(1 − (1−g₁)g₂z/(1 − ⋯)))
//!
//! with 0 ≤ gₙ ≤ 1 characterise the generating functions of probability
//! measures on [0, 1]. Only the products aₙ = (1−gₙ₋₁)gₙ are determined
//! by F. Given a₁, a₂, … the greedy choice g₀ = 0, gₙ₊₁ = aₙ₊₁/(1−gₙ) is
//! the smallest admissible sequence: each gₙ₊₁ is increasing in gₙ, so if
//! any sequence stays in [0, 1] the greedy one does too.
//!
//! A gₙ equal to 1 makes every later numerator vanish; such a fraction is
//! treated as terminating there.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::error::{Error, Result};
use crate::hyp2f1::{f21_lambda, HGParams};
use crate::moments::MomentSequence;
use crate::scalar::rational_to_f64;

/// Largest N accepted for the floating-point quotient-difference table.
pub const FLOAT_QD_MAX: usize = 30;
const DENOMINATOR_FLOOR: f64 = 1e-280;
const FLOAT_QD_ZERO: f64 = 1e-250;

/// g₀, …, g_N.
#[derive(Debug, Clone, PartialEq)]
pub enum GFraction {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

/// C-fraction numerators a₁, …, a_N with aₙ = (1−gₙ₋₁)gₙ.
#[derive(Debug, Clone, PartialEq)]
pub enum CFractionCoeffs {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

impl CFractionCoeffs {
    pub fn len(&self) -> usize {
        match self {
            Self::Float(v) => v.len(),
            Self::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Self::Float(v) => v.clone(),
            Self::Exact(v) => v.iter().map(rational_to_f64).collect(),
        }
    }
}

impl GFraction {
    pub fn len(&self) -> usize {
        match self {
            Self::Float(v) => v.len(),
            Self::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Self::Float(v) => v.clone(),
            Self::Exact(v) => v.iter().map(rational_to_f64).collect(),
        }
    }

    pub fn coefficients(&self) -> CFractionCoeffs {
        match self {
            Self::Float(g) => {
                CFractionCoeffs::Float(g.windows(2).map(|w| (1.0 - w[0]) * w[1]).collect())
            }
            Self::Exact(g) => CFractionCoeffs::Exact(
                g.windows(2)
                    .map(|w| (BigRational::one() - &w[0]) * &w[1])
                    .collect(),
            ),
        }
    }

    /// True when every gₙ lies in [−tol, 1 + tol].
    pub fn in_unit_interval(&self, tol: f64) -> bool {
        self.to_f64().iter().all(|g| *g >= -tol && *g <= 1.0 + tol)
    }

    /// Exact Taylor coefficients c₀, …, c_{len−1} of the fraction truncated
    /// after the last stored g. Only for exact fractions.
    pub fn taylor_coefficients(&self, len: usize) -> Result<Vec<BigRational>> {
        let a = match self.coefficients() {
            CFractionCoeffs::Exact(a) => a,
            CFractionCoeffs::Float(_) => {
                return Err(Error::Parameter(
                    "exact Taylor coefficients need an exact fraction".into(),
                ))
            }
        };
        // T = 1; T ← 1 − aₙ z / T from the innermost level outwards.
        let mut t: Vec<BigRational> = one_series(len);
        for an in a.iter().rev() {
            let inv = series_inverse(&t)?;
            let mut next = one_series(len);
            for k in 1..len {
                next[k] = -(an * &inv[k - 1]);
            }
            t = next;
        }
        series_inverse(&t)
    }
}

fn one_series(len: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); len];
    if len > 0 {
        v[0] = BigRational::one();
    }
    v
}

/// 1/s for a power series with s₀ ≠ 0, truncated to the same length.
fn series_inverse(s: &[BigRational]) -> Result<Vec<BigRational>> {
    let len = s.len();
    if len == 0 {
        return Ok(vec![]);
    }
    if s[0].is_zero() {
        return Err(Error::NearZeroDenominator { depth: 0 });
    }
    let inv0 = s[0].recip();
    let mut out: Vec<BigRational> = Vec::with_capacity(len);
    out.push(inv0.clone());
    for k in 1..len {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &s[j] * &out[k - j];
        }
        out.push(-(acc * &inv0));
    }
    Ok(out)
}

/// Depth-truncated fraction by backward recurrence with tail 1.
/// Needs g₀, …, g_depth.
pub fn eval_gfraction(g: &GFraction, z: Complex64, depth: usize) -> Result<Complex64> {
    if z.re >= 1.0 && z.im.abs() < 1e-300 {
        return Err(Error::Slit(format!("{z}")));
    }
    if depth + 1 > g.len() {
        return Err(Error::InsufficientLength {
            needed: depth + 1,
            have: g.len(),
        });
    }
    let gv = g.to_f64();
    // a g equal to one ends the fraction
    let depth = (1..=depth).find(|&n| gv[n] == 1.0).unwrap_or(depth);
    let mut d = Complex64::new(1.0, 0.0);
    for n in (1..=depth).rev() {
        let an = (1.0 - gv[n - 1]) * gv[n];
        d = 1.0 - an * z / d;
        if d.norm() < DENOMINATOR_FLOOR {
            return Err(Error::NearZeroDenominator { depth: n });
        }
    }
    Ok(1.0 / d)
}

/// g₂ₖ = (c−a+k)/(c+2k), g₂ₖ₊₁ = (c−b+k)/(c+2k+1) for the continued fraction
/// of F(a,b+1;c+1;z)/F(a,b;c;z). Needs 0 ≤ a ≤ c, −1 ≤ b ≤ c, c > 0.
pub fn gauss_g_params(a: f64, b: f64, c: f64, len: usize) -> Result<GFraction> {
    if !(c > 0.0 && 0.0 <= a && a <= c && -1.0 <= b && b <= c) {
        return Err(Error::Parameter(format!(
            "Gauss continued fraction needs 0 <= a <= c and -1 <= b <= c with c > 0; got ({a}, {b}, {c})"
        )));
    }
    let g = (0..=len)
        .map(|n| {
            let k = (n / 2) as f64;
            if n % 2 == 0 {
                (c - a + k) / (c + 2.0 * k)
            } else {
                (c - b + k) / (c + 2.0 * k + 1.0)
            }
        })
        .collect();
    Ok(GFraction::Float(g))
}

/// Exact Gauss parameters for rational a, b, c.
pub fn gauss_g_params_exact(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    len: usize,
) -> Result<GFraction> {
    let zero = BigRational::zero();
    if !(c > &zero && &zero <= a && a <= c && &-BigRational::one() <= b && b <= c) {
        return Err(Error::Parameter(format!(
            "Gauss continued fraction needs 0 <= a <= c and -1 <= b <= c with c > 0; got ({a}, {b}, {c})"
        )));
    }
    let g = (0..=len)
        .map(|n| {
            let k = BigRational::from_integer(BigInt::from(n / 2));
            if n % 2 == 0 {
                (c - a + &k) / (c + &k + &k)
            } else {
                (c - b + &k) / (c + &k + &k + BigRational::one())
            }
        })
        .collect();
    Ok(GFraction::Exact(g))
}

/// Result of converting a power series into g-parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GFractionOutcome {
    /// All of g₀, …, g_N lie in [−tol, 1 + tol].
    Certified(GFraction),
    /// gₙ left [−tol, 1 + tol]; `prefix` holds g₀, …, gₙ.
    Failed {
        index: usize,
        value: f64,
        prefix: GFraction,
    },
    /// The quotient-difference table hit a zero, or a gₙ = 1 was followed
    /// by a zero numerator: the series is rational and the fraction
    /// terminates after `prefix`.
    Degenerate { index: usize, prefix: GFraction },
}

impl GFractionOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }
}

trait QdScalar: Clone + PartialOrd {
    fn qd_zero() -> Self;
    fn qd_one() -> Self;
    fn is_zero_qd(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn from_tol(t: f64) -> Self;
    fn to_f(&self) -> f64;
}

impl QdScalar for f64 {
    fn qd_zero() -> Self {
        0.0
    }
    fn qd_one() -> Self {
        1.0
    }
    fn is_zero_qd(&self) -> bool {
        self.abs() < FLOAT_QD_ZERO
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_tol(t: f64) -> Self {
        t
    }
    fn to_f(&self) -> f64 {
        *self
    }
}

impl QdScalar for BigRational {
    fn qd_zero() -> Self {
        Zero::zero()
    }
    fn qd_one() -> Self {
        One::one()
    }
    fn is_zero_qd(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_tol(t: f64) -> Self {
        BigRational::from_f64(t).unwrap_or_else(Zero::zero)
    }
    fn to_f(&self) -> f64 {
        rational_to_f64(self)
    }
}

enum Step<T> {
    Coefficient(T),
    Zero,
}

/// Column-by-column quotient-difference table yielding a₁, a₂, …
struct Qd<T> {
    q: Vec<T>,
    e: Vec<T>,
    produced: usize,
    wanted: usize,
}

impl<T: QdScalar> Qd<T> {
    fn new(c: &[T], wanted: usize) -> Option<Self> {
        if c[..wanted].iter().any(|x| x.is_zero_qd()) {
            return None;
        }
        let q = (0..wanted).map(|k| c[k + 1].div(&c[k])).collect();
        Some(Self {
            q,
            e: vec![T::qd_zero(); wanted + 1],
            produced: 0,
            wanted,
        })
    }

    fn next(&mut self) -> Option<Step<T>> {
        if self.produced == self.wanted {
            return None;
        }
        self.produced += 1;
        if self.produced == 1 {
            return Some(Step::Coefficient(self.q[0].clone()));
        }
        if self.produced.is_multiple_of(2) {
            // e_j[k] = q_j[k+1] − q_j[k] + e_{j−1}[k+1]
            let len = self.q.len() - 1;
            self.e = (0..len)
                .map(|k| self.q[k + 1].sub(&self.q[k]).add(&self.e[k + 1]))
                .collect();
            Some(Step::Coefficient(self.e[0].clone()))
        } else {
            // q_{j+1}[k] = q_j[k+1] e_j[k+1] / e_j[k]
            let len = self.e.len() - 1;
            if self.e[..len].iter().any(|x| x.is_zero_qd()) {
                return Some(Step::Zero);
            }
            self.q = (0..len)
                .map(|k| self.q[k + 1].mul(&self.e[k + 1]).div(&self.e[k]))
                .collect();
            Some(Step::Coefficient(self.q[0].clone()))
        }
    }
}

fn greedy<T: QdScalar>(
    c: &[T],
    len: usize,
    tol: f64,
    wrap: fn(Vec<T>) -> GFraction,
) -> GFractionOutcome {
    let lo = T::qd_zero().sub(&T::from_tol(tol));
    let hi = T::qd_one().add(&T::from_tol(tol));
    let mut g = vec![T::qd_zero()];
    let Some(mut qd) = Qd::new(c, len) else {
        return GFractionOutcome::Degenerate {
            index: 1,
            prefix: wrap(g),
        };
    };
    while let Some(step) = qd.next() {
        let n = g.len();
        let an = match step {
            Step::Coefficient(a) => a,
            Step::Zero => {
                return GFractionOutcome::Degenerate {
                    index: n,
                    prefix: wrap(g),
                }
            }
        };
        let rest = T::qd_one().sub(&g[n - 1]);
        if rest.is_zero_qd() {
            if an.is_zero_qd() {
                return GFractionOutcome::Degenerate {
                    index: n,
                    prefix: wrap(g),
                };
            }
            return GFractionOutcome::Failed {
                index: n,
                value: f64::INFINITY,
                prefix: wrap(g),
            };
        }
        let gn = an.div(&rest);
        let out_of_range = gn < lo || gn > hi;
        let value = gn.to_f();
        g.push(gn);
        if out_of_range {
            return GFractionOutcome::Failed {
                index: n,
                value,
                prefix: wrap(g),
            };
        }
    }
    GFractionOutcome::Certified(wrap(g))
}

/// Quotient-difference conversion of c₀ + c₁z + ⋯ into a C-fraction,
/// followed by the greedy g-recursion. Needs c₀, …, c_N; float input is
/// limited to N ≤ 30.
pub fn series_to_gfraction(c: &MomentSequence, len: usize, tol: f64) -> Result<GFractionOutcome> {
    if c.len() < len + 1 {
        return Err(Error::InsufficientLength {
            needed: len + 1,
            have: c.len(),
        });
    }
    if len == 0 {
        return Err(Error::Domain(
            "need at least one coefficient beyond c_0".into(),
        ));
    }
    Ok(match c {
        MomentSequence::Exact(v) => greedy(&v[..=len], len, tol, GFraction::Exact),
        MomentSequence::Float(v) => {
            if len > FLOAT_QD_MAX {
                return Err(Error::Parameter(format!(
                    "floating-point quotient-difference limited to N <= {FLOAT_QD_MAX}; use exact input"
                )));
            }
            greedy(&v[..=len], len, tol, GFraction::Float)
        }
    })
}

/// Gauss's fraction for F(a,b+1;c+1;z)/F(a,b;c;z) against the quotient of
/// two direct evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCheck {
    pub cf_value: Complex64,
    pub direct_value: Complex64,
    pub difference: f64,
}

pub fn gauss_ratio_check(a: f64, b: f64, c: f64, z: Complex64, depth: usize) -> Result<RatioCheck> {
    if z.norm() > 0.8 {
        return Err(Error::Domain(format!("|z| = {} exceeds 0.8", z.norm())));
    }
    let g = gauss_g_params(a, b, c, depth)?;
    let cf_value = eval_gfraction(&g, z, depth)?;
    let num = f21_lambda(&HGParams::real(a, b + 1.0, c + 1.0)?, z)?.value;
    let den = f21_lambda(&HGParams::real(a, b, c)?, z)?.value;
    let direct_value = num / den;
    Ok(RatioCheck {
        cf_value,
        direct_value,
        difference: (cf_value - direct_value).norm(),
    })
}
