//! Membership of ₂F₁(a,b;c;·) in class T, exact Taylor coefficients, and
//! universal starlikeness of z·₂F₁(a,b;c;z).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::scalar::{is_nonpositive_integer, GaussianRational};

/// Width of the band around a = 0, a = 1 and c = a + max{0, b−1} that is
/// reported as boundary for floating-point input.
pub const BOUNDARY_BAND: f64 = 1e-12;
const EQUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TVerdict {
    InT,
    NotInT,
    /// F = (1−z)^{−k} with k ∈ [0, 1].
    TrivialPower(f64),
    InvalidC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TReason {
    AbZero,
    PowerCase,
    ComplexExclusion,
    RealCriterion,
    CNonPositiveInteger,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TClassification {
    pub verdict: TVerdict,
    pub reason: TReason,
    /// (a, b, c) with a ≤ b for real input; unchanged otherwise.
    pub normalized: [Complex64; 3],
    /// Within [`BOUNDARY_BAND`] of the boundary of the real region (exact
    /// equality for rational input).
    pub boundary: bool,
}

impl TClassification {
    pub fn in_t(&self) -> bool {
        matches!(self.verdict, TVerdict::InT | TVerdict::TrivialPower(_))
    }
}

fn close(x: Complex64, y: Complex64) -> bool {
    (x - y).norm() <= EQUAL_TOL
}

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= EQUAL_TOL
}

fn power_exponent(a: Complex64, b: Complex64, c: Complex64) -> Option<Complex64> {
    if close(a, c) {
        Some(b)
    } else if close(b, c) {
        Some(a)
    } else {
        None
    }
}

/// Decision tree: invalid c, then ab = 0, then the power cases a = c or
/// b = c, then non-real parameters, then 0 < a ≤ 1, c ≥ a + max{0, b−1}
/// after ordering a ≤ b.
pub fn classify_t(a: Complex64, b: Complex64, c: Complex64) -> TClassification {
    let mk = |verdict, reason, normalized, boundary| TClassification {
        verdict,
        reason,
        normalized,
        boundary,
    };
    if is_nonpositive_integer(c) {
        return mk(
            TVerdict::InvalidC,
            TReason::CNonPositiveInteger,
            [a, b, c],
            false,
        );
    }
    if a.norm() <= EQUAL_TOL || b.norm() <= EQUAL_TOL {
        return mk(TVerdict::InT, TReason::AbZero, [a, b, c], false);
    }
    if let Some(k) = power_exponent(a, b, c) {
        let boundary =
            is_real(k) && (k.re.abs() <= BOUNDARY_BAND || (k.re - 1.0).abs() <= BOUNDARY_BAND);
        return if is_real(k) && (0.0..=1.0).contains(&k.re) {
            mk(
                TVerdict::TrivialPower(k.re),
                TReason::PowerCase,
                [a, b, c],
                boundary,
            )
        } else {
            mk(TVerdict::NotInT, TReason::PowerCase, [a, b, c], boundary)
        };
    }
    if !(is_real(a) && is_real(b) && is_real(c)) {
        return mk(
            TVerdict::NotInT,
            TReason::ComplexExclusion,
            [a, b, c],
            false,
        );
    }
    let (a, b, c) = if a.re <= b.re {
        (a.re, b.re, c.re)
    } else {
        (b.re, a.re, c.re)
    };
    let normalized = [a, b, c].map(|x| Complex64::new(x, 0.0));
    let threshold = a + (b - 1.0).max(0.0);
    // the theorem's inequalities are inclusive and floats cannot resolve
    // them, so the band counts as inside
    let inside = a > 0.0 && a <= 1.0 + BOUNDARY_BAND && c >= threshold - BOUNDARY_BAND;
    let boundary = a.abs() <= BOUNDARY_BAND
        || (a - 1.0).abs() <= BOUNDARY_BAND
        || (c - threshold).abs() <= BOUNDARY_BAND;
    let verdict = if inside {
        TVerdict::InT
    } else {
        TVerdict::NotInT
    };
    mk(verdict, TReason::RealCriterion, normalized, boundary)
}

/// Exact classification for rational parameters.
pub fn classify_t_exact(a: &BigRational, b: &BigRational, c: &BigRational) -> TClassification {
    let f = crate::scalar::rational_to_f64;
    let cx = |x: &BigRational| Complex64::new(f(x), 0.0);
    let raw = [cx(a), cx(b), cx(c)];
    let mk = |verdict, reason, normalized, boundary| TClassification {
        verdict,
        reason,
        normalized,
        boundary,
    };
    let zero = BigRational::zero();
    let one = BigRational::one();
    if c.is_integer() && c <= &zero {
        return mk(TVerdict::InvalidC, TReason::CNonPositiveInteger, raw, false);
    }
    if a.is_zero() || b.is_zero() {
        return mk(TVerdict::InT, TReason::AbZero, raw, false);
    }
    let k = if a == c {
        Some(b)
    } else if b == c {
        Some(a)
    } else {
        None
    };
    if let Some(k) = k {
        let boundary = k.is_zero() || k == &one;
        let verdict = if k >= &zero && k <= &one {
            TVerdict::TrivialPower(f(k))
        } else {
            TVerdict::NotInT
        };
        return mk(verdict, TReason::PowerCase, raw, boundary);
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let excess = b - &one;
    let threshold = if excess.is_positive() {
        a + excess
    } else {
        a.clone()
    };
    let inside = a.is_positive() && a <= &one && c >= &threshold;
    let boundary = a.is_zero() || a == &one || c == &threshold;
    let verdict = if inside {
        TVerdict::InT
    } else {
        TVerdict::NotInT
    };
    mk(
        verdict,
        TReason::RealCriterion,
        [cx(a), cx(b), cx(c)],
        boundary,
    )
}

/// Parameters for exact Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum TmParams {
    Rational {
        a: BigRational,
        b: BigRational,
        c: BigRational,
    },
    /// b = conj(a), so that (a)ₙ(b)ₙ = |(a)ₙ|² is real.
    ConjugatePair { a: GaussianRational, c: BigRational },
}

/// γₙ = (a)ₙ(b)ₙ/((c)ₙ n!) for n ≤ N, exactly.
pub fn tm_coefficients(params: &TmParams, len: usize) -> Result<MomentSequence> {
    let c = match params {
        TmParams::Rational { c, .. } | TmParams::ConjugatePair { c, .. } => c,
    };
    if c.is_integer() && !c.is_positive() {
        return Err(Error::Parameter(format!(
            "c = {c} is a non-positive integer"
        )));
    }
    let mut out = Vec::with_capacity(len + 1);
    let mut gamma = BigRational::one();
    match params {
        TmParams::Rational { a, b, c } => {
            for n in 0..=len {
                out.push(gamma.clone());
                let k = BigRational::from_integer(BigInt::from(n));
                gamma = gamma * (a + &k) * (b + &k) / ((c + &k) * (&k + BigRational::one()));
            }
        }
        TmParams::ConjugatePair { a, c } => {
            // |(a)_{n+1}|² = |(a)_n|²·|a+n|²
            let mut abs2 = BigRational::one();
            let mut c_poch = BigRational::one();
            let mut fact = BigRational::one();
            for n in 0..=len {
                out.push(&abs2 / (&c_poch * &fact));
                let k = BigRational::from_integer(BigInt::from(n));
                let shifted = a + &GaussianRational::from_real(k.clone());
                abs2 *= shifted.norm_sqr();
                c_poch *= c + &k;
                fact *= &k + BigRational::one();
            }
        }
    }
    MomentSequence::exact(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StarlikeBranch {
    PositiveParameters,
    /// f(z) = z(1−z)^{−k}.
    PowerForm(f64),
    No,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarlikeClassification {
    pub verdict: bool,
    pub branch: StarlikeBranch,
}

/// Universal starlikeness of f(z) = z·₂F₁(a,b;c;z).
pub fn classify_starlike(a: Complex64, b: Complex64, c: Complex64) -> StarlikeClassification {
    let no = StarlikeClassification {
        verdict: false,
        branch: StarlikeBranch::No,
    };
    if is_nonpositive_integer(c) {
        return no;
    }
    let (a, b) = if a.re <= b.re { (a, b) } else { (b, a) };
    // ab = 0 gives f(z) = z = z(1−z)^0
    let k = if a.norm() <= EQUAL_TOL || b.norm() <= EQUAL_TOL {
        Some(Complex64::new(0.0, 0.0))
    } else {
        power_exponent(a, b, c)
    };
    if let Some(k) = k {
        if is_real(k) && (0.0..=1.0).contains(&k.re) {
            return StarlikeClassification {
                verdict: true,
                branch: StarlikeBranch::PowerForm(k.re),
            };
        }
        return no;
    }
    if is_real(a)
        && is_real(b)
        && is_real(c)
        && a.re > 0.0
        && a.re <= 1.0
        && b.re > 0.0
        && b.re < c.re
    {
        return StarlikeClassification {
            verdict: true,
            branch: StarlikeBranch::PositiveParameters,
        };
    }
    no
}

/// Exact counterpart of [`classify_starlike`] for rational parameters.
pub fn classify_starlike_exact(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> StarlikeClassification {
    let no = StarlikeClassification {
        verdict: false,
        branch: StarlikeBranch::No,
    };
    let zero = BigRational::zero();
    let one = BigRational::one();
    if c.is_integer() && c <= &zero {
        return no;
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let f = crate::scalar::rational_to_f64;
    let k = if a.is_zero() || b.is_zero() {
        Some(zero.clone())
    } else if a == c {
        Some(b.clone())
    } else if b == c {
        Some(a.clone())
    } else {
        None
    };
    if let Some(k) = k {
        if k >= zero && k <= one {
            return StarlikeClassification {
                verdict: true,
                branch: StarlikeBranch::PowerForm(f(&k)),
            };
        }
        return no;
    }
    if a.is_positive() && a <= &one && b.is_positive() && b < c {
        return StarlikeClassification {
            verdict: true,
            branch: StarlikeBranch::PositiveParameters,
        };
    }
    no
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarlikeWitness {
    /// ab(c−a)(c−b)/(c²(c+1)).
    pub value: f64,
    /// c₁ − c₂ for 1 − a + a·F(a+1,b;c;z)/F(a,b;c;z), by series division.
    pub series_value: f64,
    pub difference: f64,
}

/// The first coefficient difference of z f′/f; negative means f is not
/// universally starlike.
pub fn starlike_coefficient_witness(a: f64, b: f64, c: f64) -> Result<StarlikeWitness> {
    if !(c > 0.0) {
        return Err(Error::Parameter(format!("witness needs c > 0, got {c}")));
    }
    let value = a * b * (c - a) * (c - b) / (c * c * (c + 1.0));
    // Three Taylor coefficients of F(a,b;c) and F(a+1,b;c).
    let coeffs = |a: f64| {
        let t1 = a * b / c;
        let t2 = t1 * (a + 1.0) * (b + 1.0) / ((c + 1.0) * 2.0);
        [1.0, t1, t2]
    };
    let f = coeffs(a);
    let g = coeffs(a + 1.0);
    // G = g/f
    let q0 = g[0] / f[0];
    let q1 = (g[1] - q0 * f[1]) / f[0];
    let q2 = (g[2] - q0 * f[2] - q1 * f[1]) / f[0];
    let series_value = a * q1 - a * q2;
    Ok(StarlikeWitness {
        value,
        series_value,
        difference: (value - series_value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn classify_examples() {
        let v = classify_t(r(0.5), r(2.0), r(1.5));
        assert_eq!(v.verdict, TVerdict::InT);
        assert!(v.boundary);
        let a = Complex64::new(0.5, 0.25);
        let v = classify_t(a, a.conj(), r(2.0));
        assert_eq!(
            (v.verdict, v.reason),
            (TVerdict::NotInT, TReason::ComplexExclusion)
        );
        let v = classify_t(r(3.0), r(0.5), r(3.0));
        assert_eq!(
            (v.verdict, v.reason),
            (TVerdict::TrivialPower(0.5), TReason::PowerCase)
        );
        assert!(v.in_t());
        assert_eq!(
            classify_t(r(1.0), r(1.0), r(-2.0)).verdict,
            TVerdict::InvalidC
        );
        assert_eq!(classify_t(r(0.0), r(7.0), r(-2.5)).reason, TReason::AbZero);
        assert_eq!(classify_t(r(2.0), r(3.0), r(1.0)).verdict, TVerdict::NotInT);
    }

    #[test]
    fn complex_power_case_escapes_exclusion() {
        let a = Complex64::new(0.5, 2.0);
        let v = classify_t(a, r(0.25), a);
        assert_eq!(v.verdict, TVerdict::TrivialPower(0.25));
    }

    #[test]
    fn exact_matches_float_on_examples() {
        for (a, b, c) in [
            (q(1, 2), q(2, 1), q(3, 2)),
            (q(2, 1), q(3, 1), q(1, 1)),
            (q(3, 1), q(1, 2), q(3, 1)),
        ] {
            let e = classify_t_exact(&a, &b, &c);
            let f = crate::scalar::rational_to_f64;
            let x = classify_t(r(f(&a)), r(f(&b)), r(f(&c)));
            assert_eq!(e.verdict, x.verdict);
            assert_eq!(e.boundary, x.boundary);
        }
    }

    #[test]
    fn tm_coefficient_examples() {
        let p = TmParams::Rational {
            a: q(1, 2),
            b: q(1, 1),
            c: q(1, 1),
        };
        let g = tm_coefficients(&p, 2).unwrap();
        assert_eq!(g, MomentSequence::Exact(vec![q(1, 1), q(1, 2), q(3, 8)]));
        let p = TmParams::ConjugatePair {
            a: GaussianRational::from_ratios((1, 2), (1, 4)),
            c: q(2, 1),
        };
        let g = tm_coefficients(&p, 1).unwrap();
        assert_eq!(g, MomentSequence::Exact(vec![q(1, 1), q(5, 32)]));
        // incremental |(a)_n|² against the direct Gaussian-rational product
        let a = GaussianRational::from_ratios((1, 2), (1, 4));
        let g = tm_coefficients(
            &TmParams::ConjugatePair {
                a: a.clone(),
                c: q(2, 1),
            },
            6,
        )
        .unwrap();
        let direct = crate::scalar::pochhammer_exact(&a, 6).norm_sqr()
            / (crate::scalar::pochhammer_rational(&q(2, 1), 6) * q(720, 1));
        match g {
            MomentSequence::Exact(v) => assert_eq!(v[6], direct),
            MomentSequence::Float(_) => unreachable!(),
        }
        let bad = TmParams::Rational {
            a: q(1, 2),
            b: q(1, 1),
            c: q(-1, 1),
        };
        assert!(tm_coefficients(&bad, 3).is_err());
    }

    #[test]
    fn starlike_examples() {
        assert_eq!(
            classify_starlike(r(0.5), r(1.0), r(2.0)).branch,
            StarlikeBranch::PositiveParameters
        );
        assert_eq!(
            classify_starlike(r(0.5), r(2.0), r(2.0)).branch,
            StarlikeBranch::PowerForm(0.5)
        );
        assert!(!classify_starlike(r(1.0), r(3.0), r(2.0)).verdict);
        assert_eq!(
            classify_starlike_exact(&q(1, 2), &q(1, 1), &q(2, 1)),
            classify_starlike(r(0.5), r(1.0), r(2.0))
        );
    }

    #[test]
    fn witness_examples() {
        let w = starlike_coefficient_witness(0.5, 1.0, 2.0).unwrap();
        assert!((w.value - 1.0 / 16.0).abs() < 1e-15);
        assert!(w.difference < 1e-12);
        assert_eq!(
            starlike_coefficient_witness(2.0, 0.7, 2.0).unwrap().value,
            0.0
        );
        let w = starlike_coefficient_witness(1.0, 3.0, 2.0).unwrap();
        assert!((w.value + 0.25).abs() < 1e-15);
        assert!(w.difference < 1e-12);
    }
}
