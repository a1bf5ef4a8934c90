//! Oracles and samplers shared by the integration tests. Everything here
//! is written independently of the library code paths it checks.
#![allow(dead_code)]

use hgmoment::BigRational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qf(x: &BigRational) -> f64 {
    hgmoment::scalar::rational_to_f64(x)
}

/// −2, −7/4, …, 3.
pub fn quarter_grid() -> Vec<BigRational> {
    (-8..=12).map(|k| q(k, 4)).collect()
}

pub fn invalid_c(c: &BigRational) -> bool {
    c.is_integer() && !c.is_positive()
}

fn sorted<'a>(a: &'a BigRational, b: &'a BigRational) -> (&'a BigRational, &'a BigRational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Membership in T straight from the characterization; None for invalid c.
pub fn oracle_in_t(a: &BigRational, b: &BigRational, c: &BigRational) -> Option<bool> {
    if invalid_c(c) {
        return None;
    }
    if a.is_zero() || b.is_zero() {
        return Some(true);
    }
    let unit = |k: &BigRational| !k.is_negative() && k <= &BigRational::one();
    if a == c {
        return Some(unit(b));
    }
    if b == c {
        return Some(unit(a));
    }
    let (lo, hi) = sorted(a, b);
    let excess = (hi - BigRational::one()).max(BigRational::zero());
    Some(lo.is_positive() && lo <= &BigRational::one() && c >= &(lo + excess))
}

/// Universal starlikeness of z·F(a,b;c;z) from the characterization.
pub fn oracle_starlike(a: &BigRational, b: &BigRational, c: &BigRational) -> bool {
    if invalid_c(c) {
        return false;
    }
    let unit = |k: &BigRational| !k.is_negative() && k <= &BigRational::one();
    if a.is_zero() || b.is_zero() {
        return true;
    }
    if a == c {
        return unit(b);
    }
    if b == c {
        return unit(a);
    }
    let (lo, hi) = sorted(a, b);
    lo.is_positive() && lo <= &BigRational::one() && hi.is_positive() && hi < c
}

/// Distance to every surface where the verdict can change.
pub fn boundary_distance(a: f64, b: f64, c: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let thr = lo + (hi - 1.0).max(0.0);
    [
        lo.abs(),
        hi.abs(),
        (lo - 1.0).abs(),
        (c - thr).abs(),
        (hi - 1.0).abs(),
        (a - c).abs(),
        (b - c).abs(),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> BigRational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(lo * d..=hi * d);
    q(n, d)
}

fn nonpositive_integer(x: &BigRational) -> bool {
    x.is_integer() && !x.is_positive()
}

/// Rational triple in [−2, 3]³ with the requested verdict under the real
/// criterion, at least `min_dist` from all verdict boundaries and with
/// neither a nor b a non-positive integer.
pub fn sample_triple<R: Rng>(rng: &mut R, in_t: bool, min_dist: f64) -> [BigRational; 3] {
    loop {
        let t = [0, 1, 2].map(|_| random_rational(rng, -2, 3, 8));
        let [a, b, c] = &t;
        if invalid_c(c) || nonpositive_integer(a) || nonpositive_integer(b) {
            continue;
        }
        if boundary_distance(qf(a), qf(b), qf(c)) < min_dist {
            continue;
        }
        if oracle_in_t(a, b, c) == Some(in_t) {
            return t;
        }
    }
}

/// γₙ = (a)ₙ(b)ₙ/((c)ₙ n!) by direct products.
pub fn gamma_exact(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    len: usize,
) -> Vec<BigRational> {
    (0..=len)
        .map(|n| {
            let mut num = BigRational::one();
            let mut den = BigRational::one();
            for k in 0..n {
                let k = BigRational::from_integer(BigInt::from(k));
                num *= (a + &k) * (b + &k);
                den *= (c + &k) * (&k + BigRational::one());
            }
            num / den
        })
        .collect()
}

/// Δⁿc₀ = Σₖ (−1)ᵏ C(n,k) cₖ.
pub fn binomial_difference(c: &[BigRational], n: usize) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        let term = &c[k] * BigRational::from_integer(binom.clone());
        if k % 2 == 0 {
            acc += term
        } else {
            acc -= term
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    acc
}

/// Coefficients d₁, d₂ of z F′(z)/F(z), exact.
pub fn log_derivative_coefficients(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> (BigRational, BigRational) {
    let f = gamma_exact(a, b, c, 2);
    // zF′ = f₁z + 2f₂z² + …, divided by F = 1 + f₁z + f₂z² + …
    let n1 = f[1].clone();
    let n2 = &f[2] * BigRational::from_integer(BigInt::from(2));
    let d1 = n1.clone();
    let d2 = n2 - &d1 * &f[1];
    (d1, d2)
}
