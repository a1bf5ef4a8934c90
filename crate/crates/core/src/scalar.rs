//! Scalars shared by every other module: complex Γ, ψ and Pochhammer
//! symbols in double precision, and exact (Gaussian) rationals.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Complex double; the scalar of every analytic evaluation in the crate.
pub type ComplexValue = Complex64;

/// Distance below which an argument is treated as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

// Godfrey's coefficients, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    4.652_362_892_704_858e-5,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

// B_{2k} / (2k) for the digamma asymptotic series.
const DIGAMMA_ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Signed distance from `x` to the nearest integer, and that integer.
pub fn nearest_integer(x: f64) -> (f64, f64) {
    let r = x.round();
    (x - r, r)
}

/// True when `z` is within `tol` of an integer (real axis only).
pub fn is_near_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && nearest_integer(z.re).0.abs() <= tol
}

/// True when `z` is within [`POLE_TOLERANCE`] of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    is_near_integer(z, POLE_TOLERANCE) && z.re < 0.5
}

fn pole_check(z: Complex64) -> Result<()> {
    if is_nonpositive_integer(z) {
        Err(Error::Pole(format!("{z}")))
    } else {
        Ok(())
    }
}

/// sin(πz) with the real part reduced first, so integer arguments give exact zeros.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let (r, n) = nearest_integer(z.re);
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    Complex64::new(s * y.cosh(), c * y.sinh()) * sign
}

/// cos(πz) with argument reduction.
pub fn cos_pi(z: Complex64) -> Complex64 {
    let (r, n) = nearest_integer(z.re);
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    Complex64::new(c * y.cosh(), -s * y.sinh()) * sign
}

/// sin(πx) for real x.
pub fn sin_pi_real(x: f64) -> f64 {
    sin_pi(Complex64::new(x, 0.0)).re
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &coef) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += coef / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    ((z + 0.5) * t.ln() - t).exp() * series * SQRT_2PI
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        PI / (sin_pi(z) * lanczos(1.0 - z))
    } else {
        lanczos(z)
    }
}

/// Γ(z) for complex z away from the poles.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    pole_check(z)?;
    Ok(gamma_unchecked(z))
}

/// Γ(x) for real x.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

/// 1/Γ(z), an entire function; exactly zero at the poles of Γ.
pub fn rgamma(z: ComplexValue) -> ComplexValue {
    if is_nonpositive_integer(z) {
        return Complex64::zero();
    }
    if z.re < 0.5 {
        sin_pi(z) * lanczos(1.0 - z) / PI
    } else {
        1.0 / lanczos(z)
    }
}

/// 1/Γ(x) for real x.
pub fn rgamma_real(x: f64) -> f64 {
    rgamma(Complex64::new(x, 0.0)).re
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: ComplexValue) -> Result<ComplexValue> {
    pole_check(z)?;
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // ψ(1−z) − ψ(z) = π cot(πz)
        return digamma_unchecked(1.0 - z) - PI * cos_pi(z) / sin_pi(z);
    }
    let mut z = z;
    let mut shift = Complex64::zero();
    while z.re < 12.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut tail = Complex64::zero();
    for coef in DIGAMMA_ASYMPTOTIC {
        tail += coef * pow;
        pow *= inv2;
    }
    shift + z.ln() - 0.5 / z - tail
}

/// ψ(x) for real x.
pub fn digamma_real(x: f64) -> Result<f64> {
    digamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// Rising factorial (a)_n = a(a+1)…(a+n−1).
pub fn pochhammer(a: ComplexValue, n: usize) -> ComplexValue {
    (0..n).fold(Complex64::one(), |acc, k| acc * (a + k as f64))
}

/// Exact rising factorial over the rationals.
pub fn pochhammer_rational(a: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += BigInt::one();
    }
    acc
}

/// Exact rising factorial over the Gaussian rationals.
pub fn pochhammer_exact(a: &GaussianRational, n: usize) -> GaussianRational {
    let mut acc = GaussianRational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc = &acc * &factor;
        factor.re += BigInt::one();
    }
    acc
}

/// Nearest f64 to a big rational, robust to numerators and denominators
/// beyond the f64 range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    // Scale both parts down to 64 significant bits.
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    let shift_n = (num_bits - 64).max(0);
    let shift_d = (den_bits - 64).max(0);
    let n = (q.numer().abs() >> shift_n as usize)
        .to_f64()
        .unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let v = n / d * 2f64.powi((shift_n - shift_d) as i32);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Exact element of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    /// (p_re/q_re) + i (p_im/q_im) from machine integers.
    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        Self {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn one() -> Self {
        Self::from_real(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::from_real(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |q|² = re² + im², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> ComplexValue {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Division; `None` when the divisor is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Some(Self {
            re: num.re / &d,
            im: num.im / d,
        })
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    /// Panics on a zero divisor, like `BigRational`.
    fn div(self, rhs: Self) -> GaussianRational {
        self.checked_div(rhs)
            .expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: Self) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
