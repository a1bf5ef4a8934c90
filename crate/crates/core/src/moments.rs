//! Hausdorff moment sequences: difference tables, total monotonicity,
//! degenerate measures, the dual transform and the generating function
//! F(z) = ∫₀¹ dμ(t)/(1 − tz) of a measure on [0, 1].

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::scalar::rational_to_f64;

/// Moments c₀, c₁, … with c₀ = 1, either exact or in floating point.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentSequence {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl MomentSequence {
    pub fn exact(values: Vec<BigRational>) -> Result<Self> {
        match values.first() {
            Some(v) if v.is_one() => Ok(Self::Exact(values)),
            Some(v) => Err(Error::Parameter(format!("c_0 must be 1, got {v}"))),
            None => Err(Error::InsufficientLength { needed: 1, have: 0 }),
        }
    }

    /// c₀ must equal 1 to within 1e−12.
    pub fn float(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            Some(v) if (v - 1.0).abs() <= 1e-12 => Ok(Self::Float(values)),
            Some(v) => Err(Error::Parameter(format!("c_0 must be 1, got {v}"))),
            None => Err(Error::InsufficientLength { needed: 1, have: 0 }),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Exact(v) => v.len(),
            Self::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn value_f64(&self, n: usize) -> Option<f64> {
        match self {
            Self::Exact(v) => v.get(n).map(rational_to_f64),
            Self::Float(v) => v.get(n).copied(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len()).filter_map(|n| self.value_f64(n)).collect()
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::InsufficientLength {
                needed,
                have: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Triangle Δᵐcₙ for m + n ≤ M, indexed `rows[m][n]`.
#[derive(Debug, Clone, PartialEq)]
pub enum DifferenceTable {
    Exact(Vec<Vec<BigRational>>),
    Float(Vec<Vec<f64>>),
}

impl DifferenceTable {
    pub fn depth(&self) -> usize {
        match self {
            Self::Exact(r) => r.len() - 1,
            Self::Float(r) => r.len() - 1,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn get_f64(&self, m: usize, n: usize) -> Option<f64> {
        match self {
            Self::Exact(r) => r.get(m).and_then(|row| row.get(n)).map(rational_to_f64),
            Self::Float(r) => r.get(m).and_then(|row| row.get(n)).copied(),
        }
    }

    pub fn get_exact(&self, m: usize, n: usize) -> Option<&BigRational> {
        match self {
            Self::Exact(r) => r.get(m).and_then(|row| row.get(n)),
            Self::Float(_) => None,
        }
    }
}

/// Exact values over a common denominator: integers kᵢ with vᵢ = kᵢ / L.
fn common_denominator(values: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = values
        .iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect();
    (ints, l)
}

fn next_row<T>(row: &[T]) -> Vec<T>
where
    for<'a> &'a T: std::ops::Sub<&'a T, Output = T>,
{
    row.windows(2).map(|w| &w[0] - &w[1]).collect()
}

/// The full triangle m + n ≤ M. Needs at least M + 1 values.
pub fn delta_table(c: &MomentSequence, depth: usize) -> Result<DifferenceTable> {
    c.require(depth + 1)?;
    match c {
        MomentSequence::Exact(v) => {
            let (mut row, l) = common_denominator(&v[..=depth]);
            let mut rows = Vec::with_capacity(depth + 1);
            loop {
                rows.push(
                    row.iter()
                        .map(|k| BigRational::new(k.clone(), l.clone()))
                        .collect(),
                );
                if row.len() == 1 {
                    break;
                }
                row = next_row(&row);
            }
            Ok(DifferenceTable::Exact(rows))
        }
        MomentSequence::Float(v) => {
            let mut row = v[..=depth].to_vec();
            let mut rows = Vec::with_capacity(depth + 1);
            loop {
                rows.push(row.clone());
                if row.len() == 1 {
                    break;
                }
                row = row.windows(2).map(|w| w[0] - w[1]).collect();
            }
            Ok(DifferenceTable::Float(rows))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TmVerdict {
    Holds,
    /// First negative entry in (m, n) lexicographic order.
    Violated {
        m: usize,
        n: usize,
        value: f64,
        exact: Option<BigRational>,
    },
}

impl TmVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds)
    }
}

/// Checks Δᵐcₙ ≥ −tol for all m + n ≤ M. Exact sequences require tol = 0.
pub fn is_totally_monotone(c: &MomentSequence, depth: usize, tol: f64) -> Result<TmVerdict> {
    c.require(depth + 1)?;
    match c {
        MomentSequence::Exact(v) => {
            if tol != 0.0 {
                return Err(Error::Parameter(
                    "exact total-monotonicity test needs tol = 0".into(),
                ));
            }
            let (mut row, l) = common_denominator(&v[..=depth]);
            let mut m = 0;
            loop {
                if let Some(n) = row.iter().position(|k| k.is_negative()) {
                    let exact = BigRational::new(row[n].clone(), l);
                    return Ok(TmVerdict::Violated {
                        m,
                        n,
                        value: rational_to_f64(&exact),
                        exact: Some(exact),
                    });
                }
                if row.len() == 1 {
                    return Ok(TmVerdict::Holds);
                }
                row = next_row(&row);
                m += 1;
            }
        }
        MomentSequence::Float(v) => {
            let mut row = v[..=depth].to_vec();
            let mut m = 0;
            loop {
                if let Some(n) = row.iter().position(|x| *x < -tol || x.is_nan()) {
                    return Ok(TmVerdict::Violated {
                        m,
                        n,
                        value: row[n],
                        exact: None,
                    });
                }
                if row.len() == 1 {
                    return Ok(TmVerdict::Holds);
                }
                row = row.windows(2).map(|w| w[0] - w[1]).collect();
                m += 1;
            }
        }
    }
}

/// μ = (1 − k)δ₀ + kδ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateMeasure {
    pub k: f64,
    pub exact: Option<BigRational>,
}

/// Detects the two-atom measures: some cₘ = 0 (m ≥ 1) forces μ = δ₀, and
/// cₘ = cₘ₊₁ (m ≥ 1) forces c₁ = c₂ = ⋯ = k.
pub fn detect_degenerate(c: &MomentSequence) -> Result<Option<DegenerateMeasure>> {
    const FLOAT_TOL: f64 = 1e-14;
    match c {
        MomentSequence::Exact(v) => {
            let tail = &v[1.min(v.len())..];
            if let Some(pos) = tail.iter().position(|x| x.is_zero()) {
                if tail[pos..].iter().any(|x| !x.is_zero()) {
                    return Err(Error::Inconsistent(format!(
                        "c_{} = 0 but a later moment is non-zero",
                        pos + 1
                    )));
                }
                return Ok(Some(DegenerateMeasure {
                    k: 0.0,
                    exact: Some(BigRational::zero()),
                }));
            }
            if tail.windows(2).any(|w| w[0] == w[1]) {
                if tail.iter().any(|x| *x != tail[0]) {
                    return Err(Error::Inconsistent(
                        "repeated moment but the tail is not constant".into(),
                    ));
                }
                return Ok(Some(DegenerateMeasure {
                    k: rational_to_f64(&tail[0]),
                    exact: Some(tail[0].clone()),
                }));
            }
            Ok(None)
        }
        MomentSequence::Float(v) => {
            let tail = &v[1.min(v.len())..];
            if let Some(pos) = tail.iter().position(|x| x.abs() <= FLOAT_TOL) {
                if tail[pos..].iter().any(|x| x.abs() > FLOAT_TOL) {
                    return Err(Error::Inconsistent(format!(
                        "c_{} = 0 but a later moment is non-zero",
                        pos + 1
                    )));
                }
                return Ok(Some(DegenerateMeasure {
                    k: 0.0,
                    exact: None,
                }));
            }
            if tail.windows(2).any(|w| (w[0] - w[1]).abs() <= FLOAT_TOL) {
                if tail.iter().any(|x| (x - tail[0]).abs() > FLOAT_TOL) {
                    return Err(Error::Inconsistent(
                        "repeated moment but the tail is not constant".into(),
                    ));
                }
                return Ok(Some(DegenerateMeasure {
                    k: tail[0],
                    exact: None,
                }));
            }
            Ok(None)
        }
    }
}

/// ĉₙ = Δⁿc₀ for n ≤ N: the moments of the reflected measure ν(E) = μ(1 − E).
pub fn dual_coefficients(c: &MomentSequence, len: usize) -> Result<MomentSequence> {
    c.require(len + 1)?;
    match c {
        MomentSequence::Exact(v) => {
            let (mut row, l) = common_denominator(&v[..=len]);
            let mut out = Vec::with_capacity(len + 1);
            loop {
                out.push(BigRational::new(row[0].clone(), l.clone()));
                if row.len() == 1 {
                    break;
                }
                row = next_row(&row);
            }
            MomentSequence::exact(out)
        }
        MomentSequence::Float(v) => {
            let mut row = v[..=len].to_vec();
            let mut out = Vec::with_capacity(len + 1);
            loop {
                out.push(row[0]);
                if row.len() == 1 {
                    break;
                }
                row = row.windows(2).map(|w| w[0] - w[1]).collect();
            }
            MomentSequence::float(out)
        }
    }
}

/// Singular part K·(1−t)^Δ of a density near t = 1, −1 < Δ < 0, integrated
/// in closed form so that quadrature only sees the remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

impl EdgeTerm {
    fn value(&self, one_minus_t: f64) -> f64 {
        self.coefficient * one_minus_t.powf(self.exponent)
    }

    /// K ∫₀¹ tⁿ(1−t)^Δ dt = K·n!/((Δ+1)(Δ+2)⋯(Δ+n+1)).
    fn moment(&self, n: usize) -> f64 {
        let mut v = self.coefficient / (self.exponent + 1.0);
        for k in 1..=n {
            v *= k as f64 / (self.exponent + 1.0 + k as f64);
        }
        v
    }

    /// K ∫₀¹ (1−t)^Δ/(1−tz) dt = K·₂F₁(1,1;Δ+2;z)/(Δ+1).
    fn cauchy(&self, z: Complex64) -> Result<Complex64> {
        let p = crate::hyp2f1::HGParams::real(1.0, 1.0, self.exponent + 2.0)?;
        let f = crate::hyp2f1::f21_lambda(&p, z)?;
        Ok(f.value * (self.coefficient / (self.exponent + 1.0)))
    }
}

/// A probability measure on [0, 1]: α₀δ₀ + α₁δ₁ + density·dt.
pub trait UnitMeasure {
    fn alpha0(&self) -> f64;
    fn alpha1(&self) -> f64;
    /// Density at t, given also 1 − t; zero when there is no density.
    fn density(&self, t: f64, one_minus_t: f64) -> Result<f64>;
    fn has_density(&self) -> bool {
        true
    }
    fn edge(&self) -> Option<EdgeTerm> {
        None
    }
    fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec::default()
    }
    /// Density minus the edge term at the nodes of `level`.
    fn regular_density_at_nodes(&self, level: u32) -> Result<Arc<Vec<f64>>> {
        let edge = self.edge();
        quadrature::nodes(level)
            .iter()
            .map(|n| {
                let d = self.density(n.t, n.one_minus_t)?;
                Ok(match edge {
                    Some(e) => d - e.value(n.one_minus_t),
                    None => d,
                })
            })
            .collect::<Result<Vec<f64>>>()
            .map(Arc::new)
    }
}

fn slit_check(z: Complex64) -> Result<()> {
    if z.re >= 1.0 && z.im.abs() < 1e-300 {
        return Err(Error::Slit(format!("{z}")));
    }
    Ok(())
}

/// ∫ dμ(t)/(1 − tz) with the given quadrature.
pub fn generating_function_with(
    measure: &dyn UnitMeasure,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    slit_check(z)?;
    let mut total = Complex64::new(measure.alpha0(), 0.0);
    if measure.alpha1() != 0.0 {
        total += measure.alpha1() / (1.0 - z);
    }
    if measure.has_density() {
        let dens = measure.regular_density_at_nodes(spec.level)?;
        let ns = quadrature::nodes(spec.level);
        let values: Vec<Complex64> = ns
            .iter()
            .zip(dens.iter())
            .map(|(n, d)| *d / (1.0 - n.t * z))
            .collect();
        total += match quadrature::integrate_values(&values, spec.level, spec.abs_tol) {
            Err(Error::QuadratureNonConvergence { .. })
                if (1.0 / z).re > 0.0 && (1.0 / z).re < 1.0 =>
            {
                split_cauchy(measure, z, spec)?
            }
            other => other?,
        };
        if let Some(e) = measure.edge() {
            total += e.cauchy(z)?;
        }
    }
    Ok(total)
}

/// Close to the slit the kernel 1/(1 − tz) peaks at t = Re(1/z); splitting
/// there puts the peak at an endpoint of both pieces, where the nodes
/// cluster.
fn split_cauchy(
    measure: &dyn UnitMeasure,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let split = (1.0 / z).re;
    let rest = 1.0 - split;
    let edge = measure.edge();
    let regular = |t: f64, omt: f64| -> Result<f64> {
        let d = measure.density(t, omt)?;
        Ok(edge.map_or(d, |e| d - e.value(omt)))
    };
    let ns = quadrature::nodes(spec.level);
    let left: Vec<Complex64> = ns
        .iter()
        .map(|n| {
            let t = split * n.t;
            Ok(split * regular(t, rest + split * n.one_minus_t)? / (1.0 - t * z))
        })
        .collect::<Result<_>>()?;
    let right: Vec<Complex64> = ns
        .iter()
        .map(|n| {
            let t = split + rest * n.t;
            Ok(rest * regular(t, rest * n.one_minus_t)? / (1.0 - t * z))
        })
        .collect::<Result<_>>()?;
    let tol = 0.5 * spec.abs_tol;
    Ok(quadrature::integrate_values(&left, spec.level, tol)?
        + quadrature::integrate_values(&right, spec.level, tol)?)
}

/// ∫ dμ(t)/(1 − tz) with the measure's own quadrature.
pub fn generating_function(measure: &dyn UnitMeasure, z: Complex64) -> Result<Complex64> {
    generating_function_with(measure, z, &measure.quadrature())
}

/// ∫ tⁿ dμ(t).
pub fn moment_of_measure(measure: &dyn UnitMeasure, n: usize) -> Result<f64> {
    let spec = measure.quadrature();
    let mut total = measure.alpha1() + if n == 0 { measure.alpha0() } else { 0.0 };
    if measure.has_density() {
        let dens = measure.regular_density_at_nodes(spec.level)?;
        let ns = quadrature::nodes(spec.level);
        let values: Vec<Complex64> = ns
            .iter()
            .zip(dens.iter())
            .map(|(node, d)| Complex64::new(*d * node.t.powi(n as i32), 0.0))
            .collect();
        total += quadrature::integrate_values(&values, spec.level, spec.abs_tol)?.re;
        if let Some(e) = measure.edge() {
            total += e.moment(n);
        }
    }
    Ok(total)
}

/// A measure given by closures; useful for reference measures such as
/// Lebesgue measure.
pub struct DensityMeasure<F> {
    pub alpha0: f64,
    pub alpha1: f64,
    density: Option<F>,
    spec: QuadratureSpec,
}

impl<F: Fn(f64, f64) -> f64> DensityMeasure<F> {
    pub fn new(alpha0: f64, alpha1: f64, density: F) -> Self {
        Self {
            alpha0,
            alpha1,
            density: Some(density),
            spec: QuadratureSpec::default(),
        }
    }

    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Self {
        self.spec = spec;
        self
    }
}

/// (1 − k)δ₀ + kδ₁.
pub fn atoms(k: f64) -> DensityMeasure<fn(f64, f64) -> f64> {
    DensityMeasure {
        alpha0: 1.0 - k,
        alpha1: k,
        density: None,
        spec: QuadratureSpec::default(),
    }
}

/// Lebesgue measure on [0, 1].
pub fn lebesgue() -> DensityMeasure<fn(f64, f64) -> f64> {
    DensityMeasure::new(0.0, 0.0, |_, _| 1.0)
}

impl<F: Fn(f64, f64) -> f64> UnitMeasure for DensityMeasure<F> {
    fn alpha0(&self) -> f64 {
        self.alpha0
    }
    fn alpha1(&self) -> f64 {
        self.alpha1
    }
    fn density(&self, t: f64, one_minus_t: f64) -> Result<f64> {
        Ok(self.density.as_ref().map_or(0.0, |f| f(t, one_minus_t)))
    }
    fn has_density(&self) -> bool {
        self.density.is_some()
    }
    fn quadrature(&self) -> QuadratureSpec {
        self.spec
    }
}

/// Four probes, their extrapolated limit and a clamp to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub raw: [f64; 4],
    pub extrapolated: f64,
    pub clamped: f64,
    /// The two Aitken estimates differ by more than 1e−4.
    pub divergent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailLimits {
    /// lim F(x) as x → −∞, i.e. μ({0}).
    pub alpha0: TailEstimate,
    /// lim (1 − x)F(x) as x → 1⁻, i.e. μ({1}).
    pub alpha1: TailEstimate,
}

const CAUCHY_TOL: f64 = 1e-4;

fn aitken(s0: f64, s1: f64, s2: f64) -> f64 {
    let d1 = s1 - s0;
    let d2 = s2 - s1;
    let den = d2 - d1;
    if d2.abs() <= 1e-13 * s2.abs().max(1.0)
        || den.abs() <= 1e-300
        || (d2 * d2 / den).abs() > d2.abs() * 10.0
    {
        return s2;
    }
    s2 - d2 * d2 / den
}

fn extrapolate(raw: [f64; 4]) -> TailEstimate {
    let e1 = aitken(raw[0], raw[1], raw[2]);
    let e2 = aitken(raw[1], raw[2], raw[3]);
    let extrapolated = if e2.is_finite() { e2 } else { raw[3] };
    TailEstimate {
        raw,
        extrapolated,
        clamped: extrapolated.clamp(0.0, 1.0),
        divergent: !((e1 - e2).abs() <= CAUCHY_TOL),
    }
}

/// Atom estimates from a real evaluator f(x, 1 − x) on (−∞, 1): probes at
/// x = −10ᵏ and x = 1 − 10⁻ᵏ for k = 3..6, Aitken-extrapolated.
pub fn tail_limits<F>(f: F) -> Result<TailLimits>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut left = [0.0; 4];
    let mut right = [0.0; 4];
    for (i, k) in (3..=6).enumerate() {
        let big = 10f64.powi(k);
        left[i] = f(-big, 1.0 + big)?;
        let d = 10f64.powi(-k);
        right[i] = d * f(1.0 - d, d)?;
    }
    Ok(TailLimits {
        alpha0: extrapolate(left),
        alpha1: extrapolate(right),
    })
}
