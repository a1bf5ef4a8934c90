//! The representing measure of ₂F₁(a,b;c;·) ∈ T:
//!
//! dμ(t) = α₀δ₀ + α₁δ₁ + Im F⁺(1/t)/(πt) dt
//!
//! with α₀ = 0 (for ab ≠ 0), α₁ = Γ(c)/(Γ(a)Γ(b)) exactly when a + b = c + 1,
//! and density h(t)/π where, for b − a ∉ ℤ,
//!
//! h(t) = A t^{a−1} F(a,1−c+a;1−b+a;t) + B t^{b−1} F(b,1−c+b;1−a+b;t),
//! A = Γ(c)Γ(b−a) sin(aπ)/(Γ(b)Γ(c−a)),  B = Γ(c)Γ(a−b) sin(bπ)/(Γ(a)Γ(c−b)),
//!
//! (A = 0 when c − a is a non-positive integer, B likewise). When b − a is a
//! non-negative integer the logarithmic boundary series is used instead;
//! when c − a is an integer as well, or a = 1, the density is the
//! ε-limit of Im F(1/t + iε)/(πt).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::classify::{classify_t, TVerdict};
use crate::error::{Error, Result};
use crate::hyp2f1::{
    boundary_im, boundary_im_eps_limit, f21_lambda, f21_unit_interval, HGParams, NON_GENERIC_GUARD,
};
use crate::moments::{self, EdgeTerm, UnitMeasure};
use crate::quadrature::QuadratureSpec;
use crate::scalar::{gamma_real, nearest_integer, rgamma_real, sin_pi_real, POLE_TOLERANCE};

/// Δ below which the (1−t)^Δ singularity is integrated in closed form.
const EDGE_SUBTRACTION_BELOW: f64 = -0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    None,
    Generic,
    NonGenericIntegerGap,
    NumericFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityData {
    None,
    Generic { a_coef: f64, b_coef: f64 },
    IntegerGap { m: usize },
    Fallback,
}

pub struct RepresentingMeasure {
    pub alpha0: f64,
    pub alpha1: f64,
    pub kind: DensityKind,
    /// Real parameters with a ≤ b; (k, 1, 1) for (1−z)^{−k}.
    pub params: HGParams,
    pub data: DensityData,
    quadrature: QuadratureSpec,
    edge: Option<EdgeTerm>,
    cache: Mutex<HashMap<u32, Arc<Vec<f64>>>>,
}

impl std::fmt::Debug for RepresentingMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RepresentingMeasure")
            .field("alpha0", &self.alpha0)
            .field("alpha1", &self.alpha1)
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("data", &self.data)
            .field("edge", &self.edge)
            .finish()
    }
}

impl Clone for RepresentingMeasure {
    fn clone(&self) -> Self {
        Self {
            alpha0: self.alpha0,
            alpha1: self.alpha1,
            kind: self.kind,
            params: self.params,
            data: self.data,
            quadrature: self.quadrature,
            edge: self.edge,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

/// Default quadrature for measures: level 11, tolerance 1e−9, doubled when
/// the density is unbounded at t = 1.
pub fn default_quadrature(delta: f64) -> QuadratureSpec {
    let tol = if delta < 0.0 { 2e-9 } else { 1e-9 };
    QuadratureSpec {
        level: 11,
        abs_tol: tol,
        ..QuadratureSpec::default()
    }
}

fn near_integer(x: f64, tol: f64) -> bool {
    nearest_integer(x).0.abs() <= tol
}

fn atoms_only(alpha0: f64, alpha1: f64, params: HGParams) -> RepresentingMeasure {
    RepresentingMeasure {
        alpha0,
        alpha1,
        kind: DensityKind::None,
        params,
        data: DensityData::None,
        quadrature: default_quadrature(0.0),
        edge: None,
        cache: Mutex::new(HashMap::new()),
    }
}

/// Measure for real (a, b, c) with ₂F₁(a,b;c;·) ∈ T.
pub fn representing_measure(a: f64, b: f64, c: f64) -> Result<RepresentingMeasure> {
    let cls = classify_t(
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        Complex64::new(c, 0.0),
    );
    match cls.verdict {
        TVerdict::InvalidC | TVerdict::NotInT => {
            return Err(Error::NotInT(format!("{a}, {b}; {c}")));
        }
        TVerdict::TrivialPower(k) => {
            if k <= POLE_TOLERANCE {
                return Ok(atoms_only(1.0, 0.0, HGParams::real(0.0, 1.0, 1.0)?));
            }
            if k >= 1.0 - POLE_TOLERANCE {
                return Ok(atoms_only(0.0, 1.0, HGParams::real(1.0, 1.0, 1.0)?));
            }
            return build(k, 1.0, 1.0);
        }
        TVerdict::InT => {}
    }
    if cls.reason == crate::classify::TReason::AbZero {
        return Ok(atoms_only(1.0, 0.0, HGParams::real(a, b, c)?));
    }
    let [a, b, c] = cls.normalized.map(|x| x.re);
    build(a, b, c)
}

fn build(a: f64, b: f64, c: f64) -> Result<RepresentingMeasure> {
    let params = HGParams::real(a, b, c)?;
    let alpha1 = if (a + b - c - 1.0).abs() < POLE_TOLERANCE {
        gamma_real(c)? * rgamma_real(a) * rgamma_real(b)
    } else {
        0.0
    };
    let gap = b - a;
    let (kind, data) = if (a - 1.0).abs() <= POLE_TOLERANCE {
        (DensityKind::NumericFallback, DensityData::Fallback)
    } else if !near_integer(gap, NON_GENERIC_GUARD) {
        let gc = gamma_real(c)?;
        let a_coef = gc * gamma_real(gap)? * rgamma_real(b) * rgamma_real(c - a) * sin_pi_real(a);
        let b_coef = gc * gamma_real(-gap)? * rgamma_real(a) * rgamma_real(c - b) * sin_pi_real(b);
        (
            DensityKind::Generic,
            DensityData::Generic { a_coef, b_coef },
        )
    } else if near_integer(gap, POLE_TOLERANCE) && !near_integer(c - a, NON_GENERIC_GUARD) {
        (
            DensityKind::NonGenericIntegerGap,
            DensityData::IntegerGap {
                m: gap.round() as usize,
            },
        )
    } else {
        (DensityKind::NumericFallback, DensityData::Fallback)
    };
    let delta = c - a - b;
    let edge = if delta < EDGE_SUBTRACTION_BELOW && delta > -1.0 + POLE_TOLERANCE {
        let k0 = gamma_real(c)? * gamma_real(-delta)? * rgamma_real(a) * rgamma_real(b);
        Some(EdgeTerm {
            coefficient: k0 * sin_pi_real(-delta) / PI,
            exponent: delta,
        })
    } else {
        None
    };
    Ok(RepresentingMeasure {
        alpha0: 0.0,
        alpha1,
        kind,
        params,
        data,
        quadrature: default_quadrature(delta),
        edge,
        cache: Mutex::new(HashMap::new()),
    })
}

/// One density value with its reporting clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub t: f64,
    pub raw: f64,
    pub clamped: f64,
    /// raw < −1e−10
    pub negative: bool,
}

impl RepresentingMeasure {
    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Self {
        self.quadrature = spec;
        self.cache = Mutex::new(HashMap::new());
        self
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        self.quadrature
    }

    pub fn edge_term(&self) -> Option<EdgeTerm> {
        self.edge
    }

    fn abc(&self) -> (f64, f64, f64) {
        (self.params.a.re, self.params.b.re, self.params.c.re)
    }

    /// h(t)/π given t and 1 − t.
    pub fn density_with_complement(&self, t: f64, one_minus_t: f64) -> Result<f64> {
        let (a, b, c) = self.abc();
        match self.data {
            DensityData::None => Ok(0.0),
            DensityData::Generic { a_coef, b_coef } => {
                let mut h = 0.0;
                if a_coef != 0.0 {
                    let p = HGParams::real(a, 1.0 - c + a, 1.0 - b + a)?;
                    h += a_coef * t.powf(a - 1.0) * f21_unit_interval(&p, t, one_minus_t)?;
                }
                if b_coef != 0.0 {
                    let p = HGParams::real(b, 1.0 - c + b, 1.0 - a + b)?;
                    h += b_coef * t.powf(b - 1.0) * f21_unit_interval(&p, t, one_minus_t)?;
                }
                Ok(h / PI)
            }
            DensityData::IntegerGap { .. } => {
                let x = 1.0 / t;
                Ok(boundary_im(a, b, c, x, one_minus_t / t)? * x / PI)
            }
            DensityData::Fallback => {
                let x = 1.0 / t;
                Ok(boundary_im_eps_limit(&self.params, x, one_minus_t / t)? * x / PI)
            }
        }
    }

    /// Density at t ∈ (0, 1).
    pub fn density_eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("density needs 0 < t < 1, got {t}")));
        }
        if self.kind == DensityKind::None {
            return Err(Error::Domain("measure has no density".into()));
        }
        self.density_with_complement(t, 1.0 - t)
    }

    pub fn density_sample(&self, t: f64) -> Result<DensitySample> {
        let raw = self.density_eval(t)?;
        Ok(DensitySample {
            t,
            raw,
            clamped: raw.max(0.0),
            negative: raw < -1e-10,
        })
    }

    /// The generic A/B density formula evaluated
    /// directly, for comparison with the fallback at a = 1.
    fn closed_form_density(&self, t: f64) -> Option<f64> {
        let (a, b, c) = self.abc();
        if self.kind != DensityKind::NumericFallback || near_integer(b - a, NON_GENERIC_GUARD) {
            return None;
        }
        let generic = build_generic_only(a, b, c).ok()?;
        generic.density_with_complement(t, 1.0 - t).ok()
    }
}

fn build_generic_only(a: f64, b: f64, c: f64) -> Result<RepresentingMeasure> {
    let mut m = build(a, b, c)?;
    let gc = gamma_real(c)?;
    let gap = b - a;
    let a_coef = gc * gamma_real(gap)? * rgamma_real(b) * rgamma_real(c - a) * sin_pi_real(a);
    let b_coef = gc * gamma_real(-gap)? * rgamma_real(a) * rgamma_real(c - b) * sin_pi_real(b);
    m.kind = DensityKind::Generic;
    m.data = DensityData::Generic { a_coef, b_coef };
    Ok(m)
}

impl UnitMeasure for RepresentingMeasure {
    fn alpha0(&self) -> f64 {
        self.alpha0
    }
    fn alpha1(&self) -> f64 {
        self.alpha1
    }
    fn density(&self, t: f64, one_minus_t: f64) -> Result<f64> {
        self.density_with_complement(t, one_minus_t)
    }
    fn has_density(&self) -> bool {
        self.kind != DensityKind::None
    }
    fn edge(&self) -> Option<EdgeTerm> {
        self.edge
    }
    fn quadrature(&self) -> QuadratureSpec {
        self.quadrature
    }
    fn regular_density_at_nodes(&self, level: u32) -> Result<Arc<Vec<f64>>> {
        if let Some(v) = self
            .cache
            .lock()
            .expect("density cache poisoned")
            .get(&level)
        {
            return Ok(v.clone());
        }
        let edge = self.edge;
        let values: Vec<f64> = crate::quadrature::nodes(level)
            .iter()
            .map(|n| {
                let d = self.density_with_complement(n.t, n.one_minus_t)?;
                Ok(match edge {
                    Some(e) => d - e.coefficient * n.one_minus_t.powf(e.exponent),
                    None => d,
                })
            })
            .collect::<Result<_>>()?;
        let values = Arc::new(values);
        self.cache
            .lock()
            .expect("density cache poisoned")
            .insert(level, values.clone());
        Ok(values)
    }
}

/// Density at the n midpoints (i + 1/2)/n.
pub fn density_sample_grid(m: &RepresentingMeasure, n: usize) -> Result<Vec<DensitySample>> {
    (0..n)
        .map(|i| m.density_sample((i as f64 + 0.5) / n as f64))
        .collect()
}

/// α₀ + α₁/(1−z) + ∫ density/(1−tz) dt at the given quadrature.
pub fn reconstruct(m: &RepresentingMeasure, z: Complex64, q: &QuadratureSpec) -> Result<Complex64> {
    moments::generating_function_with(m, z, q)
}

/// Points used by [`verify_measure`]: ten on the real axis in [−10, 0.9]
/// and ten in the upper half-plane.
pub fn verification_points() -> Vec<Complex64> {
    let real = [-10.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 0.9];
    let upper = [
        (-3.0, 2.0),
        (-0.5, 0.5),
        (0.5, 0.5),
        (0.9, 0.2),
        (1.0, 0.1),
        (1.5, 0.3),
        (2.0, 1.0),
        (5.0, 1.0),
        (10.0, 3.0),
        (0.0, 4.0),
    ];
    real.iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(upper.iter().map(|&(x, y)| Complex64::new(x, y)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub kind: DensityKind,
    pub alpha0: f64,
    pub alpha1: f64,
    /// |∫tⁿdμ − γₙ| for n = 0..=n_moments.
    pub moment_defects: Vec<f64>,
    pub mass_defect: f64,
    /// Minimum raw density on a 200-point midpoint grid (None without density).
    pub min_density: Option<f64>,
    pub negative_density: bool,
    /// max |reconstruct(z) − F(z)| over [`verification_points`].
    pub max_reconstruction_error: f64,
    /// For the a = 1 fallback with b − a ∉ ℤ: max |fallback − closed form|
    /// on the density grid.
    pub fallback_discrepancy: Option<f64>,
}

impl VerifyReport {
    pub fn max_moment_defect(&self) -> f64 {
        self.moment_defects.iter().copied().fold(0.0, f64::max)
    }
}

/// γₙ = (a)ₙ(b)ₙ/((c)ₙ n!) in floating point.
pub fn gamma_coefficients(a: f64, b: f64, c: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut g = 1.0;
    for n in 0..=len {
        out.push(g);
        let k = n as f64;
        g *= (a + k) * (b + k) / ((c + k) * (k + 1.0));
    }
    out
}

pub fn verify_measure(
    a: f64,
    b: f64,
    c: f64,
    n_moments: usize,
    q: &QuadratureSpec,
) -> Result<VerifyReport> {
    let m = representing_measure(a, b, c)?.with_quadrature(*q);
    let gammas = gamma_coefficients(a, b, c, n_moments);
    let moment_defects = gammas
        .iter()
        .enumerate()
        .map(|(n, g)| Ok((moments::moment_of_measure(&m, n)? - g).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let mass_defect = moment_defects[0];
    let grid: Vec<f64> = (0..200).map(|i| (i as f64 + 0.5) / 200.0).collect();
    let (min_density, fallback_discrepancy) = if m.kind == DensityKind::None {
        (None, None)
    } else {
        let mut min = f64::INFINITY;
        let mut disc: Option<f64> = None;
        for &t in &grid {
            let d = m.density_eval(t)?;
            min = min.min(d);
            if let Some(cf) = m.closed_form_density(t) {
                disc = Some(disc.unwrap_or(0.0).max((cf - d).abs()));
            }
        }
        (Some(min), disc)
    };
    let p = HGParams::real(a, b, c)?;
    let mut max_err: f64 = 0.0;
    for z in verification_points() {
        let r = reconstruct(&m, z, q)?;
        let f = f21_lambda(&p, z)?.value;
        max_err = max_err.max((r - f).norm());
    }
    Ok(VerifyReport {
        kind: m.kind,
        alpha0: m.alpha0,
        alpha1: m.alpha1,
        moment_defects,
        mass_defect,
        min_density,
        negative_density: min_density.is_some_and(|d| d < -1e-10),
        max_reconstruction_error: max_err,
        fallback_discrepancy,
    })
}
