//! Hausdorff moment sequences and the Gauss hypergeometric function.
//!
//! Decides whether ₂F₁(a,b;c;·) is the generating function ∫ dμ(t)/(1−tz)
//! of a probability measure on [0, 1], builds that measure, and checks it
//! against exact Taylor coefficients, quadrature reconstruction and Wall
//! continued fractions.

pub mod classify;
pub mod error;
pub mod gfraction;
pub mod hyp2f1;
pub mod measure;
pub mod moments;
pub mod quadrature;
pub mod scalar;

pub use classify::{
    classify_starlike, classify_t, starlike_coefficient_witness, tm_coefficients, StarlikeBranch,
    StarlikeClassification, TClassification, TReason, TVerdict, TmParams,
};
pub use error::{Error, Result};
pub use gfraction::{
    eval_gfraction, gauss_g_params, series_to_gfraction, GFraction, GFractionOutcome,
};
pub use hyp2f1::{
    f21_boundary_im, f21_lambda, f21_series, limit_at_one, EvalResult, HGParams, Method,
    OneLimitClass, OneLimitKind,
};
pub use measure::{
    reconstruct, representing_measure, verify_measure, DensityKind, RepresentingMeasure,
    VerifyReport,
};
pub use moments::{
    delta_table, detect_degenerate, dual_coefficients, generating_function, is_totally_monotone,
    moment_of_measure, tail_limits, DifferenceTable, MomentSequence, TmVerdict, UnitMeasure,
};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use quadrature::QuadratureSpec;
pub use scalar::{ComplexValue, GaussianRational};
