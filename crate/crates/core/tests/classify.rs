mod common;

use common::*;
use hgmoment::classify::{classify_starlike_exact, classify_t_exact};
use hgmoment::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn quarter() -> Complex64 {
    Complex64::new(0.5, 0.25)
}

#[test]
fn classification_examples() {
    let v = classify_t(c(0.5), c(2.0), c(1.5));
    assert_eq!(v.verdict, TVerdict::InT);
    assert!(v.boundary);
    let v = classify_t(quarter(), quarter().conj(), c(2.0));
    assert_eq!(
        (v.verdict, v.reason),
        (TVerdict::NotInT, TReason::ComplexExclusion)
    );
    let v = classify_t(c(3.0), c(0.5), c(3.0));
    assert_eq!(
        (v.verdict, v.reason),
        (TVerdict::TrivialPower(0.5), TReason::PowerCase)
    );
    assert!(v.in_t());
    let v = classify_t(Complex64::new(1.0, 2.0), c(0.5), Complex64::new(1.0, 2.0));
    assert_eq!(v.verdict, TVerdict::TrivialPower(0.5));
    assert_eq!(
        classify_t(c(0.5), c(0.5), c(-2.0)).verdict,
        TVerdict::InvalidC
    );
    assert_eq!(classify_t(c(0.0), c(9.0), c(0.5)).reason, TReason::AbZero);
}

#[test]
fn coefficient_examples() {
    let v = tm_coefficients(
        &TmParams::Rational {
            a: q(1, 2),
            b: q(1, 1),
            c: q(1, 1),
        },
        2,
    )
    .unwrap();
    let MomentSequence::Exact(v) = v else {
        unreachable!()
    };
    assert_eq!(v[2], q(3, 8));
    let a = GaussianRational::from_ratios((1, 2), (1, 4));
    let MomentSequence::Exact(v) =
        tm_coefficients(&TmParams::ConjugatePair { a, c: q(2, 1) }, 1).unwrap()
    else {
        unreachable!()
    };
    assert_eq!(v, vec![q(1, 1), q(5, 32)]);
    assert!(tm_coefficients(
        &TmParams::Rational {
            a: q(1, 2),
            b: q(1, 1),
            c: q(-3, 1)
        },
        2
    )
    .is_err());
}

#[test]
fn starlike_examples() {
    let s = classify_starlike(c(0.5), c(1.0), c(2.0));
    assert!(s.verdict && s.branch == StarlikeBranch::PositiveParameters);
    let s = classify_starlike(c(0.5), c(2.0), c(2.0));
    assert_eq!(s.branch, StarlikeBranch::PowerForm(0.5));
    assert!(!classify_starlike(c(1.0), c(3.0), c(2.0)).verdict);
    let w = starlike_coefficient_witness(0.5, 1.0, 2.0).unwrap();
    assert!((w.value - 1.0 / 16.0).abs() < 1e-15 && w.difference < 1e-10);
    assert_eq!(
        starlike_coefficient_witness(2.0, 0.7, 2.0).unwrap().value,
        0.0
    );
    assert!((starlike_coefficient_witness(1.0, 3.0, 2.0).unwrap().value + 0.25).abs() < 1e-15);
    assert!(starlike_coefficient_witness(1.0, 3.0, -2.0).is_err());
}

#[test]
fn verdicts_agree_with_exact_total_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut deep = Vec::new();
    for i in 0..100 {
        let [a, b, cc] = sample_triple(&mut rng, i % 2 == 0, 1e-2);
        let verdict = classify_t_exact(&a, &b, &cc);
        let seq = tm_coefficients(
            &TmParams::Rational {
                a: a.clone(),
                b: b.clone(),
                c: cc.clone(),
            },
            60,
        )
        .unwrap();
        if verdict.in_t() {
            assert!(
                is_totally_monotone(&seq, 40, 0.0).unwrap().holds(),
                "({a},{b},{cc})"
            );
        } else if is_totally_monotone(&seq, 60, 0.0).unwrap().holds() {
            deep.push(format!("({a},{b},{cc})"));
        }
    }
    if !deep.is_empty() {
        eprintln!(
            "NotInT triples without a violation at depth 60: {}",
            deep.join(" ")
        );
    }
}

#[test]
fn starlike_implies_class_t_on_a_grid() {
    let grid = quarter_grid();
    for a in &grid {
        for b in &grid {
            for cc in &grid {
                let s = classify_starlike_exact(a, b, cc);
                assert_eq!(s.verdict, oracle_starlike(a, b, cc), "({a},{b},{cc})");
                if s.branch == StarlikeBranch::PositiveParameters {
                    assert!(classify_t_exact(a, b, cc).in_t());
                }
            }
        }
    }
}

#[test]
fn boundary_values_are_positive_inside() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..15 {
        let [a, b, cc] = sample_triple(&mut rng, true, 1e-2).map(|x| qf(&x));
        let p = HGParams::real(a, b, cc).unwrap();
        for k in 1..=30 {
            let x = 1.0 + 99.0 * (k as f64 / 30.0).powi(3);
            assert!(
                f21_boundary_im(&p, x).unwrap() >= -1e-9,
                "({a},{b},{cc}) x={x}"
            );
        }
    }
}

proptest! {
    #[test]
    fn symmetric_verdicts(a in -2.0..3.0f64, b in -2.0..3.0f64, cc in -2.0..3.0f64) {
        let x = classify_t(c(a), c(b), c(cc));
        let y = classify_t(c(b), c(a), c(cc));
        prop_assert_eq!(x.verdict, y.verdict);
        prop_assert_eq!(classify_starlike(c(a), c(b), c(cc)), classify_starlike(c(b), c(a), c(cc)));
    }

    #[test]
    fn float_and_exact_agree(an in -16i64..24, bn in -16i64..24, cn in -16i64..24) {
        let (a, b, cc) = (q(an, 8), q(bn, 8), q(cn, 8));
        let e = classify_t_exact(&a, &b, &cc);
        let f = classify_t(c(qf(&a)), c(qf(&b)), c(qf(&cc)));
        prop_assert_eq!(e.verdict, f.verdict);
        prop_assert_eq!(e.boundary, f.boundary);
    }
}
