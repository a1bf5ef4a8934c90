mod common;

use common::*;
use hgmoment::gfraction::{gauss_g_params_exact, gauss_ratio_check, CFractionCoeffs};
use hgmoment::*;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn gamma_seq(a: &BigRational, b: &BigRational, cc: &BigRational, len: usize) -> MomentSequence {
    tm_coefficients(
        &TmParams::Rational {
            a: a.clone(),
            b: b.clone(),
            c: cc.clone(),
        },
        len,
    )
    .unwrap()
}

#[test]
fn evaluation_examples() {
    let zeros = GFraction::Float(vec![0.0; 6]);
    assert_eq!(
        eval_gfraction(&zeros, Complex64::new(-3.0, 2.0), 5).unwrap(),
        c(1.0)
    );
    let cut = GFraction::Float(vec![0.0, 1.0, 0.3, 0.9]);
    assert!((eval_gfraction(&cut, c(-1.0), 3).unwrap() - 0.5).norm() < 1e-15);
    // b = 0: the fraction is F(a,1;c+1;z)
    let g = gauss_g_params(0.5, 0.0, 1.0, 40).unwrap();
    let direct = f21_series(&HGParams::real(0.5, 1.0, 2.0).unwrap(), c(-0.5))
        .unwrap()
        .value;
    assert!((eval_gfraction(&g, c(-0.5), 40).unwrap() - direct).norm() < 1e-10);
    assert!(matches!(
        eval_gfraction(&g, c(-0.5), 41),
        Err(Error::InsufficientLength { .. })
    ));
    assert!(matches!(
        eval_gfraction(&g, c(2.0), 10),
        Err(Error::Slit(_))
    ));
}

#[test]
fn gauss_parameters_follow_the_formulas() {
    for (a, b, cc) in [
        (q(1, 1), q(0, 1), q(1, 1)),
        (q(1, 2), q(0, 1), q(1, 1)),
        (q(1, 3), q(-1, 2), q(5, 4)),
    ] {
        let GFraction::Exact(g) = gauss_g_params_exact(&a, &b, &cc, 8).unwrap() else {
            unreachable!()
        };
        for (n, gn) in g.iter().enumerate() {
            let k = q((n / 2) as i64, 1);
            let two_k = &k + &k;
            let expected = if n % 2 == 0 {
                (&cc - &a + &k) / (&cc + &two_k)
            } else {
                (&cc - &b + &k) / (&cc + &two_k + BigRational::one())
            };
            assert_eq!(gn, &expected);
        }
    }
    let GFraction::Exact(g) = gauss_g_params_exact(&q(1, 1), &q(0, 1), &q(1, 1), 2).unwrap() else {
        unreachable!()
    };
    assert_eq!(g[..2], [q(0, 1), q(1, 2)]);
    let GFraction::Exact(g) = gauss_g_params_exact(&q(1, 2), &q(0, 1), &q(1, 1), 6).unwrap() else {
        unreachable!()
    };
    assert!(g.iter().all(|x| *x == q(1, 2)));
    assert!(matches!(
        gauss_g_params(2.0, 0.0, 1.0, 4),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn conversion_examples() {
    let root = gamma_seq(&q(1, 2), &q(1, 1), &q(1, 1), 40);
    let GFractionOutcome::Certified(g) = series_to_gfraction(&root, 40, 0.0).unwrap() else {
        panic!()
    };
    assert!(g.in_unit_interval(0.0));
    let direct = f21_lambda(&HGParams::real(0.5, 1.0, 1.0).unwrap(), c(-0.3))
        .unwrap()
        .value;
    assert!((eval_gfraction(&g, c(-0.3), 40).unwrap() - direct).norm() < 1e-12);

    let doubling = MomentSequence::exact((0..12).map(|n| q(1 << n, 1)).collect()).unwrap();
    match series_to_gfraction(&doubling, 11, 0.0).unwrap() {
        GFractionOutcome::Failed { index, value, .. } => assert_eq!((index, value), (1, 2.0)),
        other => panic!("{other:?}"),
    }
    let ones = MomentSequence::exact(vec![BigRational::one(); 8]).unwrap();
    match series_to_gfraction(&ones, 7, 0.0).unwrap() {
        GFractionOutcome::Degenerate {
            prefix: GFraction::Exact(g),
            ..
        } => assert_eq!(g, vec![q(0, 1), q(1, 1)]),
        other => panic!("{other:?}"),
    }
    let float = MomentSequence::float(vec![1.0; 40]).unwrap();
    assert!(matches!(
        series_to_gfraction(&float, 35, 1e-9),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn gauss_fraction_matches_the_series_ratio() {
    let r = gauss_ratio_check(0.5, 0.25, 2.0, c(-0.7), 60).unwrap();
    assert!(r.difference < 1e-10);
    let r = gauss_ratio_check(0.5, 0.25, 2.0, c(0.0), 10).unwrap();
    assert!((r.cf_value - 1.0).norm() < 1e-15);
    let r = gauss_ratio_check(0.7, 0.0, 1.3, Complex64::new(0.2, 0.5), 60).unwrap();
    let oracle = f21_lambda(
        &HGParams::real(0.7, 1.0, 2.3).unwrap(),
        Complex64::new(0.2, 0.5),
    )
    .unwrap()
    .value;
    assert!((r.cf_value - oracle).norm() < 1e-10);
}

#[test]
fn truncations_converge_on_compacts() {
    let zs = [
        c(-0.5),
        c(-20.0),
        c(0.5),
        Complex64::new(3.0, 1.0),
        Complex64::new(1.5, -0.5),
        Complex64::new(-4.0, 6.0),
        Complex64::new(0.9, 0.05),
        Complex64::new(10.0, 2.0),
        Complex64::new(0.0, 3.0),
        c(0.95),
    ];
    let g = gauss_g_params(0.5, 0.5, 1.5, 160).unwrap();
    for z in zs {
        let diffs: Vec<f64> = [10, 20, 40, 80]
            .iter()
            .map(|&n| {
                (eval_gfraction(&g, z, 2 * n).unwrap() - eval_gfraction(&g, z, n).unwrap()).norm()
            })
            .collect();
        assert!(
            diffs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-14),
            "{z}: {diffs:?}"
        );
    }
}

#[test]
fn conversion_agrees_with_the_classifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for i in 0..50 {
        let [a, b, cc] = sample_triple(&mut rng, i % 2 == 0, 1e-3);
        let expected = oracle_in_t(&a, &b, &cc).unwrap();
        assert_eq!(
            classify_t(c(qf(&a)), c(qf(&b)), c(qf(&cc))).in_t(),
            expected
        );
        let seq = gamma_seq(&a, &b, &cc, 120);
        let outcome = series_to_gfraction(&seq, 40, 0.0).unwrap();
        assert_eq!(outcome.is_certified(), expected, "({a},{b},{cc})");
        if !outcome.is_certified() {
            // a failed greedy recursion means no g-sequence exists
            assert!(
                !is_totally_monotone(&seq, 120, 0.0).unwrap().holds(),
                "({a},{b},{cc})"
            );
        }
    }
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (2i64..10).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn round_trip(g in prop::collection::vec(unit_rational(), 41)) {
        let frac = GFraction::Exact(g);
        let series = MomentSequence::exact(frac.taylor_coefficients(41).unwrap()).unwrap();
        let GFractionOutcome::Certified(back) = series_to_gfraction(&series, 40, 0.0).unwrap() else {
            return Err(TestCaseError::fail("not certified"));
        };
        let (CFractionCoeffs::Exact(x), CFractionCoeffs::Exact(y)) = (frac.coefficients(), back.coefficients()) else {
            unreachable!()
        };
        prop_assert_eq!(x, y);
    }
}

#[test]
fn random_parameters_stay_in_the_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let cc = rng.gen_range(0.1..5.0);
        let g = gauss_g_params(rng.gen_range(0.0..=cc), rng.gen_range(-1.0..=cc), cc, 30).unwrap();
        assert!(g.in_unit_interval(0.0));
    }
}
