use std::f64::consts::PI;

use hgmoment::scalar::{digamma, gamma, pochhammer, pochhammer_exact, pochhammer_rational};
use hgmoment::{BigRational, Complex64, Error, GaussianRational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn off_integers(z: &Complex64) -> bool {
    z.norm() <= 20.0 && ((z.re - z.re.round()).abs() >= 0.1 || z.im.abs() >= 0.1)
}

fn point() -> impl Strategy<Value = Complex64> {
    (-20.0..20.0f64, -20.0..20.0f64)
        .prop_map(|(x, y)| Complex64::new(x, y))
        .prop_filter("off poles", off_integers)
}

#[test]
fn documented_values() {
    let g = |x: f64| gamma(Complex64::new(x, 0.0)).unwrap();
    assert!((g(1.0) - 1.0).norm() < 1e-15);
    assert!((g(5.0) - 24.0).norm() < 24.0 * 1e-14);
    assert!((g(0.5) - PI.sqrt()).norm() < 1e-14);
    let psi = |x: f64| digamma(Complex64::new(x, 0.0)).unwrap();
    assert!((psi(1.0) + 0.5772156649015329).norm() < 1e-14);
    assert!((psi(2.0) - psi(1.0) - 1.0).norm() < 1e-14);
    assert!(matches!(
        digamma(Complex64::new(0.0, 0.0)),
        Err(Error::Pole(_))
    ));
    assert!(matches!(
        gamma(Complex64::new(-3.0, 0.0)),
        Err(Error::Pole(_))
    ));
    assert_eq!(
        pochhammer(Complex64::new(0.3, 0.2), 0),
        Complex64::new(1.0, 0.0)
    );
    assert_eq!(
        pochhammer(Complex64::new(1.0, 0.0), 6),
        Complex64::new(720.0, 0.0)
    );
    let a = GaussianRational::from_ratios((1, 2), (1, 4));
    assert_eq!(
        pochhammer_exact(&a, 2),
        GaussianRational::from_ratios((11, 16), (1, 2))
    );
}

#[test]
fn exact_pochhammer_ratio() {
    let a = BigRational::new(BigInt::from(-7), BigInt::from(3));
    for n in 0..30 {
        let next = pochhammer_rational(&a, n + 1);
        let here = pochhammer_rational(&a, n);
        assert_eq!(
            next,
            here * (&a + BigRational::from_integer(BigInt::from(n)))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn reflection(z in point()) {
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / hgmoment::scalar::sin_pi(z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn recurrences(z in point()) {
        let g = gamma(z).unwrap();
        prop_assert!((gamma(z + 1.0).unwrap() - z * g).norm() <= 1e-11 * (z * g).norm());
        let p = digamma(z).unwrap();
        let shifted = p + 1.0 / z;
        prop_assert!((digamma(z + 1.0).unwrap() - shifted).norm() <= 1e-11 * shifted.norm().max(1.0));
    }

    #[test]
    fn conjugate_symmetry(z in point()) {
        let g = gamma(z).unwrap();
        prop_assert!((gamma(z.conj()).unwrap() - g.conj()).norm() <= 1e-13 * g.norm());
        let p = digamma(z).unwrap();
        prop_assert!((digamma(z.conj()).unwrap() - p.conj()).norm() <= 1e-13 * p.norm().max(1.0));
    }
}
