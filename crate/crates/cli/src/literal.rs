//! Parameter literals: integers, "p/q" rationals, decimals, and complex
//! "x+yi" with any of those as parts.

use std::fmt;

use hgmoment::scalar::rational_to_f64;
use hgmoment::{BigRational, Complex64, GaussianRational};
use num_traits::{One, Pow, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub value: Complex64,
    /// Set for integer and p/q parts, and for decimals when exact
    /// conversion was requested.
    pub exact: Option<GaussianRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Literal {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }

    pub fn real_exact(q: BigRational) -> Self {
        Self {
            value: Complex64::new(rational_to_f64(&q), 0.0),
            exact: Some(GaussianRational::from_real(q)),
        }
    }

    pub fn real_float(x: f64) -> Self {
        Self {
            value: Complex64::new(x, 0.0),
            exact: None,
        }
    }

    pub fn exact_real(&self) -> Option<&BigRational> {
        self.exact.as_ref().filter(|g| g.is_real()).map(|g| &g.re)
    }
}

fn parse_decimal_exact(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let numer: BigRational = digits.parse().ok()?;
    let ten = BigRational::from_integer(10.into());
    let shift = exponent - frac.len() as i32;
    Some(if shift >= 0 {
        numer * ten.pow(shift)
    } else {
        numer / ten.pow(-shift)
    })
}

fn parse_real(s: &str, exact_decimals: bool) -> Result<(f64, Option<BigRational>), ParseError> {
    let bad = || ParseError(format!("cannot parse number {s:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains('/') || s.bytes().all(|b| b.is_ascii_digit() || b == b'-') {
        let q: BigRational = s.parse().map_err(|_| bad())?;
        return Ok((rational_to_f64(&q), Some(q)));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    if !x.is_finite() {
        return Err(bad());
    }
    let exact = if exact_decimals {
        Some(parse_decimal_exact(s).ok_or_else(bad)?)
    } else {
        None
    };
    Ok((x, exact))
}

/// Index of the sign separating real and imaginary parts, if any.
fn split_point(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    (1..b.len())
        .rev()
        .find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E'))
}

pub fn parse(s: &str, exact_decimals: bool) -> Result<Literal, ParseError> {
    let s = s.trim();
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        let (x, q) = parse_real(s, exact_decimals)?;
        return Ok(Literal {
            value: Complex64::new(x, 0.0),
            exact: q.map(GaussianRational::from_real),
        });
    };
    let (re, im) = match split_point(body) {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let (xr, qr) = parse_real(re, exact_decimals)?;
    let (xi, qi) = parse_real(im, exact_decimals)?;
    let exact = match (qr, qi) {
        (Some(r), Some(i)) => Some(GaussianRational::new(r, i)),
        _ => None,
    };
    Ok(Literal {
        value: Complex64::new(xr, xi),
        exact,
    })
}

/// Canonical text that parses back to the same value: p/q for exact
/// values, 17 significant digits otherwise.
pub fn echo(l: &Literal) -> String {
    match &l.exact {
        Some(g) if g.im.is_zero() => g.re.to_string(),
        Some(g) => {
            let sign = if g.im < BigRational::zero() { "-" } else { "+" };
            let im = if g.im < BigRational::zero() {
                -g.im.clone()
            } else {
                g.im.clone()
            };
            let im = if im.is_one() {
                String::new()
            } else {
                im.to_string()
            };
            format!("{}{sign}{im}i", g.re)
        }
        None if l.value.im == 0.0 => crate::report::sci(l.value.re),
        None => {
            let sign = if l.value.im < 0.0 { "-" } else { "+" };
            format!(
                "{}{sign}{}i",
                crate::report::sci(l.value.re),
                crate::report::sci(l.value.im.abs())
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reals() {
        let l = parse("1/2", false).unwrap();
        assert_eq!((l.value.re, l.exact_real()), (0.5, Some(&q(1, 2))));
        assert_eq!(parse("-3", false).unwrap().exact_real(), Some(&q(-3, 1)));
        assert_eq!(parse("0.75", false).unwrap().exact, None);
        assert_eq!(parse("0.75", true).unwrap().exact_real(), Some(&q(3, 4)));
        assert_eq!(
            parse("-1.5e-2", true).unwrap().exact_real(),
            Some(&q(-3, 200))
        );
        assert_eq!(
            parse("2.5E3", true).unwrap().exact_real(),
            Some(&q(2500, 1))
        );
        assert!(parse("abc", false).is_err());
        assert!(parse("1/0", false).is_err());
        assert!(parse("inf", false).is_err());
    }

    #[test]
    fn complex() {
        let l = parse("1/2+1/4i", false).unwrap();
        assert_eq!(l.value, Complex64::new(0.5, 0.25));
        assert_eq!(l.exact, Some(GaussianRational::from_ratios((1, 2), (1, 4))));
        assert_eq!(
            parse("0.5-0.25i", false).unwrap().value,
            Complex64::new(0.5, -0.25)
        );
        assert_eq!(
            parse("1e-3+2e+1i", false).unwrap().value,
            Complex64::new(1e-3, 20.0)
        );
        assert_eq!(parse("-i", false).unwrap().value, Complex64::new(0.0, -1.0));
        assert_eq!(parse("2i", false).unwrap().value, Complex64::new(0.0, 2.0));
    }

    #[test]
    fn echo_round_trips() {
        for s in ["1/2", "-7/3", "0.1", "1/2-1/4i", "0.3+0.7i", "-2"] {
            for exact in [false, true] {
                let l = parse(s, exact).unwrap();
                assert_eq!(parse(&echo(&l), exact).unwrap(), l, "{s}");
            }
        }
    }
}
