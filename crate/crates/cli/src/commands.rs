use hgmoment::classify::{classify_starlike_exact, classify_t_exact};
use hgmoment::gfraction::gauss_g_params_exact;
use hgmoment::measure::{density_sample_grid, gamma_coefficients, DensityData};
use hgmoment::scalar::pochhammer;
use hgmoment::{
    classify_starlike, classify_t, f21_boundary_im, f21_lambda, gauss_g_params,
    is_totally_monotone, limit_at_one, reconstruct, representing_measure, series_to_gfraction,
    starlike_coefficient_witness, tm_coefficients, verify_measure, BigRational, Complex64,
    GFraction, GFractionOutcome, HGParams, MomentSequence, QuadratureSpec, RepresentingMeasure,
    StarlikeBranch, TClassification, TVerdict, TmParams, TmVerdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::literal::{self, echo, Literal};
use crate::report::{complex, floats, num, obj, rational};
use crate::{Cli, Command, Failure, Format, Output, Params};

const DEFAULT_DEPTH: usize = 40;
const FLOAT_TM_TOL: f64 = 1e-12;
const GFRACTION_TOL: f64 = 1e-12;

type Run = Result<Output, Failure>;

struct Triple {
    a: Literal,
    b: Literal,
    c: Literal,
}

impl Triple {
    fn parse(p: &Params, exact: bool) -> Result<Self, Failure> {
        Ok(Self {
            a: literal::parse(&p.a, exact)?,
            b: literal::parse(&p.b, exact)?,
            c: literal::parse(&p.c, exact)?,
        })
    }

    fn values(&self) -> [Complex64; 3] {
        [self.a.value, self.b.value, self.c.value]
    }

    fn exact(&self) -> bool {
        self.a.exact.is_some() && self.b.exact.is_some() && self.c.exact.is_some()
    }

    fn exact_real(&self) -> Option<[&BigRational; 3]> {
        Some([
            self.a.exact_real()?,
            self.b.exact_real()?,
            self.c.exact_real()?,
        ])
    }

    fn real(&self) -> Result<[f64; 3], Failure> {
        let [a, b, c] = self.values();
        if a.im != 0.0 || b.im != 0.0 || c.im != 0.0 {
            return Err(Failure::Domain("this command needs real parameters".into()));
        }
        Ok([a.re, b.re, c.re])
    }

    fn hg(&self) -> Result<HGParams, Failure> {
        let [a, b, c] = self.values();
        Ok(HGParams::new(a, b, c)?)
    }

    fn echo(&self, extra: Vec<(&str, Value)>) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("a".into(), echo(&self.a).into());
        m.insert("b".into(), echo(&self.b).into());
        m.insert("c".into(), echo(&self.c).into());
        m.insert("exact".into(), self.exact().into());
        for (k, v) in extra {
            m.insert(k.into(), v);
        }
        Value::Object(m)
    }
}

fn json(params: Value, result: Value) -> Run {
    Ok(Output::Json { params, result })
}

fn verdict_name(v: &TVerdict) -> &'static str {
    match v {
        TVerdict::InT => "InT",
        TVerdict::NotInT => "NotInT",
        TVerdict::TrivialPower(_) => "TrivialPower",
        TVerdict::InvalidC => "InvalidC",
    }
}

fn power_k(v: &TVerdict) -> Option<f64> {
    match v {
        TVerdict::TrivialPower(k) => Some(*k),
        _ => None,
    }
}

fn classification_json(t: &TClassification) -> Value {
    obj([
        ("verdict", verdict_name(&t.verdict).into()),
        ("k", power_k(&t.verdict).map_or(Value::Null, num)),
        ("reason", format!("{:?}", t.reason).into()),
        ("boundary", t.boundary.into()),
        ("in_t", t.in_t().into()),
        (
            "normalized",
            Value::Array(t.normalized.iter().map(|z| complex(*z)).collect()),
        ),
    ])
}

fn classify_triple(t: &Triple) -> TClassification {
    match t.exact_real() {
        Some([a, b, c]) => classify_t_exact(a, b, c),
        None => {
            let [a, b, c] = t.values();
            classify_t(a, b, c)
        }
    }
}

fn depth(cli: &Cli) -> usize {
    cli.depth.unwrap_or(DEFAULT_DEPTH)
}

fn quadrature(
    cli: &Cli,
    m: &RepresentingMeasure,
    level: Option<u32>,
) -> Result<QuadratureSpec, Failure> {
    let base = m.quadrature_spec();
    Ok(QuadratureSpec::new(
        level.unwrap_or(base.level),
        cli.tol.unwrap_or(base.abs_tol),
    )?)
}

fn quadrature_json(q: &QuadratureSpec) -> Value {
    obj([("level", q.level.into()), ("abs_tol", num(q.abs_tol))])
}

fn measure_json(m: &RepresentingMeasure, q: &QuadratureSpec) -> Value {
    let data = match m.data {
        DensityData::None => Value::Null,
        DensityData::Generic { a_coef, b_coef } => {
            obj([("a_coef", num(a_coef)), ("b_coef", num(b_coef))])
        }
        DensityData::IntegerGap { m } => obj([("gap", m.into())]),
        DensityData::Fallback => obj([("method", "epsilon_limit".into())]),
    };
    let edge = m.edge_term().map_or(Value::Null, |e| {
        obj([
            ("coefficient", num(e.coefficient)),
            ("exponent", num(e.exponent)),
        ])
    });
    let p = &m.params;
    obj([
        ("alpha0", num(m.alpha0)),
        ("alpha1", num(m.alpha1)),
        ("density_kind", format!("{:?}", m.kind).into()),
        ("density_params", floats(&[p.a.re, p.b.re, p.c.re])),
        ("density_data", data),
        ("edge_term", edge),
        ("quadrature", quadrature_json(q)),
    ])
}

fn gfraction_json(g: &GFraction) -> Value {
    match g {
        GFraction::Exact(v) => Value::Array(v.iter().map(rational).collect()),
        GFraction::Float(v) => floats(v),
    }
}

fn outcome_json(o: &GFractionOutcome) -> Value {
    match o {
        GFractionOutcome::Certified(g) => {
            obj([("status", "certified".into()), ("g", gfraction_json(g))])
        }
        GFractionOutcome::Failed {
            index,
            value,
            prefix,
        } => obj([
            ("status", "failed".into()),
            ("index", (*index).into()),
            ("value", num(*value)),
            ("g", gfraction_json(prefix)),
        ]),
        GFractionOutcome::Degenerate { index, prefix } => obj([
            ("status", "degenerate".into()),
            ("index", (*index).into()),
            ("g", gfraction_json(prefix)),
        ]),
    }
}

/// Float coefficients (a)ₙ(b)ₙ/((c)ₙ n!), real part.
fn float_coefficients(t: &Triple, len: usize) -> Vec<f64> {
    let [a, b, c] = t.values();
    if a.im == 0.0 && b.im == 0.0 && c.im == 0.0 {
        return gamma_coefficients(a.re, b.re, c.re, len);
    }
    (0..=len)
        .map(|n| {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            (pochhammer(a, n) * pochhammer(b, n) / (pochhammer(c, n) * fact)).re
        })
        .collect()
}

/// Exact coefficients when the literals allow it: rational triples, or a
/// conjugate pair a, b = conj(a) with rational c.
fn exact_params(t: &Triple) -> Option<TmParams> {
    if let Some([a, b, c]) = t.exact_real() {
        return Some(TmParams::Rational {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
        });
    }
    let (a, b) = (t.a.exact.as_ref()?, t.b.exact.as_ref()?);
    let c = t.c.exact_real()?;
    (a.conj() == *b).then(|| TmParams::ConjugatePair {
        a: a.clone(),
        c: c.clone(),
    })
}

fn coefficients(t: &Triple, len: usize) -> Result<MomentSequence, Failure> {
    match exact_params(t) {
        Some(p) if t.exact() => Ok(tm_coefficients(&p, len)?),
        _ => {
            let [_, _, c] = t.values();
            if hgmoment::scalar::is_nonpositive_integer(c) {
                return Err(Failure::Domain(format!(
                    "c = {c} is a non-positive integer"
                )));
            }
            Ok(MomentSequence::float(float_coefficients(t, len))?)
        }
    }
}

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Classify(p) => {
            let t = Triple::parse(p, cli.exact)?;
            json(t.echo(vec![]), classification_json(&classify_triple(&t)))
        }
        Command::Starlike(p) => {
            let t = Triple::parse(p, cli.exact)?;
            let s = match t.exact_real() {
                Some([a, b, c]) => classify_starlike_exact(a, b, c),
                None => {
                    let [a, b, c] = t.values();
                    classify_starlike(a, b, c)
                }
            };
            let (branch, k) = match s.branch {
                StarlikeBranch::PositiveParameters => ("PositiveParameters", Value::Null),
                StarlikeBranch::PowerForm(k) => ("PowerForm", num(k)),
                StarlikeBranch::No => ("No", Value::Null),
            };
            let witness = t
                .real()
                .ok()
                .and_then(|[a, b, c]| starlike_coefficient_witness(a, b, c).ok())
                .map_or(Value::Null, |w| {
                    obj([
                        ("value", num(w.value)),
                        ("series_value", num(w.series_value)),
                        ("difference", num(w.difference)),
                    ])
                });
            json(
                t.echo(vec![]),
                obj([
                    ("starlike", s.verdict.into()),
                    ("branch", branch.into()),
                    ("k", k),
                    ("coefficient_witness", witness),
                ]),
            )
        }
        Command::Eval { params, z } => {
            let t = Triple::parse(params, cli.exact)?;
            let z = literal::parse(z, cli.exact)?;
            let r = f21_lambda(&t.hg()?, z.value)?;
            json(
                t.echo(vec![("z", echo(&z).into())]),
                obj([
                    ("value", complex(r.value)),
                    ("abs_error_estimate", num(r.abs_error_estimate)),
                    ("method", format!("{:?}", r.method).into()),
                ]),
            )
        }
        Command::Boundary { params, x } => {
            let t = Triple::parse(params, cli.exact)?;
            let x = literal::parse(x, cli.exact)?;
            if !x.is_real() {
                return Err(Failure::Domain("boundary point x must be real".into()));
            }
            let im = f21_boundary_im(&t.hg()?, x.value.re)?;
            json(
                t.echo(vec![("x", echo(&x).into())]),
                obj([("im_upper", num(im))]),
            )
        }
        Command::Limit1(p) => {
            let t = Triple::parse(p, cli.exact)?;
            let l = limit_at_one(&t.hg()?)?;
            json(
                t.echo(vec![]),
                obj([
                    ("kind", format!("{:?}", l.kind).into()),
                    ("coefficient", complex(l.coefficient)),
                    ("exponent", num(l.exponent)),
                ]),
            )
        }
        Command::Measure {
            params,
            density_samples,
            level,
        } => {
            let t = Triple::parse(params, cli.exact)?;
            let [a, b, c] = t.real()?;
            let m = representing_measure(a, b, c)?;
            let q = quadrature(cli, &m, *level)?;
            let m = m.with_quadrature(q);
            let samples = match density_samples {
                Some(n) => Some(density_sample_grid(&m, *n)?),
                None => None,
            };
            match (samples, cli.format) {
                (Some(s), None | Some(Format::Csv)) => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let io = |e: csv::Error| Failure::Numerical(e.to_string());
                    w.write_record(["t", "density"]).map_err(io)?;
                    for d in &s {
                        w.write_record([crate::report::sci(d.t), crate::report::sci(d.raw)])
                            .map_err(io)?;
                    }
                    let bytes = w
                        .into_inner()
                        .map_err(|e| Failure::Numerical(e.to_string()))?;
                    Ok(Output::Csv(
                        String::from_utf8(bytes).expect("csv output is utf-8"),
                    ))
                }
                (samples, _) => {
                    let mut result = measure_json(&m, &q);
                    if let (Some(s), Value::Object(map)) = (samples, &mut result) {
                        let rows = s
                            .iter()
                            .map(|d| {
                                obj([
                                    ("t", num(d.t)),
                                    ("density", num(d.raw)),
                                    ("negative", d.negative.into()),
                                ])
                            })
                            .collect();
                        map.insert("density_samples".into(), Value::Array(rows));
                    }
                    json(t.echo(vec![]), result)
                }
            }
        }
        Command::Reconstruct { params, z, level } => {
            let t = Triple::parse(params, cli.exact)?;
            let [a, b, c] = t.real()?;
            let z = literal::parse(z, cli.exact)?;
            let m = representing_measure(a, b, c)?;
            let q = quadrature(cli, &m, *level)?;
            let m = m.with_quadrature(q);
            let integral = reconstruct(&m, z.value, &q)?;
            let direct = f21_lambda(&t.hg()?, z.value)?;
            json(
                t.echo(vec![("z", echo(&z).into())]),
                obj([
                    ("integral", complex(integral)),
                    ("direct", complex(direct.value)),
                    ("direct_abs_error_estimate", num(direct.abs_error_estimate)),
                    ("difference", num((integral - direct.value).norm())),
                    ("quadrature", quadrature_json(&q)),
                ]),
            )
        }
        Command::Gfrac(p) => {
            let t = Triple::parse(p, cli.exact)?;
            let n = depth(cli);
            let tol = cli.tol.unwrap_or(GFRACTION_TOL);
            let seq = coefficients(&t, n)?;
            let outcome = series_to_gfraction(&seq, n, tol)?;
            let gauss = match t.exact_real() {
                Some([a, b, c]) if t.exact() => gauss_g_params_exact(a, b, c, n),
                _ => t.real().map_err(|_| ()).map_or_else(
                    |_| Err(hgmoment::Error::Parameter("complex parameters".into())),
                    |[a, b, c]| gauss_g_params(a, b, c, n),
                ),
            };
            let gauss = match gauss {
                Ok(g) => obj([
                    ("ratio", "F(a,b+1;c+1;z)/F(a,b;c;z)".into()),
                    ("g", gfraction_json(&g)),
                    ("in_unit_interval", g.in_unit_interval(0.0).into()),
                ]),
                Err(e) => obj([("error", e.to_string().into())]),
            };
            json(
                t.echo(vec![("depth", n.into()), ("tol", num(tol))]),
                obj([
                    ("series", outcome_json(&outcome)),
                    ("certified", outcome.is_certified().into()),
                    ("gauss", gauss),
                ]),
            )
        }
        Command::Tm(p) => {
            let t = Triple::parse(p, cli.exact)?;
            let n = depth(cli);
            let seq = coefficients(&t, n)?;
            let tol = if seq.is_exact() {
                if cli.tol.is_some_and(|x| x != 0.0) {
                    return Err(Failure::Usage(
                        "exact total-monotonicity test takes no --tol".into(),
                    ));
                }
                0.0
            } else {
                cli.tol.unwrap_or(FLOAT_TM_TOL)
            };
            let verdict = is_totally_monotone(&seq, n, tol)?;
            let violation = match &verdict {
                TmVerdict::Holds => Value::Null,
                TmVerdict::Violated { m, n, value, exact } => obj([
                    ("m", (*m).into()),
                    ("n", (*n).into()),
                    ("value", num(*value)),
                    ("exact", exact.as_ref().map_or(Value::Null, rational)),
                ]),
            };
            json(
                t.echo(vec![("depth", n.into()), ("tol", num(tol))]),
                obj([
                    ("holds", verdict.holds().into()),
                    (
                        "arithmetic",
                        if seq.is_exact() { "exact" } else { "float" }.into(),
                    ),
                    ("violation", violation),
                    ("classification", classification_json(&classify_triple(&t))),
                ]),
            )
        }
        Command::Verify {
            params,
            moments,
            level,
        } => {
            let t = Triple::parse(params, cli.exact)?;
            let [a, b, c] = t.real()?;
            let m = representing_measure(a, b, c)?;
            let q = quadrature(cli, &m, *level)?;
            let r = verify_measure(a, b, c, *moments, &q)?;
            json(
                t.echo(vec![("moments", (*moments).into())]),
                obj([
                    ("density_kind", format!("{:?}", r.kind).into()),
                    ("alpha0", num(r.alpha0)),
                    ("alpha1", num(r.alpha1)),
                    ("max_moment_defect", num(r.max_moment_defect())),
                    ("moment_defects", floats(&r.moment_defects)),
                    ("mass_defect", num(r.mass_defect)),
                    ("min_density", r.min_density.map_or(Value::Null, num)),
                    ("negative_density", r.negative_density.into()),
                    ("max_reconstruction_error", num(r.max_reconstruction_error)),
                    (
                        "fallback_discrepancy",
                        r.fallback_discrepancy.map_or(Value::Null, num),
                    ),
                    ("quadrature", quadrature_json(&q)),
                ]),
            )
        }
        Command::Sweep { a, b, c, samples } => sweep(cli, [a, b, c], *samples),
    }
}

struct Axis {
    lo: Literal,
    hi: Literal,
    n: usize,
}

impl Axis {
    fn parse(s: &str, exact: bool) -> Result<Self, Failure> {
        let bad = || Failure::Usage(format!("grid {s:?} is not lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad());
        };
        let lo = literal::parse(lo, exact)?;
        let hi = literal::parse(hi, exact)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        if !lo.is_real() || !hi.is_real() || n == 0 || lo.value.re > hi.value.re {
            return Err(bad());
        }
        Ok(Self { lo, hi, n })
    }

    fn points(&self) -> Vec<Literal> {
        let steps = self.n.saturating_sub(1).max(1);
        (0..self.n)
            .map(|i| match (self.lo.exact_real(), self.hi.exact_real()) {
                (Some(lo), Some(hi)) => {
                    let q = lo + (hi - lo) * BigRational::new(i.into(), steps.into());
                    Literal::real_exact(q)
                }
                _ => {
                    let (lo, hi) = (self.lo.value.re, self.hi.value.re);
                    Literal::real_float(lo + (hi - lo) * i as f64 / steps as f64)
                }
            })
            .collect()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Literal {
        let (lo, hi) = (self.lo.value.re, self.hi.value.re);
        Literal::real_float(if lo < hi { rng.gen_range(lo..hi) } else { lo })
    }

    fn echo(&self) -> String {
        format!("{}:{}:{}", echo(&self.lo), echo(&self.hi), self.n)
    }
}

fn sweep(cli: &Cli, grid: [&String; 3], samples: Option<usize>) -> Run {
    let axes = grid
        .iter()
        .map(|s| Axis::parse(s, cli.exact))
        .collect::<Result<Vec<_>, _>>()?;
    let triples: Vec<Triple> = match samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            (0..n)
                .map(|_| Triple {
                    a: axes[0].sample(&mut rng),
                    b: axes[1].sample(&mut rng),
                    c: axes[2].sample(&mut rng),
                })
                .collect()
        }
        None => {
            let (pa, pb, pc) = (axes[0].points(), axes[1].points(), axes[2].points());
            let mut out = Vec::with_capacity(pa.len() * pb.len() * pc.len());
            for a in &pa {
                for b in &pb {
                    for c in &pc {
                        out.push(Triple {
                            a: a.clone(),
                            b: b.clone(),
                            c: c.clone(),
                        });
                    }
                }
            }
            out
        }
    };
    let mut rows: Vec<(Triple, TClassification)> = triples
        .into_par_iter()
        .map(|t| {
            let r = classify_triple(&t);
            (t, r)
        })
        .collect();
    rows.sort_by(|(x, _), (y, _)| {
        let key = |t: &Triple| [t.a.value.re, t.b.value.re, t.c.value.re];
        let (kx, ky) = (key(x), key(y));
        kx.iter()
            .zip(&ky)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if cli.format == Some(Format::Json) {
        let cells = rows
            .iter()
            .map(|(t, r)| {
                obj([
                    ("a", echo(&t.a).into()),
                    ("b", echo(&t.b).into()),
                    ("c", echo(&t.c).into()),
                    ("verdict", verdict_name(&r.verdict).into()),
                    ("k", power_k(&r.verdict).map_or(Value::Null, num)),
                    ("reason", format!("{:?}", r.reason).into()),
                    ("boundary", r.boundary.into()),
                ])
            })
            .collect();
        let params = obj([
            ("a", axes[0].echo().into()),
            ("b", axes[1].echo().into()),
            ("c", axes[2].echo().into()),
            ("samples", samples.map_or(Value::Null, Value::from)),
            ("seed", cli.seed.into()),
        ]);
        return json(
            params,
            obj([("count", rows.len().into()), ("cells", Value::Array(cells))]),
        );
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Numerical(e.to_string());
    w.write_record(["a", "b", "c", "verdict", "k", "reason", "boundary"])
        .map_err(io)?;
    for (t, r) in &rows {
        let k = power_k(&r.verdict)
            .map(crate::report::sci)
            .unwrap_or_default();
        w.write_record([
            echo(&t.a),
            echo(&t.b),
            echo(&t.c),
            verdict_name(&r.verdict).to_string(),
            k,
            format!("{:?}", r.reason),
            r.boundary.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    Ok(Output::Csv(
        String::from_utf8(bytes).expect("csv output is utf-8"),
    ))
}
