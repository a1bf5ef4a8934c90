use criterion::{criterion_group, criterion_main, Criterion};
use hgmoment::{f21_boundary_im, f21_lambda, Complex64, HGParams};
use std::hint::black_box;

fn regions(c: &mut Criterion) {
    let p = HGParams::real(0.3, 0.7, 1.2).unwrap();
    let mut g = c.benchmark_group("f21_lambda");
    for (name, z) in [
        ("disk", Complex64::new(0.3, 0.2)),
        ("near_one", Complex64::new(0.97, 0.01)),
        ("negative", Complex64::new(-40.0, 0.0)),
        ("far", Complex64::new(12.0, 9.0)),
        ("unit_circle", Complex64::from_polar(1.0, 1.0)),
    ] {
        g.bench_function(name, |b| b.iter(|| f21_lambda(black_box(&p), black_box(z))));
    }
    // c − a − b an integer: logarithmic connection formulas.
    let log = HGParams::real(0.5, 1.0, 1.5).unwrap();
    g.bench_function("log_case", |b| {
        b.iter(|| f21_lambda(black_box(&log), black_box(Complex64::new(0.9, 0.3))))
    });
    g.finish();
    c.bench_function("f21_boundary_im", |b| {
        b.iter(|| f21_boundary_im(black_box(&p), black_box(3.5)))
    });
}

criterion_group!(benches, regions);
criterion_main!(benches);
