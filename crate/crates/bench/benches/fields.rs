use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sacenter_bench::domains;
use sacenter_core::fields::{riesz_sample, self_energy, solid_angle, solid_angle_quadrature, solid_angle_sample};
use sacenter_core::{RieszParams, SolidAngleParams};

fn fields(c: &mut Criterion) {
    let p = SolidAngleParams::new(0.5).unwrap();
    let mut g = c.benchmark_group("solid_angle");
    for (name, d, x) in domains() {
        g.bench_with_input(BenchmarkId::new("closed_form", name), &x, |b, &x| {
            b.iter(|| solid_angle(&d, x, p).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sample", name), &x, |b, &x| {
            b.iter(|| solid_angle_sample(&d, x, p).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("quadrature");
    g.sample_size(10);
    for (name, d, x) in domains().into_iter().take(2) {
        g.bench_with_input(BenchmarkId::new("solid_angle", name), &x, |b, &x| {
            b.iter(|| solid_angle_quadrature(&d, x, p, 1e-10).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("riesz_sample");
    for alpha in [1.0, 2.0, 3.0] {
        let r = RieszParams::new(alpha).unwrap();
        let (_, d, x) = domains().swap_remove(2);
        g.bench_with_input(BenchmarkId::new("disc128", alpha), &x, |b, &x| {
            b.iter(|| riesz_sample(&d, x, r).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("self_energy");
    g.sample_size(10);
    for (name, d, _) in domains() {
        g.bench_function(name, |b| b.iter(|| self_energy(&d, p).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, fields);
criterion_main!(benches);
