use criterion::{criterion_group, criterion_main, Criterion};
use sacenter_bench::domains;
use sacenter_core::centers::{find_centers_with, SolverOptions};
use sacenter_core::unfolded::unfolded_region_default;
use sacenter_core::FieldParams;

fn centers(c: &mut Criterion) {
    let mut g = c.benchmark_group("unfolded_region");
    g.sample_size(10);
    for (name, d, _) in domains() {
        g.bench_function(name, |b| b.iter(|| unfolded_region_default(&d).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("find_centers");
    g.sample_size(10);
    let opts = SolverOptions {
        n_starts: 16,
        ..Default::default()
    };
    for (name, d, _) in domains() {
        let region = unfolded_region_default(&d).unwrap();
        for (mode, params) in [("h0.5", FieldParams::solid_angle(0.5)), ("alpha3", FieldParams::riesz(3.0))] {
            let params = params.unwrap();
            g.bench_function(format!("{name}/{mode}"), |b| {
                b.iter(|| find_centers_with(&d, params, Some(&region), opts).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, centers);
criterion_main!(benches);
