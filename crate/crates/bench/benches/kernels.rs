use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nodal_atlas::{
    area_ratio, solve_delta_comb, trace_nodal_set, verify_extremal_curvature, ExtremalFunction, ExtremalSpec,
    HolomorphicFunction, TraceConfig,
};
use nodal_atlas_bench::extremal_fixture;
use num_complex::Complex64;

fn series_kernels(c: &mut Criterion) {
    let s = extremal_fixture(2, 64);
    let z = Complex64::new(0.3, -0.45);
    c.bench_function("jet_k64", |b| b.iter(|| black_box(&s).jet(black_box(z))));
    c.bench_function("solve_delta_comb_n3", |b| {
        let angles: Vec<f64> = (0..7).map(|j| 0.1 + 0.15 * j as f64).collect();
        b.iter(|| solve_delta_comb(3, black_box(&angles)).unwrap())
    });
}

fn curvature_kernels(c: &mut Criterion) {
    c.bench_function("verify_extremal_n1_to_n4", |b| {
        b.iter(|| {
            for n in 1..=4 {
                let spec = ExtremalSpec::first(n);
                black_box(verify_extremal_curvature(&spec).unwrap());
            }
        })
    });
}

fn tracing_and_area(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    group.sample_size(10);
    let f = ExtremalFunction::new(ExtremalSpec::first(1));
    let cfg = TraceConfig {
        seed_grid: 0,
        stop_radius: Some(0.9),
        ..TraceConfig::default()
    };
    group.bench_function("trace_extremal_n1", |b| b.iter(|| trace_nodal_set(&f, &cfg).unwrap()));
    let s = extremal_fixture(1, 64);
    group.bench_function("area_ratio_256", |b| b.iter(|| area_ratio(&s, 0.4, 256).unwrap()));
    group.finish();
}

criterion_group!(benches, series_kernels, curvature_kernels, tracing_and_area);
criterion_main!(benches);
