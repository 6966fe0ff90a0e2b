use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use fracmotion_bench::motion;
use fracmotion_core::densities::PlanarLaw;
use fracmotion_core::motion::batch_endpoints;
use fracmotion_core::specfun::{bessel_j, mittag_leffler, MLParams, SeriesControl};
use fracmotion_core::{FracPoissonSpec, RateFunction};
use std::hint::black_box;

fn special_functions(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let mut group = c.benchmark_group("mittag_leffler");
    for &(alpha, z) in &[(1.0, 5.0), (0.5, 5.0), (0.3, 12.0)] {
        let p = MLParams::new(alpha, 1.0).unwrap();
        group.bench_with_input(BenchmarkId::new(format!("alpha={alpha}"), z), &z, |b, &z| {
            b.iter(|| mittag_leffler(p, black_box(z), &ctl).unwrap())
        });
    }
    group.finish();

    c.bench_function("bessel_j/nu=1.5,x=30", |b| b.iter(|| bessel_j(1.5, black_box(30.0), &ctl).unwrap()));
}

fn count_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_table");
    for &(alpha, lambda) in &[(1.0, 5.0), (0.5, 5.0), (0.3, 20.0)] {
        let spec = FracPoissonSpec::new(alpha, RateFunction::constant(lambda).unwrap()).unwrap();
        group.bench_function(format!("alpha={alpha},Lambda={lambda}"), |b| {
            b.iter(|| spec.distribution(black_box(1.0)).unwrap())
        });
    }
    group.finish();
}

fn densities(c: &mut Criterion) {
    let law = PlanarLaw::new(0.5, 2.0, 1.0, 1.0).unwrap();
    c.bench_function("planar/closed_form", |b| b.iter(|| law.ac_density_radial(black_box(0.4)).unwrap()));
    c.bench_function("planar/mixture_series", |b| b.iter(|| law.mixture_density_radial(black_box(0.4)).unwrap()));
}

fn batch_sampling(c: &mut Criterion) {
    let cfg = motion(0.7, 3.0);
    let n = 10_000;
    let mut group = c.benchmark_group("batch_endpoints");
    group.throughput(Throughput::Elements(n as u64));
    group.sample_size(20);
    for workers in [1, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| batch_endpoints(&cfg, n, 7, w).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, special_functions, count_tables, densities, batch_sampling);
criterion_main!(benches);
