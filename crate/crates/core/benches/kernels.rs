//! Data-parallel helpers against their sequential counterparts on the
//! reductions and maps used by the norm kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slab_core::par;
use slab_core::Complex64;

fn values(n: usize) -> Vec<Complex64> {
    (0..n).map(|i| Complex64::from_polar(1.0 + (i % 7) as f64, 0.37 * i as f64)).collect()
}

fn reductions(c: &mut Criterion) {
    let mut g = c.benchmark_group("lq4_sum");
    for n in [1 << 12, 1 << 16, 1 << 20] {
        let v = values(n);
        g.bench_with_input(BenchmarkId::new("parallel", n), &v, |b, v| {
            b.iter(|| par::sum_range(v.len(), |i| black_box(v[i].norm_sqr()).powi(2)))
        });
        g.bench_with_input(BenchmarkId::new("sequential", n), &v, |b, v| {
            b.iter(|| par::sequential::sum_range(v.len(), |i| black_box(v[i].norm_sqr()).powi(2)))
        });
    }
    g.finish();
}

fn maps(c: &mut Criterion) {
    let mut g = c.benchmark_group("phase_map");
    for n in [1 << 12, 1 << 16] {
        let v = values(n);
        g.bench_with_input(BenchmarkId::new("parallel", n), &v, |b, v| {
            b.iter(|| par::map_range(v.len(), |i| v[i] * Complex64::from_polar(1.0, -0.1 * i as f64)))
        });
        g.bench_with_input(BenchmarkId::new("sequential", n), &v, |b, v| {
            b.iter(|| par::sequential::map_range(v.len(), |i| v[i] * Complex64::from_polar(1.0, -0.1 * i as f64)))
        });
    }
    g.finish();
}

criterion_group!(benches, reductions, maps);
criterion_main!(benches);
