use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cram::coeffs::truncate_set;
use cram::errcurve::{make_grid, sample_error_with, GridKind};
use cram::sensitivity::complex_grid_diff;
use cram::{builtin_set, Exec, XReal};

fn strategies() -> Vec<(&'static str, Exec)> {
    #[cfg_attr(not(feature = "parallel"), allow(unused_mut))]
    let mut v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Exec::Parallel));
    v
}

fn error_curve(c: &mut Criterion) {
    let set = builtin_set(14).unwrap();
    let lo = XReal::parse("-1e3", 40).unwrap();
    let hi = XReal::parse("-1e-8", 40).unwrap();
    let grid = make_grid(GridKind::Log, &lo, &hi, 2000).unwrap();
    let mut group = c.benchmark_group("error_curve_2000");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sample_error_with(exec, &set, &grid, 40).unwrap())
        });
    }
    group.finish();
}

fn complex_map(c: &mut Criterion) {
    let set = builtin_set(14).unwrap();
    let pert = truncate_set(&set, 6).unwrap();
    let x = |s: &str| XReal::parse(s, 32).unwrap();
    let (re_lo, re_hi, im_lo, im_hi) = (x("-15"), x("10"), x("0"), x("20"));
    let mut group = c.benchmark_group("complex_map_40x30");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| complex_grid_diff(exec, &set, &pert, (&re_lo, &re_hi), (&im_lo, &im_hi), (40, 30), 32).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, error_curve, complex_map);
criterion_main!(benches);
