use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qss_bench::{label, scheme, SIZES};
use qss_core::polycode::code_basis;
use qss_core::verify::check_erasure_conditions;
use qss_core::{full_report, VerifyOptions};

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_report");
    group.sample_size(10);
    for (k, n, s) in SIZES {
        let spec = scheme(k, n, s);
        group.bench_function(BenchmarkId::from_parameter(label(k, n, s)), |b| {
            b.iter(|| full_report(&spec, &VerifyOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn erasure(c: &mut Criterion) {
    let mut group = c.benchmark_group("erasure_conditions");
    for (k, n, s) in SIZES {
        let basis = code_basis(scheme(k, n, s).params());
        let erased: Vec<usize> = (0..k - 1).collect();
        group.bench_with_input(BenchmarkId::from_parameter(label(k, n, s)), &basis, |b, basis| {
            b.iter(|| check_erasure_conditions(basis, &erased, k).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, report, erasure);
criterion_main!(benches);
