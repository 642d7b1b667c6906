//! Sequential vs rayon throughput for the three hot loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use comean::{
    bootstrap_variance, coverage_experiment, jackknife_unequal, replication_rng, EstimatorSpec,
    Grouping, Norming, Parallelism, SimulationModel, TwoSampleData, VarianceMethod,
};

fn synthetic_data(n: usize) -> TwoSampleData {
    let model = SimulationModel::new(1).unwrap();
    let mut rng = replication_rng(1234, 0);
    let s1 = comean::draw_sample(&model, 1, n, &mut rng).unwrap();
    let s2 = comean::draw_sample(&model, 2, n, &mut rng).unwrap();
    TwoSampleData::new(s1, s2)
}

fn strategies() -> [(&'static str, Parallelism); 2] {
    [
        ("sequential", Parallelism::Sequential),
        ("rayon", Parallelism::Rayon),
    ]
}

fn bench_jackknife(c: &mut Criterion) {
    let data = synthetic_data(2000);
    // slow path (no summary shortcut) so the leave-one-out sweep dominates
    let stat = |x1: &[f64], x2: &[f64]| -> comean::Result<f64> {
        let d = TwoSampleData::from_values(x1.to_vec(), x2.to_vec())?;
        comean::estimate_common_mean(&d, &EstimatorSpec::GraybillDeal).map(|e| e.value)
    };
    let mut group = c.benchmark_group("jackknife_n2000");
    for (name, p) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, &p| {
            b.iter(|| {
                jackknife_unequal(
                    &stat,
                    black_box(&data),
                    Norming::Unbiased,
                    Grouping::Pooled,
                    p,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_bootstrap(c: &mut Criterion) {
    let data = synthetic_data(500);
    let mut group = c.benchmark_group("bootstrap_b2000_n500");
    for (name, p) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, &p| {
            b.iter(|| {
                bootstrap_variance(
                    &EstimatorSpec::GraybillDeal,
                    black_box(&data),
                    2000,
                    77,
                    p,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_coverage(c: &mut Criterion) {
    let model = SimulationModel::new(1).unwrap();
    let methods = [
        VarianceMethod::JackknifePaired(Norming::Unbiased),
        VarianceMethod::Clt,
    ];
    let mut group = c.benchmark_group("coverage_200reps_n50");
    group.sample_size(10);
    for (name, p) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, &p| {
            b.iter(|| {
                coverage_experiment(
                    &model,
                    50,
                    200,
                    &methods,
                    &EstimatorSpec::GraybillDeal,
                    0.95,
                    3,
                    p,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_jackknife, bench_bootstrap, bench_coverage);
criterion_main!(benches);
