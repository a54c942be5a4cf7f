use choquet_core::korovkin::{family_builder, run_korovkin_suite, SuiteConfig};
use choquet_core::{
    choquet_numeric, choquet_simple, Approximator, Capacity, CompactWindow, Func, Integrand,
    Monotonicity, OperatorFamily, OperatorInstance, OperatorParam, QuadratureConfig,
    SimpleFunction, TestFunctionSet, TestSetVariant,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn integrals(c: &mut Criterion) {
    let cap = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let cfg = QuadratureConfig::default();

    let sq = Integrand::new(
        Func::unary(|t| t * t).with_hint(Monotonicity::Nondecreasing),
        0.0,
        1.0,
    )
    .unwrap();
    c.bench_function("numeric/t^2 hinted", |b| {
        b.iter(|| choquet_numeric(black_box(&sq), &cap, &cfg).unwrap())
    });
    let v = Integrand::new(Func::unary(|t| (t - 0.3).abs()), 0.0, 1.0).unwrap();
    c.bench_function("numeric/|t-0.3| scanned", |b| {
        b.iter(|| choquet_numeric(black_box(&v), &cap, &cfg).unwrap())
    });

    let breaks: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
    let values: Vec<f64> = (0..64).map(|i| ((i * 37) % 64) as f64).collect();
    let steps = SimpleFunction::steps(&breaks, &values).unwrap();
    c.bench_function("simple/64 steps", |b| {
        b.iter(|| choquet_simple(black_box(&steps), &cap).unwrap())
    });
}

fn operators(c: &mut Criterion) {
    let unit = Capacity::sqrt_lebesgue(0.0, 1.0).unwrap();
    let half = Capacity::sqrt_lebesgue(0.0, f64::INFINITY).unwrap();
    let f = Func::unary(|t| (t - 0.5).abs());
    let points: Vec<Vec<f64>> = (0..=32).map(|i| vec![i as f64 / 32.0]).collect();
    let mut group = c.benchmark_group("operator/33 points");
    for (family, cap) in [
        (OperatorFamily::BernsteinKc, unit),
        (OperatorFamily::SzaszKc, half),
    ] {
        for n in [16, 64] {
            // Fresh instance per iteration so the coefficient cache is cold.
            group.bench_with_input(BenchmarkId::new(family.tag(), n), &n, |b, &n| {
                b.iter(|| {
                    let op =
                        OperatorInstance::new(family, OperatorParam::Degree(n), Some(cap.clone()))
                            .unwrap();
                    op.evaluate_many(black_box(&f), &points).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let cfg = SuiteConfig::new(
        vec![8, 16, 32],
        TestFunctionSet::new(1, TestSetVariant::Reduced),
        CompactWindow::interval(0.0, 1.0)
            .unwrap()
            .with_cells(64)
            .unwrap(),
    );
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("bernstein-kc reduced 8..32", |b| {
        b.iter(|| {
            let build = family_builder(
                OperatorFamily::BernsteinKc,
                Some(Capacity::sqrt_lebesgue(0.0, 1.0).unwrap()),
                QuadratureConfig::default(),
            );
            run_korovkin_suite(&build, black_box(&cfg)).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, integrals, operators, suite);
criterion_main!(benches);
