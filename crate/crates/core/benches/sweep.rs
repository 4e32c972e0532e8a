use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teleparallel::geometry::{duality_residuals, gradient_frame_at, weitzenbock_coefficients, weitzenbock_coefficients_of};
use teleparallel::quantum::{MonotoneFunction, QuantumChart};
use teleparallel::simplex::SimplexChart;
use teleparallel::sweep::map_sequential;
use teleparallel::{ChartPoint, DiffConfig, ManifoldChart};

fn worst_duality(chart: &dyn ManifoldChart, x: &ChartPoint, cfg: &DiffConfig) -> f64 {
    let primal = |p: &ChartPoint| weitzenbock_coefficients(chart, p, cfg);
    let dual = |p: &ChartPoint| {
        weitzenbock_coefficients_of(chart, &|q| gradient_frame_at(chart, q), p, cfg)
    };
    duality_residuals(chart, &primal, &dual, x, cfg).map(|r| r.max_abs()).unwrap_or(f64::NAN)
}

fn sweep(c: &mut Criterion) {
    let cfg = DiffConfig::default();
    let charts: Vec<(&str, Box<dyn ManifoldChart>)> = vec![
        ("simplex5", Box::new(SimplexChart::standard(5).unwrap())),
        ("qutrit_bures", Box::new(QuantumChart::standard(3, MonotoneFunction::bures()).unwrap())),
    ];
    let mut group = c.benchmark_group("duality_sweep");
    group.sample_size(10);
    for (name, chart) in &charts {
        let chart = chart.as_ref();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let points: Vec<ChartPoint> = (0..64).map(|_| chart.sample(&mut rng)).collect();

        group.bench_with_input(BenchmarkId::new("sequential", name), &points, |b, pts| {
            b.iter(|| black_box(map_sequential(pts, |_, x| worst_duality(chart, x, &cfg))))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), &points, |b, pts| {
            b.iter(|| black_box(teleparallel::sweep::map_parallel(pts, |_, x| worst_duality(chart, x, &cfg))))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
