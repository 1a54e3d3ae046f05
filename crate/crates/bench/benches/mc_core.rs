use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use truncstable::estimate::green_mc;
use truncstable::geom::{BallShape, DomainSpec, Point, Shape};
use truncstable::kernels::green_ball_unit;
use truncstable::process::{characteristic_exponent, sample_stable_increment, ProcessSpec};
use truncstable::rngutil::substream;
use truncstable::simulate::{euler_exit, wos_exit_stable, SchemeParams};

fn unit_ball() -> DomainSpec {
    DomainSpec::new(
        Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), 1.0)),
        "ball",
        0.9,
        0.5,
    )
    .unwrap()
}

fn bench_wos(c: &mut Criterion) {
    let domain = unit_ball();
    c.bench_function("wos_exit_from_deep_start", |b| {
        let mut i = 0u64;
        b.iter_batched(
            || {
                i += 1;
                substream(1, i)
            },
            |mut rng| {
                black_box(
                    wos_exit_stable(&domain, 1.0, &Point::xy(0.3, -0.5), &mut rng, 0).unwrap(),
                )
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_euler_path(c: &mut Criterion) {
    let domain = unit_ball();
    let spec = ProcessSpec::truncated(2, 1.0).unwrap();
    let params = SchemeParams::new(&spec, 1e-3, 0.05).unwrap();
    c.bench_function("euler_exit_path_with_occupation", |b| {
        let mut i = 0u64;
        b.iter_batched(
            || {
                i += 1;
                substream(2, i)
            },
            |mut rng| {
                black_box(
                    euler_exit(&spec, &domain, &Point::xy(0.1, 0.0), &params, &mut rng, 0, true)
                        .unwrap(),
                )
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_increment(c: &mut Criterion) {
    let spec = ProcessSpec::stable(2, 1.2).unwrap();
    c.bench_function("stable_increment_draw", |b| {
        let mut rng = substream(3, 0);
        b.iter(|| black_box(sample_stable_increment(&spec, 0.01, &mut rng).unwrap()))
    });
}

fn bench_exponent_quadrature(c: &mut Criterion) {
    let spec = ProcessSpec::truncated(2, 1.0).unwrap();
    c.bench_function("characteristic_exponent_xi_100", |b| {
        b.iter(|| black_box(characteristic_exponent(&spec, &Point::xy(100.0, 0.0)).unwrap()))
    });
}

fn bench_green_oracle(c: &mut Criterion) {
    c.bench_function("green_ball_oracle_eval", |b| {
        b.iter(|| {
            black_box(
                green_ball_unit(2, 1.0, &Point::xy(-0.3, 0.0), &Point::xy(0.4, 0.2)).unwrap(),
            )
        })
    });
}

fn bench_green_mc_small(c: &mut Criterion) {
    let domain = unit_ball();
    let spec = ProcessSpec::truncated(2, 1.0).unwrap();
    let params = SchemeParams::new(&spec, 2e-3, 0.05).unwrap();
    c.bench_function("green_mc_500_paths", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            black_box(
                green_mc(
                    &spec,
                    &domain,
                    &Point::xy(-0.3, 0.0),
                    &Point::xy(0.4, 0.2),
                    500,
                    Some(0.08),
                    seed,
                    Some(&params),
                )
                .unwrap(),
            )
        })
    });
}

criterion_group!(
    benches,
    bench_wos,
    bench_euler_path,
    bench_increment,
    bench_exponent_quadrature,
    bench_green_oracle,
    bench_green_mc_small
);
criterion_main!(benches);
