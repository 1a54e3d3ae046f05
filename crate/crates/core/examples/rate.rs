use std::time::Instant;
use truncstable::geom::{BallShape, DomainSpec, Point, Shape};
use truncstable::process::ProcessSpec;
use truncstable::rngutil::substream;
use truncstable::simulate::{euler_exit, SchemeParams};

fn main() {
    let domain = DomainSpec::new(
        Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), 1.0)),
        "ball", 0.9, 0.5,
    ).unwrap();
    for (alpha, dt, eps) in [(1.0, 1e-3, 0.05), (0.5, 1e-3, 0.05), (1.5, 1e-3, 0.05), (1.0, 1e-4, 0.01)] {
        let spec = ProcessSpec::truncated(2, alpha).unwrap();
        let params = SchemeParams::new(&spec, dt, eps).unwrap();
        let start = Instant::now();
        let mut steps = 0u64;
        let n = 2000;
        for i in 0..n {
            let mut rng = substream(1, i);
            let (exit, _) = euler_exit(&spec, &domain, &Point::xy(0.1, 0.0), &params, &mut rng, i, true).unwrap();
            steps += exit.steps;
        }
        let el = start.elapsed().as_secs_f64();
        println!("alpha={alpha} dt={dt} eps={eps}: {n} paths, {steps} steps, {:.0} ns/step, {:.1} us/path",
            el * 1e9 / steps as f64, el * 1e6 / n as f64);
    }
}
