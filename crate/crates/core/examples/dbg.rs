use truncstable::estimate::green_mc_multi;
use truncstable::geom::Point;
use truncstable::process::ProcessSpec;
use truncstable::simulate::{euler_exit, SchemeParams};
use truncstable::verify::dumbbell_domain;
use truncstable::rngutil::substream;

fn main() {
    let domain = dumbbell_domain(2, 0.5).unwrap();
    let spec = ProcessSpec::truncated(2, 1.0).unwrap();
    let params = SchemeParams::new(&spec, 1e-3, 0.05).unwrap();
    // crossing fraction from (0,0)
    let n = 10_000;
    let mut crossed = 0;
    let right = Point::xy(2.5, 0.0);
    let mut mean_steps = 0.0;
    for i in 0..n {
        let mut rng = substream(1, i as u64);
        let (exit, occ) = euler_exit(&spec, &domain, &Point::xy(0.0, 0.0), &params, &mut rng, i as u64, true).unwrap();
        if occ.visited.iter().any(|(p, _)| p.dist(&right) < 1.0) { crossed += 1; }
        mean_steps += exit.steps as f64 / n as f64;
    }
    println!("crossing fraction: {} / {n}, mean steps {mean_steps:.0}", crossed);
    // cross green
    let ests = green_mc_multi(&spec, &domain, &Point::xy(0.0, 0.0),
        &[Point::xy(2.5, 0.0), Point::xy(2.15, -0.45), Point::xy(0.5, 0.45)], 20_000, None, 42, Some(&params)).unwrap();
    for e in &ests {
        println!("G((0,0) -> {:?}) = {:.6} +- {:.6}  bw {:.3}", e.y.as_slice(), e.value, e.stderr, e.bandwidth);
    }
}
