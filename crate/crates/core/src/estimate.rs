//! Estimators that turn path samples into potential-theoretic quantities:
//! harmonic measure, Green functions by occupation-density KDE, expected exit
//! times, Martin-kernel ratios, h-weighted expectations and harmonic-function
//! evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BallShape, DomainSpec, Point, Shape};
use crate::process::{ProcessKind, ProcessSpec};
use crate::rngutil::substream;
use crate::simulate::{euler_exit, wos_exit_stable, SchemeParams};
use crate::stats;

/// Number of path batches used for batch-mean standard errors.
const N_BATCHES: usize = 64;
/// Paths per parallel block; blocks are folded in index order so results are
/// independent of the worker count.
const BLOCK: usize = 512;

/// An exterior target set for harmonic-measure estimation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TargetSet {
    /// The whole exterior of the domain closure.
    Exterior,
    /// `{ z : <z, normal> >= offset }`.
    HalfSpace { normal: Point, offset: f64 },
    /// An exterior ball.
    Ball { ball: BallShape },
    /// Points at distance at least `min_distance` from the domain.
    BeyondDistance { min_distance: f64 },
}

impl TargetSet {
    pub fn member(&self, domain: &DomainSpec, z: &Point) -> bool {
        match self {
            TargetSet::Exterior => !domain.contains(z),
            TargetSet::HalfSpace { normal, offset } => z.dot(normal) >= *offset,
            TargetSet::Ball { ball } => z.dist(&ball.center) < ball.radius,
            TargetSet::BeyondDistance { min_distance } => {
                distance_to_set(&domain.shape, z) >= *min_distance
            }
        }
    }

    /// Precondition check: the target must not meet the domain closure.
    pub fn validate_disjoint(&self, domain: &DomainSpec) -> Result<()> {
        let (bc, br) = domain.bounding_ball();
        let ok = match self {
            TargetSet::Exterior => true,
            TargetSet::HalfSpace { normal, offset } => {
                let n = normal.norm();
                n > 0.0 && bc.dot(normal) + br * n < *offset
            }
            TargetSet::Ball { ball } => distance_to_set(&domain.shape, &ball.center) > ball.radius,
            TargetSet::BeyondDistance { min_distance } => *min_distance > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Inadmissible(
                "target set intersects the domain closure".into(),
            ))
        }
    }
}

/// Distance from `z` to the set itself (0 inside).
pub fn distance_to_set(shape: &Shape, z: &Point) -> f64 {
    if shape.contains(z) {
        return 0.0;
    }
    match shape {
        Shape::Ball(b) => (z.dist(&b.center) - b.radius).max(0.0),
        Shape::Box { min, max } => {
            let mut acc = 0.0;
            for i in 0..z.dim() {
                let out = (min[i] - z[i]).max(z[i] - max[i]).max(0.0);
                acc += out * out;
            }
            acc.sqrt()
        }
        Shape::UnionOfBalls { balls } => balls
            .iter()
            .map(|b| (z.dist(&b.center) - b.radius).max(0.0))
            .fold(f64::INFINITY, f64::min),
        Shape::BallMinusBall { outer, inner } => {
            let d_out = (z.dist(&outer.center) - outer.radius).max(0.0);
            if d_out > 0.0 {
                d_out
            } else {
                // inside the closed inner hole
                (inner.radius - z.dist(&inner.center)).max(0.0)
            }
        }
    }
}

/// Monte-Carlo Green estimate at a point pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GreenEstimate {
    pub x: Point,
    pub y: Point,
    pub value: f64,
    pub stderr: f64,
    pub bandwidth: f64,
    pub n_paths: usize,
    pub process_kind: ProcessKind,
    /// Occupation comes from a time-discretized companion scheme; set for the
    /// stable kind too, whose exit law alone is handled by walk-on-spheres.
    pub time_discretized: bool,
}

/// Green ratios along a boundary-approach sequence with a Richardson-style
/// tail extrapolation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MartinRatio {
    pub x: Point,
    pub x0: Point,
    pub y_sequence: Vec<Point>,
    pub ratios: Vec<f64>,
    pub ratio_stderrs: Vec<f64>,
    pub extrapolated: f64,
    pub fit_gamma: f64,
    pub fit_residual: f64,
    pub non_cauchy: bool,
}

/// Harmonic-function evaluation on a grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicEval {
    pub function_id: String,
    pub grid: Vec<Point>,
    pub values: Vec<f64>,
    pub stderrs: Vec<f64>,
}

/// Stopping rules for h-weighted expectations; both are measurable from the
/// path prefix.
#[derive(Clone, Debug)]
pub enum StoppingRule {
    /// First step landing outside the given open set.
    FirstExitOf(Shape),
    /// Fixed time horizon (rounded up to whole steps).
    FixedHorizon(f64),
}

fn default_params(spec: &ProcessSpec, params: Option<&SchemeParams>) -> Result<SchemeParams> {
    match params {
        Some(p) => Ok(*p),
        None => SchemeParams::defaults(spec),
    }
}

/// Run a per-path map in deterministic blocks and fold the results in path
/// order. `f` receives the path index and must be pure given its substream.
fn indexed_paths<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let end = (start + BLOCK).min(n);
        let block: Vec<Result<T>> = (start..end).into_par_iter().map(&f).collect();
        for r in block {
            out.push(r?);
        }
        start = end;
    }
    Ok(out)
}

fn batch_mean_stderr(per_path: &[f64]) -> (f64, f64) {
    let n = per_path.len();
    if n < N_BATCHES * 2 {
        return stats::mean_stderr(per_path);
    }
    let mean = per_path.iter().sum::<f64>() / n as f64;
    let mut sums = [0.0f64; N_BATCHES];
    let mut counts = [0usize; N_BATCHES];
    for (i, v) in per_path.iter().enumerate() {
        sums[i % N_BATCHES] += v;
        counts[i % N_BATCHES] += 1;
    }
    let means: Vec<f64> = sums
        .iter()
        .zip(counts)
        .map(|(s, c)| s / c as f64)
        .collect();
    let mb = means.iter().sum::<f64>() / N_BATCHES as f64;
    let var = means.iter().map(|m| (m - mb) * (m - mb)).sum::<f64>() / (N_BATCHES as f64 - 1.0);
    (mean, (var / N_BATCHES as f64).sqrt())
}

/// Probability that the process started at `x` exits `D` into `target`, with
/// binomial standard error. Exact walk-on-spheres for the stable kind, the
/// discretized scheme for the truncated kind.
pub fn harmonic_measure(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    target: &TargetSet,
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<(f64, f64)> {
    target.validate_disjoint(domain)?;
    let scheme = default_params(spec, params)?;
    let hits = indexed_paths(n, |i| -> Result<f64> {
        let mut rng = substream(seed, i as u64);
        let exit = match spec.kind {
            ProcessKind::Stable => wos_exit_stable(domain, spec.alpha, x, &mut rng, i as u64)?,
            ProcessKind::Truncated => {
                euler_exit(spec, domain, x, &scheme, &mut rng, i as u64, false)?.0
            }
        };
        Ok(if target.member(domain, &exit.exit_position) {
            1.0
        } else {
            0.0
        })
    })?;
    let p = hits.iter().sum::<f64>() / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Ok((p, se))
}

#[inline]
fn epanechnikov_product(site: &Point, y: &Point, h: f64) -> f64 {
    let mut k = 1.0;
    for i in 0..y.dim() {
        let u = (site[i] - y[i]) / h;
        if u <= -1.0 || u >= 1.0 {
            return 0.0;
        }
        k *= 0.75 * (1.0 - u * u) / h;
    }
    k
}

/// Effective bandwidth at an evaluation point: the requested bandwidth if
/// given (rejected when it exceeds half the boundary distance), otherwise
/// `0.05 diam(D)` halved down to the boundary constraint.
fn effective_bandwidth(domain: &DomainSpec, y: &Point, bandwidth: Option<f64>) -> Result<f64> {
    let rho = domain.boundary_distance(y);
    match bandwidth {
        Some(b) => {
            if b > 0.5 * rho {
                Err(Error::BandwidthTooLarge { bandwidth: b, rho })
            } else if !(b > 0.0) {
                Err(Error::ParameterDomain("bandwidth must be positive".into()))
            } else {
                Ok(b)
            }
        }
        None => Ok((0.05 * domain.diameter()).min(0.45 * rho)),
    }
}

/// Kernel-density Green estimates at several targets from one path ensemble
/// rooted at `x`. Standard errors come from path-level batch means.
pub fn green_mc_multi(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    ys: &[Point],
    n: usize,
    bandwidth: Option<f64>,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<Vec<GreenEstimate>> {
    if !domain.contains(x) {
        return Err(Error::Inadmissible("green source point outside D".into()));
    }
    let mut bws = Vec::with_capacity(ys.len());
    for y in ys {
        if !domain.contains(y) {
            return Err(Error::Inadmissible("green target point outside D".into()));
        }
        if y.dist2(x) == 0.0 {
            return Err(Error::Inadmissible("green estimate needs x != y".into()));
        }
        bws.push(effective_bandwidth(domain, y, bandwidth)?);
    }
    let scheme = default_params(spec, params)?;
    let contribs = indexed_paths(n, |i| -> Result<Vec<f64>> {
        let mut rng = substream(seed, i as u64);
        let (_, occ) = euler_exit(spec, domain, x, &scheme, &mut rng, i as u64, true)?;
        let mut acc = vec![0.0; ys.len()];
        for (site, w) in &occ.visited {
            for (t, y) in ys.iter().enumerate() {
                let k = epanechnikov_product(site, y, bws[t]);
                if k > 0.0 {
                    acc[t] += w * k;
                }
            }
        }
        Ok(acc)
    })?;
    Ok(ys
        .iter()
        .enumerate()
        .map(|(t, y)| {
            let per_path: Vec<f64> = contribs.iter().map(|c| c[t]).collect();
            let (value, stderr) = batch_mean_stderr(&per_path);
            GreenEstimate {
                x: *x,
                y: *y,
                value,
                stderr,
                bandwidth: bws[t],
                n_paths: n,
                process_kind: spec.kind,
                time_discretized: true,
            }
        })
        .collect())
}

/// Single-pair convenience wrapper over [`green_mc_multi`].
pub fn green_mc(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    y: &Point,
    n: usize,
    bandwidth: Option<f64>,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<GreenEstimate> {
    Ok(green_mc_multi(spec, domain, x, &[*y], n, bandwidth, seed, params)?.remove(0))
}

/// Sample mean of exit times under the time-discretized scheme (both kinds).
pub fn expected_exit_time(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<(f64, f64)> {
    if !domain.contains(x) {
        return Err(Error::Inadmissible("start point outside D".into()));
    }
    let scheme = default_params(spec, params)?;
    let times = indexed_paths(n, |i| -> Result<f64> {
        let mut rng = substream(seed, i as u64);
        let (exit, _) = euler_exit(spec, domain, x, &scheme, &mut rng, i as u64, false)?;
        Ok(exit.exit_time.unwrap_or(0.0))
    })?;
    Ok(batch_mean_stderr(&times))
}

/// Green ratios `G(x, y_k) / G(x0, y_k)` along witness points
/// `y_k = A_{depth_k}(z)` descending to a boundary point `z`, with a
/// power-law tail extrapolation fitted on the deepest four entries.
#[allow(clippy::too_many_arguments)]
pub fn martin_ratio(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    x0: &Point,
    z: &Point,
    depths: &[f64],
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<MartinRatio> {
    if depths.is_empty() || depths.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Inadmissible(
            "depths must be a strictly decreasing sequence".into(),
        ));
    }
    let ys: Vec<Point> = depths
        .iter()
        .map(|&r| domain.fat_witness(z, r))
        .collect::<Result<_>>()?;
    if x.dist2(x0) == 0.0 {
        // normalization: every ratio is 1 by definition
        return Ok(MartinRatio {
            x: *x,
            x0: *x0,
            y_sequence: ys.clone(),
            ratios: vec![1.0; ys.len()],
            ratio_stderrs: vec![0.0; ys.len()],
            extrapolated: 1.0,
            fit_gamma: f64::NAN,
            fit_residual: 0.0,
            non_cauchy: false,
        });
    }
    let num = green_mc_multi(spec, domain, x, &ys, n, None, seed, params)?;
    let den = green_mc_multi(spec, domain, x0, &ys, n, None, seed ^ 0xa5a5_a5a5, params)?;
    let mut ratios = Vec::with_capacity(ys.len());
    let mut ses = Vec::with_capacity(ys.len());
    for (a, b) in num.iter().zip(&den) {
        if !(b.value > 0.0) {
            return Err(Error::Inadmissible(
                "denominator Green estimate vanished; more paths needed".into(),
            ));
        }
        let r = a.value / b.value;
        // first-order ratio error propagation
        let rel = (a.stderr / a.value.max(1e-300)).hypot(b.stderr / b.value);
        ratios.push(r);
        ses.push(r.abs() * rel);
    }
    let (extrapolated, fit_gamma, fit_residual) = extrapolate_tail(depths, &ratios);
    let non_cauchy = tail_non_cauchy(&ratios, &ses);
    Ok(MartinRatio {
        x: *x,
        x0: *x0,
        y_sequence: ys,
        ratios,
        ratio_stderrs: ses,
        extrapolated,
        fit_gamma,
        fit_residual,
        non_cauchy,
    })
}

pub(crate) fn extrapolate_tail(depths: &[f64], ratios: &[f64]) -> (f64, f64, f64) {
    let k = depths.len().min(4);
    let xs = &depths[depths.len() - k..];
    let ys = &ratios[ratios.len() - k..];
    if k < 3 {
        return (*ys.last().unwrap(), f64::NAN, f64::NAN);
    }
    let grid: Vec<f64> = (1..=30).map(|i| i as f64 * 0.05).collect();
    let (limit, _a, g, rms) = stats::fit_power_offset(xs, ys, &grid);
    if limit.is_finite() && limit > 0.0 {
        (limit, g, rms)
    } else {
        (*ys.last().unwrap(), g, rms)
    }
}

fn tail_non_cauchy(ratios: &[f64], ses: &[f64]) -> bool {
    if ratios.len() < 3 {
        return false;
    }
    let k = ratios.len();
    let gaps: Vec<f64> = (1..k).map(|i| (ratios[i] - ratios[i - 1]).abs()).collect();
    let noise: Vec<f64> = (1..k).map(|i| ses[i].hypot(ses[i - 1])).collect();
    // flag when the last gap exceeds noise and gaps are growing
    let last = k - 2;
    gaps[last] > 3.0 * noise[last] && gaps[last] > gaps[last - 1].max(1e-300) * 1.5
}

/// Importance-weighted expectation under the h-transform:
/// `E_x[ payoff(Y_T) h(Y_T) ; T < tau ] / h(x)`.
/// `h` must be strictly positive on sampled points.
#[allow(clippy::too_many_arguments)]
pub fn h_transform_expectation<H, P>(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    h: H,
    x: &Point,
    stop: &StoppingRule,
    payoff: P,
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<(f64, f64)>
where
    H: Fn(&Point) -> f64 + Sync,
    P: Fn(&Point) -> f64 + Sync,
{
    if !domain.contains(x) {
        return Err(Error::Inadmissible("start point outside D".into()));
    }
    let hx = h(x);
    if !(hx > 0.0) {
        return Err(Error::Inadmissible("h must be positive at the start point".into()));
    }
    let scheme = default_params(spec, params)?;
    let horizon_steps = |t: f64| (t / scheme.dt).ceil() as u64;
    let weights = indexed_paths(n, |i| -> Result<f64> {
        let mut rng = substream(seed, i as u64);
        // manual stepping so the stop rule sees the path prefix
        let stepper = crate::simulate::euler_stepper_for(spec, &scheme)?;
        let mut pos = *x;
        let mut steps: u64 = 0;
        let cap = scheme.max_steps;
        loop {
            if steps >= cap {
                return Err(Error::StepCapExceeded {
                    cap,
                    path_index: i as u64,
                });
            }
            crate::simulate::euler_step(&stepper, &mut pos, &mut rng);
            steps += 1;
            let in_domain = domain.contains(&pos);
            let stopped = match stop {
                StoppingRule::FirstExitOf(sub) => !sub.contains(&pos),
                StoppingRule::FixedHorizon(t) => steps >= horizon_steps(*t),
            };
            if stopped {
                // {T < tau}: the state at T must still be alive
                return Ok(if in_domain {
                    let hv = h(&pos);
                    if !(hv > 0.0) {
                        return Err(Error::Inadmissible(
                            "h vanished on a sampled path point".into(),
                        ));
                    }
                    payoff(&pos) * hv / hx
                } else {
                    0.0
                });
            }
            if !in_domain {
                return Ok(0.0); // tau <= T
            }
        }
    })?;
    Ok(batch_mean_stderr(&weights))
}

/// Regular-harmonic extension of an exterior payoff:
/// `u(x) = E_x[ payoff(exit position) ]` per grid point.
pub fn harmonic_eval<P>(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    payoff: P,
    function_id: &str,
    grid: &[Point],
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<HarmonicEval>
where
    P: Fn(&Point) -> f64 + Sync,
{
    let scheme = default_params(spec, params)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut stderrs = Vec::with_capacity(grid.len());
    for (gi, x) in grid.iter().enumerate() {
        if !domain.contains(x) {
            return Err(Error::Inadmissible(format!(
                "grid point {gi} outside the domain"
            )));
        }
        let vals = indexed_paths(n, |i| -> Result<f64> {
            let mut rng = substream(seed ^ ((gi as u64) << 40), i as u64);
            let exit = match spec.kind {
                ProcessKind::Stable => wos_exit_stable(domain, spec.alpha, x, &mut rng, i as u64)?,
                ProcessKind::Truncated => {
                    euler_exit(spec, domain, x, &scheme, &mut rng, i as u64, false)?.0
                }
            };
            Ok(payoff(&exit.exit_position))
        })?;
        let (m, se) = batch_mean_stderr(&vals);
        values.push(m);
        stderrs.push(se);
    }
    Ok(HarmonicEval {
        function_id: function_id.to_string(),
        grid: grid.to_vec(),
        values,
        stderrs,
    })
}

/// Occupation-density field from one source, bucketed on a uniform grid for
/// O(1) point evaluation. Used where an estimated Green function has to be
/// evaluated at arbitrary path points (h-transform weighting).
pub struct GridKde {
    cell: f64,
    bandwidth: f64,
    inv_n: f64,
    dim: usize,
    buckets: std::collections::HashMap<[i16; crate::geom::MAX_DIM], Vec<(Point, f64)>>,
}

impl GridKde {
    pub fn build(
        spec: &ProcessSpec,
        domain: &DomainSpec,
        source: &Point,
        n: usize,
        bandwidth: f64,
        seed: u64,
        params: Option<&SchemeParams>,
    ) -> Result<Self> {
        let scheme = default_params(spec, params)?;
        let mut kde = GridKde {
            cell: bandwidth,
            bandwidth,
            inv_n: 1.0 / n as f64,
            dim: domain.dim(),
            buckets: std::collections::HashMap::new(),
        };
        let records = indexed_paths(n, |i| -> Result<Vec<(Point, f64)>> {
            let mut rng = substream(seed, i as u64);
            let (_, occ) = euler_exit(spec, domain, source, &scheme, &mut rng, i as u64, true)?;
            Ok(occ.visited)
        })?;
        for rec in records {
            for (p, w) in rec {
                kde.buckets.entry(kde.key(&p)).or_default().push((p, w));
            }
        }
        Ok(kde)
    }

    fn key(&self, p: &Point) -> [i16; crate::geom::MAX_DIM] {
        let mut k = [0i16; crate::geom::MAX_DIM];
        for i in 0..self.dim {
            k[i] = (p[i] / self.cell).floor() as i16;
        }
        k
    }

    /// KDE value at `q`: scans the 3^d neighbor cells.
    pub fn eval(&self, q: &Point) -> f64 {
        let base = self.key(q);
        let mut total = 0.0;
        let neighbors = 3usize.pow(self.dim as u32);
        for code in 0..neighbors {
            let mut k = base;
            let mut c = code;
            for i in 0..self.dim {
                k[i] += (c % 3) as i16 - 1;
                c /= 3;
            }
            if let Some(sites) = self.buckets.get(&k) {
                for (p, w) in sites {
                    total += w * epanechnikov_product(p, q, self.bandwidth);
                }
            }
        }
        total * self.inv_n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BallShape;

    fn unit_ball() -> DomainSpec {
        DomainSpec::new(
            Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), 1.0)),
            "ball",
            0.9,
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn harmonic_measure_totality_and_halfspace_oracle() {
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let domain = unit_ball();
        let x = Point::xy(0.0, 0.0);
        let (p, _) = harmonic_measure(&spec, &domain, &x, &TargetSet::Exterior, 4000, 1, None).unwrap();
        assert_eq!(p, 1.0, "a bounded domain is left almost surely");

        // frozen (P_f) quadrature value for the half-space {z1 >= 2}
        let target = TargetSet::HalfSpace {
            normal: Point::xy(1.0, 0.0),
            offset: 2.0,
        };
        let n = 60_000;
        let (p, se) = harmonic_measure(&spec, &domain, &x, &target, n, 2, None).unwrap();
        let expect = 0.10442715751352;
        assert!(
            (p - expect).abs() <= 3.0 * se,
            "half-space measure {p} vs {expect} (se {se})"
        );
    }

    #[test]
    fn harmonic_measure_rejects_overlapping_target() {
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let domain = unit_ball();
        let bad = TargetSet::Ball {
            ball: BallShape::new(Point::xy(1.2, 0.0), 0.5),
        };
        assert!(
            harmonic_measure(&spec, &domain, &Point::xy(0.0, 0.0), &bad, 10, 1, None).is_err()
        );
    }

    #[test]
    fn truncated_measure_beyond_unit_distance_is_tiny() {
        let spec = ProcessSpec::truncated(2, 1.0).unwrap();
        let domain = unit_ball();
        let target = TargetSet::BeyondDistance { min_distance: 1.0 };
        let (p, _) =
            harmonic_measure(&spec, &domain, &Point::xy(0.0, 0.0), &target, 4000, 3, None).unwrap();
        assert!(p < 1e-3, "only Gaussian overshoot can pass the cutoff, got {p}");
    }

    #[test]
    fn green_estimate_matches_ball_oracle_at_one_pair() {
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let domain = unit_ball();
        let x = Point::xy(-0.3, 0.0);
        let y = Point::xy(0.4, 0.2);
        let g = green_mc(&spec, &domain, &x, &y, 30_000, Some(0.05), 11, None).unwrap();
        let oracle = 0.1203063868632895;
        assert!(
            (g.value - oracle).abs() <= 3.0 * g.stderr + 0.05 * oracle,
            "green {} vs {oracle} (se {})",
            g.value,
            g.stderr
        );
        assert!(g.time_discretized);
    }

    #[test]
    fn green_cross_component_is_exactly_zero_beyond_unit_gap() {
        let spec = ProcessSpec::truncated(2, 1.0).unwrap();
        let domain = DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![
                    BallShape::new(Point::xy(0.0, 0.0), 1.0),
                    BallShape::new(Point::xy(4.0, 0.0), 1.0),
                ],
            },
            "dumbbell-gap2",
            0.9,
            0.5,
        )
        .unwrap();
        let g = green_mc(
            &spec,
            &domain,
            &Point::xy(0.0, 0.0),
            &Point::xy(4.0, 0.0),
            2000,
            Some(0.1),
            5,
            None,
        )
        .unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn green_bandwidth_rejected_near_boundary() {
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let domain = unit_ball();
        let res = green_mc(
            &spec,
            &domain,
            &Point::xy(0.0, 0.0),
            &Point::xy(0.95, 0.0),
            10,
            Some(0.1),
            1,
            None,
        );
        assert!(matches!(res, Err(Error::BandwidthTooLarge { .. })));
    }

    #[test]
    fn exit_time_scaling_in_the_ball_radius() {
        // E_0[tau_{B(0,r)}] = r^alpha E_0[tau_{B(0,1)}] for the stable process
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let ball_r = |r: f64| {
            DomainSpec::new(
                Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), r)),
                "ball",
                0.4,
                0.5,
            )
            .unwrap()
        };
        let params = SchemeParams::new(&spec, 5e-4, 0.02).unwrap();
        let n = 4000;
        let (t1, _) =
            expected_exit_time(&spec, &ball_r(1.0), &Point::xy(0.0, 0.0), n, 7, Some(&params))
                .unwrap();
        let (t2, _) =
            expected_exit_time(&spec, &ball_r(2.0), &Point::xy(0.0, 0.0), n, 8, Some(&params))
                .unwrap();
        let ratio = t2 / t1;
        assert!(
            (ratio - 2.0f64.powf(spec.alpha)).abs() < 0.1 * 2.0f64.powf(spec.alpha),
            "scaling ratio {ratio}"
        );
        // exact constant: E_0[tau] = 0.6366 (1 - |x|^2)^{1/2}
        assert!((t1 - 0.63661977236758).abs() < 0.08 * 0.6366, "t1 = {t1}");
    }

    #[test]
    fn martin_ratio_normalization_and_scale_invariance() {
        let spec = ProcessSpec::truncated(2, 1.0).unwrap();
        let domain = unit_ball();
        let x0 = Point::xy(0.0, 0.0);
        let z = Point::xy(1.0, 0.0);
        let m = martin_ratio(
            &spec,
            &domain,
            &x0,
            &x0,
            &z,
            &[0.4, 0.2, 0.1],
            10,
            1,
            None,
        )
        .unwrap();
        assert!(m.ratios.iter().all(|r| *r == 1.0));
        assert_eq!(m.extrapolated, 1.0);

        // ratio arithmetic is scale-free: scaling all Green values by any
        // constant leaves every ratio bit-identical
        let greens_x = [0.31, 0.17, 0.09];
        let greens_x0 = [0.62, 0.40, 0.22];
        let base: Vec<f64> = greens_x
            .iter()
            .zip(&greens_x0)
            .map(|(a, b)| a / b)
            .collect();
        let scaled: Vec<f64> = greens_x
            .iter()
            .zip(&greens_x0)
            .map(|(a, b)| (a * 7.25) / (b * 7.25))
            .collect();
        assert_eq!(base, scaled);
    }

    #[test]
    fn h_transform_trivial_weight_and_martingale_identity() {
        let spec = ProcessSpec::truncated(2, 1.0).unwrap();
        // big domain so exits of the inner ball can never leave D at once
        let domain = DomainSpec::new(
            Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), 2.5)),
            "bigball",
            0.9,
            0.5,
        )
        .unwrap();
        let inner = Shape::Ball(BallShape::new(Point::xy(0.0, 0.0), 0.4));
        let x = Point::xy(0.1, 0.0);
        let n = 4000;
        let params = SchemeParams::new(&spec, 2e-3, 0.05).unwrap();

        // h == 1 reduces to a plain survival probability, which is 1 here
        let (v, _) = h_transform_expectation(
            &spec,
            &domain,
            |_| 1.0,
            &x,
            &StoppingRule::FirstExitOf(inner.clone()),
            |_| 1.0,
            n,
            1,
            Some(&params),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        // linear h is harmonic for the truncated process (optional stopping):
        // E[h(Y_T)]/h(x) = 1 exactly, and T < tau holds surely since jumps
        // are bounded by 1 and D has slack 2.5 - 0.4 > 1
        let h = |p: &Point| 3.0 + p[0];
        let (v, se) = h_transform_expectation(
            &spec,
            &domain,
            h,
            &x,
            &StoppingRule::FirstExitOf(inner),
            |_| 1.0,
            n,
            2,
            Some(&params),
        )
        .unwrap();
        assert!(
            (v - 1.0).abs() <= 3.0 * se,
            "martingale identity: {v} (se {se})"
        );

        // concave quadratic h, positive on the whole domain including the
        // overshoot band, is strictly superharmonic: weighted value <= 1
        let hq = |p: &Point| 14.0 - p.norm2();
        let (v, se) = h_transform_expectation(
            &spec,
            &domain,
            hq,
            &x,
            &StoppingRule::FixedHorizon(0.3),
            |_| 1.0,
            n,
            3,
            Some(&params),
        )
        .unwrap();
        assert!(v <= 1.0 + 3.0 * se, "supermartingale bound: {v} (se {se})");
    }

    #[test]
    fn harmonic_eval_constants_and_linearity() {
        let spec = ProcessSpec::stable(2, 1.0).unwrap();
        let domain = unit_ball();
        let grid = [Point::xy(0.0, 0.0), Point::xy(0.4, -0.2)];
        let n = 4000;
        let ones = harmonic_eval(&spec, &domain, |_| 1.0, "one", &grid, n, 4, None).unwrap();
        for (v, se) in ones.values.iter().zip(&ones.stderrs) {
            assert!((v - 1.0).abs() <= 3.0 * se + 1e-12);
        }
        // linearity: u_{af+bg} = a u_f + b u_g with shared paths
        let f = |z: &Point| if z[0] >= 1.2 { 1.0 } else { 0.0 };
        let g = |z: &Point| (-z.norm2()).exp();
        let combo = move |z: &Point| 2.0 * f(z) + 0.5 * g(z);
        let uf = harmonic_eval(&spec, &domain, f, "f", &grid, n, 5, None).unwrap();
        let ug = harmonic_eval(&spec, &domain, g, "g", &grid, n, 5, None).unwrap();
        let uc = harmonic_eval(&spec, &domain, combo, "combo", &grid, n, 5, None).unwrap();
        for i in 0..grid.len() {
            let lin = 2.0 * uf.values[i] + 0.5 * ug.values[i];
            let se = (2.0 * uf.stderrs[i]).hypot(0.5 * ug.stderrs[i]) + uc.stderrs[i];
            assert!(
                (uc.values[i] - lin).abs() <= 3.0 * se,
                "linearity at grid {i}"
            );
        }
    }

    #[test]
    fn stderr_shrinks_like_inverse_sqrt_n() {
        let spec = ProcessSpec::truncated(2, 1.0).unwrap();
        let domain = unit_ball();
        let x = Point::xy(-0.3, 0.0);
        let y = Point::xy(0.4, 0.2);
        let params = SchemeParams::new(&spec, 2e-3, 0.05).unwrap();
        let g1 = green_mc(&spec, &domain, &x, &y, 2000, Some(0.08), 6, Some(&params)).unwrap();
        let g2 = green_mc(&spec, &domain, &x, &y, 8000, Some(0.08), 6, Some(&params)).unwrap();
        let shrink = g1.stderr / g2.stderr;
        assert!(
            (shrink - 2.0).abs() < 0.8,
            "quadrupling paths should halve the error, got factor {shrink}"
        );
    }
}
