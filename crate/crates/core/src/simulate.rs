//! Killed-path generation: exact walk-on-spheres for the stable process and a
//! compound-Poisson-plus-matched-Gaussian scheme for the truncated one, with
//! occupation recording.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{DomainSpec, Point};
use crate::kernels::PoissonKernelBall;
use crate::process::{levy_constant, sample_jump, ProcessKind, ProcessSpec};
use crate::rngutil::substream;
use crate::special::sphere_surface;

/// One killed-path outcome. `exit_time` is absent for walk-on-spheres, which
/// is timeless.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ExitSample {
    pub exit_position: Point,
    pub exit_time: Option<f64>,
    pub steps: u64,
    pub seed_id: u64,
}

/// Dwell-weighted sites along one path until exit. Thinned under a memory cap
/// with weights rescaled so the total stays exactly the elapsed lifetime.
#[derive(Clone, Debug, Default)]
pub struct OccupationRecord {
    pub visited: Vec<(Point, f64)>,
}

impl OccupationRecord {
    pub fn total_weight(&self) -> f64 {
        self.visited.iter().map(|(_, w)| w).sum()
    }
}

/// Maximum retained occupation sites per path before thinning.
pub const OCCUPATION_CAP: usize = 2048;

/// Euler/compound-Poisson scheme parameters. `sigma2_per_coord` matches the
/// second moment of the removed small jumps:
/// `(1/d) int_{|x|<eps} |x|^2 nu(x) dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub dt: f64,
    pub eps: f64,
    pub sigma2_per_coord: f64,
    pub max_steps: u64,
}

impl SchemeParams {
    pub fn new(spec: &ProcessSpec, dt: f64, eps: f64) -> Result<Self> {
        let cutoff = spec.truncation_radius;
        if !(dt > 0.0) {
            return Err(Error::InvalidScheme(format!("dt must be positive, got {dt}")));
        }
        if !(eps > 0.0) || (spec.kind == ProcessKind::Truncated && eps >= cutoff) {
            return Err(Error::InvalidScheme(format!(
                "eps must lie in (0, truncation_radius), got {eps}"
            )));
        }
        Ok(SchemeParams {
            dt,
            eps,
            sigma2_per_coord: small_jump_variance_per_coord(spec, eps)?,
            max_steps: 10_000_000,
        })
    }

    pub fn defaults(spec: &ProcessSpec) -> Result<Self> {
        Self::new(spec, 1e-3, 0.05)
    }

    pub fn with_max_steps(mut self, cap: u64) -> Self {
        self.max_steps = cap;
        self
    }

    /// Jump intensity of the retained compound-Poisson part,
    /// `int_{eps <= |x| < cutoff} nu(x) dx` (cutoff infinite for the stable kind).
    pub fn jump_intensity(&self, spec: &ProcessSpec) -> Result<f64> {
        let coeff = levy_constant(spec.d, spec.alpha)? * sphere_surface(spec.d);
        let a = spec.alpha;
        Ok(match spec.cutoff() {
            Some(c) => coeff * (self.eps.powf(-a) - c.powf(-a)) / a,
            None => coeff * self.eps.powf(-a) / a,
        })
    }
}

/// `(1/d) int_{|x|<eps} |x|^2 nu(x) dx = A omega_d eps^{2-alpha} / (d (2-alpha))`.
pub fn small_jump_variance_per_coord(spec: &ProcessSpec, eps: f64) -> Result<f64> {
    let coeff = levy_constant(spec.d, spec.alpha)? * sphere_surface(spec.d);
    Ok(coeff * eps.powf(2.0 - spec.alpha) / (spec.d as f64 * (2.0 - spec.alpha)))
}

/// Exact-in-law draw of the stable exit position from `D` started at `x`:
/// iterate the closed-form ball exit law on inscribed balls until the walk
/// leaves `D`. Unbiased because the stable process exits every ball by a jump.
pub fn wos_exit_stable<R: Rng>(
    domain: &DomainSpec,
    alpha: f64,
    x: &Point,
    rng: &mut R,
    seed_id: u64,
) -> Result<ExitSample> {
    if !domain.contains(x) {
        return Err(Error::Inadmissible("walk start point outside D".into()));
    }
    const STEP_CAP: u64 = 100_000;
    let kernel0 = PoissonKernelBall::new(domain.dim(), alpha, *x, 1.0)?;
    let mut pos = *x;
    let mut steps = 0;
    while domain.contains(&pos) {
        if steps >= STEP_CAP {
            return Err(Error::StepCapExceeded {
                cap: STEP_CAP,
                path_index: seed_id,
            });
        }
        let rho = domain.inscribed_radius(&pos);
        debug_assert!(rho > 0.0);
        let kernel = PoissonKernelBall {
            center: pos,
            radius: rho,
            ..kernel0
        };
        pos = kernel.sample_from_center(rng);
        steps += 1;
    }
    Ok(ExitSample {
        exit_position: pos,
        exit_time: None,
        steps,
        seed_id,
    })
}

/// One step of the discretized scheme: matched Gaussian plus compound-Poisson
/// jumps drawn from the restricted, normalized jump law. No drift
/// compensation (symmetry).
struct EulerStepper {
    d: usize,
    alpha: f64,
    sigma_step: f64,
    poisson: Poisson<f64>,
    jump_min: f64,
    jump_max: f64,
}

impl EulerStepper {
    fn new(spec: &ProcessSpec, params: &SchemeParams) -> Result<Self> {
        let lambda = params.jump_intensity(spec)?;
        Ok(EulerStepper {
            d: spec.d,
            alpha: spec.alpha,
            sigma_step: (params.sigma2_per_coord * params.dt).sqrt(),
            poisson: Poisson::new(lambda * params.dt)
                .map_err(|e| Error::InvalidScheme(format!("jump intensity: {e}")))?,
            jump_min: params.eps,
            jump_max: spec.cutoff().unwrap_or(f64::INFINITY),
        })
    }

    #[inline]
    fn step<R: Rng>(&self, pos: &mut Point, rng: &mut R) {
        for i in 0..self.d {
            let g: f64 = StandardNormal.sample(rng);
            pos.set(i, pos[i] + self.sigma_step * g);
        }
        let n_jumps = self.poisson.sample(rng) as u64;
        for _ in 0..n_jumps {
            let j = sample_jump(self.d, self.alpha, self.jump_min, self.jump_max, rng);
            *pos = pos.add(&j);
        }
    }
}

/// Opaque stepper handle for callers that drive the scheme manually (custom
/// stopping rules).
pub struct Stepper(EulerStepper);

pub fn euler_stepper_for(spec: &ProcessSpec, params: &SchemeParams) -> Result<Stepper> {
    Ok(Stepper(EulerStepper::new(spec, params)?))
}

#[inline]
pub fn euler_step<R: Rng>(stepper: &Stepper, pos: &mut Point, rng: &mut R) {
    stepper.0.step(pos, rng);
}

/// Occupation accumulator with cap-and-thin: on overflow every other site is
/// dropped and the keep-stride doubles, with pending dwell time carried so the
/// recorded total weight stays exactly `steps * dt`.
struct OccupationSink {
    sites: Vec<(Point, f64)>,
    stride: u64,
    pending: f64,
    countdown: u64,
    enabled: bool,
}

impl OccupationSink {
    fn new(enabled: bool) -> Self {
        OccupationSink {
            sites: Vec::new(),
            stride: 1,
            pending: 0.0,
            countdown: 1,
            enabled,
        }
    }

    #[inline]
    fn record(&mut self, pos: &Point, dt: f64) {
        if !self.enabled {
            return;
        }
        self.pending += dt;
        self.countdown -= 1;
        if self.countdown == 0 {
            self.sites.push((*pos, self.pending));
            self.pending = 0.0;
            self.countdown = self.stride;
            if self.sites.len() >= OCCUPATION_CAP {
                // keep even indices, reassign their dwell to preserve locality;
                // total weight is preserved because all kept weights double
                let mut kept = Vec::with_capacity(self.sites.len() / 2);
                for (i, (p, w)) in self.sites.iter().enumerate() {
                    if i % 2 == 0 {
                        kept.push((*p, w * 2.0));
                    }
                }
                // the doubling overcounts by the dropped half's weight exactly
                // when weights are uniform; correct any remainder into pending
                let before: f64 = self.sites.iter().map(|(_, w)| w).sum();
                let after: f64 = kept.iter().map(|(_, w)| w).sum();
                self.pending += before - after;
                self.sites = kept;
                self.stride *= 2;
                self.countdown = self.stride;
            }
        }
    }

    fn finish(mut self) -> OccupationRecord {
        if self.enabled && self.pending > 0.0 {
            if let Some(last) = self.sites.last_mut() {
                last.1 += self.pending;
            }
        }
        OccupationRecord { visited: self.sites }
    }
}

/// Simulate the killed discretized process from `x` until the first step
/// landing outside `D`; records dwell weights `dt` per visited site.
pub fn euler_exit(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    params: &SchemeParams,
    rng: &mut impl Rng,
    seed_id: u64,
    record_occupation: bool,
) -> Result<(ExitSample, OccupationRecord)> {
    euler_exit_where(
        spec,
        |p| domain.contains(p),
        x,
        params,
        rng,
        seed_id,
        record_occupation,
    )
}

/// Same scheme with an arbitrary open-set membership predicate (used for
/// intersections like `D ∩ B(Q, r)` that the shape algebra does not encode).
pub fn euler_exit_where<M>(
    spec: &ProcessSpec,
    contains: M,
    x: &Point,
    params: &SchemeParams,
    rng: &mut impl Rng,
    seed_id: u64,
    record_occupation: bool,
) -> Result<(ExitSample, OccupationRecord)>
where
    M: Fn(&Point) -> bool,
{
    if !contains(x) {
        return Err(Error::Inadmissible("scheme start point outside the set".into()));
    }
    let stepper = EulerStepper::new(spec, params)?;
    let mut sink = OccupationSink::new(record_occupation);
    let mut pos = *x;
    let mut steps: u64 = 0;
    loop {
        if steps >= params.max_steps {
            return Err(Error::StepCapExceeded {
                cap: params.max_steps,
                path_index: seed_id,
            });
        }
        sink.record(&pos, params.dt);
        stepper.step(&mut pos, rng);
        steps += 1;
        if !contains(&pos) {
            break;
        }
    }
    Ok((
        ExitSample {
            exit_position: pos,
            exit_time: Some(steps as f64 * params.dt),
            steps,
            seed_id,
        },
        sink.finish(),
    ))
}

/// Run `n` independent paths on substreams keyed by `(seed, path index)`.
/// Results are index-ordered, so the output is bit-reproducible for a fixed
/// seed regardless of worker count; per-path failures do not abort the batch.
pub fn batch_exits(
    spec: &ProcessSpec,
    domain: &DomainSpec,
    x: &Point,
    n: usize,
    seed: u64,
    params: Option<&SchemeParams>,
) -> Result<Vec<Result<ExitSample>>> {
    if n == 0 {
        return Err(Error::Inadmissible("path count must be >= 1".into()));
    }
    let run_one = |i: usize| -> Result<ExitSample> {
        let mut rng = substream(seed, i as u64);
        match spec.kind {
            ProcessKind::Stable => wos_exit_stable(domain, spec.alpha, x, &mut rng, i as u64),
            ProcessKind::Truncated => {
                let p = match params {
                    Some(p) => *p,
                    None => SchemeParams::defaults(spec)?,
                };
                euler_exit(spec, domain, x, &p, &mut rng, i as u64, false).map(|(e, _)| e)
            }
        }
    };
    Ok((0..n).into_par_iter().map(run_one).collect())
}

/// Collapse a batch into successes, or an aggregate error naming the failures.
pub fn collect_batch(results: Vec<Result<ExitSample>>) -> Result<Vec<ExitSample>> {
    let total = results.len();
    let mut ok = Vec::with_capacity(total);
    let mut first_failure: Option<(u64, String)> = None;
    let mut failed = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => ok.push(s),
            Err(e) => {
                failed += 1;
                if first_failure.is_none() {
                    first_failure = Some((i as u64, e.to_string()));
                }
            }
        }
    }
    if let Some((first_index, first_error)) = first_failure {
        return Err(Error::BatchFailures {
            failed,
            total,
            first_index,
            first_error,
        });
    }
    Ok(ok)
}
