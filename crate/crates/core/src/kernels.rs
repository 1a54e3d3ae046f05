//! Closed-form and quadrature-backed reference quantities: the ball Poisson
//! kernel for the stable process, the classical ball Green function used as
//! the Monte-Carlo oracle, Levy-system exit kernels, and the right-hand sides
//! of the comparison estimates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{sample_sphere, DomainSpec, Point};
use crate::process::{levy_constant, ProcessKind, ProcessSpec};
use crate::quad;
use crate::special::{ln_gamma, sphere_surface};

/// Ball Poisson kernel for the stable process:
/// `c2 (r^2-|x-w|^2)^{a/2} (|z-w|^2-r^2)^{-a/2} |x-z|^{-d}`,
/// with the normalization fixed numerically so the kernel integrates to 1
/// over the exterior.
#[derive(Clone, Copy, Debug)]
pub struct PoissonKernelBall {
    pub d: usize,
    pub alpha: f64,
    pub center: Point,
    pub radius: f64,
    pub normalization: f64,
}

/// `c2(d, alpha)` by 1-D radial quadrature: the exterior integral at the ball
/// center reduces to a Beta-type integral in `u = r/s`.
pub fn poisson_normalization(d: usize, alpha: f64) -> Result<f64> {
    // integral over exterior at the center: omega_d * int_0^1 u^{a-1} (1-u^2)^{-a/2} du
    let (i, _) = quad::tanh_sinh(
        |u, one_minus_u| u.powf(alpha - 1.0) * (one_minus_u * (1.0 + u)).powf(-0.5 * alpha),
        1e-11,
    )?;
    Ok(1.0 / (sphere_surface(d) * i))
}

/// Closed Beta form of the same normalization; kept separate as the oracle
/// for the numerical route.
pub fn poisson_normalization_closed(d: usize, alpha: f64) -> f64 {
    // c2 = Gamma(d/2) sin(pi a / 2) pi^{-d/2 - 1}
    (ln_gamma(0.5 * d as f64) - (0.5 * d as f64 + 1.0) * std::f64::consts::PI.ln()).exp()
        * (0.5 * std::f64::consts::PI * alpha).sin()
}

impl PoissonKernelBall {
    pub fn new(d: usize, alpha: f64, center: Point, radius: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) || d < 2 {
            return Err(Error::ParameterDomain(format!(
                "poisson kernel needs d >= 2 and alpha in (0,2), got d={d}, alpha={alpha}"
            )));
        }
        Ok(PoissonKernelBall {
            d,
            alpha,
            center,
            radius,
            normalization: poisson_normalization(d, alpha)?,
        })
    }

    /// Kernel density at exit point `z` for the process started at `x`.
    /// Boundary inputs (`|x-w| = r` or `|z-w| = r`) are singular.
    pub fn eval(&self, x: &Point, z: &Point) -> Result<f64> {
        let dx = x.dist(&self.center);
        let dz = z.dist(&self.center);
        if !(dx < self.radius) || !(dz > self.radius) {
            return Err(Error::SingularInput(format!(
                "poisson kernel needs |x-w| < r < |z-w|, got {dx} and {dz} vs r={}",
                self.radius
            )));
        }
        let r2 = self.radius * self.radius;
        Ok(self.normalization * (r2 - dx * dx).powf(0.5 * self.alpha)
            * (dz * dz - r2).powf(-0.5 * self.alpha)
            * x.dist(z).powi(-(self.d as i32)))
    }

    /// Exact draw of the exit position for the process started at the ball
    /// center: radius from the Beta law `(r/s)^2 ~ Beta(a/2, 1-a/2)`, uniform
    /// direction.
    pub fn sample_from_center<R: Rng>(&self, rng: &mut R) -> Point {
        use rand_distr::Distribution;
        let beta = rand_distr::Beta::new(0.5 * self.alpha, 1.0 - 0.5 * self.alpha)
            .expect("valid Beta parameters for alpha in (0,2)");
        let w: f64 = beta.sample(rng);
        let s = self.radius / w.sqrt();
        self.center.add(&sample_sphere(rng, self.d).scale(s))
    }
}

/// Free-space Riesz constant: `G^X(x,y) = riesz(d,a) |x-y|^{a-d}` on the whole
/// space (d > alpha); also the upper-bound constant for the killed Green
/// function.
pub fn riesz_constant(d: usize, alpha: f64) -> f64 {
    (ln_gamma(0.5 * (d as f64 - alpha))
        - alpha * std::f64::consts::LN_2
        - 0.5 * d as f64 * std::f64::consts::PI.ln()
        - ln_gamma(0.5 * alpha))
    .exp()
}

/// Classical Green function of the killed stable process on the unit ball,
/// via the 1-D integral representation
/// `k(d,a) |x-y|^{a-d} int_0^w t^{a/2-1}(1+t)^{-d/2} dt`,
/// `w = (1-|x|^2)(1-|y|^2)/|x-y|^2`. Adaptive quadrature on a smooth
/// substitution; serves as the exact oracle for Monte-Carlo Green estimates.
pub fn green_ball_unit(d: usize, alpha: f64, x: &Point, y: &Point) -> Result<f64> {
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::Inadmissible(
            "green_ball_unit needs both points in the open unit ball".into(),
        ));
    }
    let r2 = x.dist2(y);
    if r2 == 0.0 {
        return Err(Error::SingularInput("coincident points".into()));
    }
    let w = (1.0 - x.norm2()) * (1.0 - y.norm2()) / r2;
    let k = (ln_gamma(0.5 * d as f64)
        - alpha * std::f64::consts::LN_2
        - 0.5 * d as f64 * std::f64::consts::PI.ln()
        - 2.0 * ln_gamma(0.5 * alpha))
    .exp();
    let df = d as f64;
    let hyper = if w <= 1.0 {
        // t = u^{2/a} turns t^{a/2-1} dt into a smooth integrand on [0, w^{a/2}]
        let p = 2.0 / alpha;
        let (v, _) = quad::adaptive(
            |u| p * (1.0 + u.powf(p)).powf(-0.5 * df),
            0.0,
            w.powf(0.5 * alpha),
            1e-10,
            1e-300,
        )?;
        v
    } else {
        // full Beta integral minus the tail, tail transformed by t -> 1/v
        let full = (ln_gamma(0.5 * alpha) + ln_gamma(0.5 * (df - alpha)) - ln_gamma(0.5 * df)).exp();
        let q = 2.0 / (df - alpha);
        let (tail, _) = quad::adaptive(
            |u| q * (1.0 + u.powf(q)).powf(-0.5 * df),
            0.0,
            (1.0 / w).powf(0.5 * (df - alpha)),
            1e-10,
            1e-300,
        )?;
        full - tail
    };
    Ok(k * r2.powf(0.5 * (alpha - df)) * hyper)
}

/// Green function of a general ball by translation/scaling covariance:
/// `G_{B(w,r)}(x,y) = r^{alpha-d} G_{B(0,1)}((x-w)/r, (y-w)/r)`.
pub fn green_ball(d: usize, alpha: f64, ball_center: &Point, ball_radius: f64, x: &Point, y: &Point) -> Result<f64> {
    let xs = x.sub(ball_center).scale(1.0 / ball_radius);
    let ys = y.sub(ball_center).scale(1.0 / ball_radius);
    Ok(ball_radius.powf(alpha - d as f64) * green_ball_unit(d, alpha, &xs, &ys)?)
}

/// Monte-Carlo evaluation of the Levy-system exit kernel
/// `A(d,-a) int_D green(x,y) |y-z|^{-(d+a)} [cutoff] dy`
/// with an importance-sampling mixture that controls the Green singularity at
/// `y = x`. Returns `(value, stderr)`.
pub fn exit_kernel<G>(
    domain: &DomainSpec,
    green: G,
    spec: &ProcessSpec,
    x: &Point,
    z: &Point,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)>
where
    G: Fn(&Point, &Point) -> Result<f64>,
{
    if !domain.contains(x) {
        return Err(Error::Inadmissible("exit kernel start point outside D".into()));
    }
    if domain.contains(z) || domain.boundary_distance(z) == 0.0 {
        return Err(Error::Inadmissible("exit kernel target must be exterior".into()));
    }
    let cutoff = spec.cutoff();
    if let Some(c) = cutoff {
        // quick reject: indicator kills the integrand everywhere
        let (bc, br) = domain.bounding_ball();
        if z.dist(&bc) - br >= c {
            return Ok((0.0, 0.0));
        }
    }
    let d = spec.d;
    let coeff = levy_constant(d, spec.alpha)?;
    let (bc, br) = domain.bounding_ball();
    let ball_vol = (0.5 * d as f64 * std::f64::consts::PI.ln() - ln_gamma(0.5 * d as f64 + 1.0))
        .exp()
        * br.powi(d as i32);
    // proposal: 1/2 uniform on the bounding ball, 1/2 power-law cluster at x
    // with radial density prop. to t^{alpha-1} on (0, span)
    let span = 2.0 * br;
    let mut rng = crate::rngutil::substream(seed, 0x9e3b);
    let mut vals = Vec::with_capacity(n);
    for _ in 0..n {
        let (y, q) = if rng.random::<f64>() < 0.5 {
            let y = bc.add(&crate::geom::sample_ball(&mut rng, d).scale(br));
            (y, mixture_density(d, spec.alpha, ball_vol, span, &bc, br, x, &y))
        } else {
            let u: f64 = rng.random();
            let t = span * u.powf(1.0 / spec.alpha);
            let y = x.add(&sample_sphere(&mut rng, d).scale(t));
            (y, mixture_density(d, spec.alpha, ball_vol, span, &bc, br, x, &y))
        };
        if !domain.contains(&y) {
            vals.push(0.0);
            continue;
        }
        let dist_jump = y.dist(z);
        if let Some(c) = cutoff {
            if dist_jump >= c {
                vals.push(0.0);
                continue;
            }
        }
        let g = green(x, &y)?;
        let f = coeff * g * dist_jump.powf(-(d as f64 + spec.alpha));
        vals.push(f / q);
    }
    Ok(crate::stats::mean_stderr(&vals))
}

fn mixture_density(
    d: usize,
    alpha: f64,
    ball_vol: f64,
    span: f64,
    bc: &Point,
    br: f64,
    x: &Point,
    y: &Point,
) -> f64 {
    let uni = if y.dist(bc) < br { 1.0 / ball_vol } else { 0.0 };
    let t = y.dist(x);
    let pl = if t < span {
        // radial density alpha t^{alpha-1} / span^alpha over the sphere of area
        // omega_d t^{d-1}
        alpha * t.powf(alpha - 1.0) / span.powf(alpha) / (sphere_surface(d) * t.powi(d as i32 - 1))
    } else {
        0.0
    };
    0.5 * uni + 0.5 * pl
}

/// Reference interior point: deepest grid point whose boundary distance lies
/// in `(kappa R, R)`, ties broken lexicographically.
pub fn reference_point(domain: &DomainSpec) -> Result<Point> {
    let r_fat = domain.fatness.r_fat;
    let kappa = domain.fatness.kappa;
    let (bc, br) = domain.bounding_ball();
    let d = domain.dim();
    let step = (r_fat / 6.0).min(br / 8.0);
    let half = (br / step).ceil() as i64;
    let mut best: Option<(f64, Point)> = None;
    let mut idx = vec![-half; d];
    loop {
        let mut p = bc;
        for (i, &k) in idx.iter().enumerate() {
            p.set(i, bc[i] + k as f64 * step);
        }
        if domain.contains(&p) {
            let rho = domain.boundary_distance(&p);
            if rho > kappa * r_fat && rho < r_fat {
                let better = match &best {
                    None => true,
                    Some((brho, bp)) => {
                        rho > *brho + 1e-15
                            || ((rho - brho).abs() <= 1e-15 && lex_less(&p, bp))
                    }
                };
                if better {
                    best = Some((rho, p));
                }
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == d {
                return best.map(|(_, p)| p).ok_or_else(|| {
                    Error::Certificate(
                        "no grid point with boundary distance in (kappa R, R); R too large?".into(),
                    )
                });
            }
            idx[i] += 1;
            if idx[i] <= half {
                break;
            }
            idx[i] = -half;
            i += 1;
        }
    }
}

fn lex_less(a: &Point, b: &Point) -> bool {
    for i in 0..a.dim() {
        if a[i] < b[i] - 1e-18 {
            return true;
        }
        if a[i] > b[i] + 1e-18 {
            return false;
        }
    }
    false
}

/// Anchor point in the comparison set for a pair `(x, y)`: a point `A` with
/// `rho(A) > r(x,y)/M` and `|x-A| v |y-A| < 5 r(x,y)` where
/// `r(x,y) = rho(x) v rho(y) v |x-y|` and `M = 2/kappa`, when
/// `r(x,y) < R/(12M)`; the reference point otherwise.
pub fn anchor_point(domain: &DomainSpec, z0: &Point, x: &Point, y: &Point) -> Result<Point> {
    let kappa = domain.fatness.kappa;
    let m = 2.0 / kappa;
    let eps1 = domain.fatness.r_fat / (12.0 * m);
    let r = domain
        .boundary_distance(x)
        .max(domain.boundary_distance(y))
        .max(x.dist(y));
    if r == 0.0 {
        return Err(Error::Inadmissible("anchor for coincident boundary pair".into()));
    }
    if r >= eps1 {
        return Ok(*z0);
    }
    let (q, _) = domain.nearest_boundary(x);
    let a = domain.fat_witness(&q, r)?;
    debug_assert!(domain.boundary_distance(&a) > r / m);
    debug_assert!(x.dist(&a).max(y.dist(&a)) < 5.0 * r);
    Ok(a)
}

/// Kinds of two-sided comparison forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    /// Anchored Green form `g(x) g(y) / g(A)^2 * |x-y|^{a-d}`.
    GestY,
    /// Interior/boundary minimum form
    /// `min(|x-y|^{a-d}, rho(x)^{a/2} rho(y)^{a/2} / |x-y|^d)`.
    SharpC11,
    /// Generalized three-function inequality right side.
    ThreeG,
    /// Boundary kernel form `rho(x)^{a/2} / |x-z|^d`.
    MartinKernelC11,
}

/// A comparison form with its fitted or declared constants.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EstimateForm {
    pub kind: EstimateKind,
    /// Multiplicative constant `c`.
    pub constant: f64,
    /// Exponent `gamma` where the form uses one (ThreeG).
    pub gamma: Option<f64>,
}

/// Point tuples accepted by the forms.
#[derive(Clone, Copy, Debug)]
pub enum FormPoints {
    /// `(x, y)` with optional anchored-Green data `(g(x), g(y), g(A))`.
    Pair {
        x: Point,
        y: Point,
        g: Option<(f64, f64, f64)>,
    },
    /// `(x, y, z, w)` for the three-function form.
    Quad {
        x: Point,
        y: Point,
        z: Point,
        w: Point,
    },
    /// Interior point and boundary point.
    Boundary { x: Point, z: Point },
}

/// Evaluate the right-hand comparison expression of `form` at a point tuple,
/// rejecting inadmissible tuples with the violated condition.
pub fn estimate_rhs(
    form: &EstimateForm,
    domain: &DomainSpec,
    alpha: f64,
    pts: &FormPoints,
) -> Result<f64> {
    let d = domain.dim() as f64;
    let value = match (form.kind, pts) {
        (EstimateKind::GestY, FormPoints::Pair { x, y, g }) => {
            if x.dist2(y) == 0.0 {
                return Err(Error::Inadmissible(
                    "anchored form degenerate at x = y".into(),
                ));
            }
            let (gx, gy, ga) = g.ok_or_else(|| {
                Error::Inadmissible("anchored form needs g(x), g(y), g(A) values".into())
            })?;
            if !(gx > 0.0 && gy > 0.0 && ga > 0.0) {
                return Err(Error::Inadmissible("anchored form needs positive g values".into()));
            }
            gx * gy / (ga * ga) * x.dist(y).powf(alpha - d)
        }
        (EstimateKind::SharpC11, FormPoints::Pair { x, y, .. }) => {
            if x.dist2(y) == 0.0 {
                return Err(Error::Inadmissible("minimum form degenerate at x = y".into()));
            }
            let dist = x.dist(y);
            let riesz = dist.powf(alpha - d);
            let boundary = domain.boundary_distance(x).powf(0.5 * alpha)
                * domain.boundary_distance(y).powf(0.5 * alpha)
                / dist.powf(d);
            riesz.min(boundary)
        }
        (EstimateKind::ThreeG, FormPoints::Quad { x, y, z, w }) => {
            let gamma = form
                .gamma
                .ok_or_else(|| Error::Inadmissible("three-function form needs gamma".into()))?;
            let dxw = x.dist(w);
            let dxy = x.dist(y);
            let dzw = z.dist(w);
            if dxy == 0.0 || dzw == 0.0 || dxw == 0.0 {
                return Err(Error::Inadmissible(
                    "three-function form needs x != y, z != w, x != w".into(),
                ));
            }
            let dyz = y.dist(z);
            let m = dxw.min(dyz);
            let bracket1 = (m / dxy).max(1.0).powf(gamma);
            let bracket2 = (m / dzw).max(1.0).powf(gamma);
            bracket1 * bracket2 * dxw.powf(d - alpha) / (dxy.powf(d - alpha) * dzw.powf(d - alpha))
        }
        (EstimateKind::MartinKernelC11, FormPoints::Boundary { x, z }) => {
            if !domain.contains(x) {
                return Err(Error::Inadmissible("interior point required".into()));
            }
            let dist = x.dist(z);
            if dist == 0.0 {
                return Err(Error::Inadmissible("boundary form degenerate at x = z".into()));
            }
            domain.boundary_distance(x).powf(0.5 * alpha) / dist.powf(d)
        }
        _ => {
            return Err(Error::Inadmissible(
                "point tuple shape does not match the form kind".into(),
            ))
        }
    };
    Ok(form.constant * value)
}

/// Convenience: does the process kind carry a jump cutoff.
pub fn has_cutoff(kind: ProcessKind) -> bool {
    kind == ProcessKind::Truncated
}
