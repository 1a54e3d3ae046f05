//! Bounded open sets with the structure the estimates need: boundary
//! distance, kappa-fat witnesses, rough connectivity, annuli and Stolz
//! approach regions.

mod point;
mod shape;

pub use point::{Point, MAX_DIM};
pub use shape::{BallShape, Shape};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declared kappa-fatness characteristics `(R, kappa)` of a domain.
/// `R < 1` is enforced; kappa lies in `(0, 1/2]`. The pair is certified by
/// sampling, not derived from the shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatnessCertificate {
    pub r_fat: f64,
    pub kappa: f64,
}

impl FatnessCertificate {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_fat > 0.0 && self.r_fat < 1.0) {
            return Err(Error::Certificate(format!(
                "R must lie in (0,1), got {}",
                self.r_fat
            )));
        }
        if !(self.kappa > 0.0 && self.kappa <= 0.5) {
            return Err(Error::Certificate(format!(
                "kappa must lie in (0, 1/2], got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// A bounded open set together with its declared fatness characteristics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: Shape,
    pub label: String,
    pub fatness: FatnessCertificate,
}

/// Component structure of a shape union: vertices are connected components,
/// edges join components at distance < 1.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentGraph {
    /// Ball indices per component (single-component shapes get one entry).
    pub components: Vec<Vec<usize>>,
    /// Pairs of component indices at gap < 1.
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
}

/// Non-tangential approach region at a boundary point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StolzRegion {
    pub vertex: Point,
    pub beta: f64,
    pub cap: f64,
}

impl StolzRegion {
    /// `beta` must exceed `(1-kappa)/kappa`; `cap` is `rho_D(x0)/3` capped at `R`.
    pub fn new(domain: &DomainSpec, vertex: Point, beta: f64, x0: &Point) -> Result<Self> {
        let kappa = domain.fatness.kappa;
        let min_beta = (1.0 - kappa) / kappa;
        if !(beta > min_beta) {
            return Err(Error::ParameterDomain(format!(
                "Stolz angle beta={beta} must exceed (1-kappa)/kappa={min_beta}"
            )));
        }
        let cap = (domain.boundary_distance(x0) / 3.0).min(domain.fatness.r_fat);
        Ok(StolzRegion { vertex, beta, cap })
    }

    /// Membership: `y` interior, shallower than the cap, and `|y-z| < beta rho(y)`.
    pub fn member(&self, domain: &DomainSpec, y: &Point) -> bool {
        if !domain.contains(y) {
            return false;
        }
        let rho = domain.boundary_distance(y);
        rho < self.cap && y.dist(&self.vertex) < self.beta * rho
    }
}

/// `A(x, a, b) = { y : a <= |y-x| < b }`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Annulus {
    pub center: Point,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(center: Point, inner: f64, outer: f64) -> Result<Self> {
        if !(0.0 <= inner && inner < outer) {
            return Err(Error::ParameterDomain(format!(
                "annulus radii must satisfy 0 <= inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(Annulus { center, inner, outer })
    }

    #[inline]
    pub fn contains(&self, y: &Point) -> bool {
        let d = y.dist(&self.center);
        self.inner <= d && d < self.outer
    }
}

impl DomainSpec {
    pub fn new(shape: Shape, label: impl Into<String>, r_fat: f64, kappa: f64) -> Result<Self> {
        shape.validate()?;
        let fatness = FatnessCertificate { r_fat, kappa };
        fatness.validate()?;
        Ok(DomainSpec {
            shape,
            label: label.into(),
            fatness,
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    #[inline]
    pub fn contains(&self, x: &Point) -> bool {
        self.shape.contains(x)
    }

    /// Exact distance to the boundary set of the shape algebra (min over
    /// union members).
    #[inline]
    pub fn boundary_distance(&self, x: &Point) -> f64 {
        self.shape.boundary_distance(x)
    }

    #[inline]
    pub fn inscribed_radius(&self, x: &Point) -> f64 {
        self.shape.inscribed_radius(x)
    }

    pub fn bounding_ball(&self) -> (Point, f64) {
        self.shape.bounding_ball()
    }

    pub fn diameter(&self) -> f64 {
        self.shape.diameter_bound()
    }

    /// Component graph and rough connectivity: components chained by
    /// inter-component gaps < 1 (unit jump range).
    pub fn roughly_connected(&self) -> ComponentGraph {
        let balls: Vec<BallShape> = match &self.shape {
            Shape::UnionOfBalls { balls } => balls.clone(),
            // the other shapes are connected sets
            _ => {
                return ComponentGraph {
                    components: vec![vec![0]],
                    edges: vec![],
                    connected: true,
                }
            }
        };
        let n = balls.len();
        // union-find over overlapping balls
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if balls[i].center.dist(&balls[j].center) < balls[i].radius + balls[j].radius {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut comp_of_root = std::collections::BTreeMap::new();
        let mut components: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let idx = *comp_of_root.entry(r).or_insert_with(|| {
                components.push(Vec::new());
                components.len() - 1
            });
            components[idx].push(i);
        }
        let m = components.len();
        // gap between components = min over member pairs of center distance minus radii
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); m];
        for a in 0..m {
            for b in (a + 1)..m {
                let mut gap = f64::INFINITY;
                for &i in &components[a] {
                    for &j in &components[b] {
                        let g = balls[i].center.dist(&balls[j].center)
                            - balls[i].radius
                            - balls[j].radius;
                        gap = gap.min(g.max(0.0));
                    }
                }
                if gap < 1.0 {
                    edges.push((a, b));
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        // breadth-first reachability over the gap graph
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        ComponentGraph {
            components,
            edges,
            connected: seen.iter().all(|&s| s),
        }
    }

    /// Nearest point on the boundary set together with the unit inward
    /// direction at that point. For box edges/corners the inward direction is
    /// the normalized sum of the violated face normals (the interior diagonal).
    pub fn nearest_boundary(&self, x: &Point) -> (Point, Point) {
        match &self.shape {
            Shape::Ball(b) => nearest_on_sphere(b, x, true),
            Shape::Box { min, max } => {
                if self.shape.contains(x) {
                    // project onto the nearest face
                    let mut best = (f64::INFINITY, 0usize, 0.0f64, 1.0f64);
                    for i in 0..x.dim() {
                        if x[i] - min[i] < best.0 {
                            best = (x[i] - min[i], i, min[i], 1.0);
                        }
                        if max[i] - x[i] < best.0 {
                            best = (max[i] - x[i], i, max[i], -1.0);
                        }
                    }
                    let mut q = *x;
                    q.set(best.1, best.2);
                    let mut inward = Point::zeros(x.dim());
                    inward.set(best.1, best.3);
                    (q, inward)
                } else {
                    // clamp onto the closed box
                    let mut q = *x;
                    let mut inward = Point::zeros(x.dim());
                    for i in 0..x.dim() {
                        if x[i] <= min[i] {
                            q.set(i, min[i]);
                            inward.set(i, 1.0);
                        } else if x[i] >= max[i] {
                            q.set(i, max[i]);
                            inward.set(i, -1.0);
                        }
                    }
                    let inward = inward.normalized().unwrap_or_else(|| {
                        let mut e = Point::zeros(x.dim());
                        e.set(0, 1.0);
                        e
                    });
                    (q, inward)
                }
            }
            Shape::UnionOfBalls { balls } => {
                let mut best: Option<(f64, &BallShape)> = None;
                for b in balls {
                    let d = (b.radius - x.dist(&b.center)).abs();
                    if best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, b));
                    }
                }
                nearest_on_sphere(best.unwrap().1, x, true)
            }
            Shape::BallMinusBall { outer, inner } => {
                let d_outer = (outer.radius - x.dist(&outer.center)).abs();
                let d_inner = (x.dist(&inner.center) - inner.radius).abs();
                if d_outer <= d_inner {
                    nearest_on_sphere(outer, x, true)
                } else {
                    nearest_on_sphere(inner, x, false)
                }
            }
        }
    }

    /// The kappa-fat witness `A_r(Q)`: a point with
    /// `B(A_r(Q), kappa r)` contained in `D` intersected with `B(Q, r)`.
    /// Deterministic: inward-ray probe at depth `r/2` first, then a
    /// golden-ratio depth sweep.
    pub fn fat_witness(&self, q: &Point, r: f64) -> Result<Point> {
        let kappa = self.fatness.kappa;
        if !(r > 0.0 && r < self.fatness.r_fat) {
            return Err(Error::Inadmissible(format!(
                "witness radius {r} outside (0, R={})",
                self.fatness.r_fat
            )));
        }
        let (q_proj, inward) = self.nearest_boundary(q);
        if q_proj.dist(q) > 1e-9 * self.diameter() {
            return Err(Error::Inadmissible(
                "witness base point is not on the boundary".into(),
            ));
        }
        // equality is admissible for open-ball containment; the slack only
        // absorbs float rounding at the kappa = 1/2 tight case
        let slack = 1e-9 * r;
        let ok = |a: &Point| -> bool {
            self.contains(a)
                && self.boundary_distance(a) >= kappa * r - slack
                && a.dist(q) + kappa * r <= r + slack
        };
        // candidate directions: the boundary normal, then center-blends for
        // box corners and edges where the face normal is too shallow
        let (bc, _) = self.bounding_ball();
        let toward_center = bc.sub(q).normalized();
        let mut dirs = vec![inward];
        if let Some(tc) = toward_center {
            dirs.push(tc);
            if let Some(mix) = inward.add(&tc).normalized() {
                dirs.push(mix);
            }
        }
        const PHI_FRAC: f64 = 0.618_033_988_749_894_8;
        for dir in &dirs {
            let probe = q.add_scaled(dir, 0.5 * r);
            if ok(&probe) {
                return Ok(probe);
            }
            // golden-ratio depth sweep in (kappa r, (1 - kappa) r)
            let lo = kappa * r;
            let hi = (1.0 - kappa) * r;
            let mut t_frac = 0.5;
            for _ in 0..64 {
                t_frac = (t_frac + PHI_FRAC).fract();
                let t = lo + t_frac * (hi - lo);
                let a = q.add_scaled(dir, t);
                if ok(&a) {
                    return Ok(a);
                }
            }
        }
        Err(Error::Certificate(format!(
            "no kappa-fat witness found at Q={:?}, r={r}; declared kappa={kappa} may be too large",
            q.as_slice()
        )))
    }

    /// Uniform-ish boundary sampler (parametric per shape, members weighted
    /// by surface area; union samples rejected when covered by another member,
    /// so only the true boundary is produced).
    pub fn sample_boundary<R: Rng>(&self, rng: &mut R) -> Point {
        match &self.shape {
            Shape::Ball(b) => b.center.add(&sample_sphere(rng, b.center.dim()).scale(b.radius)),
            Shape::Box { min, max } => {
                let d = min.dim();
                // choose a face with probability proportional to its area
                let mut areas = Vec::with_capacity(2 * d);
                for i in 0..d {
                    let mut a = 1.0;
                    for j in 0..d {
                        if j != i {
                            a *= max[j] - min[j];
                        }
                    }
                    areas.push(a);
                    areas.push(a);
                }
                let total: f64 = areas.iter().sum();
                let mut u = rng.random::<f64>() * total;
                let mut face = 0;
                for (k, a) in areas.iter().enumerate() {
                    if u < *a {
                        face = k;
                        break;
                    }
                    u -= a;
                }
                let axis = face / 2;
                let side = if face % 2 == 0 { min[axis] } else { max[axis] };
                let mut p = Point::zeros(d);
                for j in 0..d {
                    if j == axis {
                        p.set(j, side);
                    } else {
                        p.set(j, min[j] + rng.random::<f64>() * (max[j] - min[j]));
                    }
                }
                p
            }
            Shape::UnionOfBalls { balls } => {
                let d = balls[0].center.dim();
                let weights: Vec<f64> = balls.iter().map(|b| b.radius.powi(d as i32 - 1)).collect();
                let total: f64 = weights.iter().sum();
                loop {
                    let mut u = rng.random::<f64>() * total;
                    let mut k = 0;
                    for (i, w) in weights.iter().enumerate() {
                        if u < *w {
                            k = i;
                            break;
                        }
                        u -= w;
                    }
                    let p = balls[k]
                        .center
                        .add(&sample_sphere(rng, d).scale(balls[k].radius));
                    // reject points covered by another member: not on the true boundary
                    let covered = balls
                        .iter()
                        .enumerate()
                        .any(|(i, b)| i != k && p.dist2(&b.center) < b.radius * b.radius);
                    if !covered {
                        return p;
                    }
                }
            }
            Shape::BallMinusBall { outer, inner } => {
                let d = outer.center.dim();
                let w_out = outer.radius.powi(d as i32 - 1);
                let w_in = inner.radius.powi(d as i32 - 1);
                let pick_outer = rng.random::<f64>() * (w_out + w_in) < w_out;
                let b = if pick_outer { outer } else { inner };
                b.center.add(&sample_sphere(rng, d).scale(b.radius))
            }
        }
    }

    /// Certify the declared `(R, kappa)` at sampled boundary points: for each
    /// sampled `Q` and each dyadic radius below `R` the witness ball passes a
    /// 200-point rejection check of `B(A, kappa r)` inside `D` and `B(Q, r)`.
    pub fn certify<R: Rng>(&self, rng: &mut R, boundary_samples: usize) -> Result<()> {
        self.shape.validate()?;
        self.fatness.validate()?;
        let radii = [
            self.fatness.r_fat * 0.5,
            self.fatness.r_fat * 0.25,
            self.fatness.r_fat * 0.125,
        ];
        for _ in 0..boundary_samples {
            let q = self.sample_boundary(rng);
            for &r in &radii {
                let a = self.fat_witness(&q, r)?;
                let kr = self.fatness.kappa * r * (1.0 - 1e-6);
                for _ in 0..200 {
                    let y = a.add(&sample_ball(rng, self.dim()).scale(kr));
                    if !self.contains(&y) || y.dist(&q) >= r * (1.0 + 1e-9) {
                        return Err(Error::Certificate(format!(
                            "witness ball at Q={:?}, r={r} leaks outside D or B(Q,r)",
                            q.as_slice()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Uniform direction on the unit sphere.
pub fn sample_sphere<R: Rng>(rng: &mut R, dim: usize) -> Point {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let mut p = Point::zeros(dim);
        for i in 0..dim {
            p.set(i, StandardNormal.sample(rng));
        }
        if let Some(u) = p.normalized() {
            return u;
        }
    }
}

/// Uniform point in the unit ball.
pub fn sample_ball<R: Rng>(rng: &mut R, dim: usize) -> Point {
    let dir = sample_sphere(rng, dim);
    let u: f64 = rng.random();
    dir.scale(u.powf(1.0 / dim as f64))
}

fn nearest_on_sphere(b: &BallShape, x: &Point, inward_is_toward_center: bool) -> (Point, Point) {
    let rel = x.sub(&b.center);
    let dir = rel.normalized().unwrap_or_else(|| {
        let mut e = Point::zeros(x.dim());
        e.set(0, 1.0);
        e
    });
    let q = b.center.add(&dir.scale(b.radius));
    let inward = if inward_is_toward_center {
        dir.scale(-1.0)
    } else {
        dir
    };
    (q, inward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngutil::substream;
    use proptest::prelude::*;

    fn ball(cx: f64, cy: f64, r: f64) -> BallShape {
        BallShape::new(Point::xy(cx, cy), r)
    }

    fn unit_ball() -> DomainSpec {
        DomainSpec::new(Shape::Ball(ball(0.0, 0.0, 1.0)), "ball", 0.9, 0.5).unwrap()
    }

    #[test]
    fn boundary_distance_examples() {
        let d = unit_ball();
        assert_eq!(d.boundary_distance(&Point::xy(0.0, 0.0)), 1.0);

        let union = DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![ball(0.0, 0.0, 1.0), ball(2.5, 0.0, 1.0)],
            },
            "two",
            0.5,
            0.5,
        )
        .unwrap();
        assert_eq!(union.boundary_distance(&Point::xy(0.0, 0.0)), 1.0);

        let shell = DomainSpec::new(
            Shape::BallMinusBall {
                outer: ball(0.0, 0.0, 1.0),
                inner: ball(0.0, 0.0, 0.25),
            },
            "shell",
            0.3,
            0.4,
        )
        .unwrap();
        assert!((shell.boundary_distance(&Point::xy(0.5, 0.0)) - 0.25).abs() < 1e-15);

        let boxd = DomainSpec::new(
            Shape::Box {
                min: Point::xy(0.0, 0.0),
                max: Point::xy(1.0, 2.0),
            },
            "box",
            0.4,
            0.25,
        )
        .unwrap();
        assert!((boxd.boundary_distance(&Point::xy(0.3, 1.0)) - 0.3).abs() < 1e-15);
        // outside: distance to the nearest face/corner
        assert!((boxd.boundary_distance(&Point::xy(-0.3, -0.4)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_samples_have_zero_distance() {
        let shapes = [
            unit_ball(),
            DomainSpec::new(
                Shape::UnionOfBalls {
                    balls: vec![ball(0.0, 0.0, 1.0), ball(1.6, 0.0, 0.8)],
                },
                "overlap",
                0.3,
                0.3,
            )
            .unwrap(),
            DomainSpec::new(
                Shape::Box {
                    min: Point::xy(-1.0, -0.5),
                    max: Point::xy(1.0, 0.5),
                },
                "box",
                0.3,
                0.25,
            )
            .unwrap(),
            DomainSpec::new(
                Shape::BallMinusBall {
                    outer: ball(0.0, 0.0, 1.0),
                    inner: ball(0.1, 0.0, 0.3),
                },
                "shell",
                0.3,
                0.3,
            )
            .unwrap(),
        ];
        let mut rng = substream(5, 0);
        for dom in &shapes {
            for _ in 0..200 {
                let q = dom.sample_boundary(&mut rng);
                assert!(
                    dom.boundary_distance(&q) < 1e-12,
                    "{}: rho at boundary sample = {}",
                    dom.label,
                    dom.boundary_distance(&q)
                );
            }
        }
    }

    #[test]
    fn rough_connectivity_examples() {
        let single = unit_ball();
        assert!(single.roughly_connected().connected);

        let near = DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![ball(0.0, 0.0, 1.0), ball(2.5, 0.0, 1.0)],
            },
            "gap-0.5",
            0.5,
            0.5,
        )
        .unwrap();
        let g = near.roughly_connected();
        assert!(g.connected && g.components.len() == 2 && g.edges == vec![(0, 1)]);

        let far = DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![ball(0.0, 0.0, 1.0), ball(4.0, 0.0, 1.0)],
            },
            "gap-2",
            0.5,
            0.5,
        )
        .unwrap();
        let g = far.roughly_connected();
        assert!(!g.connected && g.edges.is_empty());

        // chain: ends are far apart but consecutive gaps are < 1
        let chain = DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![
                    ball(0.0, 0.0, 1.0),
                    ball(2.8, 0.0, 1.0),
                    ball(5.6, 0.0, 1.0),
                ],
            },
            "chain",
            0.5,
            0.5,
        )
        .unwrap();
        assert!(chain.roughly_connected().connected);
    }

    #[test]
    fn fat_witness_examples() {
        // inward radial point at depth r/2 for the ball
        let d = unit_ball();
        let a = d.fat_witness(&Point::xy(1.0, 0.0), 0.5).unwrap();
        assert!((a.as_slice()[0] - 0.75).abs() < 1e-12 && a.as_slice()[1].abs() < 1e-12);

        // box corner: interior diagonal at distance r/2
        let boxd = DomainSpec::new(
            Shape::Box {
                min: Point::xy(0.0, 0.0),
                max: Point::xy(1.0, 1.0),
            },
            "box",
            0.3,
            0.25,
        )
        .unwrap();
        let r = 0.1;
        let a = boxd.fat_witness(&Point::xy(0.0, 0.0), r).unwrap();
        assert!((a.dist(&Point::xy(0.0, 0.0)) - 0.5 * r).abs() < 1e-12);
        assert!((a.as_slice()[0] - a.as_slice()[1]).abs() < 1e-12, "diagonal");

        // witness invariants at sampled boundary points
        let mut rng = substream(6, 0);
        for dom in [unit_ball(), boxd] {
            for _ in 0..50 {
                let q = dom.sample_boundary(&mut rng);
                let r = 0.2 * dom.fatness.r_fat;
                let a = dom.fat_witness(&q, r).unwrap();
                let kappa = dom.fatness.kappa;
                assert!(dom.boundary_distance(&a) >= kappa * r - 1e-9 * r);
                assert!(a.dist(&q) < r);
            }
        }
    }

    #[test]
    fn certificates_accept_valid_and_reject_greedy_kappa() {
        let mut rng = substream(7, 0);
        unit_ball().certify(&mut rng, 20).unwrap();
        DomainSpec::new(
            Shape::UnionOfBalls {
                balls: vec![ball(0.0, 0.0, 1.0), ball(2.5, 0.0, 1.0)],
            },
            "dumbbell",
            0.5,
            0.5,
        )
        .unwrap()
        .certify(&mut rng, 20)
        .unwrap();
        DomainSpec::new(
            Shape::Box {
                min: Point::xy(0.0, 0.0),
                max: Point::xy(1.0, 1.0),
            },
            "box",
            0.3,
            0.25,
        )
        .unwrap()
        .certify(&mut rng, 20)
        .unwrap();

        // kappa = 0.45 cannot hold at square corners: (1-k)/sqrt(2) < k
        let greedy = DomainSpec::new(
            Shape::Box {
                min: Point::xy(0.0, 0.0),
                max: Point::xy(1.0, 1.0),
            },
            "box-greedy",
            0.3,
            0.45,
        )
        .unwrap();
        let corner = Point::xy(0.0, 0.0);
        assert!(greedy.fat_witness(&corner, 0.1).is_err());
    }

    #[test]
    fn stolz_membership_examples() {
        let dom = unit_ball();
        let x0 = Point::xy(0.0, 0.0);
        let z = Point::xy(1.0, 0.0);
        let region = StolzRegion::new(&dom, z, 3.0, &x0).unwrap();
        // inward normal points are members at small depth: |y-z| = rho(y)
        let y = Point::xy(0.99, 0.0);
        assert!(region.member(&dom, &y));
        // frozen example: y = z(1 - 0.01)
        assert!(region.member(&dom, &Point::xy(0.99, 0.0)));
        // tangential approach leaves every fixed aperture eventually
        let mut inside = 0;
        for phi in [0.5f64, 0.2, 0.05, 0.01] {
            let y = Point::xy((1.0 - 0.01 * phi * phi) * phi.cos(), (1.0 - 0.01 * phi * phi) * phi.sin());
            // rotate so the vertex stays (1, 0): the curve y hugs the circle
            if region.member(&dom, &y) {
                inside += 1;
            }
        }
        assert!(inside < 4, "tangential points eventually leave the region");
        // beta below the aperture floor is rejected
        assert!(StolzRegion::new(&dom, z, 0.9, &x0).is_err());
    }

    #[test]
    fn annulus_contains_half_open() {
        let a = Annulus::new(Point::xy(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!(a.contains(&Point::xy(0.5, 0.0)));
        assert!(a.contains(&Point::xy(0.75, 0.0)));
        assert!(!a.contains(&Point::xy(1.0, 0.0)));
        assert!(!a.contains(&Point::xy(0.0, 0.0)));
        assert!(Annulus::new(Point::xy(0.0, 0.0), 1.0, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn stolz_regions_nest_in_beta(
            beta1 in 1.1f64..4.0,
            extra in 0.1f64..3.0,
            px in -0.999f64..0.999,
            py in -0.999f64..0.999,
        ) {
            let dom = unit_ball();
            let x0 = Point::xy(0.0, 0.0);
            let z = Point::xy(1.0, 0.0);
            let small = StolzRegion::new(&dom, z, beta1, &x0).unwrap();
            let large = StolzRegion::new(&dom, z, beta1 + extra, &x0).unwrap();
            let y = Point::xy(px, py);
            if small.member(&dom, &y) {
                prop_assert!(large.member(&dom, &y));
            }
        }

        #[test]
        fn rough_connectivity_monotone_under_overlapping_addition(
            cx in -3.0f64..3.0,
            cy in -3.0f64..3.0,
            r in 0.2f64..1.5,
            pick in 0usize..3,
        ) {
            // start from a roughly connected chain, add a ball overlapping an
            // existing member: still roughly connected
            let base = vec![
                ball(0.0, 0.0, 1.0),
                ball(2.5, 0.0, 1.0),
                ball(2.5, 2.4, 1.0),
            ];
            let host = &base[pick];
            // force overlap with the picked member
            let dir = Point::xy(cx, cy).sub(&host.center).normalized()
                .unwrap_or_else(|| Point::xy(1.0, 0.0));
            let center = host.center.add(&dir.scale((host.radius + r) * 0.9));
            let mut balls = base.clone();
            balls.push(BallShape::new(center, r));
            let dom = DomainSpec::new(
                Shape::UnionOfBalls { balls },
                "aug",
                0.3,
                0.3,
            ).unwrap();
            prop_assert!(dom.roughly_connected().connected);
        }

        #[test]
        fn inscribed_radius_lower_bounds_boundary_distance(
            px in -1.2f64..3.7,
            py in -1.5f64..1.5,
        ) {
            let dom = DomainSpec::new(
                Shape::UnionOfBalls {
                    balls: vec![ball(0.0, 0.0, 1.0), ball(1.6, 0.0, 0.9)],
                },
                "overlap",
                0.3,
                0.3,
            ).unwrap();
            let p = Point::xy(px, py);
            if dom.contains(&p) {
                let ins = dom.inscribed_radius(&p);
                prop_assert!(ins > 0.0);
                // the inscribed ball stays inside: check by sampling dirs
                for k in 0..16 {
                    let th = k as f64 * 0.39269908;
                    let y = p.add(&Point::xy(th.cos(), th.sin()).scale(ins * 0.999));
                    prop_assert!(dom.contains(&y));
                }
            } else {
                prop_assert_eq!(dom.inscribed_radius(&p), 0.0);
            }
        }
    }
}
