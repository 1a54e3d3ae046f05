use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{Error, Result};

/// An open ball given by center and radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallShape {
    pub center: Point,
    pub radius: f64,
}

impl BallShape {
    pub fn new(center: Point, radius: f64) -> Self {
        BallShape { center, radius }
    }
}

/// The supported open-set algebra. Every shape has closed-form membership,
/// boundary distance and boundary parametrization; unions use the min/max
/// combination rules over members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Ball(BallShape),
    Box { min: Point, max: Point },
    UnionOfBalls { balls: Vec<BallShape> },
    BallMinusBall { outer: BallShape, inner: BallShape },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball(b) => b.center.dim(),
            Shape::Box { min, .. } => min.dim(),
            Shape::UnionOfBalls { balls } => balls[0].center.dim(),
            Shape::BallMinusBall { outer, .. } => outer.center.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Ball(b) => {
                if !(b.radius > 0.0) {
                    return Err(Error::ParameterDomain("ball radius must be positive".into()));
                }
            }
            Shape::Box { min, max } => {
                if min.dim() != max.dim() {
                    return Err(Error::ParameterDomain("box corners disagree in dimension".into()));
                }
                for i in 0..min.dim() {
                    if !(min[i] < max[i]) {
                        return Err(Error::ParameterDomain(format!(
                            "box degenerate along coordinate {i}"
                        )));
                    }
                }
            }
            Shape::UnionOfBalls { balls } => {
                if balls.is_empty() {
                    return Err(Error::ParameterDomain("union of balls must be nonempty".into()));
                }
                let d = balls[0].center.dim();
                for b in balls {
                    if b.center.dim() != d {
                        return Err(Error::ParameterDomain("union members disagree in dimension".into()));
                    }
                    if !(b.radius > 0.0) {
                        return Err(Error::ParameterDomain("ball radius must be positive".into()));
                    }
                }
            }
            Shape::BallMinusBall { outer, inner } => {
                if outer.center.dim() != inner.center.dim() {
                    return Err(Error::ParameterDomain("shell members disagree in dimension".into()));
                }
                // inner must sit strictly inside outer so the set is connected.
                let sep = outer.center.dist(&inner.center);
                if !(sep + inner.radius < outer.radius) {
                    return Err(Error::ParameterDomain(
                        "inner ball must be strictly inside the outer ball".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Strict interior membership (open-set semantics).
    #[inline]
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Shape::Ball(b) => x.dist2(&b.center) < b.radius * b.radius,
            Shape::Box { min, max } => {
                (0..x.dim()).all(|i| min[i] < x[i] && x[i] < max[i])
            }
            Shape::UnionOfBalls { balls } => balls
                .iter()
                .any(|b| x.dist2(&b.center) < b.radius * b.radius),
            Shape::BallMinusBall { outer, inner } => {
                x.dist2(&outer.center) < outer.radius * outer.radius
                    && x.dist2(&inner.center) > inner.radius * inner.radius
            }
        }
    }

    /// Distance to the boundary surface set, computed closed-form per shape
    /// and by min over members for unions. For overlapping unions this is a
    /// lower bound on the distance to the true boundary (each member sphere
    /// is counted whether or not it is exposed).
    #[inline]
    pub fn boundary_distance(&self, x: &Point) -> f64 {
        match self {
            Shape::Ball(b) => (b.radius - x.dist(&b.center)).abs(),
            Shape::Box { min, max } => {
                if self.contains(x) {
                    let mut m = f64::INFINITY;
                    for i in 0..x.dim() {
                        m = m.min(x[i] - min[i]).min(max[i] - x[i]);
                    }
                    m
                } else {
                    // distance to the closed box, attained on the boundary;
                    // zero for points on the boundary itself
                    let mut acc = 0.0;
                    for i in 0..x.dim() {
                        let out = (min[i] - x[i]).max(x[i] - max[i]).max(0.0);
                        acc += out * out;
                    }
                    acc.sqrt()
                }
            }
            Shape::UnionOfBalls { balls } => balls
                .iter()
                .map(|b| (b.radius - x.dist(&b.center)).abs())
                .fold(f64::INFINITY, f64::min),
            Shape::BallMinusBall { outer, inner } => {
                let d_outer = (outer.radius - x.dist(&outer.center)).abs();
                let d_inner = (x.dist(&inner.center) - inner.radius).abs();
                d_outer.min(d_inner)
            }
        }
    }

    /// Radius of a ball around `x` guaranteed to lie inside the open set;
    /// 0 for points outside. Differs from `boundary_distance` only for
    /// overlapping unions, where the max-over-members rule keeps walk-on-spheres
    /// from stalling on interior points that sit on a covered member sphere.
    #[inline]
    pub fn inscribed_radius(&self, x: &Point) -> f64 {
        match self {
            Shape::UnionOfBalls { balls } => balls
                .iter()
                .map(|b| b.radius - x.dist(&b.center))
                .fold(0.0f64, f64::max),
            _ => {
                if self.contains(x) {
                    self.boundary_distance(x)
                } else {
                    0.0
                }
            }
        }
    }

    /// A ball containing the whole set.
    pub fn bounding_ball(&self) -> (Point, f64) {
        match self {
            Shape::Ball(b) => (b.center, b.radius),
            Shape::Box { min, max } => {
                let c = min.add(max).scale(0.5);
                (c, max.sub(min).norm() * 0.5)
            }
            Shape::UnionOfBalls { balls } => {
                // center of mass of centers; radius covering all members
                let d = balls[0].center.dim();
                let mut c = Point::zeros(d);
                for b in balls {
                    c = c.add(&b.center);
                }
                c = c.scale(1.0 / balls.len() as f64);
                let r = balls
                    .iter()
                    .map(|b| c.dist(&b.center) + b.radius)
                    .fold(0.0f64, f64::max);
                (c, r)
            }
            Shape::BallMinusBall { outer, .. } => (outer.center, outer.radius),
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        2.0 * self.bounding_ball().1
    }
}
