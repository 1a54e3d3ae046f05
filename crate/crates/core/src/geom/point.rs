use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Index;

/// Largest supported spatial dimension. Points are fixed-capacity so the
/// Monte-Carlo inner loops never allocate.
pub const MAX_DIM: usize = 8;

/// A point (or vector) in `R^d`, `2 <= d <= MAX_DIM`.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    dim: u8,
    coords: [f64; MAX_DIM],
}

impl Point {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Point {
            dim: dim as u8,
            coords: [0.0; MAX_DIM],
        }
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        let mut p = Point::zeros(coords.len());
        p.coords[..coords.len()].copy_from_slice(coords);
        p
    }

    /// 2-D convenience constructor.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::from_slice(&[x, y])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: f64) {
        debug_assert!(i < self.dim());
        self.coords[i] = v;
    }

    #[inline]
    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] += other.coords[i];
        }
        out
    }

    #[inline]
    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] -= other.coords[i];
        }
        out
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Point {
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] *= s;
        }
        out
    }

    /// `self + s * dir`.
    #[inline]
    pub fn add_scaled(&self, dir: &Point, s: f64) -> Point {
        debug_assert_eq!(self.dim, dir.dim);
        let mut out = *self;
        for i in 0..self.dim() {
            out.coords[i] += s * dir.coords[i];
        }
        out
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            acc += self.coords[i] * other.coords[i];
        }
        acc
    }

    #[inline]
    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            let d = self.coords[i] - other.coords[i];
            acc += d * d;
        }
        acc
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    /// Unit vector in the direction of `self`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        if n > 0.0 {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }
}

impl Index<usize> for Point {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim());
        &self.coords[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.as_slice())
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for v in self.as_slice() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

struct PointVisitor;

impl<'de> Visitor<'de> for PointVisitor {
    type Value = Point;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "a sequence of 1..={MAX_DIM} floats")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Point, A::Error> {
        let mut coords = [0.0; MAX_DIM];
        let mut n = 0;
        while let Some(v) = seq.next_element::<f64>()? {
            if n >= MAX_DIM {
                return Err(serde::de::Error::invalid_length(n + 1, &self));
            }
            coords[n] = v;
            n += 1;
        }
        if n == 0 {
            return Err(serde::de::Error::invalid_length(0, &self));
        }
        Ok(Point::from_slice(&coords[..n]))
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Point, D::Error> {
        deserializer.deserialize_seq(PointVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = Point::xy(1.0, 2.0);
        let b = Point::xy(-0.5, 1.0);
        assert_eq!(a.add(&b).as_slice(), &[0.5, 3.0]);
        assert_eq!(a.sub(&b).as_slice(), &[1.5, 1.0]);
        assert_eq!(a.dot(&b), 1.5);
        assert!((a.dist(&b) - (1.5f64 * 1.5 + 1.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn serde_roundtrip() {
        let p = Point::from_slice(&[0.25, -1.5, 3.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[0.25,-1.5,3.0]");
        let q: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
