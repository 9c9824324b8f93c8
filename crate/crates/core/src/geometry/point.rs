use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or displacement) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

/// A unit vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction(Point2);

impl Direction {
    /// Normalises `v`; fails for zero or non-finite input.
    pub fn new(v: Point2) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "direction ({}, {}) cannot be normalised",
                v.x, v.y
            )));
        }
        Ok(Direction(v * (1.0 / n)))
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Direction(Point2::new(c, s))
    }

    #[inline]
    pub fn vector(self) -> Point2 {
        self.0
    }

    pub fn angle(self) -> f64 {
        self.0.y.atan2(self.0.x)
    }
}

/// Reflection of `p` in the line `{z : z·v = c}`.
#[inline]
pub fn reflect(p: Point2, v: Direction, c: f64) -> Point2 {
    let v = v.vector();
    p - v * (2.0 * (p.dot(v) - c))
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Distance between closed segments; zero when they intersect.
pub fn segment_segment_distance(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    segment_distance(a, c, d)
        .min(segment_distance(b, c, d))
        .min(segment_distance(c, a, b))
        .min(segment_distance(d, a, b))
}

/// Twice the signed area of triangle `abc` (positive when counterclockwise).
#[inline]
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_across_vertical_axis() {
        let v = Direction::new(Point2::new(1.0, 0.0)).unwrap();
        assert_eq!(reflect(Point2::new(1.0, 0.0), v, 0.0), Point2::new(-1.0, 0.0));
    }

    #[test]
    fn reflect_fixes_its_line() {
        let v = Direction::from_angle(0.7);
        let c = 0.3;
        let on_line = v.vector() * c + v.vector().perp() * 2.5;
        let r = reflect(on_line, v, c);
        assert!(r.distance(on_line) < 1e-15);
    }

    #[test]
    fn zero_direction_rejected() {
        assert!(Direction::new(Point2::ORIGIN).is_err());
    }

    #[test]
    fn segment_queries() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert!(segments_intersect(a, b, Point2::new(0.5, -1.0), Point2::new(0.5, 1.0)));
        assert!(segments_intersect(a, b, b, Point2::new(2.0, 3.0)));
        assert!(!segments_intersect(a, b, Point2::new(0.0, 1.0), Point2::new(1.0, 1.0)));
        assert_eq!(segment_distance(Point2::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(segment_distance(Point2::new(-3.0, 4.0), a, b), 5.0);
        let d = segment_segment_distance(a, b, Point2::new(2.0, 1.0), Point2::new(3.0, 1.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }
}
