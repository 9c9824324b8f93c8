use serde::Serialize;

use super::point::{orient, segments_intersect, Point2};
use crate::error::{Error, Result};

/// A simple polygon with counterclockwise vertex order.
///
/// Construction rejects fewer than three vertices, non-finite coordinates,
/// repeated consecutive vertices, self-intersections and zero area. Clockwise
/// input is reversed rather than rejected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplePolygon {
    vertices: Vec<Point2>,
}

impl SimplePolygon {
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!(
                "non-finite vertex ({}, {})",
                p.x, p.y
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidPolygon(format!(
                    "consecutive vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        let area2 = shoelace2(&vertices);
        let scale = bbox_extent(&vertices);
        if area2.abs() <= 1e-14 * scale * scale {
            return Err(Error::InvalidPolygon("zero signed area".into()));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        if let Some((i, j)) = find_self_intersection(&vertices) {
            return Err(Error::InvalidPolygon(format!(
                "edges {i} and {j} intersect"
            )));
        }
        Ok(Self { vertices })
    }

    /// Wraps a vertex ring without validation. Used for clip results, which
    /// may be weakly simple (zero-width bridges along the clip line).
    pub(crate) fn from_ring_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    /// Regular `n`-gon with circumradius `radius`, first vertex on the +x axis.
    pub fn regular(center: Point2, radius: f64, n: usize) -> Result<Self> {
        if n < 3 || !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "regular polygon needs n >= 3 and radius > 0 (n = {n}, radius = {radius})"
            )));
        }
        let step = std::f64::consts::TAU / n as f64;
        let pts = (0..n)
            .map(|k| {
                let (s, c) = (step * k as f64).sin_cos();
                center + Point2::new(c, s) * radius
            })
            .collect();
        Self::new(pts)
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(v_i, v_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * shoelace2(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let (m, a2) = first_moment(&self.vertices);
        m * (1.0 / (3.0 * a2))
    }

    /// First moment `∫ y dy` and twice the signed area.
    pub(crate) fn moments(&self) -> (Point2, f64) {
        let (m, a2) = first_moment(&self.vertices);
        (m * (1.0 / 6.0), a2)
    }

    /// Convex (collinear vertices allowed).
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let scale = bbox_extent(&self.vertices);
        let eps = 1e-12 * scale * scale;
        (0..n).all(|i| {
            orient(
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            ) >= -eps
        })
    }

    /// Vertices whose interior angle exceeds π.
    pub fn reflex_vertices(&self) -> Vec<Point2> {
        let n = self.vertices.len();
        let scale = bbox_extent(&self.vertices);
        let eps = 1e-12 * scale * scale;
        (0..n)
            .filter(|&i| {
                orient(
                    self.vertices[(i + n - 1) % n],
                    self.vertices[i],
                    self.vertices[(i + 1) % n],
                ) < -eps
            })
            .map(|i| self.vertices[i])
            .collect()
    }

    /// Winding number of the boundary around `p`.
    pub fn winding_number(&self, p: Point2) -> i32 {
        winding_number(self.edges(), p)
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| super::point::segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Applies `f` to every vertex and re-validates.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }
}

/// A counterclockwise triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triangle(pub [Point2; 3]);

impl Triangle {
    pub fn signed_area(&self) -> f64 {
        let [a, b, c] = self.0;
        0.5 * orient(a, b, c)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point2 {
        let [a, b, c] = self.0;
        (a + b + c) * (1.0 / 3.0)
    }

    /// The four congruent children obtained by joining edge midpoints.
    pub fn split4(&self) -> [Triangle; 4] {
        let [a, b, c] = self.0;
        let ab = a.lerp(b, 0.5);
        let bc = b.lerp(c, 0.5);
        let ca = c.lerp(a, 0.5);
        [
            Triangle([a, ab, ca]),
            Triangle([ab, b, bc]),
            Triangle([ca, bc, c]),
            Triangle([ab, bc, ca]),
        ]
    }
}

pub(crate) fn winding_number(edges: impl Iterator<Item = (Point2, Point2)>, p: Point2) -> i32 {
    let mut wn = 0;
    for (a, b) in edges {
        wn += crossing(a, b, p);
    }
    wn
}

/// Signed upward/downward crossing of the ray from `p` towards +x.
#[inline]
pub(crate) fn crossing(a: Point2, b: Point2, p: Point2) -> i32 {
    if a.y <= p.y {
        if b.y > p.y && orient(a, b, p) > 0.0 {
            return 1;
        }
    } else if b.y <= p.y && orient(a, b, p) < 0.0 {
        return -1;
    }
    0
}

fn shoelace2(v: &[Point2]) -> f64 {
    let n = v.len();
    // Relative to the first vertex to limit cancellation far from the origin.
    let o = v[0];
    (1..n.saturating_sub(1))
        .map(|i| (v[i] - o).cross(v[i + 1] - o))
        .sum()
}

fn first_moment(v: &[Point2]) -> (Point2, f64) {
    let o = v[0];
    let mut m = Point2::ORIGIN;
    let mut a2 = 0.0;
    for i in 1..v.len() - 1 {
        let (p, q) = (v[i] - o, v[i + 1] - o);
        let c = p.cross(q);
        a2 += c;
        m += (p + q) * c;
    }
    // Shift the moment back: ∫ y = ∫ (y - o) + o·A, with A = a2/2.
    // m holds 6·∫(y - o); return 6·∫ y consistently.
    (m + o * (3.0 * a2), a2)
}

pub(crate) fn bbox(v: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub(crate) fn bbox_extent(v: &[Point2]) -> f64 {
    let (lo, hi) = bbox(v);
    (hi.x - lo.x).max(hi.y - lo.y)
}

fn find_self_intersection(v: &[Point2]) -> Option<(usize, usize)> {
    let n = v.len();
    let boxes: Vec<(Point2, Point2)> = (0..n).map(|i| bbox(&[v[i], v[(i + 1) % n]])).collect();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        // Adjacent edge folding back onto this one.
        let c = v[(i + 2) % n];
        if orient(a, b, c) == 0.0 && (c - b).dot(a - b) > 0.0 {
            return Some((i, (i + 1) % n));
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1.x < bj.0.x || bj.1.x < bi.0.x || bi.1.y < bj.0.y || bj.1.y < bi.0.y {
                continue;
            }
            if segments_intersect(a, b, v[j], v[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(SimplePolygon::new(vec![p(0., 0.), p(1., 0.)]).is_err());
        assert!(SimplePolygon::new(vec![p(0., 0.), p(1., 0.), p(2., 0.)]).is_err());
        assert!(SimplePolygon::new(vec![p(0., 0.), p(1., 0.), p(1., 0.), p(0., 1.)]).is_err());
        // bow tie
        let bowtie = vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
        assert!(matches!(
            SimplePolygon::new(bowtie),
            Err(Error::InvalidPolygon(_))
        ));
        assert!(SimplePolygon::new(vec![p(0., 0.), p(f64::NAN, 0.), p(0., 1.)]).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let sq = SimplePolygon::new(vec![p(0., 0.), p(0., 1.), p(1., 1.), p(1., 0.)]).unwrap();
        assert!(sq.signed_area() > 0.0);
        assert_eq!(sq.area(), 1.0);
    }

    #[test]
    fn centroid_of_offset_square() {
        let sq = SimplePolygon::new(vec![p(10., 20.), p(12., 20.), p(12., 22.), p(10., 22.)])
            .unwrap();
        let c = sq.centroid();
        assert!((c.x - 11.0).abs() < 1e-12 && (c.y - 21.0).abs() < 1e-12);
    }

    #[test]
    fn reflex_vertices_of_l_shape() {
        let l = SimplePolygon::new(vec![
            p(0., 0.),
            p(2., 0.),
            p(2., 1.),
            p(1., 1.),
            p(1., 2.),
            p(0., 2.),
        ])
        .unwrap();
        assert!(!l.is_convex());
        assert_eq!(l.reflex_vertices(), vec![p(1., 1.)]);
    }
}
