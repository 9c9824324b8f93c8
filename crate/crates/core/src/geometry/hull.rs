use serde::Serialize;

use super::point::{orient, segment_distance, segment_segment_distance, Point2};

/// A convex polygon in counterclockwise order. May be degenerate (a point
/// or a segment) when produced by half-plane intersection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Caller guarantees counterclockwise convex order.
    pub(crate) fn from_ccw(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let o = self.vertices[0];
        0.5 * (1..n - 1)
            .map(|i| (self.vertices[i] - o).cross(self.vertices[i + 1] - o))
            .sum::<f64>()
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let mean = self
            .vertices
            .iter()
            .fold(Point2::ORIGIN, |acc, &p| acc + p)
            * (1.0 / n as f64);
        if n < 3 {
            return mean;
        }
        let o = self.vertices[0];
        let mut m = Point2::ORIGIN;
        let mut a2 = 0.0;
        for i in 1..n - 1 {
            let (p, q) = (self.vertices[i] - o, self.vertices[i + 1] - o);
            let c = p.cross(q);
            a2 += c;
            m += (p + q) * c;
        }
        if a2 <= 0.0 {
            return mean;
        }
        o + m * (1.0 / (3.0 * a2))
    }

    /// Largest vertex-to-vertex distance, by rotating calipers.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        match n {
            0 | 1 => return 0.0,
            2 => return v[0].distance(v[1]),
            _ => {}
        }
        let mut best: f64 = 0.0;
        let mut j = 1;
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            // advance j while the triangle a b v[j+1] grows
            while orient(a, b, v[(j + 1) % n]).abs() > orient(a, b, v[j]).abs() {
                j = (j + 1) % n;
            }
            best = best
                .max(a.distance(v[j]))
                .max(b.distance(v[j]))
                .max(a.distance(v[(j + 1) % n]))
                .max(b.distance(v[(j + 1) % n]));
        }
        best
    }

    /// Distance from `p` to the filled polygon (zero inside).
    pub fn distance(&self, p: Point2) -> f64 {
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => p.distance(self.vertices[0]),
            2 => segment_distance(p, self.vertices[0], self.vertices[1]),
            _ => {
                if self.edges().all(|(a, b)| orient(a, b, p) >= 0.0) {
                    0.0
                } else {
                    self.edges()
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Nearest point of the filled polygon.
    pub fn project(&self, p: Point2) -> Point2 {
        match self.vertices.len() {
            0 => p,
            1 => self.vertices[0],
            _ => {
                if self.vertices.len() >= 3 && self.edges().all(|(a, b)| orient(a, b, p) >= 0.0) {
                    return p;
                }
                let mut best = (f64::INFINITY, p);
                for (a, b) in self.edges() {
                    let ab = b - a;
                    let len2 = ab.norm_sq();
                    let t = if len2 > 0.0 {
                        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    let q = a + ab * t;
                    let d = p.distance(q);
                    if d < best.0 {
                        best = (d, q);
                    }
                }
                best.1
            }
        }
    }

    /// Keeps `{z : z·normal ≤ offset + slack}`.
    pub(crate) fn clip(&self, normal: Point2, offset: f64, slack: f64) -> ConvexPolygon {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let s = |p: Point2| offset + slack - p.dot(normal);
        if n == 1 {
            return if s(self.vertices[0]) >= 0.0 {
                self.clone()
            } else {
                ConvexPolygon::from_ccw(Vec::new())
            };
        }
        let mut out: Vec<Point2> = Vec::with_capacity(n + 1);
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let (sa, sb) = (s(a), s(b));
            if sa >= 0.0 {
                out.push(a);
            }
            if (sa >= 0.0) != (sb >= 0.0) {
                out.push(a.lerp(b, sa / (sa - sb)));
            }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        ConvexPolygon::from_ccw(out)
    }

    /// Smallest distance between this polygon (filled) and a set of edges,
    /// zero if they touch or any edge endpoint lies inside.
    pub(crate) fn distance_to_edges(
        &self,
        edges: impl Iterator<Item = (Point2, Point2)> + Clone,
    ) -> f64 {
        if edges.clone().any(|(a, _)| self.distance(a) == 0.0) {
            return 0.0;
        }
        let own: Vec<(Point2, Point2)> = match self.vertices.len() {
            0 => return f64::INFINITY,
            1 => vec![(self.vertices[0], self.vertices[0])],
            2 => vec![(self.vertices[0], self.vertices[1])],
            _ => self.edges().collect(),
        };
        let mut best = f64::INFINITY;
        for (a, b) in edges {
            for &(c, d) in &own {
                best = best.min(segment_segment_distance(a, b, c, d));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }
}

/// Andrew's monotone chain; collinear points are dropped.
pub fn convex_hull_of(mut pts: Vec<Point2>) -> ConvexPolygon {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return ConvexPolygon::from_ccw(pts);
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    ConvexPolygon::from_ccw(lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn brute_diameter(pts: &[Point2]) -> f64 {
        let mut best: f64 = 0.0;
        for a in pts {
            for b in pts {
                best = best.max(a.distance(*b));
            }
        }
        best
    }

    #[test]
    fn hull_of_convex_polygon_is_itself() {
        let tri = fixtures::unit_triangle();
        let h = tri.hull();
        assert_eq!(h.vertices().len(), 3);
        assert!((h.area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hull_of_two_squares() {
        let d = crate::geometry::PolygonDomain::from_rings(vec![
            vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)],
            vec![Point2::new(2., 0.), Point2::new(3., 0.), Point2::new(3., 1.), Point2::new(2., 1.)],
        ])
        .unwrap();
        let h = d.hull();
        // brute-force hull area: the 3×1 rectangle
        assert!((h.area() - 3.0).abs() < 1e-15);
        assert!(h.area() >= 2.0);
        for v in d.vertices() {
            assert!(h.contains(v, 1e-12));
        }
    }

    #[test]
    fn hull_of_star_uses_outer_vertices() {
        let star = fixtures::star_octagon();
        let outer: Vec<Point2> = star.vertices().step_by(2).collect();
        let h = star.hull();
        let h2 = convex_hull_of(outer);
        assert!((h.area() - h2.area()).abs() < 1e-14);
        assert_eq!(h.vertices().len(), 4);
    }

    #[test]
    fn diameter_examples() {
        assert!((fixtures::unit_square().diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!((fixtures::unit_triangle().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let two = fixtures::two_discs(1.0, 4.0, 128).unwrap();
        let pts: Vec<Point2> = two.vertices().collect();
        let brute = brute_diameter(&pts);
        assert!((two.diameter() - brute).abs() < 1e-12);
        assert!((two.diameter() - 6.0).abs() < 2e-3);
    }

    #[test]
    fn projection_and_distance() {
        let h = fixtures::unit_square().hull().clone();
        assert_eq!(h.project(Point2::new(0.5, 0.5)), Point2::new(0.5, 0.5));
        assert_eq!(h.project(Point2::new(2.0, 0.5)), Point2::new(1.0, 0.5));
        assert_eq!(h.distance(Point2::new(2.0, 0.5)), 1.0);
        let seg = ConvexPolygon::from_ccw(vec![Point2::new(0., 0.), Point2::new(2., 0.)]);
        assert_eq!(seg.distance(Point2::new(1.0, 1.0)), 1.0);
    }

    #[test]
    fn clip_to_slab() {
        let h = fixtures::unit_square().hull().clone();
        let c = h.clip(Point2::new(1.0, 0.0), 0.25, 0.0);
        assert!((c.area() - 0.25).abs() < 1e-15);
        let c = c.clip(Point2::new(-1.0, 0.0), -0.25, 0.0);
        // x == 0.25: a segment
        assert!(c.area().abs() < 1e-15);
        assert!(!c.is_empty());
        assert!(c.contains(Point2::new(0.25, 0.5), 1e-15));
    }
}
