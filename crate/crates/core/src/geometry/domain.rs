use std::sync::OnceLock;

use serde::Serialize;

use super::hull::{convex_hull_of, ConvexPolygon};
use super::point::{segment_distance, segments_intersect, Direction, Point2};
use super::polygon::{bbox, crossing, SimplePolygon, Triangle};
use super::triangulate::triangulate_polygon;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Which closed half-plane of the line `z·v = c` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `z·v ≥ c`
    Above,
    /// `z·v ≤ c`
    Below,
}

/// A point on the boundary with its arc-length direction and outward normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeFrame {
    pub point: Point2,
    pub tangent: Point2,
    pub normal: Point2,
}

/// Boundary quadrature node: a frame plus its arc-length weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeSample {
    pub frame: EdgeFrame,
    pub weight: f64,
    pub component: usize,
}

/// A compact planar region: a disjoint union of simple polygons.
#[derive(Debug, Clone)]
pub struct PolygonDomain {
    components: Vec<SimplePolygon>,
    triangles: OnceLock<Result<Vec<Triangle>>>,
    hull: OnceLock<ConvexPolygon>,
    index: OnceLock<EdgeIndex>,
}

impl PolygonDomain {
    /// Validates pairwise disjointness of the components.
    pub fn new(components: Vec<SimplePolygon>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDomain("no components".into()));
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if let Some(why) = overlap(&components[i], &components[j]) {
                    return Err(Error::InvalidDomain(format!(
                        "components {i} and {j} are not disjoint: {why}"
                    )));
                }
            }
        }
        Ok(Self::from_components_unchecked(components))
    }

    pub fn single(polygon: SimplePolygon) -> Self {
        Self::from_components_unchecked(vec![polygon])
    }

    /// Convenience: validate rings given as raw vertex lists.
    pub fn from_rings(rings: Vec<Vec<Point2>>) -> Result<Self> {
        let comps = rings
            .into_iter()
            .map(SimplePolygon::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub(crate) fn from_components_unchecked(components: Vec<SimplePolygon>) -> Self {
        Self {
            components,
            triangles: OnceLock::new(),
            hull: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    #[inline]
    pub fn components(&self) -> &[SimplePolygon] {
        &self.components
    }

    /// True for a clip result with nothing left.
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_convex(&self) -> bool {
        self.components.len() == 1 && self.components[0].is_convex()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point2> + '_ {
        self.components.iter().flat_map(|c| c.vertices().iter().copied())
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.components.iter().flat_map(|c| c.edges())
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }

    pub fn area(&self) -> f64 {
        self.components.iter().map(|c| c.area()).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.components.iter().map(|c| c.perimeter()).sum()
    }

    /// Area-weighted centroid over all components.
    pub fn barycenter(&self) -> Point2 {
        let mut m = Point2::ORIGIN;
        let mut a = 0.0;
        for c in &self.components {
            let (mc, a2) = c.moments();
            m += mc;
            a += 0.5 * a2;
        }
        m * (1.0 / a)
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let pts: Vec<Point2> = self.vertices().collect();
        bbox(&pts)
    }

    /// Convex hull of all vertices (cached).
    pub fn hull(&self) -> &ConvexPolygon {
        self.hull
            .get_or_init(|| convex_hull_of(self.vertices().collect()))
    }

    /// Convex hull as a simple polygon.
    pub fn convex_hull(&self) -> SimplePolygon {
        SimplePolygon::from_ring_unchecked(self.hull().vertices().to_vec())
    }

    /// Largest distance between two points of the domain; equals the
    /// diameter of its convex hull.
    pub fn diameter(&self) -> f64 {
        self.hull().diameter()
    }

    /// Default containment tolerance, `1e-9 × diameter`.
    pub fn default_tol(&self) -> f64 {
        1e-9 * self.diameter()
    }

    /// Closed-region membership with a distance tolerance.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        let idx = self.index();
        idx.winding(p) != 0 || idx.within(p, tol)
    }

    /// True when `p` lies inside and at distance `> margin` from the boundary.
    pub fn contains_strictly(&self, p: Point2, margin: f64) -> bool {
        let idx = self.index();
        idx.winding(p) != 0 && !idx.within(p, margin)
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    fn index(&self) -> &EdgeIndex {
        self.index.get_or_init(|| EdgeIndex::new(self.edges().collect()))
    }

    /// Keeps the part of the domain on one side of `z·v = c`.
    ///
    /// Each component is clipped independently. Non-convex components may
    /// produce weakly simple rings joined along the clip line; areas and
    /// winding numbers remain correct. An empty result is allowed.
    pub fn clip_halfplane(&self, v: Direction, c: f64, side: Side) -> PolygonDomain {
        let sign = match side {
            Side::Above => 1.0,
            Side::Below => -1.0,
        };
        let vv = v.vector();
        let comps = self
            .components
            .iter()
            .filter_map(|poly| {
                let ring = clip_ring(poly.vertices(), |p| sign * (p.dot(vv) - c));
                (ring.len() >= 3).then(|| SimplePolygon::from_ring_unchecked(ring))
            })
            .filter(|p| p.area() > 0.0)
            .collect();
        PolygonDomain::from_components_unchecked(comps)
    }

    /// Counterclockwise triangles covering every component.
    pub fn triangulate(&self) -> Result<&[Triangle]> {
        self.triangles
            .get_or_init(|| {
                let mut out = Vec::new();
                for c in &self.components {
                    out.extend(triangulate_polygon(c)?);
                }
                Ok(out)
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// Gauss–Legendre nodes along every edge with outward normals.
    pub fn edge_frames(&self, samples_per_edge: usize) -> Result<Vec<EdgeSample>> {
        if samples_per_edge == 0 {
            return Err(Error::InvalidParameter(
                "samples_per_edge must be at least 1".into(),
            ));
        }
        let rule = gauss_legendre(samples_per_edge);
        let mut out = Vec::with_capacity(self.edge_count() * samples_per_edge);
        for (ci, comp) in self.components.iter().enumerate() {
            for (a, b) in comp.edges() {
                let len = a.distance(b);
                let tangent = (b - a) * (1.0 / len);
                let normal = Point2::new(tangent.y, -tangent.x);
                for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                    out.push(EdgeSample {
                        frame: EdgeFrame {
                            point: a.lerp(b, 0.5 * (t + 1.0)),
                            tangent,
                            normal,
                        },
                        weight: 0.5 * len * w,
                        component: ci,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn reflex_vertices(&self) -> Vec<Point2> {
        self.components.iter().flat_map(|c| c.reflex_vertices()).collect()
    }

    /// Applies a point map to every vertex and re-validates.
    pub fn map(&self, f: impl Fn(Point2) -> Point2 + Copy) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| c.map(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn translate(&self, by: Point2) -> Result<Self> {
        self.map(move |p| p + by)
    }

    pub fn rotate(&self, angle: f64) -> Result<Self> {
        self.map(move |p| p.rotate(angle))
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        self.map(move |p| p * factor)
    }
}

/// Sutherland–Hodgman against `{p : signed(p) ≥ 0}`.
fn clip_ring(ring: &[Point2], signed: impl Fn(Point2) -> f64) -> Vec<Point2> {
    let n = ring.len();
    let mut out: Vec<Point2> = Vec::with_capacity(n + 4);
    let mut push = |p: Point2| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let (sa, sb) = (signed(a), signed(b));
        if sa >= 0.0 {
            push(a);
        }
        if (sa >= 0.0) != (sb >= 0.0) {
            let t = sa / (sa - sb);
            push(a.lerp(b, t));
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn overlap(a: &SimplePolygon, b: &SimplePolygon) -> Option<&'static str> {
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    if ahi.x < blo.x || bhi.x < alo.x || ahi.y < blo.y || bhi.y < alo.y {
        return None;
    }
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if segments_intersect(p, q, r, s) {
                return Some("boundaries intersect");
            }
        }
    }
    if b.winding_number(a.vertices()[0]) != 0 || a.winding_number(b.vertices()[0]) != 0 {
        return Some("one component lies inside the other");
    }
    None
}

/// Edges bucketed by their y-extent for fast point queries.
#[derive(Debug, Clone)]
struct EdgeIndex {
    edges: Vec<(Point2, Point2)>,
    y0: f64,
    y1: f64,
    inv_dy: f64,
    buckets: Vec<Vec<u32>>,
}

impl EdgeIndex {
    fn new(edges: Vec<(Point2, Point2)>) -> Self {
        let (y0, y1) = edges.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
            (lo.min(a.y).min(b.y), hi.max(a.y).max(b.y))
        });
        let nb = edges.len().clamp(8, 4096);
        let span = (y1 - y0).max(f64::MIN_POSITIVE);
        let inv_dy = nb as f64 / span;
        let mut buckets = vec![Vec::new(); nb];
        for (k, (a, b)) in edges.iter().enumerate() {
            let lo = ((a.y.min(b.y) - y0) * inv_dy).floor().max(0.0) as usize;
            let hi = (((a.y.max(b.y) - y0) * inv_dy).floor() as usize).min(nb - 1);
            for bucket in &mut buckets[lo.min(nb - 1)..=hi] {
                bucket.push(k as u32);
            }
        }
        Self {
            edges,
            y0,
            y1,
            inv_dy,
            buckets,
        }
    }

    fn bucket_of(&self, y: f64) -> usize {
        (((y - self.y0) * self.inv_dy).floor().max(0.0) as usize).min(self.buckets.len() - 1)
    }

    fn winding(&self, p: Point2) -> i32 {
        if p.y < self.y0 || p.y > self.y1 {
            return 0;
        }
        self.buckets[self.bucket_of(p.y)]
            .iter()
            .map(|&k| {
                let (a, b) = self.edges[k as usize];
                crossing(a, b, p)
            })
            .sum()
    }

    fn within(&self, p: Point2, tol: f64) -> bool {
        if p.y < self.y0 - tol || p.y > self.y1 + tol {
            return false;
        }
        let lo = self.bucket_of(p.y - tol);
        let hi = self.bucket_of(p.y + tol);
        self.buckets[lo..=hi].iter().flatten().any(|&k| {
            let (a, b) = self.edges[k as usize];
            segment_distance(p, a, b) <= tol
        })
    }
}
