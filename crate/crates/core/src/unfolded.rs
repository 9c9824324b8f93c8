//! The minimal unfolded region: the intersection over directions `v` of the
//! slabs `l(v) ≤ z·v ≤ u(v)`, where `u(v)` is the lowest position of the line
//! `z·v = c` such that reflecting the cap `{z·v ≥ c}` keeps it inside the
//! domain for every higher `c`.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{reflect, segment_distance, ConvexPolygon, Direction, Point2, PolygonDomain, Side};

/// Boundary samples checked on each clipped edge, besides its endpoints.
const EDGE_SAMPLES: usize = 8;
const MAX_SCAN_STEPS: f64 = 1e7;

/// `l(v) ≤ z·v ≤ u(v)` for one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionSlab {
    pub v: Direction,
    pub l: f64,
    pub u: f64,
    /// The scan from above failed at its first step, so `u` is the top
    /// support value.
    pub u_unresolved: bool,
    pub l_unresolved: bool,
}

impl DirectionSlab {
    pub fn width(&self) -> f64 {
        self.u - self.l
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnfoldedRegion {
    pub slabs: Vec<DirectionSlab>,
    /// Intersection of the slabs with the convex hull. May be a segment or
    /// a single point.
    pub polygon: ConvexPolygon,
    pub n_directions: usize,
    pub c_step: f64,
    pub tol: f64,
    /// The slabs had no common point within rounding slack; `polygon` was
    /// obtained by widening every slab by `widened_by`.
    pub degenerate: bool,
    pub widened_by: f64,
}

impl UnfoldedRegion {
    /// Membership in the polygon dilated by `c_step + tol`.
    pub fn contains_dilated(&self, p: Point2) -> bool {
        self.polygon.contains(p, self.c_step + self.tol + self.widened_by)
    }

    /// Every scan that failed at its first step, as `(direction angle, side)`.
    pub fn unresolved(&self) -> Vec<(f64, Side)> {
        let mut out = Vec::new();
        for s in &self.slabs {
            if s.u_unresolved {
                out.push((s.v.angle(), Side::Above));
            }
            if s.l_unresolved {
                out.push((s.v.angle(), Side::Below));
            }
        }
        out
    }
}

/// Default scan step, `diameter / 512`.
pub fn default_c_step(domain: &PolygonDomain) -> f64 {
    domain.diameter() / 512.0
}

pub const DEFAULT_DIRECTIONS: usize = 128;

/// Does the reflection of `{z·(sign v) ≥ sign c}` across `z·v = c` stay in
/// the domain?
fn reflected_cap_inside(
    domain: &PolygonDomain,
    reflex: &[Point2],
    v: Direction,
    c: f64,
    side: Side,
    tol: f64,
) -> bool {
    let cap = domain.clip_halfplane(v, c, side);
    if cap.is_empty() {
        return true;
    }
    let vv = v.vector();
    let eps = 1e-12 * domain.diameter();
    let on_line = |p: Point2| (p.dot(vv) - c).abs() <= eps;
    let inside = |p: Point2| domain.contains(reflect(p, v, c), tol);
    for comp in cap.components() {
        for (a, b) in comp.edges() {
            // edges along the cut reflect onto themselves
            if on_line(a) && on_line(b) {
                continue;
            }
            if !inside(a) {
                return false;
            }
            for j in 1..=EDGE_SAMPLES {
                let t = j as f64 / (EDGE_SAMPLES + 1) as f64;
                if !inside(a.lerp(b, t)) {
                    return false;
                }
            }
        }
    }
    // A notch of the domain reaching into the reflected cap between samples
    // shows up as a reflex vertex strictly inside it.
    let sign = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    for &r in reflex {
        if sign * (r.dot(vv) - c) >= 0.0 {
            continue;
        }
        for comp in cap.components() {
            let mirrored: Vec<(Point2, Point2)> = comp
                .edges()
                .map(|(a, b)| (reflect(a, v, c), reflect(b, v, c)))
                .collect();
            let wn: i32 = mirrored
                .iter()
                .map(|&(a, b)| crate::geometry::crossing_number(a, b, r))
                .sum();
            if wn != 0 && mirrored.iter().all(|&(a, b)| segment_distance(r, a, b) > tol) {
                return false;
            }
        }
    }
    true
}

/// Scans `c` from the top support value downward in steps of `c_step` and
/// returns the last value before the first failed containment test, and
/// whether the very first test failed.
fn scan_from_top(domain: &PolygonDomain, reflex: &[Point2], v: Direction, c_step: f64, tol: f64) -> (f64, bool) {
    let vv = v.vector();
    let (bot, top) = domain
        .vertices()
        .map(|p| p.dot(vv))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    let mut last = top;
    let mut k = 1u64;
    loop {
        let c = top - k as f64 * c_step;
        if c <= bot {
            return (bot, false);
        }
        if !reflected_cap_inside(domain, reflex, v, c, Side::Above, tol) {
            return (last, k == 1);
        }
        last = c;
        k += 1;
    }
}

/// `[l(v), u(v)]` by grid scans from both ends of the support interval.
pub fn slab(domain: &PolygonDomain, v: Direction, c_step: f64, tol: f64) -> Result<DirectionSlab> {
    check_scan(domain, c_step, tol)?;
    let reflex = domain.reflex_vertices();
    Ok(slab_inner(domain, &reflex, v, c_step, tol))
}

fn slab_inner(domain: &PolygonDomain, reflex: &[Point2], v: Direction, c_step: f64, tol: f64) -> DirectionSlab {
    let (u, u_unresolved) = scan_from_top(domain, reflex, v, c_step, tol);
    let opposite = Direction::from_angle(v.angle() + std::f64::consts::PI);
    let (neg_l, l_unresolved) = scan_from_top(domain, reflex, opposite, c_step, tol);
    let mut l = -neg_l;
    let mut u = u;
    // Both scans can stop on the same grid line from opposite sides; keep
    // l ≤ u when they cross by rounding.
    if l > u {
        let mid = 0.5 * (l + u);
        l = mid;
        u = mid;
    }
    DirectionSlab {
        v,
        l,
        u,
        u_unresolved,
        l_unresolved,
    }
}

fn check_scan(domain: &PolygonDomain, c_step: f64, tol: f64) -> Result<()> {
    if !(c_step > 0.0) || !c_step.is_finite() {
        return Err(Error::InvalidParameter(format!("c_step must be positive, got {c_step}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be non-negative, got {tol}")));
    }
    if domain.diameter() / c_step > MAX_SCAN_STEPS {
        return Err(Error::InvalidParameter(format!(
            "c_step {c_step} needs more than {MAX_SCAN_STEPS} scan steps"
        )));
    }
    Ok(())
}

/// The `k`-th of `n` equally spaced directions. Nested direction sets give
/// bit-identical directions.
pub fn direction(k: usize, n: usize) -> Direction {
    Direction::from_angle(TAU * (k as f64 / n as f64))
}

pub fn unfolded_region(
    domain: &PolygonDomain,
    n_directions: usize,
    c_step: f64,
    tol: f64,
) -> Result<UnfoldedRegion> {
    if n_directions < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 directions, got {n_directions}"
        )));
    }
    check_scan(domain, c_step, tol)?;
    let reflex = domain.reflex_vertices();
    let slabs: Vec<DirectionSlab> = (0..n_directions)
        .into_par_iter()
        .map(|k| slab_inner(domain, &reflex, direction(k, n_directions), c_step, tol))
        .collect();
    let clip_all = |slack: f64| {
        slabs.iter().fold(domain.hull().clone(), |poly, s| {
            let v = s.v.vector();
            poly.clip(v, s.u, slack).clip(-v, -s.l, slack)
        })
    };
    let slack = 1e-12 * domain.diameter();
    let mut polygon = clip_all(slack);
    let mut widened_by = 0.0;
    let mut degenerate = false;
    if polygon.is_empty() {
        degenerate = true;
        widened_by = c_step;
        loop {
            polygon = clip_all(widened_by);
            if !polygon.is_empty() {
                break;
            }
            widened_by *= 2.0;
        }
    }
    Ok(UnfoldedRegion {
        slabs,
        polygon,
        n_directions,
        c_step,
        tol,
        degenerate,
        widened_by,
    })
}

/// [`unfolded_region`] with 128 directions, `c_step = diameter/512` and
/// `tol = 1e-9·diameter`.
pub fn unfolded_region_default(domain: &PolygonDomain) -> Result<UnfoldedRegion> {
    unfolded_region(domain, DEFAULT_DIRECTIONS, default_c_step(domain), domain.default_tol())
}

/// `(min, max)` distance between the region and the boundary: the smallest
/// distance from a point of the region to the boundary (zero when they
/// meet), and the largest distance from a region vertex to a domain vertex.
pub fn uf_boundary_distances(domain: &PolygonDomain, region: &UnfoldedRegion) -> (f64, f64) {
    let poly = &region.polygon;
    let min = if domain.vertices().any(|w| poly.distance(w) == 0.0) {
        0.0
    } else {
        let edges: Vec<(Point2, Point2)> = domain.edges().collect();
        poly.distance_to_edges(edges.iter().copied())
    };
    let mut max: f64 = 0.0;
    for &z in poly.vertices() {
        for w in domain.vertices() {
            max = max.max(z.distance(w));
        }
    }
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run(d: &PolygonDomain, n: usize) -> UnfoldedRegion {
        unfolded_region(d, n, default_c_step(d), d.default_tol()).unwrap()
    }

    #[test]
    fn disc_slabs_pin_the_center() {
        let d = fixtures::disc(1.0, 256).unwrap();
        let step = default_c_step(&d);
        for k in 0..8 {
            let s = slab(&d, direction(k, 8), step, d.default_tol()).unwrap();
            assert!(s.l.abs() <= step + d.default_tol() && s.u.abs() <= step + d.default_tol(), "{s:?}");
            assert!(s.l <= s.u, "{k}: {s:?}");
        }
    }

    #[test]
    fn mirror_symmetric_axes() {
        let r = fixtures::rect(2.0, 1.0).unwrap();
        let step = default_c_step(&r);
        let sx = slab(&r, direction(0, 4), step, r.default_tol()).unwrap();
        assert!((sx.u - 1.0).abs() <= step && (sx.l - 1.0).abs() <= step);
        let sy = slab(&r, direction(1, 4), step, r.default_tol()).unwrap();
        assert!((sy.u - 0.5).abs() <= step && (sy.l - 0.5).abs() <= step);
    }

    #[test]
    fn isoceles_profile_slab() {
        let d = fixtures::AxisymProfile::new(vec![0.0, 0.5, 0.0]).unwrap().domain().unwrap();
        let s = slab(&d, direction(0, 4), default_c_step(&d), d.default_tol()).unwrap();
        assert!(s.l >= 0.25 && s.u <= 0.75, "{s:?}");
    }

    #[test]
    fn disc_region_is_tiny() {
        let d = fixtures::disc(1.0, 256).unwrap();
        let r = run(&d, 64);
        assert!(r.polygon.diameter() <= 2.0 * (r.c_step + r.tol));
        let (min, max) = uf_boundary_distances(&d, &r);
        let slack = 2.0 * (r.c_step + r.tol) + 1e-4;
        assert!((min - 1.0).abs() < slack && (max - 1.0).abs() < slack, "{min} {max}");
    }

    #[test]
    fn rectangle_region_is_its_center() {
        let d = fixtures::rect(2.0, 1.0).unwrap();
        let r = run(&d, 64);
        assert!(r.polygon.contains(Point2::new(1.0, 0.5), 1e-12));
        assert!(r.polygon.diameter() <= 2.0 * (r.c_step + r.tol) * 2f64.sqrt());
    }

    #[test]
    fn square_distances() {
        let d = fixtures::unit_square();
        let r = run(&d, 64);
        let (min, max) = uf_boundary_distances(&d, &r);
        let slack = 2.0 * (r.c_step + r.tol);
        assert!((min - 0.5).abs() <= slack && (max - 0.5f64.sqrt()).abs() <= slack);
    }

    #[test]
    fn equilateral_region_shrinks() {
        let d = fixtures::equilateral();
        let c = d.barycenter();
        let mut prev = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let r = run(&d, n);
            assert!(r.contains_dilated(c));
            let a = r.polygon.area();
            assert!(a <= prev, "n = {n}: {a} > {prev}");
            prev = a;
        }
    }

    #[test]
    fn two_discs_region_spans_the_gap() {
        let d = fixtures::two_discs(1.0, 4.0, 128).unwrap();
        let r = run(&d, 32);
        let (min, max) = uf_boundary_distances(&d, &r);
        assert!(max >= 3.0 - (r.c_step + r.tol));
        assert_eq!(min, 0.0);
        assert!(r.contains_dilated(Point2::new(2.0, 0.0)) && r.contains_dilated(Point2::new(-2.0, 0.0)));
    }

    #[test]
    fn l_shape_region_inside_hull() {
        let d = fixtures::l_shape();
        let r = run(&d, 32);
        assert!(!r.polygon.is_empty());
        for &z in r.polygon.vertices() {
            assert!(d.hull().contains(z, 1e-12));
        }
        // symmetric about the diagonal
        assert!(r.contains_dilated(Point2::new(0.8, 0.8)));
    }

    #[test]
    fn rejects_bad_parameters() {
        let d = fixtures::unit_square();
        assert!(unfolded_region(&d, 3, 0.01, 0.0).is_err());
        assert!(unfolded_region(&d, 8, 0.0, 0.0).is_err());
        assert!(slab(&d, direction(0, 4), 0.01, -1.0).is_err());
    }
}
