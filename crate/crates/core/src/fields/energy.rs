use rayon::prelude::*;

use super::{solid_angle, SolidAngleParams};
use crate::error::Result;
use crate::geometry::{segment_segment_distance, Point2, PolygonDomain};
use crate::quadrature::{
    adaptive_gl_relative, adaptive_gl_split, adaptive_triangles, gauss_legendre, integrate_fixed,
    AreaQuadrature,
};

/// `∫_Ω A_Ω(x) dx`.
///
/// With `V(r) = -ln(h + √(r² + h²))`, which solves `ΔV = -h/(r²+h²)^{3/2}`,
/// two applications of the divergence theorem give
/// `∫_Ω∫_Ω h/(|x-y|²+h²)^{3/2} = ∮∮ V(|x-y|) n(x)·n(y) ds_x ds_y`.
/// The double edge integrals are smooth for `h > 0`.
pub fn self_energy(domain: &PolygonDomain, p: SolidAngleParams) -> Result<f64> {
    let h = p.h();
    let edges: Vec<Edge> = domain.edges().map(|(a, b)| Edge::new(a, b)).collect();
    let rows: Vec<f64> = edges
        .par_iter()
        .map(|ei| {
            edges.iter().try_fold(0.0, |acc, ej| {
                let nn = ei.n.dot(ej.n);
                if nn == 0.0 {
                    return Ok(acc);
                }
                Ok(acc + nn * edge_pair(ei, ej, h)?)
            })
        })
        .collect::<Result<_>>()?;
    Ok(rows.iter().sum())
}

struct Edge {
    a: Point2,
    b: Point2,
    t: Point2,
    n: Point2,
    len: f64,
}

impl Edge {
    fn new(a: Point2, b: Point2) -> Self {
        let len = a.distance(b);
        let t = (b - a) * (1.0 / len);
        Self {
            a,
            b,
            t,
            n: Point2::new(t.y, -t.x),
            len,
        }
    }

    fn at(&self, s: f64) -> Point2 {
        self.a + self.t * s
    }

    fn foot(&self, x: Point2) -> f64 {
        (x - self.a).dot(self.t).clamp(0.0, self.len)
    }
}

fn log_potential(r2: f64, h: f64) -> f64 {
    -(h + (r2 + h * h).sqrt()).ln()
}

/// `∫_{e_i}∫_{e_j} V(|x - y|)`. Well-separated pairs use a fixed 12×12
/// Gauss rule; close pairs nest adaptive rules split at the nearest points.
fn edge_pair(ei: &Edge, ej: &Edge, h: f64) -> Result<f64> {
    let gap = segment_segment_distance(ei.a, ei.b, ej.a, ej.b);
    if gap >= ei.len.max(ej.len) {
        let rule = gauss_legendre(12);
        let inner = |s: f64| {
            let x = ei.at(s);
            integrate_fixed(&|t: f64| [log_potential((ej.at(t) - x).norm_sq(), h)], 0.0, ej.len, rule)
        };
        return Ok(integrate_fixed(&inner, 0.0, ei.len, rule)[0]);
    }
    let inner = |s: f64| -> Result<f64> {
        let x = ei.at(s);
        adaptive_gl_relative(|t| log_potential((ej.at(t) - x).norm_sq(), h), 0.0, ej.len, ej.foot(x), 0.0)
    };
    let split = [ej.a, ej.b]
        .iter()
        .map(|&y| ei.foot(y))
        .min_by(|&s, &u| {
            ej_dist(ej, ei.at(s)).total_cmp(&ej_dist(ej, ei.at(u)))
        })
        .expect("two candidates");
    let err = std::cell::Cell::new(None);
    let f = |s: f64| match inner(s) {
        Ok(v) => [v, v.abs()],
        Err(e) => {
            err.set(Some(e));
            [0.0, 0.0]
        }
    };
    let mass = integrate_fixed(&f, 0.0, ei.len, gauss_legendre(24))[1];
    // the inner values carry relative noise near 1e-13, so ask less of the outer rule
    let tol = (1e-11 * mass).max(f64::MIN_POSITIVE);
    let out = adaptive_gl_split(&|s| [f(s)[0]], 0.0, ei.len, split, tol)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(out[0])
}

fn ej_dist(e: &Edge, x: Point2) -> f64 {
    e.at(e.foot(x)).distance(x)
}

/// Area route: adaptive quadrature of the exact solid angle over the
/// domain. The tolerance is shared out over the triangulation by area;
/// triangles run in parallel and are summed in a fixed order. Far slower
/// than [`self_energy`] at small `h`; kept as its oracle.
pub fn self_energy_area(domain: &PolygonDomain, p: SolidAngleParams, opts: AreaQuadrature) -> Result<f64> {
    let tris = domain.triangulate()?;
    let area = domain.area();
    let f = |x| [solid_angle(domain, x, p).unwrap_or(f64::NAN)];
    let parts: Vec<f64> = tris
        .par_iter()
        .map(|t| {
            let local = AreaQuadrature {
                tol: opts.tol * t.area() / area,
                ..opts
            };
            adaptive_triangles(std::slice::from_ref(t), &f, local).map(|e| e.value[0])
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn boundary_form_matches_area_form() {
        let cases = [
            fixtures::unit_square(),
            fixtures::pentagon(),
            fixtures::l_shape(),
            fixtures::two_discs(1.0, 3.0, 16).unwrap(),
        ];
        for d in &cases {
            for h in [0.2, 1.0, 10.0] {
                let p = SolidAngleParams::new(h).unwrap();
                let b = self_energy(d, p).unwrap();
                let opts = AreaQuadrature {
                    tol: 1e-9 * d.area(),
                    rel_tol: 0.0,
                    max_triangles: 400_000,
                };
                let a = self_energy_area(d, p, opts).unwrap();
                assert!((a - b).abs() < 1e-8 * d.area(), "h = {h}: {b} vs {a}");
            }
        }
    }

    #[test]
    fn small_height_limit() {
        // near an edge 2π - A ≈ 2h/d, so the deficit is about
        // 2h·perimeter·ln(diam/h)
        let d = fixtures::unit_square();
        let h = 1e-4;
        let e = self_energy(&d, SolidAngleParams::new(h).unwrap()).unwrap();
        let est = 2.0 * h * d.perimeter() * (d.diameter() / h).ln();
        let deficit = std::f64::consts::TAU - e;
        assert!((deficit / est - 1.0).abs() < 0.05, "{deficit} vs {est}");
    }

    #[test]
    fn grows_with_the_domain() {
        let p = SolidAngleParams::new(0.5).unwrap();
        let sq = fixtures::unit_square();
        let e1 = self_energy(&sq, p).unwrap();
        let e2 = self_energy(&sq.scale(2.0).unwrap(), p).unwrap();
        assert!(e2 > e1);
        assert!(e1 > 0.0 && e1 < std::f64::consts::TAU);
    }

    #[test]
    fn far_apart_components_add() {
        let p = SolidAngleParams::new(1.0).unwrap();
        let one = self_energy(&fixtures::disc(1.0, 64).unwrap(), p).unwrap();
        let two = self_energy(&fixtures::two_discs(1.0, 100.0, 64).unwrap(), p).unwrap();
        assert!((two / (2.0 * one) - 1.0).abs() < 0.01);
        assert!(two > 2.0 * one);
    }
}
