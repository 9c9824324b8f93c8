use serde::Serialize;

use super::{find_centers_with, SolverOptions};
use crate::error::{Error, Result};
use crate::fields::FieldParams;
use crate::geometry::{Point2, PolygonDomain};
use crate::quadrature::adaptive_gl_relative;
use crate::unfolded::UnfoldedRegion;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusRow {
    pub h: f64,
    pub centers: Vec<Point2>,
    pub n_maxima: usize,
    /// Solver failure for this height, reported inline.
    pub error: Option<String>,
}

fn ascending(h_values: &[f64]) -> Result<()> {
    if h_values.is_empty() {
        return Err(Error::InvalidParameter("no heights given".into()));
    }
    if h_values.iter().any(|h| !(*h > 0.0)) || h_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("heights must be positive and strictly ascending".into()));
    }
    Ok(())
}

/// Global maximizers of the solid angle for each height.
pub fn center_locus_sweep(
    domain: &PolygonDomain,
    h_values: &[f64],
    region: Option<&UnfoldedRegion>,
    opts: SolverOptions,
) -> Result<Vec<LocusRow>> {
    ascending(h_values)?;
    Ok(h_values
        .iter()
        .map(|&h| {
            let res = FieldParams::solid_angle(h).and_then(|p| find_centers_with(domain, p, region, opts));
            match res {
                Ok(r) => LocusRow {
                    h,
                    n_maxima: r.n_optima(),
                    centers: r.global,
                    error: None,
                },
                Err(e) => LocusRow {
                    h,
                    centers: Vec::new(),
                    n_maxima: 0,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub center: Point2,
    pub distance: f64,
}

/// Distance from the solid-angle center to the barycenter for each height.
/// The largest height must be at least ten diameters.
pub fn barycenter_convergence(
    domain: &PolygonDomain,
    h_values: &[f64],
    region: Option<&UnfoldedRegion>,
    opts: SolverOptions,
) -> Result<Vec<ConvergenceRow>> {
    ascending(h_values)?;
    let diam = domain.diameter();
    if *h_values.last().unwrap() < 10.0 * diam {
        return Err(Error::InvalidParameter(format!(
            "largest height must be at least 10 diameters ({})",
            10.0 * diam
        )));
    }
    let b = domain.barycenter();
    h_values
        .iter()
        .map(|&h| {
            let r = find_centers_with(domain, FieldParams::solid_angle(h)?, region, opts)?;
            let center = r
                .global
                .iter()
                .copied()
                .min_by(|p, q| p.distance(b).total_cmp(&q.distance(b)))
                .expect("a converged center");
            Ok(ConvergenceRow {
                h,
                center,
                distance: center.distance(b),
            })
        })
        .collect()
}

/// Largest distance from a mirrored vertex `(y₁, -y₂)` to the boundary.
fn axial_defect(domain: &PolygonDomain) -> f64 {
    domain
        .vertices()
        .map(|v| domain.boundary_distance(Point2::new(v.x, -v.y)))
        .fold(0.0, f64::max)
}

/// `Σ_edges ∫ f(y) dy₂` along the boundary.
fn contour_dy2(domain: &PolygonDomain, x: Point2, f: impl Fn(Point2) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for (a, b) in domain.edges() {
        let len = a.distance(b);
        let t = (b - a) * (1.0 / len);
        if t.y == 0.0 {
            continue;
        }
        let foot = (x - a).dot(t);
        total += t.y * adaptive_gl_relative(|s| f(a + t * s), 0.0, len, foot, 0.0)?;
    }
    Ok(total)
}

/// Second derivative along the symmetry axis at `(x₁, 0)`, oriented so that
/// a negative value means the center is non-degenerate along the axis.
///
/// Solid angle: `-3h ∮ (y₁-x₁) / ((y₁-x₁)² + y₂² + h²)^{5/2} dy₂`.
/// Riesz: `-c ∮ (y₁-x₁) r^{α-4} dy₂` with `c = |α-2|`, and `c = 1` for the
/// logarithmic kernel. For `α > 2`, where the center minimizes, this is the
/// negated second derivative.
pub fn axial_second_derivative(domain: &PolygonDomain, x1: f64, mode: FieldParams) -> Result<f64> {
    let defect = axial_defect(domain);
    if defect > 1e-9 * domain.diameter() {
        return Err(Error::NotAxisymmetric { defect });
    }
    let x = Point2::new(x1, 0.0);
    match mode {
        FieldParams::SolidAngle(p) => {
            let h2 = p.h() * p.h();
            let i = contour_dy2(domain, x, |y| {
                let d = y - x;
                let q = d.norm_sq() + h2;
                d.x / (q * q * q.sqrt())
            })?;
            Ok(-3.0 * p.h() * i)
        }
        FieldParams::Riesz(p) => {
            if p.alpha() <= 2.0 && domain.boundary_distance(x) == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "({x1}, 0) lies on the boundary; the contour integral is singular"
                )));
            }
            let (c, beta) = if p.is_log() {
                (1.0, -2.0)
            } else {
                ((p.alpha() - 2.0).abs(), p.alpha() - 4.0)
            };
            let i = contour_dy2(domain, x, |y| {
                let d = y - x;
                d.x * d.norm_sq().powf(0.5 * beta)
            })?;
            Ok(-c * i)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{hessian, riesz_hessian_contour, RieszParams, SolidAngleParams};
    use crate::fixtures::{self, AxisymProfile};

    #[test]
    fn matches_area_hessian() {
        let d = AxisymProfile::standard().domain().unwrap();
        for h in [0.2, 0.5, 5.0] {
            let p = SolidAngleParams::new(h).unwrap();
            for x1 in [0.2, 0.4, 0.65] {
                let a = axial_second_derivative(&d, x1, FieldParams::SolidAngle(p)).unwrap();
                let hq = hessian(&d, Point2::new(x1, 0.0), p).unwrap();
                assert!((a - hq.xx).abs() < 1e-6 * hq.xx.abs().max(1.0), "{h} {x1}: {a} vs {}", hq.xx);
            }
        }
    }

    #[test]
    fn riesz_orientation() {
        let d = AxisymProfile::standard().domain().unwrap();
        for alpha in [1.5, 2.0, 2.5] {
            let p = RieszParams::new(alpha).unwrap();
            let s = FieldParams::Riesz(p).orientation();
            let a = axial_second_derivative(&d, 0.4, FieldParams::Riesz(p)).unwrap();
            let h = riesz_hessian_contour(&d, Point2::new(0.4, 0.0), p).unwrap();
            assert!((a - s * h.xx).abs() < 1e-9 * h.xx.abs().max(1.0));
            assert!(a < 0.0);
        }
    }

    #[test]
    fn rejects_asymmetric_domains() {
        let d = fixtures::pentagon();
        let e = axial_second_derivative(&d, 0.5, FieldParams::solid_angle(1.0).unwrap());
        assert!(matches!(e, Err(Error::NotAxisymmetric { .. })));
    }
}
