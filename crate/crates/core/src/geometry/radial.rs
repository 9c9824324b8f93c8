use super::domain::PolygonDomain;
use super::point::Point2;
use crate::error::{Error, Result};

/// Distance from interior point `x` to the boundary of a convex domain
/// along direction `(cos θ, sin θ)`.
pub fn radial_function(domain: &PolygonDomain, x: Point2, theta: f64) -> Result<f64> {
    if !domain.is_convex() {
        return Err(Error::NotConvex);
    }
    if !domain.contains_strictly(x, 0.0) {
        return Err(Error::NotInterior { x: x.x, y: x.y });
    }
    Ok(exit_distance(domain, x, theta))
}

/// Exit distance of the ray from `x`; assumes a convex domain containing `x`.
pub(crate) fn exit_distance(domain: &PolygonDomain, x: Point2, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let dir = Point2::new(c, s);
    let mut best = f64::INFINITY;
    for (a, b) in domain.edges() {
        let t = b - a;
        let normal = Point2::new(t.y, -t.x);
        let along = dir.dot(normal);
        if along > 0.0 {
            best = best.min((a - x).dot(normal) / along);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn square_examples() {
        let sq = fixtures::unit_square();
        let c = Point2::new(0.5, 0.5);
        assert!((radial_function(&sq, c, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let diag = radial_function(&sq, c, FRAC_PI_4).unwrap();
        assert!((diag - 0.5 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn disc_is_nearly_constant() {
        let disc = fixtures::disc(1.0, 256).unwrap();
        for k in 0..64 {
            let r = radial_function(&disc, Point2::ORIGIN, 2.0 * PI * k as f64 / 64.0 + 0.01).unwrap();
            assert!((r - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_exterior_and_nonconvex() {
        let sq = fixtures::unit_square();
        assert!(matches!(
            radial_function(&sq, Point2::new(2.0, 0.5), 0.0),
            Err(Error::NotInterior { .. })
        ));
        assert!(matches!(
            radial_function(&sq, Point2::new(1.0, 0.5), 0.0),
            Err(Error::NotInterior { .. })
        ));
        assert_eq!(
            radial_function(&fixtures::l_shape(), Point2::new(0.5, 0.5), 0.0),
            Err(Error::NotConvex)
        );
    }
}
