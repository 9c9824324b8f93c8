//! The solid-angle field `A(x) = ∫_Ω h / (r² + h²)^{3/2} dy` and the Riesz /
//! logarithmic potentials `V(x) = ∫_Ω r^{α-2} dy`, `-∫_Ω log r dy`, with
//! their derivatives.

mod energy;
mod one_d;
mod riesz;
mod solid_angle;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point2, PolygonDomain};

pub use energy::{self_energy, self_energy_area};
pub use one_d::angle_1d;
pub use riesz::{
    riesz_gradient_contour, riesz_hessian_contour, riesz_potential, riesz_potential_quadrature,
    riesz_sample,
};
pub use solid_angle::{
    gradient, gradient_contour, gradient_contour_with, gradient_with, hessian, hessian_with,
    laplacian_contour, laplacian_contour_with, solid_angle, solid_angle_quadrature,
    solid_angle_radial, solid_angle_sample, triangle_solid_angle, ContourEstimate, ContourOptions,
};

/// Gradient vectors share the point type.
pub type Vec2 = Point2;

/// Height of the light source above the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolidAngleParams {
    h: f64,
}

impl SolidAngleParams {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("height must be positive and finite, got {h}")));
        }
        Ok(Self { h })
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Exponent of the `r^{α-2}` kernel; `α = 2` selects `-log r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RieszParams {
    alpha: f64,
}

impl RieszParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn is_log(&self) -> bool {
        self.alpha == 2.0
    }

    /// Centers maximize `V` for `α ≤ 2` and minimize it for `α > 2`.
    pub fn maximizes(&self) -> bool {
        self.alpha <= 2.0
    }
}

/// Either kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldParams {
    SolidAngle(SolidAngleParams),
    Riesz(RieszParams),
}

impl FieldParams {
    pub fn solid_angle(h: f64) -> Result<Self> {
        Ok(FieldParams::SolidAngle(SolidAngleParams::new(h)?))
    }

    pub fn riesz(alpha: f64) -> Result<Self> {
        Ok(FieldParams::Riesz(RieszParams::new(alpha)?))
    }

    /// `+1` when centers are maxima, `-1` when they are minima.
    pub fn orientation(&self) -> f64 {
        match self {
            FieldParams::SolidAngle(_) => 1.0,
            FieldParams::Riesz(p) if p.maximizes() => 1.0,
            FieldParams::Riesz(_) => -1.0,
        }
    }

    pub fn value(&self, domain: &PolygonDomain, x: Point2) -> Result<f64> {
        match self {
            FieldParams::SolidAngle(p) => solid_angle(domain, x, *p),
            FieldParams::Riesz(p) => riesz_potential(domain, x, *p),
        }
    }

    /// Value, gradient and Hessian from the closed-form / contour routes.
    pub fn sample(&self, domain: &PolygonDomain, x: Point2) -> Result<FieldSample> {
        match self {
            FieldParams::SolidAngle(p) => solid_angle_sample(domain, x, *p),
            FieldParams::Riesz(p) => riesz_sample(domain, x, *p),
        }
    }
}

/// Symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn scaled(&self, s: f64) -> Sym2 {
        Sym2::new(self.xx * s, self.xy * s, self.yy * s)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * self.trace();
        let r = (0.5 * (self.xx - self.yy)).hypot(self.xy);
        (m - r, m + r)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.eigenvalues().1 < 0.0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues().0 > 0.0
    }

    /// Solves `H z = b`; `None` when singular.
    pub fn solve(&self, b: Vec2) -> Option<Vec2> {
        let det = self.det();
        let scale = self.xx.abs().max(self.yy.abs()).max(self.xy.abs());
        if det == 0.0 || det.abs() <= 1e-300 || det.abs() < 1e-15 * scale * scale {
            return None;
        }
        Some(Vec2::new(
            (self.yy * b.x - self.xy * b.y) / det,
            (self.xx * b.y - self.xy * b.x) / det,
        ))
    }

    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        (self.xx - other.xx)
            .abs()
            .max((self.xy - other.xy).abs())
            .max((self.yy - other.yy).abs())
    }
}

/// Value and first two derivatives of a field at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub x: Point2,
    pub value: f64,
    pub gradient: Vec2,
    pub hessian: Sym2,
}
