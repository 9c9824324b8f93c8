use super::{FieldSample, RieszParams, Sym2, Vec2};
use crate::error::{Error, Result};
use crate::geometry::{Point2, PolygonDomain, Triangle};
use crate::quadrature::{adaptive_gl_relative, adaptive_triangles, AreaQuadrature};

/// One edge seen from `x`: `y - x = σ t + d n` with `σ ∈ [s0, s1]`.
#[derive(Clone, Copy)]
struct EdgeView {
    t: Point2,
    n: Point2,
    s0: f64,
    s1: f64,
    d: f64,
}

impl EdgeView {
    fn new(a: Point2, b: Point2, x: Point2) -> Self {
        let len = a.distance(b);
        let t = (b - a) * (1.0 / len);
        let n = Point2::new(t.y, -t.x);
        let w = a - x;
        let s0 = w.dot(t);
        Self {
            t,
            n,
            s0,
            s1: s0 + len,
            d: w.dot(n),
        }
    }
}

fn edge_quad(f: impl Fn(f64) -> f64, s0: f64, s1: f64, sens: f64) -> Result<f64> {
    adaptive_gl_relative(f, s0, s1, 0.0, sens)
}

/// `∫_0^ρ K(r) r dr` for the kernel `K`.
fn radial_antiderivative(p: RieszParams, rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    if p.is_log() {
        0.25 * rho * rho * (1.0 - 2.0 * rho.ln())
    } else {
        rho.powf(p.alpha()) / p.alpha()
    }
}

/// The kernel `K(r)`: `r^{α-2}`, or `-log r` when `α = 2`.
fn kernel(p: RieszParams, r: f64) -> f64 {
    if p.is_log() {
        -r.ln()
    } else {
        r.powf(p.alpha() - 2.0)
    }
}

/// `V(x) = ∫_Ω r^{α-2} dy` (or `-∫_Ω log r dy`).
///
/// Polar coordinates about `x` reduce the area integral to one smooth
/// integral per edge, `∫ G(ρ) dθ` with `G` the radial antiderivative of the
/// kernel, so the singularity at `r = 0` never has to be sampled.
pub fn riesz_potential(domain: &PolygonDomain, x: Point2, p: RieszParams) -> Result<f64> {
    let mut total = 0.0;
    for (a, b) in domain.edges() {
        let e = EdgeView::new(a, b, x);
        if e.d == 0.0 {
            continue;
        }
        let d = e.d;
        let d2 = d * d;
        total += edge_quad(
            |s| {
                let q = s * s + d2;
                radial_antiderivative(p, q.sqrt()) * d / q
            },
            e.s0,
            e.s1,
            0.0,
        )?;
    }
    if !total.is_finite() {
        return Err(Error::InvalidParameter(format!("potential is not finite at ({}, {})", x.x, x.y)));
    }
    Ok(total)
}

/// Area-quadrature route for [`riesz_potential`], independent of the edge
/// fan. Triangles touching `x` are split into pieces with apex `x`, and each
/// piece is integrated in Duffy coordinates `y = x + s·((1-t)(u-x) + t(v-x))`
/// with `s = σ^m`, which turns the `r^{α-2}` singularity into a smooth
/// power of `σ`.
pub fn riesz_potential_quadrature(
    domain: &PolygonDomain,
    x: Point2,
    p: RieszParams,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut plain: Vec<Triangle> = Vec::new();
    let mut apex: Vec<(Point2, Point2)> = Vec::new();
    for t in domain.triangulate()? {
        let [a, b, c] = t.0;
        let sides = [(a, b), (b, c), (c, a)];
        if sides.iter().all(|&(u, v)| (v - u).cross(x - u) >= 0.0) {
            apex.extend(sides.iter().filter(|&&(u, v)| (u - x).cross(v - x) > 0.0));
        } else {
            plain.push(*t);
        }
    }
    let opts = |share: f64| AreaQuadrature {
        tol: tol * share,
        ..Default::default()
    };
    let pieces = (apex.len() + 1) as f64;
    let f = |y: Point2| [kernel(p, y.distance(x))];
    let mut total = adaptive_triangles(&plain, &f, opts(1.0 / pieces))?.value[0];
    let m = if p.alpha() < 2.0 { (2.0 / p.alpha()).ceil() } else { 1.0 };
    let square = [
        Triangle([Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0)]),
        Triangle([Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)]),
    ];
    for (u, v) in apex {
        let (pu, pv) = (u - x, v - x);
        let jac = pu.cross(pv);
        let g = |q: Point2| {
            let (sigma, t) = (q.x, q.y);
            if sigma == 0.0 {
                return [0.0];
            }
            let s = sigma.powf(m);
            let w = pu * (1.0 - t) + pv * t;
            [kernel(p, s * w.norm()) * jac * s * m * sigma.powf(m - 1.0)]
        };
        total += adaptive_triangles(&square, &g, opts(1.0 / pieces))?.value[0];
    }
    Ok(total)
}

fn check_off_boundary(domain: &PolygonDomain, x: Point2, p: RieszParams) -> Result<()> {
    if p.alpha() <= 2.0 && domain.boundary_distance(x) == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "boundary integral is singular at ({}, {}) on the boundary for alpha = {}",
            x.x,
            x.y,
            p.alpha()
        )));
    }
    Ok(())
}

/// `∂V/∂x_j = -∮ K(r) n_j ds`; in line-element form
/// `∂V/∂x₁ = -∮ r^{α-2} dy₂` and `∂V/∂x₂ = ∮ r^{α-2} dy₁`.
pub fn riesz_gradient_contour(domain: &PolygonDomain, x: Point2, p: RieszParams) -> Result<Vec2> {
    check_off_boundary(domain, x, p)?;
    let mut g = Vec2::ORIGIN;
    for (a, b) in domain.edges() {
        let e = EdgeView::new(a, b, x);
        let d2 = e.d * e.d;
        let sens = if p.is_log() { 1.0 } else { 0.0 };
        let k = edge_quad(|s| kernel(p, (s * s + d2).sqrt()), e.s0, e.s1, sens)?;
        g += e.n * (-k);
    }
    Ok(g)
}

/// `∂²V/∂x_i∂x_j = c ∮ n_j (y_i - x_i) r^β ds` with `(c, β) = (α-2, α-4)`,
/// or `(-1, -2)` for the logarithmic kernel.
pub fn riesz_hessian_contour(domain: &PolygonDomain, x: Point2, p: RieszParams) -> Result<Sym2> {
    check_off_boundary(domain, x, p)?;
    let (c, beta) = if p.is_log() {
        (-1.0, -2.0)
    } else {
        (p.alpha() - 2.0, p.alpha() - 4.0)
    };
    let (mut hxx, mut hxy, mut hyx, mut hyy) = (0.0, 0.0, 0.0, 0.0);
    for (a, b) in domain.edges() {
        let e = EdgeView::new(a, b, x);
        let d2 = e.d * e.d;
        // ∫ σ r^β dσ in closed form
        let p1_at = |s: f64| {
            let q = s * s + d2;
            if beta == -2.0 {
                0.5 * q.ln()
            } else {
                q.powf(0.5 * beta + 1.0) / (beta + 2.0)
            }
        };
        let p1 = p1_at(e.s1) - p1_at(e.s0);
        let p0 = edge_quad(|s| (s * s + d2).powf(0.5 * beta), e.s0, e.s1, 0.0)?;
        let ux = e.t.x * p1 + e.d * e.n.x * p0;
        let uy = e.t.y * p1 + e.d * e.n.y * p0;
        hxx += c * e.n.x * ux;
        hyx += c * e.n.x * uy;
        hxy += c * e.n.y * ux;
        hyy += c * e.n.y * uy;
    }
    Ok(Sym2::new(hxx, 0.5 * (hxy + hyx), hyy))
}

pub fn riesz_sample(domain: &PolygonDomain, x: Point2, p: RieszParams) -> Result<FieldSample> {
    Ok(FieldSample {
        x,
        value: riesz_potential(domain, x, p)?,
        gradient: riesz_gradient_contour(domain, x, p)?,
        hessian: riesz_hessian_contour(domain, x, p)?,
    })
}
