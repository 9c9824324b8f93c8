use std::f64::consts::TAU;

use serde::Serialize;

use super::{FieldSample, SolidAngleParams, Sym2, Vec2};
use crate::error::{Error, Result};
use crate::geometry::{exit_distance, Point2, PolygonDomain};
use crate::quadrature::{adaptive_triangles, gauss_legendre, integrate_fixed, AreaQuadrature};

/// Solid angle at apex `(x, h)` of the planar triangle `abc`, signed by the
/// triangle's orientation (positive for counterclockwise).
///
/// Tangent half-angle form: `tan(Ω/2) = [A B C] / (|A||B||C| + (A·B)|C| +
/// (A·C)|B| + (B·C)|A|)` with `A, B, C` the apex-relative vectors.
#[inline]
pub fn triangle_solid_angle(a: Point2, b: Point2, c: Point2, x: Point2, h: f64) -> f64 {
    let (pa, pb, pc) = (a - x, b - x, c - x);
    let h2 = h * h;
    let la = (pa.norm_sq() + h2).sqrt();
    let lb = (pb.norm_sq() + h2).sqrt();
    let lc = (pc.norm_sq() + h2).sqrt();
    // For apex-relative vectors (p, -h) the triple product reduces to
    // -h·cross(b - a, c - a); flipping its sign orients CCW triangles positively.
    let num = h * (b - a).cross(c - a);
    let den = la * lb * lc
        + (pa.dot(pb) + h2) * lc
        + (pa.dot(pc) + h2) * lb
        + (pb.dot(pc) + h2) * la;
    2.0 * num.atan2(den)
}

/// Exact solid angle subtended by the domain at `(x, h)`: a sum of
/// closed-form triangle solid angles over the triangulation.
pub fn solid_angle(domain: &PolygonDomain, x: Point2, p: SolidAngleParams) -> Result<f64> {
    let h = p.h();
    Ok(domain
        .triangulate()?
        .iter()
        .map(|t| {
            let [a, b, c] = t.0;
            triangle_solid_angle(a, b, c, x, h)
        })
        .sum())
}

/// Independent route: adaptive area quadrature of `h/(r²+h²)^{3/2}`.
pub fn solid_angle_quadrature(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let h = p.h();
    let h2 = h * h;
    let kernel = |y: Point2| {
        let s = (y - x).norm_sq() + h2;
        [h / (s * s.sqrt())]
    };
    let est = adaptive_triangles(
        domain.triangulate()?,
        &kernel,
        AreaQuadrature {
            tol,
            ..Default::default()
        },
    )?;
    Ok(est.value[0])
}

/// Default for the derivative quadratures: absolute `1e-11`, or `1e-12`
/// relative where the kernel is large (small `h` near the boundary).
fn derivative_quadrature() -> AreaQuadrature {
    AreaQuadrature {
        rel_tol: 1e-12,
        ..Default::default()
    }
}

/// `∇A = 3h ∫_Ω (y - x) / (r² + h²)^{5/2} dy` by adaptive area quadrature.
pub fn gradient(domain: &PolygonDomain, x: Point2, p: SolidAngleParams) -> Result<Vec2> {
    gradient_with(domain, x, p, derivative_quadrature())
}

pub fn gradient_with(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    opts: AreaQuadrature,
) -> Result<Vec2> {
    let h = p.h();
    let h2 = h * h;
    let kernel = |y: Point2| {
        let d = y - x;
        let s = d.norm_sq() + h2;
        let w = 3.0 * h / (s * s * s.sqrt());
        [w * d.x, w * d.y]
    };
    let est = adaptive_triangles(domain.triangulate()?, &kernel, opts)?;
    Ok(Vec2::new(est.value[0], est.value[1]))
}

/// Second derivatives by adaptive area quadrature of the differentiated
/// kernel, e.g. `∂²A/∂x₁² = 3h ∫ (4(y₁-x₁)² - (y₂-x₂)² - h²)/(r²+h²)^{7/2} dy`.
pub fn hessian(domain: &PolygonDomain, x: Point2, p: SolidAngleParams) -> Result<Sym2> {
    hessian_with(domain, x, p, derivative_quadrature())
}

pub fn hessian_with(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    opts: AreaQuadrature,
) -> Result<Sym2> {
    let h = p.h();
    let h2 = h * h;
    let kernel = |y: Point2| {
        let d = y - x;
        let s = d.norm_sq() + h2;
        let w = 3.0 * h / (s * s * s * s.sqrt());
        [
            w * (4.0 * d.x * d.x - d.y * d.y - h2),
            w * 5.0 * d.x * d.y,
            w * (4.0 * d.y * d.y - d.x * d.x - h2),
        ]
    };
    let est = adaptive_triangles(domain.triangulate()?, &kernel, opts)?;
    Ok(Sym2::new(est.value[0], est.value[1], est.value[2]))
}

/// Per-edge Gauss–Legendre on panels graded toward the point nearest `x`,
/// with node doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourOptions {
    /// Gauss nodes per panel on the first pass.
    pub base_nodes: usize,
    /// Agreement required between successive doublings on an edge, relative
    /// to the integral of `|f|` over it.
    pub tol: f64,
    /// Cap on the total nodes of one edge.
    pub max_nodes: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            base_nodes: 8,
            tol: 1e-12,
            max_nodes: 8192,
        }
    }
}

/// A boundary integral and the largest per-edge node count it needed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourEstimate<T> {
    pub value: T,
    pub max_nodes_per_edge: usize,
}

/// Breakpoints of `[0, len]` at `foot ± width·2^k`.
fn graded_panels(len: f64, foot: f64, width: f64) -> Vec<f64> {
    let foot = foot.clamp(0.0, len);
    let width = width.max(1e-12 * len);
    let mut cuts = vec![0.0, foot, len];
    let mut w = width;
    while w < len {
        cuts.push(foot - w);
        cuts.push(foot + w);
        w *= 2.0;
    }
    cuts.retain(|&c| (0.0..=len).contains(&c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// `∫_a^b f` along a straight edge (arc length), for a kernel concentrated
/// within `width` of the point of the edge nearest `x`.
fn edge_integral(
    a: Point2,
    b: Point2,
    x: Point2,
    width: f64,
    f: impl Fn(Point2) -> f64,
    opts: ContourOptions,
) -> Result<(f64, usize)> {
    let len = a.distance(b);
    let t = (b - a) * (1.0 / len);
    let cuts = graded_panels(len, (x - a).dot(t), width);
    let pass = |n: usize| {
        let rule = gauss_legendre(n);
        let g = |s: f64| {
            let v = f(a + t * s);
            [v, v.abs()]
        };
        cuts.windows(2).fold([0.0, 0.0], |acc, w| {
            let r = integrate_fixed(&g, w[0], w[1], rule);
            [acc[0] + r[0], acc[1] + r[1]]
        })
    };
    let panels = cuts.len() - 1;
    let mut n = opts.base_nodes.max(1);
    let mut prev = pass(n)[0];
    loop {
        let next_n = 2 * n;
        if next_n * panels > opts.max_nodes {
            return Err(Error::BudgetExhausted {
                what: "contour quadrature (nodes per edge)",
                budget: opts.max_nodes,
                error: f64::NAN,
            });
        }
        let [next, mass] = pass(next_n);
        if (next - prev).abs() <= opts.tol * mass {
            return Ok((next, next_n * panels));
        }
        prev = next;
        n = next_n;
    }
}

/// Distance from `x` to the line through `a`, `b`, combined with `h`: the
/// length scale of the contour kernels.
fn kernel_width(a: Point2, b: Point2, x: Point2, h: f64) -> f64 {
    let t = (b - a) * (1.0 / a.distance(b));
    t.cross(x - a).hypot(h)
}

/// `∂A/∂x_j = -h ∮ e_j·n(y) / (r² + h²)^{3/2} ds`.
pub fn gradient_contour(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
) -> Result<ContourEstimate<Vec2>> {
    gradient_contour_with(domain, x, p, ContourOptions::default())
}

pub fn gradient_contour_with(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    opts: ContourOptions,
) -> Result<ContourEstimate<Vec2>> {
    let h = p.h();
    let h2 = h * h;
    let mut g = Vec2::ORIGIN;
    let mut used = 0;
    for (a, b) in domain.edges() {
        let t = (b - a) * (1.0 / a.distance(b));
        let normal = Point2::new(t.y, -t.x);
        let (e, n) = edge_integral(
            a,
            b,
            x,
            kernel_width(a, b, x, h),
            |y| {
                let s = (y - x).norm_sq() + h2;
                1.0 / (s * s.sqrt())
            },
            opts,
        )?;
        used = used.max(n);
        g += normal * (-h * e);
    }
    Ok(ContourEstimate {
        value: g,
        max_nodes_per_edge: used,
    })
}

/// `ΔA(x) = -3h ∮ (y - x)·n(y) / (r² + h²)^{5/2} ds`.
pub fn laplacian_contour(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
) -> Result<ContourEstimate<f64>> {
    laplacian_contour_with(domain, x, p, ContourOptions::default())
}

pub fn laplacian_contour_with(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    opts: ContourOptions,
) -> Result<ContourEstimate<f64>> {
    let h = p.h();
    let h2 = h * h;
    let mut lap = 0.0;
    let mut used = 0;
    for (a, b) in domain.edges() {
        let t = (b - a) * (1.0 / a.distance(b));
        let normal = Point2::new(t.y, -t.x);
        let (e, n) = edge_integral(
            a,
            b,
            x,
            kernel_width(a, b, x, h),
            |y| {
                let d = y - x;
                let s = d.norm_sq() + h2;
                d.dot(normal) / (s * s * s.sqrt())
            },
            opts,
        )?;
        used = used.max(n);
        lap += -3.0 * h * e;
    }
    Ok(ContourEstimate {
        value: lap,
        max_nodes_per_edge: used,
    })
}

/// `A(x) = 2π - h ∫_0^{2π} dθ / √(ρ(x,θ)² + h²)` for a convex domain and
/// interior `x`. The angle range is split at the vertex directions so each
/// piece is smooth; `nodes` Gauss points are shared out by angular width.
pub fn solid_angle_radial(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
    nodes: usize,
) -> Result<f64> {
    if !domain.is_convex() {
        return Err(Error::NotConvex);
    }
    if !domain.contains_strictly(x, 0.0) {
        return Err(Error::NotInterior { x: x.x, y: x.y });
    }
    let h = p.h();
    let h2 = h * h;
    let f = |theta: f64| {
        let rho = exit_distance(domain, x, theta);
        [1.0 / (rho * rho + h2).sqrt()]
    };
    let mut total = 0.0;
    for (a, b) in domain.edges() {
        let (pa, pb) = (a - x, b - x);
        let start = pa.y.atan2(pa.x);
        let width = pa.cross(pb).atan2(pa.dot(pb));
        if width <= 0.0 {
            continue;
        }
        let m = ((nodes as f64 * width / TAU).ceil() as usize).max(4);
        total += integrate_fixed(&f, start, start + width, gauss_legendre(m))[0];
    }
    Ok(TAU - h * total)
}

/// Value from the triangle sum, gradient and Hessian from closed-form
/// antiderivatives of the contour integrands along each straight edge.
pub fn solid_angle_sample(
    domain: &PolygonDomain,
    x: Point2,
    p: SolidAngleParams,
) -> Result<FieldSample> {
    let value = solid_angle(domain, x, p)?;
    let h = p.h();
    let h2 = h * h;
    let mut g = Vec2::ORIGIN;
    let (mut hxx, mut hxy, mut hyx, mut hyy) = (0.0, 0.0, 0.0, 0.0);
    for (a, b) in domain.edges() {
        let len = a.distance(b);
        let t = (b - a) * (1.0 / len);
        let n = Point2::new(t.y, -t.x);
        let w = a - x;
        let s0 = w.dot(t);
        let s1 = s0 + len;
        let d = w.dot(n);
        let dd = d * d + h2;
        // ∫ dσ / (σ² + D²)^{3/2}
        let f0 = |s: f64| s / (dd * (s * s + dd).sqrt());
        // ∫ σ dσ / (σ² + D²)^{5/2}
        let g1 = |s: f64| {
            let q = s * s + dd;
            -1.0 / (3.0 * q * q.sqrt())
        };
        // ∫ dσ / (σ² + D²)^{5/2}
        let g0 = |s: f64| {
            let q = s * s + dd;
            s * (2.0 * s * s + 3.0 * dd) / (3.0 * dd * dd * q * q.sqrt())
        };
        let i0 = f0(s1) - f0(s0);
        let j1 = g1(s1) - g1(s0);
        let j0 = g0(s1) - g0(s0);
        g += n * (-h * i0);
        // ∂_i ∂_j A = -3h Σ n_j (t_i J1 + d n_i J0)
        let k = -3.0 * h;
        let ux = t.x * j1 + d * n.x * j0;
        let uy = t.y * j1 + d * n.y * j0;
        hxx += k * n.x * ux;
        hyx += k * n.x * uy;
        hxy += k * n.y * ux;
        hyy += k * n.y * uy;
    }
    Ok(FieldSample {
        x,
        value,
        gradient: g,
        hessian: Sym2::new(hxx, 0.5 * (hxy + hyx), hyy),
    })
}
