//! Solid-angle and Riesz centers: multi-start ascent, clustering, the
//! uniqueness thresholds, and the studies built on them.

mod one_d;
mod studies;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldParams, FieldSample, SolidAngleParams};
use crate::geometry::{ConvexPolygon, Point2, PolygonDomain};
use crate::unfolded::{uf_boundary_distances, unfolded_region_default, UnfoldedRegion};

pub use one_d::{brute_force_1d, center_locus_sweep_1d, centers_1d, critical_height_1d, LocusRow1D};
pub use studies::{axial_second_derivative, barycenter_convergence, center_locus_sweep, ConvergenceRow, LocusRow};

/// Tuning for [`find_centers_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub n_starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Converged when `|∇| ≤ grad_tol · scale`.
    pub grad_tol: f64,
    /// A converged point is accepted as critical when `|∇| ≤ verify_tol · scale`.
    pub verify_tol: f64,
    /// Cluster radius as a fraction of the diameter.
    pub cluster_radius: f64,
    /// Relative value window for the global set and relative depth of a
    /// separating dip.
    pub value_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            n_starts: 64,
            seed: 0,
            max_iter: 10_000,
            grad_tol: 1e-10,
            verify_tol: 1e-8,
            cluster_radius: 1e-6,
            value_tol: 1e-9,
        }
    }
}

/// One located critical point, merged over all starts that reached it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x: Point2,
    pub value: f64,
    /// Definiteness of the Hessian in the optimization sense: negative
    /// definite for a maximized field, positive definite for a minimized one.
    pub hessian_negative_definite: bool,
    pub gradient_norm: f64,
    /// Number of starts that converged here.
    pub hits: usize,
}

/// A start that did not reach a critical point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartFailure {
    pub start: usize,
    pub from: Point2,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterResult {
    /// Ordered by the index of the first start that reached each point.
    pub critical_points: Vec<CriticalPoint>,
    /// The optimal points: local optima within `value_tol` (relative) of the best.
    pub global: Vec<Point2>,
    pub mode: FieldParams,
    pub starts_used: usize,
    pub cluster_radius: f64,
    /// Gradient scale used by the convergence tests: `|H(b)|·diameter` at
    /// the barycenter `b`.
    pub gradient_scale: f64,
    pub failures: Vec<StartFailure>,
    /// Starts came from the convex hull because the region was empty.
    pub hull_fallback: bool,
    pub value_tol: f64,
}

impl CenterResult {
    /// Local optima (maxima, or minima for minimized kernels).
    pub fn optima(&self) -> impl Iterator<Item = &CriticalPoint> + '_ {
        let best = self.best_value();
        let window = self.window();
        self.critical_points
            .iter()
            .filter(move |c| c.hessian_negative_definite || (c.value - best).abs() <= window)
    }

    pub fn n_optima(&self) -> usize {
        self.optima().count()
    }

    fn oriented(&self, v: f64) -> f64 {
        self.mode.orientation() * v
    }

    fn best_value(&self) -> f64 {
        self.critical_points
            .iter()
            .map(|c| c.value)
            .max_by(|a, b| self.oriented(*a).total_cmp(&self.oriented(*b)))
            .unwrap_or(f64::NAN)
    }

    fn window(&self) -> f64 {
        self.value_tol * self.best_value().abs()
    }

    /// The optimal value.
    pub fn best(&self) -> Option<f64> {
        (!self.critical_points.is_empty()).then(|| self.best_value())
    }
}

fn check_params(domain: &PolygonDomain, params: &FieldParams) -> Result<()> {
    if let FieldParams::SolidAngle(p) = params {
        if p.h() < 1e-8 * domain.diameter() {
            return Err(Error::InvalidParameter(format!(
                "height {} is below 1e-8 times the diameter",
                p.h()
            )));
        }
    }
    Ok(())
}

/// Centers with the default options, `n_starts` starts and `seed`, starting
/// from the default unfolded region.
pub fn find_centers(domain: &PolygonDomain, params: FieldParams, n_starts: usize, seed: u64) -> Result<CenterResult> {
    let region = unfolded_region_default(domain)?;
    find_centers_with(
        domain,
        params,
        Some(&region),
        SolverOptions {
            n_starts,
            seed,
            ..Default::default()
        },
    )
}

pub fn find_centers_with(
    domain: &PolygonDomain,
    params: FieldParams,
    region: Option<&UnfoldedRegion>,
    opts: SolverOptions,
) -> Result<CenterResult> {
    if opts.n_starts < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 starts, got {}",
            opts.n_starts
        )));
    }
    check_params(domain, &params)?;
    let diam = domain.diameter();
    let hull = domain.hull();
    let (starts, hull_fallback) = match region {
        Some(r) if !r.polygon.is_empty() => (start_points(domain, &r.polygon, opts), false),
        _ => (start_points(domain, hull, opts), true),
    };
    let s = params.orientation();
    let b = domain.barycenter();
    let hb = params.sample(domain, hull.project(b))?.hessian;
    let scale = (hb.xx.abs() + hb.yy.abs() + 2.0 * hb.xy.abs()) * diam;
    let scale = if scale > 0.0 { scale } else { f64::MIN_POSITIVE };

    let runs: Vec<Result<Ascent>> = starts
        .par_iter()
        .map(|&x0| ascend(domain, &params, hull, x0, scale, opts))
        .collect();

    let radius = opts.cluster_radius * diam;
    let mut clusters: Vec<CriticalPoint> = Vec::new();
    let mut failures = Vec::new();
    for (i, (run, &x0)) in runs.into_iter().zip(&starts).enumerate() {
        let a = match run {
            Ok(a) => a,
            Err(e) if e.is_numerical() => {
                failures.push(StartFailure {
                    start: i,
                    from: x0,
                    reason: e.to_string(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        if a.sample.gradient.norm() > opts.verify_tol * scale {
            failures.push(StartFailure {
                start: i,
                from: x0,
                reason: format!(
                    "stopped at ({}, {}) with |grad| = {:.3e} after {} iterations",
                    a.sample.x.x,
                    a.sample.x.y,
                    a.sample.gradient.norm(),
                    a.iterations
                ),
            });
            continue;
        }
        let p = a.sample.x;
        let value = a.sample.value;
        let mut merged = false;
        for c in clusters.iter_mut() {
            if same_critical_point(domain, &params, c, p, value, radius, opts.value_tol)? {
                c.hits += 1;
                if s * value > s * c.value {
                    c.x = p;
                    c.value = value;
                    c.gradient_norm = a.sample.gradient.norm();
                    c.hessian_negative_definite = a.sample.hessian.scaled(s).is_negative_definite();
                }
                merged = true;
                break;
            }
        }
        if !merged {
            clusters.push(CriticalPoint {
                x: p,
                value,
                hessian_negative_definite: a.sample.hessian.scaled(s).is_negative_definite(),
                gradient_norm: a.sample.gradient.norm(),
                hits: 1,
            });
        }
    }
    let mut result = CenterResult {
        critical_points: clusters,
        global: Vec::new(),
        mode: params,
        starts_used: starts.len(),
        cluster_radius: radius,
        gradient_scale: scale,
        failures,
        hull_fallback,
        value_tol: opts.value_tol,
    };
    if result.critical_points.is_empty() {
        return Err(Error::BudgetExhausted {
            what: "center search (no start converged)",
            budget: opts.max_iter,
            error: f64::NAN,
        });
    }
    let best = result.best_value();
    let window = result.window();
    result.global = result
        .optima()
        .filter(|c| (c.value - best).abs() <= window)
        .map(|c| c.x)
        .collect();
    Ok(result)
}

/// Two converged points are the same unless they are more than ten cluster
/// radii apart and the field dips between them.
fn same_critical_point(
    domain: &PolygonDomain,
    params: &FieldParams,
    c: &CriticalPoint,
    p: Point2,
    value: f64,
    radius: f64,
    value_tol: f64,
) -> Result<bool> {
    let d = c.x.distance(p);
    if d <= 10.0 * radius {
        return Ok(true);
    }
    let s = params.orientation();
    let low = (s * c.value).min(s * value);
    let depth = value_tol * c.value.abs().max(value.abs());
    for k in 1..32 {
        let q = c.x.lerp(p, k as f64 / 32.0);
        if s * params.value(domain, q)? < low - depth {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Ascent {
    sample: FieldSample,
    iterations: usize,
}

/// Newton steps where the oriented Hessian is negative definite, otherwise
/// gradient steps, both with Armijo backtracking and projection onto the
/// hull.
fn ascend(
    domain: &PolygonDomain,
    params: &FieldParams,
    hull: &ConvexPolygon,
    x0: Point2,
    scale: f64,
    opts: SolverOptions,
) -> Result<Ascent> {
    let s = params.orientation();
    let diam = domain.diameter();
    let f = |x: Point2| params.value(domain, x).map(|v| s * v);
    let mut x = hull.project(x0);
    let mut sample = params.sample(domain, x)?;
    let mut step_len = 0.05 * diam;
    for it in 0..opts.max_iter {
        let g = sample.gradient * s;
        let gn = g.norm();
        if gn <= opts.grad_tol * scale {
            return Ok(Ascent {
                sample,
                iterations: it,
            });
        }
        let h = sample.hessian.scaled(s);
        let fx = s * sample.value;
        let mut next = None;
        if h.is_negative_definite() {
            if let Some(z) = h.solve(g) {
                let step = -z;
                let y = hull.project(x + step);
                // Near the optimum the value change is below rounding; trust
                // the quadratic model there.
                if step.norm() < 1e-6 * diam || f(y)? >= fx + 1e-4 * g.dot(y - x) {
                    next = Some(y);
                }
            }
        }
        if next.is_none() {
            let dir = g * (1.0 / gn);
            let mut t = step_len;
            for _ in 0..80 {
                let y = hull.project(x + dir * t);
                let moved = y - x;
                if moved.norm() == 0.0 {
                    t *= 0.5;
                    continue;
                }
                if f(y)? >= fx + 1e-4 * g.dot(moved) && f(y)? > fx {
                    next = Some(y);
                    step_len = (2.0 * t).min(0.25 * diam);
                    break;
                }
                t *= 0.5;
            }
        }
        match next {
            Some(y) => {
                if y == x {
                    return Ok(Ascent {
                        sample,
                        iterations: it,
                    });
                }
                x = y;
                sample = params.sample(domain, x)?;
            }
            // No ascent is measurable: stop and let the caller judge |∇|.
            None => {
                return Ok(Ascent {
                    sample,
                    iterations: it,
                })
            }
        }
    }
    Ok(Ascent {
        sample,
        iterations: opts.max_iter,
    })
}

/// The barycenter (when in `poly`'s hull neighbourhood), the polygon
/// vertices, then seeded uniform samples of `poly`, `n_starts` in total.
fn start_points(domain: &PolygonDomain, poly: &ConvexPolygon, opts: SolverOptions) -> Vec<Point2> {
    let n = opts.n_starts;
    let mut out = Vec::with_capacity(n);
    out.push(poly.project(domain.barycenter()));
    for &v in poly.vertices().iter().take(n / 2) {
        if out.len() < n && !out.contains(&v) {
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let verts = poly.vertices();
    let area = poly.area();
    while out.len() < n {
        let p = match verts.len() {
            1 => verts[0],
            2 => verts[0].lerp(verts[1], rng.gen::<f64>()),
            _ if area <= 0.0 => {
                let i = rng.gen_range(0..verts.len());
                verts[i].lerp(verts[(i + 1) % verts.len()], rng.gen::<f64>())
            }
            _ => {
                // fan triangle by area, then uniform barycentric
                let o = verts[0];
                let target = rng.gen::<f64>() * area;
                let mut acc = 0.0;
                let mut tri = (verts[1], verts[2]);
                for i in 1..verts.len() - 1 {
                    acc += 0.5 * (verts[i] - o).cross(verts[i + 1] - o);
                    tri = (verts[i], verts[i + 1]);
                    if acc >= target {
                        break;
                    }
                }
                let (mut a, mut b) = (rng.gen::<f64>(), rng.gen::<f64>());
                if a + b > 1.0 {
                    a = 1.0 - a;
                    b = 1.0 - b;
                }
                o + (tri.0 - o) * a + (tri.1 - o) * b
            }
        };
        out.push(p);
    }
    out
}

/// The three height thresholds and the empirical verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub h: f64,
    /// `2·diameter`.
    pub h_diam: f64,
    /// `2·max |z - w|` over the region and the boundary.
    pub h_uf_upper: f64,
    /// `√2·min |z - w|` for a convex domain whose region stays off the
    /// boundary, else 0 (the small-height criterion does not apply).
    pub h_uf_lower: f64,
    pub min_dist: f64,
    pub max_dist: f64,
    pub convex: bool,
    pub empirical_unique: bool,
    pub n_maxima_found: usize,
    /// Some threshold guarantees a unique center at this height.
    pub theory_unique: bool,
    pub centers: Vec<Point2>,
}

pub fn uniqueness_report(domain: &PolygonDomain, p: SolidAngleParams, n_starts: usize, seed: u64) -> Result<UniquenessReport> {
    let region = unfolded_region_default(domain)?;
    uniqueness_report_with(
        domain,
        p,
        &region,
        SolverOptions {
            n_starts,
            seed,
            ..Default::default()
        },
    )
}

/// Fails with [`Error::TheoryViolation`] when a threshold is met but more
/// than one maximum is found.
pub fn uniqueness_report_with(
    domain: &PolygonDomain,
    p: SolidAngleParams,
    region: &UnfoldedRegion,
    opts: SolverOptions,
) -> Result<UniquenessReport> {
    let (min_dist, max_dist) = uf_boundary_distances(domain, region);
    let convex = domain.is_convex();
    let h = p.h();
    let h_diam = 2.0 * domain.diameter();
    let h_uf_upper = 2.0 * max_dist;
    let h_uf_lower = if convex && min_dist > 0.0 {
        2f64.sqrt() * min_dist
    } else {
        0.0
    };
    let result = find_centers_with(domain, FieldParams::SolidAngle(p), Some(region), opts)?;
    let n_maxima_found = result.n_optima();
    let empirical_unique = n_maxima_found == 1;
    let theory_unique = h >= h_diam || h >= h_uf_upper || (convex && h <= h_uf_lower);
    if theory_unique && !empirical_unique {
        return Err(Error::TheoryViolation(format!(
            "h = {h} meets a uniqueness threshold (2 diam = {h_diam}, 2 max = {h_uf_upper}, \
             sqrt2 min = {h_uf_lower}) but {n_maxima_found} maxima were found"
        )));
    }
    Ok(UniquenessReport {
        h,
        h_diam,
        h_uf_upper,
        h_uf_lower,
        min_dist,
        max_dist,
        convex,
        empirical_unique,
        n_maxima_found,
        theory_unique,
        centers: result.global,
    })
}

/// Oriented gradient check helper for tests and the verification suite.
pub fn gradient_norm(domain: &PolygonDomain, params: FieldParams, x: Point2) -> Result<f64> {
    Ok(params.sample(domain, x)?.gradient.norm())
}
