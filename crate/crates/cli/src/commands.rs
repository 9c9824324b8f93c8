use rayon::prelude::*;
use serde::Serialize;

use sacenter_core::centers::{
    barycenter_convergence, center_locus_sweep, center_locus_sweep_1d, find_centers_with,
    uniqueness_report_with, SolverOptions,
};
use sacenter_core::fields::self_energy;
use sacenter_core::unfolded::{default_c_step, uf_boundary_distances, unfolded_region, UnfoldedRegion};
use sacenter_core::verify::{self, Outcome};
use sacenter_core::{Error, FieldParams, Point2, PolygonDomain, SolidAngleParams};

use crate::output::{csv_bytes, emit, json_bytes, sig12};
use crate::{CenterArgs, CheckArgs, CliError, DomainArgs, EnergyArgs, FieldArgs, SolverArgs, SweepArgs, UfrArgs};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Value,
    Gradient,
    Hessian,
}

fn numbers(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("{what}: bad number `{}`", t.trim())))
        })
        .collect()
}

fn point(s: &str) -> Result<Point2, CliError> {
    match numbers(s, "--at")?[..] {
        [x, y] => Ok(Point2::new(x, y)),
        _ => Err(CliError::Input(format!("--at takes `x1,x2`, got `{s}`"))),
    }
}

fn resolution(s: &str) -> Result<(usize, usize), CliError> {
    let parse = |t: &str| -> Result<usize, CliError> {
        t.trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 2)
            .ok_or_else(|| CliError::Input(format!("--grid: resolution must be an integer >= 2, got `{}`", t.trim())))
    };
    let parts: Vec<&str> = s.split(',').collect();
    match parts[..] {
        [n] => Ok((parse(n)?, parse(n)?)),
        [nx, ny] => Ok((parse(nx)?, parse(ny)?)),
        _ => Err(CliError::Input(format!("--grid takes `n` or `nx,ny`, got `{s}`"))),
    }
}

/// The hull's bounding box grown by 20% of its extent on every side.
fn grid_box(domain: &PolygonDomain) -> (Point2, Point2) {
    let (lo, hi) = domain.bbox();
    let pad = (hi - lo) * 0.2;
    (lo - pad, hi + pad)
}

fn bounds(domain: &PolygonDomain, s: Option<&str>) -> Result<(Point2, Point2), CliError> {
    let outer = grid_box(domain);
    let Some(s) = s else { return Ok(outer) };
    let (lo, hi) = match numbers(s, "--bounds")?[..] {
        [x0, y0, x1, y1] => (Point2::new(x0, y0), Point2::new(x1, y1)),
        _ => return Err(CliError::Input(format!("--bounds takes `x0,y0,x1,y1`, got `{s}`"))),
    };
    if !(lo.x < hi.x && lo.y < hi.y) {
        return Err(CliError::Input("--bounds: need x0 < x1 and y0 < y1".into()));
    }
    let slack = 1e-12 * domain.diameter();
    let (olo, ohi) = outer;
    if lo.x < olo.x - slack || lo.y < olo.y - slack || hi.x > ohi.x + slack || hi.y > ohi.y + slack {
        return Err(CliError::Input(format!(
            "--bounds must lie within [{}, {}] x [{}, {}], the hull box grown by 20%",
            sig12(olo.x),
            sig12(ohi.x),
            sig12(olo.y),
            sig12(ohi.y)
        )));
    }
    Ok((lo, hi))
}

fn node_error(e: Error, x: Point2) -> CliError {
    let at = format!("at node ({}, {}): {e}", sig12(x.x), sig12(x.y));
    match CliError::from(e) {
        CliError::Input(_) => CliError::Input(at),
        CliError::Numerical(_) => CliError::Numerical(at),
        CliError::Theorem(_) => CliError::Theorem(at),
    }
}

fn row(params: &FieldParams, domain: &PolygonDomain, x: Point2, order: Order, full_hessian: bool) -> Result<Vec<String>, Error> {
    let mut r = vec![sig12(x.x), sig12(x.y)];
    if order == Order::Value {
        r.push(sig12(params.value(domain, x)?));
        return Ok(r);
    }
    let s = params.sample(domain, x)?;
    r.extend([s.value, s.gradient.x, s.gradient.y].map(sig12));
    if order == Order::Hessian {
        if full_hessian {
            r.extend([s.hessian.xx, s.hessian.xy, s.hessian.yy].map(sig12));
        }
        r.push(sig12(s.hessian.trace()));
    }
    Ok(r)
}

pub fn field(a: FieldArgs, order: Order) -> Result<(), CliError> {
    let domain = a.domain.load()?;
    let params = a.kernel.params()?;
    if let Some(at) = &a.at {
        let x = point(at)?;
        if order == Order::Value {
            let v = params.value(&domain, x)?;
            return emit(a.out.as_deref(), format!("{}\n", sig12(v)).as_bytes());
        }
        let header: &[&str] = match order {
            Order::Gradient => &["x1", "x2", "value", "g1", "g2"],
            _ => &["x1", "x2", "value", "g1", "g2", "h11", "h12", "h22", "lap"],
        };
        let r = row(&params, &domain, x, order, true)?;
        return emit(a.out.as_deref(), &csv_bytes(header, &[r])?);
    }
    let grid = a.grid.as_deref().expect("clap requires --at or --grid");
    let (nx, ny) = resolution(grid)?;
    let (lo, hi) = bounds(&domain, a.bounds.as_deref())?;
    let nodes: Vec<Point2> = (0..ny)
        .flat_map(|j| {
            (0..nx).map(move |i| {
                let t = i as f64 / (nx - 1) as f64;
                let u = j as f64 / (ny - 1) as f64;
                Point2::new(lo.x + t * (hi.x - lo.x), lo.y + u * (hi.y - lo.y))
            })
        })
        .collect();
    let rows: Vec<Result<Vec<String>, (Error, Point2)>> = nodes
        .par_iter()
        .map(|&x| row(&params, &domain, x, order, false).map_err(|e| (e, x)))
        .collect();
    let rows = rows
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|(e, x)| node_error(e, x))?;
    let header: &[&str] = match order {
        Order::Value => &["x1", "x2", "value"],
        Order::Gradient => &["x1", "x2", "value", "g1", "g2"],
        Order::Hessian => &["x1", "x2", "value", "g1", "g2", "lap"],
    };
    emit(a.out.as_deref(), &csv_bytes(header, &rows)?)
}

fn region(domain: &PolygonDomain, directions: usize, c_step: Option<f64>) -> Result<UnfoldedRegion, CliError> {
    let step = c_step.unwrap_or_else(|| default_c_step(domain));
    Ok(unfolded_region(domain, directions, step, domain.default_tol())?)
}

fn solver_options(s: &SolverArgs) -> Result<SolverOptions, CliError> {
    let mut o = SolverOptions {
        n_starts: s.starts,
        seed: s.seed,
        ..Default::default()
    };
    for (v, slot, name) in [(s.grad_tol, &mut o.grad_tol, "--grad-tol"), (s.value_tol, &mut o.value_tol, "--value-tol")] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("{name} must be positive")));
            }
            *slot = v;
        }
    }
    if o.verify_tol < o.grad_tol {
        o.verify_tol = o.grad_tol;
    }
    Ok(o)
}

pub fn center(a: CenterArgs) -> Result<(), CliError> {
    let domain = a.domain.load()?;
    let params = a.kernel.params()?;
    let opts = solver_options(&a.solver)?;
    let region = region(&domain, a.solver.directions, a.solver.c_step)?;
    if a.report {
        let FieldParams::SolidAngle(p) = params else {
            return Err(CliError::Input("--report needs the solid-angle kernel (--h)".into()));
        };
        let rep = uniqueness_report_with(&domain, p, &region, opts)?;
        return emit(a.out.as_deref(), &json_bytes(&rep)?);
    }
    let res = find_centers_with(&domain, params, Some(&region), opts)?;
    if a.json {
        return emit(a.out.as_deref(), &json_bytes(&res)?);
    }
    let rows: Vec<Vec<String>> = res
        .global
        .iter()
        .map(|g| {
            let value = res
                .critical_points
                .iter()
                .find(|c| c.x == *g)
                .map_or(f64::NAN, |c| c.value);
            vec![sig12(g.x), sig12(g.y), sig12(value)]
        })
        .collect();
    emit(a.out.as_deref(), &csv_bytes(&["x1", "x2", "value"], &rows)?)
}

#[derive(Serialize)]
struct RegionOut<'a> {
    polygon: &'a [Point2],
    min_dist: f64,
    max_dist: f64,
    n_directions: usize,
    c_step: f64,
    tol: f64,
    degenerate: bool,
    widened_by: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    slabs: Option<&'a [sacenter_core::unfolded::DirectionSlab]>,
}

pub fn ufr(a: UfrArgs) -> Result<(), CliError> {
    let domain = a.domain.load()?;
    let r = region(&domain, a.directions, a.c_step)?;
    let (min_dist, max_dist) = uf_boundary_distances(&domain, &r);
    if a.csv {
        let rows: Vec<Vec<String>> = r
            .polygon
            .vertices()
            .iter()
            .map(|p| vec![sig12(p.x), sig12(p.y)])
            .collect();
        eprintln!("min_dist = {}, max_dist = {}", sig12(min_dist), sig12(max_dist));
        return emit(a.out.as_deref(), &csv_bytes(&["x1", "x2"], &rows)?);
    }
    let out = RegionOut {
        polygon: r.polygon.vertices(),
        min_dist,
        max_dist,
        n_directions: r.n_directions,
        c_step: r.c_step,
        tol: r.tol,
        degenerate: r.degenerate,
        widened_by: r.widened_by,
        slabs: a.slabs.then_some(&r.slabs[..]),
    };
    emit(a.out.as_deref(), &json_bytes(&out)?)
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    if let Some(r) = a.interval {
        let rows = center_locus_sweep_1d(r, &a.hs, a.step)?;
        let mut out = Vec::new();
        for row in &rows {
            for (source, xs) in [("brute_force", &row.centers), ("closed_form", &row.closed_form)] {
                for x in xs.iter() {
                    out.push(vec![sig12(row.h), source.to_string(), sig12(*x)]);
                }
            }
        }
        return emit(a.out.as_deref(), &csv_bytes(&["h", "source", "x"], &out)?);
    }
    let domain = DomainArgs {
        fixture: a.fixture.clone(),
        domain: a.domain.clone(),
    }
    .load()?;
    let opts = solver_options(&a.solver)?;
    let region = region(&domain, a.solver.directions, a.solver.c_step)?;
    if a.barycenter {
        let rows = barycenter_convergence(&domain, &a.hs, Some(&region), opts)?;
        let out: Vec<Vec<String>> = rows
            .iter()
            .map(|r| vec![sig12(r.h), sig12(r.center.x), sig12(r.center.y), sig12(r.distance)])
            .collect();
        return emit(a.out.as_deref(), &csv_bytes(&["h", "x1", "x2", "distance"], &out)?);
    }
    let rows = center_locus_sweep(&domain, &a.hs, Some(&region), opts)?;
    let mut out = Vec::new();
    for r in &rows {
        let err = r.error.clone().unwrap_or_default();
        if r.centers.is_empty() {
            out.push(vec![sig12(r.h), r.n_maxima.to_string(), String::new(), String::new(), err.clone()]);
        }
        for c in &r.centers {
            out.push(vec![sig12(r.h), r.n_maxima.to_string(), sig12(c.x), sig12(c.y), err.clone()]);
        }
    }
    emit(a.out.as_deref(), &csv_bytes(&["h", "n_maxima", "x1", "x2", "error"], &out)?)
}

pub fn energy(a: EnergyArgs) -> Result<(), CliError> {
    let domain = a.domain.load()?;
    let e = self_energy(&domain, SolidAngleParams::new(a.h)?)?;
    emit(a.out.as_deref(), format!("{}\n", sig12(e)).as_bytes())
}

fn suite(s: &str) -> Result<Vec<u8>, CliError> {
    if s.trim() == "all" {
        return Ok(verify::CRITERIA.iter().map(|(id, _)| *id).collect());
    }
    let mut ids = Vec::new();
    for t in s.split(',') {
        let id = t
            .trim()
            .parse::<u8>()
            .ok()
            .filter(|id| verify::CRITERIA.iter().any(|(i, _)| i == id))
            .ok_or_else(|| CliError::Input(format!("--suite: no criterion `{}`; expected 1..=9 or all", t.trim())))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

pub fn check(a: CheckArgs) -> Result<(), CliError> {
    let ids = suite(&a.suite)?;
    let mut reports = Vec::new();
    for id in ids {
        let r = verify::run(id, a.seed)?;
        println!("{}", r.line());
        reports.push(r);
    }
    if let Some(path) = a.out.as_deref() {
        emit(Some(path), &json_bytes(&reports)?)?;
    }
    let named = |o: Outcome| -> Vec<String> {
        reports
            .iter()
            .filter(|r| r.outcome == o)
            .map(|r| format!("{} ({})", r.id, r.name))
            .collect()
    };
    let failed = named(Outcome::Fail);
    if !failed.is_empty() {
        return Err(CliError::Theorem(format!("failing criteria: {}", failed.join(", "))));
    }
    let errored = named(Outcome::Error);
    if !errored.is_empty() {
        return Err(CliError::Numerical(format!("criteria without a verdict: {}", errored.join(", "))));
    }
    println!("all {} criteria passed", reports.len());
    Ok(())
}
