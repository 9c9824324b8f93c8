//! Gauss–Legendre rules, adaptive 1D integration and adaptive triangle
//! subdivision over a triangulated region.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Triangle};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// The `n`-point Gauss–Legendre rule. Rules are computed once and shared.
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    static RULES: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
    let mut map = RULES.get_or_init(Default::default).lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(compute_rule(n))))
}

fn compute_rule(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-rule integral of `f` over `[a, b]`.
pub fn integrate_fixed<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    rule: &GaussRule,
) -> [f64; N] {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; N];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(mid + half * t);
        for k in 0..N {
            acc[k] += w * v[k];
        }
    }
    acc.map(|s| s * half)
}

const PANEL_NODES: usize = 12;
const MAX_DEPTH: u32 = 48;

/// Adaptive bisection with a 12-point Gauss panel compared against its two
/// halves. `tol` is an absolute bound on the whole interval.
pub fn adaptive_gl<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    tol: f64,
) -> Result<[f64; N]> {
    let rule = gauss_legendre(PANEL_NODES);
    let whole = integrate_fixed(f, a, b, rule);
    let mut worst = 0.0;
    let out = bisect(f, a, b, whole, tol, rule, 0, &mut worst);
    if worst > 0.0 {
        return Err(Error::BudgetExhausted {
            what: "adaptive Gauss-Legendre",
            budget: MAX_DEPTH as usize,
            error: worst,
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn bisect<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    whole: [f64; N],
    tol: f64,
    rule: &GaussRule,
    depth: u32,
    worst: &mut f64,
) -> [f64; N] {
    let m = 0.5 * (a + b);
    let left = integrate_fixed(f, a, m, rule);
    let right = integrate_fixed(f, m, b, rule);
    let mut err: f64 = 0.0;
    let mut sum = [0.0; N];
    for k in 0..N {
        sum[k] = left[k] + right[k];
        err = err.max((sum[k] - whole[k]).abs());
    }
    if err <= tol || m <= a || m >= b {
        return sum;
    }
    if depth >= MAX_DEPTH {
        *worst = worst.max(err);
        return sum;
    }
    let l = bisect(f, a, m, left, 0.5 * tol, rule, depth + 1, worst);
    let r = bisect(f, m, b, right, 0.5 * tol, rule, depth + 1, worst);
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = l[k] + r[k];
    }
    out
}

/// Adaptive integral over `[a, b]` with an extra breakpoint at `split`
/// when it falls inside (where the integrand peaks).
pub fn adaptive_gl_split<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    split: f64,
    tol: f64,
) -> Result<[f64; N]> {
    if split > a && split < b {
        let l = adaptive_gl(f, a, split, 0.5 * tol)?;
        let r = adaptive_gl(f, split, b, 0.5 * tol)?;
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = l[k] + r[k];
        }
        Ok(out)
    } else {
        adaptive_gl(f, a, b, tol)
    }
}

/// Adaptive integral of a scalar function over `[s0, s1]` with a breakpoint
/// at `split`. The tolerance is `1e-13` relative to the integral of `|f|`,
/// floored at the rounding level set by the largest sampled `|f|` plus
/// `sens`, the absolute rounding error of one evaluation.
pub fn adaptive_gl_relative(f: impl Fn(f64) -> f64, s0: f64, s1: f64, split: f64, sens: f64) -> Result<f64> {
    let g = |s: f64| [f(s)];
    let peak = std::cell::Cell::new(0.0f64);
    let ga = |s: f64| {
        let v = f(s).abs();
        peak.set(peak.get().max(v));
        [v]
    };
    let rule = gauss_legendre(24);
    let mass = if s0 < split && split < s1 {
        integrate_fixed(&ga, s0, split, rule)[0] + integrate_fixed(&ga, split, s1, rule)[0]
    } else {
        integrate_fixed(&ga, s0, s1, rule)[0]
    };
    if mass == 0.0 {
        return Ok(0.0);
    }
    if !mass.is_finite() {
        return Ok(f64::NAN);
    }
    // a dozen rounding errors of the panel sums, which halve with the panels
    let floor = 1e-13 * (s1 - s0) * (peak.get() + sens);
    Ok(adaptive_gl_split(&g, s0, s1, split, (1e-13 * mass).max(floor))?[0])
}

// Degree-5 seven-point rule on the triangle (barycentric nodes, weights sum to 1).
const RADON_A: f64 = 0.101_286_507_323_456_34; // (6 - √15) / 21
const RADON_B: f64 = 0.470_142_064_105_115_1; // (6 + √15) / 21
const RADON_WA: f64 = 0.125_939_180_544_827_15; // (155 - √15) / 1200
const RADON_WB: f64 = 0.132_394_152_788_506_18; // (155 + √15) / 1200
const RADON_W0: f64 = 0.225;

/// Seven-point degree-5 rule on one triangle.
pub fn triangle_rule<const N: usize>(f: &impl Fn(Point2) -> [f64; N], t: &Triangle) -> [f64; N] {
    let [a, b, c] = t.0;
    let area = t.signed_area();
    let at = |l1: f64, l2: f64| a * l1 + b * l2 + c * (1.0 - l1 - l2);
    let mut acc = f(at(1.0 / 3.0, 1.0 / 3.0)).map(|v| v * RADON_W0);
    let mut add = |p: Point2, w: f64| {
        let v = f(p);
        for k in 0..N {
            acc[k] += w * v[k];
        }
    };
    let a1 = 1.0 - 2.0 * RADON_A;
    add(at(RADON_A, RADON_A), RADON_WA);
    add(at(a1, RADON_A), RADON_WA);
    add(at(RADON_A, a1), RADON_WA);
    let b1 = 1.0 - 2.0 * RADON_B;
    add(at(RADON_B, RADON_B), RADON_WB);
    add(at(b1, RADON_B), RADON_WB);
    add(at(RADON_B, b1), RADON_WB);
    acc.map(|s| s * area)
}

/// Result of an adaptive area integral.
#[derive(Debug, Clone, Copy)]
pub struct AreaEstimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub triangles: usize,
}

/// Options for [`adaptive_triangles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaQuadrature {
    /// Absolute tolerance on the total.
    pub tol: f64,
    /// Tolerance relative to the summed leaf magnitudes, a running estimate
    /// of `∫|f|`; the looser of the two stops refinement.
    pub rel_tol: f64,
    /// Maximum number of leaf triangles.
    pub max_triangles: usize,
}

impl Default for AreaQuadrature {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            rel_tol: 0.0,
            max_triangles: 4_000_000,
        }
    }
}

struct Leaf<const N: usize> {
    tri: Triangle,
    refined: [f64; N],
    children: [[f64; N]; 4],
    err: f64,
}

impl<const N: usize> Leaf<N> {
    fn mass(&self) -> f64 {
        self.refined.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<const N: usize> PartialEq for Leaf<N> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<const N: usize> Eq for Leaf<N> {}
impl<const N: usize> PartialOrd for Leaf<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Leaf<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn make_leaf<const N: usize>(
    f: &impl Fn(Point2) -> [f64; N],
    tri: Triangle,
    coarse: [f64; N],
) -> Leaf<N> {
    let kids = tri.split4();
    let children = [
        triangle_rule(f, &kids[0]),
        triangle_rule(f, &kids[1]),
        triangle_rule(f, &kids[2]),
        triangle_rule(f, &kids[3]),
    ];
    let mut refined = [0.0; N];
    let mut err: f64 = 0.0;
    for k in 0..N {
        refined[k] = children.iter().map(|c| c[k]).sum();
        err = err.max((refined[k] - coarse[k]).abs());
    }
    Leaf {
        tri,
        refined,
        children,
        err,
    }
}

/// Globally adaptive integration over a set of triangles: the leaf with the
/// largest two-level error estimate is split into four until the summed
/// estimate drops below `opts.tol`.
pub fn adaptive_triangles<const N: usize>(
    triangles: &[Triangle],
    f: &impl Fn(Point2) -> [f64; N],
    opts: AreaQuadrature,
) -> Result<AreaEstimate<N>> {
    let mut heap: BinaryHeap<Leaf<N>> = triangles
        .iter()
        .map(|t| make_leaf(f, *t, triangle_rule(f, t)))
        .collect();
    let mut total_err: f64 = heap.iter().map(|l| l.err).sum();
    let mut mass: f64 = heap.iter().map(|l| l.mass()).sum();
    let mut leaves = heap.len();
    while total_err > opts.tol.max(opts.rel_tol * mass) {
        if leaves + 3 > opts.max_triangles {
            return Err(Error::BudgetExhausted {
                what: "adaptive triangle quadrature",
                budget: opts.max_triangles,
                error: total_err,
            });
        }
        let Some(worst) = heap.pop() else { break };
        total_err -= worst.err;
        mass -= worst.mass();
        for (kid, coarse) in worst.tri.split4().into_iter().zip(worst.children) {
            let leaf = make_leaf(f, kid, coarse);
            total_err += leaf.err;
            mass += leaf.mass();
            heap.push(leaf);
        }
        leaves += 3;
        // Guard against drift in the running sums.
        if leaves % 4096 == 0 {
            total_err = heap.iter().map(|l| l.err).sum();
            mass = heap.iter().map(|l| l.mass()).sum();
        }
    }
    let mut value = [0.0; N];
    for leaf in heap.iter() {
        for k in 0..N {
            value[k] += leaf.refined[k];
        }
    }
    Ok(AreaEstimate {
        value,
        error: total_err,
        triangles: leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials() {
        for n in [1, 2, 3, 7, 12, 32, 64] {
            let r = gauss_legendre(n);
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n = {n}");
            // x^(2n-2) is integrated exactly: 2/(2n-1)
            let deg = 2 * n - 2;
            let s: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn radon_constants() {
        let s15 = 15f64.sqrt();
        assert!((RADON_A - (6.0 - s15) / 21.0).abs() < 1e-16);
        assert!((RADON_B - (6.0 + s15) / 21.0).abs() < 1e-16);
        assert!((RADON_WA - (155.0 - s15) / 1200.0).abs() < 1e-16);
        assert!((RADON_WB - (155.0 + s15) / 1200.0).abs() < 1e-16);
        assert!((RADON_W0 + 3.0 * RADON_WA + 3.0 * RADON_WB - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_rule_is_degree_five() {
        let t = Triangle([Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0., 1.)]);
        // ∫ x^a y^b over the unit triangle = a! b! / (a + b + 2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let got = triangle_rule(&|p: Point2| [p.x.powi(a as i32) * p.y.powi(b as i32)], &t)[0];
                let want = fact(a) * fact(b) / fact(a + b + 2);
                assert!((got - want).abs() < 1e-15, "x^{a} y^{b}");
            }
        }
    }

    #[test]
    fn adaptive_gl_peaked() {
        // ∫_{-1}^{1} 1/(x² + ε²) = 2 atan(1/ε)/ε
        let eps = 1e-3;
        let f = |x: f64| [1.0 / (x * x + eps * eps)];
        let got = adaptive_gl(&f, -1.0, 1.0, 1e-9).unwrap()[0];
        let want = 2.0 * (1.0 / eps).atan() / eps;
        assert!((got - want).abs() < 1e-8 * want);
    }

    #[test]
    fn adaptive_triangles_smooth_and_peaked() {
        let t = [
            Triangle([Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.)]),
            Triangle([Point2::new(0., 0.), Point2::new(1., 1.), Point2::new(0., 1.)]),
        ];
        let est = adaptive_triangles(&t, &|p: Point2| [(p.x * 3.0).exp() * p.y.cos()], AreaQuadrature::default())
            .unwrap();
        let want = (3f64.exp() - 1.0) / 3.0 * 1f64.sin();
        assert!((est.value[0] - want).abs() < 1e-10);

        let h = 0.05;
        let c = Point2::new(0.3, 0.4);
        let k = |p: Point2| [h / ((p - c).norm_sq() + h * h).powf(1.5)];
        let est = adaptive_triangles(&t, &k, AreaQuadrature { tol: 1e-9, ..Default::default() }).unwrap();
        assert!(est.error <= 1e-9);
        assert!(est.value[0] > 0.0 && est.value[0] < std::f64::consts::TAU);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let t = [Triangle([Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0., 1.)])];
        let r = adaptive_triangles(
            &t,
            &|p: Point2| [1.0 / (p.norm_sq() + 1e-12)],
            AreaQuadrature { tol: 1e-14, rel_tol: 0.0, max_triangles: 100 },
        );
        assert!(matches!(r, Err(Error::BudgetExhausted { .. })));
    }
}
