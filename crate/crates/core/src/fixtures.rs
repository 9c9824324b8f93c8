//! Named domains used by the tests, the CLI and the verification suite.
//!
//! A fixture is written `name:arg,arg,...`, e.g. `disc:1,512`,
//! `two_discs:1,4,256` or `axisym:0,0.25,0.4,0.45,0.4,0.3,0.2,0.1,0`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{Point2, PolygonDomain, SimplePolygon};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// `[0, 1]²`.
pub fn unit_square() -> PolygonDomain {
    square(1.0).expect("unit square")
}

/// `[0, a]²`.
pub fn square(a: f64) -> Result<PolygonDomain> {
    rect(a, a)
}

/// `[0, w] × [0, h]`.
pub fn rect(w: f64, h: f64) -> Result<PolygonDomain> {
    PolygonDomain::from_rings(vec![vec![p(0., 0.), p(w, 0.), p(w, h), p(0., h)]])
}

/// Triangle `(0,0), (1,0), (0,1)`.
pub fn unit_triangle() -> PolygonDomain {
    triangle(p(0., 0.), p(1., 0.), p(0., 1.)).expect("unit triangle")
}

pub fn triangle(a: Point2, b: Point2, c: Point2) -> Result<PolygonDomain> {
    PolygonDomain::from_rings(vec![vec![a, b, c]])
}

/// Equilateral triangle of side 1 with its base on the x-axis.
pub fn equilateral() -> PolygonDomain {
    triangle(p(0., 0.), p(1., 0.), p(0.5, 0.75f64.sqrt())).expect("equilateral triangle")
}

/// Regular `n`-gon centred at the origin with the same area as the disc of
/// radius `r` (circumradius slightly larger than `r`).
pub fn disc(r: f64, n: usize) -> Result<PolygonDomain> {
    disc_at(Point2::ORIGIN, r, n)
}

pub fn disc_at(center: Point2, r: f64, n: usize) -> Result<PolygonDomain> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("disc needs n >= 3, got {n}")));
    }
    let nf = n as f64;
    let circumradius = r * (TAU / (nf * (TAU / nf).sin())).sqrt();
    Ok(PolygonDomain::single(SimplePolygon::regular(
        center,
        circumradius,
        n,
    )?))
}

/// Two equal-area discs of radius `r` centred at `(±d/2, 0)`.
pub fn two_discs(r: f64, d: f64, n: usize) -> Result<PolygonDomain> {
    let a = disc_at(p(-0.5 * d, 0.0), r, n)?;
    let b = disc_at(p(0.5 * d, 0.0), r, n)?;
    PolygonDomain::new(vec![a.components()[0].clone(), b.components()[0].clone()])
}

/// `[0,2]² \ (1,2]²`, area 3.
pub fn l_shape() -> PolygonDomain {
    PolygonDomain::from_rings(vec![vec![
        p(0., 0.),
        p(2., 0.),
        p(2., 1.),
        p(1., 1.),
        p(1., 2.),
        p(0., 2.),
    ]])
    .expect("L shape")
}

/// Non-convex star with 4 outer and 4 inner vertices.
pub fn star_octagon() -> PolygonDomain {
    let pts = (0..8)
        .map(|k| {
            let r = if k % 2 == 0 { 1.0 } else { 0.4 };
            let t = PI / 4.0 * k as f64;
            p(r * t.cos(), r * t.sin())
        })
        .collect();
    PolygonDomain::from_rings(vec![pts]).expect("star")
}

/// An irregular convex pentagon.
pub fn pentagon() -> PolygonDomain {
    PolygonDomain::from_rings(vec![vec![
        p(0., 0.),
        p(1.2, -0.1),
        p(1.6, 0.7),
        p(0.8, 1.3),
        p(-0.2, 0.9),
    ]])
    .expect("pentagon")
}

/// `{(y1, y2) : 0 ≤ y1 ≤ 1, |y2| ≤ f(y1)}` for a concave non-negative
/// profile `f` sampled at equally spaced points of `[0, 1]` and linearly
/// interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymProfile {
    samples: Vec<f64>,
}

impl AxisymProfile {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("profile needs at least 2 samples".into()));
        }
        if samples.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(Error::InvalidParameter("profile samples must be finite and >= 0".into()));
        }
        if samples.iter().all(|&f| f == 0.0) {
            return Err(Error::InvalidParameter("profile is identically zero".into()));
        }
        Ok(Self { samples })
    }

    /// The default asymmetric concave profile used in tests.
    pub fn standard() -> Self {
        Self::new(vec![0.0, 0.25, 0.4, 0.45, 0.4, 0.3, 0.2, 0.1, 0.0]).expect("profile")
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Concavity of the piecewise-linear interpolant.
    pub fn is_concave(&self) -> bool {
        self.samples
            .windows(3)
            .all(|w| w[2] - 2.0 * w[1] + w[0] <= 1e-12)
    }

    fn t(&self, i: usize) -> f64 {
        i as f64 / (self.samples.len() - 1) as f64
    }

    /// First and last points where `f` attains its maximum.
    pub fn plateau(&self) -> (f64, f64) {
        let max = self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let first = self.samples.iter().position(|&f| f == max).unwrap();
        let last = self.samples.iter().rposition(|&f| f == max).unwrap();
        (self.t(first), self.t(last))
    }

    /// Interval `[a/2, (1+b)/2]` that contains the unfolded region's trace on
    /// the axis.
    pub fn axis_interval(&self) -> (f64, f64) {
        let (a, b) = self.plateau();
        (0.5 * a, 0.5 * (1.0 + b))
    }

    pub fn domain(&self) -> Result<PolygonDomain> {
        let m = self.samples.len();
        let mut ring = Vec::with_capacity(2 * m);
        for i in 0..m {
            ring.push(p(self.t(i), -self.samples[i]));
        }
        for i in (0..m).rev() {
            let f = self.samples[i];
            if f > 0.0 {
                ring.push(p(self.t(i), f));
            } else if i != 0 && i != m - 1 {
                ring.push(p(self.t(i), 0.0));
            }
        }
        ring.dedup();
        if ring.first() == ring.last() {
            ring.pop();
        }
        PolygonDomain::from_rings(vec![ring])
    }
}

/// Parses `name` or `name:args`.
pub fn parse(spec: &str) -> Result<PolygonDomain> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), a.trim()),
        None => (spec.trim(), ""),
    };
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("fixture `{spec}`: bad number `{s}`"))
                })
            })
            .collect::<Result<_>>()?
    };
    let want = |k: usize| -> Result<()> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "fixture `{name}` takes {k} arguments, got {}",
                nums.len()
            )))
        }
    };
    let count = |x: f64| -> Result<usize> {
        if x >= 3.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(Error::InvalidParameter(format!("vertex count must be an integer >= 3, got {x}")))
        }
    };
    match name {
        "disc" => {
            want(2)?;
            disc(nums[0], count(nums[1])?)
        }
        "regular" => {
            want(2)?;
            Ok(PolygonDomain::single(SimplePolygon::regular(Point2::ORIGIN, nums[0], count(nums[1])?)?))
        }
        "square" => {
            want(1)?;
            square(nums[0])
        }
        "rect" => {
            want(2)?;
            rect(nums[0], nums[1])
        }
        "triangle" if nums.is_empty() => Ok(unit_triangle()),
        "triangle" => {
            want(6)?;
            triangle(p(nums[0], nums[1]), p(nums[2], nums[3]), p(nums[4], nums[5]))
        }
        "equilateral" => {
            want(0)?;
            Ok(equilateral())
        }
        "two_discs" => {
            want(3)?;
            two_discs(nums[0], nums[1], count(nums[2])?)
        }
        "axisym" if nums.is_empty() => AxisymProfile::standard().domain(),
        "axisym" => AxisymProfile::new(nums)?.domain(),
        "lshape" => {
            want(0)?;
            Ok(l_shape())
        }
        "star" => {
            want(0)?;
            Ok(star_octagon())
        }
        "pentagon" => {
            want(0)?;
            Ok(pentagon())
        }
        other => Err(Error::InvalidParameter(format!("unknown fixture `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_has_exact_area() {
        for n in [16, 128, 512] {
            let d = disc(1.0, n).unwrap();
            assert!((d.area() - PI).abs() < 1e-12, "n = {n}");
            let b = d.barycenter();
            assert!(b.norm() < 1e-14);
        }
    }

    #[test]
    fn axisym_profile() {
        let prof = AxisymProfile::standard();
        assert!(prof.is_concave());
        assert_eq!(prof.plateau(), (0.375, 0.375));
        let d = prof.domain().unwrap();
        assert!(d.is_convex());
        for v in d.vertices() {
            assert!(d.contains(Point2::new(v.x, -v.y), 1e-12));
        }
        let tri = AxisymProfile::new(vec![0.0, 0.5, 0.0]).unwrap();
        assert_eq!(tri.axis_interval(), (0.25, 0.75));
        assert!((tri.domain().unwrap().area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parse_fixtures() {
        assert!((parse("disc:1,512").unwrap().area() - PI).abs() < 1e-12);
        assert_eq!(parse("square:2").unwrap().area(), 4.0);
        assert_eq!(parse("triangle").unwrap().area(), 0.5);
        assert_eq!(parse("triangle:0,0,2,0,0,2").unwrap().area(), 2.0);
        assert_eq!(parse("two_discs:1,4,64").unwrap().components().len(), 2);
        assert!(parse("axisym:0,0.5,0").is_ok());
        assert_eq!(parse("lshape").unwrap().area(), 3.0);
        assert!(parse("disc:1").is_err());
        assert!(parse("disc:1,2.5").is_err());
        assert!(parse("blob").is_err());
        assert!(parse("square:x").is_err());
        assert!(parse("two_discs:1,1,64").is_err());
    }
}
