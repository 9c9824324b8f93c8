use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::angle_1d;

fn check(r: f64, h: f64) -> Result<()> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("R must exceed 1, got {r}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("height must be positive, got {h}")));
    }
    Ok(())
}

/// `h* = √(R + (R+1)√R)`, where the two centers of `[-R,-1] ∪ [1,R]` merge.
pub fn critical_height_1d(r: f64) -> f64 {
    (r + (r + 1.0) * r.sqrt()).sqrt()
}

/// Closed-form maximizers of the angle of `[-R,-1] ∪ [1,R]` at height `h`:
/// `±√(√(R((R+1)² + 4h²)) - (R + h²))` below `h*`, and `0` from `h*` on.
pub fn centers_1d(r: f64, h: f64) -> Result<Vec<f64>> {
    check(r, h)?;
    if h < critical_height_1d(r) {
        let radicand = (r * ((r + 1.0).powi(2) + 4.0 * h * h)).sqrt() - (r + h * h);
        let x = radicand.max(0.0).sqrt();
        Ok(vec![-x, x])
    } else {
        Ok(vec![0.0])
    }
}

/// Grid maximization of the 1D angle on `[-(R+1), R+1]` with spacing
/// `step`, symmetric about 0. Points within `1e-13` (relative) of the best
/// value form plateaus; each maximal run of consecutive plateau points is one
/// maximizer, reported at the run's midpoint.
pub fn brute_force_1d(r: f64, h: f64, step: f64) -> Result<Vec<f64>> {
    check(r, h)?;
    if !(step > 0.0) || (r + 1.0) / step > 1e8 {
        return Err(Error::InvalidParameter(format!("grid step {step} is out of range")));
    }
    let intervals = [(-r, -1.0), (1.0, r)];
    let k = ((r + 1.0) / step).ceil() as i64;
    let xs: Vec<f64> = (-k..=k).map(|i| i as f64 * step).collect();
    let values = xs
        .iter()
        .map(|&x| angle_1d(&intervals, x, h))
        .collect::<Result<Vec<f64>>>()?;
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let window = 1e-13 * best.abs();
    let mut out = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best - v <= window {
            run = Some(match run {
                Some((a, _)) => (a, i),
                None => (i, i),
            });
        } else if let Some((a, b)) = run.take() {
            out.push(0.5 * (xs[a] + xs[b]));
        }
    }
    if let Some((a, b)) = run {
        out.push(0.5 * (xs[a] + xs[b]));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusRow1D {
    pub h: f64,
    pub centers: Vec<f64>,
    pub closed_form: Vec<f64>,
}

/// Brute-force maximizers next to the closed form for each height.
pub fn center_locus_sweep_1d(r: f64, h_values: &[f64], step: f64) -> Result<Vec<LocusRow1D>> {
    if h_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("heights must be strictly ascending".into()));
    }
    h_values
        .iter()
        .map(|&h| {
            Ok(LocusRow1D {
                h,
                centers: brute_force_1d(r, h, step)?,
                closed_form: centers_1d(r, h)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let c = centers_1d(2.0, 1.0).unwrap();
        let x = (26f64.sqrt() - 3.0).sqrt();
        assert_eq!(c, vec![-x, x]);
        assert!((x - 1.448799).abs() < 1e-6);
        assert_eq!(centers_1d(2.0, 10.0).unwrap(), vec![0.0]);
        let hs = critical_height_1d(2.0);
        assert!((hs - 2.49853).abs() < 1e-5);
        assert_eq!(centers_1d(2.0, hs).unwrap(), vec![0.0]);
        let radicand = (2.0 * (9.0 + 4.0 * hs * hs)).sqrt() - (2.0 + hs * hs);
        assert!(radicand.abs() < 1e-9);
    }

    #[test]
    fn brute_force_matches() {
        for h in [0.5, 1.0, 2.0] {
            let bf = brute_force_1d(2.0, h, 1e-5).unwrap();
            let cf = centers_1d(2.0, h).unwrap();
            assert_eq!(bf.len(), 2, "{h}: {bf:?}");
            for (a, b) in bf.iter().zip(&cf) {
                assert!((a - b).abs() < 1e-5, "{h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pitchfork_counts() {
        let rows = center_locus_sweep_1d(2.0, &[0.5, 1.0, 2.0, 2.49854, 3.0], 1e-5).unwrap();
        let counts: Vec<usize> = rows.iter().map(|r| r.centers.len()).collect();
        assert_eq!(counts, vec![2, 2, 2, 1, 1]);
        assert!(center_locus_sweep_1d(2.0, &[1.0, 0.5], 1e-3).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(centers_1d(1.0, 1.0).is_err());
        assert!(centers_1d(2.0, 0.0).is_err());
        assert!(brute_force_1d(2.0, 1.0, 0.0).is_err());
    }
}
