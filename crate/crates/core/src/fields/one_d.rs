use crate::error::{Error, Result};

/// One-dimensional angle `∫_Ω h / ((y - x)² + h²) dy` for a union of
/// disjoint intervals, in closed form.
pub fn angle_1d(intervals: &[(f64, f64)], x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("height must be positive and finite, got {h}")));
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[1].0 < w[0].1 {
            return Err(Error::InvalidDomain(format!(
                "intervals [{}, {}] and [{}, {}] overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    let mut total = 0.0;
    for &(a, b) in intervals {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain(format!("bad interval [{a}, {b}]")));
        }
        total += ((b - x) / h).atan() - ((a - x) / h).atan();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn single_interval() {
        assert!((angle_1d(&[(-1.0, 1.0)], 0.0, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(angle_1d(&[(-1.0, 1.0)], 1e9, 1.0).unwrap().abs() < 1e-8);
        assert!(angle_1d(&[(-1.0, 1.0)], -1e9, 1.0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn symmetric_pair() {
        let iv = [(-2.0, -1.0), (1.0, 2.0)];
        for k in 0..=100 {
            let x = -3.0 + 0.06 * k as f64;
            let a = angle_1d(&iv, x, 0.7).unwrap();
            let b = angle_1d(&iv, -x, 0.7).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(angle_1d(&[(0.0, 2.0), (1.0, 3.0)], 0.0, 1.0).is_err());
        assert!(angle_1d(&[(1.0, 0.0)], 0.0, 1.0).is_err());
        assert!(angle_1d(&[(0.0, 1.0)], 0.0, 0.0).is_err());
    }
}
