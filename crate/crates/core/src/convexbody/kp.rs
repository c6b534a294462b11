//! Closed-form quantities for `K_p = { |x|^p <= y <= 1 }`, 1 < p < 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BOUNDARY_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskInKp {
    pub p: f64,
    pub c: f64,
    /// `c - (pc)^(p/(2-p))`.
    pub radius: f64,
    pub samples: usize,
    /// `min (y - |x|^p)` over the sampled circle.
    pub min_lower_margin: f64,
    /// `min (1 - y)` over the sampled circle.
    pub min_upper_margin: f64,
    /// `min (f(y) - r^2)` with `f(y) = y^(2/p) + (y - c)^2`.
    pub min_f_margin: f64,
}

fn check_lemma_domain(p: f64, c: f64) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Precondition(format!("p = {p} outside (1, 2)")));
    }
    if !(c > 0.0 && 2.0 * c < 1.0) {
        return Err(Error::Precondition(format!("c = {c} must satisfy 0 < 2c < 1")));
    }
    let shrink = (p * c).powf(p / (2.0 - p));
    if shrink >= c {
        return Err(Error::Precondition(format!(
            "(pc)^(p/(2-p)) = {shrink:e} is not below c = {c:e}"
        )));
    }
    Ok(shrink)
}

/// Radius of the disk centred at `(0, c)` that fits inside `K_p`, checked on
/// 10^4 boundary points.
pub fn disk_in_kp_radius(p: f64, c: f64) -> Result<DiskInKp> {
    let shrink = check_lemma_domain(p, c)?;
    let r = c - shrink;
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    let mut fmin = f64::INFINITY;
    for k in 0..BOUNDARY_SAMPLES {
        let t = std::f64::consts::TAU * k as f64 / BOUNDARY_SAMPLES as f64;
        let (s, co) = t.sin_cos();
        let x = r * co;
        let y = c + r * s;
        lower = lower.min(y - x.abs().powf(p));
        upper = upper.min(1.0 - y);
        // On the circle (y - c)^2 - r^2 = -x^2.
        fmin = fmin.min(y.max(0.0).powf(2.0 / p) - x * x);
    }
    Ok(DiskInKp {
        p,
        c,
        radius: r,
        samples: BOUNDARY_SAMPLES,
        min_lower_margin: lower,
        min_upper_margin: upper,
        min_f_margin: fmin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityBound {
    pub p: f64,
    pub c: f64,
    pub r: f64,
    /// `c^2 / (2 (pc)^(p/(2-p)))`.
    pub m_bound: f64,
    /// Threshold of `M >= sqrt((M - c)^2 + r^2) + r` found by bisection.
    pub m_threshold: f64,
    pub relative_gap: f64,
}

/// Lower bound on any scaling constant for `K_p`, with an independent
/// threshold solve of the defining inequality.
pub fn scalability_lower_bound(p: f64, c: f64) -> Result<ScalabilityBound> {
    if !(p > 4.0 / 3.0 && p < 2.0) {
        return Err(Error::Precondition(format!("p = {p} outside (4/3, 2)")));
    }
    let shrink = check_lemma_domain(p, c)?;
    let r = c - shrink;
    let m_bound = c * c / (2.0 * shrink);
    let m_threshold = scalability_threshold_solve(c, r);
    Ok(ScalabilityBound {
        p,
        c,
        r,
        m_bound,
        m_threshold,
        relative_gap: (m_bound - m_threshold).abs() / m_bound,
    })
}

/// Smallest `M >= c` with `M - r - sqrt((M - c)^2 + r^2) >= 0`, evaluated as
/// `[(c - r)(2M - r - c) - r^2] / (M - r + sqrt((M - c)^2 + r^2))` to avoid
/// cancellation.
pub fn scalability_threshold_solve(c: f64, r: f64) -> f64 {
    let phi = |m: f64| {
        let num = (c - r) * (2.0 * m - r - c) - r * r;
        num / (m - r + ((m - c).powi(2) + r * r).sqrt())
    };
    let mut lo = c;
    let mut hi = 2.0 * c.max(1.0);
    while phi(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    loop {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            return hi;
        }
        if phi(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KpCurveRow {
    pub c: f64,
    pub radius: f64,
    /// Present when `p` lies in `(4/3, 2)`.
    pub m_bound: Option<f64>,
}

/// `r(c)` and `M(c)` over the given `c` values.
pub fn kp_sweep(p: f64, cs: &[f64]) -> Result<Vec<KpCurveRow>> {
    if cs.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one c value".into()));
    }
    cs.iter()
        .map(|&c| {
            let shrink = check_lemma_domain(p, c)?;
            let m_bound = (p > 4.0 / 3.0).then(|| c * c / (2.0 * shrink));
            Ok(KpCurveRow {
                c,
                radius: c - shrink,
                m_bound,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn radius_examples() {
        let d = disk_in_kp_radius(1.5, 0.01).unwrap();
        assert_relative_eq!(d.radius, 0.009996625, max_relative = 1e-12);
        assert!(d.min_lower_margin >= -1e-12 && d.min_upper_margin > 0.0 && d.min_f_margin >= -1e-15);
        let d = disk_in_kp_radius(1.5, 0.001).unwrap();
        assert_relative_eq!(d.radius, 0.001 - 3.375e-9, max_relative = 1e-12);
        assert!(d.min_lower_margin >= -1e-12);
    }

    #[test]
    fn radius_preconditions() {
        assert!(disk_in_kp_radius(1.5, 0.6).is_err());
        assert!(disk_in_kp_radius(1.5, -0.1).is_err());
        assert!(disk_in_kp_radius(2.0, 0.01).is_err());
    }

    #[test]
    fn bound_examples() {
        let b = scalability_lower_bound(1.5, 0.01).unwrap();
        assert!((b.m_bound - 14.8148).abs() < 1e-4);
        assert!(b.relative_gap < 1e-9);
        let b2 = scalability_lower_bound(1.5, 0.001).unwrap();
        assert!((b2.m_bound - 148.148).abs() < 1e-3);
        assert!(b2.relative_gap < 1e-9);
        assert_relative_eq!(b2.m_bound / b.m_bound, 10.0, max_relative = 1e-9);
        assert!(scalability_lower_bound(1.3, 0.01).is_err());
    }

    #[test]
    fn sweep_rows() {
        let rows = kp_sweep(1.5, &[1e-2, 1e-3]).unwrap();
        assert_relative_eq!(rows[1].radius, 0.000999996625, max_relative = 1e-12);
        assert!(kp_sweep(1.5, &[]).is_err());
    }
}
