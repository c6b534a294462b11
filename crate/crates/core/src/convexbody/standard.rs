//! Standard position and the defining function `F`.

use serde::{Deserialize, Serialize};

use super::{direction_grid, dot, golden_max, norm2, Body, ConvexBody};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardMargins {
    /// Containment margin of the base point in the original body.
    pub base_point_margin: f64,
    /// `h_K(n) - <n, lambda>` for the outward normal `n`.
    pub support_gap: f64,
    /// Smallest support value of the shadow over its direction grid.
    pub shadow_margin: f64,
}

/// A body recoordinatized by `y = Q (x - lambda)`, where the last row of `Q`
/// is the inward normal; the image lies in `y_g >= 0` with `lambda` at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardPosition {
    pub body: ConvexBody,
    pub base_point: Vec<f64>,
    /// Outward unit normal at the base point.
    pub supporting_direction: Vec<f64>,
    /// Rows of the orthogonal matrix `Q`.
    pub rotation: Vec<Vec<f64>>,
    pub margins: StandardMargins,
}

impl StandardPosition {
    /// `lambda + Q^T y`.
    pub fn to_original(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.base_point.clone();
        for (row, &yi) in self.rotation.iter().zip(y) {
            for (xj, qj) in x.iter_mut().zip(row) {
                *xj += qj * yi;
            }
        }
        x
    }

    /// `Q (x - lambda)`.
    pub fn to_standard(&self, x: &[f64]) -> Vec<f64> {
        let d = super::sub(x, &self.base_point);
        self.rotation.iter().map(|row| dot(row, &d)).collect()
    }

    fn rotate_back(&self, c: &[f64]) -> Vec<f64> {
        let g = self.base_point.len();
        let mut out = vec![0.0; g];
        for (row, &ci) in self.rotation.iter().zip(c) {
            for (o, qj) in out.iter_mut().zip(row) {
                *o += qj * ci;
            }
        }
        out
    }

    /// Support of the shadow `D` in direction `u` (length `g - 1`).
    pub fn shadow_support(&self, u: &[f64]) -> f64 {
        let mut c = u.to_vec();
        c.push(0.0);
        self.support(&c)
    }

    /// Whether the base point is `(0, 0)` of `K_p` with outward normal `(0, -1)`.
    pub fn is_kp_origin(&self) -> Option<f64> {
        let p = self.body.kp_exponent()?;
        let at_origin = norm2(&self.base_point) <= 1e-12;
        let normal = &self.supporting_direction;
        (at_origin && normal[0].abs() <= 1e-12 && (normal[1] + 1.0).abs() <= 1e-12).then_some(p)
    }
}

impl Body for StandardPosition {
    fn dimension(&self) -> usize {
        self.base_point.len()
    }

    fn support(&self, c: &[f64]) -> f64 {
        let back = self.rotate_back(c);
        self.body.support(&back) - dot(&back, &self.base_point)
    }

    fn margin(&self, y: &[f64]) -> f64 {
        self.body.margin(&self.to_original(y))
    }

    fn margin_resolution(&self, y: &[f64]) -> f64 {
        let x = self.to_original(y);
        self.body.margin_resolution(&x) + 4.0 * f64::EPSILON * norm2(&self.base_point)
    }
}

/// Rows of an orthogonal `Q` whose last row is `-n`. In the plane the first
/// row is `(b, -a)` for `-n = (a, b)`, so `Q` is a rotation.
pub fn standard_rotation(n: &[f64]) -> Vec<Vec<f64>> {
    let g = n.len();
    let inward: Vec<f64> = n.iter().map(|x| -x).collect();
    if g == 2 {
        return vec![vec![inward[1], -inward[0]], inward];
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(g);
    for k in 0..g {
        let mut e = vec![0.0; g];
        e[k] = 1.0;
        let coef = dot(&e, &inward);
        let mut v: Vec<f64> = e.iter().zip(&inward).map(|(a, b)| a - coef * b).collect();
        for b in &basis {
            let cb = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= cb * y);
        }
        let len = norm2(&v);
        if len > 1e-8 {
            basis.push(v.into_iter().map(|x| x / len).collect());
        }
        if basis.len() == g - 1 {
            break;
        }
    }
    basis.push(inward);
    basis
}

/// Recoordinatize `K` so that `lambda` is the origin, `K` lies in `y_g >= 0`
/// and the origin is interior to the shadow.
pub fn standard_position(
    body: &ConvexBody,
    lambda: &[f64],
    supporting_direction: &[f64],
    tol: f64,
) -> Result<StandardPosition> {
    let g = body.dimension();
    if lambda.len() != g || supporting_direction.len() != g {
        return Err(Error::Dimension(format!(
            "body lives in R^{g}, point has {} and direction {} coordinates",
            lambda.len(),
            supporting_direction.len()
        )));
    }
    if g < 2 {
        return Err(Error::InvalidArgument("standard position needs dimension >= 2".into()));
    }
    let len = norm2(supporting_direction);
    if !(len.is_finite() && len > 0.0) {
        return Err(Error::InvalidArgument("supporting direction must be nonzero".into()));
    }
    let n: Vec<f64> = supporting_direction.iter().map(|x| x / len).collect();
    let base_point_margin = body.margin(lambda);
    if base_point_margin.abs() > tol {
        return Err(Error::NotOnBoundary {
            margin: base_point_margin,
        });
    }
    let support_gap = body.support(&n) - dot(&n, lambda);
    if support_gap.abs() > tol {
        return Err(Error::NotSupporting { gap: support_gap });
    }
    let mut sp = StandardPosition {
        body: body.clone(),
        base_point: lambda.to_vec(),
        supporting_direction: n.clone(),
        rotation: standard_rotation(&n),
        margins: StandardMargins {
            base_point_margin,
            support_gap,
            shadow_margin: 0.0,
        },
    };
    let shadow_margin = direction_grid(g - 1)
        .iter()
        .map(|u| sp.shadow_support(u))
        .fold(f64::INFINITY, f64::min);
    sp.margins.shadow_margin = shadow_margin;
    if shadow_margin <= tol {
        return Err(Error::Precondition(format!(
            "origin is not interior to the shadow (margin {shadow_margin:e})"
        )));
    }
    Ok(sp)
}

/// `F(x) = min { y >= 0 : (x, y) in K }`, by bisection against the containment
/// oracle down to adjacent doubles.
pub fn defining_function(s: &StandardPosition, x: &[f64]) -> Result<f64> {
    let g = s.dimension();
    if x.len() + 1 != g {
        return Err(Error::Dimension(format!(
            "shadow point needs {} coordinates, got {}",
            g - 1,
            x.len()
        )));
    }
    let shadow_gap = if g == 2 {
        (s.shadow_support(&[1.0]) - x[0]).min(s.shadow_support(&[-1.0]) + x[0])
    } else {
        direction_grid(g - 1)
            .iter()
            .map(|u| s.shadow_support(u) - dot(u, x))
            .fold(f64::INFINITY, f64::min)
    };
    if shadow_gap.is_nan() || shadow_gap <= 0.0 {
        return Err(Error::OutsideShadow(x.to_vec()));
    }
    let point = |y: f64| {
        let mut v = x.to_vec();
        v.push(y);
        v
    };
    if s.margin(&point(0.0)) >= 0.0 {
        return Ok(0.0);
    }
    let mut top = vec![0.0; g];
    top[g - 1] = 1.0;
    let y_top = s.support(&top);
    let y_in = golden_max(|y| s.margin(&point(y)), 0.0, y_top, 200);
    if s.margin(&point(y_in)) < 0.0 {
        return Err(Error::OutsideShadow(x.to_vec()));
    }
    let (mut lo, mut hi) = (0.0f64, y_in);
    loop {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if s.margin(&point(mid)) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
