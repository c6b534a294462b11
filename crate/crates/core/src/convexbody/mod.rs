//! Low-dimensional convex bodies given by support and containment oracles.

mod classify;
mod kp;
mod standard;

pub use classify::{
    classify_extreme_point, inscribed_ball_excluder, isolated_extreme, simplex_bounded, subquadratic_certify,
    BallCertificate, BallReport, CertifyMode, ClassifySettings, ExtremePointReport, IsolatedReport, RadiusGrid,
    RhoSample, SimplexReport, SubquadraticReport,
};
pub use kp::{
    disk_in_kp_radius, kp_sweep, scalability_lower_bound, scalability_threshold_solve, DiskInKp, KpCurveRow,
    ScalabilityBound,
};
pub use standard::{defining_function, standard_position, standard_rotation, StandardMargins, StandardPosition};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::MatrixTuple;

const EPS: f64 = f64::EPSILON;

/// Verdict of a classifier that must not overclaim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

/// Oracle access to a convex body in `R^g`.
pub trait Body {
    fn dimension(&self) -> usize;

    /// `h_K(c) = max { <c, x> : x in K }`.
    fn support(&self, c: &[f64]) -> f64;

    /// Signed containment margin: `>= 0` inside, `< 0` outside.
    fn margin(&self, x: &[f64]) -> f64;

    /// Size of the rounding noise in `margin(x)`.
    fn margin_resolution(&self, x: &[f64]) -> f64;

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.margin(x) >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum GraphProfile {
    /// `F(x) = x^2 ln(1/|x|)` on `|x| <= half_width`.
    QuadLog { half_width: f64 },
}

impl GraphProfile {
    pub fn half_width(&self) -> f64 {
        match self {
            GraphProfile::QuadLog { half_width } => *half_width,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            GraphProfile::QuadLog { .. } => {
                let a = x.abs();
                if a == 0.0 {
                    0.0
                } else {
                    -a * a * a.ln()
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    /// `{ (x, y) : |x|^p <= y <= 1 }`.
    Kp {
        p: f64,
    },
    /// Euclidean ball in any dimension.
    Disk {
        center: Vec<f64>,
        radius: f64,
    },
    LqBall {
        q: f64,
        center: Vec<f64>,
        radius: f64,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    /// The level-one matrix range `W_1(A)`.
    MatrixRange {
        tuple: MatrixTuple,
    },
    /// `{ (x, y) : |x| <= w, F(x) <= y <= F(w) }` for a convex profile `F`.
    GraphBody {
        profile: GraphProfile,
    },
}

impl ConvexBody {
    pub fn kp(p: f64) -> Result<Self> {
        let b = ConvexBody::Kp { p };
        b.validate()?;
        Ok(b)
    }

    pub fn unit_disk() -> Self {
        ConvexBody::Disk {
            center: vec![0.0, 0.0],
            radius: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            ConvexBody::Kp { p } => {
                if !(p.is_finite() && *p > 1.0) {
                    return bad(format!("K_p needs finite p > 1, got {p}"));
                }
            }
            ConvexBody::Disk { center, radius } => {
                if center.is_empty() || !(radius.is_finite() && *radius > 0.0) {
                    return bad("disk needs a nonempty center and a positive radius".into());
                }
            }
            ConvexBody::LqBall { q, center, radius } => {
                if !(q.is_finite() && *q >= 1.0) {
                    return bad(format!("l_q ball needs finite q >= 1, got {q}"));
                }
                if center.is_empty() || !(radius.is_finite() && *radius > 0.0) {
                    return bad("l_q ball needs a nonempty center and a positive radius".into());
                }
            }
            ConvexBody::Polytope { vertices } => {
                let g = vertices.first().map(Vec::len).unwrap_or(0);
                if g == 0 || vertices.iter().any(|v| v.len() != g) {
                    return bad("polytope vertices must share one positive dimension".into());
                }
                if g == 2 && hull_2d(vertices).len() < 3 {
                    return bad("planar polytope must have nonempty interior".into());
                }
            }
            ConvexBody::MatrixRange { tuple } => {
                if tuple.is_empty() || tuple.sa_mask().iter().any(|&s| !s) {
                    return bad("matrix range needs a nonempty self-adjoint tuple".into());
                }
            }
            ConvexBody::GraphBody { profile } => {
                let w = profile.half_width();
                if !(w > 0.0 && w < (-1.5f64).exp()) {
                    return bad(format!(
                        "quad-log profile is convex only for half_width < e^-1.5, got {w}"
                    ));
                }
            }
        }
        if self.iter_finite().any(|x| !x.is_finite()) {
            return bad("body parameters must be finite".into());
        }
        Ok(())
    }

    fn iter_finite(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            ConvexBody::Disk { center, .. } | ConvexBody::LqBall { center, .. } => Box::new(center.iter().copied()),
            ConvexBody::Polytope { vertices } => Box::new(vertices.iter().flatten().copied()),
            _ => Box::new(std::iter::empty()),
        }
    }

    /// The `p` of a `K_p` body.
    pub fn kp_exponent(&self) -> Option<f64> {
        match self {
            ConvexBody::Kp { p } => Some(*p),
            _ => None,
        }
    }
}

impl Body for ConvexBody {
    fn dimension(&self) -> usize {
        match self {
            ConvexBody::Kp { .. } | ConvexBody::GraphBody { .. } => 2,
            ConvexBody::Disk { center, .. } | ConvexBody::LqBall { center, .. } => center.len(),
            ConvexBody::Polytope { vertices } => vertices[0].len(),
            ConvexBody::MatrixRange { tuple } => tuple.len(),
        }
    }

    fn support(&self, c: &[f64]) -> f64 {
        match self {
            ConvexBody::Kp { p } => kp_support(*p, c[0], c[1]),
            ConvexBody::Disk { center, radius } => dot(c, center) + radius * norm2(c),
            ConvexBody::LqBall { q, center, radius } => dot(c, center) + radius * lq_norm(c, dual_exponent(*q)),
            ConvexBody::Polytope { vertices } => vertices.iter().map(|v| dot(c, v)).fold(f64::NEG_INFINITY, f64::max),
            ConvexBody::MatrixRange { tuple } => crate::matrange::support_value(tuple.entries(), c),
            ConvexBody::GraphBody { profile } => graph_support(profile, c[0], c[1]),
        }
    }

    fn margin(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Kp { p } => (x[1] - x[0].abs().powf(*p)).min(1.0 - x[1]),
            ConvexBody::Disk { center, radius } => radius - norm2(&sub(x, center)),
            ConvexBody::LqBall { q, center, radius } => radius - lq_norm(&sub(x, center), *q),
            ConvexBody::Polytope { vertices } => polytope_margin(self, vertices, x),
            ConvexBody::MatrixRange { .. } => grid_margin(self, x),
            ConvexBody::GraphBody { profile } => {
                let w = profile.half_width();
                (x[1] - profile.eval(x[0]))
                    .min(profile.eval(w) - x[1])
                    .min(w - x[0].abs())
            }
        }
    }

    fn margin_resolution(&self, x: &[f64]) -> f64 {
        let tiny = f64::MIN_POSITIVE;
        match self {
            ConvexBody::Kp { p } => 4.0 * EPS * x[1].abs().max(x[0].abs().powf(*p)) + tiny,
            ConvexBody::Disk { center, radius } | ConvexBody::LqBall { center, radius, .. } => {
                8.0 * EPS * (norm2(center) + radius + norm2(x))
            }
            ConvexBody::Polytope { vertices } => {
                let scale = vertices.iter().map(|v| norm2(v)).fold(0.0, f64::max);
                8.0 * EPS * (scale + norm2(x))
            }
            ConvexBody::MatrixRange { tuple } => {
                let scale: f64 = tuple.entries().iter().map(crate::numkernel::frobenius).sum();
                64.0 * EPS * (scale + norm2(x))
            }
            ConvexBody::GraphBody { profile } => 4.0 * EPS * x[1].abs().max(profile.eval(x[0])) + tiny,
        }
    }
}

/// Closed-form support of `K_p`: `c_y + |c_x|` when `c_y >= 0`, otherwise
/// the maximum of `|c_x| t - |c_y| t^p` at `t* = (|c_x| / (p |c_y|))^(1/(p-1))`
/// clamped to `[0, 1]`.
pub fn kp_support(p: f64, cx: f64, cy: f64) -> f64 {
    let ax = cx.abs();
    if cy >= 0.0 {
        return cy + ax;
    }
    let t = (ax / (p * -cy)).powf(1.0 / (p - 1.0)).clamp(0.0, 1.0);
    ax * t + cy * t.powf(p)
}

fn graph_support(profile: &GraphProfile, cx: f64, cy: f64) -> f64 {
    let w = profile.half_width();
    let ax = cx.abs();
    if cy >= 0.0 {
        return cy * profile.eval(w) + ax * w;
    }
    let f = |t: f64| ax * t + cy * profile.eval(t);
    let t = golden_max(f, 0.0, w, 200);
    f(t).max(f(0.0)).max(f(w))
}

/// Argmax of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if hi - lo <= EPS * (lo.abs() + hi.abs()) {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    if fa >= fb {
        a
    } else {
        b
    }
}

fn polytope_margin(body: &ConvexBody, vertices: &[Vec<f64>], x: &[f64]) -> f64 {
    match x.len() {
        1 => {
            let lo = vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            (x[0] - lo).min(hi - x[0])
        }
        2 => {
            let hull = hull_2d(vertices);
            let k = hull.len();
            (0..k)
                .map(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % k]);
                    let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
                    let len = (ex * ex + ey * ey).sqrt();
                    let n = [ey / len, -ex / len];
                    n[0] * (a[0] - x[0]) + n[1] * (a[1] - x[1])
                })
                .fold(f64::INFINITY, f64::min)
        }
        _ => grid_margin(body, x),
    }
}

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
pub(crate) fn hull_2d(points: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// `min_c (h(c) - <c, x>)` over the direction grid; in the plane the best grid
/// angle is refined by golden-section search.
fn grid_margin(body: &ConvexBody, x: &[f64]) -> f64 {
    let g = body.dimension();
    let gap = |c: &[f64]| body.support(c) - dot(c, x);
    if g == 2 {
        let n = 360;
        let step = std::f64::consts::TAU / n as f64;
        let at = |t: f64| gap(&[t.cos(), t.sin()]);
        let (best, _) = (0..n)
            .map(|k| (k, at(k as f64 * step)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty grid");
        let centre = best as f64 * step;
        let t = golden_max(|t| -at(t), centre - step, centre + step, 120);
        return at(t).min(at(centre));
    }
    direction_grid(g).iter().map(|c| gap(c)).fold(f64::INFINITY, f64::min)
}

/// Unit directions: `{+1, -1}` on the line, 720 angles in the plane, a
/// 2000-point Fibonacci sphere in 3D, and 2000 fixed pseudo-random directions above.
pub fn direction_grid(g: usize) -> Vec<Vec<f64>> {
    match g {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => circle_grid(720),
        3 => fibonacci_sphere(2000),
        _ => {
            let mut rng = crate::random::seeded(0x5eed);
            (0..2000).map(|_| crate::random::real_direction(&mut rng, g)).collect()
        }
    }
}

/// Typical angular spacing of [`direction_grid`].
pub fn grid_spacing(g: usize) -> f64 {
    match g {
        0 | 1 => std::f64::consts::PI,
        2 => std::f64::consts::TAU / 720.0,
        _ => (4.0 * std::f64::consts::PI / 2000.0).sqrt(),
    }
}

pub fn circle_grid(n: usize) -> Vec<Vec<f64>> {
    let step = std::f64::consts::TAU / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * step;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lq_norm(a: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        a.iter().map(|x| x.abs()).fold(0.0, f64::max)
    } else {
        a.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

fn dual_exponent(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else {
        q / (q - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kp_support_matches_brute_force() {
        let p = 1.5;
        let body = ConvexBody::Kp { p };
        for c in circle_grid(37) {
            let brute = (0..=20000)
                .map(|i| {
                    let x = -1.0 + i as f64 / 10000.0;
                    let lower = c[0] * x + c[1] * x.abs().powf(p);
                    let upper = c[0] * x + c[1];
                    lower.max(upper)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(body.support(&c), brute, epsilon = 1e-7);
        }
    }

    #[test]
    fn kp_margin_sign() {
        let body = ConvexBody::Kp { p: 2.0 };
        assert!(body.contains(&[0.5, 0.25], 0.0));
        assert!(!body.contains(&[0.5, 0.2], 0.0));
        assert!(!body.contains(&[0.0, 1.1], 0.0));
        assert!(!body.contains(&[1.2, 1.0], 0.0));
    }

    #[test]
    fn square_margin_is_distance_inside() {
        let sq = ConvexBody::Polytope {
            vertices: vec![
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![0.0, 0.5],
            ],
        };
        sq.validate().unwrap();
        assert_abs_diff_eq!(sq.margin(&[0.0, 0.0]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sq.margin(&[0.5, 0.9]), 0.1, epsilon = 1e-15);
        assert!(sq.margin(&[1.5, 0.0]) < 0.0);
        assert_abs_diff_eq!(sq.support(&[1.0, 0.0]), 1.0);
    }

    #[test]
    fn lq_support_uses_dual_norm() {
        let b = ConvexBody::LqBall {
            q: 1.0,
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        assert_abs_diff_eq!(b.support(&[0.6, 0.8]), 0.8);
        let b = ConvexBody::LqBall {
            q: 3.0,
            center: vec![1.0, 0.0, 0.0],
            radius: 2.0,
        };
        let c = [0.0, 0.6, 0.8];
        let qd = 1.5f64;
        let expected = 2.0 * (0.6f64.powf(qd) + 0.8f64.powf(qd)).powf(1.0 / qd);
        assert_abs_diff_eq!(b.support(&c), expected, epsilon = 1e-14);
    }

    #[test]
    fn matrix_range_disk_margin() {
        let t = MatrixTuple::selfadjoint(vec![
            crate::numkernel::real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]),
            crate::numkernel::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        ])
        .unwrap();
        let body = ConvexBody::MatrixRange { tuple: t };
        assert_abs_diff_eq!(body.margin(&[0.3, 0.4]), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(body.margin(&[1.1, 0.0]), -0.1, epsilon = 1e-14);
    }

    #[test]
    fn graph_body_support_and_margin() {
        let body = ConvexBody::GraphBody {
            profile: GraphProfile::QuadLog { half_width: 0.2 },
        };
        body.validate().unwrap();
        assert!(body.contains(&[0.0, 0.0], 0.0));
        assert!(!body.contains(&[0.1, 0.01], 0.0));
        assert_abs_diff_eq!(body.support(&[0.0, -1.0]), 0.0, epsilon = 1e-15);
        assert!(ConvexBody::GraphBody {
            profile: GraphProfile::QuadLog { half_width: 0.3 }
        }
        .validate()
        .is_err());
    }

    #[test]
    fn body_json_tags() {
        let v = serde_json::to_value(ConvexBody::Kp { p: 1.5 }).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "kp", "p": 1.5}));
        let b: ConvexBody =
            serde_json::from_str(r#"{"kind": "lq_ball", "q": 3, "center": [0, 0], "radius": 1}"#).unwrap();
        assert_eq!(b.dimension(), 2);
    }

    #[test]
    fn grids_are_unit() {
        for g in 1..=4 {
            for c in direction_grid(g) {
                assert_abs_diff_eq!(norm2(&c), 1.0, epsilon = 1e-12);
            }
        }
    }
}
