//! Extreme-point classifiers: subquadratic decay of `F`, simplex-boundedness,
//! isolation and inscribed balls.

use serde::{Deserialize, Serialize};

use super::standard::standard_rotation;
use super::{
    circle_grid, defining_function, direction_grid, dot, grid_spacing, hull_2d, norm2, standard_position, Body,
    ConvexBody, StandardPosition, TriState,
};
use crate::error::{Error, Result};
use crate::numkernel::{column_rank, ComplexMatrix, ToleranceConfig};

/// `F` values below this multiple of the margin resolution are treated as noise.
const NOISE_FACTOR: f64 = 1e3;
/// Relative growth of `rho` over the tail still counted as flat.
const FLAT_TOL: f64 = 1e-9;
/// Allowed ball-boundary violation, in units of the margin resolution.
const BALL_SLACK: f64 = 64.0;
/// Smallest ball-boundary drop sampled; keeps every margin in the normal range.
const MIN_DROP: f64 = 1e-280;
/// Near-tangent angles `2^-1 .. 2^-DYADIC_STEPS`.
const DYADIC_STEPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusGrid {
    pub r0: f64,
    pub steps: usize,
}

impl Default for RadiusGrid {
    fn default() -> Self {
        Self { r0: 0.25, steps: 24 }
    }
}

impl RadiusGrid {
    /// `r0 * 2^-k` for `k = 0..=steps`.
    pub fn radii(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.r0 * 0.5f64.powi(k as i32)).collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.r0.is_finite() && self.r0 > 0.0) || self.steps < 3 {
            return Err(Error::InvalidArgument(format!(
                "degenerate radius grid r0 = {}, steps = {}",
                self.r0, self.steps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyMode {
    Sampled,
    /// Closed-form answer for the origin of `K_p`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoSample {
    pub k: usize,
    pub radius: f64,
    /// `min_u F(r u)`.
    pub min_f: f64,
    /// `min_u F(r u) / r^2`; absent when some `F` fell below the noise floor.
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubquadraticReport {
    pub verdict: TriState,
    pub mode: CertifyMode,
    pub trace: Vec<RhoSample>,
    /// `rho_last / rho_mid` over the retained samples.
    pub growth_ratio: Option<f64>,
    /// Last retained `rho` when the ratio stays bounded.
    pub fitted_constant: Option<f64>,
}

/// Decide whether `F(x) / |x|^2` blows up at the origin.
///
/// Over the retained radii, `yes` needs `rho` nondecreasing over the last
/// half and at least quadrupling from the midpoint; `no` needs the last half
/// to stay within 10% of the midpoint value.
pub fn subquadratic_certify(s: &StandardPosition, grid: &RadiusGrid, mode: CertifyMode) -> Result<SubquadraticReport> {
    grid.validate()?;
    if mode == CertifyMode::Exact {
        let p = s
            .is_kp_origin()
            .ok_or_else(|| Error::InvalidArgument("exact mode is defined only at the origin of K_p".into()))?;
        return Ok(SubquadraticReport {
            verdict: if p < 2.0 { TriState::Yes } else { TriState::No },
            mode,
            trace: Vec::new(),
            growth_ratio: None,
            fitted_constant: None,
        });
    }
    let g = s.dimension();
    let dirs = direction_grid(g - 1);
    let mut trace = Vec::new();
    for (k, r) in grid.radii().into_iter().enumerate() {
        let mut min_f = f64::INFINITY;
        let mut noisy = false;
        for u in &dirs {
            let x: Vec<f64> = u.iter().map(|v| r * v).collect();
            let f = defining_function(s, &x)?;
            let mut pt = x;
            pt.push(f);
            if f <= NOISE_FACTOR * s.margin_resolution(&pt) {
                noisy = true;
            }
            min_f = min_f.min(f);
        }
        trace.push(RhoSample {
            k,
            radius: r,
            min_f,
            rho: (!noisy).then(|| min_f / (r * r)),
        });
    }
    let kept: Vec<f64> = trace.iter().filter_map(|t| t.rho).collect();
    let (verdict, growth_ratio, fitted_constant) = rho_verdict(&kept);
    Ok(SubquadraticReport {
        verdict,
        mode,
        trace,
        growth_ratio,
        fitted_constant,
    })
}

fn rho_verdict(kept: &[f64]) -> (TriState, Option<f64>, Option<f64>) {
    let m = kept.len();
    if m < 4 {
        return (TriState::Inconclusive, None, None);
    }
    let last = m - 1;
    let mid = last - last.div_ceil(2);
    let tail = &kept[mid..];
    let ratio = kept[last] / kept[mid];
    let nondecreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    if nondecreasing && ratio >= 4.0 {
        return (TriState::Yes, Some(ratio), None);
    }
    let peak = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak <= kept[mid] * (1.0 + FLAT_TOL) {
        return (TriState::No, Some(ratio), Some(kept[last]));
    }
    (TriState::Inconclusive, Some(ratio), None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexReport {
    pub verdict: TriState,
    /// Grid directions `c` with `h_K(c) - <c, lambda> <= tol_active`.
    pub active_directions: Vec<Vec<f64>>,
    pub active_rank: usize,
    /// Largest angle between two active directions, in radians.
    pub max_separation: f64,
    pub grid_spacing: f64,
    pub tol_active: f64,
    pub criterion: String,
}

fn check_boundary(body: &dyn Body, lambda: &[f64], tol: f64) -> Result<()> {
    if lambda.len() != body.dimension() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, body lives in R^{}",
            lambda.len(),
            body.dimension()
        )));
    }
    let margin = body.margin(lambda);
    if margin.abs() > tol {
        return Err(Error::NotOnBoundary { margin });
    }
    Ok(())
}

/// Whether `lambda` is a vertex of some polytope containing `K`, decided by
/// whether the normal cone at `lambda` is full-dimensional on the direction grid.
pub fn simplex_bounded(body: &dyn Body, lambda: &[f64], tol_active: f64) -> Result<SimplexReport> {
    check_boundary(body, lambda, 1e-9)?;
    let g = body.dimension();
    let spacing = grid_spacing(g);
    let active: Vec<Vec<f64>> = direction_grid(g)
        .into_iter()
        .filter(|c| body.support(c) - dot(c, lambda) <= tol_active)
        .collect();
    let active_rank = if active.is_empty() {
        0
    } else {
        let m = ComplexMatrix::from_fn(g, active.len(), |i, j| crate::numkernel::c(active[j][i], 0.0));
        column_rank(&m, &ToleranceConfig::default())?.rank
    };
    let mut max_separation = 0.0f64;
    for (i, a) in active.iter().enumerate() {
        for b in &active[i + 1..] {
            max_separation = max_separation.max(dot(a, b).clamp(-1.0, 1.0).acos());
        }
    }
    let verdict = if active_rank < g {
        TriState::No
    } else if g == 1 || max_separation >= 4.0 * spacing {
        TriState::Yes
    } else {
        TriState::Inconclusive
    };
    Ok(SimplexReport {
        verdict,
        active_directions: active,
        active_rank,
        max_separation,
        grid_spacing: spacing,
        tol_active,
        criterion: "vertex of a containing polytope iff the normal cone is full-dimensional".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedReport {
    pub verdict: TriState,
    pub reason: String,
    /// Distance to the closest other extreme point found by sampling the descriptor.
    pub nearest_sampled_extreme: Option<f64>,
}

/// Whether `lambda` is an isolated point of the closure of the extreme points.
pub fn isolated_extreme(body: &ConvexBody, lambda: &[f64]) -> Result<IsolatedReport> {
    check_boundary(body, lambda, 1e-9)?;
    let report = |verdict, reason: &str, nearest| IsolatedReport {
        verdict,
        reason: reason.into(),
        nearest_sampled_extreme: nearest,
    };
    match body {
        ConvexBody::Polytope { vertices } if lambda.len() == 2 => {
            let hull = hull_2d(vertices);
            let scale = 1e-12 * (1.0 + norm2(lambda));
            if hull.iter().any(|v| (v[0] - lambda[0]).hypot(v[1] - lambda[1]) <= scale) {
                let nearest = hull
                    .iter()
                    .map(|v| (v[0] - lambda[0]).hypot(v[1] - lambda[1]))
                    .filter(|&d| d > scale)
                    .fold(f64::INFINITY, f64::min);
                Ok(report(TriState::Yes, "polytope vertex", Some(nearest)))
            } else {
                Err(Error::NotExtreme)
            }
        }
        ConvexBody::Polytope { .. } => Ok(report(
            TriState::Inconclusive,
            "vertex enumeration is implemented in the plane only",
            None,
        )),
        ConvexBody::Disk { radius, .. } => Ok(report(
            TriState::No,
            "every boundary point of a ball is extreme",
            Some(radius * 1e-9),
        )),
        ConvexBody::LqBall { q, center, radius } => {
            if *q > 1.0 {
                return Ok(report(
                    TriState::No,
                    "strictly convex body: every boundary point is extreme",
                    Some(radius * 1e-9),
                ));
            }
            let d = super::sub(lambda, center);
            let on_axis = d.iter().filter(|x| x.abs() > 1e-12 * radius).count() == 1;
            if on_axis {
                Ok(report(
                    TriState::Yes,
                    "vertex of the cross-polytope",
                    Some(radius * 2f64.sqrt()),
                ))
            } else {
                Err(Error::NotExtreme)
            }
        }
        ConvexBody::Kp { p } => {
            let (x, y) = (lambda[0], lambda[1]);
            if (y - x.abs().powf(*p)).abs() > 1e-9 {
                return Err(Error::NotExtreme);
            }
            let nearest = (10..=40)
                .flat_map(|k| [x + 0.5f64.powi(k), x - 0.5f64.powi(k)])
                .filter(|t| t.abs() <= 1.0)
                .map(|t| (t - x).hypot(t.abs().powf(*p) - y))
                .fold(f64::INFINITY, f64::min);
            Ok(report(
                TriState::No,
                "extreme points form the graph |x|^p and accumulate at every point",
                Some(nearest),
            ))
        }
        ConvexBody::GraphBody { profile } => {
            if (lambda[1] - profile.eval(lambda[0])).abs() > 1e-9 {
                return Err(Error::NotExtreme);
            }
            Ok(report(
                TriState::No,
                "extreme points form the lower graph and accumulate at every point",
                None,
            ))
        }
        ConvexBody::MatrixRange { .. } => Ok(report(
            TriState::Inconclusive,
            "no extreme-point descriptor for matrix ranges",
            None,
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCertificate {
    pub center: Vec<f64>,
    pub radius: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallTrial {
    pub radius: f64,
    pub worst_margin: f64,
    pub passed: bool,
    /// Clearance `margin / drop` still falling by a non-shrinking step at the
    /// deepest resolvable near-tangent samples: a violation below precision.
    pub tail_drift: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    /// `yes`: a ball inside `K` touches `lambda`, so `lambda` is excluded.
    /// `inconclusive`: a ball passes every sample but its clearance keeps
    /// shrinking towards the tangent point below the resolvable scale.
    pub verdict: TriState,
    pub certificate: Option<BallCertificate>,
    pub trials: Vec<BallTrial>,
    pub multiple_supporting_directions: bool,
}

/// Look for a Euclidean ball inside `K` that contains `lambda` on its boundary,
/// with centre `lambda - r n` for the outward normal `n`.
pub fn inscribed_ball_excluder(body: &dyn Body, lambda: &[f64], normal: &[f64], radii: &[f64]) -> Result<BallReport> {
    check_boundary(body, lambda, 1e-9)?;
    let g = body.dimension();
    let len = norm2(normal);
    if normal.len() != g || len.is_nan() || len <= 0.0 {
        return Err(Error::InvalidArgument("normal must be a nonzero vector in R^g".into()));
    }
    let n: Vec<f64> = normal.iter().map(|x| x / len).collect();
    let gap = body.support(&n) - dot(&n, lambda);
    if gap.abs() > 1e-9 {
        return Err(Error::NotSupporting { gap });
    }

    let spacing = grid_spacing(g);
    let other_active = direction_grid(g).into_iter().any(|c| {
        let angle = dot(&c, &n).clamp(-1.0, 1.0).acos();
        angle > 1.5 * spacing && body.support(&c) - dot(&c, lambda) <= 1e-12
    });
    if other_active {
        return Ok(BallReport {
            verdict: TriState::No,
            certificate: None,
            trials: Vec::new(),
            multiple_supporting_directions: true,
        });
    }

    let rotation = standard_rotation(&n);
    let tangents: Vec<Vec<f64>> = if g == 2 {
        vec![rotation[0].clone(), rotation[0].iter().map(|x| -x).collect()]
    } else {
        circle_grid(16)
            .iter()
            .map(|w| {
                let mut t = vec![0.0; g];
                for (row, wk) in rotation[..2].iter().zip(w) {
                    t.iter_mut().zip(row).for_each(|(ti, ri)| *ti += wk * ri);
                }
                t
            })
            .collect()
    };
    // Near-tangent violations for |x|^p with p close to 2 live at |x| < (2r)^(1/(2-p)),
    // so the dyadic sweep runs until the normal drop leaves the normal range.
    let mut angles: Vec<f64> = (1..=DYADIC_STEPS as i32).map(|k| 0.5f64.powi(k)).collect();
    angles.extend((1..=360).map(|j| std::f64::consts::PI * j as f64 / 360.0));

    let mut trials = Vec::new();
    for &r in radii {
        let mut worst = f64::INFINITY;
        let mut passed = true;
        let mut tail_drift = false;
        for t in &tangents {
            // (clearance, noise) along the dyadic sweep, deepest last.
            let mut tail: Vec<(f64, f64)> = Vec::new();
            for (idx, &phi) in angles.iter().enumerate() {
                let drop = 2.0 * r * (phi / 2.0).sin().powi(2);
                if drop < MIN_DROP {
                    continue;
                }
                let side = r * phi.sin();
                let pt: Vec<f64> = (0..g).map(|i| lambda[i] - drop * n[i] + side * t[i]).collect();
                let m = body.margin(&pt);
                let res = body.margin_resolution(&pt);
                worst = worst.min(m);
                if m < -BALL_SLACK * res {
                    passed = false;
                }
                let noise = BALL_SLACK * res / drop;
                if idx < DYADIC_STEPS && noise <= 1e-3 {
                    tail.push((m / drop, noise));
                }
            }
            if let [.., (c0, n0), (c1, n1), (c2, n2)] = tail[..] {
                let (d1, d2) = (c0 - c1, c1 - c2);
                tail_drift |= d2 > 2.0 * (n1 + n2) && d2 > 0.5 * d1 && d1 > 2.0 * (n0 + n1);
            }
        }
        trials.push(BallTrial {
            radius: r,
            worst_margin: worst,
            passed,
            tail_drift,
        });
        if passed && tail_drift {
            return Ok(BallReport {
                verdict: TriState::Inconclusive,
                certificate: None,
                trials,
                multiple_supporting_directions: false,
            });
        }
        if passed {
            return Ok(BallReport {
                verdict: TriState::Yes,
                certificate: Some(BallCertificate {
                    center: (0..g).map(|i| lambda[i] - r * n[i]).collect(),
                    radius: r,
                    worst_margin: worst,
                }),
                trials,
                multiple_supporting_directions: false,
            });
        }
    }
    Ok(BallReport {
        verdict: TriState::No,
        certificate: None,
        trials,
        multiple_supporting_directions: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifySettings {
    pub radius_grid: RadiusGrid,
    pub tol_active: f64,
    pub boundary_tol: f64,
    pub mode: CertifyMode,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        Self {
            radius_grid: RadiusGrid::default(),
            tol_active: 1e-12,
            boundary_tol: 1e-9,
            mode: CertifyMode::Sampled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremePointReport {
    pub point: Vec<f64>,
    pub supporting_direction: Vec<f64>,
    pub isolated: TriState,
    pub simplex_bounded: TriState,
    pub inscribed_ball_excluded: TriState,
    pub subquadratic_certified: TriState,
    pub isolated_evidence: IsolatedReport,
    pub simplex_evidence: SimplexReport,
    pub ball_evidence: BallReport,
    pub subquadratic_evidence: SubquadraticReport,
}

impl ExtremePointReport {
    /// `isolated => simplex-bounded` and not both `subquadratic` and `ball`.
    pub fn chain_consistent(&self) -> bool {
        let iso_ok = self.isolated != TriState::Yes || self.simplex_bounded == TriState::Yes;
        let pair_ok = !(self.subquadratic_certified == TriState::Yes && self.inscribed_ball_excluded == TriState::Yes);
        iso_ok && pair_ok
    }
}

/// Run every classifier at `lambda` with the given outward normal.
pub fn classify_extreme_point(
    body: &ConvexBody,
    lambda: &[f64],
    normal: &[f64],
    settings: &ClassifySettings,
) -> Result<ExtremePointReport> {
    let s = standard_position(body, lambda, normal, settings.boundary_tol)?;
    let sub = subquadratic_certify(&s, &settings.radius_grid, settings.mode)?;
    let simplex = simplex_bounded(body, lambda, settings.tol_active)?;
    let isolated = isolated_extreme(body, lambda)?;
    let ball = inscribed_ball_excluder(body, lambda, normal, &settings.radius_grid.radii())?;
    Ok(ExtremePointReport {
        point: lambda.to_vec(),
        supporting_direction: s.supporting_direction.clone(),
        isolated: isolated.verdict,
        simplex_bounded: simplex.verdict,
        inscribed_ball_excluded: ball.verdict,
        subquadratic_certified: sub.verdict,
        isolated_evidence: isolated,
        simplex_evidence: simplex,
        ball_evidence: ball,
        subquadratic_evidence: sub,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexbody::GraphProfile;

    fn kp_std(p: f64) -> StandardPosition {
        standard_position(&ConvexBody::Kp { p }, &[0.0, 0.0], &[0.0, -1.0], 1e-9).unwrap()
    }

    fn square() -> ConvexBody {
        ConvexBody::Polytope {
            vertices: vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        }
    }

    #[test]
    fn subquadratic_kp_examples() {
        let grid = RadiusGrid::default();
        let yes = subquadratic_certify(&kp_std(1.5), &grid, CertifyMode::Sampled).unwrap();
        assert_eq!(yes.verdict, TriState::Yes);
        let rhos: Vec<f64> = yes.trace.iter().map(|t| t.rho.unwrap()).collect();
        assert!(rhos.windows(2).all(|w| w[1] > w[0]));
        let no = subquadratic_certify(&kp_std(2.0), &grid, CertifyMode::Sampled).unwrap();
        assert_eq!(no.verdict, TriState::No);
        assert!((no.fitted_constant.unwrap() - 1.0).abs() < 1e-12);
        let exact = subquadratic_certify(&kp_std(1.5), &grid, CertifyMode::Exact).unwrap();
        assert_eq!(exact.verdict, TriState::Yes);
    }

    #[test]
    fn subquadratic_tangent_disk_constant() {
        let r = 0.5;
        let body = ConvexBody::Disk {
            center: vec![0.0, r],
            radius: r,
        };
        let s = standard_position(&body, &[0.0, 0.0], &[0.0, -1.0], 1e-9).unwrap();
        let rep = subquadratic_certify(&s, &RadiusGrid::default(), CertifyMode::Sampled).unwrap();
        assert_eq!(rep.verdict, TriState::No);
        assert!((rep.fitted_constant.unwrap() - 1.0 / (2.0 * r)).abs() < 1e-4);
        assert!(rep.trace.iter().any(|t| t.rho.is_none()));
    }

    #[test]
    fn subquadratic_quadlog_is_inconclusive() {
        let body = ConvexBody::GraphBody {
            profile: GraphProfile::QuadLog { half_width: 0.2 },
        };
        let s = standard_position(&body, &[0.0, 0.0], &[0.0, -1.0], 1e-9).unwrap();
        let grid = RadiusGrid { r0: 0.1, steps: 24 };
        let rep = subquadratic_certify(&s, &grid, CertifyMode::Sampled).unwrap();
        assert_eq!(rep.verdict, TriState::Inconclusive);
    }

    #[test]
    fn exact_mode_needs_kp_origin() {
        let s = standard_position(&ConvexBody::unit_disk(), &[1.0, 0.0], &[1.0, 0.0], 1e-9).unwrap();
        assert!(subquadratic_certify(&s, &RadiusGrid::default(), CertifyMode::Exact).is_err());
        assert!(subquadratic_certify(&s, &RadiusGrid { r0: 0.25, steps: 1 }, CertifyMode::Sampled).is_err());
    }

    #[test]
    fn simplex_bounded_examples() {
        let sq = simplex_bounded(&square(), &[1.0, 1.0], 1e-12).unwrap();
        assert_eq!(sq.verdict, TriState::Yes);
        assert!(sq.active_directions.iter().any(|c| (c[0] - 1.0).abs() < 1e-12));
        assert!(sq.active_directions.iter().any(|c| (c[1] - 1.0).abs() < 1e-12));

        let kp = simplex_bounded(&ConvexBody::Kp { p: 1.5 }, &[0.0, 0.0], 1e-12).unwrap();
        assert_eq!(kp.verdict, TriState::No);
        assert_eq!(kp.active_directions.len(), 1);
        assert!((kp.active_directions[0][1] + 1.0).abs() < 1e-12);

        let disk = simplex_bounded(&ConvexBody::unit_disk(), &[0.0, 1.0], 1e-12).unwrap();
        assert_eq!(disk.verdict, TriState::No);

        assert!(matches!(
            simplex_bounded(&square(), &[0.0, 0.0], 1e-12),
            Err(Error::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn isolated_examples() {
        assert_eq!(
            isolated_extreme(&square(), &[1.0, -1.0]).unwrap().verdict,
            TriState::Yes
        );
        assert_eq!(isolated_extreme(&square(), &[1.0, 0.0]), Err(Error::NotExtreme));
        let kp = isolated_extreme(&ConvexBody::Kp { p: 1.5 }, &[0.0, 0.0]).unwrap();
        assert_eq!(kp.verdict, TriState::No);
        assert!(kp.nearest_sampled_extreme.unwrap() < 1e-9);
        assert_eq!(
            isolated_extreme(&ConvexBody::unit_disk(), &[0.6, 0.8]).unwrap().verdict,
            TriState::No
        );
    }

    #[test]
    fn ball_examples() {
        let radii = RadiusGrid::default().radii();
        let disk = ConvexBody::unit_disk();
        let rep = inscribed_ball_excluder(&disk, &[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.5]).unwrap();
        let cert = rep.certificate.unwrap();
        assert_eq!(cert.radius, 1.0);
        assert!(norm2(&cert.center) < 1e-15);

        let k2 = inscribed_ball_excluder(&ConvexBody::Kp { p: 2.0 }, &[0.0, 0.0], &[0.0, -1.0], &radii).unwrap();
        assert_eq!(k2.verdict, TriState::Yes);
        assert_eq!(k2.certificate.unwrap().radius, 0.25);

        let k15 = inscribed_ball_excluder(&ConvexBody::Kp { p: 1.5 }, &[0.0, 0.0], &[0.0, -1.0], &radii).unwrap();
        assert_eq!(k15.verdict, TriState::No);
        assert_eq!(k15.trials.len(), radii.len());

        let corner = inscribed_ball_excluder(&square(), &[1.0, 1.0], &[1.0, 1.0], &radii).unwrap();
        assert!(corner.multiple_supporting_directions);
        assert_eq!(corner.verdict, TriState::No);
    }

    #[test]
    fn ball_hidden_below_precision_is_inconclusive() {
        let radii = RadiusGrid { r0: 0.1, steps: 24 }.radii();
        let quadlog = ConvexBody::GraphBody {
            profile: GraphProfile::QuadLog { half_width: 0.2 },
        };
        for body in [quadlog, ConvexBody::Kp { p: 1.99 }, ConvexBody::Kp { p: 1.999 }] {
            let rep = inscribed_ball_excluder(&body, &[0.0, 0.0], &[0.0, -1.0], &radii).unwrap();
            assert_eq!(rep.verdict, TriState::Inconclusive, "{body:?}");
            assert!(rep.certificate.is_none());
            assert!(rep.trials.last().unwrap().tail_drift);
        }
        for p in [2.0, 2.5, 3.0] {
            let rep = inscribed_ball_excluder(&ConvexBody::Kp { p }, &[0.0, 0.0], &[0.0, -1.0], &radii).unwrap();
            assert_eq!(rep.verdict, TriState::Yes);
            assert!(!rep.trials.iter().any(|t| t.tail_drift));
        }
    }

    #[test]
    fn slowly_growing_rho_is_not_a_no() {
        let grid = RadiusGrid { r0: 0.1, steps: 24 };
        let rep = subquadratic_certify(&kp_std(1.99), &grid, CertifyMode::Sampled).unwrap();
        assert_eq!(rep.verdict, TriState::Inconclusive);
    }

    #[test]
    fn classify_chain_holds() {
        for (body, pt, n) in [
            (ConvexBody::Kp { p: 1.5 }, vec![0.0, 0.0], vec![0.0, -1.0]),
            (ConvexBody::Kp { p: 2.5 }, vec![0.0, 0.0], vec![0.0, -1.0]),
            (ConvexBody::unit_disk(), vec![0.0, -1.0], vec![0.0, -1.0]),
        ] {
            let rep = classify_extreme_point(&body, &pt, &n, &ClassifySettings::default()).unwrap();
            assert!(rep.chain_consistent());
        }
    }
}
