//! Level-one matrix ranges `W_1(A)`, `W^max(K)` membership, the paraboloid
//! certificate at exposed points and the 2x2 dilation search over `K`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::convexbody::{direction_grid, grid_spacing, Body, StandardPosition};
use crate::error::{Error, HypothesisFailure, Result};
use crate::numkernel::{
    c, hermitian_eig, identity, op_norm, real_matrix, top_eigenpair, zeros, ComplexMatrix, ToleranceConfig, C64,
};
use crate::pencil::MatrixTuple;
use crate::random;

/// `sum c_j A_j`.
fn combination(entries: &[ComplexMatrix], coeffs: &[f64]) -> ComplexMatrix {
    let n = entries[0].nrows();
    let mut m = zeros(n, n);
    for (a, &cj) in entries.iter().zip(coeffs) {
        m += a.scale(cj);
    }
    m
}

/// `lambda_max(sum c_j A_j)` with a closed form for 2x2 blocks.
pub fn support_value(entries: &[ComplexMatrix], coeffs: &[f64]) -> f64 {
    let m = combination(entries, coeffs);
    if m.nrows() == 1 {
        return m[(0, 0)].re;
    }
    if m.nrows() == 2 {
        let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
        let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
        return 0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    }
    hermitian_eig(&m).map(|e| e.max()).unwrap_or(f64::NAN)
}

/// `(<v, A_1 v>, ..., <v, A_g v>)`.
pub fn state_image(entries: &[ComplexMatrix], v: &DVector<C64>) -> Vec<f64> {
    entries.iter().map(|a| (v.adjoint() * a * v)[(0, 0)].re).collect()
}

/// `(tr(rho A_1), ..., tr(rho A_g))`.
pub fn density_image(entries: &[ComplexMatrix], rho: &ComplexMatrix) -> Vec<f64> {
    entries.iter().map(|a| (rho * a).trace().re).collect()
}

fn require_selfadjoint(a: &MatrixTuple) -> Result<()> {
    if a.is_empty() || a.sa_mask().iter().any(|&s| !s) {
        return Err(Error::InvalidArgument("expected a nonempty self-adjoint tuple".into()));
    }
    Ok(())
}

fn unit(c: &[f64]) -> Result<Vec<f64>> {
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    Ok(c.iter().map(|x| x / n).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub value: f64,
    #[serde(with = "crate::json::matrix")]
    pub eigenvector: ComplexMatrix,
    /// Image of the eigenvector state: a point of `W_1(A)` attaining the support.
    pub point: Vec<f64>,
}

/// Support function of `W_1(A)` in direction `c` (normalized internally).
pub fn matrix_range_support(a: &MatrixTuple, c: &[f64]) -> Result<SupportPoint> {
    require_selfadjoint(a)?;
    if c.len() != a.len() {
        return Err(Error::Dimension(format!(
            "direction has {} coordinates, tuple has {}",
            c.len(),
            a.len()
        )));
    }
    let u = unit(c)?;
    let (value, v) = top_eigenpair(&combination(a.entries(), &u))?;
    let point = state_image(a.entries(), &v);
    Ok(SupportPoint {
        value,
        eigenvector: ComplexMatrix::from_column_slice(v.len(), 1, v.as_slice()),
        point,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMembership {
    pub member: bool,
    pub margin: f64,
    pub grid_size: usize,
    /// Largest margin error the grid spacing can hide.
    pub grid_error: f64,
    pub boundary_uncertain: bool,
}

/// Membership in `W_1(A)` by the support-function halfspaces on `grid`.
pub fn w1_membership(a: &MatrixTuple, lambda: &[f64], grid: &[Vec<f64>], tol: f64) -> Result<GridMembership> {
    require_selfadjoint(a)?;
    if lambda.len() != a.len() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, tuple has {}",
            lambda.len(),
            a.len()
        )));
    }
    let margin = grid
        .iter()
        .map(|c| support_value(a.entries(), c) - crate::convexbody::dot(c, lambda))
        .fold(f64::INFINITY, f64::min);
    let scale: f64 = a.entries().iter().map(op_norm).sum::<f64>() + norm(lambda);
    let grid_error = grid_spacing(a.len()).powi(2) * scale;
    Ok(GridMembership {
        member: margin >= -tol,
        margin,
        grid_size: grid.len(),
        grid_error,
        boundary_uncertain: margin.abs() <= grid_error.max(tol),
    })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmaxMembership {
    pub member: bool,
    /// `min_c (h_K(c) - lambda_max(sum c_j X_j))` over the grid; the
    /// containment margin at level one.
    pub margin: f64,
    pub grid_size: usize,
    pub grid_error: f64,
    pub boundary_uncertain: bool,
    /// Smallest containment margin over the sampled vector-state images.
    pub state_margin: f64,
    /// A sampled state image lying outside `K`, if one was found.
    pub violating_image: Option<Vec<f64>>,
}

/// Membership of `X` in `W^max(K)`: every halfspace `<c, x> <= h_K(c)` must
/// give `sum c_j X_j <= h_K(c) I`. Vector states concentrated near each basis
/// vector (`sqrt(1 - t^2) e_i + t w e_j`, `t = 2^-k` down to `2^-100`) and
/// random states are also mapped into `K`; an image outside `K` refutes membership.
pub fn wmax_membership(k: &dyn Body, x: &MatrixTuple, grid: &[Vec<f64>], tol: f64) -> Result<WmaxMembership> {
    require_selfadjoint(x)?;
    let g = k.dimension();
    if x.len() != g {
        return Err(Error::Dimension(format!(
            "tuple has {} entries, body lives in R^{g}",
            x.len()
        )));
    }
    let n = x.level();
    if n == 1 {
        let pt: Vec<f64> = x.entries().iter().map(|m| m[(0, 0)].re).collect();
        let margin = k.margin(&pt);
        let res = k.margin_resolution(&pt);
        return Ok(WmaxMembership {
            member: margin >= -tol,
            margin,
            grid_size: 0,
            grid_error: 0.0,
            boundary_uncertain: margin.abs() <= tol.max(res),
            state_margin: margin,
            violating_image: (margin < -tol).then_some(pt),
        });
    }
    let margin = grid
        .iter()
        .map(|c| k.support(c) - support_value(x.entries(), c))
        .fold(f64::INFINITY, f64::min);
    let scale: f64 = x.entries().iter().map(op_norm).sum();
    let grid_error = grid_spacing(g) * scale;

    let mut state_margin = f64::INFINITY;
    let mut violating_image = None;
    for v in probe_states(n) {
        let img = state_image(x.entries(), &v);
        let m = k.margin(&img);
        state_margin = state_margin.min(m);
        if violating_image.is_none() && m < -tol.min(64.0 * k.margin_resolution(&img)) {
            violating_image = Some(img);
        }
    }
    let member = margin >= -tol && violating_image.is_none();
    Ok(WmaxMembership {
        member,
        margin,
        grid_size: grid.len(),
        grid_error,
        boundary_uncertain: member && margin.abs() <= grid_error,
        state_margin,
        violating_image,
    })
}

fn probe_states(n: usize) -> Vec<DVector<C64>> {
    let phases = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = DVector::from_element(n, c(0.0, 0.0));
        e[i] = c(1.0, 0.0);
        out.push(e);
        for j in (0..n).filter(|&j| j != i) {
            for &ph in &phases {
                for k in 1..=100 {
                    let t = 0.5f64.powi(k);
                    let mut v = DVector::from_element(n, c(0.0, 0.0));
                    v[i] = c((1.0 - t * t).sqrt(), 0.0);
                    v[j] = ph * t;
                    out.push(v);
                }
            }
        }
    }
    let mut rng = random::seeded(0x57a7e);
    out.extend((0..2000).map(|_| random::unit_vector(&mut rng, n)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaboloidCertificate {
    pub exposed_point: Vec<f64>,
    /// Outward normal of the separating hyperplane.
    pub direction: Vec<f64>,
    /// Rows of the orthogonal change of coordinates into standard position.
    pub rotation: Vec<Vec<f64>>,
    pub kernel_dim: usize,
    #[serde(with = "crate::json::matrices")]
    pub b_blocks: Vec<ComplexMatrix>,
    #[serde(with = "crate::json::matrices")]
    pub c_blocks: Vec<ComplexMatrix>,
    #[serde(with = "crate::json::matrix")]
    pub d_block: ComplexMatrix,
    /// `lambda_min(D)`.
    pub epsilon: f64,
    pub m_inverse: f64,
    pub m: f64,
    pub samples: usize,
    /// `min (x_g - M sum_{i<g} x_i^2)` over the sampled vector states.
    pub worst_slack: f64,
    pub verified: bool,
}

/// Paraboloid `x_g >= M sum x_i^2` containing `W_1(A)` around an exposed point.
///
/// After recoordinatizing, the last coordinate `A_g` is rotated to `0 ⊕ D`;
/// every other coordinate must vanish on the kernel block, leaving
/// `A_i = [[0, B_i], [B_i*, C_i]]`, and `M^-1 = sum (2||B_i|| + ||C_i||)^2 / eps`.
pub fn paraboloid_bound(
    a: &MatrixTuple,
    lambda: &[f64],
    direction: &[f64],
    tol: &ToleranceConfig,
    seed: u64,
) -> Result<ParaboloidCertificate> {
    require_selfadjoint(a)?;
    let g = a.len();
    if g < 2 || lambda.len() != g || direction.len() != g {
        return Err(Error::Dimension(format!(
            "paraboloid bound needs g >= 2 and matching point/direction lengths (g = {g})"
        )));
    }
    let n_out = unit(direction)?;
    let rotation = crate::convexbody::standard_rotation(&n_out);
    let dim = a.level();
    let shifted: Vec<ComplexMatrix> = a
        .entries()
        .iter()
        .zip(lambda)
        .map(|(m, &l)| m - identity(dim).scale(l))
        .collect();
    let std_entries: Vec<ComplexMatrix> = rotation.iter().map(|row| combination(&shifted, row)).collect();
    let scale = std_entries.iter().map(op_norm).fold(1.0, f64::max);

    let last = &std_entries[g - 1];
    let eig = hermitian_eig(last)?;
    let lam_min = eig.min();
    let lam_max = eig.max();
    let zero_cut = tol.psd_tol * scale.max(lam_max);
    if lam_min < -zero_cut {
        return Err(Error::Hypothesis(HypothesisFailure::NotSupported {
            lambda_min: lam_min,
        }));
    }
    if lam_max <= zero_cut {
        return Err(Error::Hypothesis(HypothesisFailure::Degenerate));
    }
    if lam_min > zero_cut {
        return Err(Error::Hypothesis(HypothesisFailure::Definite { lambda_min: lam_min }));
    }
    let kernel_dim = eig.values.iter().filter(|&&v| v <= zero_cut).count();
    let w = &eig.frame;
    let range_dim = dim - kernel_dim;
    let rotated: Vec<ComplexMatrix> = std_entries.iter().map(|m| w.adjoint() * m * w).collect();

    let block_tol = tol.eq_tol * scale;
    let mut b_blocks = Vec::with_capacity(g - 1);
    let mut c_blocks = Vec::with_capacity(g - 1);
    for (i, m) in rotated[..g - 1].iter().enumerate() {
        let p = m.view((0, 0), (kernel_dim, kernel_dim)).into_owned();
        let defect = op_norm(&p);
        if defect > block_tol {
            return Err(Error::Hypothesis(HypothesisFailure::ZeroBlock {
                coordinate: i + 1,
                defect,
            }));
        }
        b_blocks.push(m.view((0, kernel_dim), (kernel_dim, range_dim)).into_owned());
        c_blocks.push(m.view((kernel_dim, kernel_dim), (range_dim, range_dim)).into_owned());
    }
    let d_block = rotated[g - 1]
        .view((kernel_dim, kernel_dim), (range_dim, range_dim))
        .into_owned();
    let epsilon = eig.values[kernel_dim];
    let m_inverse: f64 = b_blocks
        .iter()
        .zip(&c_blocks)
        .map(|(b, cb)| (2.0 * op_norm(b) + op_norm(cb)).powi(2) / epsilon)
        .sum();
    if m_inverse.is_nan() || m_inverse <= 0.0 {
        return Err(Error::Hypothesis(HypothesisFailure::Degenerate));
    }
    let m = 1.0 / m_inverse;

    let samples = 10_000;
    let mut rng = random::seeded(seed);
    let mut worst_slack = f64::INFINITY;
    for _ in 0..samples {
        let v = random::unit_vector(&mut rng, dim);
        let x = state_image(&std_entries, &v);
        let quad: f64 = x[..g - 1].iter().map(|t| t * t).sum();
        worst_slack = worst_slack.min(x[g - 1] - m * quad);
    }
    Ok(ParaboloidCertificate {
        exposed_point: lambda.to_vec(),
        direction: n_out,
        rotation,
        kernel_dim,
        b_blocks,
        c_blocks,
        d_block,
        epsilon,
        m_inverse,
        m,
        samples,
        worst_slack,
        verified: worst_slack >= -1e-9,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchGrid {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
}

impl Default for SearchGrid {
    /// `a = 0.05 k` (10 values), `b = -0.5..0.5` (11), `beta = 0.04 j` (11): 1210 candidates.
    fn default() -> Self {
        Self {
            a: (1..=10).map(|k| 0.05 * k as f64).collect(),
            b: (-5..=5).map(|k| 0.1 * k as f64).collect(),
            beta: (0..=10).map(|j| 0.04 * j as f64).collect(),
        }
    }
}

impl SearchGrid {
    pub fn candidates(&self) -> usize {
        self.a.len() * self.b.len() * self.beta.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationCandidate {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    pub tuple: MatrixTuple,
    pub membership: WmaxMembership,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationSearch {
    pub hit: Option<DilationCandidate>,
    pub candidates_tested: usize,
    pub grid: SearchGrid,
}

/// The 2x2 tuple `X_i = [[0, a], [a, b]]` (every `i < g`), `Y = diag(0, beta)`.
pub fn dilation_ansatz(g: usize, a: f64, b: f64, beta: f64) -> MatrixTuple {
    let mut entries: Vec<ComplexMatrix> = (0..g - 1).map(|_| real_matrix(2, 2, &[0.0, a, a, b])).collect();
    entries.push(real_matrix(2, 2, &[0.0, 0.0, 0.0, beta]));
    MatrixTuple::selfadjoint(entries).expect("real symmetric entries")
}

/// Scan the grid in `(a, b, beta)` order for a nontrivial 2x2 dilation of
/// the origin that stays in `W^max(K)`.
pub fn aep_dilation_search(s: &StandardPosition, grid: &SearchGrid, tol: f64) -> Result<DilationSearch> {
    let g = s.dimension();
    if g < 2 {
        return Err(Error::InvalidArgument("dilation search needs dimension >= 2".into()));
    }
    if grid.a.iter().any(|&a| a <= 0.0) || grid.beta.iter().any(|&b| b < 0.0) {
        return Err(Error::InvalidArgument("grid needs a > 0 and beta >= 0".into()));
    }
    let dirs = direction_grid(g);
    let mut tested = 0;
    for &a in &grid.a {
        for &b in &grid.b {
            for &beta in &grid.beta {
                tested += 1;
                let tuple = dilation_ansatz(g, a, b, beta);
                let membership = wmax_membership(s, &tuple, &dirs, tol)?;
                if membership.member {
                    return Ok(DilationSearch {
                        hit: Some(DilationCandidate {
                            a,
                            b,
                            beta,
                            tuple,
                            membership,
                        }),
                        candidates_tested: tested,
                        grid: grid.clone(),
                    });
                }
            }
        }
    }
    Ok(DilationSearch {
        hit: None,
        candidates_tested: tested,
        grid: grid.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub t: f64,
    pub k: u32,
    /// `|2|a| t sqrt(1 - t^2) + b t^2|^p`.
    pub lhs: f64,
    /// `beta t^2`.
    pub rhs: f64,
    pub margin: f64,
}

/// Find `t = 2^-k` where the vector state `(sqrt(1 - t^2), t)` maps the
/// 2x2 ansatz outside `K_p`.
pub fn refute_dilation_kp(p: f64, a: f64, b: f64, beta: f64) -> Result<Refutation> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (1, 2)")));
    }
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    if beta.is_nan() || beta < 0.0 || !b.is_finite() {
        return Err(Error::InvalidArgument("beta must be >= 0 and b finite".into()));
    }
    const SWEEP: u32 = 50;
    for k in 1..=SWEEP {
        let t = 0.5f64.powi(k as i32);
        let x = 2.0 * a.abs() * t * (1.0 - t * t).sqrt() + b * t * t;
        let lhs = x.abs().powf(p);
        let rhs = beta * t * t;
        if lhs > rhs {
            return Ok(Refutation {
                t,
                k,
                lhs,
                rhs,
                margin: lhs - rhs,
            });
        }
    }
    Err(Error::NoWitnessFound(SWEEP as usize))
}
