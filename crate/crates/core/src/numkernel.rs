//! Tolerance-aware dense complex linear algebra.
//!
//! Every exact condition used elsewhere in the crate ("is PSD", "equals the
//! identity", "is injective") is decided here against one [`ToleranceConfig`]
//! that callers thread through explicitly.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix. Row/column counts live on the matrix itself.
pub type ComplexMatrix = DMatrix<C64>;

const MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative eigenvalue slack for PSD decisions.
    pub psd_tol: f64,
    /// Multiplier on `sigma_max * max(rows, cols) * eps` for rank decisions.
    pub rank_tol_factor: f64,
    /// Hermiticity slack, scaled by `max(1, max|H_ij|)`.
    pub herm_tol: f64,
    /// Frobenius-norm equality slack.
    pub eq_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_tol: 1e-10,
            rank_tol_factor: 100.0,
            herm_tol: 1e-12,
            eq_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.psd_tol, self.rank_tol_factor, self.herm_tol, self.eq_tol];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "tolerances must be strictly positive: {self:?}"
            )))
        }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Real matrix from row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

/// Matrix unit `E_{ij}` (zero-based indices).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { c(0.0, 0.0) })
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `(M - M*) / (2i)`, the hermitian "imaginary part".
pub fn skew_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m - m.adjoint()) * c(0.0, -0.5)
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.norm()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |H_ij - conj(H_ji)|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

pub fn check_hermitian(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<()> {
    ensure_square(m)?;
    let defect = hermiticity_defect(m);
    let allowed = tol.herm_tol * max_abs(m).max(1.0);
    if defect > allowed {
        return Err(Error::NotHermitian { defect, allowed });
    }
    Ok(())
}

fn ensure_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER).ok_or(Error::NoConvergence)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Operator (spectral) norm.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).ok().and_then(|s| s.first().copied()).unwrap_or(0.0)
}

/// Smallest singular value of a square matrix.
pub fn sigma_min(m: &ComplexMatrix) -> f64 {
    singular_values(m).ok().and_then(|s| s.last().copied()).unwrap_or(0.0)
}

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub frame: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `frame * diag(f(values)) * frame*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.frame.clone();
        for j in 0..n {
            let s = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.frame.adjoint()
    }
}

/// Eigendecomposition of the hermitian part `(H + H*)/2` with ascending eigenvalues.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    ensure_square(h)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianEig {
            values: Vec::new(),
            frame: zeros(0, 0),
        });
    }
    let sym = hermitian_part(h);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_ITER).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let frame = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEig { values, frame })
}

/// Largest eigenvalue of the hermitian part together with a unit eigenvector.
pub fn top_eigenpair(h: &ComplexMatrix) -> Result<(f64, nalgebra::DVector<C64>)> {
    let eig = hermitian_eig(h)?;
    let n = eig.values.len();
    if n == 0 {
        return Err(Error::Dimension("empty matrix has no eigenpair".into()));
    }
    Ok((eig.values[n - 1], eig.frame.column(n - 1).into_owned()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    /// `lambda_min(H)`.
    pub margin: f64,
    pub lambda_max: f64,
}

/// `is_psd` iff `lambda_min >= -psd_tol * max(1, lambda_max)`.
pub fn psd_check(h: &ComplexMatrix, tol: &ToleranceConfig) -> Result<PsdCheck> {
    check_hermitian(h, tol)?;
    let eig = hermitian_eig(h)?;
    if eig.values.is_empty() {
        return Ok(PsdCheck {
            is_psd: true,
            margin: 0.0,
            lambda_max: 0.0,
        });
    }
    let margin = eig.min();
    let lambda_max = eig.max();
    Ok(PsdCheck {
        is_psd: margin >= -tol.psd_tol * lambda_max.max(1.0),
        margin,
        lambda_max,
    })
}

/// Hermitian PSD square root; eigenvalues within the PSD slack are clamped to zero.
pub fn psd_sqrt(h: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    check_hermitian(h, tol)?;
    let eig = hermitian_eig(h)?;
    if eig.values.is_empty() {
        return Ok(zeros(0, 0));
    }
    let slack = tol.psd_tol * eig.max().max(1.0);
    if eig.min() < -slack {
        return Err(Error::NotPsd { margin: eig.min() });
    }
    let root = eig.map(|x| x.max(0.0).sqrt());
    Ok(hermitian_part(&root))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Smallest singular value above the cutoff (0 when the rank is 0).
    pub sigma_min_kept: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub cutoff: f64,
}

impl RankInfo {
    /// True when some singular value sits within a factor 10 of the cutoff.
    pub fn near_cutoff(&self) -> bool {
        self.singular_values
            .iter()
            .any(|&s| s >= self.cutoff / 10.0 && s <= self.cutoff * 10.0)
    }
}

/// Numerical rank with the relative cutoff `sigma_max * max(rows, cols) * eps * rank_tol_factor`.
pub fn column_rank(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<RankInfo> {
    let s = singular_values(m)?;
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let cutoff = sigma_max * (m.nrows().max(m.ncols()) as f64) * f64::EPSILON * tol.rank_tol_factor;
    let kept: Vec<f64> = s.iter().copied().filter(|&x| x > cutoff).collect();
    Ok(RankInfo {
        rank: kept.len(),
        sigma_min_kept: kept.last().copied().unwrap_or(0.0),
        singular_values: s,
        cutoff,
    })
}

/// `max ||U* U - I||_F` style check used by tests and generators.
pub fn unitary_defect(u: &ComplexMatrix) -> f64 {
    frobenius(&(u.adjoint() * u - identity(u.ncols())))
}

/// Direct sum `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Assemble a 2x2 block matrix `[[a, b], [c, d]]`.
pub fn block2(a: &ComplexMatrix, b: &ComplexMatrix, c_: &ComplexMatrix, d: &ComplexMatrix) -> ComplexMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    assert_eq!(b.shape(), (r1, c2));
    assert_eq!(c_.shape(), (r2, c1));
    let mut out = zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c_);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn eig_identity() {
        let e = hermitian_eig(&identity(3)).unwrap();
        for v in e.values {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eig_pauli_x() {
        let e = hermitian_eig(&real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_complex_2x2_matches_characteristic_polynomial() {
        // lambda^2 - 4 lambda + 3 = 0
        let h = ComplexMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let e = hermitian_eig(&h).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-13);
        let recon = e.map(|x| x);
        assert!(frobenius(&(recon - h)) < 1e-12);
        assert!(unitary_defect(&e.frame) < 1e-12);
    }

    #[test]
    fn eig_rejects_non_square() {
        assert!(matches!(
            hermitian_eig(&zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn psd_examples() {
        let r = psd_check(&zeros(2, 2), &tol()).unwrap();
        assert!(r.is_psd);
        assert_eq!(r.margin, 0.0);

        let r = psd_check(&diag_real(&[1.0, -0.5]), &tol()).unwrap();
        assert!(!r.is_psd);
        assert_abs_diff_eq!(r.margin, -0.5, epsilon = 1e-15);

        let h = identity(2) - real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]).scale(0.9);
        let r = psd_check(&h, &tol()).unwrap();
        assert!(r.is_psd);
        assert_abs_diff_eq!(r.margin, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(psd_check(&m, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let r = psd_sqrt(&diag_real(&[4.0, 9.0]), &tol()).unwrap();
        assert!(frobenius(&(r - diag_real(&[2.0, 3.0]))) < 1e-13);

        let r = psd_sqrt(&identity(3), &tol()).unwrap();
        assert!(frobenius(&(r - identity(3))) < 1e-13);

        // eigenpairs (1, (1,-1)/sqrt2) and (3, (1,1)/sqrt2)
        let s3 = 3f64.sqrt();
        let expected = real_matrix(
            2,
            2,
            &[(1.0 + s3) / 2.0, (s3 - 1.0) / 2.0, (s3 - 1.0) / 2.0, (1.0 + s3) / 2.0],
        );
        let r = psd_sqrt(&real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]), &tol()).unwrap();
        assert!(frobenius(&(r - expected)) < 1e-13);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_and_rejects_negative() {
        let r = psd_sqrt(&diag_real(&[1.0, -1e-12]), &tol()).unwrap();
        assert_abs_diff_eq!(r[(1, 1)].re, 0.0, epsilon = 1e-15);
        assert!(matches!(
            psd_sqrt(&diag_real(&[1.0, -1e-3]), &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(column_rank(&identity(2), &tol()).unwrap().rank, 2);
        assert_eq!(
            column_rank(&real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]), &tol())
                .unwrap()
                .rank,
            1
        );
        // [E12 | E22]: rows are e2^T and e4^T padded, singular values (1, 1)
        let m = real_matrix(2, 4, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = column_rank(&m, &tol()).unwrap();
        assert_eq!(r.rank, 2);
        assert_abs_diff_eq!(r.sigma_min_kept, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tolerance_validation() {
        assert!(tol().validate().is_ok());
        let bad = ToleranceConfig { eq_tol: 0.0, ..tol() };
        assert!(bad.validate().is_err());
    }
}
