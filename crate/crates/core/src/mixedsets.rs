//! The sets `D(d, g)` of mixed row contractions
//! `(T_1..T_d, X_1..X_g)` with `X_k = X_k*` and `sum T_j T_j* + sum X_k^2 <= I`,
//! their maximal elements, and dilations into maximal ones.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::MatrixWire;
use crate::numkernel::{
    block2, direct_sum, frobenius, hermitian_eig, hermitian_part, identity, op_norm, psd_sqrt, sigma_min,
    singular_values, zeros, ComplexMatrix, ToleranceConfig,
};
use crate::pencil::{MatrixTuple, Membership};

/// Element of `D(d, g)` at some level `n`: the first `d` entries are arbitrary,
/// the last `g` are self-adjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixedWire", into = "MixedWire")]
pub struct MixedTuple {
    d: usize,
    g: usize,
    tuple: MatrixTuple,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedWire {
    pub d: usize,
    pub g: usize,
    pub level: usize,
    pub entries: Vec<MatrixWire>,
    pub sa_mask: Vec<bool>,
}

impl TryFrom<MixedWire> for MixedTuple {
    type Error = Error;

    fn try_from(w: MixedWire) -> Result<Self> {
        let tuple = MatrixTuple::try_from(crate::pencil::TupleWire {
            level: w.level,
            entries: w.entries,
            sa_mask: w.sa_mask,
        })?;
        MixedTuple::from_tuple(w.d, w.g, tuple)
    }
}

impl From<MixedTuple> for MixedWire {
    fn from(t: MixedTuple) -> Self {
        let wire = crate::pencil::TupleWire::from(t.tuple);
        MixedWire {
            d: t.d,
            g: t.g,
            level: wire.level,
            entries: wire.entries,
            sa_mask: wire.sa_mask,
        }
    }
}

impl MixedTuple {
    pub fn new(ts: Vec<ComplexMatrix>, xs: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        let (d, g) = (ts.len(), xs.len());
        if d + g == 0 {
            return Err(Error::InvalidArgument("D(d, g) needs d + g >= 1".into()));
        }
        let mut mask = vec![false; d];
        mask.extend(std::iter::repeat_n(true, g));
        let mut entries = ts;
        entries.extend(xs.into_iter().map(|x| hermitian_part(&x)));
        let tuple = MatrixTuple::new(entries, mask, tol)?;
        Ok(Self { d, g, tuple })
    }

    pub fn from_tuple(d: usize, g: usize, tuple: MatrixTuple) -> Result<Self> {
        if d + g == 0 || tuple.len() != d + g {
            return Err(Error::Dimension(format!(
                "tuple has {} entries, expected d + g = {}",
                tuple.len(),
                d + g
            )));
        }
        let expected: Vec<bool> = (0..d + g).map(|k| k >= d).collect();
        if tuple.sa_mask() != expected.as_slice() {
            return Err(Error::Dimension(
                "sa_mask must be d false flags followed by g true flags".into(),
            ));
        }
        Ok(Self { d, g, tuple })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn level(&self) -> usize {
        self.tuple.level()
    }

    pub fn ts(&self) -> &[ComplexMatrix] {
        &self.tuple.entries()[..self.d]
    }

    pub fn xs(&self) -> &[ComplexMatrix] {
        &self.tuple.entries()[self.d..]
    }

    pub fn tuple(&self) -> &MatrixTuple {
        &self.tuple
    }

    pub fn entries(&self) -> &[ComplexMatrix] {
        self.tuple.entries()
    }

    /// `sum T_j T_j* + sum X_k^2`.
    pub fn sum_square(&self) -> ComplexMatrix {
        let n = self.level();
        let mut s = zeros(n, n);
        for t in self.ts() {
            s += t * t.adjoint();
        }
        for x in self.xs() {
            s += x * x;
        }
        hermitian_part(&s)
    }

    /// `[T_1 ... T_d]`, an `n x dn` matrix.
    pub fn block_row(&self) -> ComplexMatrix {
        block_row(self.ts())
    }

    /// Every entry multiplied by `s`.
    pub fn scaled(&self, s: f64) -> MixedTuple {
        let entries = self.entries().iter().map(|m| m.scale(s)).collect();
        let tuple = MatrixTuple::new(entries, self.tuple.sa_mask().to_vec(), &ToleranceConfig::default())
            .expect("scaling preserves shape and hermiticity");
        MixedTuple {
            d: self.d,
            g: self.g,
            tuple,
        }
    }

    /// Top-left `n x n` corner of every entry.
    pub fn compress_top_left(&self, n: usize) -> MixedTuple {
        let entries = self
            .entries()
            .iter()
            .map(|m| m.view((0, 0), (n, n)).into_owned())
            .collect();
        let tuple = MatrixTuple::new(entries, self.tuple.sa_mask().to_vec(), &ToleranceConfig::default())
            .expect("corner of a hermitian matrix is hermitian");
        MixedTuple {
            d: self.d,
            g: self.g,
            tuple,
        }
    }

    /// Largest operator-norm difference between corresponding entries.
    pub fn distance(&self, other: &MixedTuple) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| op_norm(&(a - b)))
            .fold(0.0, f64::max)
    }
}

fn block_row(ts: &[ComplexMatrix]) -> ComplexMatrix {
    let n = ts.first().map(|t| t.nrows()).unwrap_or(0);
    let mut m = zeros(n, n * ts.len());
    for (i, t) in ts.iter().enumerate() {
        m.view_mut((0, i * n), (n, n)).copy_from(t);
    }
    m
}

/// `margin = lambda_min(I - sum-square)`; member iff `margin >= -psd_tol`.
pub fn mixed_member(t: &MixedTuple, tol: &ToleranceConfig) -> Result<Membership> {
    let n = t.level();
    let eig = hermitian_eig(&(identity(n) - t.sum_square()))?;
    let margin = eig.min();
    Ok(Membership {
        member: margin >= -tol.psd_tol,
        margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTest {
    /// `sum T_i W_i = 0` forces every `W_i = 0`.
    pub trivial: bool,
    /// Smallest singular value of the block row counted over all `dn` columns.
    pub sigma_min: f64,
    pub rank: usize,
    pub columns: usize,
    /// Some singular value sits within a factor 10 of the rank cutoff.
    pub near_cutoff: bool,
}

/// Full-column-rank test of the block row `[T_1 ... T_d]`.
pub fn trivial_kernel_test(ts: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<KernelTest> {
    let n = ts
        .first()
        .map(|t| t.nrows())
        .ok_or_else(|| Error::InvalidArgument("trivial_kernel_test needs d >= 1".into()))?;
    for (i, t) in ts.iter().enumerate() {
        if t.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "T_{} is {}x{}, expected {n}x{n}",
                i + 1,
                t.nrows(),
                t.ncols()
            )));
        }
    }
    let m = block_row(ts);
    let columns = m.ncols();
    let info = crate::numkernel::column_rank(&m, tol)?;
    let sigma_min = if columns > info.singular_values.len() {
        0.0
    } else {
        info.singular_values.last().copied().unwrap_or(0.0)
    };
    Ok(KernelTest {
        trivial: info.rank == columns,
        sigma_min,
        rank: info.rank,
        columns,
        near_cutoff: info.near_cutoff(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailedCondition {
    SumSquare,
    InjectivityOrRange,
}

/// Nontrivial dilation of a non-maximal element, one level up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationWitness {
    pub dilated: MixedTuple,
    /// Largest operator norm of an off-diagonal block.
    pub nontriviality: f64,
    pub failed_condition: FailedCondition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionMargins {
    /// `||I - sum-square||_F`.
    pub eq_margin: f64,
    pub injectivity_sigma: Vec<f64>,
    pub blockrow_rank_deficit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalityVerdict {
    pub is_maximal: bool,
    /// A condition margin lies within a factor 10 of its tolerance, or the
    /// witness route disagreed with the condition check.
    pub boundary_uncertain: bool,
    pub condition_margins: ConditionMargins,
    pub witness: Option<DilationWitness>,
}

/// Classify a member of `D(d, g)`, `d >= 1`, as maximal or not.
///
/// Maximal iff the sum-square equals `I` and the block row `[T_1 ... T_d]` is
/// injective; otherwise the verdict carries a witness dilation.
pub fn is_maximal(t: &MixedTuple, tol: &ToleranceConfig) -> Result<MaximalityVerdict> {
    if t.d() == 0 {
        return Err(Error::InvalidArgument("maximality classifier needs d >= 1".into()));
    }
    let mem = mixed_member(t, tol)?;
    if !mem.member {
        return Err(Error::NotMember {
            d: t.d(),
            g: t.g(),
            margin: mem.margin,
        });
    }
    let n = t.level();
    let eq_margin = frobenius(&(identity(n) - t.sum_square()));
    let kernel = trivial_kernel_test(t.ts(), tol)?;
    let injectivity_sigma = t.ts().iter().map(sigma_min).collect();
    let margins = ConditionMargins {
        eq_margin,
        injectivity_sigma,
        blockrow_rank_deficit: kernel.columns - kernel.rank,
    };
    let eq_uncertain = eq_margin >= tol.eq_tol / 10.0 && eq_margin <= tol.eq_tol * 10.0;
    let mut boundary_uncertain = eq_uncertain || kernel.near_cutoff;
    let conditions_met = eq_margin <= tol.eq_tol && kernel.trivial;
    let witness = if conditions_met {
        None
    } else {
        match witness_dilation(t, tol) {
            Ok(w) => Some(w),
            Err(Error::AlreadyMaximal) => {
                boundary_uncertain = true;
                None
            }
            Err(e) => return Err(e),
        }
    };
    Ok(MaximalityVerdict {
        is_maximal: conditions_met,
        boundary_uncertain,
        condition_margins: margins,
        witness,
    })
}

/// Build an explicit nontrivial dilation that stays in `D(d, g)`.
///
/// A defect `I - sum-square != 0` is absorbed as `A = sqrt(I - sum-square)` in
/// the (1,2) block of `T_1`. Otherwise a kernel vector `w` of the block row
/// gives `B_i = e_1 w_i*` with `sum T_i B_i* = 0`, scaled by half its norm and
/// placed in the (2,1) blocks.
pub fn witness_dilation(t: &MixedTuple, tol: &ToleranceConfig) -> Result<DilationWitness> {
    if t.d() == 0 {
        return Err(Error::InvalidArgument("witness dilation needs d >= 1".into()));
    }
    let n = t.level();
    let defect = identity(n) - t.sum_square();
    let eig = hermitian_eig(&defect)?;
    let z = zeros(n, n);
    if eig.max() > tol.eq_tol {
        let a = psd_sqrt(&defect, tol)?;
        let nontriviality = op_norm(&a);
        let ts = t
            .ts()
            .iter()
            .enumerate()
            .map(|(i, ti)| {
                let corner = if i == 0 { &a } else { &z };
                block2(ti, corner, &z, &z)
            })
            .collect();
        let xs = t.xs().iter().map(|x| direct_sum(x, &z)).collect();
        return Ok(DilationWitness {
            dilated: MixedTuple::new(ts, xs, tol)?,
            nontriviality,
            failed_condition: FailedCondition::SumSquare,
        });
    }

    let Some(w) = block_row_kernel_vector(t.ts(), tol)? else {
        return Err(Error::AlreadyMaximal);
    };
    let d = t.d();
    let mut bs: Vec<ComplexMatrix> = (0..d)
        .map(|i| {
            let mut b = zeros(n, n);
            for k in 0..n {
                b[(0, k)] = w[i * n + k].conj();
            }
            b
        })
        .collect();
    let stacked = {
        let mut s = zeros(d * n, n);
        for (i, b) in bs.iter().enumerate() {
            s.view_mut((i * n, 0), (n, n)).copy_from(b);
        }
        s
    };
    let scale = 1.0 / (2.0 * op_norm(&stacked));
    for b in &mut bs {
        *b *= nalgebra::Complex::new(scale, 0.0);
    }
    let nontriviality = bs.iter().map(op_norm).fold(0.0, f64::max);
    let ts = t.ts().iter().zip(&bs).map(|(ti, bi)| block2(ti, &z, bi, &z)).collect();
    let xs = t.xs().iter().map(|x| direct_sum(x, &z)).collect();
    Ok(DilationWitness {
        dilated: MixedTuple::new(ts, xs, tol)?,
        nontriviality,
        failed_condition: FailedCondition::InjectivityOrRange,
    })
}

/// Unit `w` with `[T_1 ... T_d] w = 0`, from the smallest right singular
/// vector of the zero-padded square block row.
fn block_row_kernel_vector(
    ts: &[ComplexMatrix],
    tol: &ToleranceConfig,
) -> Result<Option<nalgebra::DVector<crate::C64>>> {
    let m = block_row(ts);
    let (rows, cols) = m.shape();
    let mut padded = zeros(cols.max(rows), cols);
    padded.view_mut((0, 0), (rows, cols)).copy_from(&m);
    let svd = SVD::try_new(padded, false, true, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let s = &svd.singular_values;
    let sigma_max = s.iter().copied().fold(0.0, f64::max);
    let cutoff = sigma_max * (rows.max(cols) as f64) * f64::EPSILON * tol.rank_tol_factor;
    let (k, smin) = s
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    if smin > cutoff {
        return Ok(None);
    }
    let v_t = svd.v_t.expect("requested");
    Ok(Some(v_t.row(k).adjoint()))
}

/// Independent re-check of a witness against the tuple it dilates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub member_margin: f64,
    pub compression_error: f64,
    pub nontriviality: f64,
}

pub fn check_witness(t: &MixedTuple, w: &DilationWitness, tol: &ToleranceConfig) -> Result<WitnessCheck> {
    let n = t.level();
    let member_margin = mixed_member(&w.dilated, tol)?.margin;
    let compression_error = w
        .dilated
        .entries()
        .iter()
        .zip(t.entries())
        .map(|(big, small)| frobenius(&(big.view((0, 0), (n, n)) - small)))
        .fold(0.0, f64::max);
    let nontriviality = w
        .dilated
        .entries()
        .iter()
        .map(|m| {
            let m2 = m.nrows() - n;
            op_norm(&m.view((0, n), (n, m2)).into_owned()).max(op_norm(&m.view((n, 0), (m2, n)).into_owned()))
        })
        .fold(0.0, f64::max);
    Ok(WitnessCheck {
        member_margin,
        compression_error,
        nontriviality,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalDilation {
    pub maximal: MixedTuple,
    /// Input after the strict-contraction and invertibility adjustments.
    pub preprocessed: MixedTuple,
    /// Largest operator-norm change made by preprocessing.
    pub preprocessing_shift: f64,
    /// Smallest singular value of the dilated `T` block.
    pub t_sigma_min: f64,
    /// Scale of `C = gamma I`; `None` when no dilation was needed or `g = 0`.
    pub gamma: Option<f64>,
}

/// Dilate a member of `D(1, g)` to a maximal element at level `2n`.
///
/// For `g >= 1`: make `T` invertible (scaling by `1 - delta` and adding `s I`
/// when needed), set `A = sqrt(I - TT* - sum X^2)`, `C = gamma I` with
/// `gamma = 1 / (2 max(1, ||T^-1 A||))`, `B* = -T^-1 A C*` and
/// `D = sqrt(I - BB* - CC*)`; the result is
/// `S = [[T, A], [B, C]]`, `Y_1 = X_1 ⊕ D`, `Y_k = X_k ⊕ 0`.
/// For `g = 0` the unitary dilation `[[T, (I - TT*)^½], [(I - T*T)^½, -T*]]` is used.
pub fn dilate_to_maximal(t: &MixedTuple, delta: f64, tol: &ToleranceConfig) -> Result<MaximalDilation> {
    match t.d() {
        0 => return Err(Error::InvalidArgument("dilate_to_maximal needs d = 1".into())),
        1 => {}
        d => return Err(Error::NoFiniteMaximalDilation { d }),
    }
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside (0, 0.1]")));
    }
    let verdict = is_maximal(t, tol)?;
    if verdict.is_maximal && !verdict.boundary_uncertain {
        return Ok(MaximalDilation {
            maximal: t.clone(),
            preprocessed: t.clone(),
            preprocessing_shift: 0.0,
            t_sigma_min: sigma_min(&t.ts()[0]),
            gamma: None,
        });
    }
    let n = t.level();
    let id = identity(n);

    if t.g() == 0 {
        let tm = &t.ts()[0];
        let left = psd_sqrt(&hermitian_part(&(&id - tm * tm.adjoint())), tol)?;
        let right = psd_sqrt(&hermitian_part(&(&id - tm.adjoint() * tm)), tol)?;
        let s = block2(tm, &left, &right, &(-tm.adjoint()));
        let maximal = MixedTuple::new(vec![s.clone()], vec![], tol)?;
        return Ok(MaximalDilation {
            maximal,
            preprocessed: t.clone(),
            preprocessing_shift: 0.0,
            t_sigma_min: sigma_min(&s),
            gamma: None,
        });
    }

    let pre = make_invertible(t, delta, tol)?;
    let tm = pre.ts()[0].clone();
    let a = psd_sqrt(&(&id - pre.sum_square()), tol)?;
    let t_inv_a = tm
        .clone()
        .lu()
        .solve(&a)
        .ok_or_else(|| Error::Precondition("T is singular after preprocessing".into()))?;
    let gamma = 1.0 / (2.0 * op_norm(&t_inv_a).max(1.0));
    let cm = id.scale(gamma);
    let b = -t_inv_a.adjoint().scale(gamma);
    let dm = psd_sqrt(&hermitian_part(&(&id - &b * b.adjoint() - &cm * cm.adjoint())), tol)?;
    let s = block2(&tm, &a, &b, &cm);
    let z = zeros(n, n);
    let ys: Vec<ComplexMatrix> = pre
        .xs()
        .iter()
        .enumerate()
        .map(|(k, x)| direct_sum(x, if k == 0 { &dm } else { &z }))
        .collect();
    let t_sigma_min = sigma_min(&s);
    let maximal = MixedTuple::new(vec![s], ys, tol)?;
    Ok(MaximalDilation {
        maximal,
        preprocessing_shift: pre.distance(t),
        preprocessed: pre,
        t_sigma_min,
        gamma: Some(gamma),
    })
}

fn make_invertible(t: &MixedTuple, delta: f64, tol: &ToleranceConfig) -> Result<MixedTuple> {
    let floor = delta * 1e-3;
    if sigma_min(&t.ts()[0]) > floor {
        return Ok(t.clone());
    }
    let scaled = t.scaled(1.0 - delta);
    let n = t.level();
    let mut s = delta;
    for _ in 0..64 {
        let shifted_t = &scaled.ts()[0] + identity(n).scale(s);
        if sigma_min(&shifted_t) > floor {
            let candidate = MixedTuple::new(vec![shifted_t], scaled.xs().to_vec(), tol)?;
            if mixed_member(&candidate, tol)?.margin >= 0.0 {
                return Ok(candidate);
            }
        }
        s /= 2.0;
    }
    Err(Error::Precondition(
        "no invertible perturbation found within the halving budget".into(),
    ))
}

/// `Y = sum_i V_i* X^(i) V_i` with `sum V_i* V_i = I_m`.
pub fn matrix_convex_combine(
    points: &[MatrixTuple],
    isometry_blocks: &[ComplexMatrix],
    tol: &ToleranceConfig,
) -> Result<MatrixTuple> {
    if points.is_empty() || points.len() != isometry_blocks.len() {
        return Err(Error::Dimension(format!(
            "{} points but {} isometry blocks",
            points.len(),
            isometry_blocks.len()
        )));
    }
    let m = isometry_blocks[0].ncols();
    let mask = points[0].sa_mask().to_vec();
    let mut gram = zeros(m, m);
    for (i, (x, v)) in points.iter().zip(isometry_blocks).enumerate() {
        if x.sa_mask() != mask.as_slice() {
            return Err(Error::Dimension(format!("point {i} has a different shape of tuple")));
        }
        if v.shape() != (x.level(), m) {
            return Err(Error::Dimension(format!(
                "V_{i} is {}x{}, expected {}x{m}",
                v.nrows(),
                v.ncols(),
                x.level()
            )));
        }
        gram += v.adjoint() * v;
    }
    let defect = frobenius(&(gram - identity(m)));
    if defect > tol.eq_tol {
        return Err(Error::NotNormalized { defect });
    }
    let mut entries: Vec<ComplexMatrix> = mask.iter().map(|_| zeros(m, m)).collect();
    for (x, v) in points.iter().zip(isometry_blocks) {
        for (acc, xj) in entries.iter_mut().zip(x.entries()) {
            *acc += v.adjoint() * xj * v;
        }
    }
    for (acc, &sa) in entries.iter_mut().zip(&mask) {
        if sa {
            *acc = hermitian_part(acc);
        }
    }
    MatrixTuple::new(entries, mask, tol)
}

/// Singular values of the block row, padded with zeros to `d n` entries.
pub fn block_row_spectrum(t: &MixedTuple) -> Result<Vec<f64>> {
    let m = t.block_row();
    let mut s = singular_values(&m)?;
    s.resize(m.ncols(), 0.0);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c, matrix_unit, real_matrix};
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn scalar(x: f64) -> ComplexMatrix {
        real_matrix(1, 1, &[x])
    }

    #[test]
    fn member_examples() {
        let zero = MixedTuple::new(vec![zeros(2, 2)], vec![zeros(2, 2), zeros(2, 2)], &tol()).unwrap();
        let m = mixed_member(&zero, &tol()).unwrap();
        assert!(m.member);
        assert_abs_diff_eq!(m.margin, 1.0, epsilon = 1e-15);

        let u = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let m = mixed_member(&MixedTuple::new(vec![u], vec![], &tol()).unwrap(), &tol()).unwrap();
        assert!(m.member);
        assert_abs_diff_eq!(m.margin, 0.0, epsilon = 1e-15);

        let pair = MixedTuple::new(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 1)], vec![], &tol()).unwrap();
        let m = mixed_member(&pair, &tol()).unwrap();
        assert!(m.member);
        assert_abs_diff_eq!(m.margin, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kernel_test_examples() {
        let k = trivial_kernel_test(&[real_matrix(2, 2, &[1.0, 2.0, 0.0, 1.0])], &tol()).unwrap();
        assert!(k.trivial);
        let k = trivial_kernel_test(&[matrix_unit(2, 0, 0)], &tol()).unwrap();
        assert!(!k.trivial);
        assert_abs_diff_eq!(k.sigma_min, 0.0);
        let k = trivial_kernel_test(&[identity(2), identity(2)], &tol()).unwrap();
        assert!(!k.trivial);
        assert_eq!((k.rank, k.columns), (2, 4));
        assert!(matches!(
            trivial_kernel_test(&[identity(2), identity(3)], &tol()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn maximality_examples() {
        let u = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let v = is_maximal(&MixedTuple::new(vec![u], vec![], &tol()).unwrap(), &tol()).unwrap();
        assert!(v.is_maximal && v.witness.is_none() && !v.boundary_uncertain);

        let t = MixedTuple::new(vec![identity(2).scale(0.9)], vec![], &tol()).unwrap();
        let v = is_maximal(&t, &tol()).unwrap();
        assert!(!v.is_maximal);
        assert_eq!(v.witness.unwrap().failed_condition, FailedCondition::SumSquare);

        let pair = MixedTuple::new(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 1)], vec![], &tol()).unwrap();
        let v = is_maximal(&pair, &tol()).unwrap();
        assert!(!v.is_maximal);
        assert!(v.condition_margins.eq_margin < 1e-15);
        assert_eq!(v.condition_margins.blockrow_rank_deficit, 2);
        let w = v.witness.unwrap();
        assert_eq!(w.failed_condition, FailedCondition::InjectivityOrRange);
        let chk = check_witness(&pair, &w, &tol()).unwrap();
        assert!(chk.member_margin >= -1e-12);
        assert!(chk.compression_error < 1e-15);
        assert!(chk.nontriviality > 0.1);
    }

    #[test]
    fn maximality_rejects_non_members() {
        let t = MixedTuple::new(vec![scalar(1.5)], vec![], &tol()).unwrap();
        assert!(matches!(is_maximal(&t, &tol()), Err(Error::NotMember { .. })));
    }

    #[test]
    fn witness_for_zero_contraction() {
        let t = MixedTuple::new(vec![scalar(0.0)], vec![], &tol()).unwrap();
        let w = witness_dilation(&t, &tol()).unwrap();
        let expected = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(frobenius(&(&w.dilated.ts()[0] - expected)) < 1e-15);
        let ss = w.dilated.sum_square();
        assert!(frobenius(&(ss - crate::numkernel::diag_real(&[1.0, 0.0]))) < 1e-15);
    }

    #[test]
    fn witness_sum_square_corner_is_identity() {
        let t = MixedTuple::new(vec![scalar(0.5)], vec![scalar(0.0)], &tol()).unwrap();
        let w = witness_dilation(&t, &tol()).unwrap();
        assert_abs_diff_eq!(w.dilated.ts()[0][(0, 1)].re, 0.75f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w.dilated.sum_square()[(0, 0)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn witness_refuses_maximal_input() {
        let u = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let t = MixedTuple::new(vec![u], vec![], &tol()).unwrap();
        assert_eq!(witness_dilation(&t, &tol()), Err(Error::AlreadyMaximal));
    }

    #[test]
    fn hand_computed_maximal_dilation() {
        let t = MixedTuple::new(vec![scalar(0.5)], vec![scalar(0.0)], &tol()).unwrap();
        let out = dilate_to_maximal(&t, 1e-3, &tol()).unwrap();
        let r3 = 3f64.sqrt();
        let s_expected = real_matrix(2, 2, &[0.5, r3 / 2.0, -0.5, 1.0 / (2.0 * r3)]);
        assert!(frobenius(&(&out.maximal.ts()[0] - s_expected)) < 1e-14);
        let y_expected = crate::numkernel::diag_real(&[0.0, (2.0f64 / 3.0).sqrt()]);
        assert!(frobenius(&(&out.maximal.xs()[0] - y_expected)) < 1e-14);
        assert_eq!(out.preprocessing_shift, 0.0);
        assert_abs_diff_eq!(out.gamma.unwrap(), 1.0 / (2.0 * r3), epsilon = 1e-15);
        assert!(is_maximal(&out.maximal, &tol()).unwrap().is_maximal);
    }

    #[test]
    fn unitary_short_circuits() {
        let u = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let t = MixedTuple::new(vec![u], vec![], &tol()).unwrap();
        let out = dilate_to_maximal(&t, 1e-3, &tol()).unwrap();
        assert_eq!(out.maximal, t);
    }

    #[test]
    fn contraction_gets_unitary_dilation() {
        let t = MixedTuple::new(vec![real_matrix(2, 2, &[0.3, 0.2, 0.0, 0.0])], vec![], &tol()).unwrap();
        let out = dilate_to_maximal(&t, 1e-3, &tol()).unwrap();
        let s = &out.maximal.ts()[0];
        assert!(crate::numkernel::unitary_defect(s) < 1e-12);
        assert!(out.maximal.compress_top_left(2).distance(&t) < 1e-15);
    }

    #[test]
    fn singular_t_is_preprocessed() {
        let t = MixedTuple::new(
            vec![matrix_unit(2, 0, 1)],
            vec![matrix_unit(2, 1, 1).scale(0.5)],
            &tol(),
        )
        .unwrap();
        let delta = 1e-3;
        let out = dilate_to_maximal(&t, delta, &tol()).unwrap();
        assert!(out.preprocessing_shift > 0.0 && out.preprocessing_shift <= 2.0 * delta);
        assert!(is_maximal(&out.maximal, &tol()).unwrap().is_maximal);
        assert!(out.maximal.compress_top_left(2).distance(&t) <= 2.0 * delta);
        assert!(out.t_sigma_min > 0.0);
    }

    #[test]
    fn no_finite_maximal_dilation_for_d2() {
        let t = MixedTuple::new(vec![zeros(1, 1), zeros(1, 1)], vec![], &tol()).unwrap();
        assert_eq!(
            dilate_to_maximal(&t, 1e-3, &tol()),
            Err(Error::NoFiniteMaximalDilation { d: 2 })
        );
        assert!(dilate_to_maximal(
            &MixedTuple::new(vec![zeros(1, 1)], vec![], &tol()).unwrap(),
            0.5,
            &tol()
        )
        .is_err());
    }

    #[test]
    fn convex_combination_examples() {
        let x = MatrixTuple::new(
            vec![
                real_matrix(2, 2, &[0.1, 0.2, 0.0, 0.3]),
                real_matrix(2, 2, &[0.5, 0.1, 0.1, -0.2]),
            ],
            vec![false, true],
            &tol(),
        )
        .unwrap();
        let y = matrix_convex_combine(std::slice::from_ref(&x), &[identity(2)], &tol()).unwrap();
        assert_eq!(y, x);
        let h = identity(2).scale(std::f64::consts::FRAC_1_SQRT_2);
        let y = matrix_convex_combine(&[x.clone(), x.clone()], &[h.clone(), h], &tol()).unwrap();
        for (a, b) in y.entries().iter().zip(x.entries()) {
            assert!(frobenius(&(a - b)) < 1e-15);
        }
        let bad = matrix_convex_combine(&[x.clone(), x], &[identity(2), identity(2)], &tol());
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn compression_of_maximal_element_is_member() {
        let t = MixedTuple::new(vec![scalar(0.5)], vec![scalar(0.0)], &tol()).unwrap();
        let big = dilate_to_maximal(&t, 1e-3, &tol()).unwrap().maximal;
        let e2 = real_matrix(2, 1, &[0.0, 1.0]);
        let y = matrix_convex_combine(std::slice::from_ref(big.tuple()), &[e2], &tol()).unwrap();
        let y = MixedTuple::from_tuple(1, 1, y).unwrap();
        assert!(mixed_member(&y, &tol()).unwrap().member);
    }

    #[test]
    fn mixed_json_round_trip() {
        let t = MixedTuple::new(vec![matrix_unit(2, 0, 1)], vec![identity(2).scale(0.1)], &tol()).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["d"], 1);
        assert_eq!(v["g"], 1);
        let back: MixedTuple = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
