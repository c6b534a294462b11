//! Hermitian monic linear pencils and free spectrahedron membership.
//!
//! A pencil with coefficients `A_1..A_d` evaluates at a tuple `Z` as
//! `L_A(Z) = I - herm(sum_j A_j ⊗ Z_j)`. Self-adjoint variables with hermitian
//! coefficients take the same formula since `A ⊗ X` is already hermitian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::MatrixWire;
use crate::numkernel::{
    c, check_hermitian, hermitian_part, identity, kron, psd_check, skew_part, zeros, ComplexMatrix, ToleranceConfig,
};

/// Coefficient field of the self-adjoint presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// Smallest eigenvalue of the tested matrix.
    pub margin: f64,
}

/// Ordered tuple of equal-size square matrices; entries flagged self-adjoint are hermitian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleWire", into = "TupleWire")]
pub struct MatrixTuple {
    level: usize,
    entries: Vec<ComplexMatrix>,
    sa_mask: Vec<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleWire {
    pub level: usize,
    pub entries: Vec<MatrixWire>,
    pub sa_mask: Vec<bool>,
}

impl TryFrom<TupleWire> for MatrixTuple {
    type Error = Error;

    fn try_from(w: TupleWire) -> Result<Self> {
        let entries = w
            .entries
            .iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        let t = MatrixTuple::new(entries, w.sa_mask, &ToleranceConfig::default())?;
        if !t.entries.is_empty() && t.level != w.level {
            return Err(Error::Dimension(format!(
                "declared level {} but entries are {}x{}",
                w.level, t.level, t.level
            )));
        }
        Ok(t)
    }
}

impl From<MatrixTuple> for TupleWire {
    fn from(t: MatrixTuple) -> Self {
        TupleWire {
            level: t.level,
            entries: t.entries.iter().map(MatrixWire::from).collect(),
            sa_mask: t.sa_mask,
        }
    }
}

impl MatrixTuple {
    pub fn new(entries: Vec<ComplexMatrix>, sa_mask: Vec<bool>, tol: &ToleranceConfig) -> Result<Self> {
        if entries.len() != sa_mask.len() {
            return Err(Error::Dimension(format!(
                "{} entries but {} sa flags",
                entries.len(),
                sa_mask.len()
            )));
        }
        let level = entries.first().map(|m| m.nrows()).unwrap_or(0);
        for (k, m) in entries.iter().enumerate() {
            if m.shape() != (level, level) {
                return Err(Error::Dimension(format!(
                    "entry {k} is {}x{}, expected {level}x{level}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if sa_mask[k] {
                check_hermitian(m, tol)?;
            }
        }
        Ok(Self {
            level,
            entries,
            sa_mask,
        })
    }

    /// All entries self-adjoint.
    pub fn selfadjoint(entries: Vec<ComplexMatrix>) -> Result<Self> {
        let mask = vec![true; entries.len()];
        Self::new(entries, mask, &ToleranceConfig::default())
    }

    /// No entry flagged self-adjoint.
    pub fn general(entries: Vec<ComplexMatrix>) -> Result<Self> {
        let mask = vec![false; entries.len()];
        Self::new(entries, mask, &ToleranceConfig::default())
    }

    pub fn zero(level: usize, sa_mask: Vec<bool>) -> Self {
        let entries = sa_mask.iter().map(|_| zeros(level, level)).collect();
        Self {
            level,
            entries,
            sa_mask,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ComplexMatrix] {
        &self.entries
    }

    pub fn sa_mask(&self) -> &[bool] {
        &self.sa_mask
    }

    pub fn into_entries(self) -> Vec<ComplexMatrix> {
        self.entries
    }

    /// Simultaneous conjugation `U* Z_j U`; `u` may be a rectangular isometry.
    pub fn compress(&self, u: &ComplexMatrix) -> MatrixTuple {
        let ua = u.adjoint();
        let entries: Vec<ComplexMatrix> = self
            .entries
            .iter()
            .zip(&self.sa_mask)
            .map(|(m, &sa)| {
                let x = &ua * m * u;
                if sa {
                    hermitian_part(&x)
                } else {
                    x
                }
            })
            .collect();
        MatrixTuple {
            level: u.ncols(),
            entries,
            sa_mask: self.sa_mask.clone(),
        }
    }

    /// Entrywise direct sum with another tuple of the same shape.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.len() != other.len() || self.sa_mask != other.sa_mask {
            return Err(Error::Dimension("direct sum of incompatible tuples".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| crate::numkernel::direct_sum(a, b))
            .collect();
        Ok(MatrixTuple {
            level: self.level + other.level,
            entries,
            sa_mask: self.sa_mask.clone(),
        })
    }

    /// Entrywise complex conjugate (not adjoint).
    pub fn conjugate(&self) -> MatrixTuple {
        MatrixTuple {
            level: self.level,
            entries: self.entries.iter().map(|m| m.map(|z| z.conj())).collect(),
            sa_mask: self.sa_mask.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PencilVariable {
    pub coeff: ComplexMatrix,
    pub selfadjoint: bool,
}

/// Coefficient tuple of a hermitian monic linear pencil.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PencilWire", into = "PencilWire")]
pub struct HermitianPencil {
    coeff_dim: usize,
    variables: Vec<PencilVariable>,
    field: Field,
}

/// Same layout as a tuple wire plus the coefficient field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PencilWire {
    pub level: usize,
    pub entries: Vec<MatrixWire>,
    pub sa_mask: Vec<bool>,
    pub field: Field,
}

impl TryFrom<PencilWire> for HermitianPencil {
    type Error = Error;

    fn try_from(w: PencilWire) -> Result<Self> {
        let coeffs = w
            .entries
            .iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        if w.sa_mask.len() != coeffs.len() {
            return Err(Error::Dimension("sa_mask length differs from entries".into()));
        }
        let vars = coeffs
            .into_iter()
            .zip(w.sa_mask)
            .map(|(coeff, selfadjoint)| PencilVariable { coeff, selfadjoint })
            .collect();
        let p = HermitianPencil::new(vars, w.field, &ToleranceConfig::default())?;
        if p.arity() > 0 && p.coeff_dim != w.level {
            return Err(Error::Dimension(format!(
                "declared coefficient size {} but coefficients are {}x{}",
                w.level, p.coeff_dim, p.coeff_dim
            )));
        }
        Ok(p)
    }
}

impl From<HermitianPencil> for PencilWire {
    fn from(p: HermitianPencil) -> Self {
        PencilWire {
            level: p.coeff_dim,
            entries: p.variables.iter().map(|v| MatrixWire::from(&v.coeff)).collect(),
            sa_mask: p.variables.iter().map(|v| v.selfadjoint).collect(),
            field: p.field,
        }
    }
}

impl HermitianPencil {
    pub fn new(variables: Vec<PencilVariable>, field: Field, tol: &ToleranceConfig) -> Result<Self> {
        let coeff_dim = variables.first().map(|v| v.coeff.nrows()).unwrap_or(0);
        for (k, v) in variables.iter().enumerate() {
            if v.coeff.shape() != (coeff_dim, coeff_dim) {
                return Err(Error::Dimension(format!(
                    "coefficient {k} is {}x{}, expected {coeff_dim}x{coeff_dim}",
                    v.coeff.nrows(),
                    v.coeff.ncols()
                )));
            }
            if v.selfadjoint {
                check_hermitian(&v.coeff, tol)?;
            }
            if field == Field::R && v.coeff.iter().any(|z| z.im.abs() > tol.herm_tol) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {k} has non-real entries but the field is R"
                )));
            }
        }
        Ok(Self {
            coeff_dim,
            variables,
            field,
        })
    }

    /// All coefficients self-adjoint; the field is inferred from the entries.
    pub fn selfadjoint(coeffs: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        let field = infer_field(&coeffs, tol);
        let vars = coeffs
            .into_iter()
            .map(|coeff| PencilVariable {
                coeff,
                selfadjoint: true,
            })
            .collect();
        Self::new(vars, field, tol)
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[PencilVariable] {
        &self.variables
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn sa_mask(&self) -> Vec<bool> {
        self.variables.iter().map(|v| v.selfadjoint).collect()
    }
}

fn infer_field(coeffs: &[ComplexMatrix], tol: &ToleranceConfig) -> Field {
    if coeffs.iter().flat_map(|m| m.iter()).all(|z| z.im.abs() <= tol.herm_tol) {
        Field::R
    } else {
        Field::C
    }
}

/// `L_P(Z) = I_{kn} - herm(sum_j A_j ⊗ Z_j)`.
pub fn eval_pencil(p: &HermitianPencil, z: &MatrixTuple) -> Result<ComplexMatrix> {
    if p.arity() != z.len() {
        return Err(Error::Dimension(format!(
            "pencil has {} variables, tuple has {} entries",
            p.arity(),
            z.len()
        )));
    }
    for (k, (v, &sa)) in p.variables.iter().zip(z.sa_mask()).enumerate() {
        if v.selfadjoint && !sa {
            return Err(Error::Dimension(format!(
                "variable {k} is self-adjoint but tuple entry {k} is not flagged self-adjoint"
            )));
        }
    }
    let size = p.coeff_dim * z.level();
    let mut sum = zeros(size, size);
    for (v, m) in p.variables.iter().zip(z.entries()) {
        sum += kron(&v.coeff, m);
    }
    Ok(identity(size) - hermitian_part(&sum))
}

pub fn spectrahedron_member(p: &HermitianPencil, z: &MatrixTuple, tol: &ToleranceConfig) -> Result<Membership> {
    let l = eval_pencil(p, z)?;
    let check = psd_check(&l, tol)?;
    Ok(Membership {
        member: check.is_psd,
        margin: check.margin,
    })
}

/// Replace each non-self-adjoint coefficient `A` by the pair `(Re A, -Im A)`.
///
/// Pairs with [`decompose_tuple`]: `Z ∈ D_A` iff the decomposed tuple lies in
/// the spectrahedron of the returned pencil.
pub fn to_selfadjoint_presentation(p: &HermitianPencil, tol: &ToleranceConfig) -> Result<HermitianPencil> {
    let mut coeffs = Vec::with_capacity(2 * p.arity());
    for v in &p.variables {
        if v.selfadjoint {
            coeffs.push(v.coeff.clone());
        } else {
            coeffs.push(hermitian_part(&v.coeff));
            coeffs.push(-skew_part(&v.coeff));
        }
    }
    HermitianPencil::selfadjoint(coeffs, tol)
}

/// Split each non-self-adjoint entry `T` into `(Re T, Im T)` with `T = Re T + i Im T`.
pub fn decompose_tuple(z: &MatrixTuple) -> MatrixTuple {
    let mut entries = Vec::with_capacity(2 * z.len());
    for (m, &sa) in z.entries().iter().zip(z.sa_mask()) {
        if sa {
            entries.push(m.clone());
        } else {
            entries.push(hermitian_part(m));
            entries.push(skew_part(m));
        }
    }
    let mask = vec![true; entries.len()];
    MatrixTuple {
        level: z.level(),
        entries,
        sa_mask: mask,
    }
}

/// Inverse of [`decompose_tuple`] given the original self-adjointness mask.
pub fn recompose_tuple(x: &MatrixTuple, original_mask: &[bool]) -> Result<MatrixTuple> {
    let needed: usize = original_mask.iter().map(|&sa| if sa { 1 } else { 2 }).sum();
    if needed != x.len() {
        return Err(Error::Dimension(format!(
            "mask needs {needed} self-adjoint coordinates, tuple has {}",
            x.len()
        )));
    }
    let mut it = x.entries().iter();
    let mut entries = Vec::with_capacity(original_mask.len());
    for &sa in original_mask {
        let re = it.next().expect("counted above");
        if sa {
            entries.push(re.clone());
        } else {
            let im = it.next().expect("counted above");
            entries.push(re + im * c(0.0, 1.0));
        }
    }
    Ok(MatrixTuple {
        level: x.level(),
        entries,
        sa_mask: original_mask.to_vec(),
    })
}

/// Pencil of `D(d, g)` in self-adjoint coordinates `(Re T_1, Im T_1, ..., X_1, ..., X_g)`.
///
/// Each coefficient is `N ⊕ (-N)` with `N` supported on the first row and
/// column of a `(d+g+1)`-square block, so `L >= 0` iff the block matrix
/// `[[0, row], [row*, 0]]` has norm at most one.
pub fn build_mixed_pencil(d: usize, g: usize) -> Result<HermitianPencil> {
    if d == 0 && g == 0 {
        return Err(Error::InvalidArgument("D(d, g) needs d and g not both zero".into()));
    }
    let m = d + g + 1;
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let signed = |n: ComplexMatrix| crate::numkernel::direct_sum(&n, &(-n.clone()));
    let mut coeffs = Vec::with_capacity(2 * d + g);
    for j in 1..=d {
        let mut a = zeros(m, m);
        a[(0, j)] = one;
        a[(j, 0)] = one;
        let mut b = zeros(m, m);
        b[(0, j)] = i;
        b[(j, 0)] = -i;
        coeffs.push(signed(a));
        coeffs.push(signed(b));
    }
    for k in 1..=g {
        let idx = d + k;
        let mut cm = zeros(m, m);
        cm[(0, idx)] = one;
        cm[(idx, 0)] = one;
        coeffs.push(signed(cm));
    }
    HermitianPencil::selfadjoint(coeffs, &ToleranceConfig::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugationVerdict {
    ClosedOnWitness,
    WitnessViolates,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub verdict: ConjugationVerdict,
    pub tuple: Membership,
    pub conjugate: Membership,
}

/// Does entrywise conjugation of a member leave the spectrahedron?
pub fn conjugation_witness_check(
    z: &MatrixTuple,
    p: &HermitianPencil,
    tol: &ToleranceConfig,
) -> Result<ConjugationReport> {
    let tuple = spectrahedron_member(p, z, tol)?;
    let conjugate = spectrahedron_member(p, &z.conjugate(), tol)?;
    let verdict = if tuple.member && !conjugate.member {
        ConjugationVerdict::WitnessViolates
    } else {
        ConjugationVerdict::ClosedOnWitness
    };
    Ok(ConjugationReport {
        verdict,
        tuple,
        conjugate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{frobenius, hermitian_eig, matrix_unit, real_matrix};
    use crate::random::{self, seeded};
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn scalar(x: f64) -> ComplexMatrix {
        real_matrix(1, 1, &[x])
    }

    #[test]
    fn scalar_pencil_examples() {
        let p = HermitianPencil::selfadjoint(vec![scalar(1.0)], &tol()).unwrap();
        let z0 = MatrixTuple::selfadjoint(vec![scalar(0.0)]).unwrap();
        assert_eq!(eval_pencil(&p, &z0).unwrap(), identity(1));
        let z2 = MatrixTuple::selfadjoint(vec![scalar(2.0)]).unwrap();
        assert_abs_diff_eq!(eval_pencil(&p, &z2).unwrap()[(0, 0)].re, -1.0);
    }

    #[test]
    fn contraction_pencil_margin_is_one_minus_modulus() {
        // eigenvalues of [[0, z], [conj z, 0]] are ±|z|
        let p = build_mixed_pencil(1, 0).unwrap();
        let z = decompose_tuple(&MatrixTuple::general(vec![scalar(0.5)]).unwrap());
        let e = hermitian_eig(&eval_pencil(&p, &z).unwrap()).unwrap();
        assert_abs_diff_eq!(e.min(), 0.5, epsilon = 1e-14);

        let z = decompose_tuple(&MatrixTuple::general(vec![scalar(2.0)]).unwrap());
        let m = spectrahedron_member(&p, &z, &tol()).unwrap();
        assert!(!m.member);
        assert_abs_diff_eq!(m.margin, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn mixed_pencil_level_one_member() {
        let p = build_mixed_pencil(1, 1).unwrap();
        let z = MatrixTuple::new(vec![scalar(0.5), scalar(0.0)], vec![false, true], &tol()).unwrap();
        let m = spectrahedron_member(&p, &decompose_tuple(&z), &tol()).unwrap();
        assert!(m.member);
        // row norm sqrt(0.25) = 0.5
        assert_abs_diff_eq!(m.margin, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn zero_tuple_gives_identity() {
        let p = build_mixed_pencil(2, 1).unwrap();
        let z = MatrixTuple::zero(3, vec![true; p.arity()]);
        assert_eq!(eval_pencil(&p, &z).unwrap(), identity(p.coeff_dim() * 3));
    }

    #[test]
    fn mixed_pencil_shapes() {
        let p = build_mixed_pencil(1, 0).unwrap();
        assert_eq!((p.arity(), p.coeff_dim()), (2, 4));
        assert_eq!(p.field(), Field::C);
        let p = build_mixed_pencil(0, 1).unwrap();
        assert_eq!((p.arity(), p.coeff_dim()), (1, 4));
        assert_eq!(p.field(), Field::R);
        assert!(build_mixed_pencil(0, 0).is_err());
    }

    #[test]
    fn selfadjoint_ball_g1_is_interval() {
        let p = build_mixed_pencil(0, 1).unwrap();
        for (x, inside) in [(0.99, true), (-0.99, true), (1.01, false), (-1.01, false)] {
            let z = MatrixTuple::selfadjoint(vec![diag(x)]).unwrap();
            assert_eq!(spectrahedron_member(&p, &z, &tol()).unwrap().member, inside);
        }
    }

    fn diag(x: f64) -> ComplexMatrix {
        crate::numkernel::diag_real(&[x, x / 2.0])
    }

    #[test]
    fn selfadjoint_presentation_examples() {
        let p = build_mixed_pencil(1, 1).unwrap();
        assert_eq!(to_selfadjoint_presentation(&p, &tol()).unwrap(), p);

        let a = HermitianPencil::new(
            vec![PencilVariable {
                coeff: ComplexMatrix::from_element(1, 1, c(0.0, 1.0)),
                selfadjoint: false,
            }],
            Field::C,
            &tol(),
        )
        .unwrap();
        let b = to_selfadjoint_presentation(&a, &tol()).unwrap();
        assert_eq!(b.arity(), 2);
        assert_abs_diff_eq!(b.variables()[0].coeff[(0, 0)].norm(), 0.0);
        assert_abs_diff_eq!(b.variables()[1].coeff[(0, 0)].re, -1.0);
        assert_eq!(b.field(), Field::R);
    }

    #[test]
    fn selfadjoint_presentation_preserves_membership() {
        let a = HermitianPencil::new(
            vec![PencilVariable {
                coeff: real_matrix(2, 2, &[0.0, 2.0, 0.0, 0.0]),
                selfadjoint: false,
            }],
            Field::R,
            &tol(),
        )
        .unwrap();
        let b = to_selfadjoint_presentation(&a, &tol()).unwrap();
        let s = 0.5;
        let expected_im =
            ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, s * 2.0), c(0.0, -s * 2.0), c(0.0, 0.0)]);
        // -Im(A) with Im(A) = (A - A*)/(2i)
        assert!(frobenius(&(&b.variables()[1].coeff - expected_im.scale(1.0))) < 1e-15);
        let mut rng = seeded(42);
        let mut seen = [0usize; 2];
        for _ in 0..100 {
            let n = 1 + (rand::Rng::random_range(&mut rng, 0..3usize));
            let scale = rand::Rng::random_range(&mut rng, 0.05..0.8);
            let t = random::gaussian_matrix(&mut rng, n, n).scale(scale);
            let z = MatrixTuple::general(vec![t]).unwrap();
            let direct = spectrahedron_member(&a, &z, &tol()).unwrap();
            let split = spectrahedron_member(&b, &decompose_tuple(&z), &tol()).unwrap();
            assert_eq!(direct.member, split.member);
            assert_abs_diff_eq!(direct.margin, split.margin, epsilon = 1e-10);
            seen[direct.member as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn decompose_matches_witness_display() {
        let z = MatrixTuple::general(vec![matrix_unit(2, 0, 1)]).unwrap();
        let x = decompose_tuple(&z);
        let re = real_matrix(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let im = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.0, 0.0)]);
        assert_eq!(x.entries()[0], re);
        assert_eq!(x.entries()[1], im);

        let h = real_matrix(2, 2, &[1.0, 2.0, 2.0, 3.0]);
        let x = decompose_tuple(&MatrixTuple::general(vec![h.clone()]).unwrap());
        assert_eq!(x.entries()[0], h);
        assert_eq!(x.entries()[1], zeros(2, 2));
    }

    #[test]
    fn decompose_round_trips() {
        let mut rng = seeded(9);
        for _ in 0..20 {
            let t = random::gaussian_matrix(&mut rng, 3, 3);
            let h = random::hermitian(&mut rng, 3);
            let z = MatrixTuple::new(vec![t, h], vec![false, true], &tol()).unwrap();
            let back = recompose_tuple(&decompose_tuple(&z), z.sa_mask()).unwrap();
            for (a, b) in back.entries().iter().zip(z.entries()) {
                assert!(frobenius(&(a - b)) < 1e-14);
            }
        }
    }

    #[test]
    fn conjugation_witness_examples() {
        let p = build_mixed_pencil(2, 0).unwrap();
        let z = MatrixTuple::general(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 1)]).unwrap();
        let r = conjugation_witness_check(&decompose_tuple(&z), &p, &tol()).unwrap();
        assert_eq!(r.verdict, ConjugationVerdict::WitnessViolates);
        assert_abs_diff_eq!(r.tuple.margin, 0.0, epsilon = 1e-12);
        // conjugate row (E21, E22) has norm sqrt 2
        assert_abs_diff_eq!(r.conjugate.margin, 1.0 - 2f64.sqrt(), epsilon = 1e-12);

        let real = MatrixTuple::general(vec![real_matrix(2, 2, &[0.3, 0.1, 0.0, 0.2]), zeros(2, 2)]).unwrap();
        let r = conjugation_witness_check(&decompose_tuple(&real), &p, &tol()).unwrap();
        assert_eq!(r.verdict, ConjugationVerdict::ClosedOnWitness);

        let p1 = build_mixed_pencil(1, 0).unwrap();
        let e12 = MatrixTuple::general(vec![matrix_unit(2, 0, 1)]).unwrap();
        let r = conjugation_witness_check(&decompose_tuple(&e12), &p1, &tol()).unwrap();
        assert_eq!(r.verdict, ConjugationVerdict::ClosedOnWitness);
    }

    #[test]
    fn eval_rejects_arity_and_flag_mismatch() {
        let p = build_mixed_pencil(1, 0).unwrap();
        let z = MatrixTuple::selfadjoint(vec![scalar(0.1)]).unwrap();
        assert!(matches!(eval_pencil(&p, &z), Err(Error::Dimension(_))));
        let z = MatrixTuple::general(vec![scalar(0.1), scalar(0.2)]).unwrap();
        assert!(matches!(eval_pencil(&p, &z), Err(Error::Dimension(_))));
    }

    #[test]
    fn tuple_json_round_trip_and_validation() {
        let z = MatrixTuple::new(vec![matrix_unit(2, 0, 1), identity(2)], vec![false, true], &tol()).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert!(s.starts_with(r#"{"level":2,"entries":[{"rows":2,"cols":2,"data":"#));
        let back: MatrixTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let bad = r#"{"level":2,"entries":[{"rows":2,"cols":2,"data":[[0,0],[1,0],[0,0],[0,0]]}],"sa_mask":[true]}"#;
        assert!(serde_json::from_str::<MatrixTuple>(bad).is_err());
    }

    #[test]
    fn pencil_json_carries_field() {
        let p = build_mixed_pencil(1, 0).unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["field"], "C");
        assert_eq!(v["level"], 4);
        let back: HermitianPencil = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
