//! Seeded generators for matrices, states and tuples.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::mixedsets::MixedTuple;
use crate::numkernel::{
    c, diag_real, hermitian_part, identity, op_norm, psd_sqrt, zeros, ComplexMatrix, ToleranceConfig, C64,
};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre matrix with entries of unit variance.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| c(s * normal(rng), s * normal(rng)))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    hermitian_part(&gaussian_matrix(rng, n, n))
}

/// Haar-distributed unitary via phase-corrected QR.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`).
pub fn isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols);
    unitary(rng, rows).columns(0, cols).into_owned()
}

/// `rows x cols` matrix with orthonormal rows (`rows <= cols`).
pub fn coisometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    isometry(rng, cols, rows).adjoint()
}

pub fn unit_vector(rng: &mut impl Rng, n: usize) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| c(normal(rng), normal(rng)));
    let norm = v.norm();
    v.unscale(norm)
}

/// Density matrix `G G* / tr(G G*)`.
pub fn density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let p = &g * g.adjoint();
    let tr = p.trace().re;
    hermitian_part(&p.unscale(tr))
}

/// Uniform unit vector in `R^g`.
pub fn real_direction(rng: &mut impl Rng, g: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..g).map(|_| normal(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `g` hermitian matrices with `||sum X_k^2|| = r^2` (zero matrices when `r = 0`).
pub fn hermitian_family(rng: &mut impl Rng, g: usize, n: usize, r: f64) -> Vec<ComplexMatrix> {
    let xs: Vec<ComplexMatrix> = (0..g).map(|_| hermitian(rng, n)).collect();
    let top = square_norm(&xs);
    let s = if top > 0.0 { r / top.sqrt() } else { 0.0 };
    xs.into_iter().map(|x| x.scale(s)).collect()
}

fn square_norm(xs: &[ComplexMatrix]) -> f64 {
    let Some(first) = xs.first() else { return 0.0 };
    let n = first.nrows();
    let mut sum = zeros(n, n);
    for x in xs {
        sum += x * x;
    }
    op_norm(&sum)
}

/// Random member of `D(d, g)` at level `n` with `||sum-square|| = r^2`.
pub fn mixed_with_norm(rng: &mut impl Rng, d: usize, g: usize, n: usize, r: f64) -> MixedTuple {
    let ts: Vec<ComplexMatrix> = (0..d).map(|_| gaussian_matrix(rng, n, n)).collect();
    let xs: Vec<ComplexMatrix> = (0..g).map(|_| hermitian(rng, n)).collect();
    let t = MixedTuple::new(ts, xs, &ToleranceConfig::default()).expect("well-formed tuple");
    let top = op_norm(&t.sum_square());
    t.scaled(r / top.sqrt())
}

/// Maximal element of `D(1, g)`: `T = sqrt(I - sum X^2) U` with `||sum X^2|| = r^2 < 1`.
pub fn maximal_d1(rng: &mut impl Rng, g: usize, n: usize, r: f64) -> MixedTuple {
    let tol = ToleranceConfig::default();
    let xs = hermitian_family(rng, g, n, r);
    let mut defect = identity(n);
    for x in &xs {
        defect -= x * x;
    }
    let root = psd_sqrt(&hermitian_part(&defect), &tol).expect("defect is positive definite");
    let t = root * unitary(rng, n);
    MixedTuple::new(vec![t], xs, &tol).expect("well-formed tuple")
}

/// Element of `D(1, g)`, `g >= 1`, with sum-square exactly `I` and `T` of rank `n - 1`.
pub fn saturated_singular_d1(rng: &mut impl Rng, g: usize, n: usize) -> MixedTuple {
    assert!(g >= 1 && n >= 1);
    let tol = ToleranceConfig::default();
    let m = n - 1;
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let diag: Vec<f64> = (0..m).map(|_| rng.random_range(-0.6..0.6)).collect();
    let rest = hermitian_family(rng, g - 1, m, 0.5);
    let mut defect = identity(m);
    for (k, v) in diag.iter().enumerate() {
        defect[(k, k)] -= c(v * v, 0.0);
    }
    for h in &rest {
        defect -= h * h;
    }
    let root = psd_sqrt(&hermitian_part(&defect), &tol).expect("defect is positive definite");
    let v = unitary(rng, n);
    let lift = |inner: &ComplexMatrix, corner: f64| {
        let mut full = zeros(n, n);
        full[(0, 0)] = c(corner, 0.0);
        full.view_mut((1, 1), (m, m)).copy_from(inner);
        &v * full * v.adjoint()
    };
    let inner_t = root * unitary(rng, m);
    let t = lift(&inner_t, 0.0);
    let mut xs = vec![lift(&diag_real(&diag), sign)];
    xs.extend(rest.iter().map(|h| lift(h, 0.0)));
    MixedTuple::new(vec![t], xs, &tol).expect("well-formed tuple")
}

/// Element of `D(d, g)` with sum-square exactly `I`: `[T_1 ... T_d] = sqrt(I - sum X^2) V`
/// for a coisometry `V`, `||sum X^2|| = r^2 < 1`.
pub fn saturated_row(rng: &mut impl Rng, d: usize, g: usize, n: usize, r: f64) -> MixedTuple {
    assert!(d >= 1);
    let tol = ToleranceConfig::default();
    let xs = hermitian_family(rng, g, n, r);
    let mut defect = identity(n);
    for x in &xs {
        defect -= x * x;
    }
    let root = psd_sqrt(&hermitian_part(&defect), &tol).expect("defect is positive definite");
    let row = root * coisometry(rng, n, d * n);
    let ts = (0..d).map(|i| row.columns(i * n, n).into_owned()).collect();
    MixedTuple::new(ts, xs, &tol).expect("well-formed tuple")
}
