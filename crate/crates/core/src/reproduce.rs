//! Deterministic reproduction of every acceptance check, in canonical order.
//!
//! Each criterion draws from its own seeded stream derived from
//! [`RunConfig::seed`], so checks can run on separate threads and the report
//! bytes stay identical for identical configurations.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use crate::convexbody::{
    circle_grid, inscribed_ball_excluder, simplex_bounded, standard_position, subquadratic_certify, Body, CertifyMode,
    ConvexBody, TriState,
};
use crate::convexbody::{disk_in_kp_radius, kp_sweep, scalability_lower_bound, scalability_threshold_solve};
use crate::error::{Error, Result};
use crate::matrange::{
    aep_dilation_search, dilation_ansatz, paraboloid_bound, refute_dilation_kp, state_image, wmax_membership,
};
use crate::mixedsets::{
    check_witness, dilate_to_maximal, is_maximal, mixed_member, witness_dilation, FailedCondition, MixedTuple,
};
use crate::numkernel::{frobenius, hermitian_eig, identity, matrix_unit, op_norm, real_matrix, ToleranceConfig};
use crate::pencil::{build_mixed_pencil, decompose_tuple, recompose_tuple, spectrahedron_member, MatrixTuple};
use crate::random::{self, SeededRng};
use crate::report::{digest, Check, Curve, RunConfig, Status, VerificationReport};

/// Static description of one acceptance check.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub anchor: &'static str,
}

pub const CRITERIA: [Criterion; 14] = [
    Criterion {
        id: 1,
        name: "maximality-biconditional",
        anchor: "mixed-sets/maximality-theorem",
    },
    Criterion {
        id: 2,
        name: "unitary-law",
        anchor: "mixed-sets/unitary-recovery",
    },
    Criterion {
        id: 3,
        name: "no-finite-maximality",
        anchor: "mixed-sets/no-absolute-extreme-points",
    },
    Criterion {
        id: 4,
        name: "dilation-algorithm",
        anchor: "mixed-sets/caratheodory-dilation",
    },
    Criterion {
        id: 5,
        name: "hand-dilation-instance",
        anchor: "mixed-sets/gamma-rule-instance",
    },
    Criterion {
        id: 6,
        name: "pencil-sum-square-agreement",
        anchor: "pencil/mixed-set-coefficients",
    },
    Criterion {
        id: 7,
        name: "conjugation-witness",
        anchor: "pencil/conjugation-witness",
    },
    Criterion {
        id: 8,
        name: "paraboloid-constant",
        anchor: "geometry/paraboloid-theorem",
    },
    Criterion {
        id: 9,
        name: "subquadratic-trichotomy",
        anchor: "geometry/subquadratic-theorem",
    },
    Criterion {
        id: 10,
        name: "simplex-bounded-gap",
        anchor: "geometry/kp-example",
    },
    Criterion {
        id: 11,
        name: "disk-containment",
        anchor: "geometry/disk-containment-lemma",
    },
    Criterion {
        id: 12,
        name: "scalability-bound",
        anchor: "geometry/non-scalability",
    },
    Criterion {
        id: 13,
        name: "wmax-sanity",
        anchor: "matrix-range/anticommuting-pair",
    },
    Criterion {
        id: 14,
        name: "refutation-generator",
        anchor: "geometry/kp-dilation-refutation",
    },
];

/// Result of one criterion before it is wrapped into a [`Check`].
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub inputs: Value,
    pub evidence: Value,
    pub tolerances: BTreeMap<String, f64>,
}

fn tolerances(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Independent stream for criterion `id`.
fn stream(seed: u64, id: usize) -> SeededRng {
    random::seeded(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Run one criterion and wrap it as a report check. Internal errors become `fail`.
pub fn run_criterion(id: usize, cfg: &RunConfig) -> Result<Check> {
    let crit = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => c01_maximality(cfg),
        2 => c02_unitary(cfg),
        3 => c03_no_finite(cfg),
        4 => c04_dilation(cfg),
        5 => c05_hand_instance(cfg),
        6 => c06_pencil_agreement(cfg),
        7 => c07_conjugation(cfg),
        8 => c08_paraboloid(cfg),
        9 => c09_trichotomy(cfg),
        10 => c10_gap(cfg),
        11 => c11_disk(cfg),
        12 => c12_scalability(cfg),
        13 => c13_wmax(cfg),
        14 => c14_refutation(cfg),
        _ => unreachable!("criterion table and dispatch agree"),
    };
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        status: Status::Fail,
        inputs: json!({ "seed": cfg.seed }),
        evidence: json!({ "error": e.to_string() }),
        tolerances: BTreeMap::new(),
    });
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(Check {
        name: format!("c{:02}-{}", crit.id, crit.name),
        anchor: crit.anchor.to_string(),
        inputs_digest: digest(&outcome.inputs),
        status: outcome.status,
        evidence: outcome.evidence,
        tolerances: outcome.tolerances,
        wall_time_ms: cfg.record_wall_time.then_some(elapsed),
    })
}

/// Every criterion, run on scoped threads and assembled in table order.
pub fn reproduce_all(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let checks = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|c| scope.spawn(move || run_criterion(c.id, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect::<Result<Vec<Check>>>()
    })?;
    Ok(VerificationReport::new(cfg.clone(), checks))
}

/// Curve tables: `r(c)`, `M(c)` for `K_1.5` and the subquadratic trace at the origin.
pub fn curves(cfg: &RunConfig) -> Result<Vec<Curve>> {
    let cs: Vec<f64> = (1..=20).map(|k| 0.1 * 0.7f64.powi(k)).collect();
    let rows = kp_sweep(1.5, &cs)?
        .into_iter()
        .map(|r| vec![r.c, r.radius, r.m_bound.unwrap_or(f64::NAN)])
        .collect();
    let sweep = Curve::new("kp_sweep_p1.5", &["c", "radius", "m_bound"], rows)?;
    let s = standard_position(&ConvexBody::Kp { p: 1.5 }, &[0.0, 0.0], &[0.0, -1.0], 1e-9)?;
    let report = subquadratic_certify(&s, &cfg.grids.radius, CertifyMode::Sampled)?;
    let trace = report
        .trace
        .iter()
        .map(|t| vec![t.k as f64, t.radius, t.min_f, t.rho.unwrap_or(f64::NAN)])
        .collect();
    let trace = Curve::new("subquadratic_trace_p1.5", &["k", "radius", "min_f", "rho"], trace)?;
    Ok(vec![sweep, trace])
}

fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn draw_member(rng: &mut SeededRng, family: usize, delta: f64, tol: &ToleranceConfig) -> Result<MixedTuple> {
    let n = rng.random_range(1..=6);
    let g = rng.random_range(0..=3);
    Ok(match family {
        0 => {
            let r = uniform(rng, 0.2, 0.8);
            random::maximal_d1(rng, g, n, r)
        }
        1 => {
            let d = rng.random_range(1..=3);
            let r = uniform(rng, 0.3, 0.95);
            random::mixed_with_norm(rng, d, g, n, r)
        }
        2 => random::saturated_singular_d1(rng, g.max(1), n),
        3 => {
            let d = rng.random_range(2..=3);
            let r = uniform(rng, 0.2, 0.8);
            random::saturated_row(rng, d, g, n, r)
        }
        _ => {
            let small = rng.random_range(1..=3);
            let r = uniform(rng, 0.3, 0.95);
            let t = random::mixed_with_norm(rng, 1, g, small, r);
            dilate_to_maximal(&t, delta, tol)?.maximal
        }
    })
}

#[derive(Default)]
struct WitnessStats {
    count: usize,
    worst_member_margin: Option<f64>,
    worst_compression: f64,
    min_nontriviality: Option<f64>,
}

impl WitnessStats {
    fn record(&mut self, t: &MixedTuple, w: &crate::mixedsets::DilationWitness, tol: &ToleranceConfig) -> Result<()> {
        let chk = check_witness(t, w, tol)?;
        self.count += 1;
        self.worst_member_margin = Some(
            self.worst_member_margin
                .map_or(chk.member_margin, |m| m.min(chk.member_margin)),
        );
        self.worst_compression = self.worst_compression.max(chk.compression_error);
        self.min_nontriviality = Some(
            self.min_nontriviality
                .map_or(chk.nontriviality, |m| m.min(chk.nontriviality)),
        );
        Ok(())
    }

    fn valid(&self) -> bool {
        self.worst_member_margin.is_none_or(|m| m >= -1e-9)
            && self.worst_compression <= 1e-9
            && self.min_nontriviality.is_none_or(|m| m > 1e-9)
    }

    fn evidence(&self) -> Value {
        json!({
            "witnesses": self.count,
            "worst_member_margin": self.worst_member_margin,
            "worst_compression_error": self.worst_compression,
            "min_nontriviality": self.min_nontriviality,
        })
    }
}

const WITNESS_TOLS: [(&str, f64); 3] = [
    ("witness_member_margin", -1e-9),
    ("witness_compression", 1e-9),
    ("witness_nontriviality", 1e-9),
];

fn c01_maximality(cfg: &RunConfig) -> Result<Outcome> {
    const DRAWS: usize = 640;
    const REQUIRED: usize = 500;
    let tol = &cfg.tolerances;
    let mut rng = stream(cfg.seed, 1);
    let mut accepted = 0;
    let mut skipped = 0;
    let mut maximal = 0;
    let mut mismatches = Vec::new();
    let mut stats = WitnessStats::default();
    for i in 0..DRAWS {
        let t = draw_member(&mut rng, i % 5, cfg.dilation_delta, tol)?;
        let verdict = is_maximal(&t, tol)?;
        if verdict.boundary_uncertain {
            skipped += 1;
            continue;
        }
        accepted += 1;
        match (verdict.is_maximal, witness_dilation(&t, tol)) {
            (true, Err(Error::AlreadyMaximal)) => maximal += 1,
            (false, Ok(w)) => stats.record(&t, &w, tol)?,
            (_, Err(e)) if e != Error::AlreadyMaximal => return Err(e),
            _ => mismatches.push(i),
        }
    }
    let ok = accepted >= REQUIRED && mismatches.is_empty() && maximal > 0 && stats.count > 0 && stats.valid();
    let mut tols = tolerances(&WITNESS_TOLS);
    tols.insert("eq_tol".into(), tol.eq_tol);
    tols.insert("rank_tol_factor".into(), tol.rank_tol_factor);
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "seed": cfg.seed, "draws": DRAWS, "tolerances": tol, "delta": cfg.dilation_delta }),
        evidence: json!({
            "accepted": accepted,
            "required": REQUIRED,
            "skipped_near_boundary": skipped,
            "maximal": maximal,
            "mismatches": mismatches,
            "witness": stats.evidence(),
        }),
        tolerances: tols,
    })
}

fn c02_unitary(cfg: &RunConfig) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let mut rng = stream(cfg.seed, 2);
    let mut unitary_maximal = 0;
    let mut worst_eq: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let u = random::unitary(&mut rng, n);
        let v = is_maximal(&MixedTuple::new(vec![u], vec![], tol)?, tol)?;
        worst_eq = worst_eq.max(v.condition_margins.eq_margin);
        if v.is_maximal {
            unitary_maximal += 1;
        }
    }
    let mut contraction_rejected = 0;
    let mut sum_square_witnesses = 0;
    let mut stats = WitnessStats::default();
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let t = random::gaussian_matrix(&mut rng, n, n);
        let t = t.scale(0.9 / op_norm(&t));
        let mt = MixedTuple::new(vec![t], vec![], tol)?;
        let v = is_maximal(&mt, tol)?;
        if !v.is_maximal {
            contraction_rejected += 1;
        }
        if let Some(w) = &v.witness {
            stats.record(&mt, w, tol)?;
            if w.failed_condition == FailedCondition::SumSquare {
                sum_square_witnesses += 1;
            }
        }
    }
    let ok = unitary_maximal == 100 && contraction_rejected == 100 && stats.count == 100 && stats.valid();
    let mut tols = tolerances(&WITNESS_TOLS);
    tols.insert("eq_tol".into(), tol.eq_tol);
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "seed": cfg.seed, "unitaries": 100, "contractions": 100, "norm": 0.9, "tolerances": tol }),
        evidence: json!({
            "unitaries_maximal": unitary_maximal,
            "worst_unitary_eq_margin": worst_eq,
            "contractions_non_maximal": contraction_rejected,
            "sum_square_witnesses": sum_square_witnesses,
            "witness": stats.evidence(),
        }),
        tolerances: tols,
    })
}

fn c03_no_finite(cfg: &RunConfig) -> Result<Outcome> {
    const INSTANCES: usize = 200;
    let tol = &cfg.tolerances;
    let mut rng = stream(cfg.seed, 3);
    let mut non_maximal = 0;
    let mut deficit_ok = 0;
    let mut typed_refusals = 0;
    let mut min_excess = usize::MAX;
    let mut stats = WitnessStats::default();
    for i in 0..INSTANCES {
        let d = rng.random_range(2..=3);
        let g = rng.random_range(0..=3);
        let n = rng.random_range(1..=6);
        let r = uniform(&mut rng, 0.2, 0.95);
        let t = if i % 2 == 0 {
            random::mixed_with_norm(&mut rng, d, g, n, r)
        } else {
            random::saturated_row(&mut rng, d, g, n, r.min(0.8))
        };
        let v = is_maximal(&t, tol)?;
        if !v.is_maximal {
            non_maximal += 1;
        }
        let deficit = v.condition_margins.blockrow_rank_deficit;
        if deficit >= (d - 1) * n {
            deficit_ok += 1;
        }
        min_excess = min_excess.min(deficit.saturating_sub((d - 1) * n));
        if let Some(w) = &v.witness {
            stats.record(&t, w, tol)?;
        }
        if matches!(
            dilate_to_maximal(&t, cfg.dilation_delta, tol),
            Err(Error::NoFiniteMaximalDilation { .. })
        ) {
            typed_refusals += 1;
        }
    }
    let ok = non_maximal == INSTANCES && deficit_ok == INSTANCES && typed_refusals == INSTANCES && stats.valid();
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "seed": cfg.seed, "instances": INSTANCES, "tolerances": tol }),
        evidence: json!({
            "instances": INSTANCES,
            "non_maximal": non_maximal,
            "deficit_bound_holds": deficit_ok,
            "min_deficit_excess": min_excess,
            "typed_no_finite_dilation": typed_refusals,
            "witness": stats.evidence(),
        }),
        tolerances: tolerances(&WITNESS_TOLS),
    })
}

fn c04_dilation(cfg: &RunConfig) -> Result<Outcome> {
    const INSTANCES: usize = 200;
    let tol = &cfg.tolerances;
    let delta = cfg.dilation_delta;
    let mut rng = stream(cfg.seed, 4);
    let mut worst_eq: f64 = 0.0;
    let mut worst_compression: f64 = 0.0;
    let mut maximal = 0;
    let mut preprocessed = 0;
    let mut min_t_sigma = f64::INFINITY;
    for i in 0..INSTANCES {
        let g = i % 4;
        let n = rng.random_range(1..=6);
        let r = uniform(&mut rng, 0.3, 0.95);
        let t = match i % 3 {
            0 => random::mixed_with_norm(&mut rng, 1, g, n, r),
            1 => {
                let base = random::mixed_with_norm(&mut rng, 1, g, n, r);
                let v = random::unit_vector(&mut rng, n);
                let proj = identity(n) - &v * v.adjoint();
                let ts = vec![&base.ts()[0] * proj];
                MixedTuple::new(ts, base.xs().to_vec(), tol)?
            }
            _ if g >= 1 => random::saturated_singular_d1(&mut rng, g, n),
            _ => random::maximal_d1(&mut rng, 0, n, 0.0),
        };
        let out = dilate_to_maximal(&t, delta, tol)?;
        if out.preprocessing_shift > 0.0 {
            preprocessed += 1;
        }
        min_t_sigma = min_t_sigma.min(out.t_sigma_min);
        let m = &out.maximal;
        worst_eq = worst_eq.max(frobenius(&(identity(m.level()) - m.sum_square())));
        if is_maximal(m, tol)?.is_maximal {
            maximal += 1;
        }
        worst_compression = worst_compression.max(m.compress_top_left(n).distance(&t));
    }
    let ok = worst_eq <= 1e-9 && maximal == INSTANCES && worst_compression <= 2.0 * delta;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "seed": cfg.seed, "instances": INSTANCES, "delta": delta, "tolerances": tol }),
        evidence: json!({
            "instances": INSTANCES,
            "worst_sum_square_defect": worst_eq,
            "maximal": maximal,
            "worst_compression_distance": worst_compression,
            "preprocessed": preprocessed,
            "min_t_sigma": min_t_sigma,
        }),
        tolerances: tolerances(&[("sum_square_defect", 1e-9), ("compression_distance", 2.0 * delta)]),
    })
}

fn c05_hand_instance(cfg: &RunConfig) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let t = MixedTuple::new(vec![real_matrix(1, 1, &[0.5])], vec![real_matrix(1, 1, &[0.0])], tol)?;
    let out = dilate_to_maximal(&t, cfg.dilation_delta, tol)?;
    let s = &out.maximal.ts()[0];
    let y = &out.maximal.xs()[0];
    let r3 = 3f64.sqrt();
    let s_expected = real_matrix(2, 2, &[0.5, r3 / 2.0, -0.5, 1.0 / (2.0 * r3)]);
    let y_expected = real_matrix(2, 2, &[0.0, 0.0, 0.0, (2.0f64 / 3.0).sqrt()]);
    let s_error = crate::numkernel::max_abs(&(s - &s_expected));
    let y_error = crate::numkernel::max_abs(&(y - &y_expected));
    let identity_defect = frobenius(&(identity(2) - s * s.adjoint() - y * y));
    let det = s.determinant();
    let ok = s_error <= 1e-12 && y_error <= 1e-12 && identity_defect <= 1e-12 && det.norm() > 1e-12;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "t": 0.5, "x": 0.0, "delta": cfg.dilation_delta }),
        evidence: json!({
            "s": [[s[(0, 0)].re, s[(0, 1)].re], [s[(1, 0)].re, s[(1, 1)].re]],
            "y_diag": [y[(0, 0)].re, y[(1, 1)].re],
            "gamma": out.gamma,
            "s_entry_error": s_error,
            "y_entry_error": y_error,
            "identity_defect": identity_defect,
            "det_s": [det.re, det.im],
        }),
        tolerances: tolerances(&[("entry", 1e-12), ("identity_defect", 1e-12)]),
    })
}

fn c06_pencil_agreement(cfg: &RunConfig) -> Result<Outcome> {
    const INSTANCES: usize = 500;
    let tol = &cfg.tolerances;
    let mut rng = stream(cfg.seed, 6);
    let mut compared = 0;
    let mut members = 0;
    let mut disagreements = 0;
    let mut worst_margin_gap: f64 = 0.0;
    for _ in 0..INSTANCES {
        let (d, g) = loop {
            let d = rng.random_range(0..=3);
            let g = rng.random_range(0..=3);
            if d + g > 0 {
                break (d, g);
            }
        };
        let n = rng.random_range(1..=6);
        let r = uniform(&mut rng, 0.5, 1.5);
        let t = random::mixed_with_norm(&mut rng, d, g, n, r);
        let direct = mixed_member(&t, tol)?;
        let pencil = build_mixed_pencil(d, g)?;
        let via_pencil = spectrahedron_member(&pencil, &decompose_tuple(t.tuple()), tol)?;
        if direct.margin.abs() <= 1e-9 || via_pencil.margin.abs() <= 1e-9 {
            continue;
        }
        compared += 1;
        if direct.member {
            members += 1;
        }
        if direct.member != via_pencil.member {
            disagreements += 1;
        }
        // Pencil margin is 1 - ||row||, sum-square margin is 1 - ||row||^2.
        let row_norm = (1.0 - direct.margin).max(0.0).sqrt();
        worst_margin_gap = worst_margin_gap.max((via_pencil.margin - (1.0 - row_norm)).abs());
    }
    let ok = disagreements == 0 && compared > 0 && members > 0 && members < compared;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "seed": cfg.seed, "instances": INSTANCES, "tolerances": tol }),
        evidence: json!({
            "instances": INSTANCES,
            "compared": compared,
            "members": members,
            "disagreements": disagreements,
            "worst_margin_relation_gap": worst_margin_gap,
        }),
        tolerances: tolerances(&[("margin_exclusion", 1e-9), ("psd_tol", tol.psd_tol)]),
    })
}

fn c07_conjugation(cfg: &RunConfig) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let z = MatrixTuple::general(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 1)])?;
    let x = decompose_tuple(&z);
    let pencil = build_mixed_pencil(2, 0)?;
    let member = spectrahedron_member(&pencil, &x, tol)?;
    let conj = recompose_tuple(&x.conjugate(), z.sa_mask())?;
    let conj_mixed = MixedTuple::from_tuple(2, 0, conj)?;
    let top = hermitian_eig(&conj_mixed.sum_square())?.max();
    let ok = member.member && member.margin.abs() <= 1e-12 && (top - 2.0).abs() <= 1e-12;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "tuple": ["E12", "E22"], "level": 2 }),
        evidence: json!({
            "member": member.member,
            "member_margin": member.margin,
            "conjugate_sum_square_top": top,
        }),
        tolerances: tolerances(&[("margin", 1e-12), ("top_eigenvalue", 1e-12)]),
    })
}

fn ellipse_tuple() -> Result<MatrixTuple> {
    MatrixTuple::selfadjoint(vec![
        real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]),
    ])
}

fn pauli_pair() -> Result<MatrixTuple> {
    MatrixTuple::selfadjoint(vec![
        real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]),
    ])
}

fn c08_paraboloid(cfg: &RunConfig) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let a = ellipse_tuple()?;
    let cert = paraboloid_bound(&a, &[0.0, 0.0], &[0.0, -1.0], tol, cfg.seed)?;
    let mut rng = stream(cfg.seed, 8);
    let mut worst_slack = f64::INFINITY;
    for _ in 0..cfg.grids.state_samples {
        let v = random::unit_vector(&mut rng, 2);
        let x = state_image(a.entries(), &v);
        worst_slack = worst_slack.min(x[1] - 0.25 * x[0] * x[0]);
    }
    let ellipse_ok = (cert.m - 0.25).abs() <= 1e-12 && worst_slack >= -1e-9 && cert.verified;

    let disk = pauli_pair()?;
    let points = cfg.grids.circle_directions / 10;
    let mut typed = 0;
    let mut certified = Vec::new();
    for (k, u) in circle_grid(points).iter().enumerate() {
        match paraboloid_bound(&disk, u, u, tol, cfg.seed) {
            Err(Error::Hypothesis(_)) => typed += 1,
            Ok(c) => certified.push(json!({ "index": k, "point": u, "m": c.m, "worst_slack": c.worst_slack })),
            Err(e) => return Err(e),
        }
    }
    let disk_ok = typed == points;
    let first_certificates: Vec<&Value> = certified.iter().take(4).collect();
    Ok(Outcome {
        status: Status::from_bool(ellipse_ok && disk_ok),
        inputs: json!({
            "seed": cfg.seed,
            "ellipse": ellipse_tuple()?,
            "disk": pauli_pair()?,
            "boundary_points": points,
            "states": cfg.grids.state_samples,
        }),
        evidence: json!({
            "ellipse": {
                "m": cert.m,
                "epsilon": cert.epsilon,
                "kernel_dim": cert.kernel_dim,
                "certificate_worst_slack": cert.worst_slack,
                "independent_worst_slack": worst_slack,
                "passed": ellipse_ok,
            },
            "disk": {
                "boundary_points": points,
                "typed_hypothesis_failures": typed,
                "certificates_issued": certified.len(),
                "sample_certificates": first_certificates,
                "passed": disk_ok,
            },
        }),
        tolerances: tolerances(&[("m", 1e-12), ("state_slack", 1e-9)]),
    })
}

fn origin_standard(p: f64) -> Result<crate::convexbody::StandardPosition> {
    standard_position(&ConvexBody::kp(p)?, &[0.0, 0.0], &[0.0, -1.0], 1e-9)
}

fn c09_trichotomy(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grids.radius;
    let mut rows = Vec::new();
    let mut ok = true;
    for &p in &[1.25, 1.5, 1.75, 2.0, 2.5, 3.0] {
        let s = origin_standard(p)?;
        let sub = subquadratic_certify(&s, &grid, CertifyMode::Sampled)?;
        let ball = inscribed_ball_excluder(&s.body, &[0.0, 0.0], &[0.0, -1.0], &grid.radii())?;
        let (want_sub, want_ball) = if p < 2.0 {
            (TriState::Yes, TriState::No)
        } else {
            (TriState::No, TriState::Yes)
        };
        let both = sub.verdict == TriState::Yes && ball.verdict == TriState::Yes;
        let row_ok = sub.verdict == want_sub && ball.verdict == want_ball && !both;
        ok &= row_ok;
        rows.push(json!({
            "p": p,
            "subquadratic": sub.verdict,
            "growth_ratio": sub.growth_ratio,
            "ball": ball.verdict,
            "ball_radius": ball.certificate.as_ref().map(|c| c.radius),
            "passed": row_ok,
        }));
    }
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "radius_grid": grid, "p": [1.25, 1.5, 1.75, 2.0, 2.5, 3.0] }),
        evidence: json!({ "rows": rows }),
        tolerances: tolerances(&[("ball_slack_resolutions", 64.0), ("noise_floor_resolutions", 1e3)]),
    })
}

/// Dense vector-state check of the 2x2 ansatz against `K_2`.
fn ansatz_k2_margin(a: f64, b: f64, beta: f64) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 0..=4000 {
        let th = std::f64::consts::FRAC_PI_2 * i as f64 / 4000.0;
        let (s, c) = th.sin_cos();
        for j in 0..32 {
            let phi = std::f64::consts::TAU * j as f64 / 32.0;
            let x = 2.0 * a * c * s * phi.cos() + b * s * s;
            let y = beta * s * s;
            worst = worst.min((y - x * x).min(1.0 - y));
        }
    }
    worst
}

fn c10_gap(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances.eq_tol;
    let grid = &cfg.grids.search;
    let s15 = origin_standard(1.5)?;
    let simplex = simplex_bounded(&s15.body, &[0.0, 0.0], 1e-12)?;
    let sub = subquadratic_certify(&s15, &cfg.grids.radius, CertifyMode::Sampled)?;
    let search15 = aep_dilation_search(&s15, grid, tol)?;
    let kp_ok = simplex.verdict == TriState::No
        && sub.verdict == TriState::Yes
        && search15.hit.is_none()
        && search15.candidates_tested >= 1000;

    let s2 = origin_standard(2.0)?;
    let search2 = aep_dilation_search(&s2, grid, tol)?;
    let hit = search2.hit.as_ref().map(|h| {
        json!({
            "a": h.a,
            "b": h.b,
            "beta": h.beta,
            "wmax_margin": h.membership.margin,
            "state_margin": h.membership.state_margin,
            "analytic_margin": ansatz_k2_margin(h.a, h.b, h.beta),
        })
    });
    let hit_ok = search2
        .hit
        .as_ref()
        .is_some_and(|h| h.a != 0.0 && ansatz_k2_margin(h.a, h.b, h.beta) >= -1e-9);
    let reference = wmax_membership(
        &s2,
        &dilation_ansatz(2, 0.2, 0.0, 0.16),
        &circle_grid(cfg.grids.circle_directions),
        tol,
    )?;
    let reference_analytic = ansatz_k2_margin(0.2, 0.0, 0.16);
    let ok = kp_ok && hit_ok;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "search_grid": grid, "radius_grid": cfg.grids.radius, "tol": tol }),
        evidence: json!({
            "k1_5": {
                "simplex_bounded": simplex.verdict,
                "active_rank": simplex.active_rank,
                "subquadratic": sub.verdict,
                "search_hit": search15.hit.is_some(),
                "candidates_tested": search15.candidates_tested,
            },
            "k2": {
                "hit": hit,
                "candidates_tested": search2.candidates_tested,
                "reference_0.2_0_0.16_member": reference.member,
                "reference_analytic_margin": reference_analytic,
            },
        }),
        tolerances: tolerances(&[("wmax", tol), ("tol_active", 1e-12), ("analytic_margin", 1e-9)]),
    })
}

fn c11_disk(_cfg: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut ok = true;
    for &c in &[1e-2, 1e-3] {
        let d = disk_in_kp_radius(1.5, c)?;
        let closed = c - (1.5 * c).powi(3);
        let row_ok =
            d.min_lower_margin >= -1e-12 && d.min_upper_margin >= -1e-12 && (d.radius - closed).abs() <= 1e-12 * closed;
        ok &= row_ok;
        rows.push(json!({
            "c": c,
            "radius": d.radius,
            "samples": d.samples,
            "min_lower_margin": d.min_lower_margin,
            "min_upper_margin": d.min_upper_margin,
            "min_f_margin": d.min_f_margin,
            "passed": row_ok,
        }));
    }
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "p": 1.5, "c": [1e-2, 1e-3] }),
        evidence: json!({ "rows": rows }),
        tolerances: tolerances(&[("containment_margin", 1e-12)]),
    })
}

fn c12_scalability(_cfg: &RunConfig) -> Result<Outcome> {
    let b1 = scalability_lower_bound(1.5, 0.01)?;
    let b2 = scalability_lower_bound(1.5, 0.001)?;
    let ratio = b2.m_bound / b1.m_bound;
    // Independent route: threshold solve from the closed-form radius.
    let m1 = scalability_threshold_solve(0.01, 0.01 - (0.015f64).powi(3));
    let m2 = scalability_threshold_solve(0.001, 0.001 - (0.0015f64).powi(3));
    let gap1 = (b1.m_bound - m1).abs() / b1.m_bound;
    let gap2 = (b2.m_bound - m2).abs() / b2.m_bound;
    let ok = (b1.m_bound - 14.8148).abs() <= 1e-4
        && (b2.m_bound - 148.148).abs() <= 1e-3
        && gap1 <= 1e-9
        && gap2 <= 1e-9
        && (ratio - 10.0).abs() <= 1e-9;
    Ok(Outcome {
        status: Status::from_bool(ok),
        inputs: json!({ "p": 1.5, "c": [0.01, 0.001] }),
        evidence: json!({
            "m_bound_0.01": b1.m_bound,
            "m_bound_0.001": b2.m_bound,
            "threshold_0.01": m1,
            "threshold_0.001": m2,
            "relative_gap_0.01": gap1,
            "relative_gap_0.001": gap2,
            "ratio": ratio,
        }),
        tolerances: tolerances(&[
            ("m_0.01", 1e-4),
            ("m_0.001", 1e-3),
            ("relative_gap", 1e-9),
            ("ratio", 1e-9),
        ]),
    })
}

fn level_one_bodies() -> Result<Vec<(&'static str, ConvexBody)>> {
    Ok(vec![
        ("unit_disk", ConvexBody::unit_disk()),
        ("k1_5", ConvexBody::kp(1.5)?),
        (
            "square",
            ConvexBody::Polytope {
                vertices: vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
            },
        ),
        (
            "l3_ball",
            ConvexBody::LqBall {
                q: 3.0,
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
        ),
        (
            "ellipse_range",
            ConvexBody::MatrixRange {
                tuple: ellipse_tuple()?,
            },
        ),
    ])
}

fn c13_wmax(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances.eq_tol;
    let dirs = circle_grid(cfg.grids.circle_directions);
    let pair = wmax_membership(&ConvexBody::unit_disk(), &pauli_pair()?, &dirs, tol)?;
    let pair_ok = pair.member && pair.margin.abs() <= 1e-9;

    let mut rng = stream(cfg.seed, 13);
    let mut rows = Vec::new();
    let mut all_agree = true;
    for (name, body) in level_one_bodies()? {
        let mut agree = 0;
        let mut inside = 0;
        for _ in 0..1000 {
            let pt = [uniform(&mut rng, -1.5, 1.5), uniform(&mut rng, -1.5, 1.5)];
            let scalar = MatrixTuple::selfadjoint(vec![real_matrix(1, 1, &[pt[0]]), real_matrix(1, 1, &[pt[1]])])?;
            let w = wmax_membership(&body, &scalar, &dirs, tol)?;
            let c = body.contains(&pt, tol);
            if c {
                inside += 1;
            }
            if w.member == c {
                agree += 1;
            }
        }
        all_agree &= agree == 1000;
        rows.push(json!({ "body": name, "points": 1000, "agree": agree, "inside": inside }));
    }
    Ok(Outcome {
        status: Status::from_bool(pair_ok && all_agree),
        inputs: json!({ "seed": cfg.seed, "directions": cfg.grids.circle_directions, "tol": tol }),
        evidence: json!({
            "anticommuting_pair": {
                "member": pair.member,
                "margin": pair.margin,
                "state_margin": pair.state_margin,
            },
            "level_one": rows,
        }),
        tolerances: tolerances(&[("pair_margin", 1e-9), ("membership", tol)]),
    })
}

fn c14_refutation(cfg: &RunConfig) -> Result<Outcome> {
    const TRIPLES: usize = 100;
    let p = 1.5;
    let mut rng = stream(cfg.seed, 14);
    let mut refuted = 0;
    let mut min_margin = f64::INFINITY;
    let mut max_k = 0;
    for _ in 0..TRIPLES {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let a = sign * uniform(&mut rng, 1e-3, 1.0);
        let b = uniform(&mut rng, -1.0, 1.0);
        let beta = uniform(&mut rng, 0.0, 2.0);
        let r = refute_dilation_kp(p, a, b, beta)?;
        let t = r.t;
        let lhs = (2.0 * a.abs() * t * (1.0 - t * t).sqrt() + b * t * t).abs().powf(p);
        let rhs = beta * t * t;
        if r.margin > 0.0 && lhs > rhs {
            refuted += 1;
        }
        min_margin = min_margin.min(r.margin);
        max_k = max_k.max(r.k);
    }
    let hand = refute_dilation_kp(p, 0.2, 0.0, 0.16)?;
    let hand_ok = hand.t == 0.5 && (hand.lhs - 0.0721).abs() < 5e-5 && (hand.rhs - 0.04).abs() < 1e-15;
    Ok(Outcome {
        status: Status::from_bool(refuted == TRIPLES && hand_ok),
        inputs: json!({ "seed": cfg.seed, "p": p, "triples": TRIPLES }),
        evidence: json!({
            "refuted": refuted,
            "min_margin": min_margin,
            "max_k": max_k,
            "hand_case": { "t": hand.t, "lhs": hand.lhs, "rhs": hand.rhs, "margin": hand.margin },
        }),
        tolerances: tolerances(&[("hand_lhs", 5e-5)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_ordered_and_unique() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.id, i + 1);
        }
        assert!(run_criterion(15, &RunConfig::default()).is_err());
    }

    #[test]
    fn fast_criteria_pass() {
        let cfg = RunConfig::default();
        for id in [5, 7, 11, 12, 14] {
            let c = run_criterion(id, &cfg).unwrap();
            assert_eq!(c.status, Status::Pass, "{}: {}", c.name, c.evidence);
            assert!(c.wall_time_ms.is_none());
        }
    }

    #[test]
    fn curves_are_nonempty() {
        let cs = curves(&RunConfig::default()).unwrap();
        assert_eq!(cs.len(), 2);
        let rho: Vec<f64> = cs[1].rows.iter().map(|r| r[3]).collect();
        assert!(rho.windows(2).all(|w| w[1] > w[0]));
    }
}
