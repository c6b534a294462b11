//! `mcx`: command-line front end for the mcx-core toolkit.
//!
//! Every verb writes a verification report (JSON) to `--out` or stdout.
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on
//! usage errors and unreadable or invalid input.

mod io;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mcx_core::convexbody::{
    classify_extreme_point, defining_function, disk_in_kp_radius, kp_sweep, scalability_lower_bound, standard_position,
    Body, ClassifySettings, ConvexBody,
};
use mcx_core::error::Error;
use mcx_core::json::MatrixWire;
use mcx_core::matrange::{
    aep_dilation_search, matrix_range_support, paraboloid_bound, refute_dilation_kp, wmax_membership,
};
use mcx_core::mixedsets::{check_witness, dilate_to_maximal, is_maximal, mixed_member, witness_dilation, MixedTuple};
use mcx_core::pencil::{eval_pencil, spectrahedron_member};
use mcx_core::report::{digest, Check, Curve, RunConfig, Status, VerificationReport};
use mcx_core::{HermitianPencil, MatrixTuple};

use io::{load_config, read_json, write_csv, write_report, InputError};

#[derive(Parser)]
#[command(
    name = "mcx",
    version,
    about = "Free spectrahedra, mixed row contractions and absolute extreme points"
)]
struct Cli {
    /// RunConfig JSON (overrides MCX_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hermitian monic linear pencils.
    #[command(subcommand)]
    Pencil(PencilCmd),
    /// The mixed row-contraction sets D(d, g).
    #[command(subcommand)]
    Mixed(MixedCmd),
    /// Convex bodies: extreme-point classification, standard position, F.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Matrix ranges and W^max.
    #[command(subcommand)]
    Range(RangeCmd),
    /// Closed-form quantities for K_p.
    #[command(subcommand)]
    Kp(KpCmd),
    /// Regenerate every acceptance check.
    ReproduceAll(ReproduceArgs),
}

#[derive(Args)]
struct PencilArgs {
    /// Pencil JSON.
    #[arg(long)]
    pencil: PathBuf,
    /// MatrixTuple JSON.
    #[arg(long)]
    tuple: PathBuf,
}

#[derive(Subcommand)]
enum PencilCmd {
    /// Evaluate L_A(Z).
    Eval(PencilArgs),
    /// Test L_A(Z) >= 0.
    Member(PencilArgs),
}

#[derive(Args)]
struct MixedIn {
    /// MixedTuple JSON.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum MixedCmd {
    /// Sum-square membership.
    Member(MixedIn),
    /// Maximality classification; passes when the tuple is maximal.
    Maximal(MixedIn),
    /// Dilate a member of D(1, g) to a maximal element.
    Dilate {
        #[command(flatten)]
        input: MixedIn,
        #[arg(long)]
        delta: Option<f64>,
        /// Also write the maximal dilation as MixedTuple JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Nontrivial dilation witnessing non-maximality.
    Witness {
        #[command(flatten)]
        input: MixedIn,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PointArgs {
    /// ConvexBody JSON.
    #[arg(long)]
    body: PathBuf,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    point: Vec<f64>,
    /// Outward supporting direction at the point.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    normal: Vec<f64>,
}

#[derive(Subcommand)]
enum GeomCmd {
    /// Run every extreme-point classifier.
    Classify(PointArgs),
    /// Standard position around a boundary point.
    Stdpos(PointArgs),
    /// Evaluate the defining function at shadow points.
    #[command(name = "F")]
    F {
        #[command(flatten)]
        at: PointArgs,
        /// Shadow points, flattened (g - 1 coordinates each).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        x: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum RangeCmd {
    /// Support of W_1(A) in direction c.
    Support {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        c: Vec<f64>,
    },
    /// Membership of a self-adjoint tuple in W^max(K).
    Wmax {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Paraboloid certificate at an exposed point of W_1(A).
    Paraboloid {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        point: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        direction: Vec<f64>,
    },
    /// Search for a nontrivial 2x2 dilation of a boundary point in W^max(K).
    Search(PointArgs),
    /// Refute the 2x2 dilation ansatz for K_p.
    Refute {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        beta: f64,
    },
}

#[derive(Args)]
struct KpArgs {
    #[arg(long)]
    p: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<f64>,
    /// Write the sweep as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum KpCmd {
    /// Radius of the disk at (0, c) inside K_p, with boundary verification.
    Radius(KpArgs),
    /// Lower bound on the scaling constant M.
    Bound(KpArgs),
    /// r(c) and M(c) over the given c values.
    Curve(KpArgs),
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV curves.
    #[arg(long)]
    curves: Option<PathBuf>,
}

/// One-check report for the single-verb commands.
struct Single<'a> {
    cfg: &'a RunConfig,
    name: &'static str,
    anchor: &'static str,
    inputs: Value,
}

impl Single<'_> {
    fn finish(self, status: Status, evidence: Value, tolerances: &[(&str, f64)]) -> VerificationReport {
        let check = Check {
            name: self.name.to_string(),
            anchor: self.anchor.to_string(),
            inputs_digest: digest(&self.inputs),
            status,
            evidence,
            tolerances: tolerances
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<_, _>>(),
            wall_time_ms: None,
        };
        VerificationReport::new(self.cfg.clone(), vec![check])
    }
}

fn membership_status(member: bool, uncertain: bool) -> Status {
    match (member, uncertain) {
        (_, true) => Status::BoundaryUncertain,
        (true, false) => Status::Pass,
        (false, false) => Status::Fail,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable evidence")
}

fn run(cli: Cli) -> Result<VerificationReport, InputError> {
    let mut cfg = load_config(cli.config.as_deref())?;
    let tol = cfg.tolerances;
    let report = match cli.command {
        Command::Pencil(cmd) => {
            let (args, member) = match &cmd {
                PencilCmd::Eval(a) => (a, false),
                PencilCmd::Member(a) => (a, true),
            };
            let pencil: HermitianPencil = read_json(&args.pencil)?;
            let tuple: MatrixTuple = read_json(&args.tuple)?;
            let single = Single {
                cfg: &cfg,
                name: if member { "pencil-member" } else { "pencil-eval" },
                anchor: "pencil/free-spectrahedron",
                inputs: json!({ "pencil": pencil, "tuple": tuple }),
            };
            if member {
                let m = spectrahedron_member(&pencil, &tuple, &tol)?;
                single.finish(Status::from_bool(m.member), to_value(&m), &[("psd_tol", tol.psd_tol)])
            } else {
                let l = eval_pencil(&pencil, &tuple)?;
                single.finish(Status::Pass, json!({ "value": MatrixWire::from(&l) }), &[])
            }
        }
        Command::Mixed(cmd) => mixed(cmd, &cfg)?,
        Command::Geom(cmd) => geom(cmd, &cfg)?,
        Command::Range(cmd) => range(cmd, &cfg)?,
        Command::Kp(cmd) => kp(cmd, &cfg)?,
        Command::ReproduceAll(args) => {
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            let report = mcx_core::reproduce::reproduce_all(&cfg)?;
            let curves_dir = args
                .curves
                .clone()
                .or_else(|| cfg.output.curves_dir.as_ref().map(PathBuf::from));
            if let Some(dir) = curves_dir {
                std::fs::create_dir_all(&dir).map_err(|e| InputError::Io {
                    path: dir.clone(),
                    message: e.to_string(),
                })?;
                for curve in mcx_core::reproduce::curves(&cfg)? {
                    write_csv(&curve, &dir.join(format!("{}.csv", curve.name)))?;
                }
            }
            let out = cli
                .out
                .clone()
                .or_else(|| cfg.output.report.as_ref().map(PathBuf::from));
            write_report(&report, out.as_deref())?;
            return Ok(report);
        }
    };
    write_report(&report, cli.out.as_deref())?;
    Ok(report)
}

fn mixed(cmd: MixedCmd, cfg: &RunConfig) -> Result<VerificationReport, InputError> {
    let tol = cfg.tolerances;
    let (name, path) = match &cmd {
        MixedCmd::Member(i) => ("mixed-member", &i.input),
        MixedCmd::Maximal(i) => ("mixed-maximal", &i.input),
        MixedCmd::Dilate { input, .. } => ("mixed-dilate", &input.input),
        MixedCmd::Witness { input, .. } => ("mixed-witness", &input.input),
    };
    let t: MixedTuple = read_json(path)?;
    let single = Single {
        cfg,
        name,
        anchor: "mixed-sets/maximality-theorem",
        inputs: json!({ "tuple": t, "tolerances": tol }),
    };
    Ok(match cmd {
        MixedCmd::Member(_) => {
            let m = mixed_member(&t, &tol)?;
            single.finish(Status::from_bool(m.member), to_value(&m), &[("psd_tol", tol.psd_tol)])
        }
        MixedCmd::Maximal(_) => {
            let v = is_maximal(&t, &tol)?;
            let status = membership_status(v.is_maximal, v.boundary_uncertain);
            single.finish(
                status,
                to_value(&v),
                &[("eq_tol", tol.eq_tol), ("rank_tol_factor", tol.rank_tol_factor)],
            )
        }
        MixedCmd::Dilate { delta, emit, .. } => {
            let delta = delta.unwrap_or(cfg.dilation_delta);
            let out = dilate_to_maximal(&t, delta, &tol)?;
            let n = t.level();
            let m = &out.maximal;
            let defect = mcx_core::numkernel::frobenius(&(mcx_core::numkernel::identity(m.level()) - m.sum_square()));
            let maximal = is_maximal(m, &tol)?.is_maximal;
            let compression = m.compress_top_left(n).distance(&t);
            if let Some(path) = emit {
                write_json(&path, m)?;
            }
            let ok = defect <= tol.eq_tol && maximal && compression <= 2.0 * delta;
            single.finish(
                Status::from_bool(ok),
                json!({
                    "dilation": out,
                    "sum_square_defect": defect,
                    "is_maximal": maximal,
                    "compression_distance": compression,
                }),
                &[("eq_tol", tol.eq_tol), ("compression_distance", 2.0 * delta)],
            )
        }
        MixedCmd::Witness { emit, .. } => match witness_dilation(&t, &tol) {
            Ok(w) => {
                let chk = check_witness(&t, &w, &tol)?;
                if let Some(path) = emit {
                    write_json(&path, &w.dilated)?;
                }
                let ok = chk.member_margin >= -1e-9 && chk.compression_error <= 1e-9 && chk.nontriviality > 1e-9;
                single.finish(
                    Status::from_bool(ok),
                    json!({ "witness": w, "check": chk }),
                    &[("member_margin", -1e-9), ("compression", 1e-9), ("nontriviality", 1e-9)],
                )
            }
            Err(Error::AlreadyMaximal) => single.finish(
                Status::Fail,
                json!({ "reason": Error::AlreadyMaximal.to_string() }),
                &[("eq_tol", tol.eq_tol)],
            ),
            Err(e) => return Err(e.into()),
        },
    })
}

fn write_json<T: serde::Serialize>(path: &std::path::Path, value: &T) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    std::fs::write(path, text + "\n").map_err(|e| InputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn geom(cmd: GeomCmd, cfg: &RunConfig) -> Result<VerificationReport, InputError> {
    let at = match &cmd {
        GeomCmd::Classify(a) | GeomCmd::Stdpos(a) => a,
        GeomCmd::F { at, .. } => at,
    };
    let body: ConvexBody = read_json(&at.body)?;
    body.validate()?;
    let inputs = json!({ "body": body, "point": at.point, "normal": at.normal });
    Ok(match &cmd {
        GeomCmd::Classify(_) => {
            let settings = ClassifySettings {
                radius_grid: cfg.grids.radius,
                ..ClassifySettings::default()
            };
            let r = classify_extreme_point(&body, &at.point, &at.normal, &settings)?;
            let single = Single {
                cfg,
                name: "geom-classify",
                anchor: "geometry/containment-chain",
                inputs,
            };
            let status = Status::from_bool(r.chain_consistent());
            single.finish(
                status,
                to_value(&r),
                &[
                    ("tol_active", settings.tol_active),
                    ("boundary_tol", settings.boundary_tol),
                ],
            )
        }
        GeomCmd::Stdpos(_) => {
            let s = standard_position(&body, &at.point, &at.normal, 1e-9)?;
            let single = Single {
                cfg,
                name: "geom-stdpos",
                anchor: "geometry/standard-position",
                inputs,
            };
            single.finish(Status::Pass, to_value(&s), &[("boundary_tol", 1e-9)])
        }
        GeomCmd::F { x, .. } => {
            let s = standard_position(&body, &at.point, &at.normal, 1e-9)?;
            let k = body.dimension() - 1;
            if x.len() % k != 0 {
                return Err(InputError::Invalid(format!(
                    "--x has {} values, not a multiple of the shadow dimension {k}",
                    x.len()
                )));
            }
            let mut rows = Vec::new();
            for chunk in x.chunks(k) {
                let f = defining_function(&s, chunk)?;
                rows.push(json!({ "x": chunk, "F": f }));
            }
            let single = Single {
                cfg,
                name: "geom-F",
                anchor: "geometry/defining-function",
                inputs: json!({ "body": body, "point": at.point, "normal": at.normal, "x": x }),
            };
            single.finish(Status::Pass, json!({ "values": rows }), &[("boundary_tol", 1e-9)])
        }
    })
}

fn range(cmd: RangeCmd, cfg: &RunConfig) -> Result<VerificationReport, InputError> {
    let tol = cfg.tolerances;
    Ok(match cmd {
        RangeCmd::Support { tuple, c } => {
            let a: MatrixTuple = read_json(&tuple)?;
            let sp = matrix_range_support(&a, &c)?;
            Single {
                cfg,
                name: "range-support",
                anchor: "matrix-range/support-function",
                inputs: json!({ "tuple": a, "c": c }),
            }
            .finish(Status::Pass, to_value(&sp), &[])
        }
        RangeCmd::Wmax { body, tuple } => {
            let k: ConvexBody = read_json(&body)?;
            k.validate()?;
            let x: MatrixTuple = read_json(&tuple)?;
            let grid = mcx_core::convexbody::direction_grid(k.dimension());
            let grid = if k.dimension() == 2 {
                mcx_core::convexbody::circle_grid(cfg.grids.circle_directions)
            } else {
                grid
            };
            let m = wmax_membership(&k, &x, &grid, tol.eq_tol)?;
            let status = membership_status(m.member, m.boundary_uncertain && m.violating_image.is_none());
            Single {
                cfg,
                name: "range-wmax",
                anchor: "matrix-range/wmax",
                inputs: json!({ "body": k, "tuple": x, "directions": grid.len() }),
            }
            .finish(status, to_value(&m), &[("membership", tol.eq_tol)])
        }
        RangeCmd::Paraboloid {
            tuple,
            point,
            direction,
        } => {
            let a: MatrixTuple = read_json(&tuple)?;
            let single = Single {
                cfg,
                name: "range-paraboloid",
                anchor: "geometry/paraboloid-theorem",
                inputs: json!({ "tuple": a, "point": point, "direction": direction, "seed": cfg.seed }),
            };
            match paraboloid_bound(&a, &point, &direction, &tol, cfg.seed) {
                Ok(cert) => {
                    let status = Status::from_bool(cert.verified);
                    single.finish(status, to_value(&cert), &[("state_slack", 1e-9)])
                }
                Err(Error::Hypothesis(h)) => single.finish(
                    Status::Fail,
                    json!({ "hypothesis_failure": h.to_string() }),
                    &[("psd_tol", tol.psd_tol), ("eq_tol", tol.eq_tol)],
                ),
                Err(e) => return Err(e.into()),
            }
        }
        RangeCmd::Search(at) => {
            let body: ConvexBody = read_json(&at.body)?;
            body.validate()?;
            let s = standard_position(&body, &at.point, &at.normal, 1e-9)?;
            let search = aep_dilation_search(&s, &cfg.grids.search, tol.eq_tol)?;
            let evidence = json!({
                "hit": search.hit.as_ref().map(|h| json!({
                    "a": h.a, "b": h.b, "beta": h.beta, "tuple": h.tuple, "membership": h.membership,
                })),
                "candidates_tested": search.candidates_tested,
                "grid": search.grid,
            });
            Single {
                cfg,
                name: "range-search",
                anchor: "geometry/dilation-search",
                inputs: json!({ "body": body, "point": at.point, "normal": at.normal, "grid": cfg.grids.search }),
            }
            .finish(Status::Pass, evidence, &[("membership", tol.eq_tol)])
        }
        RangeCmd::Refute { p, a, b, beta } => {
            let r = refute_dilation_kp(p, a, b, beta)?;
            Single {
                cfg,
                name: "range-refute",
                anchor: "geometry/kp-dilation-refutation",
                inputs: json!({ "p": p, "a": a, "b": b, "beta": beta }),
            }
            .finish(Status::from_bool(r.margin > 0.0), to_value(&r), &[])
        }
    })
}

fn kp(cmd: KpCmd, cfg: &RunConfig) -> Result<VerificationReport, InputError> {
    let (name, args) = match &cmd {
        KpCmd::Radius(a) => ("kp-radius", a),
        KpCmd::Bound(a) => ("kp-bound", a),
        KpCmd::Curve(a) => ("kp-curve", a),
    };
    let single = Single {
        cfg,
        name,
        anchor: "geometry/disk-containment-lemma",
        inputs: json!({ "p": args.p, "c": args.c }),
    };
    let report = match &cmd {
        KpCmd::Radius(a) => {
            let mut rows = Vec::new();
            let mut table = Vec::new();
            let mut ok = true;
            for &c in &a.c {
                let d = disk_in_kp_radius(a.p, c)?;
                ok &= d.min_lower_margin >= -1e-12 && d.min_upper_margin >= -1e-12;
                table.push(vec![c, d.radius, d.min_lower_margin, d.min_upper_margin]);
                rows.push(to_value(&d));
            }
            if let Some(path) = &a.csv {
                let curve = Curve::new(name, &["c", "radius", "min_lower_margin", "min_upper_margin"], table)?;
                write_csv(&curve, path)?;
            }
            single.finish(
                Status::from_bool(ok),
                json!({ "rows": rows }),
                &[("containment_margin", 1e-12)],
            )
        }
        KpCmd::Bound(a) => {
            let mut rows = Vec::new();
            let mut table = Vec::new();
            let mut ok = true;
            for &c in &a.c {
                let b = scalability_lower_bound(a.p, c)?;
                ok &= b.relative_gap <= 1e-9;
                table.push(vec![c, b.r, b.m_bound, b.m_threshold]);
                rows.push(json!({
                    "c": c,
                    "r": b.r,
                    "M_bound": b.m_bound,
                    "M_threshold": b.m_threshold,
                    "relative_gap": b.relative_gap,
                }));
            }
            if let Some(path) = &a.csv {
                write_csv(&Curve::new(name, &["c", "r", "m_bound", "m_threshold"], table)?, path)?;
            }
            let evidence = if rows.len() == 1 {
                rows.remove(0)
            } else {
                json!({ "rows": rows })
            };
            single.finish(Status::from_bool(ok), evidence, &[("relative_gap", 1e-9)])
        }
        KpCmd::Curve(a) => {
            let sweep = kp_sweep(a.p, &a.c)?;
            let table: Vec<Vec<f64>> = sweep
                .iter()
                .map(|r| vec![r.c, r.radius, r.m_bound.unwrap_or(f64::NAN)])
                .collect();
            if let Some(path) = &a.csv {
                write_csv(&Curve::new(name, &["c", "radius", "m_bound"], table)?, path)?;
            }
            single.finish(Status::Pass, json!({ "rows": sweep }), &[])
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => ExitCode::from(report.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
