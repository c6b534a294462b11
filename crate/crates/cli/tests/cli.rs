use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn mcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcx"))
        .args(args)
        .env_remove("MCX_CONFIG")
        .output()
        .expect("spawn mcx")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn real(rows: usize, vals: &[f64]) -> Value {
    let data: Vec<[f64; 2]> = vals.iter().map(|&x| [x, 0.0]).collect();
    json!({ "rows": rows, "cols": rows, "data": data })
}

fn mixed_d1(t: &[f64]) -> Value {
    json!({ "d": 1, "g": 0, "level": 2, "entries": [real(2, t)], "sa_mask": [false] })
}

#[test]
fn kp_bound_matches_closed_form() {
    let out = mcx(&["kp", "bound", "--p", "1.5", "--c", "0.01"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let ev = &r["checks"][0]["evidence"];
    let m = ev["M_bound"].as_f64().unwrap();
    assert!((m - 14.8148).abs() < 1e-4, "M_bound = {m}");
    assert_eq!(r["checks"][0]["status"], "pass");
    assert_eq!(r["schema_version"], "1.0.0");
}

#[test]
fn unitary_is_maximal_and_contraction_is_not() {
    let dir = TempDir::new().unwrap();
    let u = write(&dir, "u.json", &mixed_d1(&[0.0, 1.0, 1.0, 0.0]));
    assert_eq!(code(&mcx(&["mixed", "maximal", "--in", s(&u)])), 0);

    let half = write(&dir, "half.json", &mixed_d1(&[0.5, 0.0, 0.0, 0.5]));
    let out = mcx(&["mixed", "maximal", "--in", s(&half)]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["checks"][0]["status"], "fail");

    assert_eq!(code(&mcx(&["mixed", "member", "--in", s(&half)])), 0);
    assert_eq!(code(&mcx(&["mixed", "witness", "--in", s(&half)])), 0);
    assert_eq!(code(&mcx(&["mixed", "witness", "--in", s(&u)])), 1);
}

#[test]
fn dilate_emits_a_maximal_tuple() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.json", &mixed_d1(&[0.3, 0.2, 0.0, 0.6]));
    let emitted = dir.path().join("dilated.json");
    let out = mcx(&[
        "mixed",
        "dilate",
        "--in",
        s(&t),
        "--delta",
        "0.001",
        "--emit",
        s(&emitted),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(code(&mcx(&["mixed", "maximal", "--in", s(&emitted)])), 0);
}

#[test]
fn non_member_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let big = write(&dir, "big.json", &mixed_d1(&[2.0, 0.0, 0.0, 2.0]));
    let out = mcx(&["mixed", "dilate", "--in", s(&big)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(code(&mcx(&["mixed", "member", "--in", s(&big)])), 1);
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"d\": 1,\n \"g\": }").unwrap();
    let out = mcx(&["mixed", "member", "--in", s(&p)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&mcx(&["frobnicate"])), 2);
    assert_eq!(code(&mcx(&["kp", "bound", "--p", "1.5"])), 2);
    assert_eq!(code(&mcx(&["mixed", "member", "--in", "/nonexistent/x.json"])), 2);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", &json!({ "sed": 3 }));
    let out = mcx(&["--config", s(&cfg), "kp", "bound", "--p", "1.5", "--c", "0.01"]);
    assert_eq!(code(&out), 2);
    let cfg = write(&dir, "cfg2.json", &json!({ "tolerances": { "psd_tol": -1.0 } }));
    let out = mcx(&["--config", s(&cfg), "kp", "bound", "--p", "1.5", "--c", "0.01"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn pencil_member_and_eval() {
    let dir = TempDir::new().unwrap();
    // Disk pencil: I - x sigma_z - y sigma_x.
    let pencil = write(
        &dir,
        "p.json",
        &json!({
            "level": 2,
            "entries": [real(2, &[1.0, 0.0, 0.0, -1.0]), real(2, &[0.0, 1.0, 1.0, 0.0])],
            "sa_mask": [true, true],
            "field": "R",
        }),
    );
    let inside = write(
        &dir,
        "in.json",
        &json!({ "level": 1, "entries": [real(1, &[0.3]), real(1, &[0.4])], "sa_mask": [true, true] }),
    );
    let outside = write(
        &dir,
        "out.json",
        &json!({ "level": 1, "entries": [real(1, &[0.9]), real(1, &[0.9])], "sa_mask": [true, true] }),
    );
    assert_eq!(
        code(&mcx(&[
            "pencil",
            "member",
            "--pencil",
            s(&pencil),
            "--tuple",
            s(&inside)
        ])),
        0
    );
    assert_eq!(
        code(&mcx(&[
            "pencil",
            "member",
            "--pencil",
            s(&pencil),
            "--tuple",
            s(&outside)
        ])),
        1
    );
    let out = mcx(&["pencil", "eval", "--pencil", s(&pencil), "--tuple", s(&inside)]);
    assert_eq!(code(&out), 0);
    let v = &report(&out)["checks"][0]["evidence"]["value"];
    assert_eq!(v["rows"], 2);
    assert!((v["data"][0][0].as_f64().unwrap() - 0.7).abs() < 1e-12);
}

#[test]
fn geometry_verbs_on_kp() {
    let dir = TempDir::new().unwrap();
    let body = write(&dir, "k.json", &json!({ "kind": "kp", "p": 1.5 }));
    let at = ["--body", s(&body), "--point", "0,0", "--normal", "0,-1"];
    let out = mcx(&[&["geom", "classify"][..], &at].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = mcx(&[&["geom", "F"][..], &at, &["--x", "0.01,-0.04"]].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = report(&out)["checks"][0]["evidence"]["values"].clone();
    for row in rows.as_array().unwrap() {
        let x = row["x"][0].as_f64().unwrap();
        let f = row["F"].as_f64().unwrap();
        assert!((f - x.abs().powf(1.5)).abs() < 1e-9, "F({x}) = {f}");
    }

    let out = mcx(&[
        "range", "refute", "--p", "1.5", "--a", "0.2", "--b", "0", "--beta", "0.16",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn paraboloid_on_the_disk_range() {
    let dir = TempDir::new().unwrap();
    let t = write(
        &dir,
        "a.json",
        &json!({
            "level": 2,
            "entries": [real(2, &[1.0, 0.0, 0.0, -1.0]), real(2, &[0.0, 1.0, 1.0, 0.0])],
            "sa_mask": [true, true],
        }),
    );
    let out = mcx(&[
        "range",
        "paraboloid",
        "--tuple",
        s(&t),
        "--point",
        "1,0",
        "--direction",
        "1,0",
    ]);
    assert_eq!(code(&out), 0);
    let ev = &report(&out)["checks"][0]["evidence"];
    assert_eq!(ev["verified"], true);
    assert!((ev["m"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn reproduce_all_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let curves = dir.path().join("curves");
    let ra = mcx(&["reproduce-all", "--seed", "7", "--out", s(&a), "--curves", s(&curves)]);
    let rb = mcx(&["reproduce-all", "--seed", "7", "--out", s(&b)]);
    assert_eq!(code(&ra), code(&rb));
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());

    let r: Value = serde_json::from_slice(&ta).unwrap();
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 14);
    let any_fail = checks.iter().any(|c| c["status"] == "fail");
    assert_eq!(code(&ra), i32::from(any_fail));
    for c in checks {
        assert_eq!(c["inputs_digest"].as_str().unwrap().len(), 64);
        assert!(c.get("wall_time_ms").is_none());
    }
    let csv = std::fs::read_to_string(curves.join("kp_sweep_p1.5.csv")).unwrap();
    assert!(csv.lines().count() > 10);
}
