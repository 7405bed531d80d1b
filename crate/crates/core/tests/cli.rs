use std::path::Path;
use std::process::{Command, Output};

use hetlab::cli::{Payload, RunRecord, RUN_SCHEMA};
use hetlab::models::catalog_entry;

fn hetlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hetlab"));
    cmd.args(args)
        .env_remove("HETLAB_TOL")
        .env("SOURCE_DATE_EPOCH", "1700000000");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn hetlab")
}

fn code(args: &[&str]) -> i32 {
    hetlab(args, &[]).status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        code(&[
            "verify",
            "--catalog",
            "r_x_nil3",
            "--kappa",
            "0.5",
            "--system",
            "null-parallel"
        ]),
        0
    );
    assert_eq!(code(&["verify", "--catalog", "r_x_s3"]), 0);
    assert_eq!(code(&["verify", "--catalog", "r_x_s3_wrong_curvature"]), 1);
    assert_eq!(code(&["verify", "--catalog", "r_x_s3_null"]), 1);
    assert_eq!(code(&["verify", "--spec", "missing.file"]), 2);
    assert_eq!(code(&["verify", "--catalog", "no_such_entry"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["verify", "--catalog", "r_x_s3", "--kappa", "-1"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn verify_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("h3.json");
    catalog_entry("r_x_h3", 2.0).unwrap().spec().save(&spec).unwrap();
    assert_eq!(code(&["verify", "--spec", path_str(&spec)]), 0);
    // A spec is only a solution at its own κ.
    assert_eq!(code(&["verify", "--spec", path_str(&spec), "--kappa", "1"]), 1);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\", \"dim\": 4,").unwrap();
    let out = hetlab(&["verify", "--spec", path_str(&bad)], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn tolerance_overrides() {
    let wrong = ["verify", "--catalog", "r_x_s3_wrong_curvature"];
    assert_eq!(hetlab(&wrong, &[("HETLAB_TOL", "1.0")]).status.code(), Some(0));
    assert_eq!(hetlab(&wrong, &[("HETLAB_TOL", "nonsense")]).status.code(), Some(2));
    let strict = ["verify", "--catalog", "r_x_s3_wrong_curvature", "--tol", "1e-3"];
    assert_eq!(hetlab(&strict, &[("HETLAB_TOL", "1.0")]).status.code(), Some(1));
    assert_eq!(code(&["verify", "--catalog", "r_x_s3", "--tol", "0"]), 2);
}

#[test]
fn run_record_is_reload_stable_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = hetlab(
            &["verify", "--catalog", "r_x_sl2r", "--kappa", "2", "--out", path_str(p)],
            &[],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let rec = RunRecord::load(&a).unwrap();
    assert_eq!(rec.schema, RUN_SCHEMA);
    assert_eq!(rec.command, "verify");
    assert_eq!(rec.timestamp, Some(1_700_000_000));
    assert_eq!(rec.spec_hash.as_deref().map(str::len), Some(64));
    assert_eq!(rec.to_json() + "\n", text);
    match &rec.payload {
        Payload::Verify { passed, reports, .. } => {
            assert!(passed);
            assert_eq!(reports.len(), 1);
            assert!(reports[0].max_residual() < 1e-10);
        }
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn spec_hash_tracks_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let hash = |kappa: &str, name: &str| {
        let p = dir.path().join(name);
        hetlab(
            &[
                "verify",
                "--catalog",
                "r_x_nil3",
                "--kappa",
                kappa,
                "--out",
                path_str(&p),
            ],
            &[],
        );
        RunRecord::load(&p).unwrap().spec_hash.unwrap()
    };
    assert_eq!(hash("1", "a.json"), hash("1", "b.json"));
    assert_ne!(hash("1", "a.json"), hash("2", "c.json"));
}

#[test]
fn chart_backend_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("both.json");
    let out = hetlab(
        &[
            "verify",
            "--catalog",
            "r_x_nil3",
            "--backend",
            "both",
            "--points",
            "2",
            "--out",
            path_str(&p),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    match RunRecord::load(&p).unwrap().payload {
        Payload::Verify { reports, .. } => {
            assert_eq!(reports.len(), 2);
            assert!(reports[1].max_residual() < 1e-5);
        }
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn classify_and_moduli_and_deform() {
    let out = hetlab(&["classify", "--kappa", "1", "--catalog", "r_x_h3"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for tag in ["sasakian", "sl2_e11", "hyperbolic"] {
        assert_eq!(text.lines().filter(|l| l.starts_with(tag)).count(), 1, "{text}");
    }
    assert!(text.contains("r_x_h3") && text.trim_end().ends_with("hyperbolic"));
    assert_eq!(code(&["classify", "--kappa", "0"]), 2);

    let canon = |x: &str, y: &str| stdout(&hetlab(&["moduli", "canon", "--angles", x, y], &[]));
    assert_eq!(canon("1.0", "5.9"), canon("5.9", "1.0"));
    assert_eq!(canon("-1.0", "0.5"), canon("0.5", "-1.0"));
    let identity = [
        "1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1",
    ];
    let mut args = vec!["moduli", "canon", "--matrix"];
    args.extend(identity);
    assert_eq!(stdout(&hetlab(&args, &[])), canon("0", "0"));
    assert_eq!(code(&["moduli", "canon", "--angles", "1", "2", "--lambda", "0"]), 2);
    assert!(stdout(&hetlab(&["moduli", "dim"], &[])).contains("moduli_dim=3 nsns_moduli_dim=4"));

    let out = hetlab(&["deform", "kernel", "--model", "round-s1xsu2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("kernel_dimension=3"));
    assert_eq!(code(&["deform", "kernel", "--model", "flat-t4"]), 2);
}

mod reload {
    use hetlab::cli::{Payload, RunRecord, Tolerances, RUN_SCHEMA};
    use hetlab::moduli::ModuliPoint;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn records_reload_bit_identically(
            lambda in 1e-6f64..1e6,
            x in 0.0f64..7.0,
            y in 0.0f64..7.0,
            tol in 1e-14f64..1.0,
        ) {
            let rec = RunRecord {
                schema: RUN_SCHEMA.to_string(),
                command: "moduli canon".to_string(),
                spec_hash: None,
                tool_version: "test".to_string(),
                tolerances: Tolerances { frame: tol, chart: tol / 3.0 },
                payload: Payload::Moduli {
                    point: ModuliPoint::new(lambda, x, y).unwrap(),
                    input_angles: Some((x, y)),
                },
                timestamp: None,
            };
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("r.json");
            rec.save(&p).unwrap();
            let back = RunRecord::load(&p).unwrap();
            prop_assert_eq!(&back, &rec);
            prop_assert_eq!(back.to_json(), rec.to_json());
        }
    }
}
