use std::path::{Path, PathBuf};
use std::process::Command as Process;

use parsym::{load_config, parse_config, run, Command, ConfigError};

fn docs(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs")
        .join(name)
}

fn parsym(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_parsym"))
        .args(args)
        .env("PARSYM_THREADS", "2")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

const QUADRATIC: &str = r#"
[geometry]
frame = [["1", "0"], ["0", "1+x^2"]]
[domain]
box = [[-3, 3], [-3, 3]]
resolution = 7
"#;

#[test]
fn ragged_frame_is_rejected() {
    let err = parse_config("[geometry]\nframe = [[\"1\", \"0\", \"0\"], [\"0\", \"1\", \"0\"]]\n[domain]\nbox = [[0, 1], [0, 1]]\n")
        .unwrap_err();
    assert_eq!(
        (err.section(), err.key(), err.message()),
        (
            Some("geometry"),
            Some("frame"),
            "expected 2 rows of 2 entries"
        )
    );
}

#[test]
fn invalid_values_name_their_key() {
    let cases = [
        ("[numerics]\nrank_tol = -1\n", "numerics", "rank_tol"),
        ("[numerics]\nmax_order = 6\n", "numerics", "max_order"),
        ("[numerics]\nmax_order = 2\n", "numerics", "max_order"),
        (
            "[numerics]\nfeature_tol = \"small\"\n",
            "numerics",
            "feature_tol",
        ),
        ("[numerics]\nstep = 1\n", "numerics", "step"),
        ("[outputs]\nformats = [\"png\"]\n", "outputs", "formats"),
    ];
    for (extra, section, key) in cases {
        let err = parse_config(&format!("{QUADRATIC}{extra}")).unwrap_err();
        assert_eq!(
            (err.section(), err.key()),
            (Some(section), Some(key)),
            "{err}"
        );
        assert!(err.to_string().contains("(line 8)"), "{err}");
    }
    assert!(matches!(
        parse_config("[geometry\n"),
        Err(ConfigError::Syntax { line: 1, .. })
    ));
    assert!(matches!(
        load_config(Path::new("/nonexistent.toml")),
        Err(ConfigError::Io { .. })
    ));
}

#[test]
fn defaults_follow_dimension() {
    let cfg = parse_config(QUADRATIC).unwrap();
    assert_eq!(cfg.dim(), 2);
    assert_eq!(cfg.max_order, 4);
    assert_eq!(cfg.coords, vec!["x", "y"]);
}

#[test]
fn shipped_configs_load() {
    for name in [
        "quadratic.toml",
        "affine.toml",
        "heisenberg.toml",
        "flat_observable.toml",
    ] {
        let cfg = load_config(&docs(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        cfg.frame_spec().unwrap();
    }
}

#[test]
fn analyze_flat_reports_both_tests() {
    let cfg = parse_config("[geometry]\nframe = [[\"1\", \"0\"], [\"0\", \"1\"]]\n[domain]\nbox = [[-1, 1], [-1, 1]]\n").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&Command::Analyze, &cfg, dir.path()).unwrap();
    assert!(outcome.success);
    assert!(
        outcome.summary.contains("locally homogeneous (both tests)"),
        "{}",
        outcome.summary
    );
    assert!(
        outcome.summary.contains("rank_tol=1e-9"),
        "{}",
        outcome.summary
    );
    let report = std::fs::read_to_string(dir.path().join("analyze.toml")).unwrap();
    for key in [
        "rank_tol",
        "feature_tol",
        "const_tol",
        "killing_tol",
        "transport_tol",
        "ode_step",
        "probe_radius",
    ] {
        assert!(report.contains(key), "{key} missing from report");
    }
}

#[test]
fn verify_passes_on_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = parsym(&[
        "verify",
        "--config",
        docs("quadratic.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
    assert!(dir.path().join("verify.toml").exists());
}

#[test]
fn killing_rejects_non_generators() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = parsym(&[
        "killing",
        "--config",
        docs("quadratic.toml").to_str().unwrap(),
        "--at",
        "0,0",
        "--gen",
        "1,0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{stdout}{stderr}");
    assert!(
        format!("{stdout}{stderr}").contains("generator not in Kill^{n+1}(x0): residual 2.0e0"),
        "{stdout}{stderr}"
    );
}

#[test]
fn killing_accepts_generators() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = parsym(&[
        "killing",
        "--config",
        docs("quadratic.toml").to_str().unwrap(),
        "--at",
        "-0.5,0",
        "--gen",
        "0,1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    let csv = std::fs::read_to_string(dir.path().join("killing_field.csv")).unwrap();
    assert!(csv.starts_with("x1,x2,u1,u2,v1,v2\n"));
}

#[test]
fn bad_invocations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[geometry]\nframe = [[\"1\", \"0\", \"0\"], [\"0\", \"1\", \"0\"]]\n",
    )
    .unwrap();
    let (code, _, stderr) = parsym(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("[geometry] frame"), "{stderr}");
    let (code, _, _) = parsym(&[
        "killing",
        "--config",
        docs("quadratic.toml").to_str().unwrap(),
        "--at",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}
