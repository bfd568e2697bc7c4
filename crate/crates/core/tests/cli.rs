use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpb")).args(args).output().expect("qpb runs")
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `error: LINE:COL: ...` with positive numbers.
fn position(err: &str) -> Option<(usize, usize)> {
    let rest = err.strip_prefix("error: ")?;
    let mut parts = rest.splitn(3, ':');
    let line = parts.next()?.parse().ok()?;
    let col = parts.next()?.parse().ok()?;
    (line > 0 && col > 0).then_some((line, col))
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &p]);
    let o = qpb(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p
}

#[test]
fn gen_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "z3.json", &["c-group", "--group", "Z3", "--fodc", "universal"]);
    let o = qpb(&["validate", &f]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("fodc: dim Γ_inv 2"), "{out}");
    assert!(out.contains("pass     expect.dims.gamma_inv"), "{out}");
}

#[test]
fn gen_writes_to_stdout_and_rejects_unknown_presets() {
    let o = qpb(&["gen", "point-bundle", "--group", "S3", "--kind", "group-algebra"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"preset\": \"point\""));
    let o = qpb(&["gen", "torus"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown preset"));
    let o = qpb(&["gen", "c-group", "--group", "A5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn full_suite_on_c_z3_exits_zero() {
    let o = qpb(&["check", fixture("presets/c-z3.json").to_str().unwrap(), "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.contains("diff.connection.tr-R2"));
}

#[test]
fn classical_suite_on_group_algebra_is_negative_and_exits_zero() {
    let f = fixture("presets/group-algebra-s3.json");
    let o = qpb(&["check", f.to_str().unwrap(), "--suite", "classical", "--report", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classicality"]["classical"], false);
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("not classical")));
}

#[test]
fn broken_fixtures_exit_two_with_positions() {
    for (name, what) in [
        ("bad-antipode.json", "invalid Hopf"),
        ("non-principal.json", "not a quantum principal bundle"),
        ("non-ad-invariant.json", "not ad-invariant"),
    ] {
        let o = qpb(&["check", fixture(&format!("broken/{name}")).to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{name}");
        let err = stderr(&o);
        assert!(position(&err).is_some(), "{name}: {err}");
        assert!(err.contains(what), "{name}: {err}");
    }
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("presets/c-z2.json")).unwrap();
    let path = dir.path().join("wrong.json");
    std::fs::write(&path, text.replace("\"hopf\": 2", "\"hopf\": 3")).unwrap();
    let o = qpb(&["check", path.to_str().unwrap(), "--suite", "translation"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL     expect.dims.hopf"));
}

#[test]
fn differential_errors_exit_two() {
    let f = fixture("presets/c-z2.json");
    let o = qpb(&["check", f.to_str().unwrap(), "--suite", "differential", "--degree", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("degree budget"));
    let o = qpb(&["check", fixture("presets/c-s3.json").to_str().unwrap(), "--suite", "differential"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("fodc"));
    let o = qpb(&["check", f.to_str().unwrap(), "--suite", "colour"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn explicit_bundle_has_no_differential_structure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("explicit.json");
    let text = r#"{
  "format": 1, "conductor": 1,
  "hopf": {"preset": "Z2"},
  "bundle": {
    "basis": ["p0", "p1"],
    "mult": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
    "unit": [[0, "1"], [1, "1"]],
    "star": [[0, 0, "1"], [1, 1, "1"]],
    "coaction": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 1, 0, "1"], [1, 0, 1, "1"]]
  },
  "fodc": {"preset": "universal"}
}"#;
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let o = qpb(&["check", p, "--suite", "translation,braiding"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let o = qpb(&["check", p, "--suite", "differential"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("only product bundles"), "{}", stderr(&o));
    let o = qpb(&["check", p, "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("differential suite skipped"));
}

#[test]
fn haar_classicality_and_gauge_commands() {
    let o = qpb(&["haar", fixture("presets/c-z3.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d_e"], "1/3");
    assert_eq!(v["d_g2"], "1/3");
    let o = qpb(&["haar", fixture("presets/group-algebra-s3.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["e"], "1");
    assert_eq!(v["s01"], "0");

    let o = qpb(&["classicality", fixture("presets/group-algebra-s3.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma-involutive"], false);
    assert!(v["witnesses"]["sigma-involutive"]["at"].is_string());

    let f = fixture("presets/trivial-z2-x2.json");
    let o = qpb(&["gauge", "enumerate", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains(" = [")).count(), 4, "{out}");
    // the unit acts trivially; some transformation moves x0|d_e
    let acted: Vec<String> = (0..4)
        .map(|k| {
            let o = qpb(&["gauge", "act", f.to_str().unwrap(), "--gamma", &k.to_string(), "--element", "2*x0|d_e; x1|d_g"]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            stdout(&o)
        })
        .collect();
    assert!(acted.iter().any(|s| s.contains("(2)*x0|d_e") && s.contains("(1)*x1|d_g")));
    assert!(acted.iter().any(|s| s.contains("x0|d_g")));
    let o = qpb(&["gauge", "act", f.to_str().unwrap(), "--gamma", "9", "--element", "x0|d_e"]);
    assert_eq!(code(&o), 2);
    let o = qpb(&["gauge", "enumerate", fixture("presets/group-algebra-s3.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not classical"));
}

#[test]
fn syntax_errors_are_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"format\": 1,\n  \"conductor\": 1,\n  \"hopf\": {\"preset\": \"Z2\"}\n  \"bundle\": {}\n}\n").unwrap();
    let o = qpb(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert_eq!(position(&stderr(&o)).map(|p| p.0), Some(5), "{}", stderr(&o));
    std::fs::write(&path, "{\"format\": 1, \"conductor\": 1, \"hopf\": {\"preset\": \"Z2\"}, \"bundle\": {\"preset\": \"point\"}, \"extra\": 0}").unwrap();
    let o = qpb(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown key"), "{}", stderr(&o));
}
