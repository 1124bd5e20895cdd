use std::io::Write;
use std::process::{Command, Output, Stdio};

use fixloc::models::{builtin_from_spec, save_model};

fn fixloc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fixloc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_doc(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("fixloc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn compute_prints_numbers() {
    for (spec, class, want) in [
        ("cpn:2", "e", "3\n"),
        ("cpn:2", "p1", "3\n"),
        ("s2_rotation", "1", "0 (degree < q)\n"),
        ("cpn:4", "p1^2", "25\n"),
        ("hopf_flow:2,3", "e", "5/6\n"),
        ("s2*s2", "e", "4\n"),
    ] {
        let o = fixloc(&["compute", "--builtin", spec, "--class", class], None);
        assert_eq!(o.status.code(), Some(0), "{spec} {class}: {}", stderr(&o));
        assert_eq!(stdout(&o), want, "{spec} {class}");
    }
}

#[test]
fn corollary_convention_flips_signs_in_codimension_2_mod_4() {
    let o = fixloc(
        &["compute", "--builtin", "s2", "--class", "e", "--sign-convention", "paper_corollary"],
        None,
    );
    assert_eq!(stdout(&o), "-2\n");
    let o = fixloc(
        &["compute", "--builtin", "cp2", "--class", "e", "--sign-convention", "paper_corollary"],
        None,
    );
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["compute", "--builtin", "cp2"],
        &["compute", "--builtin", "nosuch", "--class", "e"],
        &["compute", "--builtin", "cpn:0", "--class", "e"],
        &["compute", "--builtin", "hopf_flow:0,1", "--class", "e"],
        &["compute", "--builtin", "cp2", "--class", "p1 +"],
        &["compute", "--builtin", "cp2", "--class", "p1", "--format", "xml"],
        &["numcheck", "--trials", "0"],
        &["numcheck", "--tolerance", "-1"],
        &["numcheck", "--n-theta", "7"],
        &["numcheck", "--t", "0"],
        &["verify", "--model", "/nonexistent/model.json"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = fixloc(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).is_empty(), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_locations() {
    let path = temp_doc("bad.json", "{\n  \"name\": \"x\",\n  \"k\": 1,,\n}");
    let o = fixloc(&["verify", "--model", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let mut m = builtin_from_spec("cp2").unwrap();
    m.q = 3;
    let doc = save_model(&m);
    let o = fixloc(&["verify", "--model", "-"], Some(&doc));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q must be even"), "{}", stderr(&o));
}

#[test]
fn broken_model_fails_verify_with_exit_3() {
    let mut m = builtin_from_spec("s2").unwrap();
    m.components.pop();
    let path = temp_doc("broken.json", &save_model(&m));
    let o = fixloc(&["verify", "--model", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("FAIL  deg  0  1"), "{text}");
    assert!(text.contains("not a polynomial"), "{text}");

    let o = fixloc(&["compute", "--model", path.to_str().unwrap(), "--class", "1"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("do not cancel"), "{}", stderr(&o));
}

#[test]
fn verify_above_q() {
    let o = fixloc(&["verify", "--builtin", "s2_rotation", "--max-degree", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("e^2"));
    assert!(stdout(&o).ends_with("all 4 classes pass\n"));
}

#[test]
fn structured_output_is_json() {
    let o = fixloc(&["verify", "--builtin", "cp2", "--format", "structured"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);

    let o = fixloc(&["compute", "--builtin", "cp2", "--class", "p1", "--format", "structured"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["parts"][0]["characteristic_number"], "3");

    let o = fixloc(&["numcheck", "--format", "structured"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let o = fixloc(&["catalog", "--format", "structured"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["builtins"].as_array().unwrap().len() >= 5);
}

#[test]
fn catalog_lists_builtins_with_values() {
    let o = fixloc(&["catalog"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["s2_rotation", "cpn", "s4_t2", "hopf_flow"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    assert!(text.contains("cpn:2 p1 = 3"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn numcheck_default_and_tight_tolerance() {
    let o = fixloc(&["numcheck"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("cp2, class p1, 50 trials"));
    let o = fixloc(&["numcheck", "--tolerance", "1e-30"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).ends_with("result: FAIL\n"));
}

#[test]
fn numcheck_detects_inconsistent_data() {
    let mut m = builtin_from_spec("cp2").unwrap();
    m.components.remove(1);
    let o = fixloc(&["numcheck", "--model", "-", "--class", "p1"], Some(&save_model(&m)));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("not a polynomial"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["numcheck", "--seed", "7", "--trials", "20"][..],
        &["verify", "--builtin", "cpn:3", "--max-degree", "8"][..],
        &["catalog"][..],
    ] {
        let a = fixloc(args, None);
        let b = fixloc(args, None);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn piped_output_has_no_color() {
    let o = fixloc(&["verify", "--builtin", "cp2"], None);
    assert!(!stdout(&o).contains('\x1b'));
}

#[test]
fn export_round_trips() {
    let o = fixloc(&["export", "--builtin", "cpn:3"], None);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout(&o);
    let again = fixloc(&["export", "--model", "-"], Some(&doc));
    assert_eq!(stdout(&again), doc);
    let o = fixloc(&["compute", "--model", "-", "--class", "e"], Some(&doc));
    assert_eq!(stdout(&o), "4\n");
}
