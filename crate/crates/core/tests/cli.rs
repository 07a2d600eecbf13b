use std::collections::BTreeMap;
use std::process::Command;

use gmdet::cli::format::{parse_connection, to_json};
use gmdet::cli::{run_with, Outcome, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION};
use gmdet::fixtures;

const SINGLE: &str = r#"{
  "parameters": ["alpha"],
  "rank": 1,
  "points": [{"a": "0", "m": 2}],
  "g": [[[["0"]], [["alpha"]]]],
  "eta": [[[[{"alpha": "-1"}]]]]
}"#;

fn run(files: &[(&str, String)], args: &[&str]) -> Outcome {
    let files: BTreeMap<String, String> = files.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    let read = move |name: &str| {
        files.get(name).cloned().ok_or_else(|| std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"))
    };
    let mut argv = vec!["gmdet"];
    argv.extend_from_slice(args);
    run_with(argv, &read)
}

fn xa() -> Vec<String> {
    vec!["x".into(), "alpha".into()]
}

#[test]
fn verify_single_point() {
    let out = run(&[("c.json", SINGLE.into())], &["verify", "c.json"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "lhs: 0");
    assert!(lines.contains(&"torsion: (1/alpha) * d(alpha)"), "{}", out.stdout);
    assert!(lines.contains(&"certificate: [(alpha, -1)]"), "{}", out.stdout);
    assert_eq!(*lines.last().unwrap(), "verdict: verified");
}

#[test]
fn lhs_of_zero_dimensional_cohomology() {
    let out = run(&[("c.json", SINGLE.into())], &["lhs", "c.json"]);
    assert_eq!((out.stdout.as_str(), out.code), ("0\n", EXIT_OK));
}

#[test]
fn every_suite_fixture_verifies_through_the_cli() {
    for f in fixtures::main_theorem_suite() {
        let text = to_json(&f.conn, &f.names);
        let out = run(&[("c.json", text.clone())], &["verify", "c.json"]);
        assert_eq!(out.code, EXIT_OK, "{}: {}", f.name, out.stderr);
        let rhs = run(&[("c.json", text.clone())], &["rhs", "c.json"]);
        assert_eq!(rhs.code, EXIT_OK);
        assert!(rhs.stdout.starts_with("global: "));
        assert!(run(&[("c.json", text)], &["check", "c.json"]).stdout.contains("vertical: true"));
    }
}

#[test]
fn parse_errors_exit_two() {
    let bad_json = "{\n  \"rank\": 1,\n  oops\n}";
    let out = run(&[("c.json", bad_json.into())], &["verify", "c.json"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    let bad_expr = SINGLE.replace(r#"[["alpha"]]"#, r#"[["alpha *"]]"#);
    let out = run(&[("c.json", bad_expr)], &["lhs", "c.json"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 5"), "{}", out.stderr);
    let unknown = SINGLE.replace(r#"[["alpha"]]"#, r#"[["beta"]]"#);
    assert_eq!(run(&[("c.json", unknown)], &["lhs", "c.json"]).code, EXIT_PARSE);
    assert_eq!(run(&[], &["lhs", "missing.json"]).code, EXIT_PARSE);
    assert_eq!(run(&[], &["frobnicate"]).code, EXIT_PARSE);
    assert_eq!(run(&[("c.json", SINGLE.into())], &["mobius", "--map", "1,x,0,1", "c.json"]).code, EXIT_PARSE);
    assert_eq!(run(&[("c.json", SINGLE.into())], &["mobius", "--map", "1,0,1", "c.json"]).code, EXIT_PARSE);
}

#[test]
fn precondition_violations_exit_three() {
    let unbalanced = SINGLE.replace(r#"[[["0"]], [["alpha"]]]"#, r#"[[["2"]], [["alpha"]]]"#);
    let out = run(&[("c.json", unbalanced)], &["verify", "c.json"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("regularity at infinity"), "{}", out.stderr);

    let dup = r#"{"parameters": ["x"], "rank": 1,
        "points": [{"a": "x", "m": 2}, {"a": "x", "m": 1}],
        "g": [[[["1"]], [["1"]]], [[["-1"]]]]}"#;
    assert_eq!(run(&[("c.json", dup.into())], &["lhs", "c.json"]).code, EXIT_PRECONDITION);

    let all_log = r#"{"parameters": ["x"], "rank": 1,
        "points": [{"a": "0", "m": 1}, {"a": "x", "m": 1}],
        "g": [[[["1/2"]]], [[["-1/2"]]]]}"#;
    assert_eq!(run(&[("c.json", all_log.into())], &["lhs", "c.json"]).code, EXIT_PRECONDITION);

    // a pseudo-logarithmic point is neither admissible nor Deligne
    let spl = to_json(&fixtures::special_pseudo_log(&gmdet::scalar::q(1), &gmdet::scalar::q(2)), &["x".into()]);
    let out = run(&[("c.json", spl.clone())], &["verify", "c.json"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("point 0"), "{}", out.stderr);
    let out = run(&[("c.json", spl)], &["check", "c.json"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stdout.contains("SpecialPseudoLog"));

    // eta removed from the two-point fixture: no longer vertical
    let mut doc: serde_json::Value = serde_json::from_str(&to_json(&fixtures::two_point(), &xa())).unwrap();
    doc.as_object_mut().unwrap().remove("eta");
    doc.as_object_mut().unwrap().remove("eta0");
    let out = run(&[("c.json", doc.to_string())], &["rhs", "c.json"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("dt ^ ds"), "{}", out.stderr);
}

#[test]
fn mobius_translation_round_trip() {
    let text = to_json(&fixtures::two_point(), &xa());
    let out = run(&[("c.json", text)], &["mobius", "--map", "1,3/2,0,1", "c.json"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let moved = parse_connection(&out.stdout).unwrap();
    assert_eq!(moved.names, xa());
    let back = run(&[("m.json", out.stdout.clone())], &["verify", "m.json"]);
    assert_eq!(back.code, EXIT_OK);
    let to_inf = run(&[("c.json", SINGLE.into())], &["mobius", "--map", "0,1,1,0", "c.json"]);
    assert_eq!(to_inf.code, EXIT_PRECONDITION);
}

#[test]
fn selftest_passes() {
    let out = run(&[], &["selftest", "--seed", "3", "--count", "50"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 6);
    assert!(out.stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn binary_output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("gmdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rank_two.json");
    std::fs::write(&path, to_json(&fixtures::rank_two(), &xa())).unwrap();
    let exe = env!("CARGO_BIN_EXE_gmdet");
    let once = || Command::new(exe).arg("verify").arg(&path).output().unwrap();
    let (a, b) = (once(), once());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let bad = Command::new(exe).arg("verify").arg(dir.join("nope.json")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
