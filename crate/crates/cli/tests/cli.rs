use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_arthurlab");

const P: [&str; 4] = [
    "2*tr(1,O).S2.S1 + tr(1,O).S4.S1",
    "tr(1,O).S1.S2 + tr(1,O).S2.S1 + tr(1,O).S4.S1",
    "tr(1,O).S2.S1 + tr(1,O).S3.S2",
    "tr(1,O).S1.S2 + tr(1,O).S3.S2",
];

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("ARTHURLAB_FIXTURES").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn rank_triangle_text_output() {
    let o = run(&["--group", "SO:9", "rank-triangles", P[2]]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"triangle\":\"1 1 0 / 3 1 / 1\""));
}

#[test]
fn compare_uses_the_order_flag() {
    let v = json_out(&["--group", "SO:9", "--order", "C", "compare", P[1], P[2]]);
    assert_eq!(v["result"], "Incomparable");
    let v = json_out(&["--group", "SO:9", "--order", "A", "compare", P[1], P[2]]);
    assert_eq!(v["result"], "Greater");
}

#[test]
fn empty_parameter_is_a_parse_error() {
    let o = run(&["--group", "SO:9", "dual", ""]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("at offset 0"), "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["dual", P[0]]).status.code(), Some(2), "missing group");
    assert_eq!(run(&["validate-ems", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["closed-form", "1", "-1", "-1/2", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "dot", "--group", "SO:9", "dual", P[0]]).status.code(), Some(2));
}

#[test]
fn rejected_operation_exits_one() {
    let e = r#"{"group":"Sp:2","blocks":[{"rho":{"name":"tr","dim":1,"type":"O"},"rows":[{"A":"1","B":"1","l":0,"eta":1}]}]}"#;
    let o = run(&["e-minus", e]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NoWideRow"));
}

#[test]
fn multisegment_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    std::fs::write(
        &path,
        r#"{"group":"Sp:10","blocks":[{"rho":{"name":"tr","dim":1,"type":"O"},"rows":[
            {"A":"3","B":"-3","l":3,"eta":1},{"A":"1","B":"-1","l":1,"eta":-1},{"A":"0","B":"0","l":0,"eta":-1}]}]}"#,
    )
    .unwrap();
    let arg = format!("@{}", path.display());
    let v = json_out(&["validate-ems", &arg]);
    assert_eq!(v["valid"], true);
    let v = json_out(&["e-minus", &arg]);
    assert_eq!(v["r"], 1);
    assert_eq!(v["ems"]["group"], "Sp:8");
}

/// Statements of a `digraph` body: node lines, edge lines, graph attributes.
fn check_dot(text: &str, nodes: usize) -> Vec<(usize, usize)> {
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.first(), Some(&"digraph poset {"));
    assert_eq!(lines.last(), Some(&"}"));
    let mut edges = Vec::new();
    let mut seen = 0;
    for l in &lines[1..lines.len() - 1] {
        assert!(l.ends_with(';'), "{l}");
        assert_eq!(l.matches('"').count() % 2, 0, "{l}");
        if let Some((a, b)) = l.split_once(" -> ") {
            let lower: usize = a.strip_prefix('n').unwrap().parse().unwrap();
            let upper: usize = b.split([' ', ';']).next().unwrap().strip_prefix('n').unwrap().parse().unwrap();
            assert!(lower < nodes && upper < nodes);
            edges.push((upper, lower));
        } else if l.starts_with('n') {
            assert!(l.contains(" [label=\""), "{l}");
            seen += 1;
        } else {
            assert!(l.contains('='), "{l}");
        }
    }
    assert_eq!(seen, nodes);
    edges
}

#[test]
fn dot_output_is_well_formed() {
    let mut args = vec!["--format", "dot", "--group", "SO:9", "--order", "O", "poset"];
    args.extend(P);
    let o = run(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut edges = check_dot(&text, 4);
    edges.sort();
    assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    assert!(text.contains("[label=\"ui^-1\"]"));
}

#[test]
fn suites_report_and_fail_by_exit_code() {
    let o = run(&["suite", "monotonicity", "--trials", "20", "--seed", "9"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("failed: 0"));
    let v = json_out(&["suite", "round-trip", "--trials", "20"]);
    assert_eq!(v["passed"], 20);
    assert!(v.get("elapsed").is_none());
    assert_eq!(run(&["suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn builtin_fixtures_pass() {
    let o = run(&["fixtures"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

fn write_corpus(dir: &std::path::Path, expected: &str) {
    let body = format!(
        r#"[{{"id":"dual-check","suite":"examples","op":"dual","provenance":"derived",
             "input":{{"group":"SO:3","psi":"tr(1,O).S1.S2"}},"expected":{{"psi":"{expected}"}}}}]"#
    );
    std::fs::write(dir.join("cases.json"), body).unwrap();
}

#[test]
fn fixture_directory_overrides_the_corpus() {
    let good = tempfile::tempdir().unwrap();
    write_corpus(good.path(), "tr(1,O).S2.S1");
    let bad = tempfile::tempdir().unwrap();
    write_corpus(bad.path(), "tr(1,O).S1.S2");

    let g = good.path().to_str().unwrap();
    let b = bad.path().to_str().unwrap();
    let o = run(&["--fixtures", g, "fixtures"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 of 1 fixtures passed"));

    let o = run(&["--fixtures", b, "suite", "examples"]);
    assert_eq!(o.status.code(), Some(1));

    // the flag beats the environment
    let o = Command::new(BIN).args(["--fixtures", g, "fixtures"]).env("ARTHURLAB_FIXTURES", b).output().unwrap();
    assert!(o.status.success());
    let o = Command::new(BIN).arg("fixtures").env("ARTHURLAB_FIXTURES", b).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL dual-check"));
}

#[test]
fn generic_op_entry_point() {
    let v = json_out(&["op", "transport", r#"{"op":"ui^-1[tr(1,O)](1/2,1/2)(3/2,3/2)"}"#]);
    assert!(v["op"].as_str().unwrap().starts_with("dual.ui.dual"));
}
