use std::path::PathBuf;
use std::process::{Command, Output};

fn lrbi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrbi")).args(args).output().expect("the lrbi binary runs")
}

fn spec_path() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs/axb.spec").to_string_lossy().into_owned()
}

fn tmp_spec(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("lrbi-{}-{name}.spec", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn twist_on_shipped_spec_passes() {
    let o = lrbi(&["twist", &spec_path(), "--h-order", "2", "--json-only"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(o.stderr.is_empty());
    let lines = json_lines(&o);
    assert_eq!(lines[0]["record"], "header");
    assert_eq!(lines[0]["truncation"]["h_order"], 2);
    assert_eq!(lines.last().unwrap()["status"], "pass");
}

#[test]
fn roundtrip_on_shipped_spec_passes() {
    let o = lrbi(&["drinfeld", &spec_path(), "--functor", "roundtrip", "--h-order", "3", "--jet-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pass:"));
}

#[test]
fn failing_validation_exits_one() {
    let text = "[base]\nvars = x1\n[algebra]\nrank = 3\nbracket 1 2 = 0, 0, 1\nbracket 2 3 = 1, 0, 0\nbracket 1 3 = x1, 0, 0\n";
    let o = lrbi(&["validate", &tmp_spec("jacobi", text), "--json-only"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    let jac = json_lines(&o).into_iter().find(|v| v["name"] == "lr.jacobi").unwrap();
    assert_eq!(jac["status"], "fail");
    assert!(jac["witness"].is_string());
}

#[test]
fn parse_errors_exit_three_with_position() {
    let o = lrbi(&["validate", &tmp_spec("empty", "")]);
    assert_eq!(o.status.code(), Some(3));
    let rec = &json_lines(&o)[0];
    assert_eq!(rec["record"], "error");
    assert_eq!(rec["line"], 1);
    let o = lrbi(&["validate", &tmp_spec("bad", "[base]\nvars = x1\n[algebra]\nrank = 1\nanchor 1 = (x1\n")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_lines(&o)[0]["line"], 5);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(lrbi(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(lrbi(&["dualize", &spec_path()]).status.code(), Some(3));
    assert_eq!(lrbi(&["example", "axb", "--h-order", "0"]).status.code(), Some(3));
    assert_eq!(lrbi(&["--help"]).status.code(), Some(0));
}
