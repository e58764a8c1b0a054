use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_xasp");

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn xasp(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("XASP_SOLVER")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".lp").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn script(body: &str) -> tempfile::TempPath {
    use std::os::unix::fs::PermissionsExt;
    let mut f = tempfile::Builder::new().suffix(".sh").tempfile().unwrap();
    writeln!(f, "#!/bin/sh\n{body}").unwrap();
    let path = f.into_temp_path();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[test]
fn solve_text_and_json() {
    let file = corpus("lp_didactic.lp");
    let o = xasp(&["solve", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "cn_lp(1,3) cn_lp(2,4) cn_lp(3,1) cn_lp(4,2) match(1,3) match(2,4) match(3,1) match(4,2)\n"
    );
    let o = xasp(&["solve", file.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["atoms"].as_array().unwrap().len(), 8);
    assert_eq!(v["atoms"][0]["pred"], "cn_lp");
    assert_eq!(v["atoms"][0]["args"][0], "1");
    assert_eq!(v["meta"]["match(1,3)"]["stratum"], 2);
}

#[test]
fn empty_file() {
    let f = temp("");
    let o = xasp(&["solve", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn diagnostics_go_to_stderr_with_distinct_codes() {
    let cases = [
        ("p :- not p.", 6, "not stratified"),
        ("p(X) :- not q(X).", 5, "unsafe"),
        ("p(1) q.", 4, "unexpected"),
    ];
    for (text, code, needle) in cases {
        let f = temp(text);
        let o = xasp(&["solve", f.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{text}");
        assert!(o.stdout.is_empty());
        assert!(
            String::from_utf8_lossy(&o.stderr).contains(needle),
            "{text}"
        );
    }
    let o = xasp(&["solve", "/nonexistent/file.lp"]);
    assert_eq!(o.status.code(), Some(3));
    let o = xasp(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn instrument_contains_transformed_rule() {
    let o = xasp(&["instrument", corpus("lp_didactic.lp").to_str().unwrap()]);
    assert!(o.status.success());
    let squeezed: String = stdout(&o).chars().filter(|c| !c.is_whitespace()).collect();
    assert!(squeezed.contains(
        "rule_fired(6,Y,Z):-cn_lp(Y,Z),node(Y),node(Z),notedge(Y,Z),Y!=Z,n=#count{X:c(X,Y,Z)}."
    ));
    let f = temp("rule_fired(1,2).");
    let o = xasp(&["instrument", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(7));
}

#[test]
fn instrument_output_feeds_back() {
    let o = xasp(&["instrument", corpus("lp_didactic.lp").to_str().unwrap()]);
    let f = temp(&stdout(&o));
    let o = xasp(&["solve", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    let atoms: Vec<String> = stdout(&o).split_whitespace().map(str::to_owned).collect();
    assert_eq!(
        atoms
            .iter()
            .filter(|a| a.starts_with("rule_fired("))
            .count(),
        24
    );
    assert_eq!(
        atoms
            .iter()
            .filter(|a| !a.starts_with("rule_fired("))
            .count(),
        8
    );
}

#[test]
fn fact_only_instrument_is_canonical_input() {
    let f = temp("a(1).  b(x,2).\n");
    let o = xasp(&["instrument", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "a(1).\nb(x, 2).\n");
}

#[test]
fn explain_select_and_atom() {
    let file = corpus("lp_didactic.lp");
    let file = file.to_str().unwrap();
    let o = xasp(&["explain", file, "--select", "cn_lp/2,match/2"]);
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = xasp(&["explain", file, "--atom", "match(3,1)"]);
    assert_eq!(
        stdout(&o),
        "match(3,1)-is_supported_by-([match(3,1)]-[test(3,1),cn_lp(3,1)]-[])\n"
    );
    let o = xasp(&["explain", file, "--atom", "cn_lp(1,2)"]);
    assert_eq!(o.status.code(), Some(8));
    let o = xasp(&["explain", file, "--atom", "match(X,3)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["rule"], 8);
    let o = xasp(&["explain", file, "--select", "match/2", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph explanations {"));
}

#[test]
fn tree_formats() {
    let file = corpus("lp_didactic.lp");
    let file = file.to_str().unwrap();
    let o = xasp(&["tree", file, "--atom", "match(1,3)"]);
    assert_eq!(
        stdout(&o),
        "match(1,3) [rule 8: X=1,Y=3]\n  test(1,3) [fact]\n  cn_lp(1,3) [rule 6: Y=1,Z=3]\n    node(1) [fact]\n    node(3) [fact]\n    ? not edge(1,3) [tested]\n    ? 1!=3 [tested]\n    ? n=#count{X:c(X,1,3)} [tested]\n"
    );
    let o = xasp(&["tree", file, "--atom", "node(1)", "--format", "json"]);
    assert_eq!(
        stdout(&o),
        "{\"atom\":\"node(1)\",\"support\":\"fact\",\"children\":[],\"tests\":[]}\n"
    );
    let o = xasp(&["tree", file, "--atom", "cn_lp(1,3)", "--format", "dot"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 6);
    assert_eq!(dot.matches("[style=dashed]").count(), 3);
    assert_eq!(dot.matches("->").count(), 5);
    let o = xasp(&["tree", file, "--atom", "match(9,9)"]);
    assert_eq!(o.status.code(), Some(8));
    let o = xasp(&["tree", file]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_with_scripted_solvers() {
    let file = corpus("lp_didactic.lp");
    let file = file.to_str().unwrap();
    let good = script(
        "echo 'match(1,3) cn_lp(1,3) cn_lp(3,1) cn_lp(2,4) cn_lp(4,2) match(3,1) match(2,4) match(4,2)'",
    );
    let o = xasp(&["oracle", file, "--solver", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "match\n");

    let short = script("echo 'match(1,3) cn_lp(1,3) extra(1)'");
    let o = xasp(&["oracle", file, "--solver", short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("missing: extra(1)"));

    let garbage = script("echo 'Answer: 1'; echo 'SATISFIABLE'");
    let o = xasp(&["oracle", file, "--solver", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(9));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot parse solver output"));

    let o = xasp(&["oracle", file, "--solver", "/nonexistent/solver"]);
    assert_eq!(o.status.code(), Some(9));

    let slow = script("sleep 5");
    let o = xasp(&[
        "oracle",
        file,
        "--solver",
        slow.to_str().unwrap(),
        "--timeout",
        "0.2",
    ]);
    assert_eq!(o.status.code(), Some(9));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not finish"));

    let o = Command::new(BIN)
        .args(["oracle", file])
        .env("XASP_SOLVER", good.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn examples_listing() {
    let o = xasp(&["examples"]);
    assert!(stdout(&o).lines().count() >= 3);
    let o = xasp(&["examples", "lp_didactic"]);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(corpus("lp_didactic.lp")).unwrap()
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let file = corpus("anomaly_rules.lp");
    let file = file.to_str().unwrap();
    for args in [
        vec!["solve", file, "--format", "json"],
        vec!["explain", file, "--format", "json"],
        vec!["instrument", file],
        vec!["tree", file, "--atom", "common(c1,s2)", "--format", "dot"],
    ] {
        let a = xasp(&args);
        let b = xasp(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
