use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn latmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latmat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = latmat(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    latmat(args).status.code().expect("exit code")
}

#[test]
fn lattice_info_builtin_and_file() {
    let v = ok_json(&["lattice", "info", "M3"]);
    assert_eq!(v["size"], 5);
    assert_eq!(v["distributive"], false);
    assert_eq!(v["name"], "M3");

    let v = ok_json(&["lattice", "info", &fixture("diamond.json")]);
    assert_eq!(v["distributive"], true);
    assert_eq!(v["join_irreducibles"], serde_json::json!(["p", "q"]));
    assert_eq!(v["name"], Value::Null);
}

#[test]
fn lattice_check_rejects_non_lattice() {
    assert_eq!(code(&["lattice", "check", "chain:4"]), 0);
    assert_eq!(
        code(&["lattice", "check", &fixture("not_a_lattice.json")]),
        1
    );
}

#[test]
fn matmul_from_files() {
    let v = ok_json(&[
        "matmul",
        "--a",
        &fixture("m3_proof.json"),
        "--b",
        &fixture("m3_column.json"),
    ]);
    assert_eq!(v["entries"], serde_json::json!([["1", "0"], ["0", "0"]]));
    assert_eq!(v["lattice"], "M3");
}

#[test]
fn matmul_inline_needs_lattice() {
    let a = r#"[["1","0"],["0","1"]]"#;
    let v = ok_json(&["matmul", "--lattice", "chain:2", "--a", a, "--b", a]);
    assert_eq!(v["entries"], serde_json::json!([["1", "0"], ["0", "1"]]));
    assert_eq!(code(&["matmul", "--a", a, "--b", a]), 1);
}

#[test]
fn parse_errors_exit_one() {
    let out = latmat(&["classify", "--matrix", &fixture("broken.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("line"));

    let out = latmat(&[
        "classify",
        "--lattice",
        "M3",
        "--matrix",
        r#"[["q","0"],["0","0"]]"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown element"));

    assert_eq!(code(&["classify", "--matrix", "/nonexistent/file.json"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
}

#[test]
fn spectrum_witness_mode() {
    for l in ["M3", "N5"] {
        let v = ok_json(&[
            "spectrum",
            "--lattice",
            l,
            "--n",
            "2",
            "--k",
            "4",
            "--mode",
            "witness",
        ]);
        assert_eq!(v["count"], "5");
        assert_eq!(v["antiassociative"], true);
        assert_eq!(v["verified"], true);
        assert_eq!(v["witnesses"].as_array().unwrap().len(), 10);
    }
    let v = ok_json(&[
        "spectrum",
        "--lattice",
        "bool",
        "--n",
        "2",
        "--k",
        "3",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(v["count"], "1");
}

#[test]
fn spectrum_budget_exit_three() {
    let args = [
        "spectrum",
        "--lattice",
        "chain:3",
        "--n",
        "2",
        "--k",
        "4",
        "--mode",
        "exhaustive",
        "--budget",
        "10",
    ];
    assert_eq!(code(&args), 3);
}

#[test]
fn classify_reports_not_applicable() {
    let v = ok_json(&["classify", "--matrix", &fixture("m3_proof.json")]);
    assert_eq!(v["idempotent"], "not-applicable");
    assert_eq!(v["nilpotent"], "not-applicable");
    let v = ok_json(&["classify", "--matrix", &fixture("chain3_idempotent.json")]);
    assert_eq!(v["idempotent"], true);
    assert_eq!(v["permutation"], true);
}

#[test]
fn invert_modes() {
    let m = fixture("n5_inverse.json");
    assert_eq!(code(&["invert", "--matrix", &m]), 2);
    let v = ok_json(&["invert", "--matrix", &m, "--exhaustive"]);
    let inverses = v["inverses"].as_array().unwrap();
    assert!(inverses.contains(&serde_json::json!([["c", "b"], ["b", "c"]])));
    assert!(inverses.contains(&serde_json::json!([["a", "b"], ["b", "c"]])));

    let v = ok_json(&["invert", "--matrix", &fixture("chain3_idempotent.json")]);
    assert_eq!(v["inverses"], serde_json::json!([[["1", "0"], ["0", "1"]]]));
}

#[test]
fn triangularize_precondition() {
    assert_eq!(
        code(&["triangularize", "--matrix", &fixture("skew.json")]),
        2
    );
    let m = r#"[["0","0"],["1","0"]]"#;
    let v = ok_json(&["triangularize", "--lattice", "chain:2", "--matrix", m]);
    assert_eq!(v["permutation"], serde_json::json!([2, 1]));
    assert_eq!(v["triangular"], serde_json::json!([["0", "1"], ["0", "0"]]));
    assert_eq!(
        code(&[
            "triangularize",
            "--lattice",
            "chain:2",
            "--matrix",
            r#"[["1","0"],["0","0"]]"#
        ]),
        2
    );
}

#[test]
fn relation_commands() {
    let v = ok_json(&["classify-rel", "--relation", &fixture("preorder.json")]);
    assert_eq!(v["idempotent"], true);
    assert_eq!(v["pseudo_order"], true);
    assert_eq!(v["reduced_idempotent"], false);
    assert_eq!(v["core_poset_size"], 2);

    let v = ok_json(&["hclass", "--relation", &fixture("preorder.json")]);
    assert_eq!(v["transversal"], serde_json::json!([1, 3]));
    assert_eq!(v["group_order"], 2);

    assert_eq!(code(&["hclass", "--relation", r#"[[0,1],[0,0]]"#]), 2);

    let v = ok_json(&[
        "greens",
        "--a",
        "[[1,0],[0,1]]",
        "--b",
        "[[1,1],[1,1]]",
        "--oracle",
    ]);
    for r in ["L", "R", "H", "D"] {
        assert_eq!(v[r], false);
        assert_eq!(v[format!("{r}_oracle")], false);
    }
}

#[test]
fn hclass_chain_identity() {
    let v = ok_json(&[
        "hclass-chain",
        "--matrix",
        &fixture("chain3_idempotent.json"),
    ]);
    assert_eq!(v["size"], 2);
}

#[test]
fn fixpoint_flags() {
    let m = r#"[["0","1","1"],["0","0","1"],["0","0","0"]]"#;
    let v = ok_json(&[
        "fixpoint",
        "--lattice",
        "bool",
        "--matrix",
        m,
        "--all",
        "--report",
    ]);
    assert_eq!(v["limit"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(v["nonzero"], false);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
    assert_eq!(v["equivalence"]["verdict"], true);

    let swap = r#"[["0","1"],["1","0"]]"#;
    let v = ok_json(&[
        "fixpoint",
        "--lattice",
        "bool",
        "--matrix",
        swap,
        "--start",
        r#"["1","0"]"#,
    ]);
    assert_eq!(v["orbit"]["period"], 2);
}

#[test]
fn golden_and_mutation() {
    let v = ok_json(&["golden"]);
    assert_eq!(v["failed"], 0);
    assert!(v["total"].as_u64().unwrap() >= 10);

    let out = latmat(&["golden", "--mutate"]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m3 = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "m3-nonassociative")
        .unwrap();
    assert_eq!(m3["passed"], false);
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--lattice", "N5", "--n", "2", "--k", "3"];
    assert_eq!(latmat(&args).stdout, latmat(&args).stdout);
    let pretty = latmat(&["--pretty", "lattice", "info", "N5"]).stdout;
    assert!(String::from_utf8_lossy(&pretty).contains("\n  \""));
}
