//! Expected CLI reports under tests/golden. Regenerate with UPDATE_GOLDEN=1.
use heisgrad::cli::run;
use std::path::PathBuf;

const CASES: &[(&str, &[&str])] = &[
    ("enumerate_twisted_1_1_i_i", &["enumerate-fine", "--twisted", "1,1,i,i"]),
    ("enumerate_twisted_1_1_i_i_json", &["--format", "json", "enumerate-fine", "--twisted", "1,1,i,i"]),
    ("enumerate_twisted_1_2", &["enumerate-fine", "--twisted", "1,2"]),
    ("enumerate_twisted_1_3_9", &["enumerate-fine", "--twisted", "1,3,9"]),
    ("enumerate_heisenberg_3", &["enumerate-fine", "--heisenberg", "3"]),
    ("enumerate_super_1_2", &["enumerate-fine", "--super", "1,2"]),
    ("enumerate_super_1_3", &["enumerate-fine", "--super", "1,3"]),
    ("enumerate_super_2_4", &["enumerate-fine", "--super", "2,4"]),
    ("weyl_heisenberg_1", &["weyl", "--heisenberg", "1", "--fine", "--bruteforce"]),
    ("weyl_heisenberg_2", &["weyl", "--heisenberg", "2", "--fine", "--bruteforce"]),
    ("weyl_heisenberg_3", &["weyl", "--heisenberg", "3", "--fine"]),
    ("weyl_super_1_3_r0", &["weyl", "--super", "1,3", "--r", "0", "--bruteforce"]),
    ("weyl_super_2_4_r1", &["weyl", "--super", "2,4", "--r", "1"]),
    ("weyl_gamma1_1_2", &["weyl", "--twisted", "1,2", "--params", "gamma1", "--bruteforce"]),
    ("weyl_gamma2_1_2", &["weyl", "--twisted", "1,2", "--params", "gamma2", "--bruteforce"]),
    ("weyl_1_4_0", &["weyl", "--twisted", "1,1,i,i", "--params", "1,4,0;1,1,i,i;", "--bruteforce"]),
    ("weyl_2_0_4", &["weyl", "--twisted", "1,1,i,i", "--params", "2,0,4;;1,1,i,i", "--bruteforce"]),
    ("weyl_2_1_2", &["weyl", "--twisted", "1,1,i,i", "--params", "2,1,2;1;i,i", "--bruteforce"]),
    ("weyl_2_2_0", &["weyl", "--twisted", "1,1,i,i", "--params", "2,2,0;1,i;", "--bruteforce"]),
    ("weyl_4_0_2", &["weyl", "--twisted", "1,1,i,i", "--params", "4,0,2;;1,1", "--bruteforce"]),
    ("weyl_4_1_0", &["weyl", "--twisted", "1,1,i,i", "--params", "4,1,0;1;", "--bruteforce"]),
    ("weyl_4_1_0_json", &["--format", "json", "weyl", "--twisted", "1,1,i,i", "--params", "4,1,0;1;"]),
    ("universal_heisenberg_1_json", &["--format", "json", "universal-group", "--heisenberg", "1"]),
    ("universal_2_1_2", &["universal-group", "--twisted", "1,1,i,i", "--params", "2,1,2;1;i,i"]),
    ("universal_super_2_4_r2", &["universal-group", "--super", "2,4", "--r", "2"]),
    ("verify_h3", &["verify", "--input", "tests/golden/inputs/h3.json"]),
    ("verify_corrupted", &["verify", "--input", "tests/golden/inputs/corrupted_h3.json"]),
    ("verify_corrupted_json", &["--format", "json", "verify", "--input", "tests/golden/inputs/corrupted_h3.json"]),
    ("verify_fine_4_1_0", &["verify", "--twisted", "1,1,i,i", "--params", "4,1,0;1;"]),
    ("decompose_scrambled", &["decompose", "--twisted", "1,1,i,i", "--params", "2,1,2;1;i,i", "--scramble", "7"]),
    ("decompose_gamma1", &["decompose", "--twisted", "1,3,9", "--params", "gamma1", "--scramble", "1"]),
    ("color_z3z3", &["color-classify", "--input", "tests/golden/inputs/color_type_z3z3.json"]),
    ("color_super", &["color-classify", "--input", "tests/golden/inputs/color_algebra_super.json"]),
    ("color_alternating", &["color-classify", "--input", "tests/golden/inputs/color_algebra_alternating.json"]),
    ("error_bad_scalar", &["enumerate-fine", "--twisted", "1,zeta(,2"]),
    ("error_bad_params", &["weyl", "--twisted", "1,1,i,i", "--params", "3,1,0;1;"]),
    ("error_cap", &["weyl", "--heisenberg", "7", "--bruteforce"]),
    ("error_bad_json", &["verify", "--input", "{not json"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn invoke(args: &[&str]) -> (i32, String) {
    let mut full = vec!["heisgrad"];
    full.extend_from_slice(args);
    run(full)
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        let (code, out) = invoke(args);
        let got = format!("exit: {code}\n{out}");
        let path = golden_dir().join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(_) => failures.push(format!("{name}: report differs from {}", path.display())),
            Err(e) => failures.push(format!("{name}: cannot read {}: {e}", path.display())),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn reports_are_deterministic() {
    for (_, args) in CASES.iter().filter(|(n, _)| n.starts_with("weyl_2") || n.starts_with("enumerate_twisted") || n.starts_with("decompose")) {
        assert_eq!(invoke(args), invoke(args));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["verify", "--input", "tests/golden/inputs/corrupted_h3.json"]).0, 3);
    assert_eq!(invoke(&["verify", "--input", "{not json"]).0, 2);
    assert_eq!(invoke(&["weyl", "--heisenberg", "7", "--bruteforce"]).0, 4);
    assert_eq!(invoke(&["no-such-command"]).0, 2);
    assert_eq!(invoke(&["--help"]).0, 0);
}

#[test]
fn corrupted_grading_reports_a_witness_bracket() {
    let (code, out) = invoke(&["--format", "json", "verify", "--input", "tests/golden/inputs/corrupted_h3.json"]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let w = &v["error"]["witness"];
    assert_eq!(w["bracket"], "z");
    assert_eq!(w["expected_degree"], "(1,0)");
}

#[test]
fn universal_group_output_reparses_as_input() {
    for args in [
        vec!["universal-group", "--heisenberg", "2"],
        vec!["universal-group", "--twisted", "1,1,i,i", "--params", "4,0,2;;1,1"],
        vec!["universal-group", "--super", "1,3", "--r", "1"],
    ] {
        let mut a = vec!["--format", "json"];
        a.extend(args);
        let (code, out) = invoke(&a);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let spec = serde_json::to_string(&v["grading"]).unwrap();
        let (code, out) = invoke(&["--format", "json", "verify", "--input", &spec]);
        assert_eq!(code, 0, "{out}");
        let r: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(r["group"], v["universal_group"]);
        // a fine grading regraded by its universal group is its own universal grading
        let (code, again) = invoke(&["--format", "json", "universal-group", "--input", &spec]);
        assert_eq!(code, 0);
        let again: serde_json::Value = serde_json::from_str(&again).unwrap();
        assert_eq!(again["universal_group"], v["universal_group"]);
    }
}

#[test]
fn color_type_output_reparses_as_input() {
    let (code, out) = invoke(&["--format", "json", "color-classify", "--input", "tests/golden/inputs/color_algebra_super.json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let input = serde_json::json!({"type": v["type"]}).to_string();
    let (code, out2) = invoke(&["--format", "json", "color-classify", "--input", &input]);
    assert_eq!(code, 0, "{out2}");
    let v2: serde_json::Value = serde_json::from_str(&out2).unwrap();
    assert_eq!(v2["type"], v["type"]);
}
