use std::process::{Command, Output};

use necklace_core::expansion::Expansion;
use necklace_core::json::JsonForm;
use necklace_core::DerivationElem;

fn necklace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_necklace")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    necklace(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = necklace(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn bad_input_exits_with_two() {
    let out = necklace(&["bracket", "--g", "1", "N(a1 b1", "N(a1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 8"));
    assert_eq!(code(&["cobracket", "--g", "1", "N(a2)"]), 2);
    assert_eq!(code(&["homology", "--p", "3..1"]), 2);
    assert_eq!(code(&["bracket", "--g", "0", "N(a1)", "N(b1)"]), 2);
}

#[test]
fn failed_hypothesis_exits_with_one() {
    assert_eq!(code(&["verify", "--suite", "deformation", "--g", "1", "--A", "N(a1 a1)^N(b1)", "--w", "3"]), 1);
    assert_eq!(code(&["deform", "--g", "1", "--A", "N(a1 a1)^N(b1)", "--check-lemma31", "--w", "3"]), 1);
}

#[test]
fn bracket_output_parses_back() {
    let text = stdout(&["bracket", "--g", "1", "N(a1 a1 b1)", "N(b1 b1 a1)"]);
    let u = DerivationElem::from_json(&text).unwrap();
    assert_eq!(u.genus(), 1);
    assert_eq!(u.terms().len(), 2);
}

#[test]
fn schedler_four_term_value() {
    let text = stdout(&["cobracket", "--g", "2", "N(a1 a2 b1 b2)", "--format", "table"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    for row in ["-1     N(a1) ⊗ N(b1)", "1      N(b1) ⊗ N(a1)", "1      N(a2) ⊗ N(b2)", "-1     N(b2) ⊗ N(a2)"] {
        assert!(rows.contains(&row), "{text}");
    }
    assert_eq!(rows.len(), 4);
}

#[test]
fn expansion_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("necklace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    stdout(&["expand", "--g", "1", "--degree", "4", "--out", a.to_str().unwrap()]);
    stdout(&["expand", "--g", "1", "--degree", "4", "--random", "--seed", "3", "--out", b.to_str().unwrap()]);
    let th = Expansion::from_json(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!((th.genus(), th.cutoff()), (1, 4));
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let cmp = stdout(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(cmp.contains("\"terms\""), "{cmp}");
    let lp = stdout(&["loop", a.to_str().unwrap(), "x1"]);
    assert!(lp.contains("\"necklace\": \"a1\""), "{lp}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn deformed_homology_has_zero_extra_components() {
    let dir = std::env::temp_dir().join(format!("necklace-cli-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let h = dir.join("A.json");
    stdout(&["deform", "--g", "1", "--A", "N(a1)^N(b1)", "--save-handle", h.to_str().unwrap()]);
    let delta = format!("deformed:{}", h.display());
    let text = stdout(&["homology", "--g", "1", "--p", "0..2", "--w", "0..4", "--delta", &delta]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let induced = v["report"]["induced"].as_array().unwrap();
    assert!(induced.iter().any(|m| m["source"][1] == m["target"][1]));
    for m in induced {
        assert!(m["matrix"]["entries"].as_array().unwrap().is_empty(), "{m}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}
