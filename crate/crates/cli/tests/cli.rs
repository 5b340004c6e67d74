use std::path::PathBuf;
use std::process::Command;

fn statement(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "statements", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_infoprove"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn shannon_inequality_is_proved() {
    let (code, out, _) = run(&["prove", "I(X;Y) >= 0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("proved"));
}

#[test]
fn false_statement_reports_a_counterexample() {
    let (code, out, _) = run(&["prove", "I(X;Y) <= I(X;Y|Z)"]);
    assert_eq!(code, 1);
    assert!(out.contains("fails"));
}

#[test]
fn zhang_yeung_needs_the_copy_lemma() {
    let zy = statement("zy.eii");
    assert_eq!(run(&["prove", &zy]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("zy.proof.json");
    let cert = dir.path().join("zy.cert.json");
    let (code, out, err) = run(&[
        "prove",
        &zy,
        "--premise",
        "copy:2,2",
        "--repeat",
        "1",
        "--proof",
        proof.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert_eq!(run(&["check-proof", proof.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["check-proof", cert.to_str().unwrap()]).0, 0);

    let text = std::fs::read_to_string(&proof).unwrap();
    let tampered = text.replacen("\"rule\": \"Tran\"", "\"rule\": \"Abs\"", 1);
    assert_ne!(tampered, text);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, tampered).unwrap();
    assert_ne!(run(&["check-proof", bad.to_str().unwrap()]).0, 0);
}

#[test]
fn json_output_is_reproducible() {
    let zy = statement("zy.eii");
    let args = [
        "--format", "json", "prove", &zy, "--premise", "copy:2,2", "--jobs", "2", "--seed", "5",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["data"]["status"], "proved");
}

#[test]
fn case_split_needs_max_cases() {
    let tb = statement("two_branch.eii");
    assert_eq!(run(&["prove", &tb]).0, 1);
    let (code, out, _) = run(&["prove", &tb, "--max-cases", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("U = (X)") && out.contains("U = (Y)"));
}

#[test]
fn regions() {
    let sp = statement("superposition.eip");
    let relaxed = "forall X Y1 Y2 real R1 R2: exists U: \
                   R1 <= I(X;Y1|U), R2 <= I(U;Y2), I(U;Y1,Y2|X) == 0";
    assert_eq!(run(&["check-implies", &sp, relaxed]).0, 0);
    let (code, out, _) = run(&["simplify", &statement("removable.eip")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("forall X Y real R: H(X) >= R"), "{out}");
    assert!(out.contains("removed U = (X)"));
}

#[test]
fn input_errors_and_budget() {
    let (code, _, err) = run(&["prove", "H(X) >= "]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error at 8"));
    assert_eq!(run(&["prove", "H(X) >= 0", "--premise", "nonsense"]).0, 2);
    assert_eq!(run(&["check-proof", "/nonexistent.json"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let zy = statement("zy.eii");
    assert_eq!(run(&["prove", &zy, "--premise", "copy:2,2", "--budget", "3"]).0, 3);
}

#[test]
fn lemmas_are_listed() {
    let (code, out, _) = run(&["lemmas"]);
    assert_eq!(code, 0);
    assert!(out.contains("copy:<n>,<l>") && out.contains("double-markov"));
}
