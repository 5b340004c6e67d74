use serde_json::Value;

fn get(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn prove_with_a_premise() {
    let zy = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../statements/zy.eii"))
        .unwrap();
    let text: String = zy
        .lines()
        .map(|l| l.split('#').next().unwrap())
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(get(infoprove_web::prove(&text, "", 0))["status"], "not-proved");
    let v = get(infoprove_web::prove(&text, "copy:2,2", 0));
    assert_eq!(v["status"], "proved");
    assert!(v["proof_steps"].as_u64().unwrap() > 0);
}

#[test]
fn premise_size_is_capped() {
    let v = get(infoprove_web::prove("H(X) >= 0", "copy:4,3", 0));
    assert!(v["error"].is_string());
}

#[test]
fn entropies_uniform_bits() {
    let v = get(infoprove_web::entropies("4", "0.25 0.25 0.25 0.25", ""));
    assert_eq!(v["variables"][0], "X1");
    assert!((v["entropies"][0]["h"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn entropies_statement_must_match_table() {
    let v = get(infoprove_web::entropies("2 2", "0.25 0.25 0.25 0.25", "I(X;Y|Z) >= 0"));
    assert!(v["error"].as_str().unwrap().contains("variables"));
}

#[test]
fn simplify_removable_region() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../statements/removable.eip"
    ))
    .unwrap();
    let text: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap())
        .collect::<Vec<_>>()
        .join("\n");
    let v = get(infoprove_web::simplify_region(&text));
    assert_eq!(v["complete"], true);
    let s = v["simplified"].as_str().unwrap();
    assert!(!s.contains("exists"), "{s}");
}
