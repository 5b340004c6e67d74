//! Browser bindings. Every export takes plain text and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use std::collections::HashMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use infoprove::elaborate::certificate_to_proof;
use infoprove::entropy::{entropic_vector_of_pmf, Pmf};
use infoprove::json as docs;
use infoprove::model::{copy_lemma, double_markov, frl, Eii};
use infoprove::region::{simplify, RegionOptions, RegionStep};
use infoprove::search::{prove_eii, EiiResult, SearchOptions};
use infoprove::syntax::{format_expr, parse, Statement};

type Res = Result<Value, String>;

fn finish(r: Res) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn premise(name: &str) -> Result<Eii, String> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("copy:") {
        let (n, l) = rest
            .split_once(',')
            .ok_or_else(|| format!("bad premise `{name}`"))?;
        let n: usize = n.trim().parse().map_err(|_| format!("bad premise `{name}`"))?;
        let l: usize = l.trim().parse().map_err(|_| format!("bad premise `{name}`"))?;
        if l == 0 || n + 2 * l > 8 {
            return Err(format!("{name} is too large for the browser"));
        }
        return Ok(copy_lemma(n, l));
    }
    match name {
        "frl" => Ok(frl()),
        "double-markov" => Ok(double_markov()),
        _ => Err(format!("unknown premise `{name}`")),
    }
}

pub fn prove_value(text: &str, premises: &str, max_cases: u32) -> Res {
    let e = parse(text)
        .and_then(|s| s.to_eii())
        .map_err(|e| e.to_string())?;
    let lemmas = premises
        .split(|c: char| c.is_whitespace() || c == ';')
        .filter(|s| !s.is_empty())
        .map(premise)
        .collect::<Result<Vec<_>, _>>()?;
    let opts = SearchOptions {
        max_cases: (max_cases > 0).then_some(max_cases as usize),
        jobs: 1,
        ..SearchOptions::default()
    };
    let out = prove_eii(&e, &lemmas, &opts).map_err(|e| e.to_string())?;
    let stats = json!({ "lp_solves": out.stats.lp_solves, "cache_hits": out.stats.cache_hits });
    match out.result {
        EiiResult::Proved(cert) => {
            let proof = certificate_to_proof(&cert).map_err(|e| e.to_string())?;
            Ok(json!({
                "status": "proved",
                "stats": stats,
                "certificate": docs::certificate_to_json(&cert)["data"],
                "proof": docs::proof_to_json(&proof)["data"],
                "proof_steps": proof.steps.len(),
            }))
        }
        EiiResult::Failed(f) => Ok(json!({
            "status": "not-proved",
            "stats": stats,
            "failure": serde_json::to_value(&f).map_err(|e| e.to_string())?,
        })),
    }
}

fn numbers<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("not a number: `{t}`")))
        .collect()
}

/// Joint entropies of a dense table, plus the value of each row of an
/// optional statement over the same variables.
pub fn entropies_value(shape: &str, probs: &str, statement: &str) -> Res {
    let shape: Vec<usize> = numbers(shape)?;
    if shape.is_empty() || shape.len() > 10 || shape.contains(&0) {
        return Err("shape needs 1 to 10 positive alphabet sizes".into());
    }
    let probs: Vec<f64> = numbers(probs)?;
    let pmf = Pmf::from_table(&shape, &probs).map_err(|e| e.to_string())?;
    let h = entropic_vector_of_pmf(&pmf).map_err(|e| e.to_string())?;

    let st = if statement.trim().is_empty() {
        None
    } else {
        let e = parse(statement)
            .and_then(|s| s.to_eii())
            .map_err(|e| e.to_string())?;
        if !e.aux.is_empty() || !e.base.real_names().is_empty() {
            return Err("only statements without auxiliaries or reals can be evaluated".into());
        }
        if e.base.n() != shape.len() {
            return Err(format!(
                "statement has {} variables, the table has {}",
                e.base.n(),
                shape.len()
            ));
        }
        Some(e)
    };
    let names: Vec<String> = match &st {
        Some(e) => e.base.rv_names().to_vec(),
        None => (1..=shape.len()).map(|i| format!("X{i}")).collect(),
    };
    let subsets: Vec<Value> = (1..h.values.len())
        .map(|m| {
            let set: Vec<&str> = (0..names.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| names[i].as_str())
                .collect();
            json!({ "set": set, "h": h.values[m] })
        })
        .collect();
    let mut out = json!({ "variables": names, "entropies": subsets });
    if let Some(e) = st {
        let none = HashMap::new();
        let eval = |rows: &[infoprove::entropy::EntropyExpr]| -> Result<Vec<Value>, String> {
            rows.iter()
                .map(|r| {
                    let v = r.evaluate(&h, &none).map_err(|e| e.to_string())?;
                    Ok(json!({ "row": format!("{} >= 0", format_expr(&e.base, r)), "value": v }))
                })
                .collect()
        };
        out["premise"] = json!(eval(&e.premise)?);
        out["consequence"] = json!(eval(&e.consequence)?);
    }
    Ok(out)
}

pub fn simplify_value(text: &str) -> Res {
    let p = parse(text)
        .and_then(|s| s.to_eip())
        .map_err(|e| e.to_string())?;
    let mut opts = RegionOptions::default();
    opts.search.jobs = 1;
    let rep = simplify(&p, &opts).map_err(|e| e.to_string())?;
    let log: Vec<String> = rep
        .log
        .iter()
        .map(|s| match s {
            RegionStep::Note(t) => t.clone(),
            RegionStep::DropRow { context, row, .. } => {
                format!("dropped {} >= 0", format_expr(context, row))
            }
            RegionStep::RemoveAux {
                aux, substitution, ..
            } => format!("removed {aux} = ({})", substitution.join(", ")),
            RegionStep::Eliminate {
                real,
                rows_before,
                rows_after,
            } => format!("eliminated {real}: {rows_before} -> {rows_after} rows"),
        })
        .collect();
    Ok(json!({
        "simplified": Statement::from_eip(&rep.simplified).to_string(),
        "complete": rep.complete,
        "log": log,
    }))
}

/// Try to prove a statement. `premises` is a space separated list such as
/// `copy:2,2 frl`; `max_cases` of zero disables case splits.
#[wasm_bindgen]
pub fn prove(text: &str, premises: &str, max_cases: u32) -> String {
    finish(prove_value(text, premises, max_cases))
}

#[wasm_bindgen]
pub fn entropies(shape: &str, probs: &str, statement: &str) -> String {
    finish(entropies_value(shape, probs, statement))
}

#[wasm_bindgen]
pub fn simplify_region(text: &str) -> String {
    finish(simplify_value(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn prove_shannon() {
        let v = get(prove("I(X;Y|Z) >= 0", "", 0));
        assert_eq!(v["status"], "proved");
        let v = get(prove("I(X;Y) >= H(X)", "", 0));
        assert_eq!(v["status"], "not-proved");
    }

    #[test]
    fn prove_reports_errors() {
        let v = get(prove("H(X >= 0", "", 0));
        assert!(v["error"].is_string());
        let v = get(prove("H(X) >= 0", "nonsense", 0));
        assert!(v["error"].as_str().unwrap().contains("nonsense"));
    }

    #[test]
    fn entropies_of_xor() {
        let v = get(entropies(
            "2 2 2",
            "0.25 0 0 0.25 0 0.25 0.25 0",
            "forall X Y Z : I(X;Y) >= 0, I(X;Y|Z) >= 0",
        ));
        let hs = v["entropies"].as_array().unwrap();
        assert_eq!(hs.len(), 7);
        assert!((hs[6]["h"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        let c = v["consequence"].as_array().unwrap();
        assert!(c[0]["value"].as_f64().unwrap().abs() < 1e-12);
        assert!((c[1]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropies_rejects_bad_tables() {
        assert!(get(entropies("2 2", "0.5 0.5", "")).get("error").is_some());
        assert!(get(entropies("2", "0.5 x", "")).get("error").is_some());
    }

    #[test]
    fn simplify_drops_redundant_row() {
        let v = get(simplify_region("forall X Y real R : R <= H(X), R <= H(X,Y)"));
        assert_eq!(v["complete"], true);
        let log = v["log"].as_array().unwrap();
        assert_eq!(log.iter().filter(|l| l.as_str().unwrap().starts_with("dropped")).count(), 1);
        assert!(v["simplified"].as_str().unwrap().contains("H(X)"));
    }
}
