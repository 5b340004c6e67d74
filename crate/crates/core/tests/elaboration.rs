use infoprove::catalog::*;
use infoprove::elaborate::certificate_to_proof;
use infoprove::model::{copy_lemma, Eii};
use infoprove::rules::{check_proof, same_statement, ProofObject};
use infoprove::search::*;

fn proof(e: &Eii, premises: &[Eii]) -> ProofObject {
    proof_with(e, premises, &SearchOptions::default())
}

fn proof_with(e: &Eii, premises: &[Eii], opts: &SearchOptions) -> ProofObject {
    let out = prove_eii(e, premises, opts).unwrap();
    let cert = out.certificate().expect("proved");
    let p = certificate_to_proof(cert).unwrap();
    let check = check_proof(&p);
    assert!(check.is_valid(), "{check}");
    assert!(same_statement(&p.goal, e));
    p
}

#[test]
fn wyner_both_directions() {
    proof(&wyner_superadditive().unwrap(), &[]);
    proof(&wyner_subadditive().unwrap(), &[]);
}

#[test]
fn zhang_yeung_uses_copy_lemma() {
    let p = proof(&zhang_yeung().unwrap(), &[copy_lemma(2, 2)]);
    assert!(p.count("CI") >= 1);
    assert!(p.assumptions().is_empty());
}

#[test]
fn two_branch_splits() {
    let opts = SearchOptions {
        max_cases: Some(2),
        ..SearchOptions::default()
    };
    let p = proof_with(&two_branch().unwrap(), &[], &opts);
    assert!(p.count("Union") >= 1);
}

#[test]
#[ignore = "slow"]
fn gelfand_pinsker() {
    proof(&gelfand_pinsker_converse().unwrap(), &[]);
}
