//! JSON documents for statements, certificates, proofs and region reports.
//!
//! Every document is `{"schema": <kind>, "version": SCHEMA_VERSION, "data": ..}`.
//! Rationals are `{"num": "<int>", "den": "<int>"}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::entropy::{EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{Eii, Eip};
use crate::prover::DualCertificate;
use crate::rational::{serde_q, Q};
use crate::region::{RegionReport, RegionStep};
use crate::rules::{ElimOp, ProofObject, ProofStep, ShaForm};
use crate::search::ProofCertificate;

pub const SCHEMA_VERSION: u32 = 1;

pub const PROOF: &str = "infoprove.proof";
pub const CERTIFICATE: &str = "infoprove.certificate";
pub const STATEMENT: &str = "infoprove.statement";
pub const REGION: &str = "infoprove.region";
pub const REGION_REPORT: &str = "infoprove.region-report";
pub const RESULT: &str = "infoprove.result";

#[derive(Serialize, Deserialize)]
struct Document {
    schema: String,
    version: u32,
    data: Value,
}

pub fn document(kind: &str, data: Value) -> Value {
    serde_json::to_value(Document {
        schema: kind.to_string(),
        version: SCHEMA_VERSION,
        data,
    })
    .expect("plain data")
}

/// Schema name and payload of a document of a supported version.
pub fn open_document(v: &Value) -> Result<(String, Value)> {
    let d: Document = serde_json::from_value(v.clone()).map_err(malformed)?;
    if d.version != SCHEMA_VERSION {
        return Err(Error::Malformed(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            d.version
        )));
    }
    Ok((d.schema, d.data))
}

fn malformed(e: serde_json::Error) -> Error {
    Error::Malformed(e.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HTerm {
    pub vars: Vec<String>,
    #[serde(with = "serde_q")]
    pub coeff: Q,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealTerm {
    pub name: String,
    #[serde(with = "serde_q")]
    pub coeff: Q,
}

/// `sum coeff H(vars) + sum coeff name + constant >= 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowWire {
    pub h: Vec<HTerm>,
    pub reals: Vec<RealTerm>,
    #[serde(with = "serde_q")]
    pub constant: Q,
}

pub fn row_to_wire(ctx: &VarContext, e: &EntropyExpr) -> RowWire {
    RowWire {
        h: e.h_coeffs()
            .iter()
            .map(|(m, c)| HTerm {
                vars: ctx.names_of(*m).into_iter().map(String::from).collect(),
                coeff: c.clone(),
            })
            .collect(),
        reals: e
            .real_coeffs()
            .iter()
            .map(|(name, c)| RealTerm {
                name: name.clone(),
                coeff: c.clone(),
            })
            .collect(),
        constant: e.constant().clone(),
    }
}

pub fn row_from_wire(ctx: &VarContext, w: &RowWire) -> Result<EntropyExpr> {
    let mut e = EntropyExpr::constant_term(w.constant.clone());
    for t in &w.h {
        let m = ctx.mask_of(&t.vars)?;
        if m == 0 {
            return Err(Error::Malformed("entropy of the empty set".into()));
        }
        e.add_h(m, t.coeff.clone());
    }
    for t in &w.reals {
        if !ctx.has_real(&t.name) {
            return Err(Error::UnknownVariable(t.name.clone()));
        }
        e.add_real(&t.name, t.coeff.clone());
    }
    Ok(e)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EiiWire {
    pub rvs: Vec<String>,
    pub reals: Vec<String>,
    pub aux: Vec<String>,
    pub premise: Vec<RowWire>,
    pub consequence: Vec<RowWire>,
}

pub fn eii_to_wire(e: &Eii) -> EiiWire {
    let full = e.full_context();
    EiiWire {
        rvs: e.base.rv_names().to_vec(),
        reals: e.base.real_names().to_vec(),
        aux: e.aux.clone(),
        premise: e.premise.iter().map(|r| row_to_wire(&e.base, r)).collect(),
        consequence: e.consequence.iter().map(|r| row_to_wire(&full, r)).collect(),
    }
}

pub fn eii_from_wire(w: &EiiWire) -> Result<Eii> {
    let base = VarContext::new(&w.rvs, &w.reals)?;
    let (full, _) = base.extend(&w.aux)?;
    let premise = w
        .premise
        .iter()
        .map(|r| row_from_wire(&base, r))
        .collect::<Result<_>>()?;
    let cons = w
        .consequence
        .iter()
        .map(|r| row_from_wire(&full, r))
        .collect::<Result<_>>()?;
    Eii::new(base, w.aux.clone(), premise, cons)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EipWire {
    pub rvs: Vec<String>,
    pub reals: Vec<String>,
    pub aux: Vec<String>,
    pub exist_reals: Vec<String>,
    pub rows: Vec<RowWire>,
}

pub fn eip_to_wire(p: &Eip) -> EipWire {
    let full = p.full_context();
    EipWire {
        rvs: p.base.rv_names().to_vec(),
        reals: p.base.real_names().to_vec(),
        aux: p.aux.clone(),
        exist_reals: p.exist_reals.clone(),
        rows: p.rows.iter().map(|r| row_to_wire(&full, r)).collect(),
    }
}

pub fn eip_from_wire(w: &EipWire) -> Result<Eip> {
    let base = VarContext::new(&w.rvs, &w.reals)?;
    let mut rvs = w.rvs.clone();
    rvs.extend(w.aux.iter().cloned());
    let mut reals = w.reals.clone();
    reals.extend(w.exist_reals.iter().cloned());
    let full = VarContext::new(&rvs, &reals)?;
    let rows = w
        .rows
        .iter()
        .map(|r| row_from_wire(&full, r))
        .collect::<Result<_>>()?;
    Eip::new(base, w.aux.clone(), w.exist_reals.clone(), rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateWire {
    Trivial {
        eii: EiiWire,
        assignment: Vec<Vec<String>>,
        rows: Vec<DualCertificate>,
    },
    Premise {
        eii: EiiWire,
        lemma: EiiWire,
        substitution: Vec<Vec<String>>,
        implication: Vec<DualCertificate>,
        inner: Box<CertificateWire>,
    },
    CaseSplit {
        eii: EiiWire,
        split: RowWire,
        positive: Box<CertificateWire>,
        negative: Box<CertificateWire>,
    },
}

fn masks_to_names(ctx: &VarContext, masks: &[u32]) -> Vec<Vec<String>> {
    masks
        .iter()
        .map(|m| ctx.names_of(*m).into_iter().map(String::from).collect())
        .collect()
}

fn names_to_masks(ctx: &VarContext, names: &[Vec<String>]) -> Result<Vec<u32>> {
    names.iter().map(|n| ctx.mask_of(n)).collect()
}

pub fn certificate_to_wire(c: &ProofCertificate) -> CertificateWire {
    match c {
        ProofCertificate::Trivial {
            eii,
            assignment,
            rows,
        } => CertificateWire::Trivial {
            eii: eii_to_wire(eii),
            assignment: masks_to_names(&eii.base, assignment),
            rows: rows.clone(),
        },
        ProofCertificate::Premise {
            eii,
            lemma,
            substitution,
            implication,
            inner,
        } => CertificateWire::Premise {
            eii: eii_to_wire(eii),
            lemma: eii_to_wire(lemma),
            substitution: masks_to_names(&eii.base, substitution),
            implication: implication.clone(),
            inner: Box::new(certificate_to_wire(inner)),
        },
        ProofCertificate::CaseSplit {
            eii,
            split,
            positive,
            negative,
        } => CertificateWire::CaseSplit {
            eii: eii_to_wire(eii),
            split: row_to_wire(&eii.base, split),
            positive: Box::new(certificate_to_wire(positive)),
            negative: Box::new(certificate_to_wire(negative)),
        },
    }
}

pub fn certificate_from_wire(w: &CertificateWire) -> Result<ProofCertificate> {
    Ok(match w {
        CertificateWire::Trivial {
            eii,
            assignment,
            rows,
        } => {
            let eii = eii_from_wire(eii)?;
            ProofCertificate::Trivial {
                assignment: names_to_masks(&eii.base, assignment)?,
                eii,
                rows: rows.clone(),
            }
        }
        CertificateWire::Premise {
            eii,
            lemma,
            substitution,
            implication,
            inner,
        } => {
            let eii = eii_from_wire(eii)?;
            ProofCertificate::Premise {
                substitution: names_to_masks(&eii.base, substitution)?,
                eii,
                lemma: eii_from_wire(lemma)?,
                implication: implication.clone(),
                inner: Box::new(certificate_from_wire(inner)?),
            }
        }
        CertificateWire::CaseSplit {
            eii,
            split,
            positive,
            negative,
        } => {
            let eii = eii_from_wire(eii)?;
            ProofCertificate::CaseSplit {
                split: row_from_wire(&eii.base, split)?,
                eii,
                positive: Box::new(certificate_from_wire(positive)?),
                negative: Box::new(certificate_from_wire(negative)?),
            }
        }
    })
}

/// Rows inside proof steps use the generic names `X1, X2, ..`.
fn generic() -> VarContext {
    VarContext::numbered("X", 31)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum StepWire {
    Sha {
        form: String,
        given: usize,
    },
    Con {
        n: usize,
        rows: Vec<RowWire>,
        m: Vec<Vec<QWire>>,
        offset: Vec<QWire>,
    },
    Join {
        n: usize,
    },
    Tran {
        first: usize,
        second: usize,
    },
    Abs {
        step: usize,
    },
    Perm {
        step: usize,
        sigma1: Vec<usize>,
        sigma2: Vec<usize>,
    },
    Elim {
        step: usize,
        op: String,
        base: usize,
        aux: usize,
    },
    #[serde(rename = "CI")]
    Ci {
        step: usize,
        x_mask: u32,
    },
    Union {
        positive: usize,
        negative: usize,
        split: RowWire,
    },
    Premise {
        eii: EiiWire,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QWire(#[serde(with = "serde_q")] pub Q);

pub fn step_to_wire(s: &ProofStep) -> StepWire {
    let g = generic();
    match s {
        ProofStep::Sha(ShaForm::Entropy { given }) => StepWire::Sha {
            form: "entropy".into(),
            given: *given,
        },
        ProofStep::Sha(ShaForm::Mutual { given }) => StepWire::Sha {
            form: "mutual".into(),
            given: *given,
        },
        ProofStep::Con { n, rows, m, offset } => StepWire::Con {
            n: *n,
            rows: rows.iter().map(|r| row_to_wire(&g, r)).collect(),
            m: m.iter()
                .map(|r| r.iter().cloned().map(QWire).collect())
                .collect(),
            offset: offset.iter().cloned().map(QWire).collect(),
        },
        ProofStep::Join { n } => StepWire::Join { n: *n },
        ProofStep::Tran { first, second } => StepWire::Tran {
            first: *first,
            second: *second,
        },
        ProofStep::Abs { step } => StepWire::Abs { step: *step },
        ProofStep::Perm {
            step,
            sigma1,
            sigma2,
        } => StepWire::Perm {
            step: *step,
            sigma1: sigma1.clone(),
            sigma2: sigma2.clone(),
        },
        ProofStep::Elim { step, op } => {
            let (name, base, aux) = match *op {
                ElimOp::Introduce { base, aux } => ("introduce", base, aux),
                ElimOp::Remove { base, aux } => ("remove", base, aux),
            };
            StepWire::Elim {
                step: *step,
                op: name.into(),
                base,
                aux,
            }
        }
        ProofStep::Ci { step, x_mask } => StepWire::Ci {
            step: *step,
            x_mask: *x_mask,
        },
        ProofStep::Union {
            positive,
            negative,
            split,
        } => StepWire::Union {
            positive: *positive,
            negative: *negative,
            split: row_to_wire(&g, split),
        },
        ProofStep::Premise(e) => StepWire::Premise { eii: eii_to_wire(e) },
    }
}

pub fn step_from_wire(w: &StepWire) -> Result<ProofStep> {
    let g = generic();
    Ok(match w {
        StepWire::Sha { form, given } => ProofStep::Sha(match form.as_str() {
            "entropy" => ShaForm::Entropy { given: *given },
            "mutual" => ShaForm::Mutual { given: *given },
            other => return Err(Error::Malformed(format!("Sha form `{other}`"))),
        }),
        StepWire::Con { n, rows, m, offset } => ProofStep::Con {
            n: *n,
            rows: rows
                .iter()
                .map(|r| row_from_wire(&g, r))
                .collect::<Result<_>>()?,
            m: m.iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect(),
            offset: offset.iter().map(|x| x.0.clone()).collect(),
        },
        StepWire::Join { n } => ProofStep::Join { n: *n },
        StepWire::Tran { first, second } => ProofStep::Tran {
            first: *first,
            second: *second,
        },
        StepWire::Abs { step } => ProofStep::Abs { step: *step },
        StepWire::Perm {
            step,
            sigma1,
            sigma2,
        } => ProofStep::Perm {
            step: *step,
            sigma1: sigma1.clone(),
            sigma2: sigma2.clone(),
        },
        StepWire::Elim {
            step,
            op,
            base,
            aux,
        } => ProofStep::Elim {
            step: *step,
            op: match op.as_str() {
                "introduce" => ElimOp::Introduce {
                    base: *base,
                    aux: *aux,
                },
                "remove" => ElimOp::Remove {
                    base: *base,
                    aux: *aux,
                },
                other => return Err(Error::Malformed(format!("Elim op `{other}`"))),
            },
        },
        StepWire::Ci { step, x_mask } => ProofStep::Ci {
            step: *step,
            x_mask: *x_mask,
        },
        StepWire::Union {
            positive,
            negative,
            split,
        } => ProofStep::Union {
            positive: *positive,
            negative: *negative,
            split: row_from_wire(&g, split)?,
        },
        StepWire::Premise { eii } => ProofStep::Premise(eii_from_wire(eii)?),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofWire {
    pub goal: EiiWire,
    pub steps: Vec<StepWire>,
}

pub fn proof_to_json(p: &ProofObject) -> Value {
    let w = ProofWire {
        goal: eii_to_wire(&p.goal),
        steps: p.steps.iter().map(step_to_wire).collect(),
    };
    document(PROOF, serde_json::to_value(w).expect("plain data"))
}

pub fn proof_from_data(data: Value) -> Result<ProofObject> {
    let w: ProofWire = serde_json::from_value(data).map_err(malformed)?;
    Ok(ProofObject {
        goal: eii_from_wire(&w.goal)?,
        steps: w.steps.iter().map(step_from_wire).collect::<Result<_>>()?,
    })
}

pub fn certificate_to_json(c: &ProofCertificate) -> Value {
    document(
        CERTIFICATE,
        serde_json::to_value(certificate_to_wire(c)).expect("plain data"),
    )
}

pub fn certificate_from_data(data: Value) -> Result<ProofCertificate> {
    let w: CertificateWire = serde_json::from_value(data).map_err(malformed)?;
    certificate_from_wire(&w)
}

pub fn eii_to_json(e: &Eii) -> Value {
    document(STATEMENT, serde_json::to_value(eii_to_wire(e)).expect("plain data"))
}

pub fn eip_to_json(p: &Eip) -> Value {
    document(REGION, serde_json::to_value(eip_to_wire(p)).expect("plain data"))
}

fn region_step_to_value(s: &RegionStep) -> Value {
    use serde_json::json;
    match s {
        RegionStep::Note(t) => json!({ "step": "note", "text": t }),
        RegionStep::DropRow {
            context,
            row,
            certificate,
        } => json!({
            "step": "drop-row",
            "row": row_to_wire(context, row),
            "certificate": certificate,
        }),
        RegionStep::RemoveAux {
            aux,
            substitution,
            forward,
            reverse,
        } => json!({
            "step": "remove-aux",
            "aux": aux,
            "substitution": substitution,
            "forward": certificate_to_wire(forward),
            "reverse": certificate_to_wire(reverse),
        }),
        RegionStep::Eliminate {
            real,
            rows_before,
            rows_after,
        } => json!({
            "step": "eliminate",
            "real": real,
            "rows_before": rows_before,
            "rows_after": rows_after,
        }),
    }
}

pub fn region_report_to_json(r: &RegionReport) -> Value {
    let data = serde_json::json!({
        "original": eip_to_wire(&r.original),
        "simplified": eip_to_wire(&r.simplified),
        "complete": r.complete,
        "log": r.log.iter().map(region_step_to_value).collect::<Vec<_>>(),
    });
    document(REGION_REPORT, data)
}

/// Stable pretty-printed text of a document.
pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::two_branch;
    use crate::elaborate::certificate_to_proof;
    use crate::model::{copy_lemma, frl};
    use crate::rules::{check_proof, joint_entropy_proof};
    use crate::search::{prove_eii, verify_proof_certificate, SearchOptions};

    fn reopen(v: &Value, kind: &str) -> Value {
        let text = to_string(v);
        let (k, data) = open_document(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(k, kind);
        data
    }

    #[test]
    fn rationals_are_strings() {
        let v = eii_to_json(&copy_lemma(1, 1));
        let text = to_string(&v);
        assert!(text.contains("\"num\": \"-1\""));
        assert!(text.contains("\"den\": \"1\""));
        assert!(text.contains("\"version\": 1"));
    }

    #[test]
    fn statements_round_trip() {
        let e = frl();
        let w: EiiWire = serde_json::from_value(reopen(&eii_to_json(&e), STATEMENT)).unwrap();
        assert_eq!(eii_from_wire(&w).unwrap(), e);
        let p = crate::syntax::parse_eip("exists U real T: R <= I(U;Y) + T, T >= 0").unwrap();
        let w: EipWire = serde_json::from_value(reopen(&eip_to_json(&p), REGION)).unwrap();
        assert_eq!(eip_from_wire(&w).unwrap(), p);
    }

    #[test]
    fn proof_round_trip() {
        let p = joint_entropy_proof();
        let back = proof_from_data(reopen(&proof_to_json(&p), PROOF)).unwrap();
        assert_eq!(back, p);
        assert!(check_proof(&back).is_valid());
    }

    #[test]
    fn case_split_certificate_round_trip() {
        let opts = SearchOptions {
            max_cases: Some(2),
            ..SearchOptions::default()
        };
        let out = prove_eii(&two_branch().unwrap(), &[], &opts).unwrap();
        let cert = out.certificate().unwrap();
        let back = certificate_from_data(reopen(&certificate_to_json(cert), CERTIFICATE)).unwrap();
        assert_eq!(&back, cert);
        assert!(verify_proof_certificate(&back));
        let proof = certificate_to_proof(&back).unwrap();
        let again = proof_from_data(reopen(&proof_to_json(&proof), PROOF)).unwrap();
        assert!(check_proof(&again).is_valid());
    }

    #[test]
    fn wrong_version_is_rejected() {
        let mut v = eii_to_json(&frl());
        v["version"] = Value::from(SCHEMA_VERSION + 1);
        assert!(matches!(open_document(&v), Err(Error::Malformed(_))));
        let bad = serde_json::json!({"goal": 3});
        assert!(proof_from_data(bad).is_err());
    }
}
