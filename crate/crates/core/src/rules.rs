//! Proofs as sequences of inference-rule applications, and their checker.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::entropy::{full_mask, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{zero, Eii};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShaForm {
    /// `forall X, Z^k: H(X | Z^k) >= 0`, variables ordered `(X, Z^k)`.
    Entropy { given: usize },
    /// `forall X, Y, Z^k: I(X; Y | Z^k) >= 0`, ordered `(X, Y, Z^k)`.
    Mutual { given: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElimOp {
    /// Append `base` universal variables (before the auxiliaries) and `aux`
    /// auxiliaries.
    Introduce { base: usize, aux: usize },
    /// Drop the last `base` universal variables and last `aux` auxiliaries,
    /// which must not occur in any row.
    Remove { base: usize, aux: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProofStep {
    Sha(ShaForm),
    /// `A -> M A + offset` over `n` universal variables, no auxiliaries.
    Con {
        n: usize,
        rows: Vec<EntropyExpr>,
        m: Vec<Vec<Q>>,
        offset: Vec<Q>,
    },
    Join { n: usize },
    Tran { first: usize, second: usize },
    Abs { step: usize },
    /// New variable `i` is old variable `sigma1[i]`; likewise `sigma2` for
    /// the auxiliaries.
    Perm {
        step: usize,
        sigma1: Vec<usize>,
        sigma2: Vec<usize>,
    },
    Elim { step: usize, op: ElimOp },
    /// Conditional independence: the universal variables in `x_mask` play
    /// the role of `X`, the rest of `Y`; adds `I(U; Y | X) = 0`.
    Ci { step: usize, x_mask: u32 },
    Union {
        positive: usize,
        negative: usize,
        split: EntropyExpr,
    },
    /// An assumed lemma.
    Premise(Eii),
}

impl ProofStep {
    pub fn tag(&self) -> &'static str {
        match self {
            ProofStep::Sha(_) => "Sha",
            ProofStep::Con { .. } => "Con",
            ProofStep::Join { .. } => "Join",
            ProofStep::Tran { .. } => "Tran",
            ProofStep::Abs { .. } => "Abs",
            ProofStep::Perm { .. } => "Perm",
            ProofStep::Elim { .. } => "Elim",
            ProofStep::Ci { .. } => "CI",
            ProofStep::Union { .. } => "Union",
            ProofStep::Premise(_) => "Premise",
        }
    }

    /// Indices of earlier steps this one uses.
    pub fn references(&self) -> Vec<usize> {
        match self {
            ProofStep::Tran { first, second } => vec![*first, *second],
            ProofStep::Abs { step }
            | ProofStep::Perm { step, .. }
            | ProofStep::Elim { step, .. }
            | ProofStep::Ci { step, .. } => vec![*step],
            ProofStep::Union {
                positive, negative, ..
            } => vec![*positive, *negative],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofObject {
    pub goal: Eii,
    pub steps: Vec<ProofStep>,
}

impl ProofObject {
    pub fn count(&self, tag: &str) -> usize {
        self.steps.iter().filter(|s| s.tag() == tag).count()
    }

    pub fn assumptions(&self) -> Vec<&Eii> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ProofStep::Premise(e) => Some(e),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofCheck {
    Valid,
    Invalid { step: usize, reason: String },
}

impl ProofCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, ProofCheck::Valid)
    }
}

impl fmt::Display for ProofCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofCheck::Valid => write!(f, "valid"),
            ProofCheck::Invalid { step, reason } => write!(f, "invalid at step {step}: {reason}"),
        }
    }
}

/// Rows sorted, deduplicated, trivial `0 >= 0` rows dropped.
pub fn canonical_rows(rows: &[EntropyExpr]) -> Vec<EntropyExpr> {
    let set: BTreeSet<EntropyExpr> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    set.into_iter().collect()
}

/// Equality of statements up to variable names and row order.
pub fn same_statement(a: &Eii, b: &Eii) -> bool {
    a.n() == b.n()
        && a.l() == b.l()
        && canonical_rows(&a.premise) == canonical_rows(&b.premise)
        && canonical_rows(&a.consequence) == canonical_rows(&b.consequence)
}

fn reals_of(rows: &[&[EntropyExpr]]) -> Vec<String> {
    let set: BTreeSet<&String> = rows
        .iter()
        .flat_map(|rs| rs.iter().flat_map(|r| r.real_coeffs().keys()))
        .collect();
    set.into_iter().cloned().collect()
}

/// A derived statement with generated names and canonical rows.
pub fn statement(
    n: usize,
    l: usize,
    premise: &[EntropyExpr],
    consequence: &[EntropyExpr],
) -> Result<Eii> {
    if n + l > 31 {
        return Err(Error::Malformed(format!("{} variables", n + l)));
    }
    let rvs: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    let reals = reals_of(&[premise, consequence]);
    let base = VarContext::new(&rvs, &reals)?;
    let aux = (1..=l).map(|i| format!("U{i}")).collect();
    Eii::new(
        base,
        aux,
        canonical_rows(premise),
        canonical_rows(consequence),
    )
}

fn violation(step: usize, reason: impl Into<String>) -> Error {
    Error::RuleViolation {
        step,
        reason: reason.into(),
    }
}

fn get(derived: &[Eii], idx: usize, at: usize) -> Result<&Eii> {
    if idx >= at {
        return Err(violation(at, format!("reference to step {idx} is not earlier")));
    }
    derived
        .get(idx)
        .ok_or_else(|| violation(at, format!("no step {idx}")))
}

fn check_perm(sigma: &[usize], len: usize, at: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if sigma.len() != len {
        return Err(violation(at, "permutation has the wrong length"));
    }
    for &s in sigma {
        if s >= len || seen[s] {
            return Err(violation(at, "not a permutation"));
        }
        seen[s] = true;
    }
    Ok(())
}

fn mask_bits(m: u32, bit: u32) -> bool {
    m & bit != 0
}

/// Conclusion of `step`, given the conclusions of all earlier steps
/// (`derived.len()` is this step's index).
pub fn apply_rule(step: &ProofStep, derived: &[Eii]) -> Result<Eii> {
    let at = derived.len();
    let wrap = |e: Error| match e {
        Error::RuleViolation { .. } => e,
        other => violation(at, other.to_string()),
    };
    apply_inner(step, derived, at).map_err(wrap)
}

fn apply_inner(step: &ProofStep, derived: &[Eii], at: usize) -> Result<Eii> {
    match step {
        ProofStep::Sha(form) => match *form {
            ShaForm::Entropy { given } => {
                let n = given + 1;
                statement(n, 0, &[], &[EntropyExpr::cond_entropy(1, full_mask(n) & !1)])
            }
            ShaForm::Mutual { given } => {
                let n = given + 2;
                statement(
                    n,
                    0,
                    &[],
                    &[EntropyExpr::mutual_info(1, 2, full_mask(n) & !3)],
                )
            }
        },
        ProofStep::Con { n, rows, m, offset } => {
            let n = *n;
            if n > 31 {
                return Err(violation(at, "too many variables"));
            }
            for r in rows {
                if r.support_mask() & !full_mask(n) != 0 {
                    return Err(violation(at, "row uses variables outside the context"));
                }
            }
            if !offset.is_empty() && offset.len() != m.len() {
                return Err(violation(at, "offset length differs from the row count of M"));
            }
            let mut out = Vec::with_capacity(m.len());
            for (i, coeffs) in m.iter().enumerate() {
                if coeffs.len() != rows.len() {
                    return Err(violation(at, "M has the wrong number of columns"));
                }
                let mut acc = EntropyExpr::zero();
                for (c, r) in coeffs.iter().zip(rows) {
                    if c.is_negative() {
                        return Err(violation(at, "negative entry in M"));
                    }
                    if !c.is_zero() {
                        acc += &r.scale(c);
                    }
                }
                if let Some(o) = offset.get(i) {
                    if o.is_negative() {
                        return Err(violation(at, "negative offset"));
                    }
                    acc.add_constant(o.clone());
                }
                out.push(acc);
            }
            statement(n, 0, rows, &out)
        }
        ProofStep::Join { n } => {
            let n = *n;
            let u = 1u32 << n;
            let x = full_mask(n);
            let mut cons = Vec::new();
            cons.extend(zero(&EntropyExpr::cond_entropy(x, u)));
            cons.extend(zero(&EntropyExpr::cond_entropy(u, x)));
            statement(n, 1, &[], &cons)
        }
        ProofStep::Tran { first, second } => {
            let a = get(derived, *first, at)?;
            let b = get(derived, *second, at)?;
            if b.n() != a.n() + a.l() {
                return Err(violation(
                    at,
                    "second statement's universal variables do not match the first's variables",
                ));
            }
            if canonical_rows(&a.consequence) != canonical_rows(&b.premise) {
                return Err(violation(at, "middle systems differ"));
            }
            statement(a.n(), a.l() + b.l(), &a.premise, &b.consequence)
        }
        ProofStep::Abs { step } => {
            let a = get(derived, *step, at)?;
            let mut cons = a.consequence.clone();
            cons.extend(a.premise.iter().cloned());
            statement(a.n(), a.l(), &a.premise, &cons)
        }
        ProofStep::Perm {
            step,
            sigma1,
            sigma2,
        } => {
            let a = get(derived, *step, at)?;
            let (n, l) = (a.n(), a.l());
            check_perm(sigma1, n, at)?;
            check_perm(sigma2, l, at)?;
            // old position -> new position
            let mut inv = vec![0usize; n + l];
            for (new, &old) in sigma1.iter().enumerate() {
                inv[old] = new;
            }
            for (new, &old) in sigma2.iter().enumerate() {
                inv[n + old] = n + new;
            }
            let map = |m: u32| {
                let mut out = 0u32;
                for (old, new) in inv.iter().enumerate() {
                    if mask_bits(m, 1 << old) {
                        out |= 1 << new;
                    }
                }
                out
            };
            let prem: Vec<EntropyExpr> = a.premise.iter().map(|r| r.map_masks(map)).collect();
            let cons: Vec<EntropyExpr> = a.consequence.iter().map(|r| r.map_masks(map)).collect();
            statement(n, l, &prem, &cons)
        }
        ProofStep::Elim { step, op } => {
            let a = get(derived, *step, at)?;
            let (n, l) = (a.n(), a.l());
            match *op {
                ElimOp::Introduce { base, aux } => {
                    if n + base + l + aux > 31 {
                        return Err(violation(at, "too many variables"));
                    }
                    let shift = |m: u32| {
                        let low = m & full_mask(n);
                        let high = m & !full_mask(n);
                        low | (high << base)
                    };
                    let cons: Vec<EntropyExpr> =
                        a.consequence.iter().map(|r| r.map_masks(shift)).collect();
                    statement(n + base, l + aux, &a.premise, &cons)
                }
                ElimOp::Remove { base, aux } => {
                    if base > n || aux > l {
                        return Err(violation(at, "removing more variables than exist"));
                    }
                    let dropped_base = full_mask(n) & !full_mask(n - base);
                    let dropped_aux = (full_mask(l) & !full_mask(l - aux)) << n;
                    for r in &a.premise {
                        if r.support_mask() & dropped_base != 0 {
                            return Err(violation(at, "removed variable occurs in the premise"));
                        }
                    }
                    for r in &a.consequence {
                        if r.support_mask() & (dropped_base | dropped_aux) != 0 {
                            return Err(violation(
                                at,
                                "removed variable occurs in the consequence",
                            ));
                        }
                    }
                    let keep = n - base;
                    let shift = |m: u32| {
                        let low = m & full_mask(keep);
                        let high = m >> n;
                        low | (high << keep)
                    };
                    let cons: Vec<EntropyExpr> =
                        a.consequence.iter().map(|r| r.map_masks(shift)).collect();
                    statement(keep, l - aux, &a.premise, &cons)
                }
            }
        }
        ProofStep::Ci { step, x_mask } => {
            let a = get(derived, *step, at)?;
            let (n, l) = (a.n(), a.l());
            if x_mask & !full_mask(n) != 0 {
                return Err(violation(at, "X set outside the universal variables"));
            }
            let y = full_mask(n) & !x_mask;
            let u = full_mask(n + l) & !full_mask(n);
            for r in &a.consequence {
                for m in r.h_coeffs().keys() {
                    if m & u != 0 && m & y != 0 {
                        return Err(violation(
                            at,
                            "a consequence term mixes auxiliaries with the Y variables",
                        ));
                    }
                }
            }
            let mut cons = a.consequence.clone();
            cons.extend(zero(&EntropyExpr::mutual_info(u, y, *x_mask)));
            statement(n, l, &a.premise, &cons)
        }
        ProofStep::Union {
            positive,
            negative,
            split,
        } => {
            let p = get(derived, *positive, at)?;
            let q = get(derived, *negative, at)?;
            if p.n() != q.n() || p.l() != q.l() {
                return Err(violation(at, "branches have different shapes"));
            }
            if canonical_rows(&p.consequence) != canonical_rows(&q.consequence) {
                return Err(violation(at, "branches prove different consequences"));
            }
            if split.is_zero() || split.support_mask() & !full_mask(p.n()) != 0 {
                return Err(violation(at, "split row must be a nonzero row on the universal variables"));
            }
            let prem = canonical_rows(&p.premise);
            if !prem.contains(split) {
                return Err(violation(at, "positive branch does not assume the split row"));
            }
            let rest: Vec<EntropyExpr> = prem.into_iter().filter(|r| r != split).collect();
            let mut neg = rest.clone();
            neg.push(-split);
            if canonical_rows(&neg) != canonical_rows(&q.premise) {
                return Err(violation(at, "negative branch premise is not the negated split"));
            }
            statement(p.n(), p.l(), &rest, &p.consequence)
        }
        ProofStep::Premise(e) => {
            e.validate()?;
            statement(e.n(), e.l(), &e.premise, &e.consequence)
        }
    }
}

/// Replay every step; valid iff all steps check and the last conclusion
/// is the goal.
pub fn check_proof(p: &ProofObject) -> ProofCheck {
    let mut derived: Vec<Eii> = Vec::with_capacity(p.steps.len());
    for (i, s) in p.steps.iter().enumerate() {
        match apply_rule(s, &derived) {
            Ok(e) => derived.push(e),
            Err(Error::RuleViolation { reason, .. }) => {
                return ProofCheck::Invalid { step: i, reason }
            }
            Err(e) => {
                return ProofCheck::Invalid {
                    step: i,
                    reason: e.to_string(),
                }
            }
        }
    }
    match derived.last() {
        None => ProofCheck::Invalid {
            step: 0,
            reason: "empty proof".into(),
        },
        Some(last) if same_statement(last, &p.goal) => ProofCheck::Valid,
        Some(_) => ProofCheck::Invalid {
            step: p.steps.len() - 1,
            reason: "final conclusion differs from the goal".into(),
        },
    }
}

/// All conclusions of a proof, failing at the first bad step.
pub fn conclusions(steps: &[ProofStep]) -> Result<Vec<Eii>> {
    let mut derived = Vec::with_capacity(steps.len());
    for s in steps {
        let e = apply_rule(s, &derived)?;
        derived.push(e);
    }
    Ok(derived)
}

/// The step-by-step proof of `forall X,Y: H(X,Y) >= 0` from the two
/// Shannon axioms.
pub fn joint_entropy_proof() -> ProofObject {
    let one = Q::from_integer(1.into());
    let hx = EntropyExpr::h(1);
    let hy_x = EntropyExpr::cond_entropy(2, 1);
    let steps = vec![
        // 0: forall X: H(X) >= 0
        ProofStep::Sha(ShaForm::Entropy { given: 0 }),
        // 1: forall X,Z: H(X|Z) >= 0
        ProofStep::Sha(ShaForm::Entropy { given: 1 }),
        // 2: forall X,Y: H(Y|X) >= 0
        ProofStep::Perm {
            step: 1,
            sigma1: vec![1, 0],
            sigma2: vec![],
        },
        // 3: H(X) >= 0 -> True
        ProofStep::Con {
            n: 2,
            rows: vec![hx.clone()],
            m: vec![],
            offset: vec![],
        },
        // 4: H(X) >= 0 -> H(Y|X) >= 0
        ProofStep::Tran { first: 3, second: 2 },
        // 5: H(X) >= 0 -> H(Y|X) >= 0 & H(X) >= 0
        ProofStep::Abs { step: 4 },
        // 6: H(Y|X) >= 0 & H(X) >= 0 -> H(X,Y) >= 0
        ProofStep::Con {
            n: 2,
            rows: vec![hy_x, hx],
            m: vec![vec![one.clone(), one]],
            offset: vec![],
        },
        // 7: H(X) >= 0 -> H(X,Y) >= 0
        ProofStep::Tran { first: 5, second: 6 },
        // 8: forall X,Y: H(X) >= 0
        ProofStep::Elim {
            step: 0,
            op: ElimOp::Introduce { base: 1, aux: 0 },
        },
        // 9: forall X,Y: H(X,Y) >= 0
        ProofStep::Tran { first: 8, second: 7 },
    ];
    let goal = statement(2, 0, &[], &[EntropyExpr::h(3)]).expect("two variables");
    ProofObject { goal, steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn sha_shapes() {
        let e = apply_rule(&ProofStep::Sha(ShaForm::Entropy { given: 2 }), &[]).unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(e.consequence, vec![EntropyExpr::cond_entropy(1, 6)]);
        let i = apply_rule(&ProofStep::Sha(ShaForm::Mutual { given: 0 }), &[]).unwrap();
        assert_eq!(i.consequence, vec![EntropyExpr::mutual_info(1, 2, 0)]);
    }

    #[test]
    fn con_sums_rows() {
        let rows = vec![EntropyExpr::h(1), EntropyExpr::h(2)];
        let step = ProofStep::Con {
            n: 2,
            rows: rows.clone(),
            m: vec![vec![q(1), q(1)]],
            offset: vec![],
        };
        let e = apply_rule(&step, &[]).unwrap();
        assert_eq!(e.consequence, vec![&rows[0] + &rows[1]]);
        let bad = ProofStep::Con {
            n: 2,
            rows,
            m: vec![vec![q(1), q(-1)]],
            offset: vec![],
        };
        assert!(matches!(apply_rule(&bad, &[]), Err(Error::RuleViolation { .. })));
    }

    #[test]
    fn identity_con_and_perm_are_noops() {
        let rows = vec![EntropyExpr::cond_entropy(1, 2), EntropyExpr::h(3)];
        let step = ProofStep::Con {
            n: 2,
            rows: rows.clone(),
            m: vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            offset: vec![],
        };
        let e = apply_rule(&step, &[]).unwrap();
        assert_eq!(canonical_rows(&e.premise), canonical_rows(&e.consequence));
        let p = ProofStep::Perm {
            step: 0,
            sigma1: vec![0, 1],
            sigma2: vec![],
        };
        let f = apply_rule(&p, &[e.clone()]).unwrap();
        assert!(same_statement(&e, &f));
    }

    #[test]
    fn worked_proof_checks() {
        assert_eq!(check_proof(&joint_entropy_proof()), ProofCheck::Valid);
    }

    #[test]
    fn deleting_abs_breaks_the_proof() {
        let mut p = joint_entropy_proof();
        p.steps.remove(5);
        // the Tran following the Con no longer finds a matching middle system
        for s in p.steps.iter_mut() {
            if let ProofStep::Tran { first, second } = s {
                if *first > 5 {
                    *first -= 1;
                }
                if *second > 5 {
                    *second -= 1;
                }
            }
        }
        match check_proof(&p) {
            ProofCheck::Invalid { step, .. } => assert_eq!(step, 6),
            ProofCheck::Valid => panic!("accepted"),
        }
    }

    #[test]
    fn forward_references_rejected() {
        let steps = vec![ProofStep::Abs { step: 0 }];
        assert!(matches!(
            conclusions(&steps),
            Err(Error::RuleViolation { step: 0, .. })
        ));
    }

    #[test]
    fn ci_rule_and_precondition() {
        // forall X,Y exists U: H(U) = H(Y)  (U mixes with Y only through H)
        let join = apply_rule(&ProofStep::Join { n: 1 }, &[]).unwrap();
        let d = vec![join];
        let lifted = apply_rule(
            &ProofStep::Elim {
                step: 0,
                op: ElimOp::Introduce { base: 1, aux: 0 },
            },
            &d,
        )
        .unwrap();
        let d = vec![d[0].clone(), lifted];
        // X = var 1, Y = var 0: U is tied to var 0, so the rule must refuse
        let bad = apply_rule(&ProofStep::Ci { step: 1, x_mask: 2 }, &d);
        assert!(bad.is_err());
        let ok = apply_rule(&ProofStep::Ci { step: 1, x_mask: 1 }, &d).unwrap();
        assert_eq!(ok.consequence.len(), d[1].consequence.len() + 2);
    }

    #[test]
    fn union_requires_matching_branches() {
        let c = &EntropyExpr::h(1) - &EntropyExpr::h(2);
        let pos = ProofStep::Premise(statement(2, 0, &[c.clone()], &[EntropyExpr::h(1)]).unwrap());
        let neg = ProofStep::Premise(statement(2, 0, &[-&c], &[EntropyExpr::h(1)]).unwrap());
        let d = vec![
            apply_rule(&pos, &[]).unwrap(),
            apply_rule(&neg, &[]).unwrap(),
        ];
        let u = apply_rule(
            &ProofStep::Union {
                positive: 0,
                negative: 1,
                split: c.clone(),
            },
            &d,
        )
        .unwrap();
        assert!(u.premise.is_empty());
        assert!(apply_rule(
            &ProofStep::Union {
                positive: 0,
                negative: 1,
                split: -&c,
            },
            &d
        )
        .is_err());
    }
}
