//! Turn search certificates into rule-level proofs.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::entropy::{full_mask, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{copy_lemma, Eii};
use crate::prover::{prove_cii_with, CiiOutcome, CiiQuery, ProverOptions};
use crate::cone::elemental_inequalities;
use crate::rational::Q;
use crate::rules::{
    apply_rule, canonical_rows, same_statement, ElimOp, ProofObject, ProofStep, ShaForm,
};
use crate::search::ProofCertificate;

struct Builder {
    steps: Vec<ProofStep>,
    derived: Vec<Eii>,
    facts: HashMap<(usize, EntropyExpr), usize>,
    joins: HashMap<(usize, u32), usize>,
    opts: ProverOptions,
}

fn identity_perm(s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &v)| i == v)
}

fn malformed(msg: &str) -> Error {
    Error::Malformed(format!("certificate elaboration: {msg}"))
}

impl Builder {
    fn new(opts: ProverOptions) -> Self {
        Builder {
            steps: Vec::new(),
            derived: Vec::new(),
            facts: HashMap::new(),
            joins: HashMap::new(),
            opts,
        }
    }

    fn push(&mut self, s: ProofStep) -> Result<usize> {
        let e = apply_rule(&s, &self.derived)?;
        self.steps.push(s);
        self.derived.push(e);
        Ok(self.steps.len() - 1)
    }

    fn concl(&self, i: usize) -> &Eii {
        &self.derived[i]
    }

    fn width(&self, i: usize) -> usize {
        self.derived[i].n() + self.derived[i].l()
    }

    fn perm(&mut self, step: usize, sigma1: Vec<usize>, sigma2: Vec<usize>) -> Result<usize> {
        if identity_perm(&sigma1) && identity_perm(&sigma2) {
            return Ok(step);
        }
        self.push(ProofStep::Perm {
            step,
            sigma1,
            sigma2,
        })
    }

    fn introduce(&mut self, step: usize, base: usize, aux: usize) -> Result<usize> {
        if base == 0 && aux == 0 {
            return Ok(step);
        }
        self.push(ProofStep::Elim {
            step,
            op: ElimOp::Introduce { base, aux },
        })
    }

    /// `True -> e` over `n` variables for an elemental inequality `e`.
    fn fact(&mut self, n: usize, e: &EntropyExpr) -> Result<usize> {
        if let Some(&s) = self.facts.get(&(n, e.clone())) {
            return Ok(s);
        }
        let full = full_mask(n);
        let coeffs = e.h_coeffs();
        let step = if coeffs.len() <= 2 && coeffs.get(&full).is_some_and(|c| c.is_one()) {
            // H(X_i | rest)
            let rest = coeffs.keys().find(|m| **m != full).copied().unwrap_or(0);
            let i = (full & !rest).trailing_zeros() as usize;
            let base = self.push(ProofStep::Sha(ShaForm::Entropy { given: n - 1 }))?;
            let mut sigma1 = Vec::with_capacity(n);
            let mut next = 1;
            for p in 0..n {
                if p == i {
                    sigma1.push(0);
                } else {
                    sigma1.push(next);
                    next += 1;
                }
            }
            self.perm(base, sigma1, vec![])?
        } else {
            // I(X_i; X_j | X_K) = H(iK) + H(jK) - H(ijK) - H(K)
            let pos: Vec<u32> = coeffs
                .iter()
                .filter(|(_, c)| c.is_one())
                .map(|(m, _)| *m)
                .collect();
            let (ik, jk) = match pos.as_slice() {
                [a, b] => (*a, *b),
                _ => return Err(malformed("not an elemental inequality")),
            };
            let k = ik & jk;
            let (i, j) = (
                (ik & !k).trailing_zeros() as usize,
                (jk & !k).trailing_zeros() as usize,
            );
            let given = k.count_ones() as usize;
            let mut step = self.push(ProofStep::Sha(ShaForm::Mutual { given }))?;
            step = self.introduce(step, n - 2 - given, 0)?;
            let mut sigma1 = vec![0usize; n];
            let mut next_k = 2;
            let mut next_rest = 2 + given;
            for (p, slot) in sigma1.iter_mut().enumerate() {
                *slot = if p == i {
                    0
                } else if p == j {
                    1
                } else if k >> p & 1 == 1 {
                    next_k += 1;
                    next_k - 1
                } else {
                    next_rest += 1;
                    next_rest - 1
                };
            }
            self.perm(step, sigma1, vec![])?
        };
        if canonical_rows(&self.concl(step).consequence) != vec![e.clone()] {
            return Err(malformed("fact construction mismatch"));
        }
        self.facts.insert((n, e.clone()), step);
        Ok(step)
    }

    /// `True -> [e_1, ..., e_k]` over `n` variables.
    fn facts_system(&mut self, n: usize, exprs: &[EntropyExpr]) -> Result<usize> {
        let Some((first, rest)) = exprs.split_first() else {
            return self.push(ProofStep::Con {
                n,
                rows: vec![],
                m: vec![],
                offset: vec![],
            });
        };
        let mut acc = self.fact(n, first)?;
        for e in rest {
            let f = self.fact(n, e)?;
            let rows = self.concl(acc).consequence.clone();
            let drop = self.push(ProofStep::Con {
                n,
                rows,
                m: vec![],
                offset: vec![],
            })?;
            let t = self.push(ProofStep::Tran {
                first: drop,
                second: f,
            })?;
            let a = self.push(ProofStep::Abs { step: t })?;
            acc = self.push(ProofStep::Tran {
                first: acc,
                second: a,
            })?;
        }
        Ok(acc)
    }

    /// `A -> A` with no auxiliaries.
    fn identity(&mut self, n: usize, rows: &[EntropyExpr]) -> Result<usize> {
        let rows = canonical_rows(rows);
        let m = (0..rows.len())
            .map(|i| {
                (0..rows.len())
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        self.push(ProofStep::Con {
            n,
            rows,
            m,
            offset: vec![],
        })
    }

    /// `True -> exists U: U = X_S` over `n` universal variables.
    fn join(&mut self, n: usize, s: u32) -> Result<usize> {
        if let Some(&j) = self.joins.get(&(n, s)) {
            return Ok(j);
        }
        let k = s.count_ones() as usize;
        let mut step = self.push(ProofStep::Join { n: k })?;
        step = self.introduce(step, n - k, 0)?;
        let mut sigma1 = Vec::with_capacity(n);
        let (mut inside, mut outside) = (0, k);
        for p in 0..n {
            if s >> p & 1 == 1 {
                sigma1.push(inside);
                inside += 1;
            } else {
                sigma1.push(outside);
                outside += 1;
            }
        }
        step = self.perm(step, sigma1, vec![0])?;
        self.joins.insert((n, s), step);
        Ok(step)
    }

    /// From `A -> exists U: S` and `True -> exists W: J` (over the variables
    /// of `S`), derive `A -> exists U, W: [J; S]`.
    fn add_aux(&mut self, q: usize, j: usize) -> Result<usize> {
        let w = self.width(q);
        let rows = self.concl(q).consequence.clone();
        let drop = self.push(ProofStep::Con {
            n: w,
            rows,
            m: vec![],
            offset: vec![],
        })?;
        let t = self.push(ProofStep::Tran {
            first: drop,
            second: j,
        })?;
        self.append(q, t)
    }

    /// From `A -> exists U: S` and `S -> exists W: G`, derive
    /// `A -> exists U, W: [G; S]`.
    fn append(&mut self, q: usize, g: usize) -> Result<usize> {
        let a = self.push(ProofStep::Abs { step: g })?;
        self.push(ProofStep::Tran {
            first: q,
            second: a,
        })
    }

    /// From `A -> exists U: S`, derive `A -> exists U: [G; S]` (or just `G`
    /// when `keep` is false) with Shannon reasoning over all variables.
    fn shannon(&mut self, q: usize, goals: &[EntropyExpr], keep: bool) -> Result<usize> {
        let w = self.width(q);
        let system = self.concl(q).consequence.clone();
        let mut reals: Vec<String> = Vec::new();
        for r in system.iter().chain(goals) {
            for name in r.real_coeffs().keys() {
                if !reals.contains(name) {
                    reals.push(name.clone());
                }
            }
        }
        let ctx = VarContext::new(&VarContext::numbered("X", w).rv_names(), &reals)?;
        let cone = elemental_inequalities(w);
        let mut certs = Vec::with_capacity(goals.len());
        let mut used: BTreeMap<usize, EntropyExpr> = BTreeMap::new();
        for g in goals {
            let q = CiiQuery::new(ctx.clone(), system.clone(), g.clone());
            match prove_cii_with(&q, &self.opts)? {
                CiiOutcome::Proved(c) => {
                    for m in &c.elemental {
                        used.insert(m.row, cone.rows[m.row].clone());
                    }
                    certs.push(c);
                }
                CiiOutcome::NotProved(_) => {
                    return Err(malformed("a lifted Shannon step does not hold"))
                }
            }
        }
        let facts: Vec<EntropyExpr> = used.values().cloned().collect();
        let q2 = if facts.is_empty() {
            q
        } else {
            let f = self.facts_system(w, &facts)?;
            let drop = self.push(ProofStep::Con {
                n: w,
                rows: system.clone(),
                m: vec![],
                offset: vec![],
            })?;
            let t = self.push(ProofStep::Tran {
                first: drop,
                second: f,
            })?;
            self.append(q, t)?
        };
        let pool = self.concl(q2).consequence.clone();
        let index = |e: &EntropyExpr| pool.iter().position(|r| r == e);
        let mut m = Vec::new();
        let mut offset = Vec::new();
        for c in &certs {
            let mut row = vec![Q::zero(); pool.len()];
            for mult in &c.elemental {
                let i = index(&cone.rows[mult.row]).ok_or_else(|| malformed("missing fact"))?;
                row[i] += &mult.value;
            }
            for mult in &c.constraints {
                let i = index(&system[mult.row]).ok_or_else(|| malformed("missing premise row"))?;
                row[i] += &mult.value;
            }
            m.push(row);
            offset.push(c.slack.clone());
        }
        if keep {
            for r in &system {
                let mut row = vec![Q::zero(); pool.len()];
                row[index(r).ok_or_else(|| malformed("missing premise row"))?] = Q::one();
                m.push(row);
                offset.push(Q::zero());
            }
        }
        let con = self.push(ProofStep::Con {
            n: w,
            rows: pool,
            m,
            offset,
        })?;
        self.push(ProofStep::Tran {
            first: q2,
            second: con,
        })
    }

    /// Select `rows` (all present in the consequence of `q`) by a Con step
    /// whose premise is that consequence.
    fn select(&mut self, q: usize, rows: &[EntropyExpr]) -> Result<usize> {
        let w = self.width(q);
        let pool = self.concl(q).consequence.clone();
        let mut m = Vec::with_capacity(rows.len());
        for r in canonical_rows(rows) {
            let i = pool
                .iter()
                .position(|p| *p == r)
                .ok_or_else(|| malformed("row to select is absent"))?;
            let mut row = vec![Q::zero(); pool.len()];
            row[i] = Q::one();
            m.push(row);
        }
        self.push(ProofStep::Con {
            n: w,
            rows: pool,
            m,
            offset: vec![],
        })
    }

    fn trivial(&mut self, e: &Eii, assignment: &[u32]) -> Result<usize> {
        let n = e.n();
        let mut q = self.identity(n, &e.premise)?;
        for (i, s) in assignment.iter().enumerate() {
            let j = self.join(n + i, *s)?;
            q = self.add_aux(q, j)?;
        }
        self.shannon(q, &e.consequence, false)
    }

    fn lemma(&mut self, lemma: &Eii) -> Result<usize> {
        let l = lemma.l();
        if lemma.n() >= l {
            let base = lemma.n() - l;
            let copy = copy_lemma(base, l);
            if same_statement(&copy, lemma) {
                // the equalities hold with U = Y; the CI rule adds the rest
                let ci_rows = crate::model::zero(&EntropyExpr::mutual_info(
                    full_mask(base + 2 * l) & !full_mask(base + l),
                    full_mask(base + l) & !full_mask(base),
                    full_mask(base),
                ));
                let eq: Vec<EntropyExpr> = copy
                    .consequence
                    .iter()
                    .filter(|r| !ci_rows.contains(r))
                    .cloned()
                    .collect();
                let plain = Eii::new(copy.base.clone(), copy.aux.clone(), vec![], eq)?;
                let assignment: Vec<u32> = (0..l).map(|i| 1 << (base + i)).collect();
                let t = self.trivial(&plain, &assignment)?;
                return self.push(ProofStep::Ci {
                    step: t,
                    x_mask: full_mask(base),
                });
            }
        }
        self.push(ProofStep::Premise(lemma.clone()))
    }

    fn premise(
        &mut self,
        e: &Eii,
        lemma: &Eii,
        substitution: &[u32],
        inner: &ProofCertificate,
    ) -> Result<usize> {
        let n = e.n();
        let np = lemma.n();
        let lp = lemma.l();
        // lemma variable -> position among (X, W)
        let mut pos = vec![0usize; np];
        let mut needs_w = Vec::new();
        let mut taken = 0u32;
        for (i, s) in substitution.iter().enumerate() {
            if s.count_ones() == 1 && taken & s == 0 {
                taken |= s;
                pos[i] = s.trailing_zeros() as usize;
            } else {
                pos[i] = n + needs_w.len();
                needs_w.push(*s);
            }
        }
        let k = needs_w.len();
        let big_n = n + k;
        let mut q = self.identity(n, &e.premise)?;
        for (t, s) in needs_w.iter().enumerate() {
            let j = self.join(n + t, *s)?;
            q = self.add_aux(q, j)?;
        }
        // the lemma placed on (X, W) with the CI rows added
        let mut lem = self.lemma(lemma)?;
        lem = self.introduce(lem, big_n - np, 0)?;
        let mut sigma1 = vec![usize::MAX; big_n];
        for (i, &p) in pos.iter().enumerate() {
            sigma1[p] = i;
        }
        let mut next = np;
        for slot in sigma1.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        lem = self.perm(lem, sigma1, (0..lp).collect())?;
        let x_mask = pos.iter().fold(0u32, |a, p| a | 1 << p);
        lem = self.push(ProofStep::Ci { step: lem, x_mask })?;
        let c_rows = self.concl(lem).premise.clone();
        // A -> exists W: [C; ...] -> exists W, V: [D; CI; C; ...]
        q = self.shannon(q, &c_rows, true)?;
        let sel = self.select(q, &c_rows)?;
        let t = self.push(ProofStep::Tran {
            first: sel,
            second: lem,
        })?;
        q = self.append(q, t)?;
        let ip = self.elaborate(inner)?;
        let done = if k == 0 {
            self.push(ProofStep::Tran {
                first: q,
                second: ip,
            })?
        } else {
            // lift the inner statement from (X, V) to (X, W, V)
            let inner_e = inner.eii().clone();
            let lifted_prem: Vec<EntropyExpr> = inner_e
                .premise
                .iter()
                .map(|r| {
                    r.map_masks(|m| (m & full_mask(n)) | ((m >> n) << (n + k)))
                })
                .collect();
            q = self.shannon(q, &lifted_prem, true)?;
            let sel = self.select(q, &lifted_prem)?;
            let mut ipl = self.introduce(ip, k, 0)?;
            let mut sigma1 = Vec::with_capacity(big_n + lp);
            sigma1.extend(0..n);
            sigma1.extend((0..k).map(|t| n + lp + t));
            sigma1.extend((0..lp).map(|j| n + j));
            ipl = self.perm(ipl, sigma1, (0..e.l()).collect())?;
            let t = self.push(ProofStep::Tran {
                first: sel,
                second: ipl,
            })?;
            self.push(ProofStep::Tran {
                first: q,
                second: t,
            })?
        };
        // move the goal's auxiliaries to the front and drop the helpers
        let extra = k + lp;
        if extra == 0 {
            return Ok(done);
        }
        let l = e.l();
        let sigma2: Vec<usize> = (0..l).map(|j| extra + j).chain(0..extra).collect();
        let p = self.perm(done, (0..n).collect(), sigma2)?;
        self.push(ProofStep::Elim {
            step: p,
            op: ElimOp::Remove {
                base: 0,
                aux: extra,
            },
        })
    }

    fn elaborate(&mut self, cert: &ProofCertificate) -> Result<usize> {
        let step = match cert {
            ProofCertificate::Trivial { eii, assignment, .. } => self.trivial(eii, assignment)?,
            ProofCertificate::Premise {
                eii,
                lemma,
                substitution,
                inner,
                ..
            } => self.premise(eii, lemma, substitution, inner)?,
            ProofCertificate::CaseSplit {
                split,
                positive,
                negative,
                ..
            } => {
                let p = self.elaborate(positive)?;
                let q = self.elaborate(negative)?;
                self.push(ProofStep::Union {
                    positive: p,
                    negative: q,
                    split: split.clone(),
                })?
            }
        };
        if !same_statement(self.concl(step), cert.eii()) {
            return Err(malformed("derived statement differs from the certified one"));
        }
        Ok(step)
    }
}

/// Rule-level proof of the statement certified by `cert`.
pub fn certificate_to_proof(cert: &ProofCertificate) -> Result<ProofObject> {
    certificate_to_proof_with(cert, &ProverOptions::default())
}

pub fn certificate_to_proof_with(
    cert: &ProofCertificate,
    opts: &ProverOptions,
) -> Result<ProofObject> {
    let mut b = Builder::new(opts.clone());
    b.elaborate(cert)?;
    Ok(ProofObject {
        goal: cert.eii().clone(),
        steps: b.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::zero;
    use crate::rules::check_proof;
    use crate::search::{prove_eii, SearchOptions};

    fn proof_of(e: &Eii, premises: &[Eii], opts: &SearchOptions) -> ProofObject {
        let out = prove_eii(e, premises, opts).unwrap();
        certificate_to_proof(out.certificate().expect("proved")).unwrap()
    }

    #[test]
    fn join_example() {
        let base = VarContext::rvs(&["X", "Y"]).unwrap();
        let mut cons = Vec::new();
        cons.extend(zero(&EntropyExpr::cond_entropy(3, 4)));
        cons.extend(zero(&EntropyExpr::cond_entropy(4, 3)));
        let e = Eii::new(base, vec!["U".into()], vec![], cons).unwrap();
        let p = proof_of(&e, &[], &SearchOptions::default());
        assert_eq!(p.count("Join"), 1);
        assert!(p.count("Tran") >= 1);
        assert!(check_proof(&p).is_valid());
    }

    #[test]
    fn shannon_cii() {
        // I(X;Z)=0 & I(X;Y|Z)=0 -> I(X;Y)=0
        let base = VarContext::rvs(&["X", "Y", "Z"]).unwrap();
        let mut prem = Vec::new();
        prem.extend(zero(&EntropyExpr::mutual_info(1, 4, 0)));
        prem.extend(zero(&EntropyExpr::mutual_info(1, 2, 4)));
        let e = Eii::cii(base, prem, vec![-EntropyExpr::mutual_info(1, 2, 0)]).unwrap();
        let p = proof_of(&e, &[], &SearchOptions::default());
        assert!(check_proof(&p).is_valid());
        assert!(p.count("Sha") >= 1);
    }

    #[test]
    fn copy_lemma_is_derived() {
        let mut b = Builder::new(ProverOptions::default());
        let l = copy_lemma(1, 1);
        let s = b.lemma(&l).unwrap();
        assert!(same_statement(b.concl(s), &l));
        assert!(b.steps.iter().all(|s| !matches!(s, ProofStep::Premise(_))));
    }

    #[test]
    fn case_split_proof() {
        let e = crate::catalog::two_branch().unwrap();
        let opts = SearchOptions {
            max_cases: Some(2),
            ..SearchOptions::default()
        };
        let p = proof_of(&e, &[], &opts);
        assert_eq!(p.count("Union"), 1);
        assert!(check_proof(&p).is_valid());
    }
}
