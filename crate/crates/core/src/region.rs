//! Rate-region manipulation: implication, redundant rows, Fourier-Motzkin
//! elimination of existential reals, and auxiliary removal.

use num_traits::Signed;

use crate::entropy::{full_mask, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{fresh_name, Eii, Eip};
use crate::prover::{prove_cii_with, CiiOutcome, CiiQuery, DualCertificate};
use crate::search::{
    prove_eii, EiiResult, ProofCertificate, SandwichOutcome, Search, SearchOptions,
};

/// Intermediate row cap for one elimination.
pub const FM_ROW_CAP: usize = 4096;

#[derive(Clone, Debug)]
pub struct RegionOptions {
    pub search: SearchOptions,
    pub fm_row_cap: usize,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            search: SearchOptions::default(),
            fm_row_cap: FM_ROW_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Implication {
    Proved(ProofCertificate),
    /// Inconclusive.
    NotProved,
}

impl Implication {
    pub fn is_proved(&self) -> bool {
        matches!(self, Implication::Proved(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionStep {
    Note(String),
    /// `row` follows from the rows kept at that point.
    DropRow {
        context: VarContext,
        row: EntropyExpr,
        certificate: DualCertificate,
    },
    /// `aux` replaced by the joint variable `substitution`; `forward` proves
    /// the substituted rows from the original ones, `reverse` the converse
    /// region inclusion.
    RemoveAux {
        aux: String,
        substitution: Vec<String>,
        forward: ProofCertificate,
        reverse: ProofCertificate,
    },
    Eliminate {
        real: String,
        rows_before: usize,
        rows_after: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionReport {
    pub original: Eip,
    pub simplified: Eip,
    pub log: Vec<RegionStep>,
    /// False when a budget ran out before the fixpoint.
    pub complete: bool,
}

fn same_base(a: &VarContext, b: &VarContext) -> bool {
    a.rv_names() == b.rv_names() && a.real_names() == b.real_names()
}

/// Sufficient test for `p ⊆ q`: `forall X, U_p, reals: rows(p) -> exists
/// V_q: rows(q)`, after projecting out the existential reals of `q`.
pub fn eip_implies(p: &Eip, q: &Eip, opts: &RegionOptions) -> Result<Implication> {
    if !same_base(&p.base, &q.base) {
        return Err(Error::ContextMismatch(format!(
            "{:?} vs {:?}",
            p.base.rv_names(),
            q.base.rv_names()
        )));
    }
    let mut qp = q.clone();
    for r in q.exist_reals.clone() {
        qp = fourier_motzkin_raw(&qp, &r, opts.fm_row_cap)?;
    }
    let e = implication_eii(p, &qp)?;
    let out = prove_eii(&e, &[], &opts.search)?;
    Ok(match out.result {
        EiiResult::Proved(c) => Implication::Proved(c),
        EiiResult::Failed(_) => Implication::NotProved,
    })
}

/// The statement checked by [`eip_implies`]; `q` must have no existential
/// reals.
pub fn implication_eii(p: &Eip, q: &Eip) -> Result<Eii> {
    let n = p.n();
    let lp = p.l();
    let mut rvs = p.base.rv_names().to_vec();
    rvs.extend(p.aux.iter().cloned());
    let mut reals = p.base.real_names().to_vec();
    reals.extend(p.exist_reals.iter().cloned());
    let base = VarContext::new(&rvs, &reals)?;
    let mut taken = rvs.clone();
    let aux: Vec<String> = q
        .aux
        .iter()
        .map(|a| {
            let f = fresh_name(&taken, a);
            taken.push(f.clone());
            f
        })
        .collect();
    let low = full_mask(n);
    let cons = q
        .rows
        .iter()
        .map(|r| r.map_masks(|m| (m & low) | ((m & !low) << lp)))
        .collect();
    Eii::new(base, aux, p.rows.clone(), cons)
}

fn support(r: &EntropyExpr) -> usize {
    r.h_coeffs().len() + r.real_coeffs().len()
}

fn implied(
    ctx: &VarContext,
    others: &[EntropyExpr],
    row: &EntropyExpr,
    opts: &RegionOptions,
) -> Result<Option<DualCertificate>> {
    let q = CiiQuery::new(ctx.clone(), others.to_vec(), row.clone());
    Ok(match prove_cii_with(&q, &opts.search.prover)? {
        CiiOutcome::Proved(c) => Some(c),
        CiiOutcome::NotProved(_) => None,
    })
}

/// Rows in descending support size, ties by position.
pub fn default_row_order(p: &Eip) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.rows.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(support(&p.rows[i])));
    order
}

/// Greedily drop rows implied by the remaining ones, testing in `order`.
pub fn remove_redundant_rows_in_order(
    p: &Eip,
    order: &[usize],
    opts: &RegionOptions,
) -> Result<(Eip, Vec<RegionStep>)> {
    let ctx = p.full_context();
    let mut keep = vec![true; p.rows.len()];
    let mut log = Vec::new();
    for &i in order {
        let row = &p.rows[i];
        let others: Vec<EntropyExpr> = (0..p.rows.len())
            .filter(|&j| j != i && keep[j])
            .map(|j| p.rows[j].clone())
            .collect();
        if let Some(certificate) = implied(&ctx, &others, row, opts)? {
            keep[i] = false;
            log.push(RegionStep::DropRow {
                context: ctx.clone(),
                row: row.clone(),
                certificate,
            });
        }
    }
    let rows = (0..p.rows.len())
        .filter(|&i| keep[i])
        .map(|i| p.rows[i].clone())
        .collect();
    Ok((Eip { rows, ..p.clone() }, log))
}

pub fn remove_redundant_rows(p: &Eip) -> Result<Eip> {
    let opts = RegionOptions::default();
    Ok(remove_redundant_rows_in_order(p, &default_row_order(p), &opts)?.0)
}

/// Plain elimination of `real` by pairing bounds, without clean-up. A real
/// that is not existential leaves `p` unchanged.
pub fn fourier_motzkin_raw(p: &Eip, real: &str, cap: usize) -> Result<Eip> {
    if !p.exist_reals.iter().any(|r| r == real) {
        return Ok(p.clone());
    }
    let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in &p.rows {
        let c = r.real_coeff(real);
        if c.is_positive() {
            lower.push((r, c));
        } else if c.is_negative() {
            upper.push((r, -c));
        } else {
            rest.push(r.clone());
        }
    }
    let total = rest.len() + lower.len() * upper.len();
    if total > cap {
        return Err(Error::BudgetExceeded(format!(
            "eliminating {real} needs {total} rows (cap {cap})"
        )));
    }
    for (lo, a) in &lower {
        for (up, b) in &upper {
            let row = &lo.scale(b) + &up.scale(a);
            rest.push(row.without_real(real));
        }
    }
    let rows: Vec<EntropyExpr> = rest.into_iter().filter(|r| !is_trivial(r)).collect();
    Ok(Eip {
        exist_reals: p
            .exist_reals
            .iter()
            .filter(|r| *r != real)
            .cloned()
            .collect(),
        rows: dedup(rows),
        ..p.clone()
    })
}

fn is_trivial(r: &EntropyExpr) -> bool {
    r.is_constant() && !r.constant().is_negative()
}

fn dedup(rows: Vec<EntropyExpr>) -> Vec<EntropyExpr> {
    let mut out: Vec<EntropyExpr> = Vec::with_capacity(rows.len());
    for r in rows {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Eliminate the existential real `real`, then drop redundant rows.
pub fn fourier_motzkin(p: &Eip, real: &str) -> Result<Eip> {
    if !p.exist_reals.iter().any(|r| r == real) {
        return Ok(p.clone());
    }
    let raw = fourier_motzkin_raw(p, real, FM_ROW_CAP)?;
    remove_redundant_rows(&raw)
}

#[derive(Clone, Debug, PartialEq)]
pub enum AuxRemoval {
    Removed {
        region: Eip,
        /// Mask over the base variables and remaining auxiliaries of the
        /// input region.
        substitution: u32,
        certificate: ProofCertificate,
    },
    Unchanged,
}

/// Replace auxiliary `index` by a joint variable of the other variables
/// when the search proves every row survives the substitution.
pub fn remove_auxiliary(p: &Eip, index: usize, opts: &RegionOptions) -> Result<AuxRemoval> {
    if index >= p.l() {
        return Err(Error::UnknownVariable(format!("auxiliary #{index}")));
    }
    let n = p.n();
    let width = n + p.l();
    let bit = 1u32 << (n + index);
    let ctx = p.full_context();
    let base = VarContext::new(ctx.rv_names(), ctx.real_names())?;
    let fresh = fresh_name(ctx.rv_names(), &p.aux[index]);
    let moved = |m: u32| (m & !bit) | if m & bit != 0 { 1 << width } else { 0 };
    let cons = p.rows.iter().map(|r| r.map_masks(moved)).collect();
    let e = Eii::new(base, vec![fresh], p.rows.clone(), cons)?;
    let mut search = Search::new(opts.search.clone());
    let bounds = match search.sandwich(&e, Some(vec![full_mask(width) & !bit]))? {
        SandwichOutcome::Bounds(b) => b,
        SandwichOutcome::Failure { .. } => return Ok(AuxRemoval::Unchanged),
    };
    let Some((assignment, rows)) = search.exhaust(&e, &bounds)? else {
        return Ok(AuxRemoval::Unchanged);
    };
    let s = assignment[0];
    let certificate = ProofCertificate::Trivial {
        eii: e,
        assignment,
        rows,
    };
    let region = substitute_aux(p, index, s)?;
    Ok(AuxRemoval::Removed {
        region,
        substitution: s,
        certificate,
    })
}

/// `p` with auxiliary `index` set to the joint variable `s` and dropped.
pub fn substitute_aux(p: &Eip, index: usize, s: u32) -> Result<Eip> {
    let pos = p.n() + index;
    let bit = 1u32 << pos;
    let below = (1u32 << pos) - 1;
    let squeeze = |m: u32| {
        let m = (m & !bit) | if m & bit != 0 { s } else { 0 };
        (m & below) | ((m & !below) >> 1)
    };
    let rows: Vec<EntropyExpr> = p
        .rows
        .iter()
        .map(|r| r.map_masks(squeeze))
        .filter(|r| !is_trivial(r))
        .collect();
    let mut aux = p.aux.clone();
    aux.remove(index);
    Eip::new(p.base.clone(), aux, p.exist_reals.clone(), dedup(rows))
}

fn partial<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Redundant rows, then auxiliaries, then existential reals, repeated
/// until nothing changes.
pub fn simplify(p: &Eip, opts: &RegionOptions) -> Result<RegionReport> {
    p.validate()?;
    let mut log = vec![RegionStep::Note(
        "order: redundant rows, auxiliaries, existential reals; repeated to a fixpoint".into(),
    )];
    let mut cur = Eip {
        rows: canonical_order(&p.rows),
        ..p.clone()
    };
    let mut complete = true;
    'outer: loop {
        let Some((next, drops)) =
            partial(remove_redundant_rows_in_order(&cur, &default_row_order(&cur), opts))?
        else {
            complete = false;
            break;
        };
        cur = next;
        log.extend(drops);
        let mut changed = false;
        for i in 0..cur.l() {
            let Some(r) = partial(remove_auxiliary(&cur, i, opts))? else {
                complete = false;
                break 'outer;
            };
            if let AuxRemoval::Removed {
                region,
                substitution,
                certificate,
            } = r
            {
                let Some(back) = partial(eip_implies(&region, &cur, opts))? else {
                    complete = false;
                    break 'outer;
                };
                let Implication::Proved(reverse) = back else {
                    continue;
                };
                let names = cur.full_context();
                log.push(RegionStep::RemoveAux {
                    aux: cur.aux[i].clone(),
                    substitution: names
                        .names_of(substitution)
                        .into_iter()
                        .map(String::from)
                        .collect(),
                    forward: certificate,
                    reverse,
                });
                cur = region;
                changed = true;
                break;
            }
        }
        if changed {
            continue;
        }
        for r in cur.exist_reals.clone() {
            let before = cur.rows.len();
            let Some(next) = partial(fourier_motzkin_raw(&cur, &r, opts.fm_row_cap))? else {
                complete = false;
                break 'outer;
            };
            cur = next;
            log.push(RegionStep::Eliminate {
                real: r,
                rows_before: before,
                rows_after: cur.rows.len(),
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(RegionReport {
        original: p.clone(),
        simplified: cur,
        log,
        complete,
    })
}

fn canonical_order(rows: &[EntropyExpr]) -> Vec<EntropyExpr> {
    dedup(
        rows.iter()
            .filter(|r| !is_trivial(r))
            .cloned()
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{le, zero};

    fn ctx(names: &[&str], reals: &[&str]) -> VarContext {
        VarContext::new(names, reals).unwrap()
    }

    fn r(name: &str) -> EntropyExpr {
        EntropyExpr::real(name)
    }

    /// Broadcast superposition coding on `X, Y1, Y2` with aux `U`.
    fn superposition() -> Eip {
        let f = ctx(&["X", "Y1", "Y2", "U"], &["R1", "R2"]);
        let mut rows = vec![
            le(&r("R1"), &f.i(&["X"], &["Y1"], &["U"]).unwrap()),
            le(&r("R2"), &f.i(&["U"], &["Y2"], &[]).unwrap()),
            le(&(&r("R1") + &r("R2")), &f.i(&["X"], &["Y1"], &[]).unwrap()),
        ];
        rows.extend(zero(&f.i(&["U"], &["Y1", "Y2"], &["X"]).unwrap()));
        let base = ctx(&["X", "Y1", "Y2"], &["R1", "R2"]);
        Eip::new(base, vec!["U".into()], vec![], rows).unwrap()
    }

    fn opts() -> RegionOptions {
        RegionOptions::default()
    }

    #[test]
    fn implication_examples() {
        let p = superposition();
        assert!(eip_implies(&p, &p, &opts()).unwrap().is_proved());
        let mut relaxed = p.clone();
        relaxed.rows.remove(2);
        assert!(eip_implies(&p, &relaxed, &opts()).unwrap().is_proved());
        let mut tighter = p.clone();
        tighter.rows.push(-r("R1"));
        assert!(!eip_implies(&p, &tighter, &opts()).unwrap().is_proved());
        let other = Eip::new(ctx(&["X"], &[]), vec![], vec![], vec![]).unwrap();
        assert!(matches!(
            eip_implies(&p, &other, &opts()),
            Err(Error::ContextMismatch(_))
        ));
    }

    #[test]
    fn redundant_rows() {
        let c = ctx(&["X", "Y", "Z"], &["R"]);
        let p = Eip::new(
            c.clone(),
            vec![],
            vec![],
            vec![c.i(&["X"], &["Y"], &[]).unwrap(), c.h(&["X"], &[]).unwrap()],
        )
        .unwrap();
        assert!(remove_redundant_rows(&p).unwrap().rows.is_empty());
        let a = le(&r("R"), &c.i(&["X"], &["Y"], &[]).unwrap());
        let b = le(
            &r("R"),
            &(&c.i(&["X"], &["Y"], &[]).unwrap() + &c.h(&["Z"], &[]).unwrap()),
        );
        let p = Eip::new(c, vec![], vec![], vec![a.clone(), b]).unwrap();
        assert_eq!(remove_redundant_rows(&p).unwrap().rows, vec![a]);
    }

    #[test]
    fn superposition_keeps_its_rate_rows() {
        let p = superposition();
        let q = remove_redundant_rows(&p).unwrap();
        // only the nonnegativity half of the Markov equality goes
        assert_eq!(q.rows.len(), 4);
        assert!(!q.rows.contains(&p.rows[3]));
        assert_eq!(remove_redundant_rows(&q).unwrap(), q);
    }

    #[test]
    fn reversed_order_gives_same_region() {
        let c = ctx(&["X", "Y"], &["R"]);
        let rows = vec![
            le(&r("R"), &c.h(&["X"], &[]).unwrap()),
            le(&r("R"), &c.h(&["X", "Y"], &[]).unwrap()),
            le(&r("R"), &(&c.h(&["X"], &[]).unwrap() + &c.h(&["Y"], &[]).unwrap())),
        ];
        let p = Eip::new(c, vec![], vec![], rows).unwrap();
        let mut order = default_row_order(&p);
        let a = remove_redundant_rows_in_order(&p, &order, &opts()).unwrap().0;
        order.reverse();
        let b = remove_redundant_rows_in_order(&p, &order, &opts()).unwrap().0;
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.len(), 1);
    }

    #[test]
    fn fm_examples() {
        let c = ctx(&["X", "Y"], &[]);
        let i = c.i(&["X"], &["Y"], &[]).unwrap();
        let p = Eip::new(c.clone(), vec![], vec!["R".into()], vec![r("R"), le(&r("R"), &i)])
            .unwrap();
        let q = fourier_motzkin(&p, "R").unwrap();
        assert!(q.rows.is_empty() && q.exist_reals.is_empty());

        let base = ctx(&["X", "Y"], &["R1", "R2"]);
        let b = c.h(&["Y"], &[]).unwrap();
        let p = Eip::new(
            base,
            vec![],
            vec!["R0".into()],
            vec![
                le(&r("R1"), &(&i + &r("R0"))),
                le(&r("R2"), &(&b - &r("R0"))),
                r("R0"),
            ],
        )
        .unwrap();
        let q = fourier_motzkin_raw(&p, "R0", FM_ROW_CAP).unwrap();
        let want = vec![le(&(&r("R1") + &r("R2")), &(&i + &b)), le(&r("R2"), &b)];
        assert_eq!(q.rows, want);
        assert_eq!(fourier_motzkin(&p, "R0").unwrap().rows, want);
        assert_eq!(fourier_motzkin(&p, "R9").unwrap(), p);
    }

    #[test]
    fn fm_cap() {
        let base = ctx(&["X"], &[]);
        let rows: Vec<_> = (0..70)
            .flat_map(|k| {
                let c = EntropyExpr::constant_term(crate::rational::q(k));
                [&r("T") + &c, &c - &r("T")]
            })
            .collect();
        let p = Eip::new(base, vec![], vec!["T".into()], rows).unwrap();
        assert!(matches!(
            fourier_motzkin_raw(&p, "T", FM_ROW_CAP),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn aux_removal_examples() {
        let f = ctx(&["X", "U"], &["R"]);
        let mut rows = vec![le(&r("R"), &f.h(&["U"], &[]).unwrap())];
        rows.extend(zero(&f.h(&["U"], &["X"]).unwrap()));
        let p = Eip::new(ctx(&["X"], &["R"]), vec!["U".into()], vec![], rows).unwrap();
        let AuxRemoval::Removed {
            region,
            substitution,
            ..
        } = remove_auxiliary(&p, 0, &opts()).unwrap()
        else {
            panic!("not removed")
        };
        assert_eq!(substitution, 1);
        assert_eq!(region.l(), 0);
        let x = ctx(&["X"], &["R"]);
        assert_eq!(region.rows, vec![le(&r("R"), &x.h(&["X"], &[]).unwrap())]);

        let f = ctx(&["X", "Y", "U"], &["R"]);
        let mut rows = vec![le(&r("R"), &f.i(&["X"], &["Y"], &["U"]).unwrap())];
        rows.extend(zero(&f.i(&["U"], &["X", "Y"], &[]).unwrap()));
        let p = Eip::new(ctx(&["X", "Y"], &["R"]), vec!["U".into()], vec![], rows).unwrap();
        let AuxRemoval::Removed {
            region,
            substitution,
            ..
        } = remove_auxiliary(&p, 0, &opts()).unwrap()
        else {
            panic!("not removed")
        };
        assert_eq!(substitution, 0);
        let xy = ctx(&["X", "Y"], &["R"]);
        assert_eq!(region.rows, vec![le(&r("R"), &xy.i(&["X"], &["Y"], &[]).unwrap())]);
    }

    #[test]
    fn marton_aux_stays() {
        let f = ctx(&["X", "Y1", "Y2", "U", "V"], &["R1", "R2"]);
        let i = |a: &[&str], b: &[&str]| f.i(a, b, &[]).unwrap();
        let mut rows = vec![
            le(&r("R1"), &i(&["U"], &["Y1"])),
            le(&r("R2"), &i(&["V"], &["Y2"])),
            le(
                &(&r("R1") + &r("R2")),
                &(&(&i(&["U"], &["Y1"]) + &i(&["V"], &["Y2"])) - &i(&["U"], &["V"])),
            ),
        ];
        rows.extend(zero(&f.i(&["U", "V"], &["Y1", "Y2"], &["X"]).unwrap()));
        let base = ctx(&["X", "Y1", "Y2"], &["R1", "R2"]);
        let p = Eip::new(base, vec!["U".into(), "V".into()], vec![], rows).unwrap();
        assert_eq!(remove_auxiliary(&p, 0, &opts()).unwrap(), AuxRemoval::Unchanged);
    }

    #[test]
    fn simplify_examples() {
        let empty = Eip::new(ctx(&["X"], &[]), vec![], vec![], vec![]).unwrap();
        let rep = simplify(&empty, &opts()).unwrap();
        assert!(rep.simplified.rows.is_empty() && rep.complete);

        let p = superposition();
        let rep = simplify(&p, &opts()).unwrap();
        assert_eq!(rep.simplified.l(), 1);
        assert_eq!(rep.simplified.rows.len(), 4);

        let f = ctx(&["X", "Y", "U"], &["R"]);
        let mut rows = vec![
            le(&r("R"), &f.h(&["U"], &[]).unwrap()),
            le(&r("R"), &f.h(&["X", "Y"], &[]).unwrap()),
        ];
        rows.extend(zero(&f.h(&["U"], &["X"]).unwrap()));
        let base = ctx(&["X", "Y"], &["R"]);
        let p = Eip::new(base.clone(), vec!["U".into()], vec![], rows).unwrap();
        let rep = simplify(&p, &opts()).unwrap();
        let want = vec![le(&r("R"), &base.h(&["X"], &[]).unwrap())];
        assert_eq!(rep.simplified.rows, want);
        assert_eq!(rep.simplified.l(), 0);
        assert!(rep
            .log
            .iter()
            .any(|s| matches!(s, RegionStep::RemoveAux { substitution, .. } if substitution == &["X"])));
        assert!(eip_implies(&p, &rep.simplified, &opts()).unwrap().is_proved());
        assert!(eip_implies(&rep.simplified, &p, &opts()).unwrap().is_proved());
    }
}
