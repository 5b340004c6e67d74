//! Existential information inequalities and predicates, the lemma library,
//! conjunction, and converse-modeling helpers.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::entropy::{full_mask, Embedding, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::rational::{from_f64_exactish, qr, Q};

/// `forall X: premise >= 0 -> exists U: consequence >= 0`.
///
/// Premise rows live on the base random variables; consequence rows on the
/// base variables followed by the auxiliaries (aux `i` is bit `n + i`).
/// Real variables of `base` are universally quantified parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eii {
    pub base: VarContext,
    pub aux: Vec<String>,
    pub premise: Vec<EntropyExpr>,
    pub consequence: Vec<EntropyExpr>,
}

/// Two rows `a - b >= 0` and `b - a >= 0`.
pub fn equal(a: &EntropyExpr, b: &EntropyExpr) -> [EntropyExpr; 2] {
    [a - b, b - a]
}

/// `e = 0` as two rows.
pub fn zero(e: &EntropyExpr) -> [EntropyExpr; 2] {
    [e.clone(), -e]
}

/// `a <= b` as the row `b - a >= 0`.
pub fn le(a: &EntropyExpr, b: &EntropyExpr) -> EntropyExpr {
    b - a
}

impl Eii {
    pub fn new(
        base: VarContext,
        aux: Vec<String>,
        premise: Vec<EntropyExpr>,
        consequence: Vec<EntropyExpr>,
    ) -> Result<Self> {
        let e = Eii {
            base,
            aux,
            premise,
            consequence,
        };
        e.validate()?;
        Ok(e)
    }

    /// Auxiliary-free statement `premise -> goals`.
    pub fn cii(
        base: VarContext,
        premise: Vec<EntropyExpr>,
        goals: Vec<EntropyExpr>,
    ) -> Result<Self> {
        Eii::new(base, vec![], premise, goals)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn l(&self) -> usize {
        self.aux.len()
    }

    /// Base variables followed by the auxiliaries.
    pub fn full_context(&self) -> VarContext {
        self.base.extend(&self.aux).expect("validated").0
    }

    pub fn validate(&self) -> Result<()> {
        let full = self.base.extend(&self.aux)?.0;
        for r in &self.premise {
            self.base.check_expr(r)?;
        }
        for r in &self.consequence {
            full.check_expr(r)?;
        }
        Ok(())
    }

    pub fn with_premise_row(&self, row: EntropyExpr) -> Eii {
        let mut e = self.clone();
        e.premise.push(row);
        e
    }

    /// Mask of the auxiliaries inside the full context.
    pub fn aux_mask(&self) -> u32 {
        full_mask(self.n() + self.l()) & !full_mask(self.n())
    }

    pub fn show(&self) -> String {
        let full = self.full_context();
        let prem: Vec<String> = self
            .premise
            .iter()
            .map(|r| format!("{} >= 0", self.base.show(r)))
            .collect();
        let cons: Vec<String> = self
            .consequence
            .iter()
            .map(|r| format!("{} >= 0", full.show(r)))
            .collect();
        format!(
            "forall {}: {} -> exists {}: {}",
            self.base.rv_names().join(" "),
            if prem.is_empty() {
                "true".into()
            } else {
                prem.join(" & ")
            },
            self.aux.join(" "),
            if cons.is_empty() {
                "true".into()
            } else {
                cons.join(" & ")
            }
        )
    }
}

/// `exists U: rows >= 0` over base random variables, free reals, and
/// existentially quantified reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eip {
    pub base: VarContext,
    pub aux: Vec<String>,
    pub exist_reals: Vec<String>,
    pub rows: Vec<EntropyExpr>,
}

impl Eip {
    pub fn new(
        base: VarContext,
        aux: Vec<String>,
        exist_reals: Vec<String>,
        rows: Vec<EntropyExpr>,
    ) -> Result<Self> {
        let e = Eip {
            base,
            aux,
            exist_reals,
            rows,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn l(&self) -> usize {
        self.aux.len()
    }

    /// Base random variables then auxiliaries; every real, free ones first.
    pub fn full_context(&self) -> VarContext {
        let mut reals = self.base.real_names().to_vec();
        reals.extend(self.exist_reals.iter().cloned());
        let mut rvs = self.base.rv_names().to_vec();
        rvs.extend(self.aux.iter().cloned());
        VarContext::new(&rvs, &reals).expect("validated")
    }

    pub fn validate(&self) -> Result<()> {
        let mut reals = self.base.real_names().to_vec();
        reals.extend(self.exist_reals.iter().cloned());
        let mut rvs = self.base.rv_names().to_vec();
        rvs.extend(self.aux.iter().cloned());
        let full = VarContext::new(&rvs, &reals)?;
        for r in &self.rows {
            full.check_expr(r)?;
        }
        Ok(())
    }

    pub fn show(&self) -> String {
        let full = self.full_context();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("{} >= 0", full.show(r)))
            .collect();
        let mut q: Vec<String> = self.aux.clone();
        q.extend(self.exist_reals.iter().map(|r| format!("real {r}")));
        let body = if rows.is_empty() {
            "true".to_string()
        } else {
            rows.join(" & ")
        };
        if q.is_empty() {
            body
        } else {
            format!("exists {}: {}", q.join(" "), body)
        }
    }
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// `forall X^n, Y^l exists U^l: I(U;Y|X) = 0 & H(X_S,U_T) = H(X_S,Y_T)`
/// for all `S`, nonempty `T`.
pub fn copy_lemma(n: usize, l: usize) -> Eii {
    let mut rvs = names("X", n);
    rvs.extend(names("Y", l));
    let base = VarContext::rvs(&rvs).expect("distinct names");
    let x = full_mask(n);
    let y = full_mask(n + l) & !x;
    let u_of = |t: u32| t << l;
    let mut cons = Vec::new();
    cons.extend(zero(&EntropyExpr::mutual_info(u_of(y), y, x)));
    for t in 1..(1u32 << l) {
        for s in 0..(1u32 << n) {
            let yt = t << n;
            cons.extend(equal(
                &EntropyExpr::h(s | u_of(yt)),
                &EntropyExpr::h(s | yt),
            ));
        }
    }
    Eii::new(base, names("U", l), vec![], cons).expect("well formed")
}

/// `forall X,Y exists U: I(X;U) = H(Y|X,U) = 0`.
pub fn frl() -> Eii {
    let base = VarContext::rvs(&["X", "Y"]).expect("distinct");
    let mut cons = Vec::new();
    cons.extend(zero(&EntropyExpr::mutual_info(1, 4, 0)));
    cons.extend(zero(&EntropyExpr::cond_entropy(2, 1 | 4)));
    Eii::new(base, vec!["U".into()], vec![], cons).expect("well formed")
}

/// `frl()` plus `H(Y|U) <= I(X;Y) + gap`, the logarithmic term of the
/// strong form replaced by the constant `gap`.
pub fn frl_with_gap(gap: Q) -> Eii {
    let mut e = frl();
    let mut bound = EntropyExpr::mutual_info(1, 2, 0);
    bound.add_constant(gap);
    e.consequence
        .push(le(&EntropyExpr::cond_entropy(2, 4), &bound));
    e
}

/// `forall X,Y,Z: I(X;Z|Y) = I(Y;Z|X) = 0 -> exists U: H(U|X) = H(U|Y) = I(X,Y;Z|U) = 0`.
pub fn double_markov() -> Eii {
    let base = VarContext::rvs(&["X", "Y", "Z"]).expect("distinct");
    let mut prem = Vec::new();
    prem.extend(zero(&EntropyExpr::mutual_info(1, 4, 2)));
    prem.extend(zero(&EntropyExpr::mutual_info(2, 4, 1)));
    let u = 8;
    let mut cons = Vec::new();
    cons.extend(zero(&EntropyExpr::cond_entropy(u, 1)));
    cons.extend(zero(&EntropyExpr::cond_entropy(u, 2)));
    cons.extend(zero(&EntropyExpr::mutual_info(1 | 2, 4, u)));
    Eii::new(base, vec!["U".into()], prem, cons).expect("well formed")
}

/// Rational stand-in for `e / (e - 1)`, within `1e-12`.
pub fn e_ratio() -> Q {
    let e = std::f64::consts::E;
    from_f64_exactish(e / (e - 1.0))
}

/// Weak infinite divisibility: `forall X exists U^n: H(U_i) = H(U^n)/n,
/// H(X|U^n) = 0, H(U_1) <= e/(n(e-1)) H(X) + 2.43`.
pub fn infinite_divisibility(n: usize) -> Result<Eii> {
    if n == 0 {
        return Err(Error::Malformed(
            "infinite divisibility needs n >= 1".into(),
        ));
    }
    let base = VarContext::rvs(&["X"]).expect("single name");
    let all_u = full_mask(n + 1) & !1;
    let inv_n = qr(1, n as i64);
    let mut cons = Vec::new();
    for i in 0..n {
        cons.extend(equal(
            &EntropyExpr::h(1 << (i + 1)),
            &EntropyExpr::h(all_u).scale(&inv_n),
        ));
    }
    cons.extend(zero(&EntropyExpr::cond_entropy(1, all_u)));
    let mut bound = EntropyExpr::h(1).scale(&(e_ratio() * &inv_n));
    bound.add_constant(qr(243, 100));
    cons.push(le(&EntropyExpr::h(2), &bound));
    Eii::new(base, names("U", n), vec![], cons)
}

/// Named premises available on the command line.
pub fn library() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "copy:<n>,<l>",
            "copy lemma: forall X^n,Y^l exists U^l with I(U;Y|X)=0 and matching (X,U) entropies",
        ),
        (
            "frl",
            "functional representation lemma: forall X,Y exists U: I(X;U)=H(Y|X,U)=0",
        ),
        ("double-markov", "double Markov property"),
        (
            "infdiv:<n>",
            "weak infinite divisibility of information (affine constant 2.43)",
        ),
    ]
}

pub(crate) fn fresh_name(taken: &[String], want: &str) -> String {
    let mut name = want.to_string();
    while taken.iter().any(|t| t == &name) {
        name.push('\'');
    }
    name
}

/// Logical conjunction of two EIIs; the second statement's random
/// variables are renamed when they clash with the first's. Reals are
/// shared by name.
pub fn conjunction(e1: &Eii, e2: &Eii) -> Result<Eii> {
    let (n, l) = (e1.n(), e1.l());
    let (n2, l2) = (e2.n(), e2.l());
    let mut taken: Vec<String> = e1.base.rv_names().to_vec();
    taken.extend(e1.aux.iter().cloned());
    let mut rename = |name: &String| {
        let fresh = fresh_name(&taken, name);
        taken.push(fresh.clone());
        fresh
    };
    let base2: Vec<String> = e2.base.rv_names().iter().map(&mut rename).collect();
    let aux2: Vec<String> = e2.aux.iter().map(&mut rename).collect();
    let mut rvs = e1.base.rv_names().to_vec();
    rvs.extend(base2);
    let mut reals = e1.base.real_names().to_vec();
    for r in e2.base.real_names() {
        if !reals.contains(r) {
            reals.push(r.clone());
        }
    }
    let base = VarContext::new(&rvs, &reals)?;
    let mut aux = e1.aux.clone();
    aux.extend(aux2);
    // (X, U) of e1 and (Y, V) of e2 inside (X, Y, U, V)
    let pos1: Vec<usize> = (0..n).chain((0..l).map(|j| n + n2 + j)).collect();
    let pos2: Vec<usize> = (0..n2)
        .map(|i| n + i)
        .chain((0..l2).map(|j| n + n2 + l + j))
        .collect();
    let (emb1, emb2) = (
        Embedding::from_positions(pos1),
        Embedding::from_positions(pos2),
    );
    let mut premise: Vec<EntropyExpr> = e1.premise.iter().map(|r| emb1.apply(r)).collect();
    premise.extend(e2.premise.iter().map(|r| emb2.apply(r)));
    let mut cons: Vec<EntropyExpr> = e1.consequence.iter().map(|r| emb1.apply(r)).collect();
    cons.extend(e2.consequence.iter().map(|r| emb2.apply(r)));
    let x = full_mask(n);
    let y = full_mask(n + n2) & !x;
    let u = (full_mask(l) as u64) << (n + n2);
    let v = (full_mask(l2) as u64) << (n + n2 + l);
    if l > 0 && n2 > 0 {
        cons.extend(zero(&EntropyExpr::mutual_info(u as u32, y, x)));
    }
    if l2 > 0 && (n + l) > 0 {
        cons.extend(zero(&EntropyExpr::mutual_info(v as u32, x | u as u32, y)));
    }
    Eii::new(base, aux, premise, cons)
}

/// `inf over aux of objective subject to constraints >= 0`, with rows over
/// the base context followed by `aux`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    pub aux: Vec<String>,
    pub constraints: Vec<EntropyExpr>,
    pub objective: EntropyExpr,
}

impl Quantity {
    /// A plain expression (no auxiliaries).
    pub fn plain(objective: EntropyExpr) -> Self {
        Quantity {
            aux: vec![],
            constraints: vec![],
            objective,
        }
    }
}

/// The EII equivalent to `premise -> lhs >= rhs`. The premise rows are
/// over the base context followed by `lhs.aux`, which become universal.
pub fn quantity_inequality_to_eii(
    base: &VarContext,
    lhs: &Quantity,
    rhs: &Quantity,
    premise: &[EntropyExpr],
) -> Result<Eii> {
    let n = base.n();
    let mut rvs = base.rv_names().to_vec();
    rvs.extend(lhs.aux.iter().cloned());
    let univ = VarContext::new(&rvs, base.real_names())?;
    let with_lhs = univ.clone();
    for r in lhs
        .constraints
        .iter()
        .chain(std::iter::once(&lhs.objective))
        .chain(premise)
    {
        with_lhs
            .check_expr(r)
            .map_err(|e| Error::Malformed(format!("left quantity: {e}")))?;
    }
    let (rhs_ctx, _) = base.extend(&rhs.aux)?;
    for r in rhs
        .constraints
        .iter()
        .chain(std::iter::once(&rhs.objective))
    {
        rhs_ctx
            .check_expr(r)
            .map_err(|e| Error::Malformed(format!("right quantity: {e}")))?;
    }
    let nu = univ.n();
    let mut taken = rvs.clone();
    let aux: Vec<String> = rhs
        .aux
        .iter()
        .map(|a| {
            let f = fresh_name(&taken, a);
            taken.push(f.clone());
            f
        })
        .collect();
    // rhs rows: base bits stay, aux bit n+j moves to nu+j
    let shift =
        Embedding::from_positions((0..n).chain((0..rhs.aux.len()).map(|j| nu + j)).collect());
    let mut prem: Vec<EntropyExpr> = premise.to_vec();
    prem.extend(lhs.constraints.iter().cloned());
    let mut cons: Vec<EntropyExpr> = rhs.constraints.iter().map(|r| shift.apply(r)).collect();
    cons.push(&lhs.objective - &shift.apply(&rhs.objective));
    Eii::new(univ, aux, prem, cons)
}

/// How a real variable is represented in the LP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealColumn {
    /// One nonnegative column (`R >= 0` is a premise row).
    NonNegative(String),
    /// Difference of two nonnegative columns.
    Free(String),
}

impl RealColumn {
    pub fn width(&self) -> usize {
        match self {
            RealColumn::NonNegative(_) => 1,
            RealColumn::Free(_) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEncoding {
    pub eii: Eii,
    pub columns: Vec<RealColumn>,
}

impl RealEncoding {
    pub fn lp_columns(&self) -> usize {
        self.columns.iter().map(RealColumn::width).sum()
    }
}

fn is_sign_row(r: &EntropyExpr, name: &str) -> bool {
    r.h_coeffs().is_empty()
        && r.constant().is_zero()
        && r.real_coeffs().len() == 1
        && r.real_coeff(name).is_positive()
}

/// Native real-column encoding: reals stay LP variables; the ones bounded
/// below by zero in the premise get a single column.
pub fn encode_reals(e: &Eii) -> RealEncoding {
    let columns = e
        .base
        .real_names()
        .iter()
        .map(|r| {
            if e.premise.iter().any(|row| is_sign_row(row, r)) {
                RealColumn::NonNegative(r.clone())
            } else {
                RealColumn::Free(r.clone())
            }
        })
        .collect();
    RealEncoding {
        eii: e.clone(),
        columns,
    }
}

/// Replace each real by `H(Z)` (nonnegative) or `H(Z1) - H(Z2)` with fresh
/// random variables appended to the base, producing a real-free EII.
pub fn substitute_reals(e: &Eii) -> Result<Eii> {
    let enc = encode_reals(e);
    let n = e.n();
    let mut fresh: Vec<String> = Vec::new();
    let mut taken: Vec<String> = e.base.rv_names().to_vec();
    taken.extend(e.aux.iter().cloned());
    let mut image: BTreeMap<String, (u32, Option<u32>)> = BTreeMap::new();
    for c in &enc.columns {
        let (name, free) = match c {
            RealColumn::NonNegative(r) => (r, false),
            RealColumn::Free(r) => (r, true),
        };
        let mut next = |suffix: &str| {
            let f = fresh_name(&taken, &format!("Z{name}{suffix}"));
            taken.push(f.clone());
            fresh.push(f);
            fresh.len() - 1
        };
        if free {
            let a = next("p");
            let b = next("m");
            image.insert(name.clone(), (a as u32, Some(b as u32)));
        } else {
            let a = next("");
            image.insert(name.clone(), (a as u32, None));
        }
    }
    let k = fresh.len();
    let mut rvs = e.base.rv_names().to_vec();
    rvs.extend(fresh);
    let base = VarContext::rvs(&rvs)?;
    let l = e.l();
    let shift = Embedding::from_positions((0..n).chain((0..l).map(|j| n + k + j)).collect());
    let subst = |r: &EntropyExpr, shift_aux: bool| -> EntropyExpr {
        let mut out = if shift_aux {
            shift.apply(&r.entropy_part())
        } else {
            r.entropy_part()
        };
        out.add_constant(r.constant().clone());
        for (name, c) in r.real_coeffs() {
            let (a, b) = image[name];
            out.add_h(1 << (n as u32 + a), c.clone());
            if let Some(b) = b {
                out.add_h(1 << (n as u32 + b), -c.clone());
            }
        }
        out
    };
    let premise = e
        .premise
        .iter()
        .filter(|r| !e.base.real_names().iter().any(|name| is_sign_row(r, name)))
        .map(|r| subst(r, false))
        .collect();
    let cons = e.consequence.iter().map(|r| subst(r, true)).collect();
    Eii::new(base, e.aux.clone(), premise, cons)
}

/// Present/past/future variables for each sequence plus one Csiszár sum
/// identity per ordered pair of sequences, conditioned on `common`.
///
/// Variable order: `common`, then for each sequence `X_now, X_past, X_fut`.
pub fn past_future_converse_context<S: AsRef<str>>(
    sequences: &[S],
    common: &[S],
) -> Result<(VarContext, Vec<EntropyExpr>)> {
    if sequences.len() < 2 {
        return Err(Error::Malformed("need at least two sequences".into()));
    }
    let mut rvs: Vec<String> = common.iter().map(|s| s.as_ref().to_string()).collect();
    for s in sequences {
        let s = s.as_ref();
        rvs.push(format!("{s}_now"));
        rvs.push(format!("{s}_past"));
        rvs.push(format!("{s}_fut"));
    }
    let ctx = VarContext::rvs(&rvs)?;
    let w = full_mask(common.len());
    let c = common.len();
    let now = |i: usize| 1u32 << (c + 3 * i);
    let past = |i: usize| 1u32 << (c + 3 * i + 1);
    let fut = |i: usize| 1u32 << (c + 3 * i + 2);
    let mut rows = Vec::new();
    for x in 0..sequences.len() {
        for y in 0..sequences.len() {
            if x == y {
                continue;
            }
            let lhs = EntropyExpr::mutual_info(fut(x), now(y), past(y) | w);
            let rhs = EntropyExpr::mutual_info(past(y), now(x), fut(x) | w);
            rows.extend(equal(&lhs, &rhs));
        }
    }
    Ok((ctx, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{prove_cii, CiiQuery};
    use crate::rational::q;

    #[test]
    fn copy_lemma_shapes() {
        let c = copy_lemma(1, 1);
        assert_eq!(c.consequence.len(), 6);
        let full = c.full_context();
        let want = [
            zero(&full.i(&["U1"], &["Y1"], &["X1"]).unwrap()),
            equal(
                &full.h(&["U1"], &[]).unwrap(),
                &full.h(&["Y1"], &[]).unwrap(),
            ),
            equal(
                &full.h(&["X1", "U1"], &[]).unwrap(),
                &full.h(&["X1", "Y1"], &[]).unwrap(),
            ),
        ];
        for pair in want {
            for r in pair {
                assert!(c.consequence.contains(&r), "{}", full.show(&r));
            }
        }
        let c = copy_lemma(0, 1);
        assert_eq!(c.consequence.len(), 4);
        assert_eq!(copy_lemma(2, 2).consequence.len(), 2 + 2 * 4 * 3);
    }

    #[test]
    fn frl_shapes() {
        let f = frl();
        assert!(f.premise.is_empty());
        assert_eq!(f.consequence.len(), 4);
        let g = frl_with_gap(q(0));
        assert_eq!(g.consequence.len(), 5);
        // every frl row is one of the gap form's rows
        assert!(f.consequence.iter().all(|r| g.consequence.contains(r)));
    }

    #[test]
    fn double_markov_shape() {
        let d = double_markov();
        assert_eq!(d.premise.len(), 4);
        assert_eq!(d.consequence.len(), 6);
    }

    #[test]
    fn infinite_divisibility_shape() {
        let e = infinite_divisibility(1).unwrap();
        let full = e.full_context();
        let hx_u = full.h(&["X"], &["U1"]).unwrap();
        assert!(e.consequence.contains(&hx_u) && e.consequence.contains(&-&hx_u));
        let last = e.consequence.last().unwrap();
        let c = last.h_coeff(1);
        let exact = std::f64::consts::E / (std::f64::consts::E - 1.0);
        assert!((crate::rational::to_f64(&c) - exact).abs() < 1e-12);
        assert_eq!(*last.constant(), qr(243, 100));
        let e3 = infinite_divisibility(3).unwrap();
        assert_eq!(e3.consequence.len(), 2 * 3 + 2 + 1);
        assert!(infinite_divisibility(0).is_err());
    }

    #[test]
    fn conjunction_shapes() {
        let empty = Eii::new(
            VarContext::rvs::<&str>(&[]).unwrap(),
            vec![],
            vec![],
            vec![],
        )
        .unwrap();
        let f = frl();
        let c = conjunction(&f, &empty).unwrap();
        assert_eq!(c.consequence, f.consequence);
        assert_eq!(c.base.rv_names(), f.base.rv_names());
        let a = copy_lemma(0, 1);
        let a = Eii {
            base: VarContext::rvs(&["X"]).unwrap(),
            ..a
        };
        let b = a.clone();
        let ab = conjunction(&a, &b).unwrap();
        assert_eq!(ab.n(), 2);
        assert_eq!(ab.l(), 2);
        assert_eq!(ab.consequence.len(), a.consequence.len() * 2 + 4);
        assert_eq!(ab.base.rv_names()[1], "X'");
    }

    #[test]
    fn wyner_lower_bound_is_cii() {
        let base = VarContext::rvs(&["X", "Y"]).unwrap();
        let (wide, _) = base.extend(&["V"]).unwrap();
        let mut cons = Vec::new();
        cons.extend(zero(&wide.i(&["X"], &["Y"], &["V"]).unwrap()));
        let j = Quantity {
            aux: vec!["V".into()],
            constraints: cons,
            objective: wide.i(&["V"], &["X", "Y"], &[]).unwrap(),
        };
        let ixy = Quantity::plain(base.i(&["X"], &["Y"], &[]).unwrap());
        let e = quantity_inequality_to_eii(&base, &j, &ixy, &[]).unwrap();
        assert_eq!(e.l(), 0);
        assert_eq!(e.n(), 3);
        let q = CiiQuery::new(e.base.clone(), e.premise.clone(), e.consequence[0].clone());
        assert!(prove_cii(&q).unwrap().is_proved());
    }

    #[test]
    fn real_columns() {
        let base = VarContext::new(&[] as &[&str], &["R"]).unwrap();
        let mut half = EntropyExpr::real("R");
        half = half.scale(&qr(1, 2));
        let cons = equal(&EntropyExpr::h(1), &half).to_vec();
        let e = Eii::new(
            base.clone(),
            vec!["U".into()],
            vec![EntropyExpr::real("R")],
            cons.clone(),
        )
        .unwrap();
        let enc = encode_reals(&e);
        assert_eq!(enc.lp_columns(), 1);
        let free = Eii::new(base, vec!["U".into()], vec![], cons).unwrap();
        assert_eq!(encode_reals(&free).lp_columns(), 2);
        let sub = substitute_reals(&e).unwrap();
        assert_eq!(sub.n(), 1);
        assert!(sub.base.real_names().is_empty());
        assert!(sub.premise.is_empty());
    }

    #[test]
    fn csiszar_context_shape() {
        let (ctx, rows) = past_future_converse_context(&["X", "Y"], &[]).unwrap();
        assert_eq!(ctx.n(), 6);
        assert_eq!(rows.len(), 4);
        assert!(past_future_converse_context(&["X"], &[]).is_err());
    }
}
