//! Auxiliary search: prove an EII by identifying each auxiliary with a
//! joint subset of the universally quantified random variables.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{collapse_expr, CollapseMap};
use crate::entropy::{full_mask, Embedding, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{zero, Eii};
use crate::prover::{
    prove_cii_with, verify_certificate, CertCache, CiiOutcome, CiiQuery, Counterexample,
    DualCertificate, Multiplier, ProverOptions,
};
use crate::rational::{to_f64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// The expression does not depend on the variable.
    Constant,
    Unknown,
}

impl Monotonicity {
    /// `+1` increasing (or constant), `-1` decreasing, `0` unknown.
    pub fn sign(self) -> i8 {
        match self {
            Monotonicity::Increasing | Monotonicity::Constant => 1,
            Monotonicity::Decreasing => -1,
            Monotonicity::Unknown => 0,
        }
    }
}

// Can every negative coefficient be paid for by positive coefficients on
// subsets? H(Y|X_S) only shrinks as S grows, so such a transport proves
// sum_S b_S H(Y|X_S) >= 0.
fn transport_feasible(supply: &[(u32, Q)], demand: &[(u32, Q)]) -> bool {
    if demand.is_empty() {
        return true;
    }
    let total: Q = demand.iter().fold(Q::zero(), |a, (_, d)| a + d);
    let avail: Q = supply.iter().fold(Q::zero(), |a, (_, s)| a + s);
    if avail < total {
        return false;
    }
    // max flow on source -> supply -> demand -> sink; middle edges unbounded
    let ns = supply.len();
    let nd = demand.len();
    let mut sup_left: Vec<Q> = supply.iter().map(|s| s.1.clone()).collect();
    let mut dem_left: Vec<Q> = demand.iter().map(|d| d.1.clone()).collect();
    let mut flow = vec![vec![Q::zero(); nd]; ns];
    let edge = |s: usize, d: usize| supply[s].0 & !demand[d].0 == 0;
    loop {
        // BFS over residual graph: supply nodes 0..ns, demand nodes ns..ns+nd
        let mut prev: Vec<Option<usize>> = vec![None; ns + nd];
        let mut seen = vec![false; ns + nd];
        let mut queue = VecDeque::new();
        for s in 0..ns {
            if sup_left[s].is_positive() {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if u < ns {
                for d in 0..nd {
                    if edge(u, d) && !seen[ns + d] {
                        seen[ns + d] = true;
                        prev[ns + d] = Some(u);
                        if dem_left[d].is_positive() {
                            end = Some(d);
                            break;
                        }
                        queue.push_back(ns + d);
                    }
                }
                if end.is_some() {
                    break;
                }
            } else {
                let d = u - ns;
                for s in 0..ns {
                    if !seen[s] && flow[s][d].is_positive() {
                        seen[s] = true;
                        prev[s] = Some(u);
                        queue.push_back(s);
                    }
                }
            }
        }
        let Some(d_end) = end else { break };
        // collect path and bottleneck
        let mut path = vec![ns + d_end];
        let mut cur = ns + d_end;
        while let Some(p) = prev[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        let start = path[0];
        let mut bottleneck = sup_left[start].clone().min(dem_left[d_end].clone());
        for w in path.windows(2) {
            if w[0] >= ns {
                // backward edge demand -> supply
                let f = &flow[w[1]][w[0] - ns];
                if *f < bottleneck {
                    bottleneck = f.clone();
                }
            }
        }
        sup_left[start] -= &bottleneck;
        dem_left[d_end] -= &bottleneck;
        for w in path.windows(2) {
            if w[0] < ns {
                flow[w[0]][w[1] - ns] += &bottleneck;
            } else {
                flow[w[1]][w[0] - ns] -= &bottleneck;
            }
        }
    }
    dem_left.iter().all(|d| d.is_zero())
}

/// Classification from the term structure alone; exact but incomplete.
pub fn monotonicity_by_rules(expr: &EntropyExpr, var: usize) -> Monotonicity {
    let bit = 1u32 << var;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (m, c) in expr.h_coeffs() {
        if m & bit == 0 {
            continue;
        }
        if c.is_positive() {
            pos.push((*m, c.clone()));
        } else {
            neg.push((*m, -c.clone()));
        }
    }
    if pos.is_empty() && neg.is_empty() {
        return Monotonicity::Constant;
    }
    if transport_feasible(&pos, &neg) {
        Monotonicity::Increasing
    } else if transport_feasible(&neg, &pos) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Unknown
    }
}

fn monotone_delta(expr: &EntropyExpr, n: usize, var: usize) -> EntropyExpr {
    let y = 1u32 << n;
    let bit = 1u32 << var;
    let base = expr.entropy_part();
    let grown = base.map_masks(|m| if m & bit != 0 { m | y } else { m });
    &grown - &base
}

/// Decide monotonicity with the defining UII: adjoin a fresh `Y` and test
/// `b(X) <= b(.., (X_var, Y), ..)` (and the reverse) over the Shannon cone,
/// optionally under `premise` at both points.
pub fn monotonicity_by_lp(
    expr: &EntropyExpr,
    n: usize,
    var: usize,
    premise: &[EntropyExpr],
) -> Result<Monotonicity> {
    let (m, _) = monotonicity_by_lp_counted(expr, n, var, premise, &ProverOptions::default())?;
    Ok(m)
}

fn monotonicity_by_lp_counted(
    expr: &EntropyExpr,
    n: usize,
    var: usize,
    premise: &[EntropyExpr],
    opts: &ProverOptions,
) -> Result<(Monotonicity, usize)> {
    let delta = monotone_delta(expr, n, var);
    if delta.is_zero() {
        return Ok((Monotonicity::Constant, 0));
    }
    let mut reals: Vec<String> = Vec::new();
    for r in premise {
        for name in r.real_coeffs().keys() {
            if !reals.contains(name) {
                reals.push(name.clone());
            }
        }
    }
    let names: Vec<String> = (0..=n).map(|i| format!("V{i}")).collect();
    let ctx = VarContext::new(&names, &reals)?;
    let y = 1u32 << n;
    let bit = 1u32 << var;
    let mut cons: Vec<EntropyExpr> = premise.to_vec();
    cons.extend(
        premise
            .iter()
            .map(|r| r.map_masks(|m| if m & bit != 0 { m | y } else { m })),
    );
    let up = prove_cii_with(
        &CiiQuery::new(ctx.clone(), cons.clone(), delta.clone()),
        opts,
    )?;
    if up.is_proved() {
        return Ok((Monotonicity::Increasing, 1));
    }
    let down = prove_cii_with(&CiiQuery::new(ctx, cons, -delta), opts)?;
    Ok((
        if down.is_proved() {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Unknown
        },
        2,
    ))
}

/// Largest context (in random variables, before adjoining `Y`) for which the
/// LP fallback is attempted.
pub const MONOTONICITY_LP_MAX_VARS: usize = 6;

/// Rules first, then the LP check on small contexts.
pub fn monotonicity(expr: &EntropyExpr, n: usize, var: usize) -> Monotonicity {
    match monotonicity_by_rules(expr, var) {
        Monotonicity::Unknown if n <= MONOTONICITY_LP_MAX_VARS => {
            monotonicity_by_lp(expr, n, var, &[]).unwrap_or(Monotonicity::Unknown)
        }
        m => m,
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// LP solves allowed per top-level call.
    pub budget: usize,
    pub use_cache: bool,
    pub cache_capacity: usize,
    /// Copies of the premise list made available to the search.
    pub repeat: usize,
    /// Leaves allowed in a leave-one-out case tree; `None` disables it.
    pub max_cases: Option<usize>,
    pub jobs: usize,
    /// Skip candidates dominated by a failed one along monotone directions.
    pub monotone_pruning: bool,
    /// Use monotonicity conditional on the premise (LP only).
    pub conditional_monotonicity: bool,
    pub monotonicity_lp_max_vars: usize,
    pub max_candidates: usize,
    pub prover: ProverOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 20_000,
            use_cache: true,
            cache_capacity: 1024,
            repeat: 1,
            max_cases: None,
            jobs: 1,
            monotone_pruning: true,
            conditional_monotonicity: false,
            monotonicity_lp_max_vars: MONOTONICITY_LP_MAX_VARS,
            max_candidates: 2_000_000,
            prover: ProverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub lp_solves: usize,
    pub cache_hits: usize,
    pub memo_hits: usize,
    pub candidates: usize,
    pub pruned: usize,
    /// Largest number of LP variables (joint entropies plus reals) solved over.
    pub max_lp_dim: usize,
}

/// Per-auxiliary candidate bounds `lower ⊆ S_i ⊆ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichBounds {
    pub lower: Vec<u32>,
    pub upper: Vec<u32>,
}

impl SandwichBounds {
    pub fn full(n: usize, l: usize) -> Self {
        SandwichBounds {
            lower: vec![0; l],
            upper: vec![full_mask(n); l],
        }
    }

    pub fn free_count(&self) -> usize {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, up)| (up & !lo).count_ones() as usize)
            .sum()
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        a.len() == self.lower.len()
            && a.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(s, (lo, up))| s & lo == *lo && s & !up == 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SandwichOutcome {
    Bounds(SandwichBounds),
    /// The most conservative choice already fails this consequence row.
    Failure {
        row: usize,
    },
}

/// `U_i = X_{S_i}` for each auxiliary.
pub type AuxAssignment = Vec<u32>;

/// Replayable evidence that an EII holds.
#[derive(Clone, Debug, PartialEq)]
pub enum ProofCertificate {
    /// Every collapsed consequence row follows from the premise.
    Trivial {
        eii: Eii,
        assignment: AuxAssignment,
        rows: Vec<DualCertificate>,
    },
    /// A lemma instantiated at `Y_i = X_{substitution_i}`; `implication`
    /// proves the lemma's premise there and `inner` proves the augmented
    /// statement.
    Premise {
        eii: Eii,
        lemma: Eii,
        substitution: Vec<u32>,
        implication: Vec<DualCertificate>,
        inner: Box<ProofCertificate>,
    },
    /// Union over the sign of `split`.
    CaseSplit {
        eii: Eii,
        split: EntropyExpr,
        positive: Box<ProofCertificate>,
        negative: Box<ProofCertificate>,
    },
}

impl ProofCertificate {
    pub fn eii(&self) -> &Eii {
        match self {
            ProofCertificate::Trivial { eii, .. }
            | ProofCertificate::Premise { eii, .. }
            | ProofCertificate::CaseSplit { eii, .. } => eii,
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ProofCertificate::Trivial { .. } => 1,
            ProofCertificate::Premise { inner, .. } => inner.leaves(),
            ProofCertificate::CaseSplit {
                positive, negative, ..
            } => positive.leaves() + negative.leaves(),
        }
    }

    /// Assignment of the first trivial leaf.
    pub fn first_assignment(&self) -> &AuxAssignment {
        match self {
            ProofCertificate::Trivial { assignment, .. } => assignment,
            ProofCertificate::Premise { inner, .. } => inner.first_assignment(),
            ProofCertificate::CaseSplit { positive, .. } => positive.first_assignment(),
        }
    }

    pub fn premise_steps(&self) -> usize {
        match self {
            ProofCertificate::Trivial { .. } => 0,
            ProofCertificate::Premise { inner, .. } => 1 + inner.premise_steps(),
            ProofCertificate::CaseSplit {
                positive, negative, ..
            } => positive.premise_steps() + negative.premise_steps(),
        }
    }
}

/// Collapse every consequence row of `e` under `assignment`.
pub fn collapsed_rows(e: &Eii, assignment: &[u32]) -> Vec<EntropyExpr> {
    let map = CollapseMap::new(e.n(), assignment.to_vec());
    e.consequence
        .iter()
        .map(|b| collapse_expr(b, &map))
        .collect()
}

/// The augmented statement proved after instantiating `lemma` at
/// `Y_i = X_{substitution_i}`: base `(X, V)`, premise `A, C', D'` and
/// `I(V; X | Y) = 0`, consequence `B` with its auxiliaries after `V`.
pub fn premise_instance(e: &Eii, lemma: &Eii, substitution: &[u32]) -> Result<Eii> {
    if !lemma.base.real_names().is_empty() {
        return Err(Error::Malformed(
            "premise lemmas with real variables are not supported".into(),
        ));
    }
    if substitution.len() != lemma.n() {
        return Err(Error::Malformed(
            "substitution length differs from the lemma's variable count".into(),
        ));
    }
    let n = e.n();
    let lp = lemma.l();
    let mut taken: Vec<String> = e.base.rv_names().to_vec();
    taken.extend(e.aux.iter().cloned());
    let mut v_names = Vec::with_capacity(lp);
    for a in &lemma.aux {
        let mut name = a.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.push(name.clone());
        v_names.push(name);
    }
    let mut rvs = e.base.rv_names().to_vec();
    rvs.extend(v_names);
    let base = VarContext::new(&rvs, e.base.real_names())?;
    let np = lemma.n();
    let map_mask = |m: u32| {
        let mut out = 0u32;
        for (i, s) in substitution.iter().enumerate() {
            if m >> i & 1 == 1 {
                out |= s;
            }
        }
        for j in 0..lp {
            if m >> (np + j) & 1 == 1 {
                out |= 1 << (n + j);
            }
        }
        out
    };
    let mut premise = e.premise.clone();
    premise.extend(lemma.premise.iter().map(|r| r.map_masks(map_mask)));
    premise.extend(lemma.consequence.iter().map(|r| r.map_masks(map_mask)));
    if lp > 0 {
        let y = substitution.iter().fold(0, |a, s| a | s);
        let v = full_mask(n + lp) & !full_mask(n);
        premise.extend(zero(&EntropyExpr::mutual_info(v, full_mask(n), y)));
    }
    let shift = Embedding::from_positions((0..n).chain((0..e.l()).map(|j| n + lp + j)).collect());
    let consequence = e.consequence.iter().map(|r| shift.apply(r)).collect();
    Eii::new(base, e.aux.clone(), premise, consequence)
}

/// Exact replay of a certificate tree.
pub fn verify_proof_certificate(cert: &ProofCertificate) -> bool {
    match cert {
        ProofCertificate::Trivial {
            eii,
            assignment,
            rows,
        } => {
            if assignment.len() != eii.l() || rows.len() != eii.consequence.len() {
                return false;
            }
            if assignment.iter().any(|s| s & !full_mask(eii.n()) != 0) {
                return false;
            }
            collapsed_rows(eii, assignment)
                .into_iter()
                .zip(rows)
                .all(|(b, c)| {
                    verify_certificate(&CiiQuery::new(eii.base.clone(), eii.premise.clone(), b), c)
                })
        }
        ProofCertificate::Premise {
            eii,
            lemma,
            substitution,
            implication,
            inner,
        } => {
            if substitution.iter().any(|s| s & !full_mask(eii.n()) != 0) {
                return false;
            }
            let Ok(instance) = premise_instance(eii, lemma, substitution) else {
                return false;
            };
            if instance != *inner.eii() {
                return false;
            }
            let n = eii.n();
            let target: Vec<EntropyExpr> = lemma
                .premise
                .iter()
                .map(|r| {
                    r.map_masks(|m| {
                        substitution
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| m >> i & 1 == 1)
                            .fold(0, |a, (_, s)| a | s)
                    })
                })
                .collect();
            let _ = n;
            implication.len() == target.len()
                && target.into_iter().zip(implication).all(|(b, c)| {
                    verify_certificate(&CiiQuery::new(eii.base.clone(), eii.premise.clone(), b), c)
                })
                && verify_proof_certificate(inner)
        }
        ProofCertificate::CaseSplit {
            eii,
            split,
            positive,
            negative,
        } => {
            *positive.eii() == eii.with_premise_row(split.clone())
                && *negative.eii() == eii.with_premise_row(-split)
                && verify_proof_certificate(positive)
                && verify_proof_certificate(negative)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    /// The sandwich procedure rejected this consequence row.
    Sandwich {
        row: usize,
    },
    /// Every candidate within the bounds failed.
    Exhausted,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFailure {
    pub reason: FailureReason,
    pub bounds: Option<SandwichBounds>,
    /// Most consequence rows verified by a single candidate, and the total.
    pub best_coverage: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum EiiResult {
    Proved(ProofCertificate),
    Failed(SearchFailure),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EiiOutcome {
    pub result: EiiResult,
    pub stats: SearchStats,
}

impl EiiOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self.result, EiiResult::Proved(_))
    }

    pub fn certificate(&self) -> Option<&ProofCertificate> {
        match &self.result {
            EiiResult::Proved(c) => Some(c),
            EiiResult::Failed(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
enum Verdict {
    Proved(DualCertificate),
    Refuted,
}

/// LP front end for one `(context, premise)` pair: exact-query memo plus
/// the counterexample points known to satisfy the premise.
struct Oracle {
    ctx: VarContext,
    premise: Vec<EntropyExpr>,
    memo: HashMap<EntropyExpr, Verdict>,
    points: VecDeque<Counterexample>,
    capacity: usize,
}

fn point_tol(e: &EntropyExpr) -> f64 {
    to_f64(&e.max_abs_coeff()).max(1.0)
}

impl Oracle {
    fn satisfies_premise(&self, cx: &Counterexample) -> bool {
        self.premise
            .iter()
            .all(|r| cx.evaluate(r) >= -1e-9 * point_tol(r))
    }

    fn rejects(&self, b: &EntropyExpr) -> bool {
        let tol = 1e-6 * point_tol(b);
        self.points.iter().any(|p| p.evaluate(b) < -tol)
    }

    fn remember(&mut self, cx: Counterexample) {
        if self.capacity == 0 {
            return;
        }
        if self.points.len() == self.capacity {
            self.points.pop_front();
        }
        self.points.push_back(cx);
    }

    fn lookup(&self, b: &EntropyExpr, use_cache: bool) -> Option<(Verdict, bool)> {
        if let Some(v) = self.memo.get(b) {
            return Some((v.clone(), false));
        }
        if use_cache && self.rejects(b) {
            return Some((Verdict::Refuted, true));
        }
        None
    }
}

enum Evaluated {
    Known(Verdict, bool),
    Solved(CiiOutcome),
}

/// Search state shared across nested calls: options, counters and the
/// per-context counterexample pools.
pub struct Search {
    opts: SearchOptions,
    stats: SearchStats,
    pools: HashMap<VarContext, CertCache>,
    mono: HashMap<(VarContext, Vec<EntropyExpr>, usize, usize), Vec<Vec<i8>>>,
    failure: Option<SearchFailure>,
}

struct CandidateLevels {
    conservative: Vec<u32>,
    free: Vec<(usize, u32)>,
    level: usize,
    pending: VecDeque<Vec<u32>>,
    exhausted: bool,
    cap: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

impl CandidateLevels {
    /// Candidates ordered by distance from `conservative`, ties broken
    /// lexicographically by the tuple of masks.
    fn new(bounds: &SandwichBounds, conservative: Vec<u32>, cap: usize) -> Self {
        let mut free = Vec::new();
        for (i, (lo, up)) in bounds.lower.iter().zip(&bounds.upper).enumerate() {
            let f = up & !lo;
            for b in 0..32 {
                if f >> b & 1 == 1 {
                    free.push((i, 1u32 << b));
                }
            }
        }
        CandidateLevels {
            conservative,
            free,
            level: 0,
            pending: VecDeque::new(),
            exhausted: false,
            cap,
        }
    }

    fn fill(&mut self) -> bool {
        while self.pending.is_empty() {
            if self.level > self.free.len() {
                self.exhausted = true;
                return false;
            }
            let k = self.level;
            self.level += 1;
            if binomial(self.free.len(), k) > self.cap {
                self.exhausted = true;
                return false;
            }
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let mut cand = self.conservative.clone();
                for &p in &idx {
                    let (aux, bit) = self.free[p];
                    cand[aux] ^= bit;
                }
                out.push(cand);
                // next combination
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if idx[i] < self.free.len() - k + i {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                        i = usize::MAX;
                        break;
                    }
                    if i == 0 {
                        break;
                    }
                }
                if i != usize::MAX {
                    break;
                }
            }
            out.sort();
            self.pending.extend(out);
        }
        true
    }
}

impl Iterator for CandidateLevels {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.exhausted || !self.fill() {
            return None;
        }
        self.pending.pop_front()
    }
}

fn dominated_by_failure(cand: &[u32], failed: &[u32], signs: &[i8]) -> bool {
    cand.iter()
        .zip(failed)
        .zip(signs)
        .all(|((c, f), g)| match g {
            1 => c & !f == 0,
            -1 => f & !c == 0,
            _ => c == f,
        })
}

impl Search {
    pub fn new(opts: SearchOptions) -> Self {
        Search {
            opts,
            stats: SearchStats::default(),
            pools: HashMap::new(),
            mono: HashMap::new(),
            failure: None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    fn oracle(&mut self, ctx: &VarContext, premise: &[EntropyExpr]) -> Oracle {
        let mut o = Oracle {
            ctx: ctx.clone(),
            premise: premise.to_vec(),
            memo: HashMap::new(),
            points: VecDeque::new(),
            capacity: if self.opts.use_cache {
                self.opts.cache_capacity
            } else {
                0
            },
        };
        if self.opts.use_cache {
            if let Some(pool) = self.pools.get(ctx) {
                let usable: Vec<Counterexample> = pool
                    .entries()
                    .filter(|p| o.satisfies_premise(p))
                    .cloned()
                    .collect();
                for p in usable {
                    o.remember(p);
                }
            }
        }
        o
    }

    fn record(
        &mut self,
        o: &mut Oracle,
        b: &EntropyExpr,
        ev: Evaluated,
    ) -> Result<Option<DualCertificate>> {
        match ev {
            Evaluated::Known(v, from_cache) => {
                if from_cache {
                    self.stats.cache_hits += 1;
                    o.memo.insert(b.clone(), v.clone());
                } else {
                    self.stats.memo_hits += 1;
                }
                Ok(match v {
                    Verdict::Proved(c) => Some(c),
                    Verdict::Refuted => None,
                })
            }
            Evaluated::Solved(out) => {
                self.stats.lp_solves += 1;
                let dim = (1usize << o.ctx.n()) - 1 + o.ctx.real_names().len();
                self.stats.max_lp_dim = self.stats.max_lp_dim.max(dim);
                match out {
                    CiiOutcome::Proved(c) => {
                        o.memo.insert(b.clone(), Verdict::Proved(c.clone()));
                        Ok(Some(c))
                    }
                    CiiOutcome::NotProved(cx) => {
                        o.memo.insert(b.clone(), Verdict::Refuted);
                        if self.opts.use_cache {
                            let cap = self.opts.cache_capacity;
                            self.pools
                                .entry(o.ctx.clone())
                                .or_insert_with(|| CertCache::new(cap))
                                .push(cx.clone());
                            o.remember(cx);
                        }
                        Ok(None)
                    }
                }
            }
        }
    }

    fn solve(&self, o: &Oracle, b: &EntropyExpr) -> Result<CiiOutcome> {
        prove_cii_with(
            &CiiQuery::new(o.ctx.clone(), o.premise.clone(), b.clone()),
            &self.opts.prover,
        )
    }

    fn check(&mut self, o: &mut Oracle, b: &EntropyExpr) -> Result<Option<DualCertificate>> {
        if let Some((v, from_cache)) = o.lookup(b, self.opts.use_cache) {
            return self.record(o, b, Evaluated::Known(v, from_cache));
        }
        if self.stats.lp_solves >= self.opts.budget {
            return Err(Error::BudgetExceeded(format!(
                "{} LP solves",
                self.opts.budget
            )));
        }
        let out = self.solve(o, b)?;
        self.record(o, b, Evaluated::Solved(out))
    }

    fn row_signs(&mut self, e: &Eii, premise_aware: bool) -> Result<Vec<Vec<i8>>> {
        let key = (
            e.base.clone(),
            e.consequence.clone(),
            e.l(),
            premise_aware as usize,
        );
        if let Some(t) = self.mono.get(&key) {
            return Ok(t.clone());
        }
        let total = e.n() + e.l();
        let mut table = Vec::with_capacity(e.consequence.len());
        for b in &e.consequence {
            let mut row = Vec::with_capacity(e.l());
            for i in 0..e.l() {
                let var = e.n() + i;
                let mut m = monotonicity_by_rules(b, var);
                if m == Monotonicity::Unknown && total <= self.opts.monotonicity_lp_max_vars {
                    let prem: &[EntropyExpr] = if premise_aware { &e.premise } else { &[] };
                    let (lpm, solves) =
                        monotonicity_by_lp_counted(b, total, var, prem, &self.opts.prover)?;
                    self.stats.lp_solves += solves;
                    if solves > 0 {
                        self.stats.max_lp_dim = self.stats.max_lp_dim.max((1usize << total) - 1);
                    }
                    m = lpm;
                }
                row.push(m.sign());
            }
            table.push(row);
        }
        self.mono.insert(key, table.clone());
        Ok(table)
    }

    /// Bounds from the sandwich procedure; `upper_init` restricts the
    /// initial upper bounds (e.g. to bar an auxiliary's own index).
    pub fn sandwich(&mut self, e: &Eii, upper_init: Option<Vec<u32>>) -> Result<SandwichOutcome> {
        let n = e.n();
        let l = e.l();
        let mut bounds = SandwichBounds::full(n, l);
        if let Some(up) = upper_init {
            bounds.upper = up;
        }
        if l == 0 {
            return Ok(SandwichOutcome::Bounds(bounds));
        }
        let signs = self.row_signs(e, self.opts.conditional_monotonicity)?;
        let mut oracle = self.oracle(&e.base, &e.premise);
        loop {
            let mut changed = false;
            for (k, b) in e.consequence.iter().enumerate() {
                let g = &signs[k];
                if g.contains(&0) {
                    continue;
                }
                let tilde: Vec<u32> = (0..l)
                    .map(|i| {
                        if g[i] > 0 {
                            bounds.upper[i]
                        } else {
                            bounds.lower[i]
                        }
                    })
                    .collect();
                let probe_row = |a: &[u32]| collapse_expr(b, &CollapseMap::new(n, a.to_vec()));
                if self.check(&mut oracle, &probe_row(&tilde))?.is_none() {
                    return Ok(SandwichOutcome::Failure { row: k });
                }
                for i in 0..l {
                    let free = bounds.upper[i] & !bounds.lower[i];
                    for j in 0..n {
                        let bit = 1u32 << j;
                        if free & bit == 0 {
                            continue;
                        }
                        let mut probe = tilde.clone();
                        probe[i] ^= bit;
                        if self.check(&mut oracle, &probe_row(&probe))?.is_none() {
                            if g[i] > 0 {
                                bounds.lower[i] |= bit;
                            } else {
                                bounds.upper[i] &= !bit;
                            }
                            changed = true;
                            if bounds.lower[i] & !bounds.upper[i] != 0 {
                                return Ok(SandwichOutcome::Failure { row: k });
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(SandwichOutcome::Bounds(bounds))
    }

    /// Run candidates in canonical order, calling `on_success` for each one
    /// whose collapsed rows all verify; stop when it returns `true`.
    fn run_candidates(
        &mut self,
        e: &Eii,
        bounds: &SandwichBounds,
        on_success: &mut dyn FnMut(&mut Search, &[u32], Vec<DualCertificate>) -> Result<bool>,
    ) -> Result<bool> {
        let n = e.n();
        let rows = &e.consequence;
        let signs = if self.opts.monotone_pruning && e.l() > 0 {
            Some(self.row_signs(e, false)?)
        } else {
            None
        };
        let mut oracle = self.oracle(&e.base, &e.premise);
        let mut failed: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut best = 0usize;
        let mut iter =
            CandidateLevels::new(bounds, bounds.lower.clone(), self.opts.max_candidates).peekable();
        let jobs = self.opts.jobs.max(1);
        let mut seen = 0usize;
        loop {
            let mut batch: Vec<Vec<u32>> = Vec::with_capacity(jobs);
            while batch.len() < jobs {
                let Some(cand) = iter.next() else { break };
                seen += 1;
                if seen > self.opts.max_candidates {
                    return Err(Error::BudgetExceeded(format!(
                        "{} candidates",
                        self.opts.max_candidates
                    )));
                }
                if let Some(signs) = &signs {
                    if failed
                        .iter()
                        .any(|(k, f)| dominated_by_failure(&cand, f, &signs[*k]))
                    {
                        self.stats.pruned += 1;
                        continue;
                    }
                }
                batch.push(cand);
            }
            if batch.is_empty() {
                break;
            }
            self.stats.candidates += batch.len();
            let collapsed: Vec<Vec<EntropyExpr>> = batch
                .iter()
                .map(|c| {
                    let map = CollapseMap::new(n, c.clone());
                    rows.iter().map(|b| collapse_expr(b, &map)).collect()
                })
                .collect();
            let results = self.evaluate_batch(&mut oracle, &collapsed)?;
            for ((cand, rowsb), evals) in batch.iter().zip(&collapsed).zip(results) {
                let mut certs = Vec::with_capacity(rows.len());
                let mut failed_row = None;
                for (k, ev) in evals {
                    match self.record(&mut oracle, &rowsb[k], ev)? {
                        Some(c) => certs.push(c),
                        None => {
                            failed_row = Some(k);
                            break;
                        }
                    }
                }
                best = best.max(certs.len());
                match failed_row {
                    Some(k) => failed.push((k, cand.clone())),
                    None => {
                        if on_success(self, cand, certs)? {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        if let Some(f) = self.failure.as_mut() {
            f.best_coverage.0 = f.best_coverage.0.max(best);
        }
        Ok(false)
    }

    // Evaluate each candidate's rows up to its first failure. Known answers
    // come from the memo and cache; LPs of one batch run in parallel.
    fn evaluate_batch(
        &mut self,
        oracle: &mut Oracle,
        collapsed: &[Vec<EntropyExpr>],
    ) -> Result<Vec<Vec<(usize, Evaluated)>>> {
        let use_cache = self.opts.use_cache;
        if collapsed.len() == 1 {
            // sequential: settle known rows first so a cached refutation
            // costs no LP
            let rows = &collapsed[0];
            let mut known: Vec<Option<(Verdict, bool)>> =
                rows.iter().map(|b| oracle.lookup(b, use_cache)).collect();
            if let Some(k) = known
                .iter()
                .position(|v| matches!(v, Some((Verdict::Refuted, _))))
            {
                let (v, c) = known[k].take().expect("present");
                return Ok(vec![vec![(k, Evaluated::Known(v, c))]]);
            }
            let mut out = Vec::with_capacity(rows.len());
            let mut solved = 0;
            for (k, b) in rows.iter().enumerate() {
                if let Some((v, c)) = known[k].take() {
                    out.push((k, Evaluated::Known(v, c)));
                    continue;
                }
                if self.stats.lp_solves + solved >= self.opts.budget {
                    return Err(Error::BudgetExceeded(format!(
                        "{} LP solves",
                        self.opts.budget
                    )));
                }
                let res = self.solve(oracle, b)?;
                solved += 1;
                let fail = !res.is_proved();
                out.push((k, Evaluated::Solved(res)));
                if fail {
                    break;
                }
            }
            return Ok(vec![out]);
        }
        if self.stats.lp_solves >= self.opts.budget {
            return Err(Error::BudgetExceeded(format!(
                "{} LP solves",
                self.opts.budget
            )));
        }
        let oracle_ref: &Oracle = oracle;
        let this: &Search = self;
        let results: Vec<Result<Vec<(usize, Evaluated)>>> = std::thread::scope(|s| {
            let handles: Vec<_> = collapsed
                .iter()
                .map(|rows| {
                    s.spawn(move || -> Result<Vec<(usize, Evaluated)>> {
                        let mut out = Vec::with_capacity(rows.len());
                        for (k, b) in rows.iter().enumerate() {
                            if let Some((v, c)) = oracle_ref.lookup(b, use_cache) {
                                let fail = matches!(v, Verdict::Refuted);
                                out.push((k, Evaluated::Known(v, c)));
                                if fail {
                                    break;
                                }
                                continue;
                            }
                            let res = this.solve(oracle_ref, b)?;
                            let fail = !res.is_proved();
                            out.push((k, Evaluated::Solved(res)));
                            if fail {
                                break;
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        results.into_iter().collect()
    }

    /// First assignment (in canonical order) within `bounds` whose collapsed
    /// rows all verify.
    pub fn exhaust(
        &mut self,
        e: &Eii,
        bounds: &SandwichBounds,
    ) -> Result<Option<(AuxAssignment, Vec<DualCertificate>)>> {
        let mut found = None;
        self.run_candidates(e, bounds, &mut |_, a, certs| {
            found = Some((a.to_vec(), certs));
            Ok(true)
        })?;
        Ok(found)
    }

    fn plain(&mut self, e: &Eii) -> Result<Option<ProofCertificate>> {
        let bounds = match self.sandwich(e, None)? {
            SandwichOutcome::Bounds(b) => b,
            SandwichOutcome::Failure { row } => {
                self.note_failure(FailureReason::Sandwich { row }, None, e.consequence.len());
                return Ok(None);
            }
        };
        self.note_failure(
            FailureReason::Exhausted,
            Some(bounds.clone()),
            e.consequence.len(),
        );
        Ok(self
            .exhaust(e, &bounds)?
            .map(|(assignment, rows)| ProofCertificate::Trivial {
                eii: e.clone(),
                assignment,
                rows,
            }))
    }

    fn note_failure(&mut self, reason: FailureReason, bounds: Option<SandwichBounds>, rows: usize) {
        if self.failure.is_none() {
            self.failure = Some(SearchFailure {
                reason,
                bounds,
                best_coverage: (0, rows),
            });
        }
    }

    fn search(&mut self, e: &Eii, rest: &[Eii]) -> Result<Option<ProofCertificate>> {
        if let Some(c) = self.plain(e)? {
            return Ok(Some(c));
        }
        for (idx, p) in rest.iter().enumerate() {
            if rest[..idx].contains(p) {
                continue;
            }
            let remaining: Vec<Eii> = rest
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .map(|(_, x)| x.clone())
                .collect();
            if let Some(c) = self.with_premise(e, p, &remaining)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Generator over substitutions `Y = X_S` satisfying the lemma's
    /// premise, each followed by a search on the augmented statement.
    fn with_premise(
        &mut self,
        e: &Eii,
        lemma: &Eii,
        rest: &[Eii],
    ) -> Result<Option<ProofCertificate>> {
        let n = e.n();
        let np = lemma.n();
        let y_names: Vec<String> = (0..np).map(|i| format!("#Y{i}")).collect();
        let shift = Embedding::from_positions((0..np).map(|i| n + i).collect());
        let gen = Eii::new(
            e.base.clone(),
            y_names,
            e.premise.clone(),
            lemma.premise.iter().map(|r| shift.apply(r)).collect(),
        )?;
        let bounds = match self.sandwich(&gen, None)? {
            SandwichOutcome::Bounds(b) => b,
            SandwichOutcome::Failure { .. } => return Ok(None),
        };
        let mut found: Option<ProofCertificate> = None;
        let mut err: Option<Error> = None;
        self.run_candidates(&gen, &bounds, &mut |s, sub, implication| {
            let inner_e = match premise_instance(e, lemma, sub) {
                Ok(x) => x,
                Err(x) => {
                    err = Some(x);
                    return Ok(true);
                }
            };
            match s.search(&inner_e, rest)? {
                Some(inner) => {
                    found = Some(ProofCertificate::Premise {
                        eii: e.clone(),
                        lemma: lemma.clone(),
                        substitution: sub.to_vec(),
                        implication,
                        inner: Box::new(inner),
                    });
                    Ok(true)
                }
                None => Ok(false),
            }
        })?;
        if let Some(x) = err {
            return Err(x);
        }
        Ok(found)
    }

    /// Sandwich, exhaust, then premise-augmented search.
    pub fn prove(&mut self, e: &Eii, premises: &[Eii]) -> Result<EiiResult> {
        e.validate()?;
        self.failure = None;
        let mut list = Vec::new();
        for _ in 0..self.opts.repeat.max(1) {
            list.extend(premises.iter().cloned());
        }
        let res = match self.search(e, &list) {
            Ok(Some(c)) => EiiResult::Proved(c),
            Ok(None) => EiiResult::Failed(self.failure.clone().unwrap_or(SearchFailure {
                reason: FailureReason::Exhausted,
                bounds: None,
                best_coverage: (0, e.consequence.len()),
            })),
            Err(Error::BudgetExceeded(_)) => EiiResult::Failed(SearchFailure {
                reason: FailureReason::Budget,
                bounds: self.failure.as_ref().and_then(|f| f.bounds.clone()),
                best_coverage: self
                    .failure
                    .as_ref()
                    .map(|f| f.best_coverage)
                    .unwrap_or((0, e.consequence.len())),
            }),
            Err(x) => return Err(x),
        };
        Ok(res)
    }

    /// The first candidate failing exactly one row whose negation is not
    /// already implied by the premise.
    fn almost_correct(
        &mut self,
        e: &Eii,
    ) -> Result<Option<(AuxAssignment, usize, EntropyExpr, Vec<DualCertificate>)>> {
        let n = e.n();
        let bounds = SandwichBounds::full(n, e.l());
        let mut oracle = self.oracle(&e.base, &e.premise);
        for cand in CandidateLevels::new(&bounds, bounds.lower.clone(), self.opts.max_candidates) {
            self.stats.candidates += 1;
            let collapsed = collapsed_rows(e, &cand);
            let mut certs: Vec<Option<DualCertificate>> = Vec::new();
            let mut misses = Vec::new();
            for b in &collapsed {
                let r = self.check(&mut oracle, b)?;
                if r.is_none() {
                    misses.push(certs.len());
                    if misses.len() > 1 {
                        break;
                    }
                }
                certs.push(r);
            }
            if misses.len() != 1 {
                continue;
            }
            let k = misses[0];
            let c = collapsed[k].clone();
            // the other branch must strengthen the premise
            if self.check(&mut oracle, &-&c)?.is_some() {
                continue;
            }
            let m = e.premise.len();
            let mut out = Vec::with_capacity(collapsed.len());
            for (j, cert) in certs.into_iter().enumerate() {
                out.push(match cert {
                    Some(c) => c,
                    None => {
                        debug_assert_eq!(j, k);
                        DualCertificate {
                            n,
                            elemental: vec![],
                            constraints: vec![Multiplier {
                                row: m,
                                value: Q::from_integer(1.into()),
                            }],
                            slack: Q::zero(),
                        }
                    }
                });
            }
            return Ok(Some((cand, k, c, out)));
        }
        Ok(None)
    }

    /// Leave-one-out: split on the one failing row of an almost-correct
    /// assignment and recurse on the other branch.
    pub fn leave_one_out(
        &mut self,
        e: &Eii,
        premises: &[Eii],
        max_leaves: usize,
    ) -> Result<Option<ProofCertificate>> {
        let mut list = Vec::new();
        for _ in 0..self.opts.repeat.max(1) {
            list.extend(premises.iter().cloned());
        }
        self.loo(e, &list, max_leaves)
    }

    fn loo(
        &mut self,
        e: &Eii,
        premises: &[Eii],
        max_leaves: usize,
    ) -> Result<Option<ProofCertificate>> {
        if let Some(c) = self.search(e, premises)? {
            return Ok(Some(c));
        }
        if max_leaves < 2 {
            return Ok(None);
        }
        let Some((assignment, _, c, rows)) = self.almost_correct(e)? else {
            return Ok(None);
        };
        let pos_e = e.with_premise_row(c.clone());
        let neg_e = e.with_premise_row(-&c);
        let Some(neg) = self.loo(&neg_e, premises, max_leaves - 1)? else {
            return Ok(None);
        };
        Ok(Some(ProofCertificate::CaseSplit {
            eii: e.clone(),
            split: c,
            positive: Box::new(ProofCertificate::Trivial {
                eii: pos_e,
                assignment,
                rows,
            }),
            negative: Box::new(neg),
        }))
    }
}

/// Sandwich procedure with default options.
pub fn sandwich(e: &Eii) -> Result<SandwichOutcome> {
    Search::new(SearchOptions::default()).sandwich(e, None)
}

/// Cached exhaustion within `bounds`.
pub fn exhaust(
    e: &Eii,
    bounds: &SandwichBounds,
    options: &SearchOptions,
) -> Result<(Option<(AuxAssignment, Vec<DualCertificate>)>, SearchStats)> {
    let mut s = Search::new(options.clone());
    let r = s.exhaust(e, bounds)?;
    Ok((r, s.stats.clone()))
}

/// Prove `e`, trying each premise lemma (repeated `options.repeat` times)
/// when plain search fails, then leave-one-out if `options.max_cases` is set.
pub fn prove_eii(e: &Eii, premises: &[Eii], options: &SearchOptions) -> Result<EiiOutcome> {
    let mut s = Search::new(options.clone());
    let mut result = s.prove(e, premises)?;
    if let (EiiResult::Failed(f), Some(k)) = (&result, options.max_cases) {
        if f.reason != FailureReason::Budget && k >= 2 {
            match s.leave_one_out(e, premises, k) {
                Ok(Some(c)) => result = EiiResult::Proved(c),
                Ok(None) => {}
                Err(Error::BudgetExceeded(_)) => {
                    result = EiiResult::Failed(SearchFailure {
                        reason: FailureReason::Budget,
                        ..f.clone()
                    })
                }
                Err(x) => return Err(x),
            }
        }
    }
    Ok(EiiOutcome {
        result,
        stats: s.stats.clone(),
    })
}

/// Leave-one-out with `options.max_cases` leaves (4 when unset).
pub fn leave_one_out(e: &Eii, options: &SearchOptions) -> Result<EiiOutcome> {
    let mut s = Search::new(options.clone());
    let k = options.max_cases.unwrap_or(4);
    let result = match s.leave_one_out(e, &[], k) {
        Ok(Some(c)) => EiiResult::Proved(c),
        Ok(None) => EiiResult::Failed(s.failure.clone().unwrap_or(SearchFailure {
            reason: FailureReason::Exhausted,
            bounds: None,
            best_coverage: (0, e.consequence.len()),
        })),
        Err(Error::BudgetExceeded(_)) => EiiResult::Failed(SearchFailure {
            reason: FailureReason::Budget,
            bounds: None,
            best_coverage: (0, e.consequence.len()),
        }),
        Err(x) => return Err(x),
    };
    Ok(EiiOutcome {
        result,
        stats: s.stats.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{copy_lemma, equal, le};

    fn join_eii() -> Eii {
        let base = VarContext::rvs(&["X", "Y"]).unwrap();
        let mut cons = Vec::new();
        cons.extend(zero(&EntropyExpr::cond_entropy(0b011, 0b100)));
        cons.extend(zero(&EntropyExpr::cond_entropy(0b100, 0b011)));
        Eii::new(base, vec!["U".into()], vec![], cons).unwrap()
    }

    #[test]
    fn monotonicity_examples() {
        // H(X|Z) over (X, Z)
        let hxz = EntropyExpr::cond_entropy(1, 2);
        assert_eq!(monotonicity_by_rules(&hxz, 0), Monotonicity::Increasing);
        assert_eq!(monotonicity_by_rules(&hxz, 1), Monotonicity::Decreasing);
        let ixyz = EntropyExpr::mutual_info(1, 2, 4);
        assert_eq!(monotonicity_by_rules(&ixyz, 0), Monotonicity::Increasing);
        assert_eq!(monotonicity_by_rules(&ixyz, 2), Monotonicity::Unknown);
        assert_eq!(monotonicity(&ixyz, 3, 2), Monotonicity::Unknown);
        assert_eq!(
            monotonicity_by_rules(&-EntropyExpr::h(1), 0),
            Monotonicity::Decreasing
        );
        assert_eq!(
            monotonicity_by_rules(&EntropyExpr::h(2), 0),
            Monotonicity::Constant
        );
    }

    #[test]
    fn lp_monotonicity_agrees_with_rules() {
        let hxz = EntropyExpr::cond_entropy(1, 2);
        assert_eq!(
            monotonicity_by_lp(&hxz, 2, 0, &[]).unwrap(),
            Monotonicity::Increasing
        );
        assert_eq!(
            monotonicity_by_lp(&hxz, 2, 1, &[]).unwrap(),
            Monotonicity::Decreasing
        );
        assert_eq!(
            monotonicity_by_lp(&EntropyExpr::mutual_info(1, 2, 4), 3, 2, &[]).unwrap(),
            Monotonicity::Unknown
        );
    }

    #[test]
    fn sandwich_trivial_row_keeps_bounds() {
        let base = VarContext::rvs(&["X"]).unwrap();
        let e = Eii::new(
            base,
            vec!["U".into()],
            vec![],
            vec![EntropyExpr::cond_entropy(1, 2)],
        )
        .unwrap();
        match sandwich(&e).unwrap() {
            SandwichOutcome::Bounds(b) => assert_eq!(b, SandwichBounds::full(1, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sandwich_forces_inclusion() {
        // forall X exists U: H(X|U)=0 & H(U|X)=0
        let base = VarContext::rvs(&["X"]).unwrap();
        let mut cons = Vec::new();
        cons.extend(zero(&EntropyExpr::cond_entropy(1, 2)));
        cons.extend(zero(&EntropyExpr::cond_entropy(2, 1)));
        let e = Eii::new(base, vec!["U".into()], vec![], cons).unwrap();
        match sandwich(&e).unwrap() {
            SandwichOutcome::Bounds(b) => assert_eq!(b.lower, vec![1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn join_found_by_exhaust() {
        let e = join_eii();
        let out = prove_eii(&e, &[], &SearchOptions::default()).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.first_assignment(), &vec![0b11]);
        assert!(verify_proof_certificate(cert));
    }

    #[test]
    fn candidate_order() {
        let b = SandwichBounds {
            lower: vec![0, 0],
            upper: vec![0b11, 0b1],
        };
        let all: Vec<Vec<u32>> = CandidateLevels::new(&b, vec![0, 0], 1000).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(&all[1..4], &[vec![0, 1], vec![1, 0], vec![2, 0]]);
        assert_eq!(all[7], vec![3, 1]);
    }

    #[test]
    fn transport_examples() {
        let one = Q::from_integer(1.into());
        assert!(transport_feasible(
            &[(0b01, one.clone())],
            &[(0b11, one.clone())]
        ));
        assert!(!transport_feasible(
            &[(0b11, one.clone())],
            &[(0b01, one.clone())]
        ));
        let two = &one + &one;
        assert!(!transport_feasible(
            &[(0b01, one.clone())],
            &[(0b11, two.clone())]
        ));
        assert!(transport_feasible(
            &[(0b01, one.clone()), (0b10, one.clone())],
            &[(0b11, two)]
        ));
    }

    fn two_branch() -> Eii {
        let base = VarContext::rvs(&["X", "Y"]).unwrap();
        let u = EntropyExpr::h(4);
        let hx = EntropyExpr::h(1);
        let hy = EntropyExpr::h(2);
        let cons = vec![
            le(&u, &hx),
            le(&u, &hy),
            le(&(&hx + &hy), &(&u + &EntropyExpr::h(3))),
        ];
        Eii::new(base, vec!["U".into()], vec![], cons).unwrap()
    }

    #[test]
    fn leave_one_out_needs_two_leaves() {
        let e = two_branch();
        assert!(!prove_eii(&e, &[], &SearchOptions::default())
            .unwrap()
            .is_proved());
        let opts = SearchOptions {
            max_cases: Some(1),
            ..SearchOptions::default()
        };
        assert!(!prove_eii(&e, &[], &opts).unwrap().is_proved());
        let opts = SearchOptions {
            max_cases: Some(2),
            ..SearchOptions::default()
        };
        let out = prove_eii(&e, &[], &opts).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.leaves(), 2);
        assert!(verify_proof_certificate(cert));
    }

    #[test]
    fn repeated_premise() {
        // two independent copies need two applications of the copy lemma
        let base = VarContext::rvs(&["X", "Y"]).unwrap();
        let (u1, u2) = (4u32, 8u32);
        let mut cons = Vec::new();
        cons.extend(zero(&EntropyExpr::mutual_info(u1, 1, 0)));
        cons.extend(equal(&EntropyExpr::h(u1), &EntropyExpr::h(1)));
        cons.extend(zero(&EntropyExpr::mutual_info(u2, 1 | 2 | u1, 0)));
        cons.extend(equal(&EntropyExpr::h(u2), &EntropyExpr::h(2)));
        let e = Eii::new(base, vec!["U1".into(), "U2".into()], vec![], cons).unwrap();
        let lemma = copy_lemma(0, 1);
        let once = prove_eii(&e, &[lemma.clone()], &SearchOptions::default()).unwrap();
        assert!(!once.is_proved());
        let opts = SearchOptions {
            repeat: 2,
            ..SearchOptions::default()
        };
        let twice = prove_eii(&e, &[lemma], &opts).unwrap();
        let cert = twice.certificate().expect("proved with two copies");
        assert_eq!(cert.premise_steps(), 2);
        assert!(verify_proof_certificate(cert));
    }
}
