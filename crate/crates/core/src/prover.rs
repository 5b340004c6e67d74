//! Linear-programming prover for conditional information inequalities.
//!
//! A query asks whether `goal >= 0` follows from the Shannon cone together
//! with the constraint rows. The prover decides this with a floating-point
//! LP and then re-derives an exact rational certificate
//! `goal = sum_k lambda_k row_k + slack` with every multiplier nonnegative.
//! A `Proved` answer is only returned when that identity checks exactly.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::elemental_inequalities;
use crate::entropy::{full_mask, EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::rational::{approximate, serde_q, to_f64, Q};
use crate::simplex::{cone_membership, LpOptions, Membership, SparseCol};

/// `forall X: constraints >= 0 -> goal >= 0`, equalities already split.
#[derive(Clone, Debug, PartialEq)]
pub struct CiiQuery {
    pub context: VarContext,
    pub constraints: Vec<EntropyExpr>,
    pub goal: EntropyExpr,
}

impl CiiQuery {
    pub fn new(context: VarContext, constraints: Vec<EntropyExpr>, goal: EntropyExpr) -> Self {
        CiiQuery {
            context,
            constraints,
            goal,
        }
    }

    pub fn unconditional(context: VarContext, goal: EntropyExpr) -> Self {
        CiiQuery {
            context,
            constraints: vec![],
            goal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub row: usize,
    #[serde(with = "serde_q")]
    pub value: Q,
}

/// Exact conic-combination witness for a proved row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    /// Number of random variables of the cone the elemental indices refer to.
    pub n: usize,
    pub elemental: Vec<Multiplier>,
    pub constraints: Vec<Multiplier>,
    #[serde(with = "serde_q")]
    pub slack: Q,
}

impl DualCertificate {
    /// `sum lambda_k row_k + slack` as an expression.
    pub fn combination(&self, constraints: &[EntropyExpr]) -> Option<EntropyExpr> {
        let cone = elemental_inequalities(self.n);
        let mut acc = EntropyExpr::constant_term(self.slack.clone());
        for m in &self.elemental {
            acc += &cone.rows.get(m.row)?.scale(&m.value);
        }
        for m in &self.constraints {
            acc += &constraints.get(m.row)?.scale(&m.value);
        }
        Some(acc)
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.slack.is_negative()
            && self
                .elemental
                .iter()
                .chain(self.constraints.iter())
                .all(|m| !m.value.is_negative())
    }
}

/// A point of the Shannon cone (in homogeneous coordinates) that satisfies
/// every constraint row but makes the goal negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    /// Dense joint entropies, index 0 is the empty set.
    pub h: Vec<f64>,
    pub reals: BTreeMap<String, f64>,
    /// Weight of the constant term; 1 for an affine point, 0 for a
    /// recession direction.
    pub scale: f64,
    pub value: f64,
}

impl Counterexample {
    pub fn evaluate(&self, e: &EntropyExpr) -> f64 {
        let mut acc = to_f64(e.constant()) * self.scale;
        for (m, c) in e.h_coeffs() {
            acc += to_f64(c) * self.h.get(*m as usize).copied().unwrap_or(0.0);
        }
        for (r, c) in e.real_coeffs() {
            acc += to_f64(c) * self.reals.get(r).copied().unwrap_or(0.0);
        }
        acc
    }

    pub fn full_entropy(&self) -> f64 {
        self.h[full_mask(self.n) as usize]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CiiOutcome {
    Proved(DualCertificate),
    NotProved(Counterexample),
}

impl CiiOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, CiiOutcome::Proved(_))
    }
}

#[derive(Clone, Debug)]
pub struct ProverOptions {
    pub tolerance: f64,
    pub max_denominator: i64,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            tolerance: 1e-8,
            max_denominator: 1_000_000,
        }
    }
}

struct Layout {
    n: usize,
    reals: Vec<String>,
}

impl Layout {
    fn h_dim(&self) -> usize {
        (1usize << self.n) - 1
    }

    fn dim(&self) -> usize {
        self.h_dim() + self.reals.len() + 1
    }

    fn constant_index(&self) -> usize {
        self.dim() - 1
    }

    fn column(&self, e: &EntropyExpr, scale: f64) -> SparseCol {
        let mut col: SparseCol = e
            .h_coeffs()
            .iter()
            .map(|(m, c)| (*m as usize - 1, to_f64(c) * scale))
            .collect();
        for (r, c) in e.real_coeffs() {
            let idx = self
                .reals
                .iter()
                .position(|x| x == r)
                .expect("real checked against context");
            col.push((self.h_dim() + idx, to_f64(c) * scale));
        }
        if !e.constant().is_zero() {
            col.push((self.constant_index(), to_f64(e.constant()) * scale));
        }
        col
    }

    fn dense(&self, e: &EntropyExpr, scale: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for (i, x) in self.column(e, scale) {
            v[i] += x;
        }
        v
    }
}

fn elemental_columns(n: usize) -> Arc<Vec<SparseCol>> {
    static TABLE: OnceLock<Mutex<HashMap<usize, Arc<Vec<SparseCol>>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = table.lock().expect("column table poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let cone = elemental_inequalities(n);
            Arc::new(
                cone.rows
                    .iter()
                    .map(|r| {
                        r.h_coeffs()
                            .iter()
                            .map(|(m, c)| (*m as usize - 1, to_f64(c)))
                            .collect()
                    })
                    .collect(),
            )
        })
        .clone()
}

fn check_query(q: &CiiQuery) -> Result<()> {
    for e in q.constraints.iter().chain(std::iter::once(&q.goal)) {
        q.context.check_expr(e)?;
    }
    Ok(())
}

/// Decide `constraints -> goal` over the Shannon cone.
pub fn prove_cii(q: &CiiQuery) -> Result<CiiOutcome> {
    prove_cii_with(q, &ProverOptions::default())
}

/// LPs with more coordinates than this use the sparse solver.
pub const SPARSE_LP_DIM: usize = 160;

pub fn prove_cii_with(q: &CiiQuery, opts: &ProverOptions) -> Result<CiiOutcome> {
    check_query(q)?;
    let n = q.context.n();
    // every real that may appear; context order keeps columns deterministic
    let layout = Layout {
        n,
        reals: q.context.real_names().to_vec(),
    };
    let cone_cols = elemental_columns(n);
    let goal_scale = to_f64(&q.goal.max_abs_coeff());
    if goal_scale == 0.0 {
        // the zero functional is trivially nonnegative
        return Ok(CiiOutcome::Proved(DualCertificate {
            n,
            elemental: vec![],
            constraints: vec![],
            slack: Q::zero(),
        }));
    }
    let target = layout.dense(&q.goal, 1.0 / goal_scale);
    let mut columns: Vec<SparseCol> = Vec::with_capacity(cone_cols.len() + q.constraints.len() + 1);
    columns.extend(cone_cols.iter().cloned());
    let mut col_scales = Vec::with_capacity(q.constraints.len());
    for c in &q.constraints {
        let s = to_f64(&c.max_abs_coeff());
        let s = if s == 0.0 { 1.0 } else { s };
        col_scales.push(s);
        columns.push(layout.column(c, 1.0 / s));
    }
    columns.push(vec![(layout.constant_index(), 1.0)]);
    let n_cone = cone_cols.len();
    let n_cons = q.constraints.len();

    let attempts = [
        LpOptions {
            feasibility_tol: opts.tolerance,
            ..LpOptions::default()
        },
        LpOptions {
            feasibility_tol: opts.tolerance * 1e-3,
            pivot_tol: 1e-11,
            max_iterations: None,
        },
    ];
    for lp in &attempts {
        let mem = if layout.dim() > SPARSE_LP_DIM {
            crate::simplex::cone_membership_sparse(layout.dim(), &columns, &target, lp)?
        } else {
            cone_membership(layout.dim(), &columns, &target, lp)?
        };
        match mem {
            Membership::Outside { point, .. } => {
                return Ok(CiiOutcome::NotProved(counterexample(
                    &layout, &point, &q.goal,
                )));
            }
            Membership::Inside { weights, basis } => {
                let approx: Vec<(usize, f64)> = weights
                    .iter()
                    .map(|&(j, w)| {
                        let s = if j >= n_cone && j < n_cone + n_cons {
                            col_scales[j - n_cone]
                        } else {
                            1.0
                        };
                        (j, w * goal_scale / s)
                    })
                    .collect();
                let split = |vals: Vec<(usize, Q)>| {
                    let mut cert = DualCertificate {
                        n,
                        elemental: vec![],
                        constraints: vec![],
                        slack: Q::zero(),
                    };
                    for (j, v) in vals {
                        if v.is_zero() {
                            continue;
                        }
                        if j < n_cone {
                            cert.elemental.push(Multiplier { row: j, value: v });
                        } else if j < n_cone + n_cons {
                            cert.constraints.push(Multiplier {
                                row: j - n_cone,
                                value: v,
                            });
                        } else {
                            cert.slack += v;
                        }
                    }
                    cert
                };
                if let Some(rounded) = round_weights(&approx, opts.max_denominator) {
                    let cert = split(rounded);
                    if verify_certificate(q, &cert) {
                        return Ok(CiiOutcome::Proved(cert));
                    }
                }
                let exact_cols: Vec<usize> = {
                    let mut s: Vec<usize> = approx
                        .iter()
                        .filter(|(_, w)| *w > 1e-12)
                        .map(|(j, _)| *j)
                        .collect();
                    if s.is_empty() {
                        s = basis.clone();
                    }
                    s
                };
                for cols in [exact_cols, basis] {
                    if let Some(vals) = exact_combination(q, n_cone, &cols) {
                        let cert = split(vals);
                        if verify_certificate(q, &cert) {
                            return Ok(CiiOutcome::Proved(cert));
                        }
                    }
                }
            }
        }
    }
    Err(Error::SolverFailure(
        "LP reported membership but no exact certificate could be recovered".into(),
    ))
}

fn round_weights(approx: &[(usize, f64)], max_den: i64) -> Option<Vec<(usize, Q)>> {
    approx
        .iter()
        .filter(|(_, w)| w.abs() > 1e-10)
        .map(|&(j, w)| approximate(w, max_den).map(|r| (j, r)))
        .collect()
}

fn row_expr(q: &CiiQuery, n_cone: usize, j: usize) -> EntropyExpr {
    if j < n_cone {
        elemental_inequalities(q.context.n()).rows[j].clone()
    } else if j < n_cone + q.constraints.len() {
        q.constraints[j - n_cone].clone()
    } else {
        EntropyExpr::constant_term(Q::from_integer(1.into()))
    }
}

/// Solve `sum_{j in cols} x_j row_j = goal` exactly; `None` when the
/// system is inconsistent or the solution has a negative entry.
fn exact_combination(q: &CiiQuery, n_cone: usize, cols: &[usize]) -> Option<Vec<(usize, Q)>> {
    #[derive(PartialEq, Eq, PartialOrd, Ord, Clone)]
    enum Key {
        H(u32),
        R(String),
        C,
    }
    let rows: Vec<EntropyExpr> = cols.iter().map(|&j| row_expr(q, n_cone, j)).collect();
    let mut keys: BTreeMap<Key, usize> = BTreeMap::new();
    let mut register = |e: &EntropyExpr| {
        for m in e.h_coeffs().keys() {
            let len = keys.len();
            keys.entry(Key::H(*m)).or_insert(len);
        }
        for r in e.real_coeffs().keys() {
            let len = keys.len();
            keys.entry(Key::R(r.clone())).or_insert(len);
        }
        if !e.constant().is_zero() {
            let len = keys.len();
            keys.entry(Key::C).or_insert(len);
        }
    };
    for r in &rows {
        register(r);
    }
    register(&q.goal);
    let k = cols.len();
    let mut mat: Vec<Vec<Q>> = vec![vec![Q::zero(); k + 1]; keys.len()];
    let fill = |mat: &mut Vec<Vec<Q>>, e: &EntropyExpr, col: usize| {
        for (m, c) in e.h_coeffs() {
            mat[keys[&Key::H(*m)]][col] = c.clone();
        }
        for (r, c) in e.real_coeffs() {
            mat[keys[&Key::R(r.clone())]][col] = c.clone();
        }
        if !e.constant().is_zero() {
            mat[keys[&Key::C]][col] = e.constant().clone();
        }
    };
    for (c, r) in rows.iter().enumerate() {
        fill(&mut mat, r, c);
    }
    fill(&mut mat, &q.goal, k);
    let sol = crate::linalg::solve_consistent(mat, k)?;
    if sol.iter().any(|x| x.is_negative()) {
        return None;
    }
    Some(cols.iter().copied().zip(sol).collect())
}

fn counterexample(layout: &Layout, point: &[f64], goal: &EntropyExpr) -> Counterexample {
    let mut h = vec![0.0; 1 << layout.n];
    let size = 1usize << layout.n;
    h[1..size].copy_from_slice(&point[..size - 1]);
    let mut reals: BTreeMap<String, f64> = BTreeMap::new();
    for (i, r) in layout.reals.iter().enumerate() {
        reals.insert(r.clone(), point[layout.h_dim() + i]);
    }
    let scale = point[layout.constant_index()].max(0.0);
    let norm = h
        .iter()
        .chain(reals.values())
        .chain(std::iter::once(&scale))
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let norm = if norm > 0.0 { norm } else { 1.0 };
    for v in h.iter_mut() {
        *v /= norm;
    }
    for v in reals.values_mut() {
        *v /= norm;
    }
    let mut cx = Counterexample {
        n: layout.n,
        h,
        reals,
        scale: scale / norm,
        value: 0.0,
    };
    cx.value = cx.evaluate(goal);
    cx
}

/// Exact check of `goal = sum lambda row + slack` with `lambda >= 0`.
pub fn verify_certificate(q: &CiiQuery, cert: &DualCertificate) -> bool {
    if cert.n != q.context.n() || !cert.is_nonnegative() {
        return false;
    }
    match cert.combination(&q.constraints) {
        Some(sum) => sum == q.goal,
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemOutcome {
    Proved(Vec<DualCertificate>),
    NotProved {
        row: usize,
        counterexample: Counterexample,
    },
}

/// Prove each row of `goals` from `constraints`; stops at the first row
/// that is not provable.
pub fn prove_system(
    context: &VarContext,
    constraints: &[EntropyExpr],
    goals: &[EntropyExpr],
) -> Result<SystemOutcome> {
    let mut certs = Vec::with_capacity(goals.len());
    for (row, g) in goals.iter().enumerate() {
        let q = CiiQuery::new(context.clone(), constraints.to_vec(), g.clone());
        match prove_cii(&q)? {
            CiiOutcome::Proved(c) => certs.push(c),
            CiiOutcome::NotProved(counterexample) => {
                return Ok(SystemOutcome::NotProved {
                    row,
                    counterexample,
                })
            }
        }
    }
    Ok(SystemOutcome::Proved(certs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheVerdict {
    RejectedByCache,
    Unknown,
}

/// Bounded FIFO list of counterexample points collected for one fixed
/// `(context, constraints)` pair.
#[derive(Clone, Debug)]
pub struct CertCache {
    capacity: usize,
    enabled: bool,
    entries: VecDeque<Counterexample>,
    hits: usize,
}

impl Default for CertCache {
    fn default() -> Self {
        CertCache::new(1024)
    }
}

impl CertCache {
    pub fn new(capacity: usize) -> Self {
        CertCache {
            capacity,
            enabled: true,
            entries: VecDeque::new(),
            hits: 0,
        }
    }

    pub fn disabled() -> Self {
        CertCache {
            capacity: 0,
            enabled: false,
            entries: VecDeque::new(),
            hits: 0,
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn entries(&self) -> impl Iterator<Item = &Counterexample> {
        self.entries.iter()
    }

    pub fn push(&mut self, cx: Counterexample) {
        if !self.enabled || self.capacity == 0 {
            return;
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(cx);
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Index of the first cached point on which `b` is clearly negative.
    pub fn find_violation(&self, b: &EntropyExpr) -> Option<usize> {
        let tol = 1e-7 * to_f64(&b.max_abs_coeff()).max(1.0);
        self.entries.iter().position(|cx| cx.evaluate(b) < -tol)
    }

    pub fn record_hit(&mut self) {
        self.hits += 1;
    }
}

/// Reject `b` without solving an LP when a cached point violates it.
pub fn cached_check(b: &EntropyExpr, cache: &CertCache) -> CacheVerdict {
    match cache.find_violation(b) {
        Some(_) => CacheVerdict::RejectedByCache,
        None => CacheVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn xyz() -> VarContext {
        VarContext::rvs(&["X", "Y", "Z"]).unwrap()
    }

    #[test]
    fn elemental_goal_is_proved() {
        let ctx = xyz();
        let g = ctx.i(&["X"], &["Y"], &[]).unwrap();
        let q = CiiQuery::unconditional(ctx, g);
        match prove_cii(&q).unwrap() {
            CiiOutcome::Proved(c) => assert!(verify_certificate(&q, &c)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_rule_conditional() {
        let ctx = xyz();
        let ixz = ctx.i(&["X"], &["Z"], &[]).unwrap();
        let ixy_z = ctx.i(&["X"], &["Y"], &["Z"]).unwrap();
        let cons = vec![ixz.clone(), -&ixz, ixy_z.clone(), -&ixy_z];
        let goal = -ctx.i(&["X"], &["Y", "Z"], &[]).unwrap();
        let q = CiiQuery::new(ctx, cons, goal);
        assert!(prove_cii(&q).unwrap().is_proved());
    }

    #[test]
    fn negative_entropy_not_proved() {
        let ctx = xyz();
        let q = CiiQuery::unconditional(ctx.clone(), -ctx.h(&["X"], &[]).unwrap());
        match prove_cii(&q).unwrap() {
            CiiOutcome::NotProved(cx) => {
                assert!(cx.value < 0.0);
                assert!(cx.full_entropy() <= 1.0 + 1e-8);
                for r in elemental_inequalities(3).rows.iter() {
                    assert!(cx.evaluate(r) >= -1e-8);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn perturbed_certificate_fails() {
        let ctx = xyz();
        let g = ctx.h(&["X", "Y"], &[]).unwrap();
        let q = CiiQuery::unconditional(ctx, g);
        let CiiOutcome::Proved(mut c) = prove_cii(&q).unwrap() else {
            panic!()
        };
        assert!(verify_certificate(&q, &c));
        c.elemental[0].value += qr(1, 1000);
        assert!(!verify_certificate(&q, &c));
    }

    #[test]
    fn affine_goal_uses_slack() {
        let ctx = VarContext::new(&["X"], &["R"]).unwrap();
        // R >= H(X) + 1 implies R - H(X) >= 0
        let mut prem = EntropyExpr::real("R");
        prem += &(-&EntropyExpr::h(1));
        prem.add_constant(q(-1));
        let mut goal = EntropyExpr::real("R");
        goal += &(-&EntropyExpr::h(1));
        let qry = CiiQuery::new(ctx, vec![prem], goal);
        match prove_cii(&qry).unwrap() {
            CiiOutcome::Proved(c) => {
                assert_eq!(c.slack, q(1));
                assert!(verify_certificate(&qry, &c));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_affine_goal_is_not_proved() {
        // 5 - H(X) >= 0 must not be proved
        let ctx = VarContext::rvs(&["X"]).unwrap();
        let mut goal = -EntropyExpr::h(1);
        goal.add_constant(q(5));
        let qry = CiiQuery::unconditional(ctx, goal);
        assert!(!prove_cii(&qry).unwrap().is_proved());
    }

    #[test]
    fn cache_examples() {
        let mut cache = CertCache::default();
        let b = &EntropyExpr::h(1) - &EntropyExpr::h(2);
        assert_eq!(cached_check(&b, &cache), CacheVerdict::Unknown);
        cache.push(Counterexample {
            n: 2,
            h: vec![0.0, 0.0, 1.0, 1.0],
            reals: BTreeMap::new(),
            scale: 0.0,
            value: -1.0,
        });
        assert_eq!(cached_check(&b, &cache), CacheVerdict::RejectedByCache);
        assert_eq!(
            cached_check(&EntropyExpr::h(2), &cache),
            CacheVerdict::Unknown
        );
    }

    #[test]
    fn system_reports_failing_row() {
        let ctx = xyz();
        assert!(
            matches!(prove_system(&ctx, &[], &[]).unwrap(), SystemOutcome::Proved(v) if v.is_empty())
        );
        let rows = elemental_inequalities(3).rows.to_vec();
        assert!(matches!(
            prove_system(&ctx, &[], &rows).unwrap(),
            SystemOutcome::Proved(_)
        ));
        let goals = vec![EntropyExpr::h(1), -EntropyExpr::h(1), EntropyExpr::h(2)];
        match prove_system(&ctx, &[], &goals).unwrap() {
            SystemOutcome::NotProved { row, .. } => assert_eq!(row, 1),
            other => panic!("{other:?}"),
        }
    }
}
