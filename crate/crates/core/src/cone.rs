//! Elemental description of the Shannon cone and coordinate maps between
//! contexts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::entropy::{full_mask, Embedding, EntropyExpr, VarContext};
use crate::error::Result;

/// The rows `expr >= 0` cutting out the Shannon cone on `n` variables.
#[derive(Clone, Debug)]
pub struct ConeDescription {
    pub n: usize,
    pub rows: Arc<Vec<EntropyExpr>>,
}

/// `n + C(n,2) 2^(n-2)` for `n >= 2`, `n` otherwise.
pub fn elemental_count(n: usize) -> usize {
    if n < 2 {
        n
    } else {
        n + n * (n - 1) / 2 * (1usize << (n - 2))
    }
}

fn generate(n: usize) -> Vec<EntropyExpr> {
    let full = full_mask(n);
    let mut rows = Vec::with_capacity(elemental_count(n));
    for i in 0..n {
        rows.push(EntropyExpr::cond_entropy(1 << i, full & !(1 << i)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let rest = full & !(1 << i) & !(1 << j);
            // all subsets of `rest` in increasing order
            let mut k = 0u32;
            loop {
                rows.push(EntropyExpr::mutual_info(1 << i, 1 << j, k));
                if k == rest {
                    break;
                }
                k = (k.wrapping_sub(rest)) & rest;
            }
        }
    }
    rows
}

fn memo() -> &'static Mutex<HashMap<usize, Arc<Vec<EntropyExpr>>>> {
    static TABLE: OnceLock<Mutex<HashMap<usize, Arc<Vec<EntropyExpr>>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Elemental inequalities `H(X_i | X_rest) >= 0` and `I(X_i; X_j | X_K) >= 0`.
/// Memoized per `n`; the row order is fixed so certificates can refer to
/// rows by index.
pub fn elemental_inequalities(n: usize) -> ConeDescription {
    let mut table = memo().lock().expect("cone table poisoned");
    let rows = table
        .entry(n)
        .or_insert_with(|| Arc::new(generate(n)))
        .clone();
    ConeDescription { n, rows }
}

/// Identification of each auxiliary `U_i` (positions `n..n+l`) with the
/// joint variable `X_{S_i}` of the base context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CollapseMap {
    pub n: usize,
    pub assignment: Vec<u32>,
}

impl CollapseMap {
    pub fn new(n: usize, assignment: Vec<u32>) -> Self {
        CollapseMap { n, assignment }
    }

    pub fn l(&self) -> usize {
        self.assignment.len()
    }

    pub fn collapse_mask(&self, mask: u32) -> u32 {
        let base = mask & full_mask(self.n);
        let mut out = base;
        for (i, s) in self.assignment.iter().enumerate() {
            if mask >> (self.n + i) & 1 == 1 {
                out |= s;
            }
        }
        out
    }
}

/// Rewrite an expression over `(X^n, U^l)` as one over `X^n` by summing the
/// coefficients of coordinates that coincide once `U_i = X_{S_i}`.
pub fn collapse_expr(b: &EntropyExpr, map: &CollapseMap) -> EntropyExpr {
    b.map_masks(|m| map.collapse_mask(m))
}

/// Re-express `b` over `from` in the wider context `to`, matching random
/// variables by name.
pub fn embed_expr(b: &EntropyExpr, from: &VarContext, to: &VarContext) -> Result<EntropyExpr> {
    let emb = Embedding::between(from, to)?;
    Ok(emb.apply(b))
}
