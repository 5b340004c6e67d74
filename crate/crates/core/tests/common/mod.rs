//! Helpers shared by the integration tests.

use std::collections::BTreeMap;

use infoprove::entropy::EntropyExpr;
use infoprove::rational::Q;
use num_traits::{Signed, Zero};

pub fn value(row: &EntropyExpr, at: &BTreeMap<&str, Q>) -> Q {
    let mut acc = row.constant().clone();
    for (name, c) in row.real_coeffs() {
        acc += c * &at[name.as_str()];
    }
    acc
}

/// Is there a `T` with every row nonnegative at `at`?
pub fn projected(rows: &[EntropyExpr], at: &BTreeMap<&str, Q>) -> bool {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for r in rows {
        let c = r.real_coeff("T");
        let rest = value(&r.without_real("T"), at);
        if c.is_zero() {
            if rest.is_negative() {
                return false;
            }
        } else if c.is_positive() {
            let b = -rest / c;
            lo = Some(lo.map_or(b.clone(), |x| x.max(b)));
        } else {
            let b = rest / -c;
            hi = Some(hi.map_or(b.clone(), |x| x.min(b)));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}
